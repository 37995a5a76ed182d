//! Scalar regimes.
//!
//! Every geometric object in this crate is generic over a [`Field`]: either
//! [`Complex64`] (floating, compared with a tolerance) or [`ExactComplex`]
//! (pairs of arbitrary-precision rationals, compared exactly). The exact
//! regime covers q = ±1 with rational metric values; everything else runs in
//! floating point.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
pub use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{QrgError, Result};

/// Complex number with exact rational real and imaginary parts.
pub type ExactComplex = Complex<BigRational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Exact,
    Floating,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Exact => "exact",
            Regime::Floating => "floating",
        }
    }
}

/// Equality and residual tolerances for the floating regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Used by [`approx_equal`] and by structural checks.
    pub eq: f64,
    /// Used for residuals of closed-form identities.
    pub residual: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eq: 1e-9,
            residual: 1e-12,
        }
    }
}

/// The arithmetic a coefficient field must provide.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const REGIME: Regime;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// `n / d`; `d` must be nonzero.
    fn from_ratio(n: i64, d: i64) -> Self;
    /// Converts a floating complex value. For the exact regime the binary
    /// value of each finite part is represented exactly.
    fn from_c64(z: Complex64) -> Option<Self>;
    /// Value of a unit-circle phase, if representable in this regime.
    fn from_phase(p: &Phase) -> Option<Self>;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_c64(&self) -> Complex64;
    /// Exact zero test in the exact regime, `|x| <= tol` otherwise.
    fn near_zero(&self, tol: f64) -> bool;

    fn from_f64(x: f64) -> Option<Self> {
        Self::from_c64(Complex64::new(x, 0.0))
    }

    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn imag_unit() -> Self {
        Self::from_c64(Complex64::new(0.0, 1.0)).expect("i is finite")
    }
}

impl Field for Complex64 {
    const REGIME: Regime = Regime::Floating;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Complex64::new(n as f64 / d as f64, 0.0)
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(z)
    }
    fn from_phase(p: &Phase) -> Option<Self> {
        Some(p.value())
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn near_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
}

fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl Field for ExactComplex {
    const REGIME: Regime = Regime::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(n), BigInt::from(d)),
            BigRational::zero(),
        )
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(Complex::new(rational_from_f64(z.re)?, rational_from_f64(z.im)?))
    }
    fn from_phase(p: &Phase) -> Option<Self> {
        p.exact_sign().map(Self::from_i64)
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn near_zero(&self, _tol: f64) -> bool {
        Field::is_zero(self)
    }
}

/// A scalar tagged with its regime, for callers that mix regimes at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(ExactComplex),
    Float(Complex64),
}

impl Scalar {
    pub fn regime(&self) -> Regime {
        match self {
            Scalar::Exact(_) => Regime::Exact,
            Scalar::Float(_) => Regime::Floating,
        }
    }

    pub fn exact_ratio(n: i64, d: i64) -> Scalar {
        Scalar::Exact(ExactComplex::from_ratio(n, d))
    }

    pub fn float(re: f64, im: f64) -> Scalar {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => z.to_c64(),
            Scalar::Float(z) => *z,
        }
    }
}

/// Exact regime: identical values. Floating regime: `|x - y| <= tol.eq`.
pub fn approx_equal(x: &Scalar, y: &Scalar, tol: &Tolerance) -> Result<bool> {
    match (x, y) {
        (Scalar::Exact(a), Scalar::Exact(b)) => Ok(a == b),
        (Scalar::Float(a), Scalar::Float(b)) => Ok((a - b).norm() <= tol.eq),
        _ => Err(QrgError::RegimeMismatch {
            left: x.regime().name(),
            right: y.regime().name(),
        }),
    }
}

/// A unit-circle value q = e^{iθ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    theta: f64,
    value: Complex64,
}

/// Builds q = e^{iθ}. θ = 0 and θ = π (mod 2π) give exactly ±1.
pub fn make_phase(theta: f64) -> Result<Phase> {
    if !theta.is_finite() {
        return Err(QrgError::InvalidInput(format!(
            "phase angle must be finite, got {theta}"
        )));
    }
    let reduced = theta.rem_euclid(2.0 * PI);
    let value = if reduced == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if reduced == PI {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, theta)
    };
    Ok(Phase { theta, value })
}

impl Phase {
    pub fn one() -> Phase {
        Phase {
            theta: 0.0,
            value: Complex64::new(1.0, 0.0),
        }
    }

    pub fn minus_one() -> Phase {
        Phase {
            theta: PI,
            value: Complex64::new(-1.0, 0.0),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn inverse(&self) -> Phase {
        Phase {
            theta: -self.theta,
            value: self.value.conj(),
        }
    }

    /// `Some(±1)` when the phase is exactly q = ±1.
    pub fn exact_sign(&self) -> Option<i64> {
        if self.value.im != 0.0 {
            return None;
        }
        if self.value.re == 1.0 {
            Some(1)
        } else if self.value.re == -1.0 {
            Some(-1)
        } else {
            None
        }
    }

    pub fn exact(&self) -> Option<ExactComplex> {
        ExactComplex::from_phase(self)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(i{})", self.theta)
    }
}

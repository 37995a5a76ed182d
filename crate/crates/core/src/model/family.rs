//! The one-parameter family of Levi-Civita connections for an edge-symmetric
//! metric, with its braiding, curvature and Ricci in closed form.

use nalgebra::Matrix4;

use crate::calculus::{chi, Dir, SiteFn};
use crate::engine::{Bitensor, Coefficients, Connection};
use crate::error::Result;
use crate::scalar::{Complex64, Field, Tolerance};

use super::params::{q_to_chi, MetricValues, ModelParams};

/// The closed-form fields entering the family at a given q.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyFields<F: Field> {
    pub a: SiteFn<F>,
    pub b: SiteFn<F>,
    pub big_q: SiteFn<F>,
    pub alpha: SiteFn<F>,
    pub beta: SiteFn<F>,
}

impl<F: Field> FamilyFields<F> {
    pub fn new(v: &MetricValues, q: &F) -> Result<Self> {
        v.validate()?;
        Ok(FamilyFields {
            a: v.a()?,
            b: v.b()?,
            big_q: q_to_chi(q),
            alpha: v.alpha()?,
            beta: v.beta()?,
        })
    }

    pub fn from_params(p: &ModelParams) -> Result<Self> {
        Self::new(&p.metric, &p.q_value::<F>()?)
    }
}

/// The family coefficients at an arbitrary (possibly off-circle) q:
///
/// ∇e1 = (1+Q⁻¹) e1⊗e1 + (1-α)(e1⊗e2 + e2⊗e1) - (b/a)(R2 β - 1) e2⊗e2
/// ∇e2 = -(a/b)(R1 α - 1) e1⊗e1 + (1-β)(e1⊗e2 + e2⊗e1) + (1-Q) e2⊗e2
pub fn family_coefficients<F: Field>(f: &FamilyFields<F>) -> Coefficients<F> {
    let (one, two) = (Dir::One, Dir::Two);
    let u = SiteFn::<F>::one();
    let mut c = Coefficients::zero();
    c.set(one, one, one, &u + f.big_q.recip());
    c.set(one, one, two, &u - &f.alpha);
    c.set(one, two, one, &u - &f.alpha);
    c.set(one, two, two, -(&f.b / &f.a) * (f.beta.shift(two) - &u));
    c.set(two, one, one, -(&f.a / &f.b) * (f.alpha.shift(one) - &u));
    c.set(two, one, two, &u - &f.beta);
    c.set(two, two, one, &u - &f.beta);
    c.set(two, two, two, &u - &f.big_q);
    c
}

/// The family member at the model's q, with σ derived from the coefficients.
pub fn qlc_family<F: Field>(p: &ModelParams) -> Result<Connection<F>> {
    let fields = FamilyFields::from_params(p)?;
    Connection::new(family_coefficients(&fields), Tolerance::default().eq)
}

/// The displayed braiding, per site, as M[out][in] in the order 11, 12, 21, 22:
///
/// ```text
/// -Q⁻¹          0     0     a(R1α-1)/b
///  0            α-1   β     0
///  0            α     β-1   0
///  b(R2β-1)/a   0     0     Q
/// ```
pub fn sigma8v<F: Field>(f: &FamilyFields<F>) -> [[[F; 4]; 4]; 4] {
    let u = SiteFn::<F>::one();
    let e03 = &f.a * (f.alpha.shift(Dir::One) - &u) / &f.b;
    let e30 = &f.b * (f.beta.shift(Dir::Two) - &u) / &f.a;
    std::array::from_fn(|x| {
        let mut m: [[F; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| F::zero()));
        m[0][0] = -f.big_q.0[x].recip();
        m[0][3] = e03.0[x].clone();
        m[1][1] = f.alpha.0[x].clone() - F::one();
        m[1][2] = f.beta.0[x].clone();
        m[2][1] = f.alpha.0[x].clone();
        m[2][2] = f.beta.0[x].clone() - F::one();
        m[3][0] = e30.0[x].clone();
        m[3][3] = f.big_q.0[x].clone();
        m
    })
}

/// The expected eigenvalues {-1, αβ, -Q⁻¹, Q} per site.
pub fn sigma_expected_eigenvalues<F: Field>(f: &FamilyFields<F>) -> [[Complex64; 4]; 4] {
    std::array::from_fn(|x| {
        let q = f.big_q.0[x].to_c64();
        [
            Complex64::new(-1.0, 0.0),
            (f.alpha.0[x].clone() * f.beta.0[x].clone()).to_c64(),
            -1.0 / q,
            q,
        ]
    })
}

/// Eigenvalues of a small complex matrix from its Schur form.
pub fn eigenvalues4(m: &[[Complex64; 4]; 4]) -> [Complex64; 4] {
    let mat = Matrix4::from_fn(|r, c| m[r][c]);
    let ev = mat
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    [ev[0], ev[1], ev[2], ev[3]]
}

/// Per-site eigenvalues of the braiding of the family member at `p`,
/// computed from the derived σ (not the displayed matrix).
pub fn sigma_spectrum(p: &ModelParams) -> Result<[[Complex64; 4]; 4]> {
    let n = qlc_family::<Complex64>(p)?;
    let mats = n.sigma().matrices();
    Ok(std::array::from_fn(|x| eigenvalues4(&mats[x])))
}

/// Greedy multiset distance between two small lists of complex numbers.
pub fn multiset_distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    if x.len() != y.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; y.len()];
    let mut worst: f64 = 0.0;
    for a in x {
        let mut best = None;
        for (j, b) in y.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (a - b).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let (j, d) = best.expect("lists have equal length");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// The displayed curvature coefficients of R∇e1 (on Vol⊗e1 and Vol⊗e2).
pub fn rho_first_row<F: Field>(f: &FamilyFields<F>) -> [SiteFn<F>; 2] {
    rho_row(f, Dir::One, Dir::Two)
}

fn rho_row<F: Field>(f: &FamilyFields<F>, r1: Dir, r2: Dir) -> [SiteFn<F>; 2] {
    let u = SiteFn::<F>::one();
    let (al, be, a, b) = (&f.alpha, &f.beta, &f.a, &f.b);
    let qi = f.big_q.recip();
    let diag = &qi * al.shift(r1) - &f.big_q * al
        + (&u - al) * (be.shift(r1) - &u)
        + a.shift(r2) / a * (be.shift(r2) - &u) * (al.shift(r1).shift(r2) - &u);
    let off = &qi * (&u - al)
        + al * (al.shift(r2) - &u)
        + &qi * b.shift(r1) / a * (be.recip() - &u)
        + b / a * (be.shift(r2) - &u) * be.shift(r2);
    [diag, off]
}

/// The interchange e1↔e2, R1↔R2, α↔β, a↔b, Q↔-Q⁻¹ applied to the fields.
/// R1↔R2 acts on formulas, not on the fields themselves.
pub fn interchange<F: Field>(f: &FamilyFields<F>) -> FamilyFields<F> {
    FamilyFields {
        a: f.b.clone(),
        b: f.a.clone(),
        big_q: -f.big_q.recip(),
        alpha: f.beta.clone(),
        beta: f.alpha.clone(),
    }
}

/// R∇e2 from the displayed R∇e1 by the interchange; Vol changes sign.
pub fn rho_second_row<F: Field>(f: &FamilyFields<F>) -> [SiteFn<F>; 2] {
    let [r22, r21] = rho_row(&interchange(f), Dir::Two, Dir::One);
    [-r21, -r22]
}

/// Ricci at q = 1 in closed form, as coefficients on e_i⊗e_j:
///
/// ½ [ (1/b)(-∂2a/α + χ ∂1b/β)        -(∂1b/b)(α + 1/α - χ - 2) ]
///   [ -(∂2a/a)(β + 1/β - χ - 2)       (1/a)(-∂2a/α + χ ∂1b/β)  ]
pub fn ricci_q1_closed_form<F: Field>(v: &MetricValues) -> Result<Bitensor<F>> {
    let f = FamilyFields::<F>::new(v, &F::one())?;
    let (a, b, al, be) = (&f.a, &f.b, &f.alpha, &f.beta);
    let x = chi::<F>();
    let two = SiteFn::<F>::constant(F::from_i64(2));
    let half = F::from_ratio(1, 2);
    let d2a = a.partial(Dir::Two);
    let d1b = b.partial(Dir::One);
    let diag = -(&d2a / al) + &x * &d1b / be;
    let mut t = Bitensor::zero();
    t.t[0][0] = (&diag / b).scale(&half);
    t.t[0][1] = (-(&d1b / b) * (al + al.recip() - &x - &two)).scale(&half);
    t.t[1][0] = (-(&d2a / a) * (be + be.recip() - &x - &two)).scale(&half);
    t.t[1][1] = (&diag / a).scale(&half);
    Ok(t)
}

/// Scalar curvature of the family in closed form,
/// S = -(A ∂2a/α + B ∂1b/β) / (4ab) with
/// A = (2+q+q⁻¹) + (2-q-q⁻¹)χ and B = (2-q-q⁻¹) - (2+q+q⁻¹)χ.
pub fn scalar_curvature_closed_form<F: Field>(v: &MetricValues, q: &F) -> Result<SiteFn<F>> {
    let f = FamilyFields::<F>::new(v, q)?;
    let x = chi::<F>();
    let two = F::from_i64(2);
    let s = q.clone() + q.recip();
    let plus = SiteFn::constant(two.clone() + s.clone());
    let minus = SiteFn::constant(two - s);
    let big_a = &plus + &x * &minus;
    let big_b = &minus - &x * &plus;
    let num = big_a * f.a.partial(Dir::Two) / &f.alpha + big_b * f.b.partial(Dir::One) / &f.beta;
    let four = F::from_i64(-4);
    Ok(num / (&f.a * &f.b).scale(&four))
}

/// The scalar curvature as printed with coefficients 3+q+(1-q)χ and
/// 1-q⁻¹-(3+q⁻¹)χ. It agrees with the curvature pipeline only at q = 1 and
/// is kept for comparison.
pub fn scalar_curvature_printed<F: Field>(v: &MetricValues, q: &F) -> Result<SiteFn<F>> {
    let f = FamilyFields::<F>::new(v, q)?;
    let x = chi::<F>();
    let c = |n: i64| SiteFn::<F>::constant(F::from_i64(n));
    let qs = SiteFn::constant(q.clone());
    let qi = SiteFn::constant(q.recip());
    let big_a = c(3) + &qs + (c(1) - &qs) * &x;
    let big_b = c(1) - &qi - (c(3) + &qi) * &x;
    let num = big_a * f.a.partial(Dir::Two) / &f.alpha + big_b * f.b.partial(Dir::One) / &f.beta;
    Ok(num / (&f.a * &f.b).scale(&F::from_i64(-4)))
}

/// The Laplacian of the family in closed form,
/// Δf = ((Q⁻¹ - R2β)/a) ∂1f - ((Q + R1α)/b) ∂2f.
pub fn laplacian_closed_form<F: Field>(f: &FamilyFields<F>, u: &SiteFn<F>) -> SiteFn<F> {
    let c1 = (f.big_q.recip() - f.beta.shift(Dir::Two)) / &f.a;
    let c2 = (&f.big_q + f.alpha.shift(Dir::One)) / &f.b;
    c1 * u.partial(Dir::One) - c2 * u.partial(Dir::Two)
}

/// Scalar curvature at q = 1 in momentum coordinates a = k0 + k1ψ,
/// b = l0 + l1φ, as printed site by site.
pub fn scalar_curvature_momentum_q1(k0: f64, k1: f64, l0: f64, l1: f64) -> [f64; 4] {
    let pre = 2.0 / ((k0 * k0 - k1 * k1) * (l0 * l0 - l1 * l1));
    [
        pre * (l0 - l1) * (k1 * (k0 + k1) - l1 * (k0 - k1)),
        pre * (k0 + k1) * (l1 * (l0 + l1) - k1 * (l0 - l1)),
        pre * (k0 - k1) * (k1 * (l0 + l1) - l1 * (l0 - l1)),
        pre * (l0 + l1) * (l1 * (k0 + k1) - k1 * (k0 - k1)),
    ]
}

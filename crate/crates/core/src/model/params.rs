use serde::{Deserialize, Serialize};

use crate::calculus::{phi, psi, SiteFn};
use crate::engine::{make_metric, Metric};
use crate::error::{QrgError, Result};
use crate::scalar::{Field, Phase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    #[default]
    Euclidean,
    Minkowski,
}

impl Signature {
    pub fn name(self) -> &'static str {
        match self {
            Signature::Euclidean => "euclidean",
            Signature::Minkowski => "minkowski",
        }
    }
}

/// The four values of an edge-symmetric metric: a = (a00, a01, a00, a01),
/// b = (b00, b00, b10, b10).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValues {
    pub a00: f64,
    pub a01: f64,
    pub b00: f64,
    pub b10: f64,
}

impl MetricValues {
    pub fn new(a00: f64, a01: f64, b00: f64, b10: f64) -> Self {
        MetricValues { a00, a01, b00, b10 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.named() {
            if !v.is_finite() {
                return Err(QrgError::InvalidInput(format!("{name} is not finite")));
            }
            if v == 0.0 {
                return Err(QrgError::DegenerateMetric(format!("{name} = 0")));
            }
        }
        Ok(())
    }

    pub fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("a00", self.a00),
            ("a01", self.a01),
            ("b00", self.b00),
            ("b10", self.b10),
        ]
    }

    /// Checks the sign pattern: all positive for Euclidean, a < 0 < b for
    /// Minkowski.
    pub fn check_signature(&self, sig: Signature) -> Result<()> {
        self.validate()?;
        let ok = match sig {
            Signature::Euclidean => self.named().iter().all(|(_, v)| *v > 0.0),
            Signature::Minkowski => {
                self.a00 < 0.0 && self.a01 < 0.0 && self.b00 > 0.0 && self.b10 > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(QrgError::Signature(format!(
                "values a00={}, a01={}, b00={}, b10={} do not fit the {} sign pattern",
                self.a00,
                self.a01,
                self.b00,
                self.b10,
                sig.name()
            )))
        }
    }

    pub fn a<F: Field>(&self) -> Result<SiteFn<F>> {
        SiteFn::from_reals([self.a00, self.a01, self.a00, self.a01])
            .ok_or_else(|| QrgError::InvalidInput("non-finite metric value".into()))
    }

    pub fn b<F: Field>(&self) -> Result<SiteFn<F>> {
        SiteFn::from_reals([self.b00, self.b00, self.b10, self.b10])
            .ok_or_else(|| QrgError::InvalidInput("non-finite metric value".into()))
    }

    pub fn metric<F: Field>(&self) -> Result<Metric<F>> {
        self.validate()?;
        make_metric(self.a()?, self.b()?)
    }

    /// α = (a01/a00, 1, 1, a00/a01).
    pub fn alpha<F: Field>(&self) -> Result<SiteFn<F>> {
        let a = self.a::<F>()?;
        let r = a.0[1].clone() / a.0[0].clone();
        Ok(SiteFn::new([r.clone(), F::one(), F::one(), r.recip()]))
    }

    /// β = (1, b10/b00, b00/b10, 1).
    pub fn beta<F: Field>(&self) -> Result<SiteFn<F>> {
        let b = self.b::<F>()?;
        let r = b.0[2].clone() / b.0[0].clone();
        Ok(SiteFn::new([F::one(), r.clone(), r.recip(), F::one()]))
    }
}

/// Metric values together with the braiding parameter q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub metric: MetricValues,
    pub q: Phase,
}

impl ModelParams {
    pub fn new(metric: MetricValues, q: Phase) -> Self {
        ModelParams { metric, q }
    }

    /// The value of q in the field F, if representable.
    pub fn q_value<F: Field>(&self) -> Result<F> {
        F::from_phase(&self.q).ok_or_else(|| {
            QrgError::ExactUnavailable(format!(
                "q = {} is not ±1, so it has no exact rational value",
                self.q
            ))
        })
    }

    pub fn big_q<F: Field>(&self) -> Result<SiteFn<F>> {
        Ok(q_to_chi(&self.q_value::<F>()?))
    }
}

/// Q = q^χ = (q, 1/q, 1/q, q).
pub fn q_to_chi<F: Field>(q: &F) -> SiteFn<F> {
    let qi = q.recip();
    SiteFn::new([q.clone(), qi.clone(), qi, q.clone()])
}

/// Momentum-space coordinates: a = k0 + k1 ψ, b = l0 + l1 φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumParams {
    pub k0: f64,
    pub k1: f64,
    pub l0: f64,
    pub l1: f64,
    pub signature: Signature,
}

impl MomentumParams {
    pub fn new(k0: f64, k1: f64, l0: f64, l1: f64, signature: Signature) -> Result<Self> {
        let m = MomentumParams {
            k0,
            k1,
            l0,
            l1,
            signature,
        };
        m.check()?;
        Ok(m)
    }

    /// From couplings and relative fluctuations k = k1/k0, l = l1/l0. For
    /// Minkowski signature `k0` is the (negative) average of a.
    pub fn from_relative(k0: f64, l0: f64, k: f64, l: f64, signature: Signature) -> Result<Self> {
        Self::new(k0, k * k0, l0, l * l0, signature)
    }

    pub fn k(&self) -> f64 {
        self.k1 / self.k0
    }

    pub fn l(&self) -> f64 {
        self.l1 / self.l0
    }

    /// The Minkowski coupling -k0.
    pub fn k0_tilde(&self) -> f64 {
        -self.k0
    }

    pub fn check(&self) -> Result<()> {
        let all = [self.k0, self.k1, self.l0, self.l1];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(QrgError::Admissibility("non-finite parameter".into()));
        }
        let k0_ok = match self.signature {
            Signature::Euclidean => self.k0 > 0.0,
            Signature::Minkowski => self.k0 < 0.0,
        };
        if !k0_ok {
            return Err(QrgError::Admissibility(format!(
                "k0 = {} has the wrong sign for {} signature",
                self.k0,
                self.signature.name()
            )));
        }
        if self.l0 <= 0.0 {
            return Err(QrgError::Admissibility(format!("l0 = {} must be positive", self.l0)));
        }
        if self.k1.abs() >= self.k0.abs() {
            return Err(QrgError::Admissibility(format!(
                "|k| = {} must be below 1",
                self.k().abs()
            )));
        }
        if self.l1.abs() >= self.l0 {
            return Err(QrgError::Admissibility(format!(
                "|l| = {} must be below 1",
                self.l().abs()
            )));
        }
        Ok(())
    }
}

/// a00 = k0 + k1, a01 = k0 - k1, b00 = l0 + l1, b10 = l0 - l1.
pub fn momentum_to_metric(m: &MomentumParams) -> Result<MetricValues> {
    m.check()?;
    Ok(MetricValues::new(m.k0 + m.k1, m.k0 - m.k1, m.l0 + m.l1, m.l0 - m.l1))
}

pub fn metric_to_momentum(v: &MetricValues, signature: Signature) -> Result<MomentumParams> {
    v.validate()?;
    MomentumParams::new(
        (v.a00 + v.a01) / 2.0,
        (v.a00 - v.a01) / 2.0,
        (v.b00 + v.b10) / 2.0,
        (v.b00 - v.b10) / 2.0,
        signature,
    )
}

/// The metric a = k0 + k1 ψ, b = l0 + l1 φ evaluated through the plane waves.
pub fn momentum_fields<F: Field>(m: &MomentumParams) -> Result<(SiteFn<F>, SiteFn<F>)> {
    let c = |x: f64| F::from_f64(x).ok_or_else(|| QrgError::InvalidInput("non-finite".into()));
    let a = SiteFn::constant(c(m.k0)?) + psi::<F>().scale(&c(m.k1)?);
    let b = SiteFn::constant(c(m.l0)?) + phi::<F>().scale(&c(m.l1)?);
    Ok((a, b))
}

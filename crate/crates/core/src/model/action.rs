//! The Einstein-Hilbert action Σ μ S of the model.

use crate::error::{QrgError, Result};
use crate::scalar::{Field, Tolerance};

use super::family::{family_coefficients, FamilyFields};
use super::params::{MetricValues, MomentumParams, Signature};
use crate::calculus::SiteFn;
use crate::engine::Connection;

/// The measure μ in Σ μ S. Only |ab| makes the sum independent of q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Measure {
    #[default]
    AbsAb,
    One,
    SqrtAbsAb,
}

impl Measure {
    /// μ at each site. For √|ab| in the exact regime the nearest double is
    /// taken exactly.
    pub fn weights<F: Field>(self, v: &MetricValues) -> Result<SiteFn<F>> {
        let a = [v.a00, v.a01, v.a00, v.a01];
        let b = [v.b00, v.b00, v.b10, v.b10];
        match self {
            Measure::One => Ok(SiteFn::one()),
            Measure::AbsAb => {
                let ab = v.a::<F>()? * v.b::<F>()?;
                let sign = if v.a00 * v.b00 < 0.0 { -1 } else { 1 };
                Ok(ab.scale(&F::from_i64(sign)))
            }
            Measure::SqrtAbsAb => SiteFn::from_reals(std::array::from_fn(|x| (a[x] * b[x]).abs().sqrt()))
                .ok_or_else(|| QrgError::InvalidInput("non-finite measure".into())),
        }
    }
}

/// Σ μ S with μ = |ab| in closed form:
/// ±[(a00-a01)²(1/a00 + 1/a01) + (b00-b10)²(1/b00 + 1/b10)],
/// with the minus sign for Minkowski signature where |ab| = -ab.
pub fn eh_action_closed_form(v: &MetricValues, sig: Signature) -> Result<f64> {
    v.check_signature(sig)?;
    let s = (v.a00 - v.a01).powi(2) * (1.0 / v.a00 + 1.0 / v.a01)
        + (v.b00 - v.b10).powi(2) * (1.0 / v.b00 + 1.0 / v.b10);
    Ok(match sig {
        Signature::Euclidean => s,
        Signature::Minkowski => -s,
    })
}

/// Σ μ S through the curvature pipeline of the family member at `q`.
pub fn eh_action_pointwise<F: Field>(
    v: &MetricValues,
    q: &F,
    sig: Signature,
    measure: Measure,
) -> Result<F> {
    v.check_signature(sig)?;
    let fields = FamilyFields::<F>::new(v, q)?;
    let n = Connection::new(family_coefficients(&fields), Tolerance::default().eq)?;
    let g = v.metric::<F>()?;
    let s = n.scalar_curvature(&g);
    Ok((measure.weights::<F>(v)? * s).sum())
}

/// The action of a metric (μ = |ab|), after checking its sign pattern.
pub fn eh_action(v: &MetricValues, sig: Signature) -> Result<f64> {
    eh_action_closed_form(v, sig)
}

/// The action in momentum coordinates:
/// Euclidean 8(k0 k²/(1-k²) + l0 l²/(1-l²)),
/// Minkowski 8(k̃0 k²/(1-k²) - l0 l²/(1-l²)) with k̃0 = -k0.
pub fn action_kl(m: &MomentumParams) -> Result<f64> {
    m.check()?;
    let (k, l) = (m.k(), m.l());
    let tk = k * k / (1.0 - k * k);
    let tl = l * l / (1.0 - l * l);
    Ok(match m.signature {
        Signature::Euclidean => 8.0 * (m.k0 * tk + m.l0 * tl),
        Signature::Minkowski => 8.0 * (m.k0_tilde() * tk - m.l0 * tl),
    })
}

/// The geometric series 8k0(k² + k⁴ + ...) truncated after `terms` powers,
/// with the same signs as [`action_kl`].
pub fn action_kl_series(m: &MomentumParams, terms: u32) -> Result<f64> {
    m.check()?;
    let series = |x: f64| (1..=terms).map(|n| x.powi(2 * n as i32)).sum::<f64>();
    let (sk, sl) = (series(m.k()), series(m.l()));
    Ok(match m.signature {
        Signature::Euclidean => 8.0 * (m.k0 * sk + m.l0 * sl),
        Signature::Minkowski => 8.0 * (m.k0_tilde() * sk - m.l0 * sl),
    })
}

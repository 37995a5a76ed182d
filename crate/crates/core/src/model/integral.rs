//! The functional integral Z = ∫∫ dk dl e^{iS(k,l)} over (-1,1)² at fixed
//! couplings, and expectation values under it.
//!
//! The phase S = c_k t_k + c_l t_l with t = k²/(1-k²) separates, so Z is a
//! product of two one-dimensional integrals. With t as variable each factor
//! is
//!
//!   I(c) = ∫_0^∞ e^{ict} t^{-1/2} (1+t)^{-3/2} dt,
//!
//! which converges only by oscillation. The default rule turns the ray onto
//! t = ±i v² (sign of c), where the integrand decays like e^{-|c| v²}:
//!
//!   I(c) = 2 e^{±iπ/4} ∫_0^∞ e^{-|c| v²} (1 ± i v²)^{-3/2} dv.
//!
//! Tensor Gauss-Legendre directly in (k, l), optionally after k = tanh u,
//! is available as well. Near k = ±1 the phase oscillates without bound,
//! so those rules converge slowly and usually report non-convergence.

use std::f64::consts::FRAC_PI_4;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::legendre::GaussLegendre;
use serde::Serialize;

use crate::error::{QrgError, Result};
use crate::par::{sum_range, ExecMode};
use crate::scalar::Complex64;

use super::params::Signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    /// Rotated contour per axis, composite Gauss-Legendre in v.
    #[default]
    Contour,
    /// Tensor Gauss-Legendre on (-1,1)².
    GaussLegendre,
    /// Tensor Gauss-Legendre in u after k = tanh u, l = tanh w.
    Tanh,
}

impl QuadratureRule {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "contour" => Some(QuadratureRule::Contour),
            "gauss-legendre" | "gl" => Some(QuadratureRule::GaussLegendre),
            "tanh" => Some(QuadratureRule::Tanh),
            _ => None,
        }
    }
}

/// Quadrature settings. `points` is the node count per axis of the first
/// pass; each refinement doubles the spacing count (51, 101, 201, ...).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    pub points: usize,
    pub refinements: usize,
    pub target_rel_error: f64,
    pub mode: ExecMode,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: QuadratureRule::Contour,
            points: 51,
            refinements: 4,
            target_rel_error: 1e-4,
            mode: ExecMode::Parallel,
        }
    }
}

impl QuadratureSpec {
    pub fn points_at(&self, level: usize) -> usize {
        (self.points.max(2) - 1) * (1 << level) + 1
    }
}

/// An observable O(k, l). The named ones work with every rule; arbitrary
/// functions need a rule that samples (k, l) directly.
#[derive(Clone)]
pub enum Observable {
    One,
    K,
    L,
    K2,
    L2,
    Action,
    Custom(Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>),
}

impl std::fmt::Debug for Observable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

impl Observable {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "1" => Some(Observable::One),
            "k" => Some(Observable::K),
            "l" => Some(Observable::L),
            "k2" => Some(Observable::K2),
            "l2" => Some(Observable::L2),
            "action" => Some(Observable::Action),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Observable::One => "1",
            Observable::K => "k",
            Observable::L => "l",
            Observable::K2 => "k2",
            Observable::L2 => "l2",
            Observable::Action => "action",
            Observable::Custom(_) => "custom",
        }
        .to_string()
    }

    fn eval(&self, c: &Couplings, k: f64, l: f64) -> Complex64 {
        let r = |x: f64| Complex64::new(x, 0.0);
        match self {
            Observable::One => r(1.0),
            Observable::K => r(k),
            Observable::L => r(l),
            Observable::K2 => r(k * k),
            Observable::L2 => r(l * l),
            Observable::Action => r(c.action(k, l)),
            Observable::Custom(f) => f(k, l),
        }
    }
}

/// Phase coefficients per axis: S = ck t_k + cl t_l.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub ck: f64,
    pub cl: f64,
}

impl Couplings {
    /// Euclidean: S = 8(k0 t_k + l0 t_l) with k0, l0 > 0. Minkowski: k0 is
    /// the negative average of a and S = 8(-k0 t_k - l0 t_l).
    pub fn new(k0: f64, l0: f64, sig: Signature) -> Result<Self> {
        if !k0.is_finite() || !l0.is_finite() {
            return Err(QrgError::InvalidInput("couplings must be finite".into()));
        }
        if l0 <= 0.0 {
            return Err(QrgError::Admissibility(format!("l0 = {l0} must be positive")));
        }
        match sig {
            Signature::Euclidean if k0 > 0.0 => Ok(Couplings { ck: 8.0 * k0, cl: 8.0 * l0 }),
            Signature::Minkowski if k0 < 0.0 => Ok(Couplings { ck: -8.0 * k0, cl: -8.0 * l0 }),
            _ => Err(QrgError::Admissibility(format!(
                "k0 = {k0} has the wrong sign for {} signature",
                sig.name()
            ))),
        }
    }

    pub fn action(&self, k: f64, l: f64) -> f64 {
        self.ck * k * k / (1.0 - k * k) + self.cl * l * l / (1.0 - l * l)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementStep {
    pub points: usize,
    pub nodes_used: usize,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: Complex64,
    pub estimated_error: f64,
    pub nodes_used: usize,
    #[serde(skip)]
    pub trace: Vec<RefinementStep>,
}

fn gl_pairs(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).expect("nonzero");
    GaussLegendre::new(n).as_node_weight_pairs().to_vec()
}

/// ∫_0^∞ e^{ict} t^{-1/2} (1+t)^{-3/2} h(t) dt on the rotated ray, with about
/// `points` nodes. h must be analytic in the quadrant swept by the rotation.
/// Returns the value and the node count.
pub fn contour_moment(c: f64, points: usize, h: &dyn Fn(Complex64) -> Complex64) -> (Complex64, usize) {
    assert!(c != 0.0, "the contour rule needs a nonzero coupling");
    let s = c.signum();
    let abs_c = c.abs();
    let v_max = (40.0 / abs_c).sqrt();
    let mut edges = vec![0.0];
    let mut e = 1.0;
    while e < v_max {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(v_max);
    let panels = edges.len() - 1;
    let per_panel = points.div_ceil(panels).max(4);
    let pairs = gl_pairs(per_panel);
    let i = Complex64::new(0.0, 1.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let half = 0.5 * (hi - lo);
        for &(x, wt) in &pairs {
            let v = lo + half * (x + 1.0);
            let t = i * (s * v * v);
            let f = (-abs_c * v * v).exp() * (1.0 + t).powf(-1.5) * h(t);
            sum += f * (wt * half);
        }
    }
    let rot = Complex64::from_polar(2.0, s * FRAC_PI_4);
    (rot * sum, per_panel * panels)
}

fn moment_factors(obs: &Observable) -> Option<[(u8, u8); 2]> {
    // (k-axis moment, l-axis moment) per term: 0 = 1, 1 = k², 2 = c t.
    // Odd observables vanish and are handled separately.
    match obs {
        Observable::One => Some([(0, 0), (255, 255)]),
        Observable::K2 => Some([(1, 0), (255, 255)]),
        Observable::L2 => Some([(0, 1), (255, 255)]),
        Observable::Action => Some([(2, 0), (0, 2)]),
        _ => None,
    }
}

fn contour_integral(obs: &Observable, c: &Couplings, points: usize) -> Result<(Complex64, usize)> {
    if matches!(obs, Observable::K | Observable::L) {
        return Ok((Complex64::new(0.0, 0.0), 0));
    }
    let terms = moment_factors(obs).ok_or_else(|| {
        QrgError::InvalidInput(
            "the contour rule integrates only the named observables 1, k, l, k2, l2, action".into(),
        )
    })?;
    let one = |_: Complex64| Complex64::new(1.0, 0.0);
    let ksq = |t: Complex64| t / (1.0 + t);
    let axis = |cc: f64, kind: u8| -> (Complex64, usize) {
        match kind {
            0 => contour_moment(cc, points, &one),
            1 => contour_moment(cc, points, &ksq),
            _ => contour_moment(cc, points, &move |t: Complex64| t * cc),
        }
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut nodes = 0;
    for (kk, kl) in terms {
        if kk == 255 {
            continue;
        }
        let (a, na) = axis(c.ck, kk);
        let (b, nb) = axis(c.cl, kl);
        total += a * b;
        nodes = nodes.max(na + nb);
    }
    Ok((total, nodes))
}

fn tensor_integral(
    obs: &Observable,
    c: &Couplings,
    points: usize,
    tanh: bool,
    mode: ExecMode,
) -> (Complex64, usize) {
    // nodes and weights in k (or u for the tanh map)
    const U_MAX: f64 = 10.0;
    let axis: Vec<(f64, f64)> = gl_pairs(points)
        .into_iter()
        .map(|(x, w)| {
            if tanh {
                let u = U_MAX * x;
                let sech = 1.0 / u.cosh();
                (u.tanh(), w * U_MAX * sech * sech)
            } else {
                (x, w)
            }
        })
        .collect();
    let n = axis.len();
    let value = sum_range(mode, n * n, |idx| {
        let (k, wk) = axis[idx / n];
        let (l, wl) = axis[idx % n];
        let phase = Complex64::from_polar(1.0, c.action(k, l));
        phase * obs.eval(c, k, l) * (wk * wl)
    });
    (value, n * n)
}

/// One pass of `rule` at a fixed node count per axis.
pub fn integrate_fixed(
    rule: QuadratureRule,
    obs: &Observable,
    c: &Couplings,
    points: usize,
    mode: ExecMode,
) -> Result<(Complex64, usize)> {
    match rule {
        QuadratureRule::Contour => contour_integral(obs, c, points),
        QuadratureRule::GaussLegendre => Ok(tensor_integral(obs, c, points, false, mode)),
        QuadratureRule::Tanh => Ok(tensor_integral(obs, c, points, true, mode)),
    }
}

fn refine(
    spec: &QuadratureSpec,
    mut pass: impl FnMut(usize) -> Result<(Complex64, usize)>,
) -> Result<IntegralResult> {
    let mut trace: Vec<RefinementStep> = Vec::new();
    for level in 0..=spec.refinements {
        let points = spec.points_at(level);
        let (value, nodes_used) = pass(points)?;
        trace.push(RefinementStep {
            points,
            nodes_used,
            value,
        });
        if let [.., prev, last] = trace.as_slice() {
            let err = (last.value - prev.value).norm();
            let scale = last.value.norm().max(1e-300);
            if err <= spec.target_rel_error * scale {
                return Ok(IntegralResult {
                    value: last.value,
                    estimated_error: err,
                    nodes_used: last.nodes_used,
                    trace,
                });
            }
        }
    }
    let steps: Vec<String> = trace
        .iter()
        .map(|s| format!("n={} value={:.10}{:+.10}i", s.points, s.value.re, s.value.im))
        .collect();
    Err(QrgError::Convergence(format!(
        "relative change above {:e} after {} refinements: {}",
        spec.target_rel_error,
        spec.refinements,
        steps.join("; ")
    )))
}

/// Z = ∫∫ dk dl e^{iS} with successive refinement until the relative change
/// is below the target.
pub fn partition_integral(spec: &QuadratureSpec, k0: f64, l0: f64, sig: Signature) -> Result<IntegralResult> {
    let c = Couplings::new(k0, l0, sig)?;
    refine(spec, |n| integrate_fixed(spec.rule, &Observable::One, &c, n, spec.mode))
}

/// ⟨O⟩ = ∫∫ O e^{iS} / ∫∫ e^{iS}, both under the same rule and refinement.
pub fn expectation(
    obs: &Observable,
    spec: &QuadratureSpec,
    k0: f64,
    l0: f64,
    sig: Signature,
) -> Result<IntegralResult> {
    let c = Couplings::new(k0, l0, sig)?;
    refine(spec, |n| {
        let (z, nz) = integrate_fixed(spec.rule, &Observable::One, &c, n, spec.mode)?;
        if z.norm() < 1e-12 {
            return Err(QrgError::IllConditionedNormalization(z.norm()));
        }
        let (num, nn) = integrate_fixed(spec.rule, obs, &c, n, spec.mode)?;
        Ok((num / z, nz.max(nn)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // √π U(1/2, 0, -ic), evaluated to 50 digits with mpmath
    const I8: Complex64 = Complex64::new(0.47335160894010697, 0.3959461098446223);
    const I4: Complex64 = Complex64::new(0.6846242245840763, 0.4941600340252755);
    const I16: Complex64 = Complex64::new(0.3260714711945193, 0.29728283483418044);
    const I008: Complex64 = Complex64::new(1.8897800385998336, 0.19374258828249005);
    const K2_MOMENT_8: Complex64 = Complex64::new(-0.012684068274721643, 0.03267224973255817);

    fn one(_: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn contour_factor_matches_reference_values() {
        for (c, want) in [(8.0, I8), (4.0, I4), (16.0, I16), (0.08, I008), (-8.0, I8.conj())] {
            let (got, _) = contour_moment(c, 101, &one);
            assert!((got - want).norm() < 1e-13, "c={c}: {got} vs {want}");
        }
        let (m, _) = contour_moment(8.0, 101, &|t| t / (1.0 + t));
        assert!((m - K2_MOMENT_8).norm() < 1e-13);
    }

    #[test]
    fn partition_and_k2_reference() {
        let spec = QuadratureSpec::default();
        let z = partition_integral(&spec, 1.0, 1.0, Signature::Euclidean).unwrap();
        let want = Complex64::new(0.06728842378509825, 0.3748434562970566);
        assert!((z.value - want).norm() < 1e-12);
        let e = expectation(&Observable::K2, &spec, 1.0, 1.0, Signature::Euclidean).unwrap();
        let want = Complex64::new(0.018203224035150112, 0.05379669891949686);
        assert!((e.value - want).norm() < 1e-12);
    }

    #[test]
    fn integrand_at_origin_is_one() {
        let c = Couplings::new(1.0, 1.0, Signature::Euclidean).unwrap();
        assert_eq!(c.action(0.0, 0.0), 0.0);
        assert_eq!(Complex64::from_polar(1.0, c.action(0.0, 0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn trivial_and_odd_observables() {
        let spec = QuadratureSpec::default();
        let e = expectation(&Observable::One, &spec, 1.0, 1.0, Signature::Euclidean).unwrap();
        assert_eq!(e.value, Complex64::new(1.0, 0.0));
        let e = expectation(&Observable::K, &spec, 1.0, 1.0, Signature::Euclidean).unwrap();
        assert!(e.value.norm() <= e.estimated_error.max(1e-15));
        let gl = QuadratureSpec { rule: QuadratureRule::GaussLegendre, ..spec };
        let c = Couplings::new(1.0, 1.0, Signature::Euclidean).unwrap();
        let (v, _) = integrate_fixed(gl.rule, &Observable::K, &c, 101, ExecMode::Deterministic).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn custom_observable_needs_a_sampling_rule() {
        let obs = Observable::Custom(Arc::new(|k, _| Complex64::new(k.abs(), 0.0)));
        let spec = QuadratureSpec::default();
        assert!(matches!(
            expectation(&obs, &spec, 1.0, 1.0, Signature::Euclidean),
            Err(QrgError::InvalidInput(_))
        ));
    }

    #[test]
    fn gauss_legendre_reports_non_convergence() {
        let spec = QuadratureSpec {
            rule: QuadratureRule::GaussLegendre,
            points: 51,
            refinements: 2,
            ..QuadratureSpec::default()
        };
        match partition_integral(&spec, 1.0, 1.0, Signature::Euclidean) {
            Err(QrgError::Convergence(msg)) => assert!(msg.contains("n=201")),
            other => panic!("expected a convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn minkowski_is_the_mirror_in_l() {
        let spec = QuadratureSpec::default();
        let e = partition_integral(&spec, 1.0, 1.0, Signature::Euclidean).unwrap();
        let m = partition_integral(&spec, -1.0, 1.0, Signature::Minkowski).unwrap();
        // I(8) I(-8) = |I(8)|²
        assert!((m.value - Complex64::new(I8.norm_sqr(), 0.0)).norm() < 1e-12);
        assert!((e.value - I8 * I8).norm() < 1e-12);
        assert!(Couplings::new(1.0, 1.0, Signature::Minkowski).is_err());
    }

    #[test]
    fn weak_coupling_agrees_with_direct_quadrature() {
        // at weak coupling the phase barely oscillates away from the edges
        let c = Couplings::new(0.01, 0.01, Signature::Euclidean).unwrap();
        for obs in [Observable::One, Observable::K2, Observable::L2] {
            let (zc, _) = integrate_fixed(QuadratureRule::Contour, &obs, &c, 101, ExecMode::Deterministic).unwrap();
            let (zg, _) =
                integrate_fixed(QuadratureRule::GaussLegendre, &obs, &c, 801, ExecMode::Deterministic).unwrap();
            assert!((zc - zg).norm() < 2e-2 * zc.norm(), "{obs:?}: {zc} vs {zg}");
        }
    }
}

//! Numerical search for quantum Levi-Civita connections of a given metric.
//!
//! Unknowns are the coefficient arrays C_i^{11}, C_i^{12} = C_i^{21} and
//! C_i^{22} (torsion freedom is built in, 24 complex numbers). The residual
//! stacks the χ consistency of the braiding (32 entries, identically zero on
//! this calculus but kept as a guard) and ∇g (32 entries).
//! Both are quadratic in the unknowns, so central differences with unit
//! steps give the Jacobian exactly, and the equations are holomorphic, so
//! complex Levenberg-Marquardt applies directly.
//!
//! Each seed starts from the q = 1 family member plus a random point of the
//! unit ball in C^24, so runs reach well beyond the starting point. Every
//! converged solution is classified against the closed-form family at the
//! q read off from C_1^{11} = 1 + q⁻¹ at site 00; anything else is kept and
//! marked as a finding.

use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::{chi, phi, psi, Dir, SiteFn};
use crate::error::{QrgError, Result};
use crate::model::family::{family_coefficients, FamilyFields};
use crate::model::params::{q_to_chi, MetricValues};
use crate::par::{map_range, ExecMode};
use crate::scalar::{Complex64, ExactComplex, Field};

use super::connection::{coefficient_distance, Coefficients, Connection, Sigma};
use super::metric::{make_metric, Metric};
use super::tensor::Bitensor;

const UNKNOWNS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub seeds: usize,
    /// Largest residual entry accepted as a solution.
    pub tol: f64,
    pub max_iter: usize,
    /// Offset for the per-seed random streams.
    pub seed_base: u64,
    pub mode: ExecMode,
    /// Re-check solutions at q = ±1 in exact rational arithmetic.
    pub exact: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            seeds: 16,
            tol: 1e-10,
            max_iter: 200,
            seed_base: 0,
            mode: ExecMode::Parallel,
            exact: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    /// Within 1e-8 of the closed-form family at the fitted q.
    Family,
    /// A QLC outside the closed-form family.
    Finding,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QlcSolution {
    pub kind: SolutionKind,
    /// None when C_1^{11}(00) = 1, i.e. q⁻¹ = 0.
    pub q_fit: Option<Complex64>,
    pub family_distance: f64,
    pub residual: f64,
    pub torsion: f64,
    pub nabla_g: f64,
    /// Some(true) when an exact recomputation at q = ±1 gave zero torsion
    /// and ∇g = 0.
    pub exact_verified: Option<bool>,
    pub coefficients: Coefficients<Complex64>,
    pub sigma: Sigma<Complex64>,
}

#[derive(Serialize)]
struct SolutionJson<'a> {
    #[serde(rename = "C")]
    c: &'a [[[SiteFn<Complex64>; 2]; 2]; 2],
    sigma: [[SiteFn<Complex64>; 4]; 4],
    q_fit: Option<Complex64>,
    kind: SolutionKind,
    family_distance: f64,
    residual: f64,
    torsion: f64,
    nabla_g: f64,
    exact_verified: Option<bool>,
}

impl Serialize for QlcSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // σ as a 4x4 matrix (out, in) of site arrays
        let m = self.sigma.matrices();
        let sigma = std::array::from_fn(|o| std::array::from_fn(|i| SiteFn(std::array::from_fn(|x| m[x][o][i]))));
        SolutionJson {
            c: &self.coefficients.c,
            sigma,
            q_fit: self.q_fit,
            kind: self.kind,
            family_distance: self.family_distance,
            residual: self.residual,
            torsion: self.torsion,
            nabla_g: self.nabla_g,
            exact_verified: self.exact_verified,
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverReport {
    pub seeds: usize,
    pub converged_seeds: usize,
    pub best_residual: f64,
    pub solutions: Vec<QlcSolution>,
}

impl SolverReport {
    pub fn findings(&self) -> impl Iterator<Item = &QlcSolution> {
        self.solutions.iter().filter(|s| s.kind == SolutionKind::Finding)
    }
}

fn unpack(z: &[Complex64]) -> Coefficients<Complex64> {
    let arr = |n: usize| SiteFn([z[4 * n], z[4 * n + 1], z[4 * n + 2], z[4 * n + 3]]);
    let mut c = Coefficients::zero();
    for i in Dir::ALL {
        let base = 3 * i.idx();
        c.set(i, Dir::One, Dir::One, arr(base));
        c.set(i, Dir::One, Dir::Two, arr(base + 1));
        c.set(i, Dir::Two, Dir::One, arr(base + 1));
        c.set(i, Dir::Two, Dir::Two, arr(base + 2));
    }
    c
}

fn pack(c: &Coefficients<Complex64>) -> Vec<Complex64> {
    let mut z = Vec::with_capacity(UNKNOWNS);
    for i in Dir::ALL {
        for (j, k) in [(Dir::One, Dir::One), (Dir::One, Dir::Two), (Dir::Two, Dir::Two)] {
            z.extend_from_slice(&c.get(i, j, k).0);
        }
    }
    z
}

/// σ from φ and ψ without any check, and the χ defect it leaves.
fn sigma_and_defect(c: &Coefficients<Complex64>) -> (Sigma<Complex64>, [Bitensor<Complex64>; 2]) {
    let m2 = Complex64::new(-2.0, 0.0);
    let mut s: [[Bitensor<Complex64>; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| Bitensor::zero()));
    let mut defect: [Bitensor<Complex64>; 2] = std::array::from_fn(|_| Bitensor::zero());
    for i in Dir::ALL {
        let s1 = c.right_leibniz_defect(i, &phi()).left_mul(&phi().scale(&m2).shift(i).recip());
        let s2 = c.right_leibniz_defect(i, &psi()).left_mul(&psi().scale(&m2).shift(i).recip());
        defect[i.idx()] = c
            .right_leibniz_defect(i, &chi())
            .sub(&s1.add(&s2).left_mul(&chi().scale(&m2).shift(i)));
        s[i.idx()] = [s1, s2];
    }
    (Sigma { s }, defect)
}

fn residual(z: &[Complex64], g: &Metric<Complex64>) -> Vec<Complex64> {
    let c = unpack(z);
    let (sigma, defect) = sigma_and_defect(&c);
    let mut out = Vec::with_capacity(64);
    for t in &defect {
        for row in &t.t {
            for f in row {
                out.extend_from_slice(&f.0);
            }
        }
    }
    let ng = Connection::from_parts(c, sigma).nabla_g(g);
    for i in Dir::ALL {
        for j in Dir::ALL {
            for k in Dir::ALL {
                out.extend_from_slice(&ng.get(i, j, k).0);
            }
        }
    }
    out
}

fn sup(r: &[Complex64]) -> f64 {
    r.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn jacobian(z: &[Complex64], g: &Metric<Complex64>, rows: usize) -> DMatrix<Complex64> {
    let mut j = DMatrix::zeros(rows, z.len());
    let mut zp = z.to_vec();
    for m in 0..z.len() {
        zp[m] = z[m] + 1.0;
        let plus = residual(&zp, g);
        zp[m] = z[m] - 1.0;
        let minus = residual(&zp, g);
        zp[m] = z[m];
        for r in 0..rows {
            j[(r, m)] = (plus[r] - minus[r]) * 0.5;
        }
    }
    j
}

/// Levenberg-Marquardt from `z`; returns the end point and its sup residual.
fn levenberg_marquardt(mut z: Vec<Complex64>, g: &Metric<Complex64>, opts: &SolverOptions) -> (Vec<Complex64>, f64) {
    let mut r = residual(&z, g);
    let mut lambda = 1e-3;
    let norm = |r: &[Complex64]| r.iter().map(|x| x.norm_sqr()).sum::<f64>();
    for _ in 0..opts.max_iter {
        if sup(&r) < opts.tol * 1e-2 {
            break;
        }
        let j = jacobian(&z, g, r.len());
        let jh = j.adjoint();
        let rhs = -(&jh * DVector::from_column_slice(&r));
        let a = &jh * &j;
        let mut improved = false;
        // try increasing damping until a step helps
        for _ in 0..12 {
            let damped = &a + DMatrix::identity(UNKNOWNS, UNKNOWNS) * Complex64::new(lambda, 0.0);
            let Some(dz) = damped.lu().solve(&rhs) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<Complex64> = z.iter().zip(dz.iter()).map(|(a, b)| a + b).collect();
            let r2 = residual(&trial, g);
            if norm(&r2) < norm(&r) {
                z = trial;
                r = r2;
                lambda = (lambda / 10.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let res = sup(&r);
    (z, res)
}

/// A point uniform in the unit ball of C^24 = R^48.
fn ball_direction(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut gauss = || {
        // Box-Muller
        let u1: f64 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random::<f64>();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let d: Vec<Complex64> = (0..UNKNOWNS).map(|_| Complex64::new(gauss(), gauss())).collect();
    let len = d.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let radius = rng.random::<f64>().powf(1.0 / 48.0);
    d.into_iter().map(|x| x * (radius / len)).collect()
}

/// The family fields of a (possibly complex) symmetric metric at q.
fn family_fields(g: &Metric<Complex64>, q: Complex64) -> FamilyFields<Complex64> {
    let (a, b) = (g.a().0, g.b().0);
    let one = Complex64::new(1.0, 0.0);
    FamilyFields {
        a: g.a().clone(),
        b: g.b().clone(),
        big_q: q_to_chi(&q),
        alpha: SiteFn([a[1] / a[0], one, one, a[0] / a[1]]),
        beta: SiteFn([one, b[2] / b[0], b[0] / b[2], one]),
    }
}

fn exact_check(g: &Metric<Complex64>, q: Complex64) -> Option<bool> {
    let sign = if (q - 1.0).norm() < 1e-8 {
        1
    } else if (q + 1.0).norm() < 1e-8 {
        -1
    } else {
        return None;
    };
    if !g.is_real(0.0) {
        return None;
    }
    let (a, b) = (g.a().0, g.b().0);
    let v = MetricValues::new(a[0].re, a[1].re, b[0].re, b[2].re);
    let fields = FamilyFields::<ExactComplex>::new(&v, &ExactComplex::from_i64(sign)).ok()?;
    let n = Connection::new(family_coefficients(&fields), 0.0).ok()?;
    let ge = v.metric::<ExactComplex>().ok()?;
    Some(n.torsion_residual() == 0.0 && n.nabla_g(&ge).is_zero())
}

fn classify(z: &[Complex64], residual: f64, g: &Metric<Complex64>, opts: &SolverOptions) -> Option<QlcSolution> {
    let c = unpack(z);
    let n = Connection::new(c.clone(), opts.tol.max(1e-9)).ok()?;
    let denom = c.get(Dir::One, Dir::One, Dir::One).0[0] - 1.0;
    let (q_fit, family_distance) = if denom.norm() > 1e-12 {
        let q = denom.inv();
        (Some(q), coefficient_distance(&c, &family_coefficients(&family_fields(g, q))))
    } else {
        (None, f64::INFINITY)
    };
    let kind = if family_distance < 1e-8 {
        SolutionKind::Family
    } else {
        SolutionKind::Finding
    };
    let exact_verified = if opts.exact && kind == SolutionKind::Family {
        q_fit.and_then(|q| exact_check(g, q))
    } else {
        None
    };
    Some(QlcSolution {
        kind,
        q_fit,
        family_distance,
        residual,
        torsion: n.torsion_residual(),
        nabla_g: n.nabla_g(g).max_abs(),
        exact_verified,
        sigma: n.sigma().clone(),
        coefficients: c,
    })
}

/// Searches for torsion-free bimodule connections with ∇g = 0.
///
/// Non-symmetric metrics are rejected up front; no quantum Levi-Civita
/// connection exists for them on this calculus. Solutions are deduplicated
/// at sup distance 1e-6 and sorted by the fitted q.
pub fn qlc_solve(g: &Metric<Complex64>, opts: &SolverOptions) -> Result<SolverReport> {
    if !g.is_symmetric() {
        let show = |f: &SiteFn<Complex64>| {
            let v: Vec<String> = f.0.iter().map(|z| if z.im == 0.0 { z.re.to_string() } else { z.to_string() }).collect();
            format!("({})", v.join(", "))
        };
        return Err(QrgError::NonSymmetricMetric(format!("a = {}, b = {}", show(g.a()), show(g.b()))));
    }
    if opts.seeds == 0 {
        return Err(QrgError::InvalidInput("at least one seed is needed".into()));
    }
    let z0 = pack(&family_coefficients(&family_fields(g, Complex64::new(1.0, 0.0))));
    let runs = map_range(opts.mode, opts.seeds, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed_base.wrapping_add(s as u64));
        let d = ball_direction(&mut rng);
        let start: Vec<Complex64> = z0.iter().zip(&d).map(|(a, b)| a + b).collect();
        levenberg_marquardt(start, g, opts)
    });
    let best_residual = runs.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let mut solutions: Vec<QlcSolution> = Vec::new();
    let mut converged_seeds = 0;
    for (z, res) in &runs {
        if *res > opts.tol {
            continue;
        }
        converged_seeds += 1;
        let Some(sol) = classify(z, *res, g, opts) else {
            continue;
        };
        if solutions
            .iter()
            .all(|s| coefficient_distance(&s.coefficients, &sol.coefficients) > 1e-6)
        {
            solutions.push(sol);
        }
    }
    if solutions.is_empty() {
        return Err(QrgError::SolverFailure {
            seeds: opts.seeds,
            best_residual,
        });
    }
    solutions.sort_by(|x, y| {
        let key = |s: &QlcSolution| s.q_fit.map_or((f64::INFINITY, 0.0), |q| (q.re, q.im));
        let (kx, ky) = (key(x), key(y));
        kx.0.total_cmp(&ky.0).then(kx.1.total_cmp(&ky.1)).then_with(|| {
            pack(&x.coefficients)
                .iter()
                .zip(pack(&y.coefficients))
                .map(|(a, b)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(SolverReport {
        seeds: opts.seeds,
        converged_seeds,
        best_residual,
        solutions,
    })
}

/// Convenience wrapper for a metric given by its four edge weights.
pub fn qlc_solve_values(v: &MetricValues, opts: &SolverOptions) -> Result<SolverReport> {
    qlc_solve(&v.metric::<Complex64>()?, opts)
}

/// Residual of the QLC equations at given coefficients (sup norm), for
/// independent checks. Torsion is included.
pub fn qlc_residual(c: &Coefficients<Complex64>, g: &Metric<Complex64>) -> f64 {
    let (sigma, defect) = sigma_and_defect(c);
    let n = Connection::from_parts(c.clone(), sigma);
    let d = defect.iter().map(|t| t.max_abs()).fold(0.0, f64::max);
    d.max(n.nabla_g(g).max_abs()).max(n.torsion_residual())
}

/// A metric built from site arrays, for solver inputs that need not be
/// symmetric.
pub fn metric_from_arrays(a: [Complex64; 4], b: [Complex64; 4]) -> Result<Metric<Complex64>> {
    make_metric(SiteFn(a), SiteFn(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_is_a_zero_of_the_residual() {
        let v = MetricValues::new(1.0, 2.5, 3.0, 1.3);
        let g = v.metric::<Complex64>().unwrap();
        for theta in [0.0, 0.4, 2.0] {
            let q = Complex64::from_polar(1.0, theta);
            let z = pack(&family_coefficients(&family_fields(&g, q)));
            assert!(sup(&residual(&z, &g)) < 1e-13);
        }
    }

    #[test]
    fn pack_roundtrip() {
        let z: Vec<Complex64> = (0..UNKNOWNS).map(|n| Complex64::new(n as f64, -(n as f64))).collect();
        assert_eq!(pack(&unpack(&z)), z);
    }

    #[test]
    fn solver_finds_family_members() {
        let v = MetricValues::new(1.0, 2.5, 3.0, 1.3);
        let opts = SolverOptions {
            seeds: 4,
            exact: true,
            ..SolverOptions::default()
        };
        let rep = qlc_solve_values(&v, &opts).unwrap();
        assert!(!rep.solutions.is_empty());
        let g = v.metric::<Complex64>().unwrap();
        for s in &rep.solutions {
            assert!(s.residual <= opts.tol);
            assert!(qlc_residual(&s.coefficients, &g) < 1e-9);
        }
    }

    #[test]
    fn rejects_non_symmetric_metric() {
        let one = Complex64::new(1.0, 0.0);
        let g = metric_from_arrays([one, 2.0 * one, 3.0 * one, 2.0 * one], [one; 4]).unwrap();
        assert!(matches!(
            qlc_solve(&g, &SolverOptions::default()),
            Err(QrgError::NonSymmetricMetric(_))
        ));
    }

    #[test]
    fn exact_check_at_plus_minus_one() {
        let v = MetricValues::new(1.0, 2.0, 3.0, 3.0);
        let g = v.metric::<Complex64>().unwrap();
        assert_eq!(exact_check(&g, Complex64::new(1.0, 0.0)), Some(true));
        assert_eq!(exact_check(&g, Complex64::new(-1.0, 0.0)), Some(true));
        assert_eq!(exact_check(&g, Complex64::new(0.0, 1.0)), None);
    }
}

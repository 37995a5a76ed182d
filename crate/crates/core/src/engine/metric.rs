use crate::calculus::{plane_waves, Dir, Form1, SiteFn};
use crate::error::{QrgError, Result};
use crate::scalar::Field;

use super::tensor::Bitensor;

/// g = a e1⊗e1 + b e2⊗e2.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric<F: Field> {
    a: SiteFn<F>,
    b: SiteFn<F>,
    symmetric: bool,
}

/// Outcome of the structural checks on a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricChecks {
    pub central: bool,
    pub quantum_symmetric: bool,
    pub real: bool,
}

impl MetricChecks {
    pub fn all(&self) -> bool {
        self.central && self.quantum_symmetric && self.real
    }
}

pub fn make_metric<F: Field>(a: SiteFn<F>, b: SiteFn<F>) -> Result<Metric<F>> {
    if a.has_zero() {
        return Err(QrgError::DegenerateMetric(format!(
            "a vanishes at a site: {:?}",
            a.to_c64().0
        )));
    }
    if b.has_zero() {
        return Err(QrgError::DegenerateMetric(format!(
            "b vanishes at a site: {:?}",
            b.to_c64().0
        )));
    }
    let symmetric = a.partial(Dir::One).is_zero() && b.partial(Dir::Two).is_zero();
    Ok(Metric { a, b, symmetric })
}

impl<F: Field> Metric<F> {
    pub fn a(&self) -> &SiteFn<F> {
        &self.a
    }

    pub fn b(&self) -> &SiteFn<F> {
        &self.b
    }

    /// The weight g_i: a for direction 1, b for direction 2.
    pub fn weight(&self, d: Dir) -> &SiteFn<F> {
        match d {
            Dir::One => &self.a,
            Dir::Two => &self.b,
        }
    }

    /// True iff d^1 a = d^2 b = 0, i.e. each edge carries one weight in
    /// both directions.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_real(&self, tol: f64) -> bool {
        (&self.a - self.a.conj()).near_zero(tol) && (&self.b - self.b.conj()).near_zero(tol)
    }

    pub fn as_bitensor(&self) -> Bitensor<F> {
        let mut t = Bitensor::zero();
        t.t[0][0] = self.a.clone();
        t.t[1][1] = self.b.clone();
        t
    }

    /// (e_i, e_i) = 1 / R_i g_i; off-diagonal entries vanish.
    pub fn inverse_diag(&self, d: Dir) -> SiteFn<F> {
        self.weight(d).shift(d).recip()
    }

    /// The bimodule pairing (ω, η) = Σ c_i (R_i d_i) (e_i, e_i).
    pub fn inner(&self, w: &Form1<F>, u: &Form1<F>) -> SiteFn<F> {
        let mut out = SiteFn::zero();
        for d in Dir::ALL {
            out = out + w.coeff(d) * u.coeff(d).shift(d) * self.inverse_diag(d);
        }
        out
    }

    /// ( , ) applied to a bitensor: Σ T^{jj} (e_j, e_j).
    pub fn contract(&self, t: &Bitensor<F>) -> SiteFn<F> {
        t.get(Dir::One, Dir::One) * self.inverse_diag(Dir::One)
            + t.get(Dir::Two, Dir::Two) * self.inverse_diag(Dir::Two)
    }

    /// (ω, g¹) g².
    pub fn lower_left(&self, w: &Form1<F>) -> Form1<F> {
        let mut out = Form1::zero();
        for d in Dir::ALL {
            let gi = Form1::along(d, self.weight(d).clone());
            out.c[d.idx()] = self.inner(w, &gi);
        }
        out
    }

    /// g¹ (g², ω).
    pub fn lower_right(&self, w: &Form1<F>) -> Form1<F> {
        let mut out = Form1::zero();
        for d in Dir::ALL {
            let p = self.inner(&Form1::basis(d), w);
            out = &out + &Form1::along(d, self.weight(d).clone()).right_mul(&p);
        }
        out
    }

    pub fn checks(&self, tol: f64) -> MetricChecks {
        let g = self.as_bitensor();
        let central = plane_waves::<F>()
            .iter()
            .all(|f| g.left_mul(f).sub(&g.right_mul(f)).near_zero(tol));
        let quantum_symmetric = g.wedge().near_zero(tol);
        let real = g.dagger().sub(&g).near_zero(tol);
        MetricChecks {
            central,
            quantum_symmetric,
            real,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Complex64, ExactComplex};
    use proptest::prelude::*;

    type E = ExactComplex;

    #[test]
    fn examples() {
        let g = make_metric(SiteFn::<E>::one(), SiteFn::one()).unwrap();
        assert!(g.is_symmetric());
        assert!(g.checks(0.0).all());

        let g = make_metric(SiteFn::<E>::from_i64s([1, 2, 3, 2]), SiteFn::one()).unwrap();
        assert!(!g.is_symmetric());

        let g = make_metric(SiteFn::<E>::from_i64s([1, 2, 1, 2]), SiteFn::from_i64s([3, 3, 3, 3])).unwrap();
        assert!(g.is_symmetric());
        assert_eq!(g.a().at(crate::calculus::Site::new(0, 1)), &E::from_i64(2));
    }

    #[test]
    fn zero_weight_is_degenerate() {
        let err = make_metric(SiteFn::<E>::from_i64s([1, 0, 1, 1]), SiteFn::one());
        assert!(matches!(err, Err(QrgError::DegenerateMetric(_))));
        let err = make_metric(SiteFn::<E>::one(), SiteFn::from_i64s([1, 1, 1, 0]));
        assert!(matches!(err, Err(QrgError::DegenerateMetric(_))));
    }

    #[test]
    fn complex_weights_are_not_real() {
        let a = SiteFn::<Complex64>::constant(Complex64::new(1.0, 0.5));
        let g = make_metric(a, SiteFn::one()).unwrap();
        let c = g.checks(1e-12);
        assert!(c.central && c.quantum_symmetric && !c.real);
    }

    fn arb_weights() -> impl Strategy<Value = [f64; 4]> {
        prop::array::uniform4(prop_oneof![-10.0f64..-0.1, 0.1f64..10.0])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn inverse_metric_identities(a in arb_weights(), b in arb_weights()) {
            let g = make_metric(
                SiteFn::<Complex64>::from_reals(a).unwrap(),
                SiteFn::from_reals(b).unwrap(),
            ).unwrap();
            for d in Dir::ALL {
                let w = Form1::basis(d);
                prop_assert!((&g.lower_left(&w) - &w).near_zero(1e-12));
                prop_assert!((&g.lower_right(&w) - &w).near_zero(1e-12));
            }
            prop_assert!(g.checks(1e-12).all());
        }

        #[test]
        fn inverse_metric_identities_exact(
            a in prop::array::uniform4(1i64..20),
            b in prop::array::uniform4(-20i64..-1),
            w in prop::array::uniform4(-5i64..5),
        ) {
            let g = make_metric(SiteFn::<E>::from_i64s(a), SiteFn::from_i64s(b)).unwrap();
            let w = Form1::new(SiteFn::from_i64s(w), SiteFn::from_i64s([w[3], w[0], w[2], w[1]]));
            prop_assert_eq!(g.lower_left(&w), w.clone());
            prop_assert_eq!(g.lower_right(&w), w);
        }
    }
}

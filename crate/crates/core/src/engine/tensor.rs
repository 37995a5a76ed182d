use serde::{Deserialize, Serialize};

use crate::calculus::{Dir, Form1, SiteFn};
use crate::scalar::Field;

/// Σ T^{ij} e_i ⊗ e_j with coefficients on the left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Bitensor<F: Field> {
    pub t: [[SiteFn<F>; 2]; 2],
}

/// Σ T^{ijk} e_i ⊗ e_j ⊗ e_k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Tritensor<F: Field> {
    pub t: [[[SiteFn<F>; 2]; 2]; 2],
}

/// Σ w_j Vol ⊗ e_j, an element of Ω² ⊗ Ω¹.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct VolTensor<F: Field> {
    pub w: [SiteFn<F>; 2],
}

fn z<F: Field>() -> SiteFn<F> {
    SiteFn::zero()
}

impl<F: Field> Bitensor<F> {
    pub fn zero() -> Self {
        Bitensor {
            t: [[z(), z()], [z(), z()]],
        }
    }

    /// c e_i ⊗ e_j.
    pub fn elementary(i: Dir, j: Dir, c: SiteFn<F>) -> Self {
        let mut b = Self::zero();
        b.t[i.idx()][j.idx()] = c;
        b
    }

    pub fn get(&self, i: Dir, j: Dir) -> &SiteFn<F> {
        &self.t[i.idx()][j.idx()]
    }

    pub fn map(&self, f: impl Fn(Dir, Dir, &SiteFn<F>) -> SiteFn<F>) -> Self {
        let mut out = Self::zero();
        for i in Dir::ALL {
            for j in Dir::ALL {
                out.t[i.idx()][j.idx()] = f(i, j, self.get(i, j));
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        self.map(|i, j, x| x + o.get(i, j))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.map(|i, j, x| x - o.get(i, j))
    }

    pub fn left_mul(&self, f: &SiteFn<F>) -> Self {
        self.map(|_, _, x| f * x)
    }

    /// (e_i ⊗ e_j) f = (R_i R_j f) e_i ⊗ e_j.
    pub fn right_mul(&self, f: &SiteFn<F>) -> Self {
        self.map(|i, j, x| x * f.shift(j).shift(i))
    }

    /// The tensor product ω ⊗ η of two 1-forms.
    pub fn product(w: &Form1<F>, u: &Form1<F>) -> Self {
        let mut out = Self::zero();
        for i in Dir::ALL {
            for j in Dir::ALL {
                out.t[i.idx()][j.idx()] = w.coeff(i) * u.coeff(j).shift(i);
            }
        }
        out
    }

    /// The wedge ^: Ω¹⊗Ω¹ → Ω², as the Vol coefficient T^{12} - T^{21}.
    pub fn wedge(&self) -> SiteFn<F> {
        self.get(Dir::One, Dir::Two) - self.get(Dir::Two, Dir::One)
    }

    /// (ω⊗η)† = η*⊗ω*. On a basis term,
    /// (T e_j⊗e_k)† = (-e_k) ⊗ (-(R_j conj T) e_j) = (R_k R_j conj T) e_k⊗e_j.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero();
        for j in Dir::ALL {
            for k in Dir::ALL {
                out.t[k.idx()][j.idx()] = self.get(j, k).conj().shift(j).shift(k);
            }
        }
        out
    }

    pub fn near_zero(&self, tol: f64) -> bool {
        self.t.iter().flatten().all(|x| x.near_zero(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.t.iter().flatten().map(|x| x.max_abs()).fold(0.0, f64::max)
    }

    /// The 4x4 matrix row index of e_i ⊗ e_j in the order 11, 12, 21, 22.
    pub fn multi_index(i: Dir, j: Dir) -> usize {
        2 * i.idx() + j.idx()
    }
}

impl<F: Field> Tritensor<F> {
    pub fn zero() -> Self {
        Tritensor {
            t: [[[z(), z()], [z(), z()]], [[z(), z()], [z(), z()]]],
        }
    }

    pub fn get(&self, i: Dir, j: Dir, k: Dir) -> &SiteFn<F> {
        &self.t[i.idx()][j.idx()][k.idx()]
    }

    pub fn add_to(&mut self, i: Dir, j: Dir, k: Dir, v: &SiteFn<F>) {
        let slot = &mut self.t[i.idx()][j.idx()][k.idx()];
        *slot = &*slot + v;
    }

    pub fn near_zero(&self, tol: f64) -> bool {
        self.t.iter().flatten().flatten().all(|x| x.near_zero(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.t
            .iter()
            .flatten()
            .flatten()
            .map(|x| x.max_abs())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().flatten().flatten().all(|x| x.is_zero())
    }
}

impl<F: Field> VolTensor<F> {
    pub fn zero() -> Self {
        VolTensor { w: [z(), z()] }
    }

    pub fn get(&self, j: Dir) -> &SiteFn<F> {
        &self.w[j.idx()]
    }

    pub fn near_zero(&self, tol: f64) -> bool {
        self.w.iter().all(|x| x.near_zero(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.w[0].max_abs().max(self.w[1].max_abs())
    }
}

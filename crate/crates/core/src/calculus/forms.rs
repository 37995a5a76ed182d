use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::sitefn::{Dir, SiteFn};
use crate::scalar::Field;

/// A 1-form c1 e1 + c2 e2 with coefficients written on the left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Form1<F: Field> {
    pub c: [SiteFn<F>; 2],
}

/// A 2-form v Vol with Vol = e1 ^ e2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Form2<F: Field> {
    pub v: SiteFn<F>,
}

impl<F: Field> Form1<F> {
    pub fn new(c1: SiteFn<F>, c2: SiteFn<F>) -> Self {
        Form1 { c: [c1, c2] }
    }

    pub fn zero() -> Self {
        Form1::new(SiteFn::zero(), SiteFn::zero())
    }

    /// The basis form e_dir.
    pub fn basis(dir: Dir) -> Self {
        Self::along(dir, SiteFn::one())
    }

    /// c e_dir.
    pub fn along(dir: Dir, c: SiteFn<F>) -> Self {
        let mut w = Self::zero();
        w.c[dir.idx()] = c;
        w
    }

    pub fn coeff(&self, dir: Dir) -> &SiteFn<F> {
        &self.c[dir.idx()]
    }

    /// f . omega.
    pub fn left_mul(&self, f: &SiteFn<F>) -> Self {
        Form1::new(f * &self.c[0], f * &self.c[1])
    }

    /// omega . f, rewritten with e_i f = (R_i f) e_i.
    pub fn right_mul(&self, f: &SiteFn<F>) -> Self {
        Form1::new(&self.c[0] * f.shift(Dir::One), &self.c[1] * f.shift(Dir::Two))
    }

    /// The *-operation with e_i* = -e_i: (c e_i)* = -(R_i conj c) e_i.
    pub fn star(&self) -> Self {
        Form1::new(
            -self.c[0].conj().shift(Dir::One),
            -self.c[1].conj().shift(Dir::Two),
        )
    }

    pub fn near_zero(&self, tol: f64) -> bool {
        self.c.iter().all(|x| x.near_zero(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.c[0].max_abs().max(self.c[1].max_abs())
    }
}

impl<F: Field> Form2<F> {
    pub fn new(v: SiteFn<F>) -> Self {
        Form2 { v }
    }

    pub fn zero() -> Self {
        Form2::new(SiteFn::zero())
    }

    pub fn vol() -> Self {
        Form2::new(SiteFn::one())
    }

    pub fn near_zero(&self, tol: f64) -> bool {
        self.v.near_zero(tol)
    }
}

impl<F: Field> Add for &Form1<F> {
    type Output = Form1<F>;
    fn add(self, rhs: &Form1<F>) -> Form1<F> {
        Form1::new(&self.c[0] + &rhs.c[0], &self.c[1] + &rhs.c[1])
    }
}

impl<F: Field> Sub for &Form1<F> {
    type Output = Form1<F>;
    fn sub(self, rhs: &Form1<F>) -> Form1<F> {
        Form1::new(&self.c[0] - &rhs.c[0], &self.c[1] - &rhs.c[1])
    }
}

impl<F: Field> Neg for &Form1<F> {
    type Output = Form1<F>;
    fn neg(self) -> Form1<F> {
        Form1::new(-&self.c[0], -&self.c[1])
    }
}

/// Sign of e_i ^ e_j as a multiple of Vol.
pub fn vol_sign(i: Dir, j: Dir) -> i64 {
    match (i, j) {
        (Dir::One, Dir::Two) => 1,
        (Dir::Two, Dir::One) => -1,
        _ => 0,
    }
}

/// df = (d^1 f) e1 + (d^2 f) e2.
pub fn d0<F: Field>(f: &SiteFn<F>) -> Form1<F> {
    Form1::new(f.partial(Dir::One), f.partial(Dir::Two))
}

/// d(c_i e_i) = dc_i ^ e_i, using de_i = 0.
pub fn d1<F: Field>(w: &Form1<F>) -> Form2<F> {
    Form2::new(w.c[1].partial(Dir::One) - w.c[0].partial(Dir::Two))
}

/// (c_i e_i) ^ (d_j e_j) = c_i (R_i d_j) e_i ^ e_j.
pub fn wedge<F: Field>(w: &Form1<F>, u: &Form1<F>) -> Form2<F> {
    Form2::new(
        &w.c[0] * u.c[1].shift(Dir::One) - &w.c[1] * u.c[0].shift(Dir::Two),
    )
}

pub fn right_multiply<F: Field>(w: &Form1<F>, f: &SiteFn<F>) -> Form1<F> {
    w.right_mul(f)
}

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{Complex64, Field};

/// A vertex (i, j) of Z2 x Z2. Its index in every array is 2i + j, so the
/// order is 00, 01, 10, 11.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub i: u8,
    pub j: u8,
}

impl Site {
    pub const ALL: [Site; 4] = [
        Site { i: 0, j: 0 },
        Site { i: 0, j: 1 },
        Site { i: 1, j: 0 },
        Site { i: 1, j: 1 },
    ];

    pub fn new(i: u8, j: u8) -> Site {
        assert!(i < 2 && j < 2, "site coordinates are bits");
        Site { i, j }
    }

    pub fn index(self) -> usize {
        2 * self.i as usize + self.j as usize
    }

    pub fn from_index(x: usize) -> Site {
        Site::new((x >> 1) as u8, (x & 1) as u8)
    }

    pub fn label(self) -> String {
        format!("{}{}", self.i, self.j)
    }

    /// The neighbour reached by shifting along `dir`.
    pub fn shifted(self, dir: Dir) -> Site {
        Site::from_index(self.index() ^ dir.mask())
    }
}

/// One of the two generators of the Cayley calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    One,
    Two,
}

impl Dir {
    pub const ALL: [Dir; 2] = [Dir::One, Dir::Two];

    /// 0 for direction 1, 1 for direction 2.
    pub fn idx(self) -> usize {
        match self {
            Dir::One => 0,
            Dir::Two => 1,
        }
    }

    pub fn from_idx(i: usize) -> Dir {
        match i {
            0 => Dir::One,
            1 => Dir::Two,
            _ => panic!("direction index {i} out of range"),
        }
    }

    /// Parses the 1-based label used in formulas.
    pub fn from_label(n: u8) -> Option<Dir> {
        match n {
            1 => Some(Dir::One),
            2 => Some(Dir::Two),
            _ => None,
        }
    }

    pub fn other(self) -> Dir {
        match self {
            Dir::One => Dir::Two,
            Dir::Two => Dir::One,
        }
    }

    fn mask(self) -> usize {
        match self {
            Dir::One => 2,
            Dir::Two => 1,
        }
    }
}

/// A function on the four sites, the coordinate algebra A = C(Z2 x Z2).
#[derive(Debug, Clone, PartialEq)]
pub struct SiteFn<F: Field>(pub [F; 4]);

impl<F: Field> SiteFn<F> {
    pub fn new(values: [F; 4]) -> Self {
        SiteFn(values)
    }

    pub fn from_fn(mut f: impl FnMut(Site) -> F) -> Self {
        SiteFn([
            f(Site::ALL[0]),
            f(Site::ALL[1]),
            f(Site::ALL[2]),
            f(Site::ALL[3]),
        ])
    }

    pub fn constant(c: F) -> Self {
        SiteFn([c.clone(), c.clone(), c.clone(), c])
    }

    pub fn zero() -> Self {
        Self::constant(F::zero())
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn from_i64s(v: [i64; 4]) -> Self {
        SiteFn(v.map(F::from_i64))
    }

    /// Converts floating values; fails only for non-finite input in the
    /// exact regime.
    pub fn from_c64s(v: [Complex64; 4]) -> Option<Self> {
        Some(SiteFn([
            F::from_c64(v[0])?,
            F::from_c64(v[1])?,
            F::from_c64(v[2])?,
            F::from_c64(v[3])?,
        ]))
    }

    pub fn from_reals(v: [f64; 4]) -> Option<Self> {
        Self::from_c64s(v.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn at(&self, s: Site) -> &F {
        &self.0[s.index()]
    }

    pub fn values(&self) -> &[F; 4] {
        &self.0
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        SiteFn([f(&self.0[0]), f(&self.0[1]), f(&self.0[2]), f(&self.0[3])])
    }

    pub fn zip(&self, other: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        SiteFn([
            f(&self.0[0], &other.0[0]),
            f(&self.0[1], &other.0[1]),
            f(&self.0[2], &other.0[2]),
            f(&self.0[3], &other.0[3]),
        ])
    }

    /// R_dir f: (R1 f)(i, j) = f(i + 1, j), (R2 f)(i, j) = f(i, j + 1).
    pub fn shift(&self, dir: Dir) -> Self {
        let m = dir.mask();
        SiteFn([
            self.0[m].clone(),
            self.0[1 ^ m].clone(),
            self.0[2 ^ m].clone(),
            self.0[3 ^ m].clone(),
        ])
    }

    /// The partial difference R_dir f - f.
    pub fn partial(&self, dir: Dir) -> Self {
        &self.shift(dir) - self
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn recip(&self) -> Self {
        self.map(|x| x.recip())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Regime-aware zero test: exact in the exact regime.
    pub fn near_zero(&self, tol: f64) -> bool {
        self.0.iter().all(|x| x.near_zero(tol))
    }

    pub fn has_zero(&self) -> bool {
        self.0.iter().any(|x| x.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> F {
        self.0[0].clone() + self.0[1].clone() + self.0[2].clone() + self.0[3].clone()
    }

    pub fn to_c64(&self) -> SiteFn<Complex64> {
        SiteFn(self.0.clone().map(|x| x.to_c64()))
    }
}

/// sup over sites of |f - g|, computed in floating point.
pub fn sup_distance<F: Field>(f: &SiteFn<F>, g: &SiteFn<F>) -> f64 {
    (f - g).max_abs()
}

macro_rules! pointwise {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<F: Field> $tr<&SiteFn<F>> for &SiteFn<F> {
            type Output = SiteFn<F>;
            fn $m(self, rhs: &SiteFn<F>) -> SiteFn<F> {
                self.zip(rhs, |x, y| x.clone() $op y.clone())
            }
        }
        impl<F: Field> $tr<SiteFn<F>> for SiteFn<F> {
            type Output = SiteFn<F>;
            fn $m(self, rhs: SiteFn<F>) -> SiteFn<F> {
                &self $op &rhs
            }
        }
        impl<F: Field> $tr<&SiteFn<F>> for SiteFn<F> {
            type Output = SiteFn<F>;
            fn $m(self, rhs: &SiteFn<F>) -> SiteFn<F> {
                &self $op rhs
            }
        }
        impl<F: Field> $tr<SiteFn<F>> for &SiteFn<F> {
            type Output = SiteFn<F>;
            fn $m(self, rhs: SiteFn<F>) -> SiteFn<F> {
                self $op &rhs
            }
        }
    };
}

pointwise!(Add, add, +);
pointwise!(Sub, sub, -);
pointwise!(Mul, mul, *);
pointwise!(Div, div, /);

impl<F: Field> Neg for SiteFn<F> {
    type Output = SiteFn<F>;
    fn neg(self) -> SiteFn<F> {
        self.map(|x| -x.clone())
    }
}

impl<F: Field> Neg for &SiteFn<F> {
    type Output = SiteFn<F>;
    fn neg(self) -> SiteFn<F> {
        self.map(|x| -x.clone())
    }
}

/// The plane waves 1, phi, psi, chi.
pub fn plane_waves<F: Field>() -> [SiteFn<F>; 4] {
    [
        SiteFn::from_i64s([1, 1, 1, 1]),
        phi(),
        psi(),
        chi(),
    ]
}

/// phi(i, j) = (-1)^i.
pub fn phi<F: Field>() -> SiteFn<F> {
    SiteFn::from_i64s([1, 1, -1, -1])
}

/// psi(i, j) = (-1)^j.
pub fn psi<F: Field>() -> SiteFn<F> {
    SiteFn::from_i64s([1, -1, 1, -1])
}

/// chi(i, j) = (-1)^(i+j).
pub fn chi<F: Field>() -> SiteFn<F> {
    SiteFn::from_i64s([1, -1, -1, 1])
}

// JSON form: four [re, im] pairs in site order. Exact values are written as
// their nearest doubles.
impl<F: Field> Serialize for SiteFn<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self
            .0
            .iter()
            .map(|x| {
                let z = x.to_c64();
                [z.re, z.im]
            })
            .collect();
        pairs.serialize(s)
    }
}

impl<'de, F: Field> Deserialize<'de> for SiteFn<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = <[[f64; 2]; 4]>::deserialize(d)?;
        SiteFn::from_c64s(pairs.map(|[re, im]| Complex64::new(re, im)))
            .ok_or_else(|| D::Error::custom("non-finite site value"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;

    type E = ExactComplex;

    #[test]
    fn site_order_is_binary() {
        let labels: Vec<String> = Site::ALL.iter().map(|s| s.label()).collect();
        assert_eq!(labels, ["00", "01", "10", "11"]);
        for (x, s) in Site::ALL.iter().enumerate() {
            assert_eq!(s.index(), x);
        }
        assert_eq!(Site::new(0, 1).shifted(Dir::One), Site::new(1, 1));
        assert_eq!(Site::new(0, 1).shifted(Dir::Two), Site::new(0, 0));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(phi::<E>().shift(Dir::One), -phi::<E>());
        assert_eq!(psi::<E>().shift(Dir::Two), -psi::<E>());
        let c = SiteFn::<E>::constant(E::from_ratio(3, 7));
        assert_eq!(c.shift(Dir::One), c);
        let f = SiteFn::<E>::from_i64s([1, 2, 3, 4]);
        assert_eq!(f.shift(Dir::One), SiteFn::from_i64s([3, 4, 1, 2]));
        assert_eq!(f.shift(Dir::Two), SiteFn::from_i64s([2, 1, 4, 3]));
        assert_eq!(f.shift(Dir::One).shift(Dir::One), f);
        assert_eq!(f.shift(Dir::One).shift(Dir::Two), f.shift(Dir::Two).shift(Dir::One));
    }

    #[test]
    fn partial_on_plane_waves() {
        let two = E::from_i64(-2);
        assert_eq!(phi::<E>().partial(Dir::One), phi::<E>().scale(&two));
        assert!(phi::<E>().partial(Dir::Two).is_zero());
        assert!(psi::<E>().partial(Dir::One).is_zero());
        assert_eq!(psi::<E>().partial(Dir::Two), psi::<E>().scale(&two));
        assert_eq!(chi::<E>().partial(Dir::One), chi::<E>().scale(&two));
        assert_eq!(chi::<E>().partial(Dir::Two), chi::<E>().scale(&two));
        assert!(SiteFn::<E>::constant(E::from_i64(5)).partial(Dir::Two).is_zero());
    }

    #[test]
    fn plane_wave_facts() {
        let [one, ph, ps, ch] = plane_waves::<E>();
        assert_eq!(&ph * &ps, ch);
        for w in [&one, &ph, &ps, &ch] {
            assert_eq!(w * w, one);
        }
        assert!(ph.sum().is_zero());
        assert!(ps.sum().is_zero());
        assert!(ch.sum().is_zero());
    }

    #[test]
    fn partial_squared_is_minus_two_partial() {
        let f = SiteFn::<E>::from_i64s([3, -1, 4, 9]);
        for d in Dir::ALL {
            assert_eq!(f.partial(d).partial(d), f.partial(d).scale(&E::from_i64(-2)));
        }
    }

    #[test]
    fn json_round_trip() {
        let f = SiteFn::<Complex64>::from_c64s([
            Complex64::new(1.0, 0.5),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 3.0),
            Complex64::new(4.25, -1.0),
        ])
        .unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[1.0,0.5],[-2.0,0.0],[0.0,3.0],[4.25,-1.0]]");
        let g: SiteFn<Complex64> = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        let e: SiteFn<E> = serde_json::from_str(&s).unwrap();
        assert_eq!(e.to_c64(), f);
    }
}

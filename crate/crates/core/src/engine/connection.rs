use serde::{Deserialize, Serialize};

use crate::calculus::{chi, d0, phi, plane_waves, psi, vol_sign, Dir, Form1, Form2, SiteFn};
use crate::error::{QrgError, Result};
use crate::scalar::{Complex64, Field};

use super::metric::Metric;
use super::tensor::{Bitensor, Tritensor, VolTensor};

/// Coefficients of a left connection, ∇e_i = Σ C_i^{jk} e_j ⊗ e_k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Coefficients<F: Field> {
    /// Indexed `c[i][j][k]` with 0 for direction 1.
    pub c: [[[SiteFn<F>; 2]; 2]; 2],
}

/// The braiding of a bimodule connection: `s[i][m]` is σ(e_i ⊗ e_m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Sigma<F: Field> {
    pub s: [[Bitensor<F>; 2]; 2],
}

/// A bimodule connection on Ω¹: coefficients together with the braiding
/// they determine.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection<F: Field> {
    coeffs: Coefficients<F>,
    sigma: Sigma<F>,
}

impl<F: Field> Coefficients<F> {
    pub fn zero() -> Self {
        let z = || SiteFn::zero();
        Coefficients {
            c: [[[z(), z()], [z(), z()]], [[z(), z()], [z(), z()]]],
        }
    }

    pub fn get(&self, i: Dir, j: Dir, k: Dir) -> &SiteFn<F> {
        &self.c[i.idx()][j.idx()][k.idx()]
    }

    pub fn set(&mut self, i: Dir, j: Dir, k: Dir, v: SiteFn<F>) {
        self.c[i.idx()][j.idx()][k.idx()] = v;
    }

    /// ∇e_i as a bitensor.
    pub fn nabla_basis(&self, i: Dir) -> Bitensor<F> {
        Bitensor {
            t: self.c[i.idx()].clone(),
        }
    }

    /// ∇(c_i e_i) = Σ_j (d^j c_i) e_j ⊗ e_i + c_i ∇e_i.
    pub fn apply(&self, w: &Form1<F>) -> Bitensor<F> {
        let mut out = Bitensor::zero();
        for i in Dir::ALL {
            let ci = w.coeff(i);
            for j in Dir::ALL {
                out.t[j.idx()][i.idx()] = &out.t[j.idx()][i.idx()] + ci.partial(j);
                for k in Dir::ALL {
                    out.t[j.idx()][k.idx()] = &out.t[j.idx()][k.idx()] + ci * self.get(i, j, k);
                }
            }
        }
        out
    }

    /// ∇(e_i f) - (∇e_i) f, which equals σ(e_i ⊗ df) for a bimodule connection.
    pub(crate) fn right_leibniz_defect(&self, i: Dir, f: &SiteFn<F>) -> Bitensor<F> {
        let lhs = self.apply(&Form1::along(i, f.shift(i)));
        lhs.sub(&self.nabla_basis(i).right_mul(f))
    }

    pub fn max_abs(&self) -> f64 {
        self.c
            .iter()
            .flatten()
            .flatten()
            .map(|x| x.max_abs())
            .fold(0.0, f64::max)
    }

    pub fn to_c64(&self) -> Coefficients<Complex64> {
        let mut out = Coefficients::zero();
        for i in Dir::ALL {
            for j in Dir::ALL {
                for k in Dir::ALL {
                    out.set(i, j, k, self.get(i, j, k).to_c64());
                }
            }
        }
        out
    }
}

/// sup distance between two coefficient sets.
pub fn coefficient_distance<F: Field>(x: &Coefficients<F>, y: &Coefficients<F>) -> f64 {
    let mut m: f64 = 0.0;
    for i in Dir::ALL {
        for j in Dir::ALL {
            for k in Dir::ALL {
                m = m.max((x.get(i, j, k) - y.get(i, j, k)).max_abs());
            }
        }
    }
    m
}

impl<F: Field> Sigma<F> {
    pub fn get(&self, i: Dir, m: Dir) -> &Bitensor<F> {
        &self.s[i.idx()][m.idx()]
    }

    /// σ applied to Σ T^{im} e_i ⊗ e_m, using left linearity.
    pub fn apply(&self, t: &Bitensor<F>) -> Bitensor<F> {
        let mut out = Bitensor::zero();
        for i in Dir::ALL {
            for m in Dir::ALL {
                out = out.add(&self.get(i, m).left_mul(t.get(i, m)));
            }
        }
        out
    }

    /// The coefficient σ^{jk}_{im}: the e_j⊗e_k part of σ(e_i⊗e_m).
    pub fn entry(&self, j: Dir, k: Dir, i: Dir, m: Dir) -> &SiteFn<F> {
        self.get(i, m).get(j, k)
    }

    /// Per-site 4x4 matrices M[out][in] in multi-index order 11, 12, 21, 22.
    pub fn matrices(&self) -> [[[F; 4]; 4]; 4] {
        let mut out: [[[F; 4]; 4]; 4] = std::array::from_fn(|_| {
            std::array::from_fn(|_| std::array::from_fn(|_| F::zero()))
        });
        for i in Dir::ALL {
            for m in Dir::ALL {
                for j in Dir::ALL {
                    for k in Dir::ALL {
                        let v = self.entry(j, k, i, m);
                        for (x, slot) in out.iter_mut().enumerate() {
                            slot[Bitensor::<F>::multi_index(j, k)][Bitensor::<F>::multi_index(i, m)] =
                                v.0[x].clone();
                        }
                    }
                }
            }
        }
        out
    }

    pub fn to_c64(&self) -> Sigma<Complex64> {
        Sigma {
            s: std::array::from_fn(|i| {
                std::array::from_fn(|m| {
                    let b = &self.s[i][m];
                    Bitensor {
                        t: std::array::from_fn(|j| std::array::from_fn(|k| b.t[j][k].to_c64())),
                    }
                })
            }),
        }
    }
}

/// Solves σ(e_i ⊗ df) = ∇(e_i f) - (∇e_i) f for σ.
///
/// dφ = -2φ e1 and dψ = -2ψ e2 have invertible coefficients, so f = φ, ψ
/// fix σ(e_i ⊗ e1) and σ(e_i ⊗ e2). f = χ, whose differential uses both
/// directions, is then a consistency check, and σ must also commute with
/// right multiplication: σ^{jk}_{im} = 0 unless R_j R_k = R_i R_m.
pub fn derive_sigma<F: Field>(c: &Coefficients<F>, tol: f64) -> Result<Sigma<F>> {
    let m2 = F::from_i64(-2);
    let mut s: [[Bitensor<F>; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| Bitensor::zero()));
    for i in Dir::ALL {
        let f1 = c.right_leibniz_defect(i, &phi());
        let f2 = c.right_leibniz_defect(i, &psi());
        let s1 = f1.left_mul(&phi::<F>().scale(&m2).shift(i).recip());
        let s2 = f2.left_mul(&psi::<F>().scale(&m2).shift(i).recip());
        let check = c
            .right_leibniz_defect(i, &chi())
            .sub(&s1.add(&s2).left_mul(&chi::<F>().scale(&m2).shift(i)));
        if !check.near_zero(tol) {
            return Err(QrgError::NotBimoduleConnection(format!(
                "right Leibniz rule for e{} is inconsistent on chi (defect {:.3e})",
                i.idx() + 1,
                check.max_abs()
            )));
        }
        s[i.idx()] = [s1, s2];
    }
    let sigma = Sigma { s };
    for i in Dir::ALL {
        for m in Dir::ALL {
            for j in Dir::ALL {
                for k in Dir::ALL {
                    if (j == k) != (i == m) && !sigma.entry(j, k, i, m).near_zero(tol) {
                        return Err(QrgError::NotBimoduleConnection(format!(
                            "sigma(e{}⊗e{}) has an e{}⊗e{} part, so it does not commute with functions",
                            i.idx() + 1,
                            m.idx() + 1,
                            j.idx() + 1,
                            k.idx() + 1
                        )));
                    }
                }
            }
        }
    }
    Ok(sigma)
}

impl<F: Field> Connection<F> {
    /// Derives σ and keeps it; fails if the coefficients do not define a
    /// bimodule connection.
    pub fn new(coeffs: Coefficients<F>, tol: f64) -> Result<Self> {
        let sigma = derive_sigma(&coeffs, tol)?;
        Ok(Connection { coeffs, sigma })
    }

    /// Pairs coefficients with a braiding without checking them.
    pub(crate) fn from_parts(coeffs: Coefficients<F>, sigma: Sigma<F>) -> Self {
        Connection { coeffs, sigma }
    }

    pub fn coeffs(&self) -> &Coefficients<F> {
        &self.coeffs
    }

    pub fn sigma(&self) -> &Sigma<F> {
        &self.sigma
    }

    pub fn apply(&self, w: &Form1<F>) -> Bitensor<F> {
        self.coeffs.apply(w)
    }

    /// T∇e_i = ^(∇e_i) - de_i, as Vol coefficients; de_i = 0.
    pub fn torsion(&self) -> [Form2<F>; 2] {
        Dir::ALL.map(|i| Form2::new(self.coeffs.nabla_basis(i).wedge()))
    }

    pub fn torsion_residual(&self) -> f64 {
        self.torsion().iter().map(|t| t.v.max_abs()).fold(0.0, f64::max)
    }

    /// coT = (d⊗id - id^∇) g.
    ///
    /// (d⊗id)(g_i e_i⊗e_i) = (dg_i ^ e_i) ⊗ e_i and
    /// (id^∇)(g_i e_i⊗e_i) = g_i (R_i C_i^{mn}) e_i ^ e_m ⊗ e_n.
    pub fn cotorsion(&self, g: &Metric<F>) -> VolTensor<F> {
        let mut out = VolTensor::zero();
        for i in Dir::ALL {
            let gi = g.weight(i);
            let dgi = crate::calculus::d1(&Form1::along(i, gi.clone())).v;
            out.w[i.idx()] = &out.w[i.idx()] + dgi;
            for m in Dir::ALL {
                let sgn = vol_sign(i, m);
                if sgn == 0 {
                    continue;
                }
                for n in Dir::ALL {
                    let term = (gi * self.coeffs.get(i, m, n).shift(i)).scale(&F::from_i64(sgn));
                    out.w[n.idx()] = &out.w[n.idx()] - term;
                }
            }
        }
        out
    }

    /// ∇g with the tensor-product rule ∇(ω⊗η) = ∇ω⊗η + (σ⊗id)(ω⊗∇η).
    pub fn nabla_g(&self, g: &Metric<F>) -> Tritensor<F> {
        let mut out = Tritensor::zero();
        for i in Dir::ALL {
            let w = g.weight(i);
            // ∇(w e_i) ⊗ e_i
            let first = self.apply(&Form1::along(i, w.clone()));
            for j in Dir::ALL {
                for k in Dir::ALL {
                    out.add_to(j, k, i, first.get(j, k));
                }
            }
            // w e_i ⊗ C_i^{mn} e_m ⊗ e_n = w R_i(C_i^{mn}) e_i ⊗ e_m ⊗ e_n
            for m in Dir::ALL {
                for n in Dir::ALL {
                    let coef = w * self.coeffs.get(i, m, n).shift(i);
                    let s = self.sigma.get(i, m);
                    for j in Dir::ALL {
                        for k in Dir::ALL {
                            out.add_to(j, k, n, &(&coef * s.get(j, k)));
                        }
                    }
                }
            }
        }
        out
    }

    /// ρ with R∇e_i = ρ_{in} Vol ⊗ e_n, from R∇ = (d⊗id - id^∇)∇:
    /// ρ_{in} = d^1 C_i^{2n} - d^2 C_i^{1n}
    ///          - Σ_k (C_i^{1k} R1 C_k^{2n} - C_i^{2k} R2 C_k^{1n}).
    pub fn curvature(&self) -> Curvature<F> {
        let c = &self.coeffs;
        let (one, two) = (Dir::One, Dir::Two);
        let rho = Dir::ALL.map(|i| {
            Dir::ALL.map(|n| {
                let mut r = c.get(i, two, n).partial(one) - c.get(i, one, n).partial(two);
                for k in Dir::ALL {
                    r = r - c.get(i, one, k) * c.get(k, two, n).shift(one)
                        + c.get(i, two, k) * c.get(k, one, n).shift(two);
                }
                r
            })
        });
        Curvature { rho }
    }

    /// Ricci = ((,)⊗id)(id⊗i⊗id)(id⊗R∇)(g) with i(Vol) = ½(e1⊗e2 - e2⊗e1).
    pub fn ricci(&self, g: &Metric<F>) -> RicciTensor<F> {
        let rho = self.curvature().rho;
        let half = F::from_ratio(1, 2);
        let mut t = Bitensor::zero();
        for i in Dir::ALL {
            // (id⊗R∇)(g_i e_i⊗e_i) = g_i (R_i ρ_{ij}) e_i ⊗ Vol ⊗ e_j
            let gi = g.weight(i);
            for j in Dir::ALL {
                let coef = gi * rho[i.idx()][j.idx()].shift(i);
                // lift: e_i ⊗ ½(e1⊗e2 - e2⊗e1) ⊗ e_j, then pair the first two legs
                for (a, b, sgn) in [(Dir::One, Dir::Two, 1), (Dir::Two, Dir::One, -1)] {
                    if a != i {
                        continue;
                    }
                    let pair = g.inverse_diag(i);
                    let v = (&coef * &pair).scale(&half).scale(&F::from_i64(sgn));
                    t.t[b.idx()][j.idx()] = &t.t[b.idx()][j.idx()] + v;
                }
            }
        }
        RicciTensor { t }
    }

    /// S = (,)(Ricci).
    pub fn scalar_curvature(&self, g: &Metric<F>) -> SiteFn<F> {
        g.contract(&self.ricci(g).t)
    }

    /// Δf = (,)∇(df).
    pub fn laplacian(&self, g: &Metric<F>, f: &SiteFn<F>) -> SiteFn<F> {
        g.contract(&self.apply(&d0(f)))
    }

    /// Largest defect of ∇(ξ*) = σ(†(∇ξ)) over the complex basis
    /// {1, φ, ψ, χ}·e_i of Ω¹. Both sides are antilinear in ξ, so the basis
    /// suffices.
    pub fn reality_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in Dir::ALL {
            for f in plane_waves::<F>() {
                let xi = Form1::along(i, f);
                let lhs = self.apply(&xi.star());
                let rhs = self.sigma.apply(&self.apply(&xi).dagger());
                m = m.max(lhs.sub(&rhs).max_abs());
            }
        }
        m
    }

    /// Exact check in the exact regime; within `tol` otherwise.
    pub fn is_real(&self, tol: f64) -> bool {
        for i in Dir::ALL {
            for f in plane_waves::<F>() {
                let xi = Form1::along(i, f);
                let lhs = self.apply(&xi.star());
                let rhs = self.sigma.apply(&self.apply(&xi).dagger());
                if !lhs.sub(&rhs).near_zero(tol) {
                    return false;
                }
            }
        }
        true
    }
}

/// R∇e_i = ρ_{ij} Vol ⊗ e_j.
#[derive(Debug, Clone, PartialEq)]
pub struct Curvature<F: Field> {
    pub rho: [[SiteFn<F>; 2]; 2],
}

impl<F: Field> Curvature<F> {
    pub fn get(&self, i: Dir, j: Dir) -> &SiteFn<F> {
        &self.rho[i.idx()][j.idx()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicciTensor<F: Field> {
    pub t: Bitensor<F>,
}

/// Free-standing forms of the connection operations.
pub fn apply_connection<F: Field>(n: &Connection<F>, w: &Form1<F>) -> Bitensor<F> {
    n.apply(w)
}

pub fn torsion<F: Field>(n: &Connection<F>) -> [Form2<F>; 2] {
    n.torsion()
}

pub fn cotorsion<F: Field>(n: &Connection<F>, g: &Metric<F>) -> VolTensor<F> {
    n.cotorsion(g)
}

pub fn nabla_g<F: Field>(n: &Connection<F>, g: &Metric<F>) -> Tritensor<F> {
    n.nabla_g(g)
}

pub fn curvature<F: Field>(n: &Connection<F>) -> Curvature<F> {
    n.curvature()
}

pub fn ricci<F: Field>(n: &Connection<F>, g: &Metric<F>) -> RicciTensor<F> {
    n.ricci(g)
}

pub fn scalar_curvature<F: Field>(r: &RicciTensor<F>, g: &Metric<F>) -> SiteFn<F> {
    g.contract(&r.t)
}

pub fn laplacian<F: Field>(n: &Connection<F>, g: &Metric<F>, f: &SiteFn<F>) -> SiteFn<F> {
    n.laplacian(g, f)
}

pub fn connection_reality<F: Field>(n: &Connection<F>, tol: f64) -> bool {
    n.is_real(tol)
}

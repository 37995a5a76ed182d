//! The Laplacian of the family as a 4x4 operator and its spectrum.

use serde::Serialize;

use crate::calculus::{Site, SiteFn};
use crate::error::Result;
use crate::scalar::{Complex64, Phase};

use super::family::{eigenvalues4, qlc_family};
use super::params::{momentum_to_metric, ModelParams, MomentumParams};

/// Imaginary parts below this count as real.
pub const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Δ in the site basis: column y is Δ applied to the delta function at y.
    pub matrix: [[Complex64; 4]; 4],
    /// Ascending real part, ties broken by imaginary part.
    pub eigenvalues: [Complex64; 4],
    /// True where the eigenvalue is non-real and its conjugate is also present.
    pub conjugate_pair: [bool; 4],
}

impl Spectrum {
    pub fn from_matrix(matrix: [[Complex64; 4]; 4]) -> Spectrum {
        let eigenvalues = sort_eigenvalues(eigenvalues4(&matrix));
        let conjugate_pair = std::array::from_fn(|x| {
            let z = eigenvalues[x];
            z.im.abs() > REAL_TOL
                && eigenvalues
                    .iter()
                    .enumerate()
                    .any(|(y, w)| y != x && (w - z.conj()).norm() <= 1e-7 * (1.0 + z.norm()))
        });
        Spectrum {
            matrix,
            eigenvalues,
            conjugate_pair,
        }
    }

    pub fn nonreal_count(&self) -> usize {
        self.eigenvalues.iter().filter(|z| z.im.abs() > REAL_TOL).count()
    }
}

/// Sorted by real part (quantised to 1e-9 so conjugate pairs stay adjacent),
/// then imaginary part.
pub fn sort_eigenvalues(mut ev: [Complex64; 4]) -> [Complex64; 4] {
    ev.sort_by(|a, b| {
        let ka = (a.re * 1e9).round();
        let kb = (b.re * 1e9).round();
        ka.total_cmp(&kb).then(a.im.total_cmp(&b.im))
    });
    ev
}

/// Δ for the family member with metric a = k0 + k1ψ, b = l0 + l1φ at q,
/// computed as (,)∇d on each delta function.
pub fn laplacian_matrix(m: &MomentumParams, q: Phase) -> Result<Spectrum> {
    let v = momentum_to_metric(m)?;
    let p = ModelParams::new(v, q);
    let n = qlc_family::<Complex64>(&p)?;
    let g = v.metric::<Complex64>()?;
    let mut matrix = [[Complex64::new(0.0, 0.0); 4]; 4];
    for y in Site::ALL {
        let delta = SiteFn::from_fn(|s| {
            if s == y {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let col = n.laplacian(&g, &delta);
        for x in 0..4 {
            matrix[x][y.index()] = col.0[x];
        }
    }
    Ok(Spectrum::from_matrix(matrix))
}

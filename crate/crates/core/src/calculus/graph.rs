//! First-order calculus of an arbitrary finite directed graph.
//!
//! Ω¹ has one basis element per arrow x→y, with f ω_{x→y} = f(x) ω_{x→y},
//! ω_{x→y} f = f(y) ω_{x→y} and df = Σ (f(y) - f(x)) ω_{x→y}. Only the
//! first-order level lives here; the square graph is converted to the
//! e1, e2 basis where everything else is built.

use super::forms::Form1;
use super::sitefn::{Dir, Site, SiteFn};
use crate::error::{QrgError, Result};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
}

/// A 1-form as one coefficient per arrow, in the graph's arrow order.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrowForm<F: Field> {
    pub coeffs: Vec<F>,
}

impl DirectedGraph {
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        for &(x, y) in &arrows {
            if x >= vertices || y >= vertices {
                return Err(QrgError::InvalidInput(format!(
                    "arrow {x}->{y} leaves the vertex set 0..{vertices}"
                )));
            }
            if x == y {
                return Err(QrgError::InvalidInput(format!("self-loop at {x}")));
            }
        }
        let mut seen = arrows.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != arrows.len() {
            return Err(QrgError::InvalidInput("repeated arrow".into()));
        }
        Ok(DirectedGraph { vertices, arrows })
    }

    /// The Cayley graph of Z2 x Z2 with generators R1, R2: the square with
    /// every edge bi-directed.
    pub fn square() -> Self {
        let mut arrows = Vec::new();
        for s in Site::ALL {
            for d in Dir::ALL {
                arrows.push((s.index(), s.shifted(d).index()));
            }
        }
        DirectedGraph {
            vertices: 4,
            arrows,
        }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn arrow_index(&self, x: usize, y: usize) -> Option<usize> {
        self.arrows.iter().position(|&a| a == (x, y))
    }

    pub fn is_bidirected(&self) -> bool {
        self.arrows
            .iter()
            .all(|&(x, y)| self.arrow_index(y, x).is_some())
    }

    pub fn d<F: Field>(&self, f: &[F]) -> ArrowForm<F> {
        assert_eq!(f.len(), self.vertices);
        ArrowForm {
            coeffs: self
                .arrows
                .iter()
                .map(|&(x, y)| f[y].clone() - f[x].clone())
                .collect(),
        }
    }

    pub fn left_mul<F: Field>(&self, f: &[F], w: &ArrowForm<F>) -> ArrowForm<F> {
        ArrowForm {
            coeffs: self
                .arrows
                .iter()
                .zip(&w.coeffs)
                .map(|(&(x, _), c)| f[x].clone() * c.clone())
                .collect(),
        }
    }

    pub fn right_mul<F: Field>(&self, w: &ArrowForm<F>, f: &[F]) -> ArrowForm<F> {
        ArrowForm {
            coeffs: self
                .arrows
                .iter()
                .zip(&w.coeffs)
                .map(|(&(_, y), c)| c.clone() * f[y].clone())
                .collect(),
        }
    }

    /// ω_{x→y}* = -ω_{y→x}, extended antilinearly. Needs a bi-directed graph.
    pub fn star<F: Field>(&self, w: &ArrowForm<F>) -> Result<ArrowForm<F>> {
        let mut out = vec![F::zero(); self.arrows.len()];
        for (n, &(x, y)) in self.arrows.iter().enumerate() {
            let back = self.arrow_index(y, x).ok_or_else(|| {
                QrgError::InvalidInput(format!("arrow {x}->{y} has no reverse"))
            })?;
            // (c(x) ω_{x→y})* = -ω_{y→x} conj c(x) = -conj c(x) ω_{y→x}
            out[back] = -w.coeffs[n].conj();
        }
        Ok(ArrowForm { coeffs: out })
    }
}

/// Sums the square-graph arrows into e1 = Σ ω_{x→R1 x}, e2 = Σ ω_{x→R2 x}.
pub fn square_to_cayley<F: Field>(g: &DirectedGraph, w: &ArrowForm<F>) -> Result<Form1<F>> {
    if g.vertices() != 4 {
        return Err(QrgError::InvalidInput("not a four-vertex graph".into()));
    }
    let mut used = 0;
    let mut c = [SiteFn::<F>::zero(), SiteFn::<F>::zero()];
    for d in Dir::ALL {
        for s in Site::ALL {
            let n = g
                .arrow_index(s.index(), s.shifted(d).index())
                .ok_or_else(|| QrgError::InvalidInput("graph is not the square".into()))?;
            c[d.idx()].0[s.index()] = w.coeffs[n].clone();
            used += 1;
        }
    }
    if used != g.arrows().len() {
        return Err(QrgError::InvalidInput(
            "graph has arrows outside the square".into(),
        ));
    }
    let [c1, c2] = c;
    Ok(Form1::new(c1, c2))
}

pub fn cayley_to_square<F: Field>(g: &DirectedGraph, w: &Form1<F>) -> Result<ArrowForm<F>> {
    let mut coeffs = vec![F::zero(); g.arrows().len()];
    for d in Dir::ALL {
        for s in Site::ALL {
            let n = g
                .arrow_index(s.index(), s.shifted(d).index())
                .ok_or_else(|| QrgError::InvalidInput("graph is not the square".into()))?;
            coeffs[n] = w.coeff(d).at(s).clone();
        }
    }
    Ok(ArrowForm { coeffs })
}

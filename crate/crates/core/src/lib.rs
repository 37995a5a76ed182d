//! Quantum Riemannian geometry on the square graph of Z2 x Z2.
//!
//! The crate is layered bottom up:
//!
//! * [`scalar`] exact and floating coefficient fields, unit-circle phases
//! * [`calculus`] functions on the four sites, 1-forms, 2-forms, d and wedge
//! * [`engine`] metrics, bimodule connections, braiding, torsion, curvature,
//!   Ricci, Laplacian and a numeric Levi-Civita solver
//! * [`model`] the closed-form gravity model: connection family, action,
//!   momentum parametrisation, Laplacian spectra and the functional integral
//!
//! All objects are immutable values. Data-parallel work (solver seeds, grid
//! scans, quadrature) goes through [`par`], which uses rayon when the
//! `parallel` feature is on and falls back to plain iteration otherwise.

pub mod calculus;
pub mod engine;
pub mod error;
pub mod model;
pub mod par;
pub mod scalar;

pub use error::{QrgError, Result};
pub use scalar::{approx_equal, make_phase, Complex64, ExactComplex, Field, Phase, Regime, Scalar, Tolerance};

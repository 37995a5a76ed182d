//! The Cayley calculus of Z2 x Z2.
//!
//! Ω¹ is free on e1, e2 with e_i f = (R_i f) e_i and df = (d^1 f) e1 + (d^2 f) e2.
//! Ω² is the Grassmann algebra on e1, e2, so it is spanned by Vol = e1 ^ e2.
//!
//! We take de_i = 0. Nothing else is consistent: a torsion-free connection
//! needs ^(∇e_i) = de_i, and for the connections of interest ^(∇e_i) only
//! sees the antisymmetric part of the e1, e2 coefficients, which vanishes,
//! while e_j ^ e_j = 0 kills the diagonal terms.

mod forms;
mod graph;
mod sitefn;

pub use forms::{d0, d1, right_multiply, vol_sign, wedge, Form1, Form2};
pub use graph::{cayley_to_square, square_to_cayley, ArrowForm, DirectedGraph};
pub use sitefn::{chi, phi, plane_waves, psi, sup_distance, Dir, Site, SiteFn};

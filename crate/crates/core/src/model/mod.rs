//! The closed-form Z2 x Z2 gravity model.

pub mod action;
pub mod family;
pub mod integral;
pub mod params;
pub mod scan;
pub mod spectrum;

pub use action::{action_kl, eh_action, eh_action_closed_form, eh_action_pointwise, Measure};
pub use family::{qlc_family, sigma_spectrum, FamilyFields};
pub use integral::{expectation, partition_integral, IntegralResult, Observable, QuadratureRule, QuadratureSpec};
pub use params::{
    metric_to_momentum, momentum_to_metric, MetricValues, ModelParams, MomentumParams, Signature,
};
pub use spectrum::{laplacian_matrix, Spectrum};

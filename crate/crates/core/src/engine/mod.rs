//! The quantum Riemannian geometry operators on the square calculus.

mod connection;
mod metric;
pub mod solver;
mod tensor;

pub use connection::{
    apply_connection, coefficient_distance, connection_reality, cotorsion, curvature, derive_sigma,
    laplacian, nabla_g, ricci, scalar_curvature, torsion, Coefficients, Connection, Curvature,
    RicciTensor, Sigma,
};
pub use metric::{make_metric, Metric, MetricChecks};
pub use solver::{metric_from_arrays, qlc_residual, qlc_solve, qlc_solve_values, QlcSolution, SolutionKind, SolverOptions, SolverReport};
pub use tensor::{Bitensor, Tritensor, VolTensor};

//! Execution modes for the data-parallel parts: solver seeds, grid scans
//! and quadrature sums.
//!
//! Results never depend on the mode except through floating-point summation
//! order. [`ExecMode::Deterministic`] always sums left to right, so repeated
//! runs are bit-identical. Without the `parallel` feature both modes run
//! sequentially.

use crate::scalar::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Parallel,
    Deterministic,
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Maps `f` over `0..n`, keeping index order in the output.
pub fn map_range<R, G>(mode: ExecMode, n: usize, f: G) -> Vec<R>
where
    R: Send,
    G: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Maps `f` over a slice, keeping order.
pub fn map_slice<T, R, G>(mode: ExecMode, items: &[T], f: G) -> Vec<R>
where
    T: Sync,
    R: Send,
    G: Fn(&T) -> R + Sync + Send,
{
    map_range(mode, items.len(), |i| f(&items[i]))
}

/// Σ_{i<n} f(i).
pub fn sum_range<G>(mode: ExecMode, n: usize, f: G) -> Complex64
where
    G: Fn(usize) -> Complex64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).sum();
    }
    let _ = mode;
    (0..n).map(f).fold(Complex64::new(0.0, 0.0), |acc, x| acc + x)
}

//! Data-parallel map helpers.
//!
//! Per-item work throughout the crate is pure, and results are collected in
//! index order, so the parallel and sequential paths produce identical
//! output. The `parallel` feature (default) routes through rayon; without it
//! everything runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub(crate) fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Always-sequential twin of [`map_ordered`], kept available for
/// scheduling-independence checks and benchmarks.
pub(crate) fn map_ordered_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

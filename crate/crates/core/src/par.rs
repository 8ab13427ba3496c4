//! Thin shim over rayon so batch operations can fall back to sequential
//! iteration when the `parallel` feature is disabled.
//!
//! Callers must only combine results in an order-independent way (indexed
//! collection, maxima, set unions); floating-point reductions happen on the
//! collected `Vec` in index order, so outputs are identical with and without
//! the feature.

#[cfg(feature = "parallel")]
pub(crate) fn map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    F: Fn(&I) -> O,
{
    items.iter().map(f).collect()
}

/// Sequential mapping used by the `*_seq` entry points regardless of the
/// feature set, so benchmarks can compare both paths in one build.
pub(crate) fn map_seq<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    F: Fn(&I) -> O,
{
    items.iter().map(f).collect()
}

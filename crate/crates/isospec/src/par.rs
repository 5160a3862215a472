//! Compile-time selection between rayon and single-threaded execution for
//! the embarrassingly parallel inner loops (grid scans, sample sweeps).
//!
//! Both paths are order-preserving, so output is identical regardless of the
//! `parallel` feature or thread count; reductions downstream stay
//! deterministic.

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Always-sequential twin of [`map_collect`], kept for equivalence tests and
/// benchmarks.
#[allow(dead_code)]
pub(crate) fn map_collect_seq<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    F: Fn(&I) -> O,
{
    items.iter().map(f).collect()
}

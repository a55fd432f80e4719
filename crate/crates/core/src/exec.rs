//! Execution policy for the data-parallel kernels.
//!
//! Every kernel is a pure map over independent indices (grid points,
//! snapshots, rows of a pair enumeration) followed by an order-fixed or
//! integer reduction, so both policies produce identical results.

/// How a kernel distributes its independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Rayon work stealing. Without the `parallel` feature this runs
    /// sequentially.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Maps `f` over `0..n`, preserving index order in the output.
    pub(crate) fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Folds `0..n` into per-worker accumulators and merges them.
    ///
    /// `merge` must be associative and commutative for the result to be
    /// independent of the split; integer histograms satisfy this.
    pub(crate) fn fold_range<A, I, F, M>(self, n: usize, init: I, fold: F, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(A, usize) -> A + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n)
                    .into_par_iter()
                    .fold(&init, &fold)
                    .reduce(&init, &merge)
            }
            _ => {
                let _ = &merge;
                (0..n).fold(init(), fold)
            }
        }
    }
}

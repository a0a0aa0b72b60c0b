//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] runs on the
//! rayon pool; without it both variants are sequential. Results are always
//! collected in input order, so merged sums are deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
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

/// Inputs smaller than this are never split across threads.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 8;

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() && items.len() >= PAR_THRESHOLD {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maps then folds with `merge`, preserving the left-to-right order of
    /// the inputs in the reduction.
    pub fn map_reduce<T, U, F, M>(self, items: &[T], identity: U, f: F, merge: M) -> U
    where
        T: Sync,
        U: Send + Sync + Clone,
        F: Fn(&T) -> U + Sync + Send,
        M: Fn(U, U) -> U + Sync + Send,
    {
        let parts = self.map(items, f);
        parts.into_iter().fold(identity, merge)
    }
}

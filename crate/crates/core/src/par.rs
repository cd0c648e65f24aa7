//! Execution strategy for the data-parallel kernels.
//!
//! Heavy loops (block products, commutator scans) go through these helpers so
//! the same code runs on rayon or sequentially. With the `parallel` feature
//! disabled, `Parallel` quietly degrades to the sequential path; results are
//! identical either way, including which element `find_first` reports.

/// How to run a divisible workload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

impl ExecMode {
    /// True when this mode will actually fan out to worker threads.
    pub fn effective_parallel(self) -> bool {
        matches!(self, ExecMode::Parallel) && cfg!(feature = "parallel")
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, U, F>(mode: ExecMode, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.effective_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    let _ = mode;
    items.into_iter().map(f).collect()
}

/// First `Some` produced by `f` in item order, searched concurrently when
/// the mode allows.
pub fn find_first<T, U, F>(mode: ExecMode, items: Vec<T>, f: F) -> Option<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.effective_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().find_map_first(f);
    }
    let _ = mode;
    items.into_iter().find_map(f)
}

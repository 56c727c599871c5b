//! Data-parallel batch driver. With the `parallel` feature (default) batches
//! run on the rayon thread pool; without it, or with `Mode::Sequential`,
//! everything runs on the calling thread. Verification grids and relation
//! batteries all funnel through [`run_batch`], so the two execution modes can
//! be compared directly (see `benches/parallel.rs`).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Mode {
    #[default]
    Parallel,
    Sequential,
}

impl Mode {
    pub fn from_flag(parallel: bool) -> Self {
        if parallel {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

/// Map `f` over `items`, parallel or sequential per `mode`.
pub fn run_batch<T, U, F>(mode: Mode, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match mode {
        Mode::Sequential => items.into_iter().map(f).collect(),
        Mode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                items.into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().map(f).collect()
            }
        }
    }
}

/// True when the parallel path is compiled in.
pub fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}

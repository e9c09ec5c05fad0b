//! Data-parallel helpers. With the `parallel` feature the work runs on the
//! rayon pool unless sequential execution was requested at runtime; without
//! it everything runs on the calling thread.

use std::sync::atomic::{AtomicBool, Ordering};

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

pub fn set_strategy(s: Strategy) {
    FORCE_SEQUENTIAL.store(s == Strategy::Sequential, Ordering::Relaxed);
}

pub fn strategy() -> Strategy {
    if cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.load(Ordering::Relaxed) {
        Strategy::Parallel
    } else {
        Strategy::Sequential
    }
}

/// Sizes the global pool. Only the first call has an effect; `jobs == 1`
/// switches to sequential execution.
pub fn set_jobs(jobs: usize) {
    if jobs == 1 {
        set_strategy(Strategy::Sequential);
        return;
    }
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
}

/// Order-preserving map.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy() == Strategy::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Order-preserving map over owned items.
pub fn map_owned<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy() == Strategy::Parallel {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    items.into_iter().map(f).collect()
}

/// First item (in input order) for which `f` returns `Some`.
pub fn find_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy() == Strategy::Parallel {
        use rayon::prelude::*;
        return items.par_iter().find_map_first(f);
    }
    items.iter().find_map(f)
}

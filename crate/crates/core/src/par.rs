//! Index-ordered data-parallel maps.
//!
//! With the `parallel` feature (default) these run on the rayon global pool,
//! otherwise they are plain sequential loops. Output order always follows the
//! input index, so results do not depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f).collect()`, possibly in parallel.
#[cfg(feature = "parallel")]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Fallible variant of [`map_range`]; reports the lowest failing index.
pub fn try_map_range<R, E, F>(n: usize, f: F) -> Result<Vec<R>, E>
where
    R: Send,
    E: Send,
    F: Fn(usize) -> Result<R, E> + Sync + Send,
{
    map_range(n, f).into_iter().collect()
}

/// Runs `op` with at most `jobs` worker threads. `None` uses the global pool.
/// Without the `parallel` feature this just calls `op`.
pub fn with_jobs<R: Send>(jobs: Option<usize>, op: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(jobs) = jobs {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .expect("failed to build thread pool");
        return pool.install(op);
    }
    let _ = jobs;
    op()
}

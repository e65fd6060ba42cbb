//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) these fan out over rayon's
//! global pool; without it they run the same closures sequentially. Output
//! order always matches input order, so results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether this build runs the data-parallel code paths.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Maps `f` over `0..n`, collecting results in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Maps `f` over a slice, collecting results in slice order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Runs `op` on a pool of `width` workers. Falls back to the calling thread
/// when `width <= 1` or the build is sequential.
pub fn with_workers<R, F>(width: usize, op: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        if width > 1 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(width).build() {
                return pool.install(op);
            }
            log::warn!("could not build a {width}-thread pool; running on the current thread");
        }
        // width 1 still needs to pin nested par_iter calls to one thread
        match rayon::ThreadPoolBuilder::new().num_threads(1).build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = width;
        op()
    }
}

//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) work is spread over the rayon
//! global pool; without it every helper degrades to a plain sequential loop.
//! All helpers preserve input order so results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How an embarrassingly parallel loop should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `0..n`, collecting results in index order.
pub fn map_range<R, F>(n: usize, exec: Execution, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Maps `f` over a slice, collecting results in input order.
pub fn map_slice<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Like [`map_slice`] but short-circuits on the first error in input order.
pub fn try_map_slice<T, R, E, F>(items: &[T], exec: Execution, f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map_slice(items, exec, f).into_iter().collect()
}

/// Sizes the global pool. Returns false when the pool was already built.
pub fn init_global_pool(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_range(1000, Execution::Sequential, |i| i * i);
        let par = map_range(1000, Execution::Parallel, |i| i * i);
        assert_eq!(seq, par);
    }

    #[test]
    fn try_map_reports_first_error() {
        let items: Vec<i32> = (0..100).collect();
        let r: Result<Vec<i32>, i32> =
            try_map_slice(&items, Execution::Parallel, |&x| if x % 7 == 6 { Err(x) } else { Ok(x) });
        assert_eq!(r, Err(6));
    }
}

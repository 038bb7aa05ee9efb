//! Data-parallel helpers. With the `parallel` feature (on by default) work
//! is spread over the rayon pool; without it everything runs sequentially
//! and produces the same results in the same order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many items, matching stays on the calling thread.
#[cfg(feature = "parallel")]
const MATCH_PAR_THRESHOLD: usize = 64;

/// Execution policy for batch evaluation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this policy actually runs in parallel in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Order-preserving map under the given policy.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
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

/// Order-preserving flat map used by match search.
pub(crate) fn flat_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if items.len() >= MATCH_PAR_THRESHOLD {
        return items.par_iter().flat_map_iter(f).collect();
    }
    items.iter().flat_map(f).collect()
}

use std::ops::Range;

/// Execution strategy for the data-parallel loops.
///
/// `Parallel` silently degrades to sequential execution when the crate is
/// built without the `parallel` feature. Reductions use a total order, so
/// both strategies return identical values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Maps every index in `range` and folds the results with `reduce`.
///
/// `reduce` must be associative and commutative for the two strategies to
/// agree.
pub(crate) fn map_reduce<T, M, R>(exec: Exec, range: Range<usize>, identity: T, map: M, reduce: R) -> T
where
    T: Send + Sync + Clone,
    M: Fn(usize) -> T + Send + Sync,
    R: Fn(T, T) -> T + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(map).reduce(|| identity.clone(), &reduce)
        }
        _ => range.map(map).fold(identity, reduce),
    }
}

/// Maps every index in `range`, preserving order.
pub(crate) fn map_collect<T, M>(exec: Exec, range: Range<usize>, map: M) -> Vec<T>
where
    T: Send,
    M: Fn(usize) -> T + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(map).collect()
        }
        _ => range.map(map).collect(),
    }
}

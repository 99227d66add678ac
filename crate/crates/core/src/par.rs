//! Execution strategy for the data-parallel sweeps.
//!
//! Every exhaustive scan in the crate takes an [`Execution`] and routes its
//! inner loop through the helpers below. With the `parallel` feature the
//! helpers fan out over rayon's global pool; without it, or when the caller
//! asks for [`Execution::Sequential`], they run as plain iterators. Results
//! are always returned in input order so both paths are bit-identical.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
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

impl Execution {
    /// Whether this strategy will actually use more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Map `f` over a slice, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
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

/// Map `f` over an index range, preserving order.
pub fn map_range<R, F>(exec: Execution, range: Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// Map over a slice and flatten the per-item vectors, preserving order.
pub fn flat_map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    map(exec, items, f).into_iter().flatten().collect()
}

/// `true` iff `pred` holds on every index in `range`.
pub fn all_range<F>(exec: Execution, range: Range<usize>, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().all(pred);
    }
    let _ = exec;
    range.into_iter().all(pred)
}

/// Number of indices in `range` satisfying `pred`.
pub fn count_range<F>(exec: Execution, range: Range<usize>, pred: F) -> usize
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().filter(|&i| pred(i)).count();
    }
    let _ = exec;
    range.into_iter().filter(|&i| pred(i)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(Execution::Sequential, &xs, |x| x * x);
        let b = map(Execution::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(
            count_range(Execution::Sequential, 0..100, |i| i % 3 == 0),
            count_range(Execution::Parallel, 0..100, |i| i % 3 == 0)
        );
        assert!(all_range(Execution::Parallel, 0..50, |i| i < 50));
        let fm = flat_map(Execution::Parallel, &[1usize, 2, 3], |&n| vec![n; n]);
        assert_eq!(fm, vec![1, 2, 2, 3, 3, 3]);
    }
}

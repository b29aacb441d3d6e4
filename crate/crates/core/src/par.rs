//! Data-parallel combinators over index ranges and slices.
//!
//! With the `parallel` feature these run on the rayon pool; without it, or when
//! an explicit [`Exec::Sequential`] is requested, they fall back to plain
//! iterators. Every combinator returns the same result in both modes:
//! `find_first` always reports the witness with the least index.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy for the search-heavy operations.
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

impl Exec {
    #[inline]
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Least-index `Some` produced by `f` over `0..n`.
pub fn find_first<R, F>(exec: Exec, n: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.parallel() {
        return (0..n).into_par_iter().find_map_first(f);
    }
    let _ = exec;
    (0..n).find_map(f)
}

pub fn all<F>(exec: Exec, n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.parallel() {
        return (0..n).into_par_iter().all(f);
    }
    let _ = exec;
    (0..n).all(f)
}

pub fn any<F>(exec: Exec, n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    !all(exec, n, |i| !f(i))
}

/// `f` applied to each index, results in index order.
pub fn map<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Sum of `f` over `0..n`.
pub fn count<F>(exec: Exec, n: usize, f: F) -> usize
where
    F: Fn(usize) -> usize + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.parallel() {
        return (0..n).into_par_iter().map(f).sum();
    }
    let _ = exec;
    (0..n).map(f).sum()
}

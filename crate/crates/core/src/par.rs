//! Maybe-parallel map over an index range.
//!
//! With the `parallel` feature the closure runs on the rayon pool; without it
//! the same code runs sequentially. Results come back in index order either
//! way, so callers that reduce them in that order get schedule-independent
//! (bitwise-identical) answers.

#[cfg(feature = "parallel")]
pub(crate) fn indexed_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn indexed_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

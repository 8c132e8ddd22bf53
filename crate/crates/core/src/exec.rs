//! Order-preserving map over independent work items.

use crate::config::Execution;

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(mode: Execution, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        Execution::Parallel if items.len() > 1 => items.into_par_iter().map(f).collect(),
        _ => items.into_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(_mode: Execution, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Like [`map`] for fallible work: every item is evaluated and the first
/// error in input order is returned, so the outcome never depends on scheduling.
pub fn try_map<T, R, E, F>(mode: Execution, items: Vec<T>, f: F) -> Result<Vec<R>, E>
where
    T: Send,
    R: Send,
    E: Send,
    F: Fn(T) -> Result<R, E> + Sync + Send,
{
    map(mode, items, f).into_iter().collect()
}

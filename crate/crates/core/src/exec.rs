//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the per-landmark passes (labelling build,
//! affected-vertex discovery, repair planning) and batch queries fan out over
//! rayon; without it, or with [`Execution::Sequential`], the same closures run
//! in a plain loop. Results are identical either way.

/// How per-landmark and batch work is scheduled.
/// Defaults to `Parallel` when the feature is enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// Maps `f` over `0..len`, preserving index order in the output.
    pub(crate) fn map_indices<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
        }
    }

    /// Maps `f` over `items` paired with a mutable slot of `scratch`.
    pub(crate) fn map_with_scratch<S, I, T, F>(self, scratch: &mut [S], items: &[I], f: F) -> Vec<T>
    where
        S: Send,
        I: Sync,
        T: Send,
        F: Fn(&mut S, &I) -> T + Sync + Send,
    {
        debug_assert!(scratch.len() >= items.len());
        match self {
            Execution::Sequential => scratch.iter_mut().zip(items).map(|(s, i)| f(s, i)).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                scratch[..items.len()].par_iter_mut().zip(items.par_iter()).map(|(s, i)| f(s, i)).collect()
            }
        }
    }

    /// Maps `f` over `items` with one lazily created scratch value per worker.
    pub(crate) fn map_init<S, I, T, INIT, F>(self, items: &[I], init: INIT, f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        INIT: Fn() -> S + Sync + Send,
        F: Fn(&mut S, &I) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => {
                let mut s = init();
                items.iter().map(|i| f(&mut s, i)).collect()
            }
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map_init(init, |s, i| f(s, i)).collect()
            }
        }
    }
}

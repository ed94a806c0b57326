//! Data-parallel batch evaluation. With the `parallel` feature the work is
//! spread over the rayon pool; without it (or on request) it runs in order.
//! Results always come back in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::classify::{report, AdmissibleDataDocument, ClassifyOptions, Report};
use crate::error::ClassifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without `parallel`.
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
    /// Whether work actually runs on several threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `f(0), …, f(n − 1)`.
pub fn map_indices<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// `f` applied to every item.
pub fn map_slice<I, T, F>(items: &[I], exec: Execution, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    map_indices(items.len(), exec, |i| f(&items[i]))
}

/// Classifies independent documents; one report (or error) per document.
pub fn classify_batch(
    docs: &[AdmissibleDataDocument],
    opts: &ClassifyOptions,
    exec: Execution,
) -> Vec<Result<Report, ClassifyError>> {
    map_slice(docs, exec, |d| report(d, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{hj_expand, CyclicQuotientData};

    #[test]
    fn orders_agree() {
        let work = |i: usize| {
            let m = 2 + i as i64;
            hj_expand(CyclicQuotientData::new(m, 1).unwrap())
        };
        assert_eq!(map_indices(64, Execution::Sequential, work), map_indices(64, Execution::Parallel, work));
    }

    #[test]
    fn default_follows_feature() {
        assert_eq!(Execution::default().is_parallel(), cfg!(feature = "parallel"));
    }
}

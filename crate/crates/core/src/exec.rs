//! Sequential / data-parallel execution switch.
//!
//! Every data-parallel loop in the crate goes through [`Execution`]. With the
//! `parallel` feature (on by default) the `Parallel` variant fans work out over
//! the rayon pool; without it both variants run on the calling thread, so
//! callers never need their own `cfg` gates.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How an operation distributes independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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
    /// Whether this build can actually run work in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// Picks `Sequential` when the estimated amount of work is too small to
    /// amortize thread dispatch.
    pub(crate) fn for_work(self, work: usize) -> Self {
        const MIN_PARALLEL_WORK: usize = 1 << 16;
        if work < MIN_PARALLEL_WORK {
            Execution::Sequential
        } else {
            self
        }
    }

    /// `(0..len).map(f).collect()`, possibly in parallel. Output order is
    /// always index order.
    pub fn map_indices<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
            _ => (0..len).map(f).collect(),
        }
    }

    /// `items.iter().map(f).collect()`, possibly in parallel. Output order
    /// matches input order.
    pub fn map_slice<'a, I, T, F>(self, items: &'a [I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&'a I) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_preserve_order() {
        let seq = Execution::Sequential.map_indices(1000, |i| i * i);
        let par = Execution::Parallel.map_indices(1000, |i| i * i);
        assert_eq!(seq, par);
        let words = ["a", "bb", "ccc"];
        assert_eq!(
            Execution::Parallel.map_slice(&words, |w| w.len()),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn small_work_stays_sequential() {
        assert_eq!(Execution::Parallel.for_work(10), Execution::Sequential);
        assert_eq!(Execution::Parallel.for_work(1 << 20), Execution::Parallel);
    }
}

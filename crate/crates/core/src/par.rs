//! Order-preserving data-parallel maps over sweep instances.
//!
//! With the `parallel` feature (default) and `Jobs::Threads(n)` for `n > 1`,
//! work runs on a dedicated rayon pool. Otherwise every map is a plain
//! sequential iterator. Results are always returned in input order, so
//! reports do not depend on the thread count.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Jobs {
    #[default]
    Sequential,
    Threads(usize),
}

impl Jobs {
    pub fn from_count(n: usize) -> Jobs {
        if n <= 1 {
            Jobs::Sequential
        } else {
            Jobs::Threads(n)
        }
    }

    /// Whether this setting actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && matches!(self, Jobs::Threads(n) if n > 1)
    }
}

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(jobs: Jobs, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match jobs {
        Jobs::Threads(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool");
            pool.install(|| items.par_iter().map(&f).collect())
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(_jobs: Jobs, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..500).collect();
        let seq = map(Jobs::Sequential, &items, |x| x * x);
        let par = map(Jobs::Threads(4), &items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[499], 499 * 499);
    }
}

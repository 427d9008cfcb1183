//! Sequential or rayon-backed evaluation of independent tasks.
//!
//! Every helper returns results in index order, so output never depends on
//! the policy or the thread count.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// Uses the current rayon pool; same as `Sequential` without the `parallel` feature.
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
    /// `(0..n).map(f)` collected in order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Index of the largest value; ties go to the smallest index.
    ///
    /// Chunks are scanned independently and then merged in index order.
    pub fn argmax<F>(self, n: usize, f: F) -> Option<(usize, f64)>
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        const CHUNK: usize = 256;
        let chunks = n.div_ceil(CHUNK);
        let partial = self.map_range(chunks, |c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            argmax_seq(lo..hi, &f)
        });
        partial.into_iter().flatten().fold(None, |best, cand| match best {
            Some((_, bv)) if !(cand.1 > bv) => best,
            _ => Some(cand),
        })
    }
}

fn argmax_seq<F: Fn(usize) -> f64>(range: std::ops::Range<usize>, f: &F) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for i in range {
        let v = f(i);
        let v = if v.is_nan() { f64::NEG_INFINITY } else { v };
        match best {
            Some((_, bv)) if !(v > bv) => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

/// Runs `f` on a dedicated pool with `threads` workers (ignored without `parallel`).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

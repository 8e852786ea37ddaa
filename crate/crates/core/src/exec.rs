//! Trial-level data parallelism.
//!
//! With the `parallel` feature the indexed maps below run on the rayon pool;
//! without it, or with [`Execution::Sequential`], they run in order on the
//! calling thread. Output order is always index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::rng::{derive, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Whether this mode actually fans out on the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
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

/// Runs `trials` independent trials, trial `i` drawing from `derive(seed, i)`.
pub fn map_trials<T, F>(exec: Execution, seed: u64, trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut SimRng) -> T + Sync + Send,
{
    map_indexed(exec, trials, |i| {
        let mut rng = derive(seed, i as u64);
        f(i, &mut rng)
    })
}

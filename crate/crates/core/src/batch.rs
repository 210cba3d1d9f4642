//! Independent solves run in bulk.
//!
//! With the `parallel` feature (default) work is spread over a rayon pool;
//! without it, or with [`Execution::Sequential`], items run in order on the
//! calling thread. Results always come back in input order.

use serde::Serialize;

use crate::apps::{solve_instance, verify, VerifyTolerances};
use crate::instance::Instance;
use crate::solver::{Mode, SolveConfig, SolveReport};
use crate::{Error, ErrorKind, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Use the global pool (`None`) or a dedicated pool of that many threads.
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
    Threads(usize),
}

pub fn map_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], exec: Execution, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        Execution::Sequential => map_sequential(items, f),
        Execution::Parallel => map_parallel(items, f),
        Execution::Threads(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| map_parallel(items, f)),
            Err(e) => {
                log::warn!("thread pool unavailable ({e}), running sequentially");
                map_sequential(items, f)
            }
        },
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], _exec: Execution, f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    map_sequential(items, f)
}

/// Outcome of one batch item.
#[derive(Clone, Debug)]
pub struct BatchItem {
    pub result: Result<SolveReport>,
    /// `Some` for successes: whether the output passed verification.
    pub verified: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BatchSummary {
    pub total: usize,
    pub succeeded: usize,
    pub verified: usize,
    pub bad_input: usize,
    pub infeasible: usize,
    pub numerical: usize,
}

impl BatchSummary {
    pub fn of(items: &[BatchItem]) -> Self {
        let mut s = BatchSummary {
            total: items.len(),
            ..Default::default()
        };
        for it in items {
            match &it.result {
                Ok(_) => {
                    s.succeeded += 1;
                    if it.verified == Some(true) {
                        s.verified += 1;
                    }
                }
                Err(e) => match e.kind() {
                    ErrorKind::BadInput => s.bad_input += 1,
                    ErrorKind::Infeasible => s.infeasible += 1,
                    ErrorKind::Numerical => s.numerical += 1,
                },
            }
        }
        s
    }
}

fn solve_one(inst: &Instance, mode: Mode, cfg: &SolveConfig) -> BatchItem {
    let result: Result<SolveReport, Error> = solve_instance(&inst.spectrum, &inst.graph, mode, cfg);
    let verified = result.as_ref().ok().map(|r| {
        verify(
            &r.matrix,
            &inst.spectrum,
            &inst.graph,
            &VerifyTolerances::for_spectrum(&inst.spectrum),
        )
        .passed
    });
    BatchItem { result, verified }
}

/// Solve and verify every instance.
pub fn solve_batch(instances: &[Instance], mode: Mode, cfg: &SolveConfig, exec: Execution) -> Vec<BatchItem> {
    map(instances, exec, |inst| solve_one(inst, mode, cfg))
}

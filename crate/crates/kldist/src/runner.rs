//! Multi-threaded trial execution.

use std::num::NonZeroUsize;
use std::thread;

use kldist_core::{run_trial, DataSource, TrialPlan, TrialStats};

use crate::error::Result;

/// Default worker count: the machine's available parallelism.
pub fn default_threads() -> usize {
    thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1)
}

/// Same result as [`kldist_core::run_trials`], computed on up to `threads`
/// workers. Trial `k` always lands in `values[k]`.
pub fn run_trials_parallel(source: &DataSource, plan: &TrialPlan, threads: usize) -> Result<TrialStats> {
    plan.validate()?;
    let workers = threads.clamp(1, plan.trials);
    if workers == 1 {
        return Ok(kldist_core::run_trials(source, plan)?);
    }
    let mut values = vec![0.0; plan.trials];
    let results: Vec<Vec<(usize, kldist_core::Result<f64>)>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..plan.trials)
                        .step_by(workers)
                        .map(|k| (k, run_trial(source, plan, k as u64)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("trial worker panicked")).collect()
    });
    let mut flat: Vec<(usize, kldist_core::Result<f64>)> = results.into_iter().flatten().collect();
    // Report the error of the lowest failing trial, as the serial runner would.
    flat.sort_by_key(|(k, _)| *k);
    for (k, value) in flat {
        values[k] = value?;
    }
    Ok(TrialStats::from_values(values, plan.loss))
}

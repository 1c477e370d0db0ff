use std::thread;

use covdepth_core::montecarlo::{run_worker, DistributionSummary, ExperimentConfig, Histogram};

use crate::error::{CliError, CliResult};

/// [`covdepth_core::montecarlo::run_experiment`] with one thread per worker.
/// Histograms are merged in worker order, so the result is the same.
pub fn run_parallel(config: &ExperimentConfig) -> CliResult<DistributionSummary> {
    config.validate()?;
    let parts = thread::scope(|scope| {
        let handles: Vec<_> = (0..config.workers).map(|w| scope.spawn(move || run_worker(config, w))).collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| CliError::Runtime("simulation worker panicked".into())))
            .collect::<CliResult<Vec<_>>>()
    })?;
    let mut total = Histogram::new(config.ecdf_max);
    for part in parts {
        total.merge(&part?);
    }
    Ok(DistributionSummary::from_histogram(total, &config.levels)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use covdepth_core::montecarlo::run_experiment;
    use covdepth_core::schemes::{Scheme, SystemParams};

    #[test]
    fn matches_sequential_run() {
        let mut config = ExperimentConfig::new(Scheme::GlobalMds, SystemParams::single(6, 3, 3).unwrap()).unwrap();
        config.trials = 10_001;
        config.workers = 3;
        assert_eq!(run_parallel(&config).unwrap(), run_experiment(&config).unwrap());
    }
}

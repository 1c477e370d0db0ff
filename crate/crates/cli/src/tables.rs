//! Reference tables at `n = 35, k = 20, m = 2` (PMDS with `s = 2`).

use std::fmt::Write as _;
use std::fs;

use covdepth_core::analytic::{lower_bound_harmonic, lower_bound_multi, lower_bound_simple, AnalyticReport};
use covdepth_core::montecarlo::{DistributionSummary, ExperimentConfig, DEFAULT_LEVELS};
use covdepth_core::schemes::{Scheme, SystemParams};

use crate::args::ReproduceArgs;
use crate::commands::{write_density, write_ecdf};
use crate::error::{CliError, CliResult};
use crate::experiment::run_parallel;
use crate::report::{format_float, write_csv};

pub const N: u32 = 35;
pub const K: u32 = 20;
pub const M: u32 = 2;
pub const SLACK: u32 = 2;

pub const SCHEMES: [Scheme; 3] = [Scheme::LocalMds, Scheme::GlobalMds, Scheme::Pmds { s: SLACK }];

/// Printed analytic expectations, three decimals.
pub const REF_EXPECTATION: [f64; 3] = [57.998, 58.649, 58.323];
/// Printed simulated means.
pub const REF_MEAN: [f64; 3] = [57.998, 58.650, 58.322];
/// Printed normal-approximation sizes at 0.90 / 0.95 / 0.99.
pub const REF_NORMAL: [[f64; 3]; 3] = [[76.019, 79.470, 86.218], [68.026, 69.821, 73.333], [69.530, 71.676, 75.872]];
/// Printed empirical sizes at 0.90 / 0.95 / 0.99.
pub const REF_EMPIRICAL: [[u64; 3]; 3] = [[72, 77, 88], [66, 69, 74], [67, 70, 77]];

pub const TOL_EXPECTATION: f64 = 0.0005;
pub const TOL_MEAN: f64 = 0.05;
pub const TOL_NORMAL: f64 = 0.01;
pub const TOL_EMPIRICAL: f64 = 1.0;

pub fn params() -> SystemParams {
    SystemParams::single(N, K, M).expect("reference parameters are valid")
}

/// One compared value.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub table: &'static str,
    pub column: &'static str,
    pub scheme: &'static str,
    pub level: Option<f64>,
    pub observed: f64,
    pub reference: f64,
    pub tolerance: f64,
}

impl Cell {
    pub fn passes(&self) -> bool {
        (self.observed - self.reference).abs() <= self.tolerance
    }

    pub fn describe(&self) -> String {
        let level = self.level.map(|l| format!(" @{}", format_float(l))).unwrap_or_default();
        format!(
            "{} {} {}{level}: observed {} reference {} tolerance {}",
            self.table,
            self.column,
            self.scheme,
            format_float(self.observed),
            format_float(self.reference),
            format_float(self.tolerance)
        )
    }
}

/// Analytic reports of the three schemes.
pub fn analytic_reports(budget: u64) -> CliResult<Vec<AnalyticReport>> {
    let params = params();
    SCHEMES.iter().map(|scheme| Ok(AnalyticReport::evaluate(scheme, &params, &DEFAULT_LEVELS, budget)?)).collect()
}

/// Simulations of the three schemes.
pub fn simulations(trials: u64, seed: u64, workers: u32) -> CliResult<Vec<DistributionSummary>> {
    SCHEMES
        .iter()
        .map(|&scheme| {
            let mut config = ExperimentConfig::new(scheme, params())?;
            config.trials = trials;
            config.seed = seed;
            config.workers = workers;
            run_parallel(&config)
        })
        .collect()
}

pub fn cells(analytic: &[AnalyticReport], simulated: &[DistributionSummary]) -> Vec<Cell> {
    let mut out = Vec::new();
    for (i, scheme) in SCHEMES.iter().enumerate() {
        let label = scheme.label();
        let cell = |table, column, level, observed, reference, tolerance| Cell {
            table,
            column,
            scheme: label,
            level,
            observed,
            reference,
            tolerance,
        };
        out.push(cell(
            "table1",
            "analytic",
            None,
            analytic[i].expectation.to_f64(),
            REF_EXPECTATION[i],
            TOL_EXPECTATION,
        ));
        out.push(cell("table1", "simulated", None, simulated[i].mean, REF_MEAN[i], TOL_MEAN));
        for (j, &level) in DEFAULT_LEVELS.iter().enumerate() {
            let normal = analytic[i].confidence_sizes[j].1;
            out.push(cell("table2", "normal", Some(level), normal, REF_NORMAL[i][j], TOL_NORMAL));
            let empirical = simulated[i].quantiles[j].1 as f64;
            out.push(cell("table2", "empirical", Some(level), empirical, REF_EMPIRICAL[i][j] as f64, TOL_EMPIRICAL));
        }
    }
    out
}

pub fn cmd_reproduce_tables(args: &ReproduceArgs, budget: u64) -> CliResult<String> {
    let analytic = analytic_reports(budget)?;
    let simulated = simulations(args.trials, args.seed, args.workers)?;
    fs::create_dir_all(&args.out_dir).map_err(|e| CliError::Io(format!("{}: {e}", args.out_dir.display())))?;
    let dir = &args.out_dir;

    write_csv(
        dir.join("table1.csv"),
        &["scheme", "simulated_mean", "analytic_expectation"],
        SCHEMES.iter().enumerate().map(|(i, s)| {
            [s.label().to_string(), format_float(simulated[i].mean), format_float(analytic[i].expectation.to_f64())]
        }),
    )?;
    let mut table2 = Vec::new();
    for (i, scheme) in SCHEMES.iter().enumerate() {
        for (j, &level) in DEFAULT_LEVELS.iter().enumerate() {
            table2.push([
                scheme.label().to_string(),
                format_float(level),
                simulated[i].quantiles[j].1.to_string(),
                format_float(analytic[i].confidence_sizes[j].1),
            ]);
        }
    }
    write_csv(dir.join("table2.csv"), &["scheme", "level", "empirical_size", "normal_approx_size"], table2)?;
    for (i, scheme) in SCHEMES.iter().enumerate() {
        write_ecdf(&dir.join(format!("ecdf_{}.csv", scheme.label())), &simulated[i])?;
        write_density(&dir.join(format!("density_{}.csv", scheme.label())), &simulated[i])?;
    }
    let params = params();
    write_csv(
        dir.join("bounds.csv"),
        &["quantity", "value"],
        [
            ("simple", lower_bound_simple(&params)),
            ("harmonic", lower_bound_harmonic(&params)?),
            ("multi", lower_bound_multi(&params)?),
        ]
        .map(|(name, v)| [name.to_string(), format_float(v.to_f64())]),
    )?;

    let mut out = format!(
        "reproduce-tables n={N} k={K} m={M} s={SLACK} trials={} seed={} workers={} out_dir={}\n",
        args.trials,
        args.seed,
        args.workers,
        dir.display()
    );
    let mut failures = Vec::new();
    for cell in cells(&analytic, &simulated) {
        let status = if cell.passes() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status} {}", cell.describe());
        if !cell.passes() {
            failures.push(cell.describe());
        }
    }
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Acceptance { report: out, failures })
    }
}

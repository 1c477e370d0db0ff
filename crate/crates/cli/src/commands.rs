use covdepth_core::analytic::{
    expected, lower_bound_harmonic, lower_bound_multi, lower_bound_simple, z_quantile, AnalyticReport, VarianceMethod,
};
use covdepth_core::combinatorics::ExactValue;
use covdepth_core::exactdp::{exact_mean_from_tail, ChainModel};
use covdepth_core::montecarlo::{default_ecdf_max, DistributionSummary, ExperimentConfig};
use covdepth_core::schemes::{Scheme, SystemParams};

use crate::args::{BoundsArgs, ExactArgs, ExpectArgs, SimulateArgs};
use crate::error::CliResult;
use crate::experiment::run_parallel;
use crate::report::{format_float, write_csv, Provenance, Report};

pub const RNG_LABEL: &str = "xoshiro256++ seeded per worker by splitmix64(seed, worker)";
pub const Z_LABEL: &str = "two-sided: z(level) = Φ⁻¹((1 + level) / 2)";

pub fn variance_label(method: VarianceMethod) -> String {
    format!("normal-approximation input ({})", method.label())
}

fn instance_inputs(report: &mut Report, scheme: &Scheme, params: &SystemParams) {
    report.input("scheme", scheme.label());
    report.input("n", params.n).input("k", params.k).input("m", params.m).input("a", params.a);
    if let Some(s) = scheme.slack() {
        report.input("s", s);
    }
}

fn join_levels(levels: &[f64]) -> String {
    levels.iter().map(|&l| format_float(l)).collect::<Vec<_>>().join(",")
}

pub fn cmd_expect(args: &ExpectArgs, budget: u64) -> CliResult<String> {
    let (scheme, params) = args.instance.resolve()?;
    let analytic = AnalyticReport::evaluate(&scheme, &params, &args.levels, budget)?;

    let mut report = Report::new("expect");
    instance_inputs(&mut report, &scheme, &params);
    report.input("levels", join_levels(&args.levels)).input("budget", budget).input("z", Z_LABEL);
    push_exact(&mut report, "expectation", &analytic.expectation, Provenance::Analytic);
    report
        .push("variance", analytic.variance.value.to_f64(), Provenance::Analytic)
        .note("method", variance_label(analytic.variance.method));
    report.push("std", analytic.std, Provenance::Analytic);
    for &(level, size) in &analytic.confidence_sizes {
        report
            .push(format!("normal_size_{}", format_float(level)), size, Provenance::Analytic)
            .note("z", z_quantile(level)?);
    }
    report.render(args.format)
}

fn push_exact(report: &mut Report, name: &str, value: &ExactValue, provenance: Provenance) {
    report.push(name, value.to_f64(), provenance).note("exact", value.to_string());
}

/// Builds the experiment described by `args`.
pub fn simulate_config(args: &SimulateArgs) -> CliResult<ExperimentConfig> {
    let (scheme, params) = args.instance.resolve()?;
    let mut config = ExperimentConfig::new(scheme, params)?;
    config.trials = args.trials;
    config.seed = args.seed;
    config.workers = args.workers;
    config.levels = args.quantiles.clone();
    config.ecdf_max = args.ecdf_max.unwrap_or_else(|| default_ecdf_max(&params));
    config.validate()?;
    Ok(config)
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<String> {
    let config = simulate_config(args)?;
    let summary = run_parallel(&config)?;
    if let Some(path) = &args.ecdf_out {
        write_ecdf(path, &summary)?;
    }

    let mut report = Report::new("simulate");
    instance_inputs(&mut report, &config.scheme, &config.params);
    report
        .input("requested", format!("1..={}", config.params.a))
        .input("trials", config.trials)
        .input("seed", config.seed)
        .input("workers", config.workers)
        .input("quantiles", join_levels(&config.levels))
        .input("ecdf_max", config.ecdf_max)
        .input("rng", RNG_LABEL);
    summary_quantities(&mut report, &summary);
    report.render(args.format)
}

pub fn summary_quantities(report: &mut Report, summary: &DistributionSummary) {
    let sim = Provenance::Simulated;
    report.push("mean", summary.mean, sim);
    report.push("sample_variance", summary.sample_variance, sim);
    report.push("std", summary.std(), sim);
    report.push("min", summary.min, sim).push("max", summary.max, sim);
    report.push("overflow", summary.histogram.overflow, sim);
    for &(level, q) in &summary.quantiles {
        report.push(format!("quantile_{}", format_float(level)), q, sim);
    }
}

/// `r,cdf` for `r` up to the last non-empty bin.
pub fn write_ecdf(path: &std::path::Path, summary: &DistributionSummary) -> CliResult<()> {
    let last = summary.histogram.counts.iter().rposition(|&c| c > 0).unwrap_or(0);
    let ecdf = summary.ecdf();
    write_csv(path, &["r", "cdf"], (0..=last).map(|r| [r.to_string(), format_float(ecdf[r])]))
}

/// `r,pmf` for `r` up to the last non-empty bin.
pub fn write_density(path: &std::path::Path, summary: &DistributionSummary) -> CliResult<()> {
    let counts = &summary.histogram.counts;
    let last = counts.iter().rposition(|&c| c > 0).unwrap_or(0);
    let n = summary.trials as f64;
    write_csv(path, &["r", "pmf"], (0..=last).map(|r| [r.to_string(), format_float(counts[r] as f64 / n)]))
}

pub fn cmd_bounds(args: &BoundsArgs, budget: u64) -> CliResult<String> {
    let params = args.system.resolve()?;
    let simple = lower_bound_simple(&params);
    let harmonic = lower_bound_harmonic(&params)?;
    let multi = lower_bound_multi(&params)?;
    let local = expected(&Scheme::LocalMds, &params, budget)?;
    let global = expected(&Scheme::GlobalMds, &params, budget)?;
    let least = if local < global { &local } else { &global };
    // the single-file chain only applies at a = 1; the multi-file bound always
    let chain = multi <= *least && (params.a > 1 || (simple <= harmonic && harmonic <= *least));

    let mut report = Report::new("bounds");
    report.input("n", params.n).input("k", params.k).input("m", params.m).input("a", params.a);
    report.input("budget", budget);
    push_exact(&mut report, "simple", &simple, Provenance::Analytic);
    push_exact(&mut report, "harmonic", &harmonic, Provenance::Analytic);
    push_exact(&mut report, "multi", &multi, Provenance::Analytic);
    report.push("expectation_local", local.to_f64(), Provenance::Analytic);
    report.push("expectation_global", global.to_f64(), Provenance::Analytic);
    report.push("chain_order_holds", chain, Provenance::Analytic);
    report.render(args.format)
}

pub fn cmd_exact(args: &ExactArgs, budget: u64) -> CliResult<String> {
    let (scheme, params) = args.instance.resolve()?;
    let model = ChainModel::new(&scheme, &params, budget)?;

    let mut report = Report::new("exact");
    instance_inputs(&mut report, &scheme, &params);
    report.input("budget", budget);
    if let Some(rmax) = args.rmax {
        report.input("rmax", rmax as u64).input("tail_out", args.tail_out.display().to_string());
    }
    report.push("states", model.len() as u64, Provenance::Dp);
    push_exact(&mut report, "expectation", &model.expectation(), Provenance::Dp);
    if let Some(rmax) = args.rmax {
        let tail = model.tail(rmax);
        write_csv(
            &args.tail_out,
            &["r", "survival"],
            tail.survival.iter().enumerate().map(|(r, s)| [r.to_string(), format_float(*s)]),
        )?;
        let mean = exact_mean_from_tail(&tail);
        report
            .push("tail_mean", mean.mean, Provenance::Dp)
            .note("error_bound", mean.error_bound)
            .note("converged", mean.converged);
        report.push("survival_at_rmax", tail.survival[rmax], Provenance::Dp);
    }
    report.render(args.format)
}

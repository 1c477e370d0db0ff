use covdepth_core::analytic::expected;
use covdepth_core::exactdp::{converged_tail, exact_tail};
use covdepth_core::montecarlo::{run_experiment, ExperimentConfig};
use covdepth_core::schemes::{Scheme, SystemParams};

fn run(scheme: Scheme, params: SystemParams, trials: u64, seed: u64) -> covdepth_core::montecarlo::DistributionSummary {
    let mut config = ExperimentConfig::new(scheme, params).unwrap();
    config.trials = trials;
    config.seed = seed;
    run_experiment(&config).unwrap()
}

fn cases() -> Vec<(Scheme, SystemParams)> {
    vec![
        (Scheme::LocalMds, SystemParams::single(10, 4, 2).unwrap()),
        (Scheme::LocalMds, SystemParams::new(6, 3, 3, 2).unwrap()),
        (Scheme::GlobalMds, SystemParams::single(10, 4, 2).unwrap()),
        (Scheme::GlobalMds, SystemParams::new(5, 2, 4, 3).unwrap()),
        (Scheme::Pmds { s: 1 }, SystemParams::single(10, 4, 2).unwrap()),
        (Scheme::Pmds { s: 2 }, SystemParams::single(9, 5, 2).unwrap()),
    ]
}

#[test]
fn mean_within_four_sigma() {
    for (i, (scheme, params)) in cases().into_iter().enumerate() {
        let summary = run(scheme, params, 100_000, 7 + i as u64);
        let exact = expected(&scheme, &params, u64::MAX).unwrap().to_f64();
        let sigma = (summary.sample_variance / summary.trials as f64).sqrt();
        assert!((summary.mean - exact).abs() <= 4.0 * sigma, "{scheme} {params}: {} vs {exact}", summary.mean);
        let floor = match scheme {
            Scheme::LocalMds => u64::from(params.a * params.k),
            _ => u64::from(params.k),
        };
        assert!(summary.min >= floor);
        assert!(summary.min as f64 <= summary.mean && summary.mean <= summary.max as f64);
    }
}

#[test]
fn ecdf_within_dkw_band() {
    let trials = 100_000u64;
    let band = 4.0 * ((2.0f64 / 1e-6).ln() / (2.0 * trials as f64)).sqrt();
    for (i, (scheme, params)) in cases().into_iter().enumerate() {
        let summary = run(scheme, params, trials, 100 + i as u64);
        let ecdf = summary.ecdf();
        let tail = exact_tail(&scheme, &params, ecdf.len() - 1, u64::MAX).unwrap();
        let sup = ecdf.iter().zip(&tail.survival).map(|(f, s)| (f - (1.0 - s)).abs()).fold(0.0, f64::max);
        assert!(sup <= band, "{scheme} {params}: {sup} > {band}");
    }
}

#[test]
fn first_draw_tail_probability() {
    // k = 1: one draw decodes only on the systematic strand, Pr[ν > 1] = 5/6
    let params = SystemParams::single(3, 1, 2).unwrap();
    let tail = exact_tail(&Scheme::GlobalMds, &params, 3, u64::MAX).unwrap();
    assert!((tail.survival[1] - 5.0 / 6.0).abs() < 1e-15);
    let summary = run(Scheme::GlobalMds, params, 1_000_000, 1);
    let p = tail.survival[1];
    let observed = 1.0 - summary.ecdf()[1];
    let sigma = (p * (1.0 - p) / summary.trials as f64).sqrt();
    assert!((observed - p).abs() <= 3.0 * sigma);
}

#[test]
fn simulated_variance_close_to_exact() {
    // second moment from the tail: E[ν²] = Σ (2r + 1) Pr[ν > r]
    let (scheme, params) = (Scheme::Pmds { s: 1 }, SystemParams::single(10, 4, 2).unwrap());
    let tail = converged_tail(&scheme, &params, 100_000, u64::MAX).unwrap();
    let mean: f64 = tail.survival.iter().sum();
    let second: f64 = tail.survival.iter().enumerate().map(|(r, s)| (2 * r + 1) as f64 * s).sum();
    let var = second - mean * mean;
    let summary = run(scheme, params, 200_000, 3);
    assert!((summary.sample_variance - var).abs() / var < 0.03, "{} vs {var}", summary.sample_variance);
}

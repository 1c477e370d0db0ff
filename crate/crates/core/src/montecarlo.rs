//! Simulation of uniform sampling with replacement until the requested files
//! decode.
//!
//! Each worker owns a `Xoshiro256PlusPlus` stream seeded from `(seed, worker)`
//! and fills its own [`Histogram`]; merging is an elementwise integer sum, so
//! a summary depends only on `(config, seed, workers)`.

use alloc::vec::Vec;

use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::analytic::validate_levels;
use crate::error::{domain, invalid, Error, Result};
use crate::schemes::{strand_categories, DecodeRule, Requested, Scheme, SystemParams};

/// Hard cap on the draws of a single trial.
pub const DRAW_CAP: u64 = 1_000_000_000;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
/// Fixed rather than the machine's core count, so that default runs agree
/// across machines.
pub const DEFAULT_WORKERS: u32 = 8;
pub const DEFAULT_LEVELS: [f64; 3] = [0.9, 0.95, 0.99];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub params: SystemParams,
    pub requested: Requested,
    pub trials: u64,
    pub seed: u64,
    pub workers: u32,
    pub levels: Vec<f64>,
    /// Largest draw count with its own histogram bin.
    pub ecdf_max: u32,
}

impl ExperimentConfig {
    /// Defaults: files `{1..a}`, 10⁶ trials, seed 42, 8 workers, levels
    /// 0.9/0.95/0.99 and `ecdf_max = 64·mk`.
    pub fn new(scheme: Scheme, params: SystemParams) -> Result<Self> {
        scheme.validate(&params)?;
        Ok(ExperimentConfig {
            scheme,
            params,
            requested: Requested::leading(&params),
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            workers: DEFAULT_WORKERS,
            levels: DEFAULT_LEVELS.to_vec(),
            ecdf_max: default_ecdf_max(&params),
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate(&self.params)?;
        if self.trials == 0 {
            return Err(invalid!("trials must be at least 1"));
        }
        if self.workers == 0 {
            return Err(invalid!("workers must be at least 1"));
        }
        if self.requested.files().len() != self.params.a as usize {
            return Err(invalid!("requested set size does not match a={}", self.params.a));
        }
        validate_levels(&self.levels)
    }

    /// Trials assigned to `worker`: an even split, remainder to the first workers.
    pub fn worker_trials(&self, worker: u32) -> u64 {
        let w = u64::from(self.workers);
        self.trials / w + u64::from(u64::from(worker) < self.trials % w)
    }
}

pub fn default_ecdf_max(params: &SystemParams) -> u32 {
    64 * params.m * params.k
}

/// Seed of a worker's stream: the SplitMix64 finalizer applied to the seed
/// offset by `worker + 1` golden-ratio increments.
pub fn worker_seed(seed: u64, worker: u32) -> u64 {
    let mut z = seed.wrapping_add((u64::from(worker) + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn worker_rng(seed: u64, worker: u32) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(worker_seed(seed, worker))
}

/// Reusable per-worker trial state.
#[derive(Clone, Debug)]
pub struct Sampler {
    rule: DecodeRule,
    categories: Vec<u32>,
    seen: Vec<u64>,
    counts: Vec<u32>,
    draw: Uniform<u32>,
}

impl Sampler {
    pub fn new(scheme: &Scheme, params: &SystemParams, requested: &Requested) -> Result<Self> {
        let categories = strand_categories(scheme, params, requested)?;
        let pool = params.total_strands();
        Ok(Sampler {
            rule: DecodeRule::new(scheme, params)?,
            categories,
            seen: alloc::vec![0; pool.div_ceil(64) as usize],
            counts: alloc::vec![0; scheme.capacities(params).len()],
            draw: Uniform::new(0, pool).map_err(|e| domain!("{e}"))?,
        })
    }

    /// Draws until the requested files decode and returns the draw count.
    pub fn run_trial<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<u64> {
        self.seen.iter_mut().for_each(|w| *w = 0);
        self.counts.iter_mut().for_each(|c| *c = 0);
        let mut draws = 0u64;
        loop {
            if draws == DRAW_CAP {
                return Err(Error::DrawCap { draws });
            }
            draws += 1;
            let strand = self.draw.sample(rng) as usize;
            let (word, bit) = (strand / 64, 1u64 << (strand % 64));
            if self.seen[word] & bit != 0 {
                continue;
            }
            self.seen[word] |= bit;
            self.counts[self.categories[strand] as usize] += 1;
            if self.rule.is_decodable(&self.counts) {
                return Ok(draws);
            }
        }
    }
}

/// One trial with a fresh [`Sampler`].
pub fn run_trial<R: Rng + ?Sized>(
    scheme: &Scheme,
    params: &SystemParams,
    requested: &Requested,
    rng: &mut R,
) -> Result<u64> {
    Sampler::new(scheme, params, requested)?.run_trial(rng)
}

/// Draw-count frequencies with exact integer moments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    /// `counts[r]` trials needed exactly `r` draws, for `r <= ecdf_max`.
    pub counts: Vec<u64>,
    pub overflow: u64,
    pub trials: u64,
    pub sum: u128,
    pub sum_sq: u128,
    pub min: u64,
    pub max: u64,
}

impl Histogram {
    pub fn new(ecdf_max: u32) -> Self {
        Histogram {
            counts: alloc::vec![0; ecdf_max as usize + 1],
            overflow: 0,
            trials: 0,
            sum: 0,
            sum_sq: 0,
            min: u64::MAX,
            max: 0,
        }
    }

    pub fn ecdf_max(&self) -> u32 {
        (self.counts.len() - 1) as u32
    }

    pub fn record(&mut self, draws: u64) {
        match self.counts.get_mut(draws as usize) {
            Some(c) => *c += 1,
            None => self.overflow += 1,
        }
        self.trials += 1;
        self.sum += u128::from(draws);
        self.sum_sq += u128::from(draws) * u128::from(draws);
        self.min = self.min.min(draws);
        self.max = self.max.max(draws);
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.overflow += other.overflow;
        self.trials += other.trials;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }
}

/// Runs the trials of one worker.
pub fn run_worker(config: &ExperimentConfig, worker: u32) -> Result<Histogram> {
    let mut sampler = Sampler::new(&config.scheme, &config.params, &config.requested)?;
    let mut rng = worker_rng(config.seed, worker);
    let mut hist = Histogram::new(config.ecdf_max);
    for _ in 0..config.worker_trials(worker) {
        hist.record(sampler.run_trial(&mut rng)?);
    }
    Ok(hist)
}

/// Runs every worker in turn and merges their histograms.
pub fn run_experiment(config: &ExperimentConfig) -> Result<DistributionSummary> {
    config.validate()?;
    let mut total = Histogram::new(config.ecdf_max);
    for worker in 0..config.workers {
        total.merge(&run_worker(config, worker)?);
    }
    DistributionSummary::from_histogram(total, &config.levels)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistributionSummary {
    pub trials: u64,
    pub mean: f64,
    pub sample_variance: f64,
    pub min: u64,
    pub max: u64,
    pub histogram: Histogram,
    /// `(level, smallest r with ECDF(r) >= level)`.
    pub quantiles: Vec<(f64, u64)>,
}

impl DistributionSummary {
    pub fn from_histogram(histogram: Histogram, levels: &[f64]) -> Result<Self> {
        validate_levels(levels)?;
        let n = histogram.trials;
        if n == 0 {
            return Err(invalid!("histogram holds no trials"));
        }
        let nn = u128::from(n);
        let mean = (histogram.sum / nn) as f64 + (histogram.sum % nn) as f64 / n as f64;
        let sample_variance = if n > 1 {
            // (n Σx² - (Σx)²) / (n (n - 1)), exact up to the final division
            let spread = nn * histogram.sum_sq - histogram.sum * histogram.sum;
            spread as f64 / (n as f64 * (n - 1) as f64)
        } else {
            0.0
        };
        let quantiles =
            levels.iter().map(|&level| Ok((level, quantile_of(&histogram, level)?))).collect::<Result<Vec<_>>>()?;
        Ok(DistributionSummary {
            trials: n,
            mean,
            sample_variance,
            min: histogram.min,
            max: histogram.max,
            histogram,
            quantiles,
        })
    }

    /// `ECDF(r)` for `r = 0..=ecdf_max`.
    pub fn ecdf(&self) -> Vec<f64> {
        let n = self.trials as f64;
        let mut cum = 0u64;
        self.histogram
            .counts
            .iter()
            .map(|&c| {
                cum += c;
                cum as f64 / n
            })
            .collect()
    }

    pub fn std(&self) -> f64 {
        libm::sqrt(self.sample_variance)
    }
}

fn quantile_of(hist: &Histogram, level: f64) -> Result<u64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(domain!("quantile level {level} outside (0, 1)"));
    }
    let n = hist.trials as f64;
    let mut cum = 0u64;
    for (r, &c) in hist.counts.iter().enumerate() {
        cum += c;
        if cum as f64 / n >= level {
            return Ok(r as u64);
        }
    }
    Err(Error::QuantileOverflow { level, ecdf_max: hist.ecdf_max() })
}

/// Smallest `r` with `ECDF(r) >= level`.
pub fn empirical_quantile(summary: &DistributionSummary, level: f64) -> Result<u64> {
    quantile_of(&summary.histogram, level)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(scheme: Scheme, n: u32, k: u32, m: u32, a: u32, trials: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(scheme, SystemParams::new(n, k, m, a).unwrap()).unwrap();
        c.trials = trials;
        c
    }

    #[test]
    fn single_strand_decodes_at_once() {
        let params = SystemParams::single(2, 1, 1).unwrap();
        let mut rng = worker_rng(1, 0);
        for _ in 0..100 {
            let r = run_trial(&Scheme::LocalMds, &params, &Requested::leading(&params), &mut rng).unwrap();
            assert_eq!(r, 1);
        }
    }

    #[test]
    fn trials_respect_minimum_draws() {
        for (scheme, a, floor) in [(Scheme::LocalMds, 2, 6), (Scheme::GlobalMds, 2, 3), (Scheme::GlobalMds, 1, 3)] {
            let s = run_experiment(&config(scheme, 5, 3, 3, a, 2000)).unwrap();
            assert!(s.min >= floor);
        }
        let s = run_experiment(&config(Scheme::Pmds { s: 1 }, 6, 3, 2, 1, 2000)).unwrap();
        assert!(s.min >= 3);
    }

    #[test]
    fn worker_split() {
        let mut c = config(Scheme::GlobalMds, 5, 3, 2, 1, 10);
        c.workers = 4;
        let split: Vec<u64> = (0..4).map(|w| c.worker_trials(w)).collect();
        assert_eq!(split, [3, 3, 2, 2]);
        c.workers = 16;
        assert_eq!((0..16).map(|w| c.worker_trials(w)).sum::<u64>(), 10);
    }

    #[test]
    fn reproducible() {
        let c = config(Scheme::Pmds { s: 1 }, 8, 4, 2, 1, 5000);
        assert_eq!(run_experiment(&c).unwrap(), run_experiment(&c).unwrap());
        let mut other = c.clone();
        other.seed += 1;
        assert_ne!(run_experiment(&c).unwrap().histogram, run_experiment(&other).unwrap().histogram);
    }

    #[test]
    fn worker_seeds_differ() {
        let seeds: Vec<u64> = (0..64).map(|w| worker_seed(42, w)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
    }

    #[test]
    fn summary_of_point_mass() {
        let mut h = Histogram::new(20);
        for _ in 0..10 {
            h.record(7);
        }
        let s = DistributionSummary::from_histogram(h, &[0.5, 0.95]).unwrap();
        assert_eq!(s.mean, 7.0);
        assert_eq!(s.sample_variance, 0.0);
        assert_eq!(empirical_quantile(&s, 0.95).unwrap(), 7);
        assert_eq!(s.quantiles, [(0.5, 7), (0.95, 7)]);
    }

    #[test]
    fn moments_and_overflow() {
        let mut h = Histogram::new(3);
        for x in [1, 2, 3, 10] {
            h.record(x);
        }
        assert_eq!(h.overflow, 1);
        assert_eq!(h.counts.iter().sum::<u64>() + h.overflow, h.trials);
        let s = DistributionSummary::from_histogram(h, &[0.5]).unwrap();
        assert_eq!(s.mean, 4.0);
        // deviations -3, -2, -1, 6: 50 / 3
        assert!((s.sample_variance - 50.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.quantiles[0].1, 2);
        assert!(matches!(empirical_quantile(&s, 0.9), Err(Error::QuantileOverflow { ecdf_max: 3, .. })));
    }

    #[test]
    fn config_validation() {
        let mut c = config(Scheme::GlobalMds, 5, 3, 2, 1, 0);
        assert!(c.validate().is_err());
        c.trials = 1;
        c.workers = 0;
        assert!(c.validate().is_err());
        c.workers = 1;
        c.levels = alloc::vec![0.9, 0.5];
        assert!(c.validate().is_err());
        c.levels = alloc::vec![0.5];
        assert!(c.validate().is_ok());
    }
}

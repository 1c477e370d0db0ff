//! Closed-form expectations, lower bounds and the normal-approximation
//! variance for the three schemes.
//!
//! Most results are built from an [`AbsorptionLaw`]: the distribution of the
//! number of *distinct* strands held when the process stops. Given that
//! number `b`, the draw count is `T(b)`, a sum of independent geometric
//! waiting times with `E[T(b)] = mn (H_mn - H_{mn-b})`.

mod bounds;
mod global;
mod local;
mod normal;
mod pmds;
mod variance;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::combinatorics::{harmonic_diff, ExactValue};
use crate::error::{invalid, Result};
use crate::schemes::{Scheme, SystemParams};

pub use bounds::{lower_bound_harmonic, lower_bound_multi, lower_bound_simple};
pub use global::{expected_global_multi, expected_global_single, global_absorption_law};
pub use local::{expected_local_multi, expected_local_single, local_absorption_law};
pub use normal::{confidence_sample_size, inverse_normal_cdf, z_quantile};
pub use pmds::{expected_pmds_single, pmds_absorption_law};
pub use variance::{variance_approx, VarianceApprox, VarianceMethod};

/// `E[T(b)] = mn (H_mn - H_{mn-b})`: expected draws until `b` distinct strands
/// out of a pool of `pool` have been seen.
pub fn expected_draws(pool: u32, b: u32) -> Result<ExactValue> {
    Ok(ExactValue::from(u64::from(pool)) * harmonic_diff(u64::from(pool), u64::from(b))?)
}

/// `Var T(b) = Σ_{i<b} mn·i / (mn-i)²`.
pub fn draws_variance(pool: u32, b: u32) -> Result<ExactValue> {
    if b > pool {
        return Err(crate::error::domain!("b = {b} exceeds the pool of {pool} strands"));
    }
    let pool = u64::from(pool);
    (0..u64::from(b)).map(|i| ExactValue::new(pool * i, (pool - i) * (pool - i))).sum()
}

/// Probability of stopping with exactly `b` distinct strands, for each `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsorptionLaw {
    pool: u32,
    levels: BTreeMap<u32, ExactValue>,
}

impl AbsorptionLaw {
    pub(crate) fn new(pool: u32) -> Self {
        AbsorptionLaw { pool, levels: BTreeMap::new() }
    }

    pub(crate) fn add(&mut self, level: u32, probability: ExactValue) {
        if probability.is_zero() {
            return;
        }
        *self.levels.entry(level).or_insert_with(ExactValue::zero) += probability;
    }

    pub fn pool(&self) -> u32 {
        self.pool
    }

    /// `(b, Pr[stop with b distinct strands])`, ascending in `b`.
    pub fn levels(&self) -> impl Iterator<Item = (u32, &ExactValue)> + '_ {
        self.levels.iter().map(|(&b, p)| (b, p))
    }

    pub fn total_mass(&self) -> ExactValue {
        self.levels.values().sum()
    }

    /// `Σ_b Pr[b] · E[T(b)]`.
    pub fn expectation(&self) -> Result<ExactValue> {
        let mut table = DrawMoments::new(self.pool);
        let mut acc = ExactValue::zero();
        for (&b, p) in &self.levels {
            acc += p * &table.mean(b)?;
        }
        Ok(acc)
    }

    /// `Σ_b Pr[b] · (Var T(b) + E[T(b)]²)`, the second moment obtained by
    /// substituting `E[T(b)²]` for `E[T(b)]` in the mixture.
    pub fn second_moment_approx(&self) -> Result<ExactValue> {
        let mut table = DrawMoments::new(self.pool);
        let mut acc = ExactValue::zero();
        for (&b, p) in &self.levels {
            let mean = table.mean(b)?;
            let var = table.variance(b)?;
            acc += p * &(var + &mean * &mean);
        }
        Ok(acc)
    }
}

/// Running tables of `E[T(b)]` and `Var T(b)` for increasing `b`.
struct DrawMoments {
    pool: u64,
    mean: Vec<ExactValue>,
    var: Vec<ExactValue>,
}

impl DrawMoments {
    fn new(pool: u32) -> Self {
        DrawMoments {
            pool: u64::from(pool),
            mean: alloc::vec![ExactValue::zero()],
            var: alloc::vec![ExactValue::zero()],
        }
    }

    fn extend_to(&mut self, b: u32) -> Result<()> {
        let b = b as usize;
        if b as u64 > self.pool {
            return Err(crate::error::domain!("b = {b} exceeds the pool of {} strands", self.pool));
        }
        while self.mean.len() <= b {
            let i = (self.mean.len() - 1) as u64;
            let left = self.pool - i;
            let mean = self.mean.last().unwrap() + &ExactValue::new(self.pool, left)?;
            let var = self.var.last().unwrap() + &ExactValue::new(self.pool * i, left * left)?;
            self.mean.push(mean);
            self.var.push(var);
        }
        Ok(())
    }

    fn mean(&mut self, b: u32) -> Result<ExactValue> {
        self.extend_to(b)?;
        Ok(self.mean[b as usize].clone())
    }

    fn variance(&mut self, b: u32) -> Result<ExactValue> {
        self.extend_to(b)?;
        Ok(self.var[b as usize].clone())
    }
}

/// Integer numerators bucketed by the level `t` of the state the process
/// leaves when it is absorbed; the probability is `N / (C(mn, t) (mn - t))`.
pub(crate) struct LevelBuckets {
    buckets: BTreeMap<u32, BigUint>,
}

impl LevelBuckets {
    pub(crate) fn new() -> Self {
        LevelBuckets { buckets: BTreeMap::new() }
    }

    pub(crate) fn add(&mut self, level: u32, numerator: BigUint) {
        if numerator.is_zero() {
            return;
        }
        *self.buckets.entry(level).or_insert_with(BigUint::zero) += numerator;
    }

    /// Adds `Pr = N / (C(pool, t) (pool - t))` at absorption level `t + 1`.
    pub(crate) fn drain_one_step(self, law: &mut AbsorptionLaw, pool_row: &[BigUint]) {
        let pool = law.pool();
        for (t, numer) in self.buckets {
            let denom = &pool_row[t as usize] * BigUint::from(pool - t);
            law.add(t + 1, ExactValue::from_biguints(numer, denom));
        }
    }

    /// Adds `Pr = N / C(pool, t)` at absorption level `t` itself.
    pub(crate) fn drain_in_place(self, law: &mut AbsorptionLaw, pool_row: &[BigUint]) {
        for (t, numer) in self.buckets {
            law.add(t, ExactValue::from_biguints(numer, pool_row[t as usize].clone()));
        }
    }
}

/// Expected draws for `scheme`, dispatching to the single- or multi-file form.
pub fn expected(scheme: &Scheme, params: &SystemParams, budget: u64) -> Result<ExactValue> {
    scheme.validate(params)?;
    match (*scheme, params.a) {
        (Scheme::LocalMds, 1) => expected_local_single(params),
        (Scheme::LocalMds, _) => expected_local_multi(params, budget),
        (Scheme::GlobalMds, 1) => expected_global_single(params),
        (Scheme::GlobalMds, _) => expected_global_multi(params),
        (Scheme::Pmds { s }, _) => expected_pmds_single(params, s),
    }
}

/// The absorption law of any scheme.
pub fn absorption_law(scheme: &Scheme, params: &SystemParams, budget: u64) -> Result<AbsorptionLaw> {
    scheme.validate(params)?;
    match *scheme {
        Scheme::LocalMds => local_absorption_law(params, budget),
        Scheme::GlobalMds => global_absorption_law(params),
        Scheme::Pmds { s } => pmds_absorption_law(params, s),
    }
}

/// Expectation, approximate variance and normal-approximation sample sizes.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticReport {
    pub scheme: Scheme,
    pub params: SystemParams,
    pub expectation: ExactValue,
    pub variance: VarianceApprox,
    pub std: f64,
    /// `(level, expectation + z(level)·std)`, ascending in level.
    pub confidence_sizes: Vec<(f64, f64)>,
}

impl AnalyticReport {
    pub fn evaluate(scheme: &Scheme, params: &SystemParams, levels: &[f64], budget: u64) -> Result<Self> {
        validate_levels(levels)?;
        let expectation = expected(scheme, params, budget)?;
        let variance = variance_approx(scheme, params, budget)?;
        let std = libm::sqrt(variance.value.to_f64());
        let mean = expectation.to_f64();
        let confidence_sizes = levels
            .iter()
            .map(|&level| Ok((level, confidence_sample_size(mean, std, level)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnalyticReport { scheme: *scheme, params: *params, expectation, variance, std, confidence_sizes })
    }
}

/// Levels must lie in `(0, 1)` and be strictly increasing.
pub fn validate_levels(levels: &[f64]) -> Result<()> {
    if let Some(bad) = levels.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
        return Err(invalid!("confidence level {bad} outside (0, 1)"));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid!("confidence levels must be strictly increasing"));
    }
    Ok(())
}

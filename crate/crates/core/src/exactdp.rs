//! Exact Markov-chain oracle over collection states.
//!
//! From a state with `ŝ` distinct strands a draw is a repeat with probability
//! `ŝ/mn` and otherwise lands in coordinate `c` with probability
//! `(cap_c - count_c)/mn`. Every non-repeat move raises `ŝ` by one, so the
//! chain is a DAG apart from self-loops and all sweeps are single passes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::combinatorics::{binomial_u128, ExactValue};
use crate::error::{domain, Error, Result};
use crate::schemes::{CollectionState, DecodeRule, Scheme, SystemParams};

/// Enumerated chain with successor lists.
///
/// For the local scheme the requested-file coordinates are interchangeable;
/// [`ChainModel::new`] keeps one representative per orbit (those counts
/// sorted in decreasing order), which is an exact lumping of the chain.
#[derive(Clone, Debug)]
pub struct ChainModel {
    pool: u32,
    caps: Vec<u32>,
    strides: Vec<u64>,
    lumped: usize,
    keys: Vec<u64>,
    totals: Vec<u32>,
    absorbing: Vec<bool>,
    succ_start: Vec<usize>,
    succ: Vec<(u32, u32)>,
}

impl ChainModel {
    /// The lumped chain.
    pub fn new(scheme: &Scheme, params: &SystemParams, budget: u64) -> Result<Self> {
        Self::build(scheme, params, budget, scheme.exchangeable_prefix(params))
    }

    /// The chain over every collection state, without symmetry reduction.
    pub fn unlumped(scheme: &Scheme, params: &SystemParams, budget: u64) -> Result<Self> {
        Self::build(scheme, params, budget, 0)
    }

    fn build(scheme: &Scheme, params: &SystemParams, budget: u64, lumped: usize) -> Result<Self> {
        scheme.validate(params)?;
        let caps = scheme.capacities(params);
        let count = lumped_count(&caps, lumped).unwrap_or(u64::MAX);
        if count > budget {
            return Err(Error::Budget { states: count, budget });
        }
        let mut strides = alloc::vec![1u64; caps.len()];
        for c in (0..caps.len() - 1).rev() {
            strides[c] = strides[c + 1] * (u64::from(caps[c + 1]) + 1);
        }
        let rule = DecodeRule::new(scheme, params)?;

        let mut model = ChainModel {
            pool: params.total_strands(),
            caps,
            strides,
            lumped,
            keys: Vec::with_capacity(count as usize),
            totals: Vec::with_capacity(count as usize),
            absorbing: Vec::with_capacity(count as usize),
            succ_start: Vec::with_capacity(count as usize + 1),
            succ: Vec::new(),
        };
        let mut current = alloc::vec![0u32; model.caps.len()];
        model.enumerate(0, &mut current, &rule);

        let mut next = current;
        for idx in 0..model.keys.len() {
            model.succ_start.push(model.succ.len());
            let state = model.decode_key(model.keys[idx]);
            for c in 0..state.len() {
                let free = model.caps[c] - state[c];
                if free == 0 {
                    continue;
                }
                next.copy_from_slice(&state);
                next[c] += 1;
                let key = model.canonical_key(&mut next);
                let target = model.keys.binary_search(&key).expect("successor is enumerated");
                model.succ.push((target as u32, free));
            }
        }
        model.succ_start.push(model.succ.len());
        Ok(model)
    }

    // Lexicographic order with the last coordinate fastest is key order.
    fn enumerate(&mut self, pos: usize, current: &mut [u32], rule: &DecodeRule) {
        if pos == current.len() {
            self.keys.push(self.key_of(current));
            self.totals.push(current.iter().sum());
            self.absorbing.push(rule.is_decodable(current));
            return;
        }
        let top = if pos > 0 && pos < self.lumped { current[pos - 1] } else { self.caps[pos] };
        for v in 0..=top {
            current[pos] = v;
            self.enumerate(pos + 1, current, rule);
        }
        current[pos] = 0;
    }

    fn key_of(&self, counts: &[u32]) -> u64 {
        counts.iter().zip(&self.strides).map(|(&c, &s)| u64::from(c) * s).sum()
    }

    fn canonical_key(&self, counts: &mut [u32]) -> u64 {
        counts[..self.lumped].sort_unstable_by(|a, b| b.cmp(a));
        self.key_of(counts)
    }

    fn decode_key(&self, mut key: u64) -> Vec<u32> {
        self.strides
            .iter()
            .map(|&s| {
                let c = key / s;
                key %= s;
                c as u32
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn pool(&self) -> u32 {
        self.pool
    }

    /// The state with index `idx`, in increasing key order.
    pub fn state(&self, idx: usize) -> CollectionState {
        CollectionState(self.decode_key(self.keys[idx]))
    }

    pub fn is_absorbing(&self, idx: usize) -> bool {
        self.absorbing[idx]
    }

    /// `(successor, weight)`: the move has probability `weight / mn`. Listed
    /// for absorbing states too; the stopping-time sweeps ignore them there.
    pub fn successors(&self, idx: usize) -> &[(u32, u32)] {
        &self.succ[self.succ_start[idx]..self.succ_start[idx + 1]]
    }

    /// Expected draws from the empty state, by backward induction:
    /// `E[s] = (mn + Σ_c w_c E[s + e_c]) / (mn - ŝ)`.
    pub fn expectation(&self) -> ExactValue {
        let pool = u64::from(self.pool);
        let mut e: Vec<ExactValue> = alloc::vec![ExactValue::zero(); self.len()];
        for idx in (0..self.len()).rev() {
            if self.absorbing[idx] {
                continue;
            }
            let mut acc = ExactValue::from(pool);
            for &(t, w) in self.successors(idx) {
                acc += ExactValue::from(u64::from(w)) * &e[t as usize];
            }
            let left = pool - u64::from(self.totals[idx]);
            e[idx] = acc / ExactValue::from(left);
        }
        e.swap_remove(0)
    }

    /// Probability that the jump chain (repeats removed) ever visits each
    /// state. With `stop` set, absorbing states keep their mass.
    pub fn visit_probabilities(&self, stop: bool) -> Vec<ExactValue> {
        let mut p: Vec<ExactValue> = alloc::vec![ExactValue::zero(); self.len()];
        p[0] = ExactValue::one();
        for idx in 0..self.len() {
            if p[idx].is_zero() || (stop && self.absorbing[idx]) || self.totals[idx] == self.pool {
                continue;
            }
            let left = u64::from(self.pool - self.totals[idx]);
            let share = p[idx].clone() / ExactValue::from(left);
            for &(t, w) in self.successors(idx) {
                let add = &share * &ExactValue::from(u64::from(w));
                p[t as usize] += add;
            }
        }
        p
    }

    /// `Pr[ν > r]` for `r = 0..=r_max`, evolving an `f64` distribution.
    pub fn tail(&self, r_max: usize) -> ExactTail {
        let inv_pool = 1.0 / f64::from(self.pool);
        let mut p = alloc::vec![0.0f64; self.len()];
        let mut next = alloc::vec![0.0f64; self.len()];
        let mut survival = Vec::with_capacity(r_max + 1);
        if !self.absorbing[0] {
            p[0] = 1.0;
        }
        for step in 0..=r_max {
            survival.push(p.iter().sum::<f64>().min(1.0));
            if step == r_max {
                break;
            }
            next.iter_mut().for_each(|x| *x = 0.0);
            for idx in 0..self.len() {
                let mass = p[idx];
                if mass == 0.0 {
                    continue;
                }
                next[idx] += mass * f64::from(self.totals[idx]) * inv_pool;
                for &(t, w) in self.successors(idx) {
                    if !self.absorbing[t as usize] {
                        next[t as usize] += mass * f64::from(w) * inv_pool;
                    }
                }
            }
            core::mem::swap(&mut p, &mut next);
        }
        let error_bound = r_max as f64 * self.len() as f64 * f64::EPSILON;
        ExactTail { survival, error_bound }
    }
}

/// `Π (cap_c + 1)`, counting multisets on the first `lumped` coordinates.
fn lumped_count(caps: &[u32], lumped: usize) -> Option<u64> {
    let rest = caps[lumped..].iter().try_fold(1u64, |acc, &c| acc.checked_mul(u64::from(c) + 1))?;
    if lumped == 0 {
        return Some(rest);
    }
    // non-increasing sequences of length `lumped` over 0..=cap
    let cap = u64::from(caps[0]);
    let orbits = binomial_u128(cap + lumped as u64, lumped as i64)?;
    u64::try_from(orbits).ok()?.checked_mul(rest)
}

/// Survival probabilities `Pr[ν > r]` with a bound on accumulated rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactTail {
    pub survival: Vec<f64>,
    pub error_bound: f64,
}

impl ExactTail {
    /// Smallest `r` with `Pr[ν <= r] >= level`, if within the computed range.
    pub fn quantile(&self, level: f64) -> Option<usize> {
        self.survival.iter().position(|&s| 1.0 - s >= level)
    }
}

/// `E[ν] = Σ_{r>=0} Pr[ν > r]`, from a truncated tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailMean {
    pub mean: f64,
    /// Size of the geometric extrapolation past the last entry, plus rounding.
    pub error_bound: f64,
    /// Whether the residual mass at the last entry is below `1e-12`.
    pub converged: bool,
}

pub const TAIL_RESIDUAL: f64 = 1e-12;

/// Sums the tail and extrapolates the remainder geometrically from the
/// ratio of the last two entries.
pub fn exact_mean_from_tail(tail: &ExactTail) -> TailMean {
    let s = &tail.survival;
    let partial: f64 = s.iter().sum();
    let last = s.last().copied().unwrap_or(0.0);
    let converged = last < TAIL_RESIDUAL;
    let correction = match s.len() {
        0 | 1 => 0.0,
        len => {
            let prev = s[len - 2];
            if last == 0.0 {
                0.0
            } else if prev > 0.0 && last < prev {
                let rho = last / prev;
                last * rho / (1.0 - rho)
            } else {
                f64::INFINITY
            }
        }
    };
    let rounding = tail.error_bound * s.len() as f64;
    if correction.is_finite() {
        TailMean { mean: partial + correction, error_bound: correction + rounding, converged }
    } else {
        TailMean { mean: partial, error_bound: f64::INFINITY, converged }
    }
}

/// Expected number of draws until the requested files decode.
pub fn exact_expectation(scheme: &Scheme, params: &SystemParams, budget: u64) -> Result<ExactValue> {
    Ok(ChainModel::new(scheme, params, budget)?.expectation())
}

/// `Pr[ν > r]` for `r = 0..=r_max`.
pub fn exact_tail(scheme: &Scheme, params: &SystemParams, r_max: usize, budget: u64) -> Result<ExactTail> {
    Ok(ChainModel::new(scheme, params, budget)?.tail(r_max))
}

/// Tail long enough for the residual to drop below [`TAIL_RESIDUAL`], up to
/// `r_limit` draws.
pub fn converged_tail(scheme: &Scheme, params: &SystemParams, r_limit: usize, budget: u64) -> Result<ExactTail> {
    let model = ChainModel::new(scheme, params, budget)?;
    let mut r_max = 4 * params.total_strands() as usize;
    loop {
        let tail = model.tail(r_max);
        if tail.survival.last().is_some_and(|&s| s < TAIL_RESIDUAL) || r_max >= r_limit {
            return Ok(tail);
        }
        r_max = (2 * r_max).min(r_limit);
    }
}

/// `Pr[stop with b distinct strands]` from the jump chain.
pub fn absorption_levels(scheme: &Scheme, params: &SystemParams, budget: u64) -> Result<BTreeMap<u32, ExactValue>> {
    let model = ChainModel::new(scheme, params, budget)?;
    let visits = model.visit_probabilities(true);
    let mut levels = BTreeMap::new();
    for (idx, p) in visits.into_iter().enumerate() {
        if model.absorbing[idx] && !p.is_zero() {
            *levels.entry(model.totals[idx]).or_insert_with(ExactValue::zero) += p;
        }
    }
    Ok(levels)
}

/// Probability that the unstopped process passes through each collection
/// state. Given `t` distinct strands the seen set is uniform, so this should
/// be `Π_c C(cap_c, count_c) / C(mn, t)`.
pub fn level_occupancy(
    scheme: &Scheme,
    params: &SystemParams,
    budget: u64,
) -> Result<Vec<(CollectionState, ExactValue)>> {
    let model = ChainModel::unlumped(scheme, params, budget)?;
    if model.pool > 64 {
        return Err(domain!("occupancy is only tabulated for pools of at most 64 strands"));
    }
    let visits = model.visit_probabilities(false);
    Ok(visits.into_iter().enumerate().map(|(idx, p)| (model.state(idx), p)).collect())
}

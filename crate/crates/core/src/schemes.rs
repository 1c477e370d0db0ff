//! System parameters, the three coding schemes and their recovery predicates.
//!
//! Strands are laid out file-major: file `f` (1-based) owns strand indices
//! `(f-1)n + 1 ..= f n`, and inside a file the first `k` positions are the
//! systematic ones.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error, Result};

/// Default cap on the number of Markov-chain states materialized at once.
pub const DEFAULT_STATE_BUDGET: u64 = 2_000_000;

/// `(n, k, m, a)`: encoded strands per file, information strands per file,
/// number of files, number of requested files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SystemParams {
    pub n: u32,
    pub k: u32,
    pub m: u32,
    pub a: u32,
}

impl SystemParams {
    pub fn new(n: u32, k: u32, m: u32, a: u32) -> Result<Self> {
        if k == 0 || k > n {
            return Err(invalid!("requires 1 <= k <= n (n={n}, k={k})"));
        }
        if m == 0 {
            return Err(invalid!("requires m >= 1"));
        }
        if a == 0 || a > m {
            return Err(invalid!("requires 1 <= a <= m (m={m}, a={a})"));
        }
        if u64::from(m) * u64::from(n) > u64::from(u32::MAX) {
            return Err(invalid!("m*n = {} is too large", u64::from(m) * u64::from(n)));
        }
        Ok(SystemParams { n, k, m, a })
    }

    /// Parameters for retrieving a single file.
    pub fn single(n: u32, k: u32, m: u32) -> Result<Self> {
        Self::new(n, k, m, 1)
    }

    /// Same system, different number of requested files.
    pub fn with_requested(self, a: u32) -> Result<Self> {
        Self::new(self.n, self.k, self.m, a)
    }

    /// `mn`, the size of the strand pool.
    pub fn total_strands(&self) -> u32 {
        self.m * self.n
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, k={}, m={}, a={}", self.n, self.k, self.m, self.a)
    }
}

/// The coding scheme applied to the `m` files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// An `[n, k]` MDS code on every file separately.
    LocalMds,
    /// One systematic `[mn, mk]` MDS code over all files.
    GlobalMds,
    /// Two-row partial-MDS array code with slack `s` (`m = 2` only).
    Pmds { s: u32 },
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::LocalMds => "local",
            Scheme::GlobalMds => "global",
            Scheme::Pmds { .. } => "pmds",
        }
    }

    pub fn slack(&self) -> Option<u32> {
        match self {
            Scheme::Pmds { s } => Some(*s),
            _ => None,
        }
    }

    /// Checks the scheme-specific constraints on `params`.
    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        if let Scheme::Pmds { s } = *self {
            if params.m != 2 {
                return Err(invalid!("pmds requires m=2 (got m={})", params.m));
            }
            if params.a != 1 {
                return Err(invalid!("pmds supports a single requested file (got a={})", params.a));
            }
            let limit = params.k.min(params.n - params.k);
            if s > limit {
                return Err(invalid!("pmds requires 0 <= s <= min(k, n-k) = {limit} (got s={s})"));
            }
        }
        Ok(())
    }

    /// Capacity of each coordinate of the collection state.
    pub fn capacities(&self, params: &SystemParams) -> Vec<u32> {
        let SystemParams { n, k, m, a } = *params;
        match self {
            Scheme::LocalMds => {
                let mut caps = alloc::vec![n; a as usize];
                caps.push((m - a) * n);
                caps
            }
            Scheme::GlobalMds => alloc::vec![a * k, m * n - a * k],
            Scheme::Pmds { .. } => alloc::vec![k, n - k, n],
        }
    }

    /// Coordinates that are interchangeable (permuting them maps the chain
    /// onto itself): the requested files of the local scheme.
    pub(crate) fn exchangeable_prefix(&self, params: &SystemParams) -> usize {
        match self {
            Scheme::LocalMds => params.a as usize,
            _ => 0,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Pmds { s } => write!(f, "pmds(s={s})"),
            other => f.write_str(other.label()),
        }
    }
}

/// The set of requested files, 1-based and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Requested(Vec<u32>);

impl Requested {
    pub fn new(params: &SystemParams, files: &[u32]) -> Result<Self> {
        let mut files = files.to_vec();
        files.sort_unstable();
        files.dedup();
        if files.len() != params.a as usize {
            return Err(invalid!("requested set must contain a={} distinct files (got {})", params.a, files.len()));
        }
        if let Some(&bad) = files.iter().find(|&&f| f == 0 || f > params.m) {
            return Err(invalid!("requested file {bad} outside 1..={}", params.m));
        }
        Ok(Requested(files))
    }

    /// `{1, ..., a}`.
    pub fn leading(params: &SystemParams) -> Self {
        Requested((1..=params.a).collect())
    }

    pub fn files(&self) -> &[u32] {
        &self.0
    }
}

/// Distinct strands collected per state coordinate.
///
/// * local: `(f_1, ..., f_a, f_rest)`
/// * global: `(systematic strands of the requested files, everything else)`
/// * pmds: `(systematic of file 1, non-systematic of file 1, file 2)`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CollectionState(pub Vec<u32>);

impl CollectionState {
    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Number of distinct strands collected.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl From<Vec<u32>> for CollectionState {
    fn from(value: Vec<u32>) -> Self {
        CollectionState(value)
    }
}

/// Maps a strand index in `1..=mn` to the state coordinate it increments.
pub fn category_of(scheme: &Scheme, params: &SystemParams, requested: &Requested, strand_index: u32) -> Result<usize> {
    scheme.validate(params)?;
    if requested.files().len() != params.a as usize {
        return Err(invalid!("requested set size does not match a={}", params.a));
    }
    let total = params.total_strands();
    if strand_index == 0 || strand_index > total {
        return Err(crate::error::domain!("strand index {strand_index} outside 1..={total}"));
    }
    Ok(category_unchecked(scheme, params, requested, strand_index - 1))
}

/// `strand` is 0-based here.
fn category_unchecked(scheme: &Scheme, params: &SystemParams, requested: &Requested, strand: u32) -> usize {
    let file = strand / params.n + 1;
    let position = strand % params.n;
    let slot = requested.files().iter().position(|&f| f == file);
    match scheme {
        Scheme::LocalMds => slot.unwrap_or(params.a as usize),
        Scheme::GlobalMds | Scheme::Pmds { .. } => match slot {
            Some(_) if position < params.k => 0,
            Some(_) => 1,
            None if matches!(scheme, Scheme::Pmds { .. }) => 2,
            None => 1,
        },
    }
}

/// Coordinate of every strand, indexed by 0-based strand position.
pub fn strand_categories(scheme: &Scheme, params: &SystemParams, requested: &Requested) -> Result<Vec<u32>> {
    scheme.validate(params)?;
    if requested.files().len() != params.a as usize {
        return Err(invalid!("requested set size does not match a={}", params.a));
    }
    Ok((0..params.total_strands()).map(|s| category_unchecked(scheme, params, requested, s) as u32).collect())
}

/// The recovery predicate of a scheme, specialised to one parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeRule {
    /// Every requested file has at least `k` distinct strands.
    Local { k: u32, files: usize },
    /// All `systematic` systematic strands, or `threshold` distinct strands overall.
    Global { systematic: u32, threshold: u32 },
    /// `i = k`, or `i + j >= k + s`, or `i + j + h >= 2k` with `i + j >= k - s`.
    Pmds { k: u32, s: u32 },
}

impl DecodeRule {
    pub fn new(scheme: &Scheme, params: &SystemParams) -> Result<Self> {
        scheme.validate(params)?;
        let SystemParams { k, m, a, .. } = *params;
        Ok(match *scheme {
            Scheme::LocalMds => DecodeRule::Local { k, files: a as usize },
            Scheme::GlobalMds => DecodeRule::Global { systematic: a * k, threshold: m * k },
            Scheme::Pmds { s } => DecodeRule::Pmds { k, s },
        })
    }

    #[inline]
    pub fn is_decodable(&self, counts: &[u32]) -> bool {
        match *self {
            DecodeRule::Local { k, files } => counts[..files].iter().all(|&f| f >= k),
            DecodeRule::Global { systematic, threshold } => {
                counts[0] == systematic || counts[0] + counts[1] >= threshold
            }
            DecodeRule::Pmds { k, s } => {
                let (i, j, h) = (counts[0], counts[1], counts[2]);
                i == k || i + j >= k + s || (i + j + h >= 2 * k && i + j + s >= k)
            }
        }
    }
}

/// Whether the requested files are recoverable from `state`.
pub fn decodable(scheme: &Scheme, params: &SystemParams, state: &CollectionState) -> Result<bool> {
    Ok(DecodeRule::new(scheme, params)?.is_decodable(state.counts()))
}

/// `Π (capacity + 1)`, or `None` on overflow.
pub fn state_count(scheme: &Scheme, params: &SystemParams) -> Option<u64> {
    scheme.capacities(params).iter().try_fold(1u64, |acc, &c| acc.checked_mul(u64::from(c) + 1))
}

/// Every state within the coordinate capacities, in lexicographic order.
pub fn enumerate_states(scheme: &Scheme, params: &SystemParams, budget: u64) -> Result<Vec<CollectionState>> {
    scheme.validate(params)?;
    let count = state_count(scheme, params).unwrap_or(u64::MAX);
    if count > budget {
        return Err(Error::Budget { states: count, budget });
    }
    let caps = scheme.capacities(params);
    let mut out = Vec::with_capacity(count as usize);
    let mut current = alloc::vec![0u32; caps.len()];
    loop {
        out.push(CollectionState(current.clone()));
        // odometer increment, last coordinate fastest
        let mut pos = caps.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if current[pos] < caps[pos] {
                current[pos] += 1;
                break;
            }
            current[pos] = 0;
        }
    }
}

use num_bigint::BigUint;

use super::{AbsorptionLaw, LevelBuckets};
use crate::combinatorics::{binomial_row, harmonic_diff, ExactValue};
use crate::error::{invalid, Error, Result};
use crate::schemes::SystemParams;

/// `mn (H_n - H_{n-k})` for a single requested file under the local scheme.
pub fn expected_local_single(params: &SystemParams) -> Result<ExactValue> {
    if params.a != 1 {
        return Err(invalid!("single-file expectation requires a=1 (got a={})", params.a));
    }
    let pool = u64::from(params.total_strands());
    Ok(ExactValue::from(pool) * harmonic_diff(u64::from(params.n), u64::from(params.k))?)
}

/// Expected draws to recover `a` files under the local scheme, from the
/// absorption law over the pre-absorbing family.
pub fn expected_local_multi(params: &SystemParams, budget: u64) -> Result<ExactValue> {
    local_absorption_law(params, budget)?.expectation()
}

/// Absorption law of the local scheme.
///
/// The process is absorbed when the last incomplete requested file receives
/// its `k`-th strand. The states one step before are
/// `g = (f_1, ..., f_a, f_rest)` with `f_j = k - 1` for the last file `j`,
/// `f_i >= k` for the other requested files and any `f_rest`; such a state is
/// reached with the multivariate hypergeometric probability
/// `Π C(n, f_i) · C((m-a)n, f_rest) / C(mn, ĝ)` and left towards absorption
/// with probability `(n - k + 1) / (mn - ĝ)`.
pub fn local_absorption_law(params: &SystemParams, budget: u64) -> Result<AbsorptionLaw> {
    let SystemParams { n, k, m, a } = *params;
    let pool = m * n;
    let rest_cap = (m - a) * n;
    let others = a - 1;
    let span = u64::from(n - k + 1);
    let family_size = span.checked_pow(others).and_then(|c| c.checked_mul(u64::from(rest_cap) + 1)).unwrap_or(u64::MAX);
    if family_size > budget {
        return Err(Error::Budget { states: family_size, budget });
    }

    let file_row = binomial_row(u64::from(n));
    let rest_row = binomial_row(u64::from(rest_cap));
    let pool_row = binomial_row(u64::from(pool));

    // Every choice of the last file contributes identically, so the family is
    // enumerated for one choice and scaled by `a`.
    let scale = &file_row[(k - 1) as usize] * BigUint::from(n - k + 1) * BigUint::from(a);
    let mut buckets = LevelBuckets::new();
    let mut walk = CompletedFiles { k, n, file_row: &file_row, rest_row: &rest_row, buckets: &mut buckets };
    walk.visit(others, k - 1, scale);

    let mut law = AbsorptionLaw::new(pool);
    buckets.drain_one_step(&mut law, &pool_row);
    Ok(law)
}

/// Lexicographic walk over the counts of the requested files that are
/// already complete, then over the pooled remainder.
struct CompletedFiles<'a> {
    k: u32,
    n: u32,
    file_row: &'a [BigUint],
    rest_row: &'a [BigUint],
    buckets: &'a mut LevelBuckets,
}

impl CompletedFiles<'_> {
    fn visit(&mut self, remaining: u32, collected: u32, weight: BigUint) {
        if remaining == 0 {
            for (rest, c) in self.rest_row.iter().enumerate() {
                self.buckets.add(collected + rest as u32, &weight * c);
            }
            return;
        }
        for f in self.k..=self.n {
            let w = &weight * &self.file_row[f as usize];
            self.visit(remaining - 1, collected + f, w);
        }
    }
}

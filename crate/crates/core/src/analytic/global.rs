use num_bigint::BigUint;

use super::{AbsorptionLaw, LevelBuckets};
use crate::combinatorics::{binomial, binomial_row, harmonic_diff, ExactValue};
use crate::error::{invalid, Result};
use crate::schemes::SystemParams;

/// Single-file expectation of the global systematic scheme.
pub fn expected_global_single(params: &SystemParams) -> Result<ExactValue> {
    if params.a != 1 {
        return Err(invalid!("single-file expectation requires a=1 (got a={})", params.a));
    }
    expected_global_multi(params)
}

/// Expected draws to recover `a` files under the global systematic scheme:
///
/// `mn (H_mn - H_{mn-mk}) - mn / C(mn, ak) · (Σ_{j=0}^{mk-ak-1} C(ak-1+j, ak-1) H_{mn-ak-j} - H_{mn-mk} C(mk-1, ak))`.
///
/// Because `Σ_j C(ak-1+j, ak-1) = C(mk-1, ak)`, the bracket equals
/// `Σ_j C(ak-1+j, ak-1) (H_{mn-ak-j} - H_{mn-mk})`, which is what gets
/// evaluated: every harmonic number then appears only as a short difference.
pub fn expected_global_multi(params: &SystemParams) -> Result<ExactValue> {
    let SystemParams { n, k, m, a } = *params;
    let pool = u64::from(m * n);
    let systematic = u64::from(a * k);
    let threshold = u64::from(m * k);
    let full = ExactValue::from(pool) * harmonic_diff(pool, threshold)?;
    if systematic == threshold {
        return Ok(full);
    }

    // H_{mn-ak-j} - H_{mn-mk} for j = 0, shrinking by 1/(mn-ak-j) per step.
    let mut gap = harmonic_diff(pool - systematic, threshold - systematic)?;
    let mut weighted = ExactValue::zero();
    for j in 0..threshold - systematic {
        let coeff = binomial(systematic - 1 + j, (systematic - 1) as i64);
        weighted += ExactValue::from(coeff) * &gap;
        gap = gap - ExactValue::new(1, pool - systematic - j)?;
    }
    let correction = ExactValue::from(pool) * weighted / ExactValue::from(binomial(pool, systematic as i64));
    Ok(full - correction)
}

/// Absorption law of the global scheme.
///
/// Two pre-absorbing families: `(ak-1, j)` for `j < mk-ak`, which absorbs on
/// the last missing systematic strand at level `ak + j`, and `(i, mk-1-i)` for
/// `i < ak`, which absorbs on any new strand at level `mk`.
pub fn global_absorption_law(params: &SystemParams) -> Result<AbsorptionLaw> {
    let SystemParams { n, k, m, a } = *params;
    let pool = m * n;
    let systematic = a * k;
    let threshold = m * k;
    let other = pool - systematic;
    let pool_row = binomial_row(u64::from(pool));
    let sys_row = binomial_row(u64::from(systematic));
    let other_row = binomial_row(u64::from(other));

    let mut law = AbsorptionLaw::new(pool);

    let mut last_systematic = LevelBuckets::new();
    for j in 0..threshold - systematic {
        // C(ak, ak-1) C(mn-ak, j), left with probability 1/(mn - ĝ)
        last_systematic.add(systematic - 1 + j, &sys_row[(systematic - 1) as usize] * &other_row[j as usize]);
    }
    last_systematic.drain_one_step(&mut law, &pool_row);

    let mut full_rank = BigUint::default();
    for i in 0..systematic {
        let j = threshold - 1 - i;
        if j <= other {
            full_rank += &sys_row[i as usize] * &other_row[j as usize];
        }
    }
    law.add(threshold, ExactValue::from_biguints(full_rank, pool_row[(threshold - 1) as usize].clone()));
    Ok(law)
}

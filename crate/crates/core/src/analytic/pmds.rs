use num_bigint::BigUint;

use super::{AbsorptionLaw, LevelBuckets};
use crate::combinatorics::{binomial_row, ExactValue};
use crate::error::Result;
use crate::schemes::{Scheme, SystemParams};

/// Expected draws to recover one file under the two-file PMDS scheme with
/// `s` global parities.
pub fn expected_pmds_single(params: &SystemParams, s: u32) -> Result<ExactValue> {
    pmds_absorption_law(params, s)?.expectation()
}

/// Absorption law of the PMDS scheme.
///
/// Counts are `(i, j, h)`: systematic strands of the requested file, its
/// local parities, and strands of the other file. Six pre-absorbing families
/// cover every way the decoding condition can become true on one draw.
pub fn pmds_absorption_law(params: &SystemParams, s: u32) -> Result<AbsorptionLaw> {
    Scheme::Pmds { s }.validate(params)?;
    let (n, k) = (i64::from(params.n), i64::from(params.k));
    let s = i64::from(s);
    let pool = 2 * params.n;

    let pool_row = binomial_row(u64::from(pool));
    let sys_row = binomial_row(k as u64);
    let par_row = binomial_row((n - k) as u64);
    let other_row = binomial_row(n as u64);
    let pick = |row: &[BigUint], x: i64| -> Option<BigUint> {
        usize::try_from(x).ok().and_then(|x| row.get(x)).filter(|c| **c != BigUint::default()).cloned()
    };

    let mut steps = LevelBuckets::new();
    let mut add = |t: i64, factor: i64, parts: [Option<BigUint>; 3]| {
        if factor <= 0 {
            return;
        }
        if let [Some(x), Some(y), Some(z)] = parts {
            steps.add(t as u32, x * y * z * BigUint::from(factor as u64));
        }
    };

    // last systematic strand with few local parities: i = k-1, j <= s
    for j in 0..=s {
        for h in 0..=k - j {
            add(k - 1 + j + h, k, [Some(BigUint::from(1u8)), pick(&par_row, j), pick(&other_row, h)]);
        }
    }
    // i + j reaches k + s, with h too small for the joint condition:
    // the final strand is systematic, then a local parity
    for h in 0..=k - s {
        for i in 1..k {
            let parts = [pick(&sys_row, i - 1), pick(&par_row, k + s - i), pick(&other_row, h)];
            add(k + s - 1 + h, k - i + 1, parts);
        }
        for i in 0..k {
            let parts = [pick(&sys_row, i), pick(&par_row, k + s - i - 1), pick(&other_row, h)];
            add(k + s - 1 + h, n - 2 * k - s + i + 1, parts);
        }
    }
    // i + j reaches k - s while h already covers the joint rank condition
    for h in k + s + 1..=n {
        for i in 1..=k - s {
            let parts = [pick(&sys_row, i - 1), pick(&par_row, k - s - i), pick(&other_row, h)];
            add(k - s - 1 + h, k - i + 1, parts);
        }
        for i in 0..=k - s {
            let parts = [pick(&sys_row, i), pick(&par_row, k - s - i - 1), pick(&other_row, h)];
            add(k - s - 1 + h, n - 2 * k + s + i + 1, parts);
        }
    }

    let mut law = AbsorptionLaw::new(pool);
    steps.drain_one_step(&mut law, &pool_row);

    // the total reaches 2k with i + j already in [k - s, k + s) and i < k
    let mut joint = LevelBuckets::new();
    for i in 0..k {
        for j in (k - s - i).max(0)..k + s - i {
            if let (Some(x), Some(y), Some(z)) = (pick(&sys_row, i), pick(&par_row, j), pick(&other_row, 2 * k - i - j))
            {
                joint.add((2 * k) as u32, x * y * z);
            }
        }
    }
    joint.drain_in_place(&mut law, &pool_row);
    Ok(law)
}

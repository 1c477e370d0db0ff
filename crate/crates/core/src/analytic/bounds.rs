use crate::combinatorics::{binomial, harmonic_diff, ExactValue};
use crate::error::Result;
use crate::schemes::SystemParams;

/// `k (m + 1) / 2`.
pub fn lower_bound_simple(params: &SystemParams) -> ExactValue {
    ExactValue::new(u64::from(params.k) * u64::from(params.m + 1), 2u64).expect("nonzero denominator")
}

/// `mn H_mn - n Σ_{i=1}^{m} H_{mn-ki}`, evaluated as `n Σ_i (H_mn - H_{mn-ki})`.
pub fn lower_bound_harmonic(params: &SystemParams) -> Result<ExactValue> {
    let SystemParams { n, k, m, .. } = *params;
    let pool = u64::from(m * n);
    let sum = (1..=u64::from(m)).map(|i| harmonic_diff(pool, u64::from(k) * i)).sum::<Result<ExactValue>>()?;
    Ok(ExactValue::from(u64::from(n)) * sum)
}

/// `mn / C(m, a) · Σ_{i=a-1}^{m-1} C(i-1, a-1) (m - i) (H_{mn-ki} - H_{mn-k(i+1)})`.
///
/// `C(-1, 0)` is taken as 1, so the `i = 0` term survives at `a = 1` and the
/// bound coincides with [`lower_bound_harmonic`]; for `a > 1` the first term
/// vanishes.
pub fn lower_bound_multi(params: &SystemParams) -> Result<ExactValue> {
    let SystemParams { n, k, m, a } = *params;
    let (n, k, m, a) = (u64::from(n), u64::from(k), u64::from(m), u64::from(a));
    let pool = m * n;
    let mut sum = ExactValue::zero();
    for i in a - 1..m {
        let coeff = if i == 0 { binomial(0, 0) } else { binomial(i - 1, a as i64 - 1) };
        if coeff == num_bigint::BigUint::default() {
            continue;
        }
        let weight = ExactValue::from(coeff * (m - i));
        sum += weight * harmonic_diff(pool - k * i, k)?;
    }
    Ok(ExactValue::from(pool) * sum / ExactValue::from(binomial(m, a as i64)))
}

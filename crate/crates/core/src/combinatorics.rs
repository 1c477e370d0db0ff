//! Exact harmonic numbers, binomial coefficients and hypergeometric ratios.
//!
//! Everything here is exact (arbitrary precision rationals). A log-gamma float
//! path exists for hypergeometric ratios whose parameters are too large to be
//! comfortable in exact arithmetic.

use alloc::vec::Vec;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

/// Parameter size above which [`hypergeometric_ratio_f64`] switches to the
/// log-gamma path.
pub const DEFAULT_LOG_PATH_THRESHOLD: u64 = 500;

/// An exact rational value, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactValue(BigRational);

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactValue(BigRational::one())
    }

    pub fn from_integer<T: Into<BigInt>>(value: T) -> Self {
        ExactValue(BigRational::from_integer(value.into()))
    }

    /// `numer / denom`, reduced. Fails on a zero denominator.
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(numer: N, denom: D) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(domain!("zero denominator"));
        }
        Ok(ExactValue(BigRational::new(numer.into(), denom)))
    }

    /// `numer / denom` for unsigned big integers; `denom` must be nonzero.
    pub(crate) fn from_biguints(numer: BigUint, denom: BigUint) -> Self {
        debug_assert!(!denom.is_zero());
        ExactValue(BigRational::new(numer.into(), denom.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(domain!("reciprocal of zero"));
        }
        Ok(ExactValue(self.0.recip()))
    }

    /// Relative distance `|self - other| / |other|` rendered as a float
    /// (absolute distance when `other` is zero).
    pub fn relative_error(&self, other: &ExactValue) -> f64 {
        let diff = (&self.0 - &other.0).abs();
        if other.is_zero() {
            return ExactValue(diff).to_f64();
        }
        ExactValue(diff / other.0.abs()).to_f64()
    }
}

impl From<BigRational> for ExactValue {
    fn from(value: BigRational) -> Self {
        ExactValue(value)
    }
}

impl From<u64> for ExactValue {
    fn from(value: u64) -> Self {
        ExactValue::from_integer(value)
    }
}

impl From<BigUint> for ExactValue {
    fn from(value: BigUint) -> Self {
        ExactValue::from_integer(BigInt::from(value))
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: ExactValue) -> ExactValue {
                ExactValue($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactValue> for ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: &'a ExactValue) -> ExactValue {
                ExactValue($trait::$method(self.0, &rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b ExactValue> for &'a ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: &'b ExactValue) -> ExactValue {
                ExactValue($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by a zero ExactValue panics, as for BigRational.
forward_binop!(Div, div);

impl AddAssign for ExactValue {
    fn add_assign(&mut self, rhs: ExactValue) {
        self.0 += rhs.0;
    }
}

impl<'a> AddAssign<&'a ExactValue> for ExactValue {
    fn add_assign(&mut self, rhs: &'a ExactValue) {
        self.0 += &rhs.0;
    }
}

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue(-self.0)
    }
}

impl Sum for ExactValue {
    fn sum<I: Iterator<Item = ExactValue>>(iter: I) -> Self {
        iter.fold(ExactValue::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactValue> for ExactValue {
    fn sum<I: Iterator<Item = &'a ExactValue>>(iter: I) -> Self {
        iter.fold(ExactValue::zero(), |acc, x| acc + x)
    }
}

/// `Σ_{i=lo+1}^{hi} 1/i` as an unreduced fraction `(p, q)`, by binary splitting.
fn reciprocal_range_sum(lo: u64, hi: u64) -> (BigUint, BigUint) {
    debug_assert!(lo < hi);
    if hi - lo <= 16 {
        let mut p = BigUint::zero();
        let mut q = BigUint::one();
        for i in lo + 1..=hi {
            // p/q + 1/i = (p*i + q) / (q*i)
            p = p * i + &q;
            q *= i;
        }
        return (p, q);
    }
    let mid = lo + (hi - lo) / 2;
    let (p1, q1) = reciprocal_range_sum(lo, mid);
    let (p2, q2) = reciprocal_range_sum(mid, hi);
    (p1 * &q2 + p2 * &q1, q1 * q2)
}

/// The `n`-th harmonic number `H_n = Σ_{i=1}^{n} 1/i`; `H_0 = 0`.
pub fn harmonic(n: u64) -> ExactValue {
    if n == 0 {
        return ExactValue::zero();
    }
    let (p, q) = reciprocal_range_sum(0, n);
    ExactValue::from_biguints(p, q)
}

/// `H_n - H_{n-b} = Σ_{i=0}^{b-1} 1/(n-i)`, summed directly over the `b` terms.
pub fn harmonic_diff(n: u64, b: u64) -> Result<ExactValue> {
    if b > n {
        return Err(domain!("harmonic_diff requires b <= n (n = {n}, b = {b})"));
    }
    if b == 0 {
        return Ok(ExactValue::zero());
    }
    let (p, q) = reciprocal_range_sum(n - b, n);
    Ok(ExactValue::from_biguints(p, q))
}

/// Float partial sum `Σ_{i=0}^{b-1} 1/(n-i)`, accumulated smallest term first.
pub fn harmonic_diff_f64(n: u64, b: u64) -> Result<f64> {
    if b > n {
        return Err(domain!("harmonic_diff requires b <= n (n = {n}, b = {b})"));
    }
    Ok((n - b + 1..=n).rev().map(|i| 1.0 / i as f64).sum())
}

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = k as u64;
    let r = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=r {
        acc *= n - r + i;
        acc /= i;
    }
    acc
}

/// `C(n, k)` when it fits in a `u128`.
pub fn binomial_u128(n: u64, k: i64) -> Option<u128> {
    binomial(n, k).to_u128()
}

/// The full row `[C(n, 0), ..., C(n, n)]`.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for h in 0..n {
        c = c * (n - h) / (h + 1);
        row.push(c.clone());
    }
    row
}

/// A `(n, k)` argument pair of a binomial coefficient.
pub type BinomialArg = (u64, i64);

/// Exact `Π C(numerator) / Π C(denominator)`.
pub fn hypergeometric_ratio(numerator: &[BinomialArg], denominator: &[BinomialArg]) -> Result<ExactValue> {
    let denom: BigUint = denominator.iter().map(|&(n, k)| binomial(n, k)).product();
    if denom.is_zero() {
        return Err(domain!("zero binomial in hypergeometric ratio denominator"));
    }
    let numer: BigUint = numerator.iter().map(|&(n, k)| binomial(n, k)).product();
    Ok(ExactValue::from_biguints(numer, denom))
}

/// `ln C(n, k)` via log-gamma; `-inf` outside `0 <= k <= n`.
pub fn ln_binomial(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return f64::NEG_INFINITY;
    }
    let k = k as u64;
    if k == 0 || k == n {
        return 0.0;
    }
    let lg = |x: u64| libm::lgamma(x as f64 + 1.0);
    lg(n) - lg(k) - lg(n - k)
}

/// Natural log of the hypergeometric ratio; `-inf` when the numerator vanishes.
pub fn hypergeometric_ratio_ln(numerator: &[BinomialArg], denominator: &[BinomialArg]) -> Result<f64> {
    let mut ln_denom = 0.0;
    for &(n, k) in denominator {
        let term = ln_binomial(n, k);
        if term == f64::NEG_INFINITY {
            return Err(domain!("zero binomial C({n}, {k}) in hypergeometric ratio denominator"));
        }
        ln_denom += term;
    }
    let ln_numer: f64 = numerator.iter().map(|&(n, k)| ln_binomial(n, k)).sum();
    Ok(ln_numer - ln_denom)
}

/// Hypergeometric ratio as a float: exact when every binomial's upper index is
/// at most `threshold`, log-gamma otherwise.
pub fn hypergeometric_ratio_f64(numerator: &[BinomialArg], denominator: &[BinomialArg], threshold: u64) -> Result<f64> {
    let largest = numerator.iter().chain(denominator).map(|&(n, _)| n).max().unwrap_or(0);
    if largest <= threshold {
        hypergeometric_ratio(numerator, denominator).map(|v| v.to_f64())
    } else {
        hypergeometric_ratio_ln(numerator, denominator).map(libm::exp)
    }
}

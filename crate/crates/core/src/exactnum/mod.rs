//! Arbitrary-precision arithmetic and truncated exact power-series algebra.
//!
//! All counting values in this crate are [`BigInt`]s; rationals appear only
//! as intermediates (half-integer binomials, series substitution kernels) and
//! every path that produces a count asserts integrality before returning it.

mod bivar;
mod series;

pub use bivar::BivarSeries;
pub use series::{Coeff, Series, SeriesError};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_traits::{One, Zero};

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 1..=k {
        r = r * BigInt::from(n - k + i) / BigInt::from(i);
    }
    r
}

/// Generalised binomial coefficient `C(top, k) = top (top-1) ... (top-k+1) / k!`
/// for an arbitrary rational `top`.
pub fn gen_binomial(top: &BigRational, k: u64) -> BigRational {
    let mut num = BigRational::one();
    for i in 0..k {
        num *= top - BigRational::from(BigInt::from(i));
    }
    let mut kfact = BigInt::one();
    for i in 2..=k {
        kfact *= BigInt::from(i);
    }
    num / BigRational::from(kfact)
}

/// Converts a rational that is known to be integral, panicking otherwise.
///
/// Integrality of closed forms is itself a correctness check: a non-integer
/// here means an index bug upstream, not a rounding issue.
pub fn expect_integer(r: &BigRational, context: &str) -> BigInt {
    assert!(
        r.denom().is_one(),
        "expected integer value in {context}, got {r}"
    );
    r.numer().clone()
}

/// Table of factorials `0!..=max!`.
pub struct Factorials {
    values: Vec<BigInt>,
}

impl Factorials {
    pub fn new(max: u64) -> Self {
        let mut values = Vec::with_capacity(max as usize + 1);
        values.push(BigInt::one());
        for i in 1..=max {
            let next = &values[i as usize - 1] * BigInt::from(i);
            values.push(next);
        }
        Factorials { values }
    }

    pub fn max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn fact(&self, n: u64) -> &BigInt {
        &self.values[n as usize]
    }

    /// `C(n, k)` computed from the table; `n` must not exceed `max`.
    pub fn binom(&self, n: u64, k: u64) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        self.fact(n) / (self.fact(k) * self.fact(n - k))
    }
}

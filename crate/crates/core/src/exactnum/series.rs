//! Truncated exact power series in one variable.
//!
//! A series carries its truncation order explicitly: a `Series` with
//! truncation `N` knows the coefficients of `z^0..z^N` exactly and nothing
//! beyond. Binary operations truncate to the minimum of the two inputs, so
//! precision loss is always visible in the type's state, never silent.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Coefficient ring for exact series: `BigInt` or `BigRational` in practice.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Add<Output = Self>
    + Mul<Output = Self>
    + From<BigInt>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Add<Output = T>
        + Mul<Output = T>
        + From<BigInt>
{
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("substitution z -> z/(1-z) requires zero constant term")]
    NonzeroConstantTerm,
    #[error("u-coefficient index {index} exceeds truncation order {order}")]
    ExtractBeyondTruncation { index: u64, order: u64 },
}

/// Exact power series truncated at order `trunc` (inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct Series<C: Coeff> {
    trunc: usize,
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    pub fn zero(trunc: usize) -> Self {
        Series {
            trunc,
            coeffs: vec![C::zero(); trunc + 1],
        }
    }

    /// Series from explicit coefficients `c_0..c_N`; truncation is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty());
        Series {
            trunc: coeffs.len() - 1,
            coeffs,
        }
    }

    /// The monomial `c z^k`, truncated at `trunc`.
    pub fn monomial(c: C, k: usize, trunc: usize) -> Self {
        let mut s = Series::zero(trunc);
        if k <= trunc {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Coefficient of `z^n`. Panics beyond the truncation order: coefficients
    /// past `trunc` are unknown, not zero.
    pub fn coeff(&self, n: usize) -> &C {
        assert!(
            n <= self.trunc,
            "coefficient {n} requested beyond truncation order {}",
            self.trunc
        );
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        assert!(n <= self.trunc);
        self.coeffs[n] = c;
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let coeffs = (0..=trunc)
            .map(|i| self.coeffs[i].clone() + other.coeffs[i].clone())
            .collect();
        Series { trunc, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let coeffs = (0..=trunc)
            .map(|i| self.coeffs[i].clone() - other.coeffs[i].clone())
            .collect();
        Series { trunc, coeffs }
    }

    /// Cauchy product, truncated to the minimum of the two input orders.
    pub fn mul(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut coeffs = vec![C::zero(); trunc + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(trunc + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                let prod = a.clone() * b.clone();
                coeffs[i + j] = coeffs[i + j].clone() + prod;
            }
        }
        Series { trunc, coeffs }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series {
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.clone() * c.clone())
                .collect(),
        }
    }

    /// Substitution `z -> z/(1-z)`: the coefficients undergo the binomial
    /// transform `b_n = sum_{k=1..n} C(n-1, k-1) a_k`. Requires `a_0 = 0`.
    pub fn compose_geom(&self, trunc: usize) -> Result<Self, SeriesError> {
        self.compose_geom_signed(trunc, false)
    }

    /// Substitution `z -> z/(1+z)`, the inverse of [`Series::compose_geom`]:
    /// `b_n = sum_{k=1..n} (-1)^(n-k) C(n-1, k-1) a_k`.
    pub fn compose_geom_inverse(&self, trunc: usize) -> Result<Self, SeriesError> {
        self.compose_geom_signed(trunc, true)
    }

    fn compose_geom_signed(&self, trunc: usize, alternating: bool) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let trunc = trunc.min(self.trunc);
        let mut coeffs = vec![C::zero(); trunc + 1];
        for (n, out) in coeffs.iter_mut().enumerate().skip(1) {
            let mut acc = C::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let mut b = C::from(crate::exactnum::binomial(n as u64 - 1, k as u64 - 1));
                if alternating && (n - k) % 2 == 1 {
                    b = -b;
                }
                acc = acc + b * self.coeffs[k].clone();
            }
            *out = acc;
        }
        Ok(Series { trunc, coeffs })
    }
}

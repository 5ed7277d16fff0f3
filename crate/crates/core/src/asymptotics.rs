//! Floating-point evaluation of the growth constants and bounds, with
//! convergence diagnostics against the exact tables.
//!
//! Everything factorial-scale is evaluated in log space through log-gamma:
//! the growth rates here overflow `f64` around n = 35 if materialised
//! directly. Constants that the underlying analysis leaves unspecified
//! (the `C`, `c1`, `c2` prefactors) are reported as empirical fits, never
//! asserted.

use crate::exactnum::BigInt;
use crate::sequences::{catalan, PhiTable};
use num_traits::{ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AsymptoticsError {
    #[error("phi table too short: need {need} values for p={p}, have {have}")]
    PhiTableTooShort { p: u32, need: usize, have: usize },
    #[error("size {n} is off the support (expected n = 2 mod 3)")]
    OffSupport { n: u64 },
}

/// Natural log of a positive big integer, to f64 accuracy.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x > &BigInt::zero(), "ln of a nonpositive integer");
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v.ln();
        }
    }
    let bits = x.bits();
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    (top.to_f64().unwrap()).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact ratio of two big integers as f64, usable when the quotient is
/// moderate even though both operands overflow f64.
pub fn big_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let scaled: BigInt = (num << 64u32) / den;
    scaled
        .to_f64()
        .map(|v| v / 2f64.powi(64))
        .unwrap_or(f64::INFINITY)
}

/// Composite Simpson quadrature of `ln_gamma` over `[1, 2]`.
fn log_gamma_integral(intervals: usize) -> f64 {
    let n = intervals * 2;
    let h = 1.0 / n as f64;
    let mut acc = ln_gamma(1.0) + ln_gamma(2.0);
    for i in 1..n {
        let x = 1.0 + i as f64 * h;
        acc += ln_gamma(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// The base constant `exp(-int_1^2 ln Gamma(x) dx)` of the product
/// approximation, by numerical quadrature.
pub fn eml_base_constant() -> f64 {
    (-log_gamma_integral(1 << 13)).exp()
}

/// `B_p = C_{p-1} prod_{k=1}^{p} 1 / Gamma(1 + (2(p-k)-1)/(2p+1))`.
pub fn compute_bp(p: u32) -> f64 {
    assert!(p >= 1);
    let mut log_b = ln_bigint(&catalan(u64::from(p) - 1));
    let denom = f64::from(2 * p + 1);
    for k in 1..=p {
        let arg = 1.0 + (2.0 * f64::from(p as i32 - k as i32) - 1.0) / denom;
        log_b -= ln_gamma(arg);
    }
    log_b.exp()
}

/// The product approximation to `B_p`:
/// `C_{p-1} exp(-(2p+1)/2 int_1^2 ln Gamma)`, accurate up to `O(1/p)`.
pub fn compute_bp_eml(p: u32) -> f64 {
    assert!(p >= 1);
    let c = ln_bigint(&catalan(u64::from(p) - 1));
    (c - f64::from(2 * p + 1) / 2.0 * log_gamma_integral(1 << 13)).exp()
}

/// Partial-product estimate of the correction constant `a_p`.
#[derive(Debug, Clone, Copy)]
pub struct ApEstimate {
    /// plain partial product over the available exact terms
    pub partial: f64,
    /// partial product with the analytic tail of the remaining factors
    pub value: f64,
    /// relative change contributed by the final exact factor
    pub last_rel_change: f64,
    pub n_terms: usize,
}

/// `a_p = prod_{j>=1} (1 + Gamma_j / Q_p(j))` with
/// `Gamma_j = sum_{l+m=j+1} phi_l phi_m / phi_j`, evaluated from the exact
/// table up to `n_terms` factors; the remaining factors are summed with the
/// limiting numerator `2 C_{p-1}`.
pub fn compute_ap(phi: &PhiTable, n_terms: usize) -> Result<ApEstimate, AsymptoticsError> {
    let p = phi.p();
    assert!(p >= 2, "the correction constant converges only for p >= 2");
    if phi.len() < n_terms + 1 {
        return Err(AsymptoticsError::PhiTableTooShort {
            p,
            need: n_terms + 1,
            have: phi.len(),
        });
    }
    let mut log_k = 0.0;
    let mut last = 0.0;
    for j in 1..=n_terms {
        // Gamma_j / Q_p(j) exactly as a big-integer ratio, then to float
        let gamma_over_q = big_ratio_to_f64(phi.conv(j + 1), &(phi.phi(j) * phi.q(j)));
        last = gamma_over_q.ln_1p();
        log_k += last;
    }
    let partial = log_k.exp();

    // tail with Gamma_j -> 2 C_{p-1}; Q grows like j^p so the explicit sum
    // converges quickly, and the integral remainder covers the rest
    let two_c = 2.0 * ln_bigint(&catalan(u64::from(p) - 1)).exp();
    let q_of = |j: f64| -> f64 {
        // 4^p C((p+1/2) j + p - 3/2, p) evaluated multiplicatively
        let top = (f64::from(p) + 0.5) * j + f64::from(p) - 1.5;
        let mut v = 4f64.powi(p as i32);
        for i in 0..p {
            v *= (top - f64::from(i)) / f64::from(p - i);
        }
        v
    };
    let mut tail = 0.0;
    let explicit_to = 1_000_000u64;
    for j in n_terms as u64..explicit_to {
        tail += (two_c / q_of(j as f64)).ln_1p();
    }
    // integral remainder of sum_{j >= M} 2C/Q(j) with Q ~ j^p
    let m = explicit_to as f64 + 0.5;
    let p_f = f64::from(p);
    tail += two_c * m / ((p_f - 1.0) * q_of(m));
    let value = (log_k + tail).exp();

    Ok(ApEstimate {
        partial,
        value,
        last_rel_change: last,
        n_terms,
    })
}

/// The growth constants for the exactly-`p` family.
#[derive(Debug, Clone, Copy)]
pub struct BciConstants {
    pub p: u32,
    pub beta_p: f64,
    pub gamma_p: f64,
    pub b_p: f64,
    pub a_p: f64,
    pub big_a_p: f64,
    /// constants of the Stirling form `bar_A bar_beta^{n-1} n^{bar_gamma} n^{np}`
    pub bar_beta_p: f64,
    pub bar_gamma_p: f64,
    pub bar_a_p: f64,
}

impl BciConstants {
    /// Assembles all constants; `phi` must extend past `n_terms`.
    pub fn compute(phi: &PhiTable, n_terms: usize) -> Result<Self, AsymptoticsError> {
        let p = phi.p();
        let beta_p = beta(p);
        let gamma_p = f64::from(p as i32) * f64::from(p as i32 - 2) / f64::from(2 * p + 1);
        let b_p = compute_bp(p);
        let a_p = compute_ap(phi, n_terms)?.value;
        let big_a_p = a_p * b_p;
        let p_f = f64::from(p);
        Ok(BciConstants {
            p,
            beta_p,
            gamma_p,
            b_p,
            a_p,
            big_a_p,
            bar_beta_p: beta_p / p_f.exp(),
            bar_gamma_p: -5.0 * p_f / (4.0 * p_f + 2.0),
            bar_a_p: (2.0 * std::f64::consts::PI / std::f64::consts::E.powi(2)).powf(p_f / 2.0)
                * a_p
                * b_p,
        })
    }

    /// Log of the predicted count at table index `n`:
    /// `ln(A_p beta_p^{n-1} n^{gamma_p} (n-1)!^p)`.
    pub fn log_estimate(&self, n: u64) -> f64 {
        self.big_a_p.ln()
            + (n as f64 - 1.0) * self.beta_p.ln()
            + self.gamma_p * (n as f64).ln()
            + f64::from(self.p) * ln_gamma(n as f64)
    }
}

/// `beta_p = (4p+2)^p / p!`.
fn beta(p: u32) -> f64 {
    let p_f = f64::from(p);
    (p_f * (4.0 * p_f + 2.0).ln() - ln_gamma(p_f + 1.0)).exp()
}

/// Constant-free log growth shape for the exactly-one family at size `n`:
/// `(n/3) ln(2n/e) - (1/6) ln n`; sizes must be congruent to 2 mod 3.
pub fn bci1_growth_log(n: u64) -> Result<f64, AsymptoticsError> {
    if n % 3 != 2 {
        return Err(AsymptoticsError::OffSupport { n });
    }
    let n_f = n as f64;
    Ok(n_f / 3.0 * (2.0 * n_f / std::f64::consts::E).ln() - (n_f).ln() / 6.0)
}

/// Two-sided bound exponents for the closed-term count at size `n`.
#[derive(Debug, Clone, Copy)]
pub struct BoundReport {
    pub n: u64,
    pub log_lambda: f64,
    pub lower_exponent: f64,
    pub upper_exponent: f64,
    pub epsilon: f64,
}

/// Log-space evaluation of the elementary sandwich
/// `c1 (4n/(e ln n))^{n/2} sqrt(ln n)/n <= lambda_n
///  <= c2 (9(1+eps) n/(e ln n))^{n/2} (ln n)^{n/(2 ln n)} / n^{3/2}`,
/// up to the unspecified additive constants `ln c1`, `ln c2`.
pub fn lambda_bounds(n: u64, epsilon: f64, log_lambda: f64) -> BoundReport {
    assert!(n >= 3 && epsilon > 0.0);
    let n_f = n as f64;
    let ln_n = n_f.ln();
    let lower = n_f / 2.0 * (4.0 * n_f / (std::f64::consts::E * ln_n)).ln()
        + (ln_n.sqrt() / n_f).ln();
    let upper = n_f / 2.0 * (9.0 * (1.0 + epsilon) * n_f / (std::f64::consts::E * ln_n)).ln()
        + n_f / (2.0 * ln_n) * ln_n.ln()
        - 1.5 * ln_n;
    BoundReport {
        n,
        log_lambda,
        lower_exponent: lower,
        upper_exponent: upper,
        epsilon,
    }
}

/// Lambert W (principal branch) for `x >= 0`, via Halley iteration,
/// accurate to about 1e-14 relative.
pub fn lambert_w(x: f64) -> f64 {
    assert!(x >= 0.0, "principal branch evaluated for x >= 0 only");
    if x == 0.0 {
        return 0.0;
    }
    // initial guess: log-based for large x, series-based for small
    let mut w = if x > std::f64::consts::E {
        let l = x.ln();
        l - l.ln()
    } else {
        x / (1.0 + x)
    };
    for _ in 0..60 {
        let ew = w.exp();
        let f = w * ew - x;
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

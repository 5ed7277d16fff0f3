//! Counting sequences for terms whose abstractions each bind at most `p`
//! variables, computed by three independent routes:
//!
//! 1. the pointer-saturated equation
//!    `Y = sum_{l<=p} C_{l-1} z^{2l} + z Y^2 + (sum_{l<=p} Delta_l) Y`
//!    followed by the substitution `z -> z/(1-z)`,
//! 2. the bivariate functional equation solved by fixed-point iteration on
//!    truncated coefficients,
//! 3. the grafting recurrence with the decoration weight truncated at `p`
//!    new leaves and the minimal term restricted to Motzkin trees with at
//!    most `p` leaves.
//!
//! Routes 2 and 3 always compare themselves against route 1 and fail on any
//! disagreement.

use super::closed::DeltaCache;
use super::{
    catalan, motzkin_bivar, motzkin_leaf_bounded, CountTable, Family, SequencesError,
};
use crate::exactnum::{binomial, BigInt, BivarSeries, Series};
use num_traits::Zero;

/// Coefficients of the pointer-saturated series `Y` up to `z^{n_max}`:
/// every abstraction binds between 1 and `p` variables.
pub fn bck_y_series(p: u32, n_max: u64) -> Result<Vec<BigInt>, SequencesError> {
    assert!(p >= 1 && n_max >= 1);
    // alpha rows for every operator order l <= p, dual-route checked
    let mut alphas: Vec<Vec<BigInt>> = vec![Vec::new()];
    for l in 1..=p {
        let mut row = vec![BigInt::zero(); l as usize + 1];
        for m in 1..=l {
            row[m as usize] = super::alpha(m, l)?;
        }
        alphas.push(row);
    }
    let nm = n_max as usize;
    let mut y = vec![BigInt::zero(); nm + 1];
    for n in 1..=nm {
        let mut v = BigInt::zero();
        // minimal terms: a binary tree with l <= p leaves under a root
        // abstraction binding all of them, size 2l
        if n % 2 == 0 && n / 2 <= p as usize {
            v += catalan(n as u64 / 2 - 1);
        }
        for i in 1..n - 1 {
            v += &y[i] * &y[n - 1 - i];
        }
        for l in 1..=p as usize {
            let shift = 2 * l + 1;
            if n <= shift {
                continue;
            }
            let idx = n - shift;
            if y[idx].is_zero() {
                continue;
            }
            let mut factor = BigInt::zero();
            for m in 1..=l {
                factor += &alphas[l][m] * binomial(idx as u64, m as u64);
            }
            v += factor * &y[idx];
        }
        y[n] = v;
    }
    Ok(y)
}

/// Counts of at-most-`p` terms by size, via the `Y` route.
pub fn bck_counts(p: u32, n_max: u64) -> Result<CountTable, SequencesError> {
    let y = bck_y_series(p, n_max)?;
    let series = Series::from_coeffs(y);
    let f = series.compose_geom(n_max as usize)?;
    let mut table = CountTable::new(Family::Bck(p), "y-substitution");
    for n in 1..=n_max as usize {
        table.insert(n as u64, f.coeff(n).clone());
    }
    Ok(table)
}

/// Counts of at-most-`p` terms via the bivariate functional equation,
/// solved by fixed-point iteration on truncated coefficients. The equation
/// is a contraction on formal power series: every right-hand term carries a
/// factor `z`, so each sweep fixes at least one further coefficient.
///
/// Errors if the result disagrees with [`bck_counts`] anywhere.
pub fn bck_counts_bivar(p: u32, n_max: u64) -> Result<CountTable, SequencesError> {
    assert!(p >= 1 && n_max >= 1);
    let nm = n_max as usize;
    let pu = p as usize;
    let m = motzkin_bivar(n_max, u64::from(p));

    // minimal term: [z^{n-1}] Motzkin trees with at most p leaves
    let mut min_term = vec![BigInt::zero(); nm + 1];
    for n in 2..=nm {
        min_term[n] = motzkin_leaf_bounded(&m, n as u64 - 1, u64::from(p));
    }

    // substitution kernels: ker_u[l][s] = sum_{t<=p} [z^s u^t] (1-2zM(z,u))^{-l}
    let mut w = BivarSeries::<BigInt>::zero(nm, pu);
    for n in 2..=nm {
        for t in 0..=pu {
            w.set_coeff(n, t, BigInt::from(2) * m.coeff(n - 1, t));
        }
    }
    let mut inv = BivarSeries::one(nm, pu);
    let mut pow = BivarSeries::one(nm, pu);
    for _ in 0..=nm / 2 {
        pow = pow.mul(&w);
        inv = inv.add(&pow);
    }
    let u_sum = |g: &BivarSeries<BigInt>, s: usize| -> BigInt {
        let mut v = BigInt::zero();
        for t in 0..=pu {
            v += g.coeff(s, t);
        }
        v
    };
    let mut ker_u: Vec<Vec<BigInt>> = vec![Vec::new(); nm + 1];
    let mut k_pow = BivarSeries::one(nm, pu);
    for l in 1..nm.max(2) {
        k_pow = k_pow.mul(&inv);
        ker_u[l] = (0..=nm).map(|s| u_sum(&k_pow, s)).collect();
    }

    // fixed-point iteration
    let mut f = vec![BigInt::zero(); nm + 1];
    let mut sweeps = 0;
    loop {
        let mut g = vec![BigInt::zero(); nm + 1];
        for n in 1..=nm {
            let mut v = min_term[n].clone();
            for i in 1..n - 1 {
                v += &f[i] * &f[n - 1 - i];
            }
            for l in 1..n {
                if f[l].is_zero() {
                    continue;
                }
                v += &f[l] * &ker_u[l][n - 1 - l];
            }
            g[n] = v;
        }
        sweeps += 1;
        if g == f {
            break;
        }
        assert!(sweeps <= nm + 2, "fixed point must stabilise within n_max sweeps");
        f = g;
    }

    let mut table = CountTable::new(Family::Bck(p), "bivariate-fixpoint");
    for n in 1..=nm {
        table.insert(n as u64, f[n].clone());
    }
    compare_to_y_route(p, n_max, &table, "bivariate")?;
    Ok(table)
}

/// Counts of at-most-`p` terms by the grafting recurrence with the
/// decoration weight truncated at `p` new leaves; the minimal term counts
/// Motzkin trees with at most `p` leaves.
///
/// Errors if the result disagrees with [`bck_counts`] anywhere.
pub fn bck_counts_delta(p: u32, n_max: u64) -> Result<CountTable, SequencesError> {
    assert!(p >= 1 && n_max >= 1);
    let nm = n_max as usize;
    let m = motzkin_bivar(n_max, u64::from(p));
    let mut delta = DeltaCache::new(n_max, Some(u64::from(p)));
    let mut f = vec![BigInt::zero(); nm + 1];
    for n in 2..=nm {
        let mut v = motzkin_leaf_bounded(&m, n as u64 - 1, u64::from(p));
        for l in 1..n - 1 {
            v += &f[l] * &f[n - 1 - l];
        }
        for l in 1..n {
            if f[l].is_zero() {
                continue;
            }
            let d = delta.get(n as u64, l as u64)?;
            v += d * &f[l];
        }
        f[n] = v;
    }
    let mut table = CountTable::new(Family::Bck(p), "truncated-delta");
    for n in 1..=nm {
        table.insert(n as u64, f[n].clone());
    }
    compare_to_y_route(p, n_max, &table, "truncated-delta")?;
    Ok(table)
}

fn compare_to_y_route(
    p: u32,
    n_max: u64,
    table: &CountTable,
    route: &str,
) -> Result<(), SequencesError> {
    let reference = bck_counts(p, n_max)?;
    for n in 1..=n_max {
        if table.get(n) != reference.get(n) {
            return Err(SequencesError::RouteDisagreement {
                what: format!("bck({p}) counts ({route} vs y-substitution)"),
                index: n,
                left: table.get(n).cloned().unwrap_or_default(),
                right: reference.get(n).cloned().unwrap_or_default(),
            });
        }
    }
    Ok(())
}

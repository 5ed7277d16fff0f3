//! Closed lambda-terms: the grafting recurrence, the substitution route and
//! the de Bruijn level route, plus the decoration kernels `zeta` and `delta`
//! they are built from.
//!
//! `delta_{n,l}` counts the decorated expansions turning a closed term of
//! size `l` into one of size `n` by adding a pointer-carrying abstraction at
//! the root; it equals `[z^{n-1-l}] (1 - 2zM(z))^{-l}` with `M` the Motzkin
//! series. Expanding the power gives the cross-check sum over
//! `zeta_{s,r} = [z^s] (2zM(z))^r`.

use super::dfinite::DeltaRowSource;
use super::{motzkin_table, CountTable, Family, SequencesError};
use crate::exactnum::{expect_integer, BigInt, BigRational, Factorials, Series};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// `zeta_{s,r} = [z^s] (2 z M(z))^r`, computed by the Lagrange-inversion sum
/// `2^r r/(s-r) sum_{b+2c=s-2r} multinomial(s-r; a,b,c)` and cross-checked
/// against the direct series power.
pub fn zeta(s: u64, r: u64) -> Result<BigInt, SequencesError> {
    let facts = Factorials::new(s.max(1));
    let lagrange = zeta_lagrange(s, r, &facts);

    // direct route: power of the series 2zM(z)
    let m = motzkin_table(s.max(1));
    let trunc = s as usize;
    let mut w = Series::zero(trunc);
    for i in 1..=trunc {
        w.set_coeff(i, BigInt::from(2) * &m[i - 1]);
    }
    let mut pow = Series::monomial(BigInt::one(), 0, trunc);
    for _ in 0..r {
        pow = pow.mul(&w);
    }
    let direct = pow.coeff(trunc).clone();

    if lagrange != direct {
        return Err(SequencesError::RouteDisagreement {
            what: format!("zeta({s},{r})"),
            index: s,
            left: lagrange,
            right: direct,
        });
    }
    Ok(lagrange)
}

/// Lagrange sum for `zeta_{s,r}`; `facts` must cover `s`.
pub(crate) fn zeta_lagrange(s: u64, r: u64, facts: &Factorials) -> BigInt {
    if r == 0 {
        return if s == 0 { BigInt::one() } else { BigInt::zero() };
    }
    if s < 2 * r {
        return BigInt::zero();
    }
    // over a+b+c = s-r with b+2c = s-2r: a = r+c, b = s-2r-2c
    let mut tot = BigInt::zero();
    for c in 0..=(s - 2 * r) / 2 {
        let a = r + c;
        let b = s - 2 * r - 2 * c;
        tot += facts.fact(s - r) / (facts.fact(a) * facts.fact(b) * facts.fact(c));
    }
    let mut two_r = BigInt::one();
    for _ in 0..r {
        two_r *= BigInt::from(2);
    }
    let num = tot * two_r * BigInt::from(r);
    let (q, rem) = num.div_rem(&BigInt::from(s - r));
    debug_assert!(rem.is_zero(), "zeta Lagrange sum must be integral");
    q
}

/// Inner sum of the regrouped `delta` formula: the contribution of
/// decorations with exactly `t` new leaves,
/// `b_{n,l,t} = sum_{r=1}^{t} r 2^r C(l-1+r, r) (n-l-2-r)! /
///             (t! (t-r)! (n-l-1-2t)!)`.
/// Integral although the individual `r`-terms need not be.
pub(crate) fn b_value(
    n: u64,
    l: u64,
    t: u64,
    facts: &Factorials,
) -> Result<BigInt, SequencesError> {
    if n < l + 2 || t > (n - l - 1) / 2 {
        return Ok(BigInt::zero());
    }
    let mut tot = BigRational::zero();
    for r in 1..=t {
        if n < l + 2 + r {
            return Err(SequencesError::NegativeFactorial {
                context: "b_value",
                n,
                l,
            });
        }
        let mut two_r = BigInt::one();
        for _ in 0..r {
            two_r *= BigInt::from(2);
        }
        let num =
            BigInt::from(r) * two_r * facts.binom(l - 1 + r, r) * facts.fact(n - l - 2 - r);
        let den = facts.fact(t) * facts.fact(t - r) * facts.fact(n - l - 1 - 2 * t);
        tot += BigRational::new(num, den);
    }
    Ok(expect_integer(&tot, "inner delta sum"))
}

/// `delta_{n,l}`, optionally with the new-leaf count capped at `p_cap`
/// (the at-most-`p` variant). Defined through the `zeta` expansion, which
/// contributes 1 at `l = n-1` (the bare new-root case); the factorial double
/// sum covers the decorated cases.
pub fn delta_direct(n: u64, l: u64, p_cap: Option<u64>) -> Result<BigInt, SequencesError> {
    assert!(
        l >= 1 && n >= 2 && l < n,
        "delta indices need 1 <= l <= n-1"
    );
    let facts = Factorials::new(n);
    delta_direct_with(n, l, p_cap, &facts)
}

pub(crate) fn delta_direct_with(
    n: u64,
    l: u64,
    p_cap: Option<u64>,
    facts: &Factorials,
) -> Result<BigInt, SequencesError> {
    let s = n - l - 1;
    if s == 0 {
        return Ok(BigInt::one());
    }
    let mut t_max = s / 2;
    if let Some(cap) = p_cap {
        t_max = t_max.min(cap);
    }
    let mut tot = BigInt::zero();
    for t in 1..=t_max {
        tot += b_value(n, l, t, facts)?;
    }
    Ok(tot)
}

/// Cache of `delta_{n,l}` values, shared by the recurrences that consume
/// them. `cap` selects the truncated (at-most-`p`) variant.
pub struct DeltaCache {
    cap: Option<u64>,
    facts: Factorials,
    map: BTreeMap<(u64, u64), BigInt>,
}

impl DeltaCache {
    pub fn new(n_max: u64, cap: Option<u64>) -> Self {
        DeltaCache {
            cap,
            facts: Factorials::new(n_max),
            map: BTreeMap::new(),
        }
    }

    pub fn cap(&self) -> Option<u64> {
        self.cap
    }

    pub fn get(&mut self, n: u64, l: u64) -> Result<&BigInt, SequencesError> {
        if !self.map.contains_key(&(n, l)) {
            let v = delta_direct_with(n, l, self.cap, &self.facts)?;
            debug_assert!(!v.is_negative());
            debug_assert!(l != n - 1 || v.is_one());
            self.map.insert((n, l), v);
        }
        Ok(&self.map[&(n, l)])
    }
}

/// Closed-term counts by the grafting recurrence
/// `lambda_n = M_{n-1} + sum_{l+q=n-1} lambda_l lambda_q
///           + sum_l delta_{n,l} lambda_l`.
///
/// Rows of `delta` come from the validated fast recurrence when it passes
/// its seed validation, and otherwise from the direct sums; the route tag
/// records which.
pub fn closed_counts(n_max: u64) -> Result<CountTable, SequencesError> {
    assert!(n_max >= 1);
    let m = motzkin_table(n_max.max(1));
    let mut rows = DeltaRowSource::new(n_max)?;
    let route = match rows {
        DeltaRowSource::Fast(_) => "grafting+dfinite",
        DeltaRowSource::Direct(_) => "grafting+direct",
    };
    let mut lam = vec![BigInt::zero(); n_max as usize + 1];
    for n in 2..=n_max as usize {
        let mut v = m[n - 1].clone();
        for l in 1..n - 1 {
            v += &lam[l] * &lam[n - 1 - l];
        }
        let row = rows.row(n as u64)?;
        for l in 1..n {
            if lam[l].is_zero() {
                continue;
            }
            v += &row[l] * &lam[l];
        }
        lam[n] = v;
    }
    let mut table = CountTable::new(Family::Closed, route);
    for n in 1..=n_max {
        table.insert(n, lam[n as usize].clone());
    }
    Ok(table)
}

/// Closed-term counts by the substitution route: solve
/// `L = C(z) + z L^2 + z L(z / (1 - 2 C(z))) - z L` for the series of terms
/// whose abstractions all bind at least one variable, then substitute
/// `z -> z/(1-z)`.
///
/// Here `C(z) = (1 - sqrt(1-4 z^2))/2`, so the substitution kernel has the
/// closed form `[z^{2m}] (1-4z^2)^{-k/2} = 4^m C(m + k/2 - 1, m)`, which is
/// what makes this the cheapest route at large sizes.
///
/// Cross-checked against [`closed_counts`] on the initial segment up to
/// `min(n_max, 400)`.
pub fn closed_counts_indirect(n_max: u64) -> Result<CountTable, SequencesError> {
    let table = closed_counts_indirect_unchecked(n_max)?;
    let check_to = n_max.min(400);
    let reference = closed_counts(check_to)?;
    for n in 1..=check_to {
        if table.get(n) != reference.get(n) {
            return Err(SequencesError::RouteDisagreement {
                what: "closed counts (substitution vs grafting)".into(),
                index: n,
                left: table.get(n).cloned().unwrap_or_default(),
                right: reference.get(n).cloned().unwrap_or_default(),
            });
        }
    }
    Ok(table)
}

fn closed_counts_indirect_unchecked(n_max: u64) -> Result<CountTable, SequencesError> {
    assert!(n_max >= 1);
    let n_max = n_max as usize;
    let mut lt = vec![BigInt::zero(); n_max + 1]; // pointer-saturated series
    // kernel state per k: (m, 4^m C(m + k/2 - 1, m)) at the active diagonal,
    // advanced via K(k,m) = K(k,m-1) * 2(k+2m-2) / m
    let mut kern: Vec<Option<(u64, BigInt)>> = vec![None; n_max + 1];
    for n in 1..=n_max {
        let mut v = if n % 2 == 0 {
            super::catalan(n as u64 / 2 - 1)
        } else {
            BigInt::zero()
        };
        for i in 1..n.saturating_sub(1) {
            v += &lt[i] * &lt[n - 1 - i];
        }
        // substitution contributions with m = (n-1-k)/2 >= 1
        let mut k = n as i64 - 3;
        while k >= 1 {
            let ku = k as usize;
            let m = ((n - 1 - ku) / 2) as u64;
            let entry = kern[ku].get_or_insert_with(|| (1, BigInt::from(2 * k)));
            while entry.0 < m {
                let mm = entry.0 + 1;
                let num = &entry.1 * BigInt::from(2 * (ku as u64 + 2 * mm - 2));
                let (q, rem) = num.div_rem(&BigInt::from(mm));
                assert!(rem.is_zero(), "substitution kernel must stay integral");
                entry.1 = q;
                entry.0 = mm;
            }
            debug_assert_eq!(entry.0, m);
            if !lt[ku].is_zero() {
                v += &lt[ku] * &entry.1;
            }
            k -= 2;
        }
        lt[n] = v;
    }

    // binomial transform lambda_n = sum_k C(n-1, k-1) lt_k; rows independent
    let lam: Vec<BigInt> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut b = BigInt::one();
            let mut tot = BigInt::zero();
            for k in 1..=n {
                if !lt[k].is_zero() {
                    tot += &b * &lt[k];
                }
                // C(n-1, k) from C(n-1, k-1)
                b = b * BigInt::from((n - k) as u64) / BigInt::from(k as u64);
            }
            tot
        })
        .collect();

    let mut table = CountTable::new(Family::Closed, "substitution");
    for (i, v) in lam.into_iter().enumerate() {
        table.insert(i as u64 + 1, v);
    }
    Ok(table)
}

/// Triangular table of closed-term counts by size and number of free de
/// Bruijn levels: `T_{1,k} = k`,
/// `T_{n,k} = T_{n-1,k+1} + sum_i T_{i,k} T_{n-1-i,k}`.
pub struct TnkTable {
    n_max: u64,
    /// `rows[n][k]` holds `T_{n,k}` for `k <= n_max - n`.
    rows: Vec<Vec<BigInt>>,
}

impl TnkTable {
    /// Builds the triangle for all `n + k <= n_max`.
    pub fn new(n_max: u64) -> Self {
        assert!(n_max >= 1);
        let nm = n_max as usize;
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(nm + 1);
        rows.push(Vec::new()); // index 0 unused
        rows.push((0..=nm - 1).map(|k| BigInt::from(k as u64)).collect());
        for n in 2..=nm {
            let width = nm - n;
            let prev = &rows[n - 1];
            let row: Vec<BigInt> = (0..=width)
                .into_par_iter()
                .map(|k| {
                    let mut v = prev[k + 1].clone();
                    for i in 1..n - 1 {
                        let a = &rows[i][k];
                        if a.is_zero() {
                            continue;
                        }
                        v += a * &rows[n - 1 - i][k];
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
        TnkTable { n_max, rows }
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// `T_{n,k}`; requires `n + k <= n_max`.
    pub fn get(&self, n: u64, k: u64) -> &BigInt {
        assert!(
            n >= 1 && n + k <= self.n_max,
            "T index ({n},{k}) out of range"
        );
        &self.rows[n as usize][k as usize]
    }

    /// Number of closed terms of size `n`.
    pub fn closed(&self, n: u64) -> &BigInt {
        self.get(n, 0)
    }
}

/// Closed-term counts via the de Bruijn level triangle, returned together
/// with the triangle itself (the sampler consumes it). Cross-checked against
/// [`closed_counts`] up to `min(n_max, 400)`.
pub fn closed_counts_debruijn(n_max: u64) -> Result<(CountTable, TnkTable), SequencesError> {
    let tnk = TnkTable::new(n_max);
    let mut table = CountTable::new(Family::ClosedDeBruijn, "debruijn-levels");
    for n in 1..=n_max {
        table.insert(n, tnk.closed(n).clone());
    }
    let check_to = n_max.min(400);
    let reference = closed_counts(check_to)?;
    for n in 1..=check_to {
        if table.get(n) != reference.get(n) {
            return Err(SequencesError::RouteDisagreement {
                what: "closed counts (de Bruijn vs grafting)".into(),
                index: n,
                left: table.get(n).cloned().unwrap_or_default(),
                right: reference.get(n).cloned().unwrap_or_default(),
            });
        }
    }
    Ok((table, tnk))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta(2, 1).unwrap(), BigInt::from(2));
        assert_eq!(zeta(4, 1).unwrap(), BigInt::from(4));
        assert_eq!(zeta(4, 2).unwrap(), BigInt::from(4));
        assert_eq!(zeta(0, 0).unwrap(), BigInt::from(1));
        assert_eq!(zeta(3, 0).unwrap(), BigInt::from(0));
        assert_eq!(zeta(1, 1).unwrap(), BigInt::from(0));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_direct(3, 2, None).unwrap(), BigInt::from(1));
        assert_eq!(delta_direct(5, 2, None).unwrap(), BigInt::from(4));
        assert_eq!(delta_direct(4, 2, None).unwrap(), BigInt::from(0));
    }

    #[test]
    fn delta_matches_zeta_sum() {
        let facts = Factorials::new(24);
        for n in 2..=24u64 {
            for l in 1..n {
                let s = n - l - 1;
                let mut expect = BigInt::zero();
                for r in 0..=s / 2 {
                    expect += crate::exactnum::binomial(l - 1 + r, l - 1) * zeta_lagrange(s, r, &facts);
                }
                assert_eq!(delta_direct(n, l, None).unwrap(), expect, "at ({n},{l})");
            }
        }
    }

    #[test]
    fn delta_boundary_is_one() {
        for n in 2..=30u64 {
            assert_eq!(delta_direct(n, n - 1, None).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn closed_counts_small() {
        let t = closed_counts(12).unwrap();
        let expect: [(u64, i64); 12] = [
            (1, 0),
            (2, 1),
            (3, 2),
            (4, 4),
            (5, 13),
            (6, 42),
            (7, 139),
            (8, 506),
            (9, 1915),
            (10, 7558),
            (11, 31092),
            (12, 132170),
        ];
        for (n, v) in expect {
            assert_eq!(t.get(n).unwrap(), &BigInt::from(v), "lambda_{n}");
        }
    }

    #[test]
    fn indirect_route_agrees() {
        let a = closed_counts(40).unwrap();
        let b = closed_counts_indirect(40).unwrap();
        for n in 1..=40 {
            assert_eq!(a.get(n), b.get(n), "at n={n}");
        }
    }

    #[test]
    fn debruijn_route_agrees() {
        let (t, tnk) = closed_counts_debruijn(30).unwrap();
        let a = closed_counts(30).unwrap();
        for n in 1..=30 {
            assert_eq!(t.get(n), a.get(n), "at n={n}");
        }
        assert_eq!(tnk.get(1, 3), &BigInt::from(3));
        assert_eq!(tnk.get(3, 0), &BigInt::from(2));
        assert_eq!(tnk.get(4, 0), &BigInt::from(4));
    }
}

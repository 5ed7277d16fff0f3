//! Gated fast evaluation of the `delta` kernel through two first-order
//! recurrence systems (one for the inner sums `b_{n,l,t}`, one for
//! `delta_{n,l}` itself).
//!
//! The systems are treated as hypotheses, not ground truth: before the fast
//! path is trusted it is validated exhaustively against the direct sums on a
//! seed region (all `n <= 60` for `delta`, `n <= 40` for `b`). Any mismatch
//! or non-integral division disables the fast path for the whole process and
//! the direct route is used instead.

use super::closed::{b_value, delta_direct_with};
use super::SequencesError;
use crate::exactnum::{BigInt, Factorials};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DfiniteError {
    #[error(
        "fast delta path disabled: recurrence disagrees with direct sum first at (n={n}, l={l})"
    )]
    Disagreement { n: u64, l: u64 },
    #[error("fast delta path disabled: non-integral recurrence step at (n={n}, l={l})")]
    NonIntegralStep { n: u64, l: u64 },
    #[error(
        "fast delta path disabled: residual of recurrence nonzero at (n={n}, l={l}, t={t:?})"
    )]
    ResidualNonzero { n: u64, l: u64, t: Option<u64> },
}

/// Full table of `delta_{n,l}` rows filled by the recurrence
/// `(n-l)(n+1-l) d_{n+2,l} = (n-l)(2n-l) d_{n+1,l} - l(n-1) d_{n+1,l+1}
///  - 4l(n-1) d_{n,l+1} + (n-1)(3n-2l+1) d_{n,l}`.
pub struct DeltaTable {
    /// `rows[n][l]` for `n >= 2`, `1 <= l <= n-1`; `rows[n][0]` is unused.
    rows: Vec<Vec<BigInt>>,
}

impl DeltaTable {
    pub fn new() -> Self {
        DeltaTable {
            rows: vec![
                Vec::new(),
                Vec::new(),
                vec![BigInt::zero(), BigInt::one()],
                vec![BigInt::zero(), BigInt::zero(), BigInt::one()],
            ],
        }
    }

    pub fn max_n(&self) -> u64 {
        self.rows.len() as u64 - 1
    }

    pub fn get(&self, n: u64, l: u64) -> &BigInt {
        assert!(n >= 2 && l >= 1 && l < n && n <= self.max_n());
        &self.rows[n as usize][l as usize]
    }

    pub fn extend_to(&mut self, n_max: u64) -> Result<(), DfiniteError> {
        while self.max_n() < n_max {
            let t = self.rows.len() as u64; // target row index
            let row = fill_row(t, &self.rows[t as usize - 1], &self.rows[t as usize - 2])?;
            self.rows.push(row);
        }
        Ok(())
    }
}

impl Default for DeltaTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Fills row `t >= 4` of the `delta` triangle from rows `t-1` and `t-2`.
fn fill_row(t: u64, prev1: &[BigInt], prev2: &[BigInt]) -> Result<Vec<BigInt>, DfiniteError> {
    let n = t - 2;
    let zero = BigInt::zero();
    let mut row = vec![BigInt::zero(); t as usize];
    row[t as usize - 1] = BigInt::one(); // bare new root
    row[t as usize - 2] = BigInt::zero(); // no decoration fits in one node
    for l in 1..=n - 1 {
        let li = l as usize;
        let d_n1_l = &prev1[li];
        let d_n1_l1 = &prev1[li + 1];
        let d_n_l1 = if l < t - 3 { &prev2[li + 1] } else { &zero };
        let d_n_l = &prev2[li];
        let num = BigInt::from((n - l) * (2 * n - l)) * d_n1_l
            - BigInt::from(l * (n - 1)) * d_n1_l1
            - BigInt::from(4 * l * (n - 1)) * d_n_l1
            + BigInt::from((n - 1) * (3 * n - 2 * l + 1)) * d_n_l;
        let den = BigInt::from((n - l) * (n + 1 - l));
        let (q, rem) = num.div_rem(&den);
        if !rem.is_zero() || q.is_negative() {
            return Err(DfiniteError::NonIntegralStep { n: t, l });
        }
        row[li] = q;
    }
    Ok(row)
}

/// Residual of the second recurrence for `delta` (the one coupling columns
/// `l`, `l+1`, `l+2`); must vanish on valid values.
fn delta_cross_residual(d: &DeltaTable, n: u64, l: u64) -> BigInt {
    let get = |nn: u64, ll: u64| -> BigInt {
        if ll >= 1 && ll < nn {
            d.get(nn, ll).clone()
        } else {
            BigInt::zero()
        }
    };
    let (ni, li) = (n as i128, l as i128);
    let c_n2 = BigInt::from((ni - li) * (ni + 1 - li) * (ni - 2 * li - 2));
    let c_n1 =
        BigInt::from((ni - li) * (2 * ni * ni - 6 * ni * li - 5 * ni + 2 * li * li + 3 * li + 1));
    let c_n0 =
        BigInt::from((ni - 1) * (3 * ni * ni - 2 * ni * li + ni - li * li - 9 * li - 8));
    let c_l2 = BigInt::from(20 * (ni - 1) * li * (li + 1));
    let c_l1 = BigInt::from(2 * (ni - 1) * (5 * ni - 9 * li - 12) * li);
    c_n2 * get(n + 2, l) - c_n1 * get(n + 1, l) - c_n0 * get(n, l)
        + c_l2 * get(n, l + 2)
        + c_l1 * get(n, l + 1)
}

/// Residuals of the two first-order recurrences for the inner sums
/// `b_{n,l,t}`; must vanish on values from the direct sum.
fn b_residuals(
    n: u64,
    l: u64,
    t: u64,
    facts: &Factorials,
) -> Result<(BigInt, BigInt), SequencesError> {
    let b = |nn: u64, ll: u64, tt: i128| -> Result<BigInt, SequencesError> {
        if tt < 0 {
            return Ok(BigInt::zero());
        }
        let tt = tt as u64;
        if nn < ll + 2 || tt > (nn - ll - 1) / 2 {
            return Ok(BigInt::zero());
        }
        b_value(nn, ll, tt, facts)
    };
    let (ni, li, ti) = (n as i128, l as i128, t as i128);
    let r1 = BigInt::from(-li * li - 2 * ni * ti - 2 * li * ti - li - ni + ni * ni)
        * b(n, l, ti)?
        + BigInt::from(2 * li * ti - 2 * ni * li + 2 * li * li + 4 * li) * b(n, l + 1, ti)?
        + BigInt::from(
            -4 * ti * ti - 2 * ti + 4 * ni * ti - 4 * li * ti - ni * ni + 2 * ni * li - li + ni
                - li * li,
        ) * b(n + 1, l, ti)?;
    let r2 = BigInt::from((2 * ni - ti - 2) * (ni - li - 2 * ti - 2) * (ni - li - 2 * ti - 1))
        * b(n, l, ti)?
        - BigInt::from(ti * (ti + 1) * (ni - li - ti - 2)) * b(n, l, ti + 1)?
        - BigInt::from((ni - li - 2 * ti - 2) * (ni - li - 2 * ti - 1) * (ni - li - 2 * ti))
            * b(n + 1, l, ti)?;
    Ok((r1, r2))
}

/// Runs the full validation of both recurrence systems against the direct
/// sums. Returns the first failure, if any.
fn validate_systems(delta_to: u64, b_to: u64) -> Result<(), DfiniteError> {
    let facts = Factorials::new(delta_to.max(b_to) + 3);

    // delta rows vs direct sums, exhaustively
    let mut table = DeltaTable::new();
    table.extend_to(delta_to)?;
    for n in 2..=delta_to {
        for l in 1..n {
            let direct = delta_direct_with(n, l, None, &facts)
                .map_err(|_| DfiniteError::Disagreement { n, l })?;
            if table.get(n, l) != &direct {
                return Err(DfiniteError::Disagreement { n, l });
            }
        }
    }

    // the column-coupled recurrence as an independent identity
    for n in 2..=delta_to.saturating_sub(2) {
        for l in 1..n {
            if !delta_cross_residual(&table, n, l).is_zero() {
                return Err(DfiniteError::ResidualNonzero { n, l, t: None });
            }
        }
    }

    // the b system on its seed region
    for n in 3..=b_to {
        for l in 1..n.saturating_sub(1) {
            for t in 0..=(n - l - 1) / 2 {
                let (r1, r2) =
                    b_residuals(n, l, t, &facts).map_err(|_| DfiniteError::ResidualNonzero {
                        n,
                        l,
                        t: Some(t),
                    })?;
                if !r1.is_zero() || !r2.is_zero() {
                    return Err(DfiniteError::ResidualNonzero { n, l, t: Some(t) });
                }
            }
        }
    }
    Ok(())
}

/// Process-wide validation certificate: computed once, shared by every
/// consumer of the fast path.
static VALIDATION: Lazy<Result<(), DfiniteError>> = Lazy::new(|| validate_systems(60, 40));

/// Result of the one-time validation of the recurrence systems against the
/// direct sums (`n <= 60` for `delta`, `n <= 40` for the inner sums).
pub fn delta_fast_validation() -> Result<(), DfiniteError> {
    VALIDATION.clone()
}

static SHARED_TABLE: Lazy<Mutex<DeltaTable>> = Lazy::new(|| Mutex::new(DeltaTable::new()));

/// `delta_{n,l}` through the validated recurrence system. Fails (and stays
/// disabled) if validation against the direct sums did not pass.
pub fn delta_fast(n: u64, l: u64) -> Result<BigInt, DfiniteError> {
    assert!(n >= 2 && l >= 1 && l < n);
    delta_fast_validation()?;
    let mut table = SHARED_TABLE.lock().unwrap();
    table.extend_to(n)?;
    Ok(table.get(n, l).clone())
}

/// Row-by-row `delta` source for the closed-term recurrence: the validated
/// fast path when available, the direct route otherwise. The fast variant
/// keeps only the two most recent rows.
pub(crate) enum DeltaRowSource {
    Fast(FastRows),
    Direct(DirectRows),
}

impl DeltaRowSource {
    pub fn new(n_max: u64) -> Result<Self, SequencesError> {
        match delta_fast_validation() {
            Ok(()) => Ok(DeltaRowSource::Fast(FastRows::new())),
            Err(_) => Ok(DeltaRowSource::Direct(DirectRows::new(n_max))),
        }
    }

    /// Row `n` (`delta_{n,l}` at index `l`); rows must be requested in
    /// increasing order starting from 2.
    pub fn row(&mut self, n: u64) -> Result<&[BigInt], SequencesError> {
        match self {
            DeltaRowSource::Fast(f) => f.row(n).map_err(SequencesError::from),
            DeltaRowSource::Direct(d) => d.row(n),
        }
    }
}

pub(crate) struct FastRows {
    prev2: Vec<BigInt>,
    prev1: Vec<BigInt>,
    n: u64,
}

impl FastRows {
    pub(crate) fn new() -> Self {
        FastRows {
            prev2: vec![BigInt::zero(), BigInt::one()],
            prev1: vec![BigInt::zero(), BigInt::zero(), BigInt::one()],
            n: 3,
        }
    }

    fn row(&mut self, n: u64) -> Result<&[BigInt], DfiniteError> {
        assert!(
            (self.n - 1..=self.n + 1).contains(&n),
            "rows must advance one at a time"
        );
        if n == self.n - 1 {
            return Ok(&self.prev2);
        }
        if n == self.n {
            return Ok(&self.prev1);
        }
        let row = fill_row(n, &self.prev1, &self.prev2)?;
        self.prev2 = std::mem::replace(&mut self.prev1, row);
        self.n = n;
        Ok(&self.prev1)
    }
}

/// Direct fallback: `delta_{n,l} = sum_r C(l-1+r, l-1) zeta_{n-l-1, r}` with
/// the `zeta` columns precomputed as series powers.
pub(crate) struct DirectRows {
    /// `zeta[r][s] = [z^s] (2 z M(z))^r`
    zeta: Vec<Vec<BigInt>>,
    current: Vec<BigInt>,
    n_max: u64,
}

impl DirectRows {
    pub(crate) fn new(n_max: u64) -> Self {
        let s_max = n_max.saturating_sub(2) as usize;
        let m = super::motzkin_table(s_max.max(1) as u64);
        let mut w = vec![BigInt::zero(); s_max + 1];
        for s in 2..=s_max {
            w[s] = BigInt::from(2) * &m[s - 1];
        }
        let mut zeta: Vec<Vec<BigInt>> = Vec::with_capacity(s_max / 2 + 2);
        let mut unit = vec![BigInt::zero(); s_max + 1];
        unit[0] = BigInt::one();
        zeta.push(unit);
        for r in 1..=s_max / 2 {
            let prev = &zeta[r - 1];
            let mut next = vec![BigInt::zero(); s_max + 1];
            for i in 0..=s_max {
                if prev[i].is_zero() {
                    continue;
                }
                for j in 2..=s_max - i {
                    if w[j].is_zero() {
                        continue;
                    }
                    next[i + j] += &prev[i] * &w[j];
                }
            }
            zeta.push(next);
        }
        DirectRows {
            zeta,
            current: Vec::new(),
            n_max,
        }
    }

    fn row(&mut self, n: u64) -> Result<&[BigInt], SequencesError> {
        assert!(n >= 2 && n <= self.n_max);
        let mut row = vec![BigInt::zero(); n as usize];
        for l in 1..n {
            let s = (n - l - 1) as usize;
            let mut v = BigInt::zero();
            for (r, col) in self.zeta.iter().enumerate().take(s / 2 + 1) {
                let z = &col[s];
                if z.is_zero() {
                    continue;
                }
                v += crate::exactnum::binomial(l - 1 + r as u64, l - 1) * z;
            }
            row[l as usize] = v;
        }
        self.current = row;
        Ok(&self.current)
    }
}

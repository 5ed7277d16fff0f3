//! Exact counting sequences for closed lambda-terms and their subclasses.
//!
//! Each family is computed by a primary recurrence; wherever an independent
//! route exists (a second functional equation, a closed form, a generating
//! function substitution) both are implemented and compared. A disagreement
//! is an error, never a silent choice.

mod bci;
mod bck;
mod closed;
mod dfinite;

pub use bci::{alpha, bci_counts, bci_phi, delta_apply, linearized_counts, q_poly, PhiTable};
pub use bck::{bck_counts, bck_counts_bivar, bck_counts_delta, bck_y_series};
pub use closed::{
    closed_counts, closed_counts_debruijn, closed_counts_indirect, delta_direct, zeta, DeltaCache,
    TnkTable,
};
pub use dfinite::{delta_fast, delta_fast_validation, DeltaTable, DfiniteError};

use crate::exactnum::{binomial, BigInt, BivarSeries};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SequencesError {
    #[error("routes disagree for {what} at index {index}: {left} vs {right}")]
    RouteDisagreement {
        what: String,
        index: u64,
        left: BigInt,
        right: BigInt,
    },
    #[error("structural error: {0}")]
    Structural(String),
    #[error("negative factorial argument in {context} at (n={n}, l={l})")]
    NegativeFactorial { context: &'static str, n: u64, l: u64 },
    #[error(transparent)]
    DFinite(#[from] DfiniteError),
    #[error(transparent)]
    Series(#[from] crate::exactnum::SeriesError),
}

/// A counting family. `p` is the per-abstraction pointer bound where present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Catalan,
    Motzkin,
    MotzkinLeafBounded(u32),
    Bci(u32),
    BciLinearized(u32),
    Bck(u32),
    Closed,
    ClosedDeBruijn,
}

impl Family {
    pub fn p(&self) -> Option<u32> {
        match self {
            Family::MotzkinLeafBounded(p)
            | Family::Bci(p)
            | Family::BciLinearized(p)
            | Family::Bck(p) => Some(*p),
            _ => None,
        }
    }

    /// Size support of the family: BCI(p) terms exist only at sizes
    /// `(2p+1) j - 1`, i.e. indices congruent to `2p` modulo `2p+1`.
    pub fn on_support(&self, n: u64) -> bool {
        match self {
            Family::Bci(p) | Family::BciLinearized(p) => {
                let m = 2 * u64::from(*p) + 1;
                n % m == m - 1
            }
            _ => true,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Catalan => write!(f, "catalan"),
            Family::Motzkin => write!(f, "motzkin"),
            Family::MotzkinLeafBounded(p) => write!(f, "motzkin-leaf-bounded({p})"),
            Family::Bci(p) => write!(f, "bci({p})"),
            Family::BciLinearized(p) => write!(f, "bci-linearized({p})"),
            Family::Bck(p) => write!(f, "bck({p})"),
            Family::Closed => write!(f, "closed"),
            Family::ClosedDeBruijn => write!(f, "closed-debruijn"),
        }
    }
}

/// Memoized sequence values keyed by index, tagged with the route that
/// produced them. Append-only; every inserted value must be a nonnegative
/// integer on the family's size support.
#[derive(Debug, Clone)]
pub struct CountTable {
    family: Family,
    route: &'static str,
    values: BTreeMap<u64, BigInt>,
}

impl CountTable {
    pub fn new(family: Family, route: &'static str) -> Self {
        CountTable {
            family,
            route,
            values: BTreeMap::new(),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Route identifier recording how the values were computed.
    pub fn route(&self) -> &'static str {
        self.route
    }

    pub fn insert(&mut self, n: u64, value: BigInt) {
        assert!(!value.is_negative(), "negative count at index {n}");
        assert!(
            self.family.on_support(n) || value.is_zero(),
            "nonzero count off the size support of {} at index {n}",
            self.family
        );
        let prev = self.values.insert(n, value);
        assert!(prev.is_none(), "count table is append-only (index {n})");
    }

    pub fn get(&self, n: u64) -> Option<&BigInt> {
        self.values.get(&n)
    }

    /// Value at `n`, taking absent off-support indices as zero.
    pub fn get_or_zero(&self, n: u64) -> BigInt {
        self.values.get(&n).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &BigInt)> {
        self.values.iter()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.values.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Catalan number `C_n = C(2n, n) / (n+1)`.
pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n) / BigInt::from(n + 1)
}

/// Motzkin numbers `M_1..M_n` from `M = z + zM + zM^2`:
/// `M_1 = 1`, `M_n = M_{n-1} + sum_{i+j=n-1} M_i M_j`.
/// Index 0 is present (and zero) so that `table[n] = M_n`.
pub fn motzkin_table(n_max: u64) -> Vec<BigInt> {
    let n_max = n_max as usize;
    let mut m = vec![BigInt::zero(); n_max + 1];
    if n_max >= 1 {
        m[1] = BigInt::one();
    }
    for n in 2..=n_max {
        let mut v = m[n - 1].clone();
        for i in 1..n - 1 {
            v += &m[i] * &m[n - 1 - i];
        }
        m[n] = v;
    }
    m
}

/// The number of Motzkin trees with `n` nodes.
pub fn motzkin(n: u64) -> BigInt {
    assert!(n >= 1);
    motzkin_table(n).pop().unwrap()
}

/// Bivariate Motzkin series `M(z,u)` with `z` marking nodes and `u` marking
/// leaves, the unique power-series solution of `M = uz + zM + zM^2`.
pub fn motzkin_bivar(n_z: u64, n_u: u64) -> BivarSeries<BigInt> {
    let (n_z, n_u) = (n_z as usize, n_u as usize);
    let mut m = BivarSeries::zero(n_z, n_u);
    if n_z >= 1 && n_u >= 1 {
        m.set_coeff(1, 1, BigInt::one());
    }
    for n in 2..=n_z {
        for k in 0..=n_u {
            let mut v = m.coeff(n - 1, k).clone();
            for i in 1..n - 1 {
                for a in 0..=k {
                    let left = m.coeff(i, a);
                    if left.is_zero() {
                        continue;
                    }
                    let right = m.coeff(n - 1 - i, k - a);
                    if right.is_zero() {
                        continue;
                    }
                    v += left * right;
                }
            }
            m.set_coeff(n, k, v);
        }
    }
    m
}

/// Number of Motzkin trees with `n` nodes and at most `max_leaves` leaves.
pub fn motzkin_leaf_bounded(m: &BivarSeries<BigInt>, n: u64, max_leaves: u64) -> BigInt {
    let (n_z, n_u) = m.orders();
    assert!(n as usize <= n_z && max_leaves as usize <= n_u);
    let mut v = BigInt::zero();
    for k in 0..=max_leaves as usize {
        v += m.coeff(n as usize, k);
    }
    v
}

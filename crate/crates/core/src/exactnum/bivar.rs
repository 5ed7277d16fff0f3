//! Truncated exact power series in two variables `z` and `u`.
//!
//! The coefficient grid is rectangular: a `BivarSeries` with truncation
//! `(n_z, n_u)` holds `c_{i,j}` for `i <= n_z`, `j <= n_u` exactly. All
//! operations respect the rectangle and truncate to the componentwise
//! minimum of the inputs.

use super::series::{Coeff, Series, SeriesError};

#[derive(Debug, Clone, PartialEq)]
pub struct BivarSeries<C: Coeff> {
    n_z: usize,
    n_u: usize,
    /// `grid[i][j]` is the coefficient of `z^i u^j`.
    grid: Vec<Vec<C>>,
}

impl<C: Coeff> BivarSeries<C> {
    pub fn zero(n_z: usize, n_u: usize) -> Self {
        BivarSeries {
            n_z,
            n_u,
            grid: vec![vec![C::zero(); n_u + 1]; n_z + 1],
        }
    }

    pub fn one(n_z: usize, n_u: usize) -> Self {
        let mut s = Self::zero(n_z, n_u);
        s.grid[0][0] = C::one();
        s
    }

    /// Embeds a pure-`z` series with `u`-truncation `n_u`.
    pub fn from_z_series(s: &Series<C>, n_u: usize) -> Self {
        let mut b = Self::zero(s.trunc(), n_u);
        for i in 0..=s.trunc() {
            b.grid[i][0] = s.coeff(i).clone();
        }
        b
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.n_z, self.n_u)
    }

    pub fn coeff(&self, i: usize, j: usize) -> &C {
        assert!(
            i <= self.n_z && j <= self.n_u,
            "coefficient ({i},{j}) beyond truncation ({}, {})",
            self.n_z,
            self.n_u
        );
        &self.grid[i][j]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: C) {
        assert!(i <= self.n_z && j <= self.n_u);
        self.grid[i][j] = c;
    }

    pub fn add(&self, other: &Self) -> Self {
        let n_z = self.n_z.min(other.n_z);
        let n_u = self.n_u.min(other.n_u);
        let mut out = Self::zero(n_z, n_u);
        for i in 0..=n_z {
            for j in 0..=n_u {
                out.grid[i][j] = self.grid[i][j].clone() + other.grid[i][j].clone();
            }
        }
        out
    }

    /// Cauchy product in both variables, truncated componentwise.
    pub fn mul(&self, other: &Self) -> Self {
        let n_z = self.n_z.min(other.n_z);
        let n_u = self.n_u.min(other.n_u);
        let mut out = Self::zero(n_z, n_u);
        for i in 0..=n_z {
            for j in 0..=n_u {
                let a = &self.grid[i][j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..=(n_z - i) {
                    for l in 0..=(n_u - j) {
                        let b = &other.grid[k][l];
                        if b.is_zero() {
                            continue;
                        }
                        let prod = a.clone() * b.clone();
                        out.grid[i + k][j + l] = out.grid[i + k][j + l].clone() + prod;
                    }
                }
            }
        }
        out
    }

    /// The `u^p` coefficient slice as a series in `z`.
    pub fn extract_u(&self, p: usize) -> Result<Series<C>, SeriesError> {
        if p > self.n_u {
            return Err(SeriesError::ExtractBeyondTruncation {
                index: p as u64,
                order: self.n_u as u64,
            });
        }
        Ok(Series::from_coeffs(
            (0..=self.n_z).map(|i| self.grid[i][p].clone()).collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::BigInt;
    use crate::sequences::motzkin_bivar;
    use num_traits::Zero;
    use proptest::prelude::*;

    #[test]
    fn extract_u_zero_slice_of_motzkin_is_zero() {
        // every Motzkin tree has at least one leaf
        let m = motzkin_bivar(8, 3);
        let u0 = m.extract_u(0).unwrap();
        assert!(u0.is_zero());
    }

    #[test]
    fn extract_u_binary_cherry() {
        // the unique 3-node tree with 2 leaves
        let m = motzkin_bivar(8, 3);
        assert_eq!(*m.extract_u(2).unwrap().coeff(3), BigInt::from(1));
    }

    #[test]
    fn extract_u_central_binomials() {
        // f(u) * z with f = 1/sqrt(1-4u): the u^p slice is C(2p,p) * z
        let n_u = 6;
        let mut f_z = BivarSeries::<BigInt>::zero(2, n_u);
        for j in 0..=n_u {
            f_z.set_coeff(1, j, crate::exactnum::binomial(2 * j as u64, j as u64));
        }
        for p in 0..=n_u {
            let slice = f_z.extract_u(p).unwrap();
            assert_eq!(
                *slice.coeff(1),
                crate::exactnum::binomial(2 * p as u64, p as u64)
            );
            assert!(slice.coeff(0).is_zero() && slice.coeff(2).is_zero());
        }
    }

    #[test]
    fn extract_beyond_truncation_errors() {
        let b = BivarSeries::<BigInt>::zero(3, 2);
        assert!(b.extract_u(3).is_err());
    }

    fn arb_bivar(n_z: usize, n_u: usize) -> impl Strategy<Value = BivarSeries<BigInt>> {
        prop::collection::vec(-9i64..9, (n_z + 1) * (n_u + 1)).prop_map(move |v| {
            let mut b = BivarSeries::zero(n_z, n_u);
            for i in 0..=n_z {
                for j in 0..=n_u {
                    b.set_coeff(i, j, BigInt::from(v[i * (n_u + 1) + j]));
                }
            }
            b
        })
    }

    proptest! {
        #[test]
        fn extract_commutes_with_add(a in arb_bivar(6, 3), b in arb_bivar(6, 3), p in 0usize..=3) {
            prop_assert_eq!(
                a.add(&b).extract_u(p).unwrap(),
                a.extract_u(p).unwrap().add(&b.extract_u(p).unwrap())
            );
        }

        #[test]
        fn extract_commutes_with_pure_z_mul(
            a in arb_bivar(6, 3),
            zc in prop::collection::vec(-9i64..9, 7),
            p in 0usize..=3,
        ) {
            let z = crate::exactnum::Series::from_coeffs(
                zc.into_iter().map(BigInt::from).collect::<Vec<_>>());
            let zb = BivarSeries::from_z_series(&z, 3);
            prop_assert_eq!(
                a.mul(&zb).extract_u(p).unwrap(),
                a.extract_u(p).unwrap().mul(&z)
            );
        }
    }
}

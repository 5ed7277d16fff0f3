//! Counting sequences for terms whose abstractions each bind exactly `p`
//! variables, together with the linearized variant and the expansion
//! operator that both are built from.
//!
//! The central recurrence is
//! `phi_n = sum_{l+m=n} phi_l phi_m + Q_p(n-1) phi_{n-1}`, `phi_1 = C_{p-1}`,
//! where `phi_j` is the count at size `(2p+1) j - 1`. Note the convolution
//! pairs indices summing to `n`, not `n - 1`: an application node adds one
//! node on top of both subterms, so subterm sizes `(2p+1)l - 1` and
//! `(2p+1)m - 1` combine to `(2p+1)(l+m) - 1`. The brute-force oracle is the
//! arbiter here (it confirms the count 5 at size 5 for p = 1, which the
//! shifted convolution would miss).

use super::{catalan, CountTable, Family, SequencesError};
use crate::exactnum::{
    binomial, expect_integer, gen_binomial, BigInt, BigRational, BivarSeries, Series,
};
use num_traits::{One, Zero};

/// Number of weighted ways `p` pointer hits distribute over `l` distinct
/// edges, each hit multiplicity `i` contributing `C(2i, i)` decorations.
///
/// Computed two ways and cross-checked: the multinomial sum over composition
/// profiles, and the coefficient `[u^p] (1/sqrt(1-4u) - 1)^l`.
pub fn alpha(l: u32, p: u32) -> Result<BigInt, SequencesError> {
    if l == 0 || l > p {
        // the coefficient is zero there; reaching it means an index bug
        return Err(SequencesError::Structural(format!(
            "alpha index l={l} outside 1..={p}"
        )));
    }
    let direct = alpha_multinomial(l, p);
    let via_series = alpha_series(l, p);
    if direct != via_series {
        return Err(SequencesError::RouteDisagreement {
            what: format!("alpha({l},{p})"),
            index: u64::from(p),
            left: direct,
            right: via_series,
        });
    }
    Ok(direct)
}

/// Sum over multiplicity profiles `s_1..s_p` with `sum s_i = l`,
/// `sum i s_i = p` of `multinomial(l; s) * prod C(2i,i)^{s_i}`.
fn alpha_multinomial(l: u32, p: u32) -> BigInt {
    let mut total = BigInt::zero();
    let l_fact = {
        let mut f = BigInt::one();
        for i in 2..=l {
            f *= BigInt::from(i);
        }
        f
    };
    // profile accumulator: walk multiplicities i = 1..=p
    fn rec(
        i: u32,
        rem_l: u32,
        rem_p: u32,
        p: u32,
        multinom_denom: &BigInt,
        weight: &BigInt,
        l_fact: &BigInt,
        total: &mut BigInt,
    ) {
        if rem_l == 0 && rem_p == 0 {
            *total += l_fact / multinom_denom * weight;
            return;
        }
        if i > p || rem_p < rem_l || rem_l == 0 {
            // each remaining edge needs at least one hit
            return;
        }
        let max_si = rem_l.min(rem_p / i);
        let central = binomial(2 * u64::from(i), u64::from(i));
        let mut denom = multinom_denom.clone();
        let mut w = weight.clone();
        for si in 0..=max_si {
            if si > 0 {
                denom *= BigInt::from(si);
                w *= &central;
            }
            rec(
                i + 1,
                rem_l - si,
                rem_p - i * si,
                p,
                &denom,
                &w,
                l_fact,
                total,
            );
        }
    }
    rec(
        1,
        l,
        p,
        p,
        &BigInt::one(),
        &BigInt::one(),
        &l_fact,
        &mut total,
    );
    total
}

/// `[u^p] (f(u) - 1)^l` where `f(u) = 1/sqrt(1-4u)` has the central binomial
/// coefficients.
fn alpha_series(l: u32, p: u32) -> BigInt {
    let trunc = p as usize;
    let mut f_minus_1 = Series::zero(trunc);
    for i in 1..=trunc {
        f_minus_1.set_coeff(i, binomial(2 * i as u64, i as u64));
    }
    let mut acc = Series::monomial(BigInt::one(), 0, trunc);
    for _ in 0..l {
        acc = acc.mul(&f_minus_1);
    }
    acc.coeff(trunc).clone()
}

/// The polynomial governing the unary-expansion term of the recurrence:
/// `Q_p(n) = sum_m alpha_{m,p} C(n(2p+1)-1, m)`, cross-checked against the
/// closed form `4^p C((p+1/2)n + p - 3/2, p)`.
pub fn q_poly(p: u32, n: u64) -> Result<BigInt, SequencesError> {
    assert!(p >= 1 && n >= 1);
    let alphas = alpha_row(p)?;
    let via_sum = q_from_alphas(p, n, &alphas);
    let via_closed_form = q_closed_form(p, n);
    let closed_int = if via_closed_form.denom().is_one() {
        via_closed_form.numer().clone()
    } else {
        return Err(SequencesError::Structural(format!(
            "closed form of Q_{p}({n}) is not an integer: {via_closed_form}"
        )));
    };
    if via_sum != closed_int {
        return Err(SequencesError::RouteDisagreement {
            what: format!("Q_{p}"),
            index: n,
            left: via_sum,
            right: closed_int,
        });
    }
    Ok(via_sum)
}

fn q_from_alphas(p: u32, n: u64, alphas: &[BigInt]) -> BigInt {
    let top = n * (2 * u64::from(p) + 1) - 1;
    let mut q = BigInt::zero();
    for m in 1..=p {
        q += &alphas[m as usize] * binomial(top, u64::from(m));
    }
    q
}

fn q_closed_form(p: u32, n: u64) -> BigRational {
    // 4^p * C((p + 1/2) n + p - 3/2, p)
    let top = BigRational::new(
        BigInt::from((2 * u64::from(p) + 1) * n + 2 * u64::from(p) - 3),
        BigInt::from(2),
    );
    let mut four_p = BigInt::one();
    for _ in 0..p {
        four_p *= BigInt::from(4);
    }
    gen_binomial(&top, u64::from(p)) * BigRational::from(four_p)
}

/// `alpha_{m,p}` for `m = 1..=p`, dual-route checked; index 0 unused.
fn alpha_row(p: u32) -> Result<Vec<BigInt>, SequencesError> {
    let mut row = vec![BigInt::zero(); p as usize + 1];
    for m in 1..=p {
        row[m as usize] = alpha(m, p)?;
    }
    Ok(row)
}

/// Exact table of `phi_j` values for one `p`, with the binary-convolution
/// sums kept alongside (the asymptotics module needs them).
pub struct PhiTable {
    p: u32,
    /// `phi[j]` is the count at size `(2p+1) j - 1`; index 0 unused.
    phi: Vec<BigInt>,
    /// `conv[j] = sum_{l+m=j} phi_l phi_m`; indices 0 and 1 unused.
    conv: Vec<BigInt>,
    /// `q[j] = Q_p(j)`; index 0 unused.
    q: Vec<BigInt>,
}

impl PhiTable {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn phi(&self, j: usize) -> &BigInt {
        &self.phi[j]
    }

    pub fn conv(&self, j: usize) -> &BigInt {
        &self.conv[j]
    }

    pub fn q(&self, j: usize) -> &BigInt {
        &self.q[j]
    }

    /// Size (term node count) corresponding to table index `j`.
    pub fn size_of_index(&self, j: u64) -> u64 {
        (2 * u64::from(self.p) + 1) * j - 1
    }
}

/// Computes `phi_1..phi_{j_max}` for the exactly-`p` family.
pub fn bci_phi(p: u32, j_max: u64) -> Result<PhiTable, SequencesError> {
    assert!(p >= 1 && j_max >= 1);
    let alphas = alpha_row(p)?;
    let j_max = j_max as usize;
    let mut phi = vec![BigInt::zero(); j_max + 1];
    let mut conv = vec![BigInt::zero(); j_max + 1];
    let mut q = vec![BigInt::zero(); j_max + 1];
    phi[1] = catalan(u64::from(p) - 1);
    for j in 1..=j_max {
        // dual-route check of Q on the fly; both routes are cheap
        let qs = q_from_alphas(p, j as u64, &alphas);
        let qc = q_closed_form(p, j as u64);
        let qc = expect_integer(&qc, "closed form of Q");
        if qs != qc {
            return Err(SequencesError::RouteDisagreement {
                what: format!("Q_{p}"),
                index: j as u64,
                left: qs,
                right: qc,
            });
        }
        q[j] = qs;
    }
    for n in 2..=j_max {
        let mut c = BigInt::zero();
        for l in 1..n {
            c += &phi[l] * &phi[n - l];
        }
        phi[n] = &c + &q[n - 1] * &phi[n - 1];
        conv[n] = c;
    }
    Ok(PhiTable { p, phi, conv, q })
}

/// Count table for the exactly-`p` family, keyed by term size.
pub fn bci_counts(p: u32, j_max: u64) -> Result<CountTable, SequencesError> {
    let t = bci_phi(p, j_max)?;
    let mut table = CountTable::new(Family::Bci(p), "phi-recurrence");
    for j in 1..=j_max {
        table.insert(t.size_of_index(j), t.phi(j as usize).clone());
    }
    Ok(table)
}

/// Count table for the linearized equation (quadratic term dropped):
/// the closed product `C_{p-1} prod_{j=1}^{n-1} Q_p(j)` along the support.
pub fn linearized_counts(p: u32, j_max: u64) -> Result<CountTable, SequencesError> {
    assert!(p >= 1 && j_max >= 1);
    let mut table = CountTable::new(Family::BciLinearized(p), "q-product");
    let mut value = catalan(u64::from(p) - 1);
    let step = 2 * u64::from(p) + 1;
    table.insert(2 * u64::from(p), value.clone());
    for j in 1..j_max {
        value *= q_poly(p, j)?;
        table.insert(step * (j + 1) - 1, value.clone());
    }
    Ok(table)
}

/// Applies the expansion operator for `p` pointers to a series: on
/// coefficients, `[z^n] out = sum_l alpha_{l,p} C(n-2p-1, l) a_{n-2p-1}`.
///
/// The same operator is also evaluated through its substitution form
/// `z^{2p+1} [u^p] a(z / sqrt(1-4u))` using bivariate arithmetic, and the two
/// results are compared.
pub fn delta_apply(p: u32, a: &Series<BigInt>) -> Result<Series<BigInt>, SequencesError> {
    assert!(p >= 1);
    let alphas = alpha_row(p)?;
    let shift = 2 * p as usize + 1;
    let out_trunc = a.trunc() + shift;

    // coefficient route
    let mut coeff_route = Series::zero(out_trunc);
    for n in shift..=out_trunc {
        let src = n - shift;
        if a.coeff(src).is_zero() {
            continue;
        }
        let mut factor = BigInt::zero();
        for l in 1..=p {
            factor += &alphas[l as usize] * binomial(src as u64, u64::from(l));
        }
        coeff_route.set_coeff(n, factor * a.coeff(src));
    }

    // substitution route: a(z / sqrt(1-4u)) has grid a_i * [u^j](1-4u)^{-i/2}
    let n_u = p as usize;
    let mut grid = BivarSeries::<BigRational>::zero(a.trunc(), n_u);
    for i in 0..=a.trunc() {
        if a.coeff(i).is_zero() {
            continue;
        }
        let ai = BigRational::from(a.coeff(i).clone());
        for j in 0..=n_u {
            grid.set_coeff(i, j, &ai * sqrt_kernel(i, j));
        }
    }
    let slice = grid.extract_u(n_u)?;
    let mut subst_route = Series::zero(out_trunc);
    for i in 0..=a.trunc() {
        subst_route.set_coeff(
            i + shift,
            expect_integer(slice.coeff(i), "substitution route of the expansion operator"),
        );
    }

    if coeff_route != subst_route {
        let n = (0..=out_trunc)
            .find(|&n| coeff_route.coeff(n) != subst_route.coeff(n))
            .unwrap();
        return Err(SequencesError::RouteDisagreement {
            what: format!("expansion operator (p={p})"),
            index: n as u64,
            left: coeff_route.coeff(n).clone(),
            right: subst_route.coeff(n).clone(),
        });
    }
    Ok(coeff_route)
}

/// `[u^j] (1-4u)^{-i/2} = 4^j C(i/2 + j - 1, j)`, exact over the rationals.
/// Produced termwise; all the roots needed here have closed-form coefficients.
fn sqrt_kernel(i: usize, j: usize) -> BigRational {
    let top = BigRational::new(BigInt::from(i as i64 + 2 * j as i64 - 2), BigInt::from(2));
    let mut four_j = BigInt::one();
    for _ in 0..j {
        four_j *= BigInt::from(4);
    }
    gen_binomial(&top, j as u64) * BigRational::from(four_j)
}

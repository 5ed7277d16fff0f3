//! Exact-uniform random generation and unranking of closed lambda-terms,
//! driven by the exact counting tables.
//!
//! All branch weights are exact big integers; uniform draws over a big-int
//! range use rejection from the smallest power-of-two cover, so no bias is
//! introduced anywhere. A fixed seed reproduces the byte-identical stream.

use crate::exactnum::BigInt;
use crate::oracle::{EnrichedTree, LambdaTermDB, Shape};
use crate::sequences::{alpha, catalan, PhiTable, SequencesError, TnkTable};
use num_bigint::Sign;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("no terms to sample: count at size {n} is zero")]
    ZeroCount { n: u64 },
    #[error("size {size} is off the support for p={p}")]
    OffSupport { size: u64, p: u32 },
    #[error("rank {rank} out of range [0, {total})")]
    RankOutOfRange { rank: BigInt, total: BigInt },
    #[error("count table too short: need index {need}")]
    TableTooShort { need: u64 },
    #[error(transparent)]
    Sequences(#[from] SequencesError),
}

/// Seeded sampling state. Identical seed and tables give identical output.
pub struct SamplerState {
    seed: u64,
    rng: ChaCha8Rng,
}

impl SamplerState {
    pub fn new(seed: u64) -> Self {
        SamplerState {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Unbiased uniform draw from `[0, bound)` by rejection from the
    /// smallest power-of-two cover.
    pub fn below(&mut self, bound: &BigInt) -> BigInt {
        assert!(bound > &BigInt::zero());
        let bits = bound.bits();
        let nbytes = bits.div_ceil(8) as usize;
        let top_mask: u8 = if bits.is_multiple_of(8) {
            0xff
        } else {
            (1u8 << (bits % 8)) - 1
        };
        let mut buf = vec![0u8; nbytes];
        loop {
            self.rng.fill_bytes(&mut buf);
            buf[0] &= top_mask;
            let candidate = BigInt::from_bytes_be(Sign::Plus, &buf);
            if &candidate < bound {
                return candidate;
            }
        }
    }

    fn coin(&mut self) -> bool {
        self.rng.next_u32() & 1 == 1
    }
}

/// Uniformly random closed term of size `n`; the level table must cover `n`.
pub fn sample_closed(
    n: u64,
    tnk: &TnkTable,
    state: &mut SamplerState,
) -> Result<LambdaTermDB, SamplerError> {
    if n > tnk.n_max() {
        return Err(SamplerError::TableTooShort { need: n });
    }
    let total = tnk.closed(n);
    if total.is_zero() {
        return Err(SamplerError::ZeroCount { n });
    }
    let rank = state.below(total);
    unrank_closed(n, &rank, tnk)
}

/// Deterministic bijection from `[0, count(n))` onto the closed terms of
/// size `n`. Branch order: variable indices ascending, then abstraction,
/// then application splits by increasing left size (left-major within a
/// split).
pub fn unrank_closed(n: u64, rank: &BigInt, tnk: &TnkTable) -> Result<LambdaTermDB, SamplerError> {
    if n > tnk.n_max() {
        return Err(SamplerError::TableTooShort { need: n });
    }
    let total = tnk.closed(n);
    if rank < &BigInt::zero() || rank >= total {
        return Err(SamplerError::RankOutOfRange {
            rank: rank.clone(),
            total: total.clone(),
        });
    }
    Ok(unrank_level(n, 0, rank.clone(), tnk))
}

fn unrank_level(m: u64, k: u64, mut rank: BigInt, tnk: &TnkTable) -> LambdaTermDB {
    if m == 1 {
        // a variable may point to any of the k enclosing abstractions
        use num_traits::ToPrimitive;
        return LambdaTermDB::Var(rank.to_u32().expect("level fits u32") + 1);
    }
    let abs_weight = tnk.get(m - 1, k + 1);
    if &rank < abs_weight {
        return LambdaTermDB::Abs(Box::new(unrank_level(m - 1, k + 1, rank, tnk)));
    }
    rank -= abs_weight;
    for i in 1..=m - 2 {
        let right_total = tnk.get(m - 1 - i, k);
        let w = tnk.get(i, k) * right_total;
        if rank < w {
            let (q, r) = rank.div_rem(right_total);
            return LambdaTermDB::App(
                Box::new(unrank_level(i, k, q, tnk)),
                Box::new(unrank_level(m - 1 - i, k, r, tnk)),
            );
        }
        rank -= w;
    }
    unreachable!("rank exhausted the level weights");
}

/// Rank of a closed term under the [`unrank_closed`] ordering.
pub fn rank_closed(term: &LambdaTermDB, tnk: &TnkTable) -> Result<BigInt, SamplerError> {
    let n = term.size();
    if n > tnk.n_max() {
        return Err(SamplerError::TableTooShort { need: n });
    }
    fn rec(t: &LambdaTermDB, k: u64, tnk: &TnkTable) -> BigInt {
        match t {
            LambdaTermDB::Var(i) => BigInt::from(i - 1),
            LambdaTermDB::Abs(body) => rec(body, k + 1, tnk),
            LambdaTermDB::App(l, r) => {
                let m = t.size();
                let mut rank = tnk.get(m - 1, k + 1).clone();
                let li = l.size();
                for i in 1..li {
                    rank += tnk.get(i, k) * tnk.get(m - 1 - i, k);
                }
                rank + rec(l, k, tnk) * tnk.get(m - 1 - li, k) + rec(r, k, tnk)
            }
        }
    }
    Ok(rec(term, 0, tnk))
}

/// Binary tree counted by leaves (a tree with `v` leaves has `2v-1` nodes).
#[derive(Debug, Clone)]
enum BinTree {
    Leaf,
    Node(Box<BinTree>, Box<BinTree>),
}

/// Unranks the binary trees with `leaves` leaves (there are `C_{leaves-1}`).
fn unrank_binary(leaves: u64, mut rank: BigInt) -> BinTree {
    if leaves == 1 {
        return BinTree::Leaf;
    }
    for a in 1..=leaves - 1 {
        let right = catalan(leaves - a - 1);
        let w = catalan(a - 1) * &right;
        if rank < w {
            let (q, r) = rank.div_rem(&right);
            return BinTree::Node(
                Box::new(unrank_binary(a, q)),
                Box::new(unrank_binary(leaves - a, r)),
            );
        }
        rank -= w;
    }
    unreachable!("rank exhausted the Catalan weights");
}

/// Working representation during construction: abstractions carry stable
/// ids so pointers survive restructuring.
enum BNode {
    Leaf { binder: u32 },
    Unary { id: u32, child: Box<BNode> },
    Binary(Box<BNode>, Box<BNode>),
}

impl BNode {
    fn node_count(&self) -> u64 {
        match self {
            BNode::Leaf { .. } => 1,
            BNode::Unary { child, .. } => 1 + child.node_count(),
            BNode::Binary(l, r) => 1 + l.node_count() + r.node_count(),
        }
    }
}

/// Uniformly random term of the exactly-`p` family at a supported size.
///
/// Follows the constructive decomposition behind the counting recurrence:
/// a term is minimal, an application of two smaller terms, or a one-step
/// expansion of a smaller term (new binding root, `p` pointer hits
/// distributed over distinct edges, hit edges replaced by decorated paths).
pub fn sample_bci(
    p: u32,
    size: u64,
    phi: &PhiTable,
    state: &mut SamplerState,
) -> Result<EnrichedTree, SamplerError> {
    assert_eq!(phi.p(), p);
    let step = 2 * u64::from(p) + 1;
    if !(size + 1).is_multiple_of(step) || size == 0 {
        return Err(SamplerError::OffSupport { size, p });
    }
    let j = (size + 1) / step;
    if phi.len() < j as usize {
        return Err(SamplerError::TableTooShort { need: j });
    }
    let gen = BciGen::new(p, phi)?;
    let mut next_id = 0u32;
    let node = gen.gen(j as usize, state, &mut next_id);
    debug_assert_eq!(node.node_count(), size);
    Ok(canonicalize(&node))
}

struct BciGen<'a> {
    p: u32,
    phi: &'a PhiTable,
    /// `alpha_tab[l][q]`: weighted ways to spread `q` hits over `l` distinct
    /// edges; row 0 is the empty base case.
    alpha_tab: Vec<Vec<BigInt>>,
    catalans: Vec<BigInt>,
}

impl<'a> BciGen<'a> {
    fn new(p: u32, phi: &'a PhiTable) -> Result<Self, SamplerError> {
        let pu = p as usize;
        let mut alpha_tab = vec![vec![BigInt::zero(); pu + 1]; pu + 1];
        alpha_tab[0][0] = BigInt::one();
        for l in 1..=pu {
            for q in l..=pu {
                alpha_tab[l][q] = alpha(l as u32, q as u32)?;
            }
        }
        let catalans = (0..=u64::from(p)).map(catalan).collect();
        Ok(BciGen {
            p,
            phi,
            alpha_tab,
            catalans,
        })
    }

    fn gen(&self, j: usize, state: &mut SamplerState, next_id: &mut u32) -> BNode {
        if j == 1 {
            return self.minimal(state, next_id);
        }
        let mut draw = state.below(self.phi.phi(j));
        // application of two smaller terms, by increasing left index
        for l in 1..j {
            let w = self.phi.phi(l) * self.phi.phi(j - l);
            if draw < w {
                let left = self.gen(l, state, next_id);
                let right = self.gen(j - l, state, next_id);
                return BNode::Binary(Box::new(left), Box::new(right));
            }
            draw -= w;
        }
        // otherwise: expansion of a term one index down
        debug_assert!(draw < self.phi.q(j - 1) * self.phi.phi(j - 1));
        let base = self.gen(j - 1, state, next_id);
        self.expand(base, state, next_id)
    }

    /// Minimal term: a root abstraction over a binary tree with `p` leaves,
    /// all bound to the root.
    fn minimal(&self, state: &mut SamplerState, next_id: &mut u32) -> BNode {
        let id = *next_id;
        *next_id += 1;
        let rank = state.below(&self.catalans[self.p as usize - 1]);
        let tree = unrank_binary(u64::from(self.p), rank);
        BNode::Unary {
            id,
            child: Box::new(bintree_to_bnode(&tree, id)),
        }
    }

    /// One expansion step: pick how many distinct edges are hit and how the
    /// `p` hits spread over them, replace each hit edge by a path carrying
    /// left-or-right binary trees, and bind all new leaves to a new root.
    fn expand(&self, base: BNode, state: &mut SamplerState, next_id: &mut u32) -> BNode {
        let p = self.p as usize;
        let s = base.node_count(); // edges of the expanded term, root edge included

        // number of distinct hit edges: weight alpha_{l,p} C(s, l)
        let mut total = BigInt::zero();
        for l in 1..=p {
            total += &self.alpha_tab[l][p] * crate::exactnum::binomial(s, l as u64);
        }
        let mut draw = state.below(&total);
        let mut edges_hit = 0usize;
        for l in 1..=p {
            let w = &self.alpha_tab[l][p] * crate::exactnum::binomial(s, l as u64);
            if draw < w {
                edges_hit = l;
                break;
            }
            draw -= w;
        }
        debug_assert!(edges_hit >= 1);

        // the hit edges: a uniform subset, each edge named by the preorder
        // index of the node below it
        let edges = sample_subset(s, edges_hit, state);

        // hit multiplicities: sequential choice against the remaining-ways
        // table, each edge getting at least one hit
        let mut mults = Vec::with_capacity(edges_hit);
        let mut rest = p;
        for e in 0..edges_hit {
            let remaining = edges_hit - e - 1;
            let max_i = rest - remaining;
            let mut total = BigInt::zero();
            for i in 1..=max_i {
                total += crate::exactnum::binomial(2 * i as u64, i as u64)
                    * &self.alpha_tab[remaining][rest - i];
            }
            let mut draw = state.below(&total);
            let mut chosen = 0usize;
            for i in 1..=max_i {
                let w = crate::exactnum::binomial(2 * i as u64, i as u64)
                    * &self.alpha_tab[remaining][rest - i];
                if draw < w {
                    chosen = i;
                    break;
                }
                draw -= w;
            }
            debug_assert!(chosen >= 1);
            mults.push(chosen);
            rest -= chosen;
        }
        debug_assert_eq!(rest, 0);

        // decorate: per hit edge, a sequence of left-or-right binary trees
        // with that many leaves in total
        let root_id = *next_id;
        *next_id += 1;
        let mut hit_map: HashMap<u64, Vec<(bool, BinTree)>> = HashMap::new();
        for (edge, &mult) in edges.iter().zip(&mults) {
            hit_map.insert(*edge, self.sample_sequence(mult, state));
        }
        let mut preorder = 0u64;
        let wrapped = rebuild(base, &mut preorder, &hit_map, root_id);
        BNode::Unary {
            id: root_id,
            child: Box::new(wrapped),
        }
    }

    /// A sequence of (side, binary tree) pairs with `total` leaves overall;
    /// there are `C(2 total, total)` of them.
    fn sample_sequence(&self, total: usize, state: &mut SamplerState) -> Vec<(bool, BinTree)> {
        let mut out = Vec::new();
        let mut rest = total as u64;
        while rest > 0 {
            // first tree has v leaves with weight 2 C_{v-1} C(2(rest-v), rest-v)
            let mut total_w = BigInt::zero();
            for v in 1..=rest {
                total_w += BigInt::from(2)
                    * catalan(v - 1)
                    * crate::exactnum::binomial(2 * (rest - v), rest - v);
            }
            let mut draw = state.below(&total_w);
            let mut leaves = 0u64;
            for v in 1..=rest {
                let w = BigInt::from(2)
                    * catalan(v - 1)
                    * crate::exactnum::binomial(2 * (rest - v), rest - v);
                if draw < w {
                    leaves = v;
                    break;
                }
                draw -= w;
            }
            debug_assert!(leaves >= 1);
            let side = state.coin();
            let rank = state.below(&catalan(leaves - 1));
            out.push((side, unrank_binary(leaves, rank)));
            rest -= leaves;
        }
        out
    }
}

/// Uniform `k`-subset of `{0, .., s-1}`, ascending.
fn sample_subset(s: u64, k: usize, state: &mut SamplerState) -> Vec<u64> {
    use num_traits::ToPrimitive;
    let bound = BigInt::from(s);
    let mut picked = Vec::with_capacity(k);
    while picked.len() < k {
        let c = state.below(&bound).to_u64().unwrap();
        if !picked.contains(&c) {
            picked.push(c);
        }
    }
    picked.sort_unstable();
    picked
}

/// Replaces every hit edge (named by the preorder index of the node below
/// it) by its decoration path; new leaves point to `root_id`.
fn rebuild(
    node: BNode,
    preorder: &mut u64,
    hits: &HashMap<u64, Vec<(bool, BinTree)>>,
    root_id: u32,
) -> BNode {
    let my_index = *preorder;
    *preorder += 1;
    let rebuilt = match node {
        BNode::Leaf { binder } => BNode::Leaf { binder },
        BNode::Unary { id, child } => BNode::Unary {
            id,
            child: Box::new(rebuild(*child, preorder, hits, root_id)),
        },
        BNode::Binary(l, r) => {
            let l = rebuild(*l, preorder, hits, root_id);
            let r = rebuild(*r, preorder, hits, root_id);
            BNode::Binary(Box::new(l), Box::new(r))
        }
    };
    match hits.get(&my_index) {
        None => rebuilt,
        Some(seq) => {
            // path nodes top-to-bottom; each carries its tree left or right
            let mut cur = rebuilt;
            for (side, tree) in seq.iter().rev() {
                let attached = bintree_to_bnode(tree, root_id);
                cur = if *side {
                    BNode::Binary(Box::new(attached), Box::new(cur))
                } else {
                    BNode::Binary(Box::new(cur), Box::new(attached))
                };
            }
            cur
        }
    }
}

fn bintree_to_bnode(t: &BinTree, binder: u32) -> BNode {
    match t {
        BinTree::Leaf => BNode::Leaf { binder },
        BinTree::Node(l, r) => BNode::Binary(
            Box::new(bintree_to_bnode(l, binder)),
            Box::new(bintree_to_bnode(r, binder)),
        ),
    }
}

/// Renumbers abstraction ids into preorder and produces the canonical
/// enriched-tree form.
fn canonicalize(node: &BNode) -> EnrichedTree {
    fn number(node: &BNode, next: &mut u32, map: &mut HashMap<u32, u32>) {
        match node {
            BNode::Leaf { .. } => {}
            BNode::Unary { id, child } => {
                map.insert(*id, *next);
                *next += 1;
                number(child, next, map);
            }
            BNode::Binary(l, r) => {
                number(l, next, map);
                number(r, next, map);
            }
        }
    }
    fn build(node: &BNode, map: &HashMap<u32, u32>, binders: &mut Vec<u32>) -> Rc<Shape> {
        match node {
            BNode::Leaf { binder } => {
                binders.push(map[binder]);
                Rc::new(Shape::Leaf)
            }
            BNode::Unary { child, .. } => {
                let inner = build(child, map, binders);
                Rc::new(Shape::Unary(inner))
            }
            BNode::Binary(l, r) => {
                let ls = build(l, map, binders);
                let rs = build(r, map, binders);
                Rc::new(Shape::Binary(ls, rs))
            }
        }
    }
    let mut map = HashMap::new();
    number(node, &mut 0, &mut map);
    let mut binders = Vec::new();
    let shape = build(node, &map, &mut binders);
    EnrichedTree { shape, binders }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{to_debruijn, Constraint};
    use crate::sequences::bci_phi;

    fn tnk(n: u64) -> TnkTable {
        TnkTable::new(n)
    }

    #[test]
    fn unique_term_at_size_two() {
        let t = tnk(4);
        let mut state = SamplerState::new(1);
        for _ in 0..10 {
            let term = sample_closed(2, &t, &mut state).unwrap();
            assert_eq!(term, LambdaTermDB::Abs(Box::new(LambdaTermDB::Var(1))));
        }
    }

    #[test]
    fn unrank_size_three_terms_distinct() {
        let t = tnk(4);
        let a = unrank_closed(3, &BigInt::from(0), &t).unwrap();
        let b = unrank_closed(3, &BigInt::from(1), &t).unwrap();
        assert_ne!(a, b);
        assert!(unrank_closed(3, &BigInt::from(2), &t).is_err());
    }

    #[test]
    fn unrank_covers_size_five() {
        use std::collections::HashSet;
        let t = tnk(6);
        let mut seen = HashSet::new();
        for r in 0..13u32 {
            let term = unrank_closed(5, &BigInt::from(r), &t).unwrap();
            assert_eq!(term.size(), 5);
            assert!(term.is_closed());
            seen.insert(format!("{term}"));
        }
        assert_eq!(seen.len(), 13);
    }

    #[test]
    fn rank_round_trip_small() {
        let t = tnk(8);
        for n in 2..=8u64 {
            let count = t.closed(n).clone();
            let mut r = BigInt::zero();
            while r < count {
                let term = unrank_closed(n, &r, &t).unwrap();
                assert_eq!(rank_closed(&term, &t).unwrap(), r);
                r += 1;
            }
        }
    }

    #[test]
    fn rank_round_trip_random_ranks() {
        let t = tnk(12);
        let mut state = SamplerState::new(12_000);
        for n in 10..=12u64 {
            let count = t.closed(n);
            for _ in 0..60 {
                let r = state.below(count);
                let term = unrank_closed(n, &r, &t).unwrap();
                assert_eq!(term.size(), n);
                assert!(term.is_closed());
                assert_eq!(rank_closed(&term, &t).unwrap(), r, "at n={n}");
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let t = tnk(9);
        let stream = |seed: u64| -> Vec<String> {
            let mut state = SamplerState::new(seed);
            (0..40)
                .map(|_| format!("{}", sample_closed(9, &t, &mut state).unwrap()))
                .collect()
        };
        assert_eq!(stream(7), stream(7));
        assert_ne!(stream(7), stream(8));
    }

    #[test]
    fn closed_samples_validate() {
        let t = tnk(10);
        let mut state = SamplerState::new(42);
        for _ in 0..200 {
            let term = sample_closed(10, &t, &mut state).unwrap();
            assert_eq!(term.size(), 10);
            assert!(term.is_closed());
        }
    }

    #[test]
    fn bci_minimal_term() {
        let phi = bci_phi(1, 3).unwrap();
        let mut state = SamplerState::new(3);
        let t = sample_bci(1, 2, &phi, &mut state).unwrap();
        assert_eq!(t.size(), 2);
        assert_eq!(
            to_debruijn(&t),
            LambdaTermDB::Abs(Box::new(LambdaTermDB::Var(1)))
        );
    }

    #[test]
    fn bci_samples_validate() {
        for (p, size) in [(1u32, 8u64), (2, 9), (2, 14), (3, 13)] {
            let j = (size + 1) / (2 * u64::from(p) + 1);
            let phi = bci_phi(p, j).unwrap();
            let mut state = SamplerState::new(11 + u64::from(p));
            for _ in 0..100 {
                let t = sample_bci(p, size, &phi, &mut state).unwrap();
                assert_eq!(t.size(), size, "p={p} size={size}");
                assert!(t.satisfies(Constraint::ExactlyP(p)), "p={p} size={size}");
            }
        }
    }

    #[test]
    fn bci_off_support_rejected() {
        let phi = bci_phi(1, 3).unwrap();
        let mut state = SamplerState::new(0);
        assert!(matches!(
            sample_bci(1, 4, &phi, &mut state),
            Err(SamplerError::OffSupport { .. })
        ));
    }

    #[test]
    fn below_is_in_range_and_hits_all_residues() {
        let mut state = SamplerState::new(5);
        let bound = BigInt::from(3);
        let mut seen = [false; 3];
        for _ in 0..200 {
            use num_traits::ToPrimitive;
            let v = state.below(&bound).to_u64().unwrap();
            assert!(v < 3);
            seen[v as usize] = true;
        }
        assert!(seen.iter().all(|&b| b));
    }
}

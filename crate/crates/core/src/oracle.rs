//! Brute-force enumeration of enriched trees at small sizes: the ground
//! truth that every counting recurrence in this crate is validated against.
//!
//! An enriched tree is a Motzkin tree together with one pointer per leaf to
//! a unary node on its root path. Leaves are variables, unary nodes are
//! abstractions, binary nodes are applications, and pointers are the binding
//! relation; identity is structural (shape plus pointer map), which is
//! exactly identification up to renaming.

use crate::exactnum::BigInt;
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("size {n} exceeds the enumeration cap {cap}")]
    SizeExceedsCap { n: u64, cap: u64 },
    #[error("open term: variable index {index} at abstraction depth {depth}")]
    OpenTerm { index: u32, depth: u32 },
}

/// Motzkin tree shape: the underlying unary-binary tree.
#[derive(Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Unary(Rc<Shape>),
    Binary(Rc<Shape>, Rc<Shape>),
}

impl Shape {
    pub fn size(&self) -> u64 {
        match self {
            Shape::Leaf => 1,
            Shape::Unary(t) => 1 + t.size(),
            Shape::Binary(l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// A closed lambda-term as an enriched tree: shape plus one binder pointer
/// per leaf. Unary nodes and leaves are both numbered in preorder;
/// `binders[i]` is the unary number binding the `i`-th leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichedTree {
    pub shape: Rc<Shape>,
    pub binders: Vec<u32>,
}

/// Constraint on how many leaves each unary node may bind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Any pointer structure (every leaf bound somewhere on its root path).
    Closed,
    /// Every unary node binds exactly `p` leaves.
    ExactlyP(u32),
    /// Every unary node binds at most `p` leaves (possibly zero).
    AtMostP(u32),
}

impl EnrichedTree {
    pub fn size(&self) -> u64 {
        self.shape.size()
    }

    /// Checks the pointer structure against a constraint from scratch.
    pub fn satisfies(&self, c: Constraint) -> bool {
        let profile = ShapeProfile::new(&self.shape);
        if self.binders.len() != profile.leaf_ancestors.len() {
            return false;
        }
        let mut counts = vec![0u32; profile.n_unary as usize];
        for (leaf, &b) in self.binders.iter().enumerate() {
            if !profile.leaf_ancestors[leaf].contains(&b) {
                return false;
            }
            counts[b as usize] += 1;
        }
        match c {
            Constraint::Closed => true,
            Constraint::ExactlyP(p) => counts.iter().all(|&c| c == p),
            Constraint::AtMostP(p) => counts.iter().all(|&c| c <= p),
        }
    }

    pub fn n_unary(&self) -> u64 {
        ShapeProfile::new(&self.shape).n_unary as u64
    }

    pub fn n_leaves(&self) -> u64 {
        self.binders.len() as u64
    }
}

/// Exhaustive enumerator with a size cap guarding against combinatorial
/// explosion. The cap is configuration, not a constant.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub max_size: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { max_size: 16 }
    }
}

impl Oracle {
    pub fn with_cap(max_size: u64) -> Self {
        Oracle { max_size }
    }

    /// Visits every enriched tree of size `n` satisfying `c` exactly once,
    /// in a fixed order: shapes in recursive generation order (leaf, unary,
    /// then binary splits by left size), binder maps lexicographically by
    /// leaf preorder position and ancestor depth.
    pub fn for_each_term(
        &self,
        n: u64,
        c: Constraint,
        mut f: impl FnMut(&EnrichedTree),
    ) -> Result<(), OracleError> {
        self.check_cap(n)?;
        let shapes = motzkin_shapes(n);
        for shape in shapes.iter() {
            enumerate_assignments(shape, c, &mut f);
        }
        Ok(())
    }

    /// Collects the full stream of [`Self::for_each_term`].
    pub fn enumerate_terms(&self, n: u64, c: Constraint) -> Result<Vec<EnrichedTree>, OracleError> {
        let mut out = Vec::new();
        self.for_each_term(n, c, |t| out.push(t.clone()))?;
        Ok(out)
    }

    /// Cardinality of the enumeration stream. Shapes are counted in
    /// parallel; the total does not depend on the schedule.
    pub fn count_terms(&self, n: u64, c: Constraint) -> Result<BigInt, OracleError> {
        self.check_cap(n)?;
        let shapes = motzkin_shapes(n);
        let profiles: Vec<ShapeProfile> =
            shapes.iter().map(|s| ShapeProfile::new(s)).collect();
        let total: u64 = profiles
            .par_iter()
            .map(|p| {
                let mut count = 0u64;
                assignments_dfs(p, c, 0, &mut vec![0; p.n_unary as usize], &mut |_| {
                    count += 1
                });
                count
            })
            .sum();
        Ok(BigInt::from(total))
    }

    fn check_cap(&self, n: u64) -> Result<(), OracleError> {
        if n == 0 || n > self.max_size {
            return Err(OracleError::SizeExceedsCap {
                n,
                cap: self.max_size,
            });
        }
        Ok(())
    }
}

/// All Motzkin tree shapes of size `n`, with subtrees shared.
fn motzkin_shapes(n: u64) -> Vec<Rc<Shape>> {
    fn build(n: u64, memo: &mut HashMap<u64, Vec<Rc<Shape>>>) -> Vec<Rc<Shape>> {
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 1 {
            out.push(Rc::new(Shape::Leaf));
        } else if n >= 2 {
            for t in build(n - 1, memo) {
                out.push(Rc::new(Shape::Unary(t)));
            }
            for i in 1..=n - 2 {
                let lefts = build(i, memo);
                let rights = build(n - 1 - i, memo);
                for l in &lefts {
                    for r in &rights {
                        out.push(Rc::new(Shape::Binary(l.clone(), r.clone())));
                    }
                }
            }
        }
        memo.insert(n, out.clone());
        out
    }
    build(n, &mut HashMap::new())
}

/// Preprocessed view of a shape for binder enumeration. Holds no tree
/// references, so per-shape counting can run in parallel.
struct ShapeProfile {
    n_unary: u32,
    /// per leaf (preorder): unary ancestors in root-to-leaf order
    leaf_ancestors: Vec<Vec<u32>>,
    /// per leaf: unary nodes whose subtree ends right after this leaf
    closing_after: Vec<Vec<u32>>,
}

impl ShapeProfile {
    fn new(shape: &Shape) -> Self {
        let mut profile = ShapeProfile {
            n_unary: 0,
            leaf_ancestors: Vec::new(),
            closing_after: Vec::new(),
        };
        let mut stack = Vec::new();
        walk(shape, &mut profile, &mut stack);
        fn walk(s: &Shape, p: &mut ShapeProfile, stack: &mut Vec<u32>) {
            match s {
                Shape::Leaf => {
                    p.leaf_ancestors.push(stack.clone());
                    p.closing_after.push(Vec::new());
                }
                Shape::Unary(t) => {
                    let id = p.n_unary;
                    p.n_unary += 1;
                    stack.push(id);
                    walk(t, p, stack);
                    stack.pop();
                    // the unary's subtree ends with its last descendant leaf
                    p.closing_after.last_mut().unwrap().push(id);
                }
                Shape::Binary(l, r) => {
                    walk(l, p, stack);
                    walk(r, p, stack);
                }
            }
        }
        profile
    }
}

/// Depth-first enumeration of binder maps for one shape under a constraint.
fn assignments_dfs(
    profile: &ShapeProfile,
    c: Constraint,
    leaf: usize,
    counts: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    // threaded binder accumulator lives in `emit`'s closure state when
    // full trees are needed; counting callers ignore the slice
    fn rec(
        profile: &ShapeProfile,
        c: Constraint,
        leaf: usize,
        counts: &mut Vec<u32>,
        binders: &mut Vec<u32>,
        emit: &mut impl FnMut(&[u32]),
    ) {
        if leaf == profile.leaf_ancestors.len() {
            emit(binders);
            return;
        }
        for &u in &profile.leaf_ancestors[leaf] {
            let ok = match c {
                Constraint::Closed => true,
                Constraint::ExactlyP(p) | Constraint::AtMostP(p) => counts[u as usize] < p,
            };
            if !ok {
                continue;
            }
            counts[u as usize] += 1;
            binders.push(u);
            // exact constraint: a unary whose subtree just closed can no
            // longer gain pointers
            let closed_ok = match c {
                Constraint::ExactlyP(p) => profile.closing_after[leaf]
                    .iter()
                    .all(|&cu| counts[cu as usize] == p),
                _ => true,
            };
            if closed_ok {
                rec(profile, c, leaf + 1, counts, binders, emit);
            }
            binders.pop();
            counts[u as usize] -= 1;
        }
    }
    if let Constraint::ExactlyP(p) = c {
        // every unary must end with exactly p pointers, so the totals must
        // line up before any search is worthwhile
        if profile.leaf_ancestors.len() as u64 != u64::from(p) * u64::from(profile.n_unary) {
            return;
        }
    }
    if profile.n_unary == 0 && !profile.leaf_ancestors.is_empty() {
        return; // leaves with no unary ancestor cannot be bound
    }
    let mut binders = Vec::with_capacity(profile.leaf_ancestors.len());
    rec(profile, c, leaf, counts, &mut binders, emit);
}

fn enumerate_assignments(shape: &Rc<Shape>, c: Constraint, f: &mut impl FnMut(&EnrichedTree)) {
    let profile = ShapeProfile::new(shape);
    let mut counts = vec![0u32; profile.n_unary as usize];
    assignments_dfs(&profile, c, 0, &mut counts, &mut |binders| {
        let t = EnrichedTree {
            shape: shape.clone(),
            binders: binders.to_vec(),
        };
        f(&t);
    });
}

/// A lambda-term over de Bruijn indices: `Var(k)` refers to the `k`-th
/// enclosing abstraction (`k >= 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LambdaTermDB {
    Var(u32),
    Abs(Box<LambdaTermDB>),
    App(Box<LambdaTermDB>, Box<LambdaTermDB>),
}

impl LambdaTermDB {
    pub fn size(&self) -> u64 {
        match self {
            LambdaTermDB::Var(_) => 1,
            LambdaTermDB::Abs(t) => 1 + t.size(),
            LambdaTermDB::App(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn is_closed(&self) -> bool {
        fn check(t: &LambdaTermDB, depth: u32) -> bool {
            match t {
                LambdaTermDB::Var(k) => *k >= 1 && *k <= depth,
                LambdaTermDB::Abs(b) => check(b, depth + 1),
                LambdaTermDB::App(l, r) => check(l, depth) && check(r, depth),
            }
        }
        check(self, 0)
    }
}

impl fmt::Display for LambdaTermDB {
    /// Compact s-expression form: `(\ body)` for abstraction, `(l r)` for
    /// application, the index for a variable.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaTermDB::Var(k) => write!(f, "{k}"),
            LambdaTermDB::Abs(t) => write!(f, "(\\ {t})"),
            LambdaTermDB::App(l, r) => write!(f, "({l} {r})"),
        }
    }
}

/// Enriched tree to de Bruijn term; sizes match node for node.
pub fn to_debruijn(t: &EnrichedTree) -> LambdaTermDB {
    fn walk(
        s: &Shape,
        binders: &[u32],
        leaf_idx: &mut usize,
        unary_idx: &mut u32,
        stack: &mut Vec<u32>,
    ) -> LambdaTermDB {
        match s {
            Shape::Leaf => {
                let b = binders[*leaf_idx];
                *leaf_idx += 1;
                let pos = stack
                    .iter()
                    .rposition(|&u| u == b)
                    .expect("binder must be an ancestor");
                LambdaTermDB::Var((stack.len() - pos) as u32)
            }
            Shape::Unary(inner) => {
                let id = *unary_idx;
                *unary_idx += 1;
                stack.push(id);
                let body = walk(inner, binders, leaf_idx, unary_idx, stack);
                stack.pop();
                LambdaTermDB::Abs(Box::new(body))
            }
            Shape::Binary(l, r) => {
                let lt = walk(l, binders, leaf_idx, unary_idx, stack);
                let rt = walk(r, binders, leaf_idx, unary_idx, stack);
                LambdaTermDB::App(Box::new(lt), Box::new(rt))
            }
        }
    }
    walk(&t.shape, &t.binders, &mut 0, &mut 0, &mut Vec::new())
}

/// De Bruijn term to enriched tree; fails on open terms.
pub fn from_debruijn(t: &LambdaTermDB) -> Result<EnrichedTree, OracleError> {
    fn walk(
        t: &LambdaTermDB,
        stack: &mut Vec<u32>,
        next_unary: &mut u32,
        binders: &mut Vec<u32>,
    ) -> Result<Rc<Shape>, OracleError> {
        match t {
            LambdaTermDB::Var(k) => {
                if *k == 0 || *k as usize > stack.len() {
                    return Err(OracleError::OpenTerm {
                        index: *k,
                        depth: stack.len() as u32,
                    });
                }
                binders.push(stack[stack.len() - *k as usize]);
                Ok(Rc::new(Shape::Leaf))
            }
            LambdaTermDB::Abs(b) => {
                let id = *next_unary;
                *next_unary += 1;
                stack.push(id);
                let inner = walk(b, stack, next_unary, binders)?;
                stack.pop();
                Ok(Rc::new(Shape::Unary(inner)))
            }
            LambdaTermDB::App(l, r) => {
                let ls = walk(l, stack, next_unary, binders)?;
                let rs = walk(r, stack, next_unary, binders)?;
                Ok(Rc::new(Shape::Binary(ls, rs)))
            }
        }
    }
    let mut binders = Vec::new();
    let shape = walk(t, &mut Vec::new(), &mut 0, &mut binders)?;
    Ok(EnrichedTree { shape, binders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::catalan;

    fn count(n: u64, c: Constraint) -> u64 {
        use num_traits::ToPrimitive;
        Oracle::default()
            .count_terms(n, c)
            .unwrap()
            .to_u64()
            .unwrap()
    }

    #[test]
    fn unique_smallest_closed_term() {
        let terms = Oracle::default()
            .enumerate_terms(2, Constraint::Closed)
            .unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(to_debruijn(&terms[0]), LambdaTermDB::Abs(Box::new(LambdaTermDB::Var(1))));
    }

    #[test]
    fn small_closed_counts() {
        assert_eq!(count(3, Constraint::Closed), 2);
        assert_eq!(count(4, Constraint::Closed), 4);
        assert_eq!(count(5, Constraint::Closed), 13);
    }

    #[test]
    fn small_constrained_counts() {
        assert_eq!(count(5, Constraint::ExactlyP(1)), 5);
        assert_eq!(count(4, Constraint::AtMostP(1)), 3);
    }

    #[test]
    fn exact_counts_vanish_off_support() {
        for n in [3u64, 4, 6, 7] {
            assert_eq!(count(n, Constraint::ExactlyP(1)), 0, "n={n}");
        }
    }

    #[test]
    fn smallest_exact_terms_are_catalan() {
        use num_traits::ToPrimitive;
        for p in 1..=5u32 {
            let c = Oracle::default()
                .count_terms(2 * u64::from(p), Constraint::ExactlyP(p))
                .unwrap();
            assert_eq!(c, catalan(u64::from(p) - 1), "p={p}");
            let _ = c.to_u64();
        }
    }

    #[test]
    fn node_counts_on_exact_terms() {
        // j abstractions force p*j leaves and p*j - 1 applications
        let p = 2u32;
        Oracle::default()
            .for_each_term(9, Constraint::ExactlyP(p), |t| {
                let j = t.n_unary();
                assert_eq!(t.n_leaves(), u64::from(p) * j);
                assert_eq!(t.size(), (2 * u64::from(p) + 1) * j - 1);
            })
            .unwrap();
    }

    #[test]
    fn streams_refine() {
        // exactly-p terms form a subset of at-most-p terms, which form a
        // subset of closed terms
        let oracle = Oracle::default();
        let closed = oracle.enumerate_terms(8, Constraint::Closed).unwrap();
        let bck = oracle.enumerate_terms(8, Constraint::AtMostP(1)).unwrap();
        let bci = oracle.enumerate_terms(8, Constraint::ExactlyP(1)).unwrap();
        for t in &bci {
            assert!(bck.contains(t));
        }
        for t in &bck {
            assert!(closed.contains(t));
        }
    }

    #[test]
    fn figure_example_round_trip() {
        // (\x. x x) (\y. y) as an enriched tree: binary root, two unary
        // children, the left one binding both leaves of its application
        let shape = Rc::new(Shape::Binary(
            Rc::new(Shape::Unary(Rc::new(Shape::Binary(
                Rc::new(Shape::Leaf),
                Rc::new(Shape::Leaf),
            )))),
            Rc::new(Shape::Unary(Rc::new(Shape::Leaf))),
        ));
        let t = EnrichedTree {
            shape,
            binders: vec![0, 0, 1],
        };
        let db = to_debruijn(&t);
        assert_eq!(
            db,
            LambdaTermDB::App(
                Box::new(LambdaTermDB::Abs(Box::new(LambdaTermDB::App(
                    Box::new(LambdaTermDB::Var(1)),
                    Box::new(LambdaTermDB::Var(1)),
                )))),
                Box::new(LambdaTermDB::Abs(Box::new(LambdaTermDB::Var(1)))),
            )
        );
        assert_eq!(from_debruijn(&db).unwrap(), t);
    }

    #[test]
    fn round_trip_all_small_closed_terms() {
        let oracle = Oracle::default();
        for n in 1..=8u64 {
            oracle
                .for_each_term(n, Constraint::Closed, |t| {
                    let db = to_debruijn(t);
                    assert_eq!(db.size(), t.size());
                    assert!(db.is_closed());
                    assert_eq!(&from_debruijn(&db).unwrap(), t);
                })
                .unwrap();
        }
    }

    #[test]
    fn open_terms_rejected() {
        let open = LambdaTermDB::Abs(Box::new(LambdaTermDB::Var(2)));
        assert!(matches!(
            from_debruijn(&open),
            Err(OracleError::OpenTerm { index: 2, depth: 1 })
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let oracle = Oracle::with_cap(6);
        assert!(matches!(
            oracle.count_terms(7, Constraint::Closed),
            Err(OracleError::SizeExceedsCap { n: 7, cap: 6 })
        ));
    }
}

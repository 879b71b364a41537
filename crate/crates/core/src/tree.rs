//! Planar rooted trees in balanced-bracket encoding.
//!
//! A vertex is written `[` followed by the encodings of its children from
//! left to right and a closing `]`. The single vertex is `[]`, the two-vertex
//! chain is `[[]]`, the planar corolla with two leaves is `[[][]]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::Rational;

/// Default cap on the degree accepted by [`enumerate_trees`].
pub const DEFAULT_TREE_CAP: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree parse error at byte {position}: {reason}")]
    Parse {
        position: usize,
        reason: &'static str,
    },
    #[error("tree degree {degree} exceeds the configured cap {cap}")]
    SizeCap { degree: usize, cap: usize },
    #[error("tree degree must be positive")]
    ZeroDegree,
}

/// A planar rooted tree, stored by its canonical bracket encoding.
///
/// Trees are totally ordered by degree and then lexicographically on the
/// encoding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlanarTree(Arc<str>);

impl PlanarTree {
    /// The single vertex `[]`.
    pub fn vertex() -> Self {
        PlanarTree(Arc::from("[]"))
    }

    /// Linear chain with `n` vertices.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1);
        let s = "[".repeat(n) + &"]".repeat(n);
        PlanarTree(Arc::from(s))
    }

    /// Root with `n` leaf children.
    pub fn corolla(n: usize) -> Self {
        let s = format!("[{}]", "[]".repeat(n));
        PlanarTree(Arc::from(s))
    }

    /// Root whose children are `children`, left to right.
    pub fn from_children(children: &[PlanarTree]) -> Self {
        let mut s = String::with_capacity(2 + children.iter().map(|c| c.0.len()).sum::<usize>());
        s.push('[');
        for c in children {
            s.push_str(&c.0);
        }
        s.push(']');
        PlanarTree(Arc::from(s))
    }

    pub fn parse(s: &str) -> Result<Self, TreeError> {
        validate(s)?;
        Ok(PlanarTree(Arc::from(s)))
    }

    pub fn encoding(&self) -> &str {
        &self.0
    }

    /// Vertex count.
    pub fn degree(&self) -> usize {
        self.0.len() / 2
    }

    /// Children of the root, left to right.
    pub fn children(&self) -> Vec<PlanarTree> {
        let bytes = self.0.as_bytes();
        let mut out = Vec::new();
        let mut depth = 0usize;
        let mut start = 1;
        for (i, &b) in bytes.iter().enumerate().take(bytes.len() - 1).skip(1) {
            if b == b'[' {
                if depth == 0 {
                    start = i;
                }
                depth += 1;
            } else {
                depth -= 1;
                if depth == 0 {
                    out.push(PlanarTree(Arc::from(&self.0[start..=i])));
                }
            }
        }
        out
    }
}

fn validate(s: &str) -> Result<(), TreeError> {
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(TreeError::Parse {
            position: 0,
            reason: "empty tree",
        });
    }
    let mut depth = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'[' => {
                if depth == 0 && i != 0 {
                    return Err(TreeError::Parse {
                        position: i,
                        reason: "more than one root",
                    });
                }
                depth += 1;
            }
            b']' => {
                if depth == 0 {
                    return Err(TreeError::Parse {
                        position: i,
                        reason: "unbalanced ']'",
                    });
                }
                depth -= 1;
            }
            _ => {
                return Err(TreeError::Parse {
                    position: i,
                    reason: "unexpected character",
                })
            }
        }
    }
    if depth != 0 {
        return Err(TreeError::Parse {
            position: bytes.len(),
            reason: "unclosed '['",
        });
    }
    Ok(())
}

impl Ord for PlanarTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PlanarTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.0)
    }
}

impl FromStr for PlanarTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlanarTree::parse(s)
    }
}

/// Finite rational combination of trees with no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeSum {
    terms: BTreeMap<PlanarTree, Rational>,
}

impl TreeSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(t: PlanarTree) -> Self {
        let mut s = Self::new();
        s.add(t, Rational::one());
        s
    }

    pub fn add(&mut self, t: PlanarTree, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(t);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TreeSum, scale: &Rational) {
        for (t, c) in &other.terms {
            self.add(t.clone(), c * scale);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PlanarTree, &Rational)> {
        self.terms.iter()
    }

    pub fn get(&self, t: &PlanarTree) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn total_weight(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, c| a + c)
    }
}

/// Sum over the vertices `v` of `target` of the tree obtained by attaching
/// `graft` as the leftmost child of `v`.
///
/// In the bracket encoding this is an insertion of `graft` directly after
/// each opening bracket of `target`.
pub fn left_graft_sum(graft: &PlanarTree, target: &PlanarTree) -> TreeSum {
    let mut out = TreeSum::new();
    for (i, _) in target.0.match_indices('[') {
        let mut s = String::with_capacity(graft.0.len() + target.0.len());
        s.push_str(&target.0[..=i]);
        s.push_str(&graft.0);
        s.push_str(&target.0[i + 1..]);
        out.add(PlanarTree(Arc::from(s)), Rational::one());
    }
    out
}

/// Canonical non-planar representative: children are abelianized recursively
/// and then sorted by the tree order.
pub fn abelianize(t: &PlanarTree) -> PlanarTree {
    if t.degree() == 1 {
        return t.clone();
    }
    let mut children: Vec<PlanarTree> = t.children().iter().map(abelianize).collect();
    children.sort();
    PlanarTree::from_children(&children)
}

/// All planar rooted trees with `degree` vertices, in canonical order.
pub fn enumerate_trees(degree: usize) -> Result<Vec<PlanarTree>, TreeError> {
    enumerate_trees_with_cap(degree, DEFAULT_TREE_CAP)
}

pub fn enumerate_trees_with_cap(degree: usize, cap: usize) -> Result<Vec<PlanarTree>, TreeError> {
    if degree == 0 {
        return Err(TreeError::ZeroDegree);
    }
    if degree > cap {
        return Err(TreeError::SizeCap { degree, cap });
    }
    let mut out = Vec::new();
    for forest in forests(degree - 1) {
        out.push(PlanarTree::from_children(&forest));
    }
    out.sort();
    Ok(out)
}

// Ordered forests with `n` vertices in total.
fn forests(n: usize) -> Vec<Vec<PlanarTree>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        let heads: Vec<PlanarTree> = forests(first - 1)
            .into_iter()
            .map(|f| PlanarTree::from_children(&f))
            .collect();
        let tails = forests(n - first);
        for h in &heads {
            for tail in &tails {
                let mut f = Vec::with_capacity(tail.len() + 1);
                f.push(h.clone());
                f.extend(tail.iter().cloned());
                out.push(f);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> PlanarTree {
        PlanarTree::parse(s).unwrap()
    }

    fn sum(pairs: &[(&str, i64)]) -> TreeSum {
        let mut s = TreeSum::new();
        for (e, c) in pairs {
            s.add(t(e), Rational::from_integer((*c).into()));
        }
        s
    }

    // Independent Catalan oracle: C_{n+1} = sum C_i C_{n-i}.
    fn catalan(n: usize) -> u64 {
        let mut c = vec![1u64];
        for m in 1..=n {
            c.push((0..m).map(|i| c[i] * c[m - 1 - i]).sum());
        }
        c[n]
    }

    #[test]
    fn graft_examples() {
        assert_eq!(left_graft_sum(&t("[]"), &t("[]")), sum(&[("[[]]", 1)]));
        assert_eq!(
            left_graft_sum(&t("[]"), &t("[[]]")),
            sum(&[("[[][]]", 1), ("[[[]]]", 1)])
        );
        assert_eq!(
            left_graft_sum(&t("[]"), &t("[[][]]")),
            sum(&[("[[][][]]", 1), ("[[[]][]]", 1), ("[[][[]]]", 1)])
        );
        assert_eq!(left_graft_sum(&t("[[]]"), &t("[[][]]")).len(), 3);
    }

    #[test]
    fn parse_errors_report_position() {
        assert!(matches!(
            PlanarTree::parse("[[]"),
            Err(TreeError::Parse { position: 3, .. })
        ));
        assert!(matches!(
            PlanarTree::parse("[]]"),
            Err(TreeError::Parse { position: 2, .. })
        ));
        assert!(matches!(
            PlanarTree::parse("[][]"),
            Err(TreeError::Parse { position: 2, .. })
        ));
        assert!(matches!(
            PlanarTree::parse("[x]"),
            Err(TreeError::Parse { position: 1, .. })
        ));
        assert!(PlanarTree::parse("").is_err());
    }

    #[test]
    fn degree_and_children() {
        let x = t("[[[]][]]");
        assert_eq!(x.degree(), 4);
        assert_eq!(x.children(), vec![t("[[]]"), t("[]")]);
        assert!(t("[]").children().is_empty());
        assert_eq!(PlanarTree::chain(3), t("[[[]]]"));
        assert_eq!(PlanarTree::corolla(2), t("[[][]]"));
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(abelianize(&t("[[][]]")), t("[[][]]"));
        assert_eq!(abelianize(&t("[[[]][]]")), abelianize(&t("[[][[]]]")));
        assert_eq!(abelianize(&t("[[[]][]]")), t("[[][[]]]"));
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_trees(1).unwrap(), vec![t("[]")]);
        assert_eq!(enumerate_trees(3).unwrap(), vec![t("[[[]]]"), t("[[][]]")]);
        assert_eq!(enumerate_trees(5).unwrap().len(), 14);
        assert!(matches!(
            enumerate_trees(10),
            Err(TreeError::SizeCap { .. })
        ));
        assert!(enumerate_trees(0).is_err());
    }

    #[test]
    fn enumeration_matches_catalan() {
        for n in 1..=8 {
            let trees = enumerate_trees(n).unwrap();
            assert_eq!(trees.len() as u64, catalan(n - 1), "degree {n}");
            assert!(trees.windows(2).all(|w| w[0] < w[1]));
            assert!(trees.iter().all(|x| x.degree() == n));
        }
    }

    fn arb_tree(max_depth: u32) -> impl Strategy<Value = PlanarTree> {
        let leaf = Just(PlanarTree::vertex());
        leaf.prop_recursive(max_depth, 12, 3, |inner| {
            prop::collection::vec(inner, 0..3).prop_map(|c| PlanarTree::from_children(&c))
        })
    }

    proptest! {
        #[test]
        fn grafting_degree_and_count(a in arb_tree(3), b in arb_tree(3)) {
            let s = left_graft_sum(&a, &b);
            for (x, _) in s.iter() {
                prop_assert_eq!(x.degree(), a.degree() + b.degree());
            }
            prop_assert_eq!(s.total_weight(), Rational::from_integer(b.degree().into()));
        }

        #[test]
        fn abelianize_is_idempotent_and_sibling_invariant(a in arb_tree(4), seed in any::<u64>()) {
            let once = abelianize(&a);
            prop_assert_eq!(abelianize(&once), once.clone());
            prop_assert_eq!(once.degree(), a.degree());
            let shuffled = shuffle_siblings(&a, seed);
            prop_assert_eq!(abelianize(&shuffled), once);
        }

        #[test]
        fn encoding_round_trips(a in arb_tree(4)) {
            prop_assert_eq!(PlanarTree::parse(&a.to_string()).unwrap(), a);
        }
    }

    fn shuffle_siblings(t: &PlanarTree, seed: u64) -> PlanarTree {
        let mut children: Vec<PlanarTree> = t
            .children()
            .iter()
            .enumerate()
            .map(|(i, c)| shuffle_siblings(c, seed.wrapping_mul(31).wrapping_add(i as u64)))
            .collect();
        if children.len() > 1 {
            let k = (seed as usize) % children.len();
            children.rotate_left(k);
            if seed & 1 == 1 {
                children.reverse();
            }
        }
        PlanarTree::from_children(&children)
    }
}

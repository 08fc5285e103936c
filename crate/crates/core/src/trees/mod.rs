//! Rooted trees and the functionals attached to them.
//!
//! A tree is stored canonically: its children are sorted in descending order
//! under the total order "compare by order, then child lists lexicographically".
//! Structurally equal trees are therefore equal as values.
//!
//! Trees are written as nested parentheses: `()` is the single vertex,
//! `(())` the path of two vertices, `(()())` the bushy tree of order 3.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::tableau::ButcherTableau;

/// Largest order accepted by [`enumerate_trees`].
pub const MAX_ENUMERATION_ORDER: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("max_order must be between 1 and {MAX_ENUMERATION_ORDER}, got {0}")]
    OrderOutOfRange(usize),
    #[error("invalid tree literal at byte {position}: {reason}")]
    Parse { position: usize, reason: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedTree {
    children: Vec<RootedTree>,
    order: usize,
}

impl Ord for RootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.children.cmp(&other.children))
    }
}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl RootedTree {
    /// The single vertex •.
    pub fn leaf() -> Self {
        RootedTree {
            children: Vec::new(),
            order: 1,
        }
    }

    /// [t₁ … tₙ]: a new root joined to the roots of the given trees.
    pub fn graft(mut children: Vec<RootedTree>) -> Self {
        children.sort_by(|a, b| b.cmp(a));
        let order = 1 + children.iter().map(|c| c.order).sum::<usize>();
        RootedTree { children, order }
    }

    /// Path with `n` vertices.
    pub fn tall(n: usize) -> Self {
        assert!(n >= 1, "a tree has at least one vertex");
        (1..n).fold(RootedTree::leaf(), |t, _| RootedTree::graft(vec![t]))
    }

    /// Root with `n − 1` leaf children.
    pub fn bushy(n: usize) -> Self {
        assert!(n >= 1, "a tree has at least one vertex");
        RootedTree::graft(vec![RootedTree::leaf(); n - 1])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// t! = |t| · Π tₘ!.
    pub fn factorial(&self) -> BigUint {
        self.children
            .iter()
            .fold(BigUint::from(self.order), |acc, c| acc * c.factorial())
    }

    /// σ(t): order of the symmetry group.
    pub fn symmetry(&self) -> BigUint {
        let mut out = BigUint::one();
        let mut i = 0;
        while i < self.children.len() {
            let child = &self.children[i];
            let run = self.children[i..].iter().take_while(|c| *c == child).count();
            let sigma = child.symmetry();
            for k in 1..=run {
                out *= BigUint::from(k) * &sigma;
            }
            i += run;
        }
        out
    }

    /// α(t): number of monotonic labelings, |t|!/(t!·σ(t)).
    pub fn monotonic_labelings(&self) -> BigUint {
        factorial(self.order) / (self.factorial() * self.symmetry())
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// All trees of order 1..=`max_order`, grouped by order, each group ascending
/// in the canonical order.
pub fn enumerate_trees(max_order: usize) -> Result<Vec<Vec<RootedTree>>, TreeError> {
    if !(1..=MAX_ENUMERATION_ORDER).contains(&max_order) {
        return Err(TreeError::OrderOutOfRange(max_order));
    }
    let mut groups: Vec<Vec<RootedTree>> = Vec::with_capacity(max_order);
    let mut all: Vec<RootedTree> = Vec::new();
    for n in 1..=max_order {
        let mut group = Vec::new();
        let mut picked = Vec::new();
        child_multisets(&all, n - 1, 0, &mut picked, &mut group);
        group.sort();
        all.extend(group.iter().cloned());
        groups.push(group);
    }
    Ok(groups)
}

/// Collects every multiset of trees from `pool[from..]` whose orders add up to
/// `remaining`, grafting each onto a new root.
fn child_multisets(
    pool: &[RootedTree],
    remaining: usize,
    from: usize,
    picked: &mut Vec<RootedTree>,
    out: &mut Vec<RootedTree>,
) {
    if remaining == 0 {
        out.push(RootedTree::graft(picked.clone()));
        return;
    }
    for (k, tree) in pool.iter().enumerate().skip(from) {
        if tree.order <= remaining {
            picked.push(tree.clone());
            child_multisets(pool, remaining - tree.order, k, picked, out);
            picked.pop();
        }
    }
}

/// Φ(t): Φ(•) = 1, Φ([t₁ … tₙ]) = Π A·Φ(tₘ) componentwise.
pub fn derivative_weights(t: &RootedTree, tab: &ButcherTableau) -> Vec<f64> {
    let mut phi = vec![1.0; tab.stages()];
    for child in &t.children {
        let a_phi = tab.a_mul(&derivative_weights(child, tab));
        for (x, y) in phi.iter_mut().zip(a_phi) {
            *x *= y;
        }
    }
    phi
}

/// b·Φ(t); the order condition for `t` reads b·Φ(t) = 1/t!.
pub fn elementary_weight(t: &RootedTree, tab: &ButcherTableau) -> f64 {
    tab.b_dot(&derivative_weights(t, tab))
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for RootedTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.trim().as_bytes();
        let (tree, end) = parse_node(bytes, 0)?;
        if end != bytes.len() {
            return Err(TreeError::Parse {
                position: end,
                reason: "trailing characters",
            });
        }
        Ok(tree)
    }
}

fn parse_node(bytes: &[u8], pos: usize) -> Result<(RootedTree, usize), TreeError> {
    if bytes.get(pos) != Some(&b'(') {
        return Err(TreeError::Parse {
            position: pos,
            reason: "expected `(`",
        });
    }
    let mut children = Vec::new();
    let mut pos = pos + 1;
    loop {
        match bytes.get(pos) {
            Some(b')') => return Ok((RootedTree::graft(children), pos + 1)),
            Some(b'(') => {
                let (child, next) = parse_node(bytes, pos)?;
                children.push(child);
                pos = next;
            }
            Some(_) => {
                return Err(TreeError::Parse {
                    position: pos,
                    reason: "unexpected character",
                })
            }
            None => {
                return Err(TreeError::Parse {
                    position: pos,
                    reason: "unbalanced parentheses",
                })
            }
        }
    }
}

/// Compact label for reports, e.g. `[[•]•]`.
pub fn bracket_label(t: &RootedTree) -> String {
    if t.is_leaf() {
        return "•".into();
    }
    let mut s = String::from("[");
    for c in &t.children {
        s.push_str(&bracket_label(c));
    }
    s.push(']');
    s
}

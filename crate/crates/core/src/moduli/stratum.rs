//! Marking sets, decorated genus-0 strata and formal sums of them.
//!
//! A stable tree with leaves `P` is stored as its set of splits. Each edge
//! cuts `P` in two; we keep the side that avoids the smallest label of `P`
//! (the *root*). Two splits can coexist in one tree iff they are nested or
//! disjoint, and a compatible family of splits determines the tree. Sorting
//! the splits gives a canonical form for free.
//!
//! A flag (half-edge) at a node is named by the set of markings on its far
//! side: the leaf flag of `i` is `{i}`, and the two germs of the edge with
//! split `A` are `A` and `P \ A`. These names are globally unique and survive
//! refinement of the tree, which keeps the psi bookkeeping trivial.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Labels are `0..64`.
pub const MAX_MARKINGS: u32 = 64;

/// A set of marking labels, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", try_from = "Vec<u32>")]
pub struct MarkingSet(u64);

impl MarkingSet {
    pub fn from_labels(labels: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut bits = 0u64;
        for l in labels {
            if l >= MAX_MARKINGS {
                return Err(Error::InvalidMarking(format!(
                    "label {l} out of range (labels are 0..{MAX_MARKINGS})"
                )));
            }
            bits |= 1 << l;
        }
        Ok(MarkingSet(bits))
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: u32) -> Result<Self> {
        Self::from_labels(0..n)
    }

    pub const fn from_bits(bits: u64) -> Self {
        MarkingSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: u32) -> bool {
        label < MAX_MARKINGS && self.0 >> label & 1 == 1
    }

    pub fn is_subset(self, other: MarkingSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn labels(self) -> impl Iterator<Item = u32> {
        let bits = self.0;
        (0..MAX_MARKINGS).filter(move |&l| bits >> l & 1 == 1)
    }
}

impl From<MarkingSet> for Vec<u32> {
    fn from(s: MarkingSet) -> Self {
        s.labels().collect()
    }
}

impl TryFrom<Vec<u32>> for MarkingSet {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        MarkingSet::from_labels(v)
    }
}

impl fmt::Display for MarkingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

pub(crate) fn low_bit(p: u64) -> u64 {
    p & p.wrapping_neg()
}

/// The side of the split `{side, p \ side}` that avoids the root of `p`.
pub(crate) fn normalize(p: u64, side: u64) -> u64 {
    if side & low_bit(p) != 0 {
        p & !side
    } else {
        side
    }
}

pub(crate) fn compatible(a: u64, b: u64) -> bool {
    let c = a & b;
    c == 0 || c == a || c == b
}

/// Nonempty subsets of `mask`, smallest first.
pub(crate) fn nonempty_subsets(mask: u64) -> impl Iterator<Item = u64> {
    let mut sub = 0u64;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        sub = sub.wrapping_sub(mask) & mask;
        if sub == mask {
            done = true;
        }
        Some(sub)
    })
}

/// All subsets of `mask`, the empty set first.
pub(crate) fn subsets(mask: u64) -> impl Iterator<Item = u64> {
    std::iter::once(0).chain(nonempty_subsets(mask))
}

/// A boundary stratum of the genus-0 moduli space, possibly decorated with
/// powers of psi classes at its flags.
///
/// The marking set is not stored; every stratum lives inside a
/// [`ClassExpression`] that knows it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stratum {
    splits: Vec<u64>,
    psi: Vec<(u64, u32)>,
}

impl Stratum {
    /// The whole space.
    pub fn unit() -> Self {
        Stratum {
            splits: Vec::new(),
            psi: Vec::new(),
        }
    }

    /// The stratum whose tree has exactly the given splits. Each split may
    /// be given by either side.
    pub fn from_splits(p: MarkingSet, sides: impl IntoIterator<Item = MarkingSet>) -> Result<Self> {
        let mut s = Stratum::unit();
        for side in sides {
            let a = check_split(p, side)?;
            if !s.splits.iter().all(|&b| compatible(a, b)) {
                return Err(Error::InvalidMarking(format!("split {side} crosses another split")));
            }
            if !s.splits.contains(&a) {
                s.splits.push(a);
            }
        }
        s.splits.sort_unstable();
        Ok(s)
    }

    /// The boundary divisor `D_I`.
    pub fn divisor(p: MarkingSet, side: MarkingSet) -> Result<Self> {
        Self::from_splits(p, [side])
    }

    /// Adds `exponent` to the psi power at the flag whose far side is `far`.
    pub fn with_psi(mut self, far: MarkingSet, exponent: u32) -> Self {
        self.bump_psi(far.bits(), exponent);
        self
    }

    /// Splits, each as the side avoiding the smallest marking.
    pub fn splits(&self) -> impl Iterator<Item = MarkingSet> + '_ {
        self.splits.iter().map(|&a| MarkingSet(a))
    }

    pub fn edge_count(&self) -> usize {
        self.splits.len()
    }

    /// `(flag, exponent)` pairs, flags named by their far side.
    pub fn psi_exponents(&self) -> impl Iterator<Item = (MarkingSet, u32)> + '_ {
        self.psi.iter().map(|&(f, e)| (MarkingSet(f), e))
    }

    pub fn psi_degree(&self) -> u32 {
        self.psi.iter().map(|&(_, e)| e).sum()
    }

    pub fn has_psi(&self) -> bool {
        !self.psi.is_empty()
    }

    /// Codimension in the moduli space.
    pub fn codimension(&self) -> usize {
        self.splits.len() + self.psi_degree() as usize
    }

    /// The nodes of the underlying tree.
    pub fn nodes(&self, p: MarkingSet) -> Vec<TreeNode> {
        tree_nodes(p.bits(), &self.splits)
            .into_iter()
            .map(|n| TreeNode {
                markings: MarkingSet(n.flags.iter().filter(|f| f.count_ones() == 1).fold(0, |a, f| a | f)),
                flags: n.flags.iter().map(|&f| MarkingSet(f)).collect(),
            })
            .collect()
    }

    pub(crate) fn from_raw_split(a: u64) -> Self {
        Stratum {
            splits: vec![a],
            psi: Vec::new(),
        }
    }

    pub(crate) fn raw_splits(&self) -> &[u64] {
        &self.splits
    }

    pub(crate) fn raw_psi(&self) -> &[(u64, u32)] {
        &self.psi
    }

    pub(crate) fn has_split(&self, a: u64) -> bool {
        self.splits.binary_search(&a).is_ok()
    }

    /// Adds a split known to be compatible and new.
    pub(crate) fn insert_split(&mut self, a: u64) {
        if let Err(pos) = self.splits.binary_search(&a) {
            self.splits.insert(pos, a);
        }
    }

    pub(crate) fn bump_psi(&mut self, flag: u64, by: u32) {
        if by == 0 {
            return;
        }
        match self.psi.binary_search_by_key(&flag, |&(f, _)| f) {
            Ok(i) => self.psi[i].1 += by,
            Err(i) => self.psi.insert(i, (flag, by)),
        }
    }

    pub(crate) fn lower_psi(&mut self, flag: u64) {
        let i = self
            .psi
            .binary_search_by_key(&flag, |&(f, _)| f)
            .expect("flag carries a psi power");
        if self.psi[i].1 == 1 {
            self.psi.remove(i);
        } else {
            self.psi[i].1 -= 1;
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.splits.is_empty() && self.psi.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = self.splits.iter().map(|&a| format!("D{}", MarkingSet(a))).collect();
        for &(flag, e) in &self.psi {
            match e {
                1 => parts.push(format!("psi{}", MarkingSet(flag))),
                _ => parts.push(format!("psi{}^{e}", MarkingSet(flag))),
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

fn check_split(p: MarkingSet, side: MarkingSet) -> Result<u64> {
    if !side.is_subset(p) {
        return Err(Error::InvalidMarking(format!("{side} is not a subset of {p}")));
    }
    let (a, b) = (side.len(), p.len() - side.len());
    if a < 2 || b < 2 {
        return Err(Error::InvalidMarking(format!(
            "split {side} of {p} leaves fewer than two markings on a side"
        )));
    }
    Ok(normalize(p.bits(), side.bits()))
}

/// One vertex of a stratum's tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// Markings attached directly to this node.
    pub markings: MarkingSet,
    /// Every flag at the node, named by its far side.
    pub flags: Vec<MarkingSet>,
}

impl TreeNode {
    pub fn valence(&self) -> usize {
        self.flags.len()
    }
}

/// Internal node view: sorted flags and, per flag, the node across it.
#[derive(Debug, Clone)]
pub(crate) struct RawNode {
    pub flags: Vec<u64>,
    pub across: Vec<Option<usize>>,
}

/// Node 0 is the one holding the root; node `t + 1` hangs below split `t`.
pub(crate) fn tree_nodes(p: u64, splits: &[u64]) -> Vec<RawNode> {
    let root = low_bit(p);
    let content = |idx: usize| if idx == 0 { p & !root } else { splits[idx - 1] };
    let parent: Vec<usize> = (0..splits.len())
        .map(|t| {
            let a = splits[t];
            (0..splits.len())
                .filter(|&s| s != t && splits[s] & a == a)
                .min_by_key(|&s| splits[s].count_ones())
                .map_or(0, |s| s + 1)
        })
        .collect();
    let mut nodes: Vec<RawNode> = (0..=splits.len())
        .map(|idx| {
            let up = if idx == 0 { root } else { p & !splits[idx - 1] };
            RawNode {
                flags: vec![up],
                across: vec![if idx == 0 { None } else { Some(parent[idx - 1]) }],
            }
        })
        .collect();
    let mut covered = vec![0u64; splits.len() + 1];
    for (t, &par) in parent.iter().enumerate() {
        nodes[par].flags.push(splits[t]);
        nodes[par].across.push(Some(t + 1));
        covered[par] |= splits[t];
    }
    for (idx, node) in nodes.iter_mut().enumerate() {
        let mut loose = content(idx) & !covered[idx];
        while loose != 0 {
            let b = low_bit(loose);
            node.flags.push(b);
            node.across.push(None);
            loose &= !b;
        }
        let mut pairs: Vec<(u64, Option<usize>)> =
            node.flags.iter().copied().zip(node.across.iter().copied()).collect();
        pairs.sort_unstable_by_key(|&(f, _)| f);
        node.flags = pairs.iter().map(|&(f, _)| f).collect();
        node.across = pairs.iter().map(|&(_, a)| a).collect();
    }
    nodes
}

/// Index of the node carrying the flag named `flag`.
pub(crate) fn node_of_flag(nodes: &[RawNode], flag: u64) -> usize {
    nodes
        .iter()
        .position(|n| n.flags.binary_search(&flag).is_ok())
        .expect("flag belongs to the tree")
}

/// An integer combination of strata on the moduli space with markings `P`.
///
/// Strata are kept in canonical form and zero coefficients are dropped, so
/// two expressions are equal iff they compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassExpression {
    markings: MarkingSet,
    terms: BTreeMap<Stratum, BigInt>,
}

impl ClassExpression {
    pub fn zero(p: MarkingSet) -> Self {
        ClassExpression {
            markings: p,
            terms: BTreeMap::new(),
        }
    }

    /// The fundamental class.
    pub fn unit(p: MarkingSet) -> Self {
        Self::from_stratum(p, Stratum::unit())
    }

    pub fn from_stratum(p: MarkingSet, s: Stratum) -> Self {
        let mut x = Self::zero(p);
        x.add_term(s, BigInt::one());
        x
    }

    pub fn markings(&self) -> MarkingSet {
        self.markings
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Stratum, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &Stratum) -> BigInt {
        self.terms.get(s).cloned().unwrap_or_default()
    }

    pub fn has_psi(&self) -> bool {
        self.terms.keys().any(Stratum::has_psi)
    }

    pub fn add_term(&mut self, s: Stratum, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(s);
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

    pub fn add_expression(&mut self, other: &ClassExpression) {
        for (s, c) in &other.terms {
            self.add_term(s.clone(), c.clone());
        }
    }

    pub(crate) fn from_map(p: MarkingSet, map: impl IntoIterator<Item = (Stratum, BigInt)>) -> Self {
        let mut x = Self::zero(p);
        for (s, c) in map {
            x.add_term(s, c);
        }
        x
    }

    pub(crate) fn into_terms(self) -> BTreeMap<Stratum, BigInt> {
        self.terms
    }
}

impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            let neg = c < &BigInt::zero();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.magnitude();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

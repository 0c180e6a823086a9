//! The rewriting rules: psi classes as boundary sums, pullbacks along
//! forgetful maps, products with boundary divisors, and integration.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::stratum::{
    compatible, node_of_flag, nonempty_subsets, normalize, subsets, tree_nodes, ClassExpression, MarkingSet, RawNode,
    Stratum,
};
use crate::error::{Error, Result};

/// Default cap on the number of terms an expression may hold.
pub const DEFAULT_TERM_CAP: usize = 10_000_000;

/// How to pick the two anchor flags `j, k` when a psi class is written as a
/// sum of boundary divisors. Every choice gives the same class; the terms
/// differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AnchorRule {
    /// The two smallest candidates (by bitmask value).
    #[default]
    Smallest,
    /// A pseudo-random pair, a fixed function of the seed and the candidates.
    Scrambled(u64),
}

impl AnchorRule {
    /// `candidates` is sorted and has at least two entries.
    pub(crate) fn pick(self, candidates: &[u64]) -> (u64, u64) {
        match self {
            AnchorRule::Smallest => (candidates[0], candidates[1]),
            AnchorRule::Scrambled(seed) => {
                let mut h = seed;
                for &c in candidates {
                    h = mix(h ^ c);
                }
                let n = candidates.len() as u64;
                let a = (h % n) as usize;
                let b = (a + 1 + (mix(h) % (n - 1)) as usize) % candidates.len();
                (candidates[a], candidates[b])
            }
        }
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn label_bit(p: MarkingSet, label: u32, what: &str) -> Result<u64> {
    if p.contains(label) {
        Ok(1 << label)
    } else {
        Err(Error::InvalidMarking(format!("{what} {label} is not in {p}")))
    }
}

/// Splits `{i} + T` with `T` a nonempty subset of `p - {i, j, k}`.
pub(crate) fn psi_sides(p: u64, i: u64, j: u64, k: u64) -> Vec<u64> {
    nonempty_subsets(p & !(i | j | k))
        .map(|t| normalize(p, i | t))
        .collect()
}

/// `psi_i` on the space marked by `p`, as the sum of the divisors `D_I` with
/// `i` in `I` and `j, k` outside it. Zero when `|p| = 3`.
pub fn psi_as_boundary(p: MarkingSet, i: u32, j: u32, k: u32) -> Result<ClassExpression> {
    let (bi, bj, bk) = (
        label_bit(p, i, "marking")?,
        label_bit(p, j, "anchor")?,
        label_bit(p, k, "anchor")?,
    );
    if i == j || i == k || j == k {
        return Err(Error::InvalidMarking(format!("{i}, {j}, {k} are not distinct")));
    }
    let terms = psi_sides(p.bits(), bi, bj, bk)
        .into_iter()
        .map(|a| (Stratum::from_raw_split(a), BigInt::one()));
    Ok(ClassExpression::from_map(p, terms))
}

/// Sides `J` of the divisors in the pullback of `D_side` from `p_prime` to
/// `p`: all `J` with `J` meeting `p_prime` exactly in `side`.
pub(crate) fn pullback_sides(p: u64, p_prime: u64, side: u64) -> impl Iterator<Item = u64> {
    subsets(p & !p_prime).map(move |t| normalize(p, side | t))
}

/// Pullback of the divisor `D_I` along the map forgetting `P - P'`.
pub fn pullback_divisor(side: MarkingSet, p_prime: MarkingSet, p: MarkingSet) -> Result<ClassExpression> {
    if !p_prime.is_subset(p) {
        return Err(Error::InvalidMarking(format!("{p_prime} is not a subset of {p}")));
    }
    if !side.is_subset(p_prime) || side.len() < 2 || side.len() + 2 > p_prime.len() {
        return Err(Error::InvalidMarking(format!(
            "{side} does not define a divisor on the space marked by {p_prime}"
        )));
    }
    let terms =
        pullback_sides(p.bits(), p_prime.bits(), side.bits()).map(|a| (Stratum::from_raw_split(a), BigInt::one()));
    Ok(ClassExpression::from_map(p, terms))
}

/// Sides of the divisors making up `pi_{P'}^* psi_i` on the space marked by
/// `p`, with anchors `j, k`.
pub(crate) fn pulled_psi_sides(p: u64, p_prime: u64, i: u64, j: u64, k: u64) -> Vec<u64> {
    if p_prime.count_ones() == 3 {
        return Vec::new();
    }
    psi_sides(p_prime, i, j, k)
        .into_iter()
        .flat_map(|a| pullback_sides(p, p_prime, a))
        .collect()
}

/// `pi_{P'}^* psi_i` on the space marked by `p`, as a sum of divisors,
/// using `j, k` as anchors on the smaller space.
pub fn pullback_psi(p_prime: MarkingSet, i: u32, p: MarkingSet, j: u32, k: u32) -> Result<ClassExpression> {
    if !p_prime.is_subset(p) {
        return Err(Error::InvalidMarking(format!("{p_prime} is not a subset of {p}")));
    }
    let (bi, bj, bk) = (
        label_bit(p_prime, i, "marking")?,
        label_bit(p_prime, j, "anchor")?,
        label_bit(p_prime, k, "anchor")?,
    );
    if i == j || i == k || j == k {
        return Err(Error::InvalidMarking(format!("{i}, {j}, {k} are not distinct")));
    }
    let terms = pulled_psi_sides(p.bits(), p_prime.bits(), bi, bj, bk)
        .into_iter()
        .map(|a| (Stratum::from_raw_split(a), BigInt::one()));
    Ok(ClassExpression::from_map(p, terms))
}

/// `D_a * s`, with `a` a normalized side. Emits nothing when they miss.
pub(crate) fn times_divisor(p: u64, s: &Stratum, a: u64, c: &BigInt, out: &mut impl FnMut(Stratum, BigInt)) {
    if s.has_split(a) {
        // self-intersection: minus psi at either germ of the edge
        for germ in [a, p & !a] {
            let mut t = s.clone();
            t.bump_psi(germ, 1);
            out(t, -c);
        }
    } else if s.raw_splits().iter().all(|&b| compatible(a, b)) {
        let mut t = s.clone();
        t.insert_split(a);
        out(t, c.clone());
    }
}

/// Product of an expression with the divisor `D_I`.
pub fn multiply_by_divisor(x: &ClassExpression, side: MarkingSet) -> Result<ClassExpression> {
    let p = x.markings();
    let a = Stratum::divisor(p, side)?.raw_splits()[0];
    let mut out = ClassExpression::zero(p);
    for (s, c) in x.terms() {
        times_divisor(p.bits(), s, a, c, &mut |t, c| out.add_term(t, c));
    }
    Ok(out)
}

/// Rewrites every psi power of one term into boundary strata.
pub(crate) fn expand_term(p: u64, s: Stratum, c: BigInt, rule: AnchorRule, out: &mut impl FnMut(Stratum, BigInt)) {
    let Some(&(flag, _)) = s.raw_psi().first() else {
        out(s, c);
        return;
    };
    let nodes = tree_nodes(p, s.raw_splits());
    let node = &nodes[node_of_flag(&nodes, flag)];
    if node.flags.len() == 3 {
        return;
    }
    let others: Vec<u64> = node.flags.iter().copied().filter(|&f| f != flag).collect();
    let (j, k) = rule.pick(&others);
    let free: Vec<u64> = others.into_iter().filter(|&f| f != j && f != k).collect();
    for pick in 1..1u64 << free.len() {
        let side = free
            .iter()
            .enumerate()
            .filter(|(b, _)| pick >> b & 1 == 1)
            .fold(flag, |acc, (_, &f)| acc | f);
        let mut t = s.clone();
        t.lower_psi(flag);
        t.insert_split(normalize(p, side));
        expand_term(p, t, c.clone(), rule, out);
    }
}

/// Replaces psi decorations by boundary strata until none remain.
pub fn expand_psi_decorations(x: &ClassExpression) -> ClassExpression {
    expand_psi_decorations_with(x, AnchorRule::Smallest)
}

pub fn expand_psi_decorations_with(x: &ClassExpression, rule: AnchorRule) -> ClassExpression {
    let p = x.markings();
    let mut out = ClassExpression::zero(p);
    for (s, c) in x.terms() {
        expand_term(p.bits(), s.clone(), c.clone(), rule, &mut |t, c| out.add_term(t, c));
    }
    out
}

/// Pullback of the point class from the space marked by `m`, represented by
/// the caterpillar tree on `m` in increasing label order.
pub fn point_class_pullback(m: MarkingSet, p: MarkingSet) -> Result<ClassExpression> {
    let order: Vec<u32> = m.labels().collect();
    point_class_pullback_ordered(&order, p)
}

/// As [`point_class_pullback`], with the caterpillar's leaves read off
/// `order` from one end to the other.
pub fn point_class_pullback_ordered(order: &[u32], p: MarkingSet) -> Result<ClassExpression> {
    point_class_capped(order, p, DEFAULT_TERM_CAP)
}

pub(crate) fn point_class_capped(order: &[u32], p: MarkingSet, cap: usize) -> Result<ClassExpression> {
    let m = MarkingSet::from_labels(order.iter().copied())?;
    if m.len() != order.len() {
        return Err(Error::InvalidMarking("caterpillar order repeats a label".into()));
    }
    if !m.is_subset(p) {
        return Err(Error::InvalidMarking(format!("{m} is not a subset of {p}")));
    }
    if m.len() < 3 {
        return Err(Error::TooFewMarkings(m.len()));
    }
    let k = order.len();
    if k == 3 {
        return Ok(ClassExpression::unit(p));
    }
    let nodes = k - 2;
    let free: Vec<u64> = MarkingSet::from_bits(p.bits() & !m.bits())
        .labels()
        .map(|l| 1u64 << l)
        .collect();
    let count = (nodes as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::BudgetExceeded {
            what: "point class pullback terms",
            needed: count,
            budget: cap as u128,
        });
    }
    // prefix[t] = markings of M on caterpillar nodes 0..=t
    let mut prefix = vec![0u64; nodes];
    let mut acc = (1u64 << order[0]) | (1u64 << order[1]);
    prefix[0] = acc;
    for t in 1..nodes {
        acc |= 1u64 << order[t + 1];
        prefix[t] = acc;
    }
    let mut place = vec![0usize; free.len()];
    let mut out = ClassExpression::zero(p);
    loop {
        let mut s = Stratum::unit();
        for (t, &base) in prefix.iter().enumerate().take(nodes - 1) {
            let side = free
                .iter()
                .zip(&place)
                .filter(|(_, &n)| n <= t)
                .fold(base, |a, (&f, _)| a | f);
            s.insert_split(normalize(p.bits(), side));
        }
        out.add_term(s, BigInt::one());
        let mut d = 0;
        loop {
            if d == place.len() {
                return Ok(out);
            }
            place[d] += 1;
            if place[d] < nodes {
                break;
            }
            place[d] = 0;
            d += 1;
        }
    }
}

/// Degree of the zero-dimensional part. Each top-dimensional stratum is a
/// product of three-pointed spaces and counts once.
pub fn integrate(x: &ClassExpression) -> Result<BigInt> {
    if x.has_psi() {
        return Err(Error::ResidualPsi);
    }
    let top = x.markings().len().saturating_sub(3);
    Ok(x.terms()
        .filter(|(s, _)| s.edge_count() == top)
        .fold(BigInt::zero(), |acc, (_, c)| acc + c))
}

/// Where `pi_S^* psi_i` lands on a stratum: the node of the tree that `i`
/// sits on after forgetting everything outside `S` and stabilizing, the
/// flag `q` there that leads to `i`, and the flags `Q` there that see `S`.
pub(crate) fn landing(nodes: &[RawNode], set: u64, i: u64) -> (usize, u64, Vec<u64>) {
    let mut at = node_of_flag(nodes, i);
    loop {
        let node = &nodes[at];
        let meeting: Vec<usize> = (0..node.flags.len()).filter(|&x| node.flags[x] & set != 0).collect();
        let toward_i = *meeting
            .iter()
            .find(|&&x| node.flags[x] & i != 0)
            .expect("i is on one side of every node");
        if meeting.len() >= 3 {
            let q = meeting.iter().map(|&x| node.flags[x]).collect();
            return (at, node.flags[toward_i], q);
        }
        let onward = *meeting
            .iter()
            .find(|&&x| x != toward_i)
            .expect("S has at least three elements");
        at = node.across[onward].expect("the rest of S lies beyond an edge");
    }
}

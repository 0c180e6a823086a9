//! Exact intersection numbers of pulled-back psi classes on the genus-0
//! moduli spaces `M_{0,P}`.
//!
//! Classes are integer combinations of boundary strata ([`ClassExpression`]).
//! Psi classes are never integrated directly: each one is rewritten as a sum
//! of boundary divisors as soon as it appears, so that at the end only
//! zero-dimensional strata remain, and each of those has degree one.
//!
//! A product `prod_k pi_{S_k}^* psi_{i_k}` is folded in one factor at a time.
//! The default [`Strategy::Divisors`] writes the factor as a sum of divisors
//! on `M_{0,P}` and multiplies term by term, which produces (and then
//! expands) minus-psi decorations on self-intersections.
//! [`Strategy::Restriction`] instead restricts the factor to each stratum,
//! where it becomes a pulled-back psi class on a single node; that route
//! never sees a negative coefficient. The two share almost no code, which
//! makes their agreement a useful check.
//!
//! ```
//! use chromoduli::moduli::{kapranov_degree, Constraint, MarkingSet};
//!
//! // int_{M_{0,5}} psi_0 * pi_{0123}^* psi_0 = 1
//! let p = MarkingSet::range(5)?;
//! let c = [
//!     Constraint::new(p, 0)?,
//!     Constraint::new(MarkingSet::from_labels([0, 1, 2, 3])?, 0)?,
//! ];
//! assert_eq!(kapranov_degree(&c, p)?, 1.into());
//! # Ok::<(), chromoduli::Error>(())
//! ```

mod cerberus;
mod omega;
mod rewrite;
mod stratum;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cerberus::{cerberus_check, Constraint};
pub use omega::{omega, omega_digraph, omega_problem, omega_with, NeighborhoodMode, OmegaProblem, OmegaReport};
pub use rewrite::{
    expand_psi_decorations, expand_psi_decorations_with, integrate, multiply_by_divisor, point_class_pullback,
    point_class_pullback_ordered, psi_as_boundary, pullback_divisor, pullback_psi, AnchorRule, DEFAULT_TERM_CAP,
};
pub use stratum::{ClassExpression, MarkingSet, Stratum, TreeNode, MAX_MARKINGS};

use crate::error::{Error, Result};
use rewrite::{expand_term, landing, pulled_psi_sides, times_divisor};
use stratum::{node_of_flag, normalize, tree_nodes};

/// How each factor is multiplied into the running product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Expand the factor into divisors on the whole space.
    #[default]
    Divisors,
    /// Restrict the factor to each stratum first.
    Restriction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub strategy: Strategy,
    pub anchors: AnchorRule,
    /// Drop strata on which the remaining factors must vanish.
    pub prune: bool,
    /// Return zero straight away when the surplus condition fails.
    pub cerberus: bool,
    pub term_cap: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            strategy: Strategy::Divisors,
            anchors: AnchorRule::Smallest,
            prune: true,
            cerberus: true,
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

/// Term counts seen during one evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineStats {
    pub initial_terms: usize,
    pub peak_terms: usize,
    pub final_terms: usize,
    pub factors: usize,
    /// The surplus check already showed the answer is zero.
    pub cerberus_zero: bool,
}

fn check_constraints(constraints: &[Constraint], p: MarkingSet) -> Result<()> {
    for c in constraints {
        c.validate()?;
        if !c.set.is_subset(p) {
            return Err(Error::InvalidMarking(format!("{} is not a subset of {p}", c.set)));
        }
    }
    Ok(())
}

/// The Kapranov degree `int_{M_{0,P}} prod_k pi_{S_k}^* psi_{i_k}`, which
/// needs exactly `|P| - 3` factors.
pub fn kapranov_degree(constraints: &[Constraint], p: MarkingSet) -> Result<BigInt> {
    kapranov_degree_with(constraints, p, &EngineOptions::default()).map(|(v, _)| v)
}

pub fn kapranov_degree_with(
    constraints: &[Constraint],
    p: MarkingSet,
    opts: &EngineOptions,
) -> Result<(BigInt, EngineStats)> {
    if p.len() < 3 {
        return Err(Error::InvalidMarking(format!("{p} has fewer than three markings")));
    }
    check_constraints(constraints, p)?;
    if constraints.len() + 3 != p.len() {
        return Err(Error::WrongConstraintCount {
            expected: p.len() - 3,
            got: constraints.len(),
        });
    }
    if opts.cerberus && !cerberus_check(constraints)? {
        let stats = EngineStats {
            cerberus_zero: true,
            ..EngineStats::default()
        };
        return Ok((BigInt::zero(), stats));
    }
    let (x, stats) = apply_constraints(ClassExpression::unit(p), constraints, opts)?;
    Ok((integrate(&x)?, stats))
}

/// Multiplies `start` by every factor in turn. The result carries no psi
/// decorations. With pruning on, terms that cannot survive the remaining
/// factors of `constraints` are dropped along the way, so the result is only
/// meaningful after all of them have been applied.
pub fn apply_constraints(
    start: ClassExpression,
    constraints: &[Constraint],
    opts: &EngineOptions,
) -> Result<(ClassExpression, EngineStats)> {
    let pm = start.markings();
    check_constraints(constraints, pm)?;
    let p = pm.bits();
    let raw: Vec<(u64, u64)> = constraints.iter().map(|c| (c.set.bits(), 1u64 << c.point)).collect();

    let mut current: Vec<(Stratum, BigInt)> = Vec::new();
    {
        let mut acc: HashMap<Stratum, BigInt> = HashMap::new();
        for (s, c) in start.into_terms() {
            expand_term(p, s, c, opts.anchors, &mut |t, c| {
                if !opts.prune || survives(p, &t, &raw) {
                    *acc.entry(t).or_default() += c;
                }
            });
        }
        current.extend(acc.into_iter().filter(|(_, c)| !c.is_zero()));
    }
    let mut stats = EngineStats {
        initial_terms: current.len(),
        peak_terms: current.len(),
        factors: raw.len(),
        ..EngineStats::default()
    };

    for (step, &(set, i)) in raw.iter().enumerate() {
        let rest = &raw[step + 1..];
        let divisors = match opts.strategy {
            Strategy::Divisors => {
                let others: Vec<u64> = (0..64).map(|l| 1u64 << l).filter(|&b| set & b != 0 && b != i).collect();
                let (j, k) = opts.anchors.pick(&others);
                pulled_psi_sides(p, set, i, j, k)
            }
            Strategy::Restriction => Vec::new(),
        };
        let merged = current
            .par_iter()
            .fold(HashMap::new, |mut acc: HashMap<Stratum, BigInt>, (s, c)| {
                let mut emit = |t: Stratum, c: BigInt| {
                    if !opts.prune || survives(p, &t, rest) {
                        *acc.entry(t).or_default() += c;
                    }
                };
                match opts.strategy {
                    Strategy::Divisors => {
                        for &a in &divisors {
                            times_divisor(p, s, a, c, &mut |t, c| expand_term(p, t, c, opts.anchors, &mut emit));
                        }
                    }
                    Strategy::Restriction => restrict_step(p, s, set, i, opts.anchors, c, &mut emit),
                }
                acc
            })
            .reduce(HashMap::new, merge);
        current = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if current.len() > opts.term_cap {
            return Err(Error::BudgetExceeded {
                what: "moduli engine terms",
                needed: current.len() as u128,
                budget: opts.term_cap as u128,
            });
        }
        stats.peak_terms = stats.peak_terms.max(current.len());
    }
    stats.final_terms = current.len();
    Ok((ClassExpression::from_map(pm, current), stats))
}

fn merge(mut a: HashMap<Stratum, BigInt>, b: HashMap<Stratum, BigInt>) -> HashMap<Stratum, BigInt> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (s, c) in b {
        *a.entry(s).or_default() += c;
    }
    a
}

/// False when some node of `s` would receive more of the remaining factors
/// than its dimension, or one of them is psi on a three-pointed node.
fn survives(p: u64, s: &Stratum, rest: &[(u64, u64)]) -> bool {
    if rest.is_empty() {
        return true;
    }
    let nodes = tree_nodes(p, s.raw_splits());
    let mut load = vec![0usize; nodes.len()];
    for &(flag, e) in s.raw_psi() {
        load[node_of_flag(&nodes, flag)] += e as usize;
    }
    for &(set, i) in rest {
        let (at, _, q) = landing(&nodes, set, i);
        if q.len() == 3 {
            return false;
        }
        load[at] += 1;
    }
    nodes.iter().zip(&load).all(|(n, &l)| l + 3 <= n.flags.len())
}

/// `pi_S^* psi_i` restricted to `s`: psi at the flag `q` pulled back from the
/// flags `Q` of one node, then written as divisors of that node.
fn restrict_step(
    p: u64,
    s: &Stratum,
    set: u64,
    i: u64,
    rule: AnchorRule,
    c: &BigInt,
    out: &mut impl FnMut(Stratum, BigInt),
) {
    let nodes = tree_nodes(p, s.raw_splits());
    let (at, q, qs) = landing(&nodes, set, i);
    if qs.len() == 3 {
        return;
    }
    let others: Vec<u64> = qs.iter().copied().filter(|&f| f != q).collect();
    let (j, k) = rule.pick(&others);
    let inner: Vec<u64> = others.into_iter().filter(|&f| f != j && f != k).collect();
    let outer: Vec<u64> = nodes[at].flags.iter().copied().filter(|f| !qs.contains(f)).collect();
    let union = |list: &[u64], pick: u64| {
        list.iter()
            .enumerate()
            .filter(|(b, _)| pick >> b & 1 == 1)
            .fold(0u64, |a, (_, &f)| a | f)
    };
    for t in 1..1u64 << inner.len() {
        for u in 0..1u64 << outer.len() {
            let side = q | union(&inner, t) | union(&outer, u);
            let mut refined = s.clone();
            refined.insert_split(normalize(p, side));
            out(refined, c.clone());
        }
    }
}

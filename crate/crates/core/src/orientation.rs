//! Brute-force oracles: acyclic orientations, compatible
//! (coloring, orientation) pairs, and proper colorings.
//!
//! Nothing here is clever. Orientations are enumerated as bitmasks over the
//! edge list and checked with a topological sort; colorings are enumerated
//! as base-`k` counters.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Edge, SimpleGraph, Vertex};

/// Default cap on candidate evaluations.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// A direction for every edge, as the list of arcs in edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Orientation {
    arcs: Vec<(Vertex, Vertex)>,
}

impl Orientation {
    /// Builds the orientation that sends edge `i` of `g` forward (smaller
    /// label to larger) iff bit `i` of `mask` is set.
    pub fn from_mask(g: &SimpleGraph, mask: u64) -> Self {
        let arcs = g
            .edges()
            .enumerate()
            .map(|(i, e)| if mask >> i & 1 == 1 { (e.0, e.1) } else { (e.1, e.0) })
            .collect();
        Orientation { arcs }
    }

    /// Checks that `arcs` orients each edge of `g` exactly once.
    pub fn from_arcs(g: &SimpleGraph, arcs: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let mut by_edge: BTreeMap<Edge, (Vertex, Vertex)> = BTreeMap::new();
        for &(u, w) in &arcs {
            let e = Edge::new(u, w);
            if !g.has_edge(u, w) {
                return Err(Error::UnknownEdge(e.0, e.1));
            }
            if by_edge.insert(e, (u, w)).is_some() {
                return Err(Error::InvalidGraph(format!("edge {e} oriented twice")));
            }
        }
        if by_edge.len() != g.edge_count() {
            return Err(Error::InvalidGraph("orientation misses an edge".into()));
        }
        Ok(Orientation {
            arcs: by_edge.into_values().collect(),
        })
    }

    pub fn arcs(&self) -> &[(Vertex, Vertex)] {
        &self.arcs
    }

    /// Whether `u -> w` is one of the arcs.
    pub fn points(&self, u: Vertex, w: Vertex) -> bool {
        self.arcs.contains(&(u, w))
    }

    pub fn to_digraph(&self, g: &SimpleGraph) -> Digraph {
        Digraph::new(g.vertices(), self.arcs.iter().copied())
            .expect("orientation of a simple graph is a simple digraph")
    }
}

/// A map `V -> {1, ..., k}`.
pub type Coloring = BTreeMap<Vertex, u32>;

fn check_budget(what: &'static str, needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { what, needed, budget })
    } else {
        Ok(())
    }
}

fn orientation_candidates(g: &SimpleGraph) -> Option<u128> {
    1u128.checked_shl(g.edge_count() as u32)
}

/// All acyclic orientations, in increasing bitmask order.
pub fn acyclic_orientations(g: &SimpleGraph, budget: u128) -> Result<Vec<Orientation>> {
    let total = orientation_candidates(g).unwrap_or(u128::MAX);
    check_budget("acyclic orientation enumeration", total, budget)?;
    Ok((0..total as u64)
        .into_par_iter()
        .map(|mask| Orientation::from_mask(g, mask))
        .filter(|o| o.to_digraph(g).is_acyclic())
        .collect())
}

/// Number of pairs `(sigma, O)` with `O` acyclic and `sigma(u) >= sigma(w)`
/// for every arc `u -> w` of `O`, where `sigma: V -> {1..k}`.
pub fn stanley_pair_count(g: &SimpleGraph, k: u32, budget: u128) -> Result<u128> {
    if k == 0 {
        return Err(Error::InvalidGraph("number of colors must be positive".into()));
    }
    let colorings = (k as u128).checked_pow(g.vertex_count() as u32).unwrap_or(u128::MAX);
    let total = orientation_candidates(g)
        .and_then(|o| o.checked_mul(colorings))
        .unwrap_or(u128::MAX);
    check_budget("stanley pair enumeration", total, budget)?;

    let verts: Vec<Vertex> = g.vertices().collect();
    let index = |v: Vertex| verts.binary_search(&v).unwrap();
    let n_orient = orientation_candidates(g).unwrap() as u64;
    let count = (0..n_orient)
        .into_par_iter()
        .map(|mask| {
            let o = Orientation::from_mask(g, mask);
            if !o.to_digraph(g).is_acyclic() {
                return 0u128;
            }
            let arcs: Vec<(usize, usize)> = o.arcs().iter().map(|&(u, w)| (index(u), index(w))).collect();
            let mut sigma = vec![1u32; verts.len()];
            let mut count = 0u128;
            loop {
                if arcs.iter().all(|&(u, w)| sigma[u] >= sigma[w]) {
                    count += 1;
                }
                if !advance(&mut sigma, k) {
                    break;
                }
            }
            count
        })
        .sum();
    Ok(count)
}

/// Base-`k` odometer over `{1..k}^n`; false once it wraps around.
fn advance(digits: &mut [u32], k: u32) -> bool {
    for d in digits.iter_mut() {
        if *d < k {
            *d += 1;
            return true;
        }
        *d = 1;
    }
    false
}

/// Number of proper colorings with `k` colors, by enumeration.
pub fn count_proper_colorings(g: &SimpleGraph, k: u64) -> u64 {
    let n = g.vertex_count();
    if k == 0 {
        return 0;
    }
    let verts: Vec<Vertex> = g.vertices().collect();
    let index = |v: Vertex| verts.binary_search(&v).unwrap();
    let edges: Vec<(usize, usize)> = g.edges().map(|e| (index(e.0), index(e.1))).collect();
    let mut sigma = vec![1u32; n];
    let mut count = 0;
    loop {
        if edges.iter().all(|&(u, w)| sigma[u] != sigma[w]) {
            count += 1;
        }
        if !advance(&mut sigma, k as u32) {
            return count;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::chromatic_polynomial;
    use num_bigint::BigInt;
    use num_traits::Signed;
    use std::collections::BTreeSet;

    fn fig1() -> SimpleGraph {
        SimpleGraph::new(0..4, [(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap()
    }

    /// Depth-first cycle search, independent of the Kahn-based check.
    fn has_cycle(o: &Orientation, g: &SimpleGraph) -> bool {
        fn visit(v: Vertex, o: &Orientation, state: &mut BTreeMap<Vertex, u8>) -> bool {
            state.insert(v, 1);
            for &(a, b) in o.arcs() {
                if a != v {
                    continue;
                }
                match state.get(&b).copied().unwrap_or(0) {
                    1 => return true,
                    0 if visit(b, o, state) => return true,
                    _ => {}
                }
            }
            state.insert(v, 2);
            false
        }
        let mut state = BTreeMap::new();
        g.vertices()
            .any(|v| state.get(&v).copied().unwrap_or(0) == 0 && visit(v, o, &mut state))
    }

    fn small_graphs() -> Vec<SimpleGraph> {
        let mut out = Vec::new();
        for n in 1..=5u32 {
            let pairs: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
            // every 7th labeled graph keeps the sweep quick but varied
            for mask in (0u32..1 << pairs.len()).step_by(7) {
                let edges = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p);
                out.push(SimpleGraph::new(0..n, edges).unwrap());
            }
        }
        out
    }

    #[test]
    fn orientation_counts() {
        let k2 = SimpleGraph::complete(2);
        assert_eq!(acyclic_orientations(&k2, DEFAULT_BUDGET).unwrap().len(), 2);
        let k3 = SimpleGraph::complete(3);
        assert_eq!(acyclic_orientations(&k3, DEFAULT_BUDGET).unwrap().len(), 6);
        assert_eq!(acyclic_orientations(&fig1(), DEFAULT_BUDGET).unwrap().len(), 12);
    }

    #[test]
    fn returned_orientations_pass_independent_check() {
        for g in small_graphs() {
            let all = acyclic_orientations(&g, DEFAULT_BUDGET).unwrap();
            let distinct: BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
            for o in &all {
                assert!(!has_cycle(o, &g));
            }
            let cyclic = (0..1u64 << g.edge_count())
                .map(|m| Orientation::from_mask(&g, m))
                .filter(|o| has_cycle(o, &g))
                .count();
            assert_eq!(all.len() + cyclic, 1 << g.edge_count());
        }
    }

    #[test]
    fn stanley_examples() {
        for n in 1..5 {
            for k in 1..4 {
                assert_eq!(
                    stanley_pair_count(&SimpleGraph::edgeless(n), k, DEFAULT_BUDGET).unwrap(),
                    (k as u128).pow(n)
                );
            }
        }
        assert_eq!(
            stanley_pair_count(&SimpleGraph::complete(2), 1, DEFAULT_BUDGET).unwrap(),
            2
        );
        assert_eq!(stanley_pair_count(&fig1(), 1, DEFAULT_BUDGET).unwrap(), 12);
    }

    #[test]
    fn stanley_matches_chromatic_at_negative_integers() {
        for g in small_graphs() {
            let p = chromatic_polynomial(&g);
            let n = g.vertex_count();
            let orientations = acyclic_orientations(&g, DEFAULT_BUDGET).unwrap().len() as u128;
            assert_eq!(stanley_pair_count(&g, 1, DEFAULT_BUDGET).unwrap(), orientations);
            for k in 1..=3 {
                let mut expected = p.evaluate_i64(-(k as i64));
                if n % 2 == 1 {
                    expected = -expected;
                }
                assert!(!expected.is_negative());
                assert_eq!(
                    BigInt::from(stanley_pair_count(&g, k, DEFAULT_BUDGET).unwrap()),
                    expected,
                    "{g:?} k={k}"
                );
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let k6 = SimpleGraph::complete(6);
        assert!(matches!(
            acyclic_orientations(&k6, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            stanley_pair_count(&k6, 3, 1 << 20),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn from_arcs_validates() {
        let k3 = SimpleGraph::complete(3);
        assert!(Orientation::from_arcs(&k3, vec![(0, 1), (1, 2), (0, 2)]).is_ok());
        assert!(Orientation::from_arcs(&k3, vec![(0, 1), (1, 2)]).is_err());
        assert!(Orientation::from_arcs(&k3, vec![(0, 1), (1, 0), (1, 2)]).is_err());
    }
}

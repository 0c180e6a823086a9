//! Chromatic polynomials by deletion-contraction,
//! `chi_G = chi_{G - e} - chi_{G / e}`, memoized on a canonical form of the
//! edge set.

use std::collections::HashMap;

use crate::graph::{SimpleGraph, Vertex};
use crate::polynomial::IntPolynomial;

/// Memo key: the edge set after relabeling the vertices to `0..n` in a
/// deterministic order refined by degrees. Equal keys mean the graphs are
/// isomorphic (the key *is* a relabeled copy), which is all memoization
/// needs. Isomorphic graphs usually, but not always, get equal keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

pub fn canonical_key(g: &SimpleGraph) -> CanonicalKey {
    let verts: Vec<Vertex> = g.vertices().collect();
    let n = verts.len();
    let idx = |v: Vertex| verts.binary_search(&v).unwrap();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[idx(e.0)].push(idx(e.1));
        adj[idx(e.1)].push(idx(e.0));
    }
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let signature = |v: usize| {
        let mut nd: Vec<usize> = adj[v].iter().map(|&w| deg[w]).collect();
        nd.sort_unstable();
        (deg[v], nd)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_cached_key(|&v| (signature(v), v));
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .map(|e| {
            let (a, b) = (rank[idx(e.0)] as u32, rank[idx(e.1)] as u32);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();

    let mut bytes = Vec::with_capacity(4 + 8 * edges.len());
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    for (a, b) in edges {
        bytes.extend_from_slice(&a.to_le_bytes());
        bytes.extend_from_slice(&b.to_le_bytes());
    }
    CanonicalKey(bytes)
}

/// Deletion-contraction with a per-call memo table.
pub fn chromatic_polynomial(g: &SimpleGraph) -> IntPolynomial {
    let mut memo = HashMap::new();
    chromatic_memo(g, &mut memo)
}

/// Same recursion with a caller-owned memo table, which can be reused
/// across calls.
pub fn chromatic_memo(g: &SimpleGraph, memo: &mut HashMap<CanonicalKey, IntPolynomial>) -> IntPolynomial {
    let Some(e) = g.edges().next() else {
        return IntPolynomial::monomial(g.vertex_count());
    };
    let key = canonical_key(g);
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let deleted = g.delete_edge(e.0, e.1).expect("edge taken from graph");
    let contracted = g.contract_edge(e.0, e.1).expect("edge taken from graph");
    let p = &chromatic_memo(&deleted, memo) - &chromatic_memo(&contracted, memo);
    memo.insert(key, p.clone());
    p
}

/// Plain recursion without a memo table.
pub fn chromatic_polynomial_unmemoized(g: &SimpleGraph) -> IntPolynomial {
    match g.edges().next() {
        None => IntPolynomial::monomial(g.vertex_count()),
        Some(e) => {
            let deleted = g.delete_edge(e.0, e.1).expect("edge taken from graph");
            let contracted = g.contract_edge(e.0, e.1).expect("edge taken from graph");
            &chromatic_polynomial_unmemoized(&deleted) - &chromatic_polynomial_unmemoized(&contracted)
        }
    }
}

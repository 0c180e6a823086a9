//! Simple graphs and digraphs on labeled vertices, plus the plain-text
//! edge-list format used by the command line tools.
//!
//! The text format is
//!
//! ```text
//! [digraph]
//! n m
//! u_1 v_1
//! ...
//! u_m v_m
//! ```
//!
//! with 0-based vertex indices. Blank lines and `#` comments are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// An undirected edge, stored with the smaller label first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(u: Vertex, w: Vertex) -> Self {
        if u <= w {
            Edge(u, w)
        } else {
            Edge(w, u)
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// A finite simple graph with a nonempty vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleGraph {
    vertices: BTreeSet<Vertex>,
    edges: BTreeSet<Edge>,
}

impl SimpleGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("vertex set is empty".into()));
        }
        let mut set = BTreeSet::new();
        for (u, w) in edges {
            if u == w {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            for x in [u, w] {
                if !vertices.contains(&x) {
                    return Err(Error::UnknownVertex(x));
                }
            }
            if !set.insert(Edge::new(u, w)) {
                return Err(Error::InvalidGraph(format!("parallel edge {}", Edge::new(u, w))));
            }
        }
        Ok(SimpleGraph { vertices, edges: set })
    }

    /// The graph on `0..n` with no edges.
    pub fn edgeless(n: u32) -> Self {
        assert!(n > 0, "a graph needs at least one vertex");
        SimpleGraph {
            vertices: (0..n).collect(),
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: u32) -> Self {
        assert!(n > 0, "a graph needs at least one vertex");
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |w| Edge(u, w))).collect();
        SimpleGraph {
            vertices: (0..n).collect(),
            edges,
        }
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Vertex> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: Vertex, w: Vertex) -> bool {
        self.edges.contains(&Edge::new(u, w))
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// Position of `v` in the sorted vertex order.
    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    /// Neighbors of `v`, not including `v` itself.
    pub fn neighbors(&self, v: Vertex) -> BTreeSet<Vertex> {
        self.edges
            .iter()
            .filter_map(|e| match (e.0 == v, e.1 == v) {
                (true, _) => Some(e.1),
                (_, true) => Some(e.0),
                _ => None,
            })
            .collect()
    }

    /// The closed neighborhood `N[v]`: `v` together with its neighbors.
    pub fn closed_neighborhood(&self, v: Vertex) -> BTreeSet<Vertex> {
        let mut n = self.neighbors(v);
        n.insert(v);
        n
    }

    pub fn delete_edge(&self, u: Vertex, w: Vertex) -> Result<SimpleGraph> {
        let e = Edge::new(u, w);
        if !self.edges.contains(&e) {
            return Err(Error::UnknownEdge(e.0, e.1));
        }
        let mut edges = self.edges.clone();
        edges.remove(&e);
        Ok(SimpleGraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    /// Contracts `{u, w}` into a single vertex named after the smaller
    /// label. Loops vanish and parallel edges are merged on the spot.
    pub fn contract_edge(&self, u: Vertex, w: Vertex) -> Result<SimpleGraph> {
        let e = Edge::new(u, w);
        if !self.edges.contains(&e) {
            return Err(Error::UnknownEdge(e.0, e.1));
        }
        let (keep, gone) = (e.0, e.1);
        let mut vertices = self.vertices.clone();
        vertices.remove(&gone);
        let rename = |x: Vertex| if x == gone { keep } else { x };
        let edges = self
            .edges
            .iter()
            .filter(|&&f| f != e)
            .map(|f| (rename(f.0), rename(f.1)))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| Edge::new(a, b))
            .collect();
        Ok(SimpleGraph { vertices, edges })
    }

    /// The symmetric digraph with both arcs for every edge.
    pub fn to_symmetric_digraph(&self) -> Digraph {
        let arcs = self.edges.iter().flat_map(|e| [(e.0, e.1), (e.1, e.0)]).collect();
        Digraph {
            vertices: self.vertices.clone(),
            arcs,
        }
    }

    /// Relabels vertices through `map`, which must be injective on the vertex set.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> Result<SimpleGraph> {
        let vertices: Vec<Vertex> = self.vertices.iter().map(|&v| map(v)).collect();
        if vertices.iter().collect::<BTreeSet<_>>().len() != vertices.len() {
            return Err(Error::InvalidGraph("relabeling is not injective".into()));
        }
        SimpleGraph::new(vertices, self.edges.iter().map(|e| (map(e.0), map(e.1))))
    }
}

/// A finite simple directed graph. Opposite arcs may both be present.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digraph {
    vertices: BTreeSet<Vertex>,
    arcs: BTreeSet<(Vertex, Vertex)>,
}

impl Digraph {
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        arcs: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("vertex set is empty".into()));
        }
        let mut set = BTreeSet::new();
        for (u, w) in arcs {
            if u == w {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            for x in [u, w] {
                if !vertices.contains(&x) {
                    return Err(Error::UnknownVertex(x));
                }
            }
            if !set.insert((u, w)) {
                return Err(Error::InvalidGraph(format!("parallel arc {u} -> {w}")));
            }
        }
        Ok(Digraph { vertices, arcs: set })
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Vertex> + '_ {
        self.vertices.iter().copied()
    }

    pub fn arcs(&self) -> impl ExactSizeIterator<Item = (Vertex, Vertex)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.arcs.iter().filter(|a| a.1 == v).count()
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.arcs.iter().filter(|a| a.0 == v).count()
    }

    /// `N^in[v]`: `v` and every `w` with an arc `w -> v`.
    pub fn closed_in_neighborhood(&self, v: Vertex) -> BTreeSet<Vertex> {
        let mut n: BTreeSet<Vertex> = self.arcs.iter().filter(|a| a.1 == v).map(|a| a.0).collect();
        n.insert(v);
        n
    }

    /// `N^out[v]`: `v` and every `w` with an arc `v -> w`.
    pub fn closed_out_neighborhood(&self, v: Vertex) -> BTreeSet<Vertex> {
        let mut n: BTreeSet<Vertex> = self.arcs.iter().filter(|a| a.0 == v).map(|a| a.1).collect();
        n.insert(v);
        n
    }

    pub fn is_sink(&self, v: Vertex) -> bool {
        self.out_degree(v) == 0
    }

    pub fn is_source(&self, v: Vertex) -> bool {
        self.in_degree(v) == 0
    }

    /// Reverses every arc.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            vertices: self.vertices.clone(),
            arcs: self.arcs.iter().map(|&(u, w)| (w, u)).collect(),
        }
    }

    /// Removes `v` and all arcs touching it. `None` if `v` is the only vertex.
    pub fn remove_vertex(&self, v: Vertex) -> Option<Digraph> {
        let mut vertices = self.vertices.clone();
        vertices.remove(&v);
        if vertices.is_empty() {
            return None;
        }
        Some(Digraph {
            vertices,
            arcs: self.arcs.iter().filter(|a| a.0 != v && a.1 != v).copied().collect(),
        })
    }

    /// Kahn's algorithm; `None` if there is a directed cycle. Ties are broken
    /// by smallest label.
    pub fn topological_order(&self) -> Option<Vec<Vertex>> {
        let mut indeg: BTreeMap<Vertex, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for &(_, w) in &self.arcs {
            *indeg.get_mut(&w).unwrap() += 1;
        }
        let mut ready: BTreeSet<Vertex> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &(_, w) in self.arcs.range((v, 0)..=(v, Vertex::MAX)) {
                let d = indeg.get_mut(&w).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.insert(w);
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}

/// What a parsed graph file contained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphInput {
    Graph(SimpleGraph),
    Digraph(Digraph),
}

/// Parses the edge-list text format.
pub fn parse_graph_text(text: &str) -> Result<GraphInput> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };

    let (mut line_no, mut header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
    let directed = match header {
        "digraph" | "graph" => {
            let directed = header == "digraph";
            (line_no, header) = lines.next().ok_or_else(|| err(line_no, "missing `n m` line"))?;
            directed
        }
        _ => false,
    };

    let nums = parse_pair(header).ok_or_else(|| err(line_no, "expected `n m`"))?;
    let (n, m) = nums;
    if n == 0 {
        return Err(err(line_no, "graph needs at least one vertex"));
    }
    let mut pairs = Vec::with_capacity(m as usize);
    for _ in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| err(line_no, "fewer edge lines than declared"))?;
        line_no = ln;
        let (u, w) = parse_pair(l).ok_or_else(|| err(ln, "expected `u v`"))?;
        if u >= n || w >= n {
            return Err(err(ln, "vertex index out of range"));
        }
        pairs.push((u, w));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "more edge lines than declared"));
    }
    let with_line = |e: Error| match e {
        Error::Parse { .. } => e,
        other => err(line_no, &other.to_string()),
    };
    if directed {
        Digraph::new(0..n, pairs).map(GraphInput::Digraph).map_err(with_line)
    } else {
        SimpleGraph::new(0..n, pairs).map(GraphInput::Graph).map_err(with_line)
    }
}

fn parse_pair(line: &str) -> Option<(u32, u32)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Serializes a graph in the edge-list text format. Vertices are renumbered
/// to `0..n` in sorted order.
pub fn to_graph_text(input: &GraphInput) -> String {
    let (header, verts, pairs): (&str, Vec<Vertex>, Vec<(Vertex, Vertex)>) = match input {
        GraphInput::Graph(g) => ("", g.vertices().collect(), g.edges().map(|e| (e.0, e.1)).collect()),
        GraphInput::Digraph(d) => ("digraph\n", d.vertices().collect(), d.arcs().collect()),
    };
    let idx = |v: Vertex| verts.iter().position(|&x| x == v).unwrap();
    let mut out = format!("{header}{} {}\n", verts.len(), pairs.len());
    for (u, w) in pairs {
        out.push_str(&format!("{} {}\n", idx(u), idx(w)));
    }
    out
}

/// One representative of each isomorphism class of simple graphs on the
/// vertices `0..n`, found by brute force over vertex permutations. Meant for
/// `1 <= n <= 6`.
pub fn isomorphism_classes(n: u32) -> Vec<SimpleGraph> {
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
    let perms = permutations(n as usize);
    let index: BTreeMap<(u32, u32), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let canonical = perms
            .iter()
            .map(|perm| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(0u64, |acc, (_, &(u, w))| {
                        let (a, b) = (perm[u as usize], perm[w as usize]);
                        acc | 1 << index[&(a.min(b), a.max(b))]
                    })
            })
            .min()
            .unwrap_or(0);
        if seen.insert(canonical) {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| canonical >> i & 1 == 1)
                .map(|(_, &p)| p);
            out.push(SimpleGraph::new(0..n, edges).expect("valid edges"));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, (n - 1) as u32);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| isomorphism_classes(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
    }

    /// Vertices 0..4 standing for 1..4 of the flagship example: a triangle
    /// on {0, 1, 2} with a pendant vertex 3 on 0.
    fn fig1() -> SimpleGraph {
        SimpleGraph::new(0..4, [(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn delete_edges() {
        let k2 = SimpleGraph::complete(2);
        assert_eq!(k2.delete_edge(0, 1).unwrap(), SimpleGraph::edgeless(2));

        let tri = SimpleGraph::complete(3);
        let path = tri.delete_edge(0, 2).unwrap();
        assert_eq!(path, SimpleGraph::new(0..3, [(0, 1), (1, 2)]).unwrap());

        let g = fig1().delete_edge(3, 0).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g, SimpleGraph::new(0..4, [(0, 1), (0, 2), (1, 2)]).unwrap());
        assert!(g.neighbors(3).is_empty());
    }

    #[test]
    fn contract_edges() {
        let k2 = SimpleGraph::complete(2).contract_edge(1, 0).unwrap();
        assert_eq!(k2, SimpleGraph::new([0], []).unwrap());

        let tri = SimpleGraph::complete(3);
        for e in tri.edges() {
            let c = tri.contract_edge(e.0, e.1).unwrap();
            assert_eq!(c.vertex_count(), 2);
            assert_eq!(c.edge_count(), 1);
            assert!(c.contains_vertex(e.0));
        }

        let path = SimpleGraph::new([10, 20, 30], [(10, 20), (20, 30)]).unwrap();
        let c = path.contract_edge(10, 20).unwrap();
        assert_eq!(c, SimpleGraph::new([10, 30], [(10, 30)]).unwrap());
    }

    #[test]
    fn unknown_edge() {
        let g = SimpleGraph::edgeless(3);
        assert_eq!(g.delete_edge(0, 1), Err(Error::UnknownEdge(0, 1)));
        assert_eq!(g.contract_edge(2, 1), Err(Error::UnknownEdge(1, 2)));
    }

    #[test]
    fn invalid_graphs() {
        assert!(SimpleGraph::new([], []).is_err());
        assert!(SimpleGraph::new(0..2, [(0, 0)]).is_err());
        assert!(SimpleGraph::new(0..2, [(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::new(0..2, [(0, 5)]).is_err());
        assert!(Digraph::new(0..2, [(0, 1), (1, 0)]).is_ok());
        assert!(Digraph::new(0..2, [(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn neighborhoods() {
        let g = fig1();
        assert_eq!(g.closed_neighborhood(0), [0, 1, 2, 3].into());
        assert_eq!(g.closed_neighborhood(1), [0, 1, 2].into());
        assert_eq!(g.closed_neighborhood(3), [0, 3].into());

        let d = Digraph::new(0..3, [(0, 1), (2, 1)]).unwrap();
        assert_eq!(d.closed_in_neighborhood(1), [0, 1, 2].into());
        assert_eq!(d.closed_out_neighborhood(1), [1].into());
        assert_eq!(d.closed_out_neighborhood(0), [0, 1].into());
        assert!(d.is_sink(1) && d.is_source(0) && d.is_source(2));
        assert_eq!(d.reversed().closed_out_neighborhood(1), [0, 1, 2].into());
    }

    #[test]
    fn topological_order_detects_cycles() {
        let d = Digraph::new(0..3, [(0, 1), (2, 1)]).unwrap();
        assert_eq!(d.topological_order(), Some(vec![0, 2, 1]));
        let c = Digraph::new(0..3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!c.is_acyclic());
        let two = Digraph::new(0..2, [(0, 1), (1, 0)]).unwrap();
        assert!(!two.is_acyclic());
    }

    #[test]
    fn parse_text_format() {
        let g = parse_graph_text("4 4\n0 1\n0 2\n1 2\n0 3\n").unwrap();
        assert_eq!(g, GraphInput::Graph(fig1()));

        let d = parse_graph_text("# fig 2\ndigraph\n3 2\n0 1\n2 1\n").unwrap();
        assert_eq!(d, GraphInput::Digraph(Digraph::new(0..3, [(0, 1), (2, 1)]).unwrap()));
        assert_eq!(parse_graph_text(&to_graph_text(&d)).unwrap(), d);
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "",
            "x y",
            "3 2\n0 1\n",
            "3 1\n0 1\n1 2\n",
            "2 1\n0 2\n",
            "2 1\n1 1\n",
            "0 0\n",
            "2 2\n0 1\n1 0\n",
        ] {
            assert!(
                matches!(parse_graph_text(bad), Err(Error::Parse { .. })),
                "accepted {bad:?}"
            );
        }
    }

    #[test]
    fn json_echo() {
        let g = GraphInput::Graph(fig1());
        let s = serde_json::to_string(&g).unwrap();
        let back: GraphInput = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}

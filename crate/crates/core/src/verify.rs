//! Cross-checks `omega_{G,0,m} = (-1)^{|V|} chi_G(-(m-2))` with every
//! independent method the crate has.
//!
//! For a simple graph a row compares five numbers: the signed chromatic
//! value, the number of compatible (coloring, orientation) pairs with
//! `m - 2` colors, the bounded chambers of the arrangement found through
//! that bijection and found by linear programming, the certified critical
//! points of a master function, and the moduli engine. A digraph gets one
//! row per direction, comparing the acyclic product formula with the engine.
//!
//! Nothing in a report depends on timing or thread count, so serializing
//! the same request twice gives the same bytes.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{bounded_chambers_bijective, bounded_chambers_lp, build_arrangement, DEFAULT_LP_BUDGET};
use crate::chromatic::chromatic_polynomial;
use crate::critical::{count_critical_points, WeightVector, DEFAULT_SEED};
use crate::digraph_poly::{chi_acyclic, omega_one_zero, Direction};
use crate::error::{Error, Result};
use crate::graph::{GraphInput, SimpleGraph};
use crate::moduli::{omega_with, EngineOptions, NeighborhoodMode, DEFAULT_TERM_CAP};
use crate::orientation::{stanley_pair_count, DEFAULT_BUDGET};
use crate::polynomial::{bigint_json, opt_bigint_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Seed for the master-function weights.
    pub seed: u64,
    /// Cap on candidates for the Stanley pair count and the bijective
    /// chamber construction.
    pub enumeration_budget: u128,
    /// Cap on LP feasibility checks in the chamber search.
    pub lp_budget: u128,
    /// Cap on live terms in the moduli engine.
    pub term_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            enumeration_budget: DEFAULT_BUDGET,
            lp_budget: DEFAULT_LP_BUDGET,
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    Graph,
    DigraphIn,
    DigraphOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    /// Every computed value is equal, and at least two were computed.
    Agree,
    /// Two computed values differ.
    Disagree,
    /// No disagreement, but some method ran out of budget.
    Skipped,
}

/// One `(graph, m)` comparison. A `None` value was either skipped (and then
/// named in `skipped`) or does not apply to this kind of row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub graph: String,
    pub kind: RowKind,
    pub vertices: usize,
    pub edges: usize,
    pub m: u32,
    /// `(-1)^{|V|} chi(-(m-2))`, from the chromatic polynomial or, for a
    /// digraph, from the product formula.
    #[serde(with = "opt_bigint_json")]
    pub chromatic: Option<BigInt>,
    #[serde(with = "opt_bigint_json")]
    pub stanley_pairs: Option<BigInt>,
    #[serde(with = "opt_bigint_json")]
    pub chambers_bijective: Option<BigInt>,
    #[serde(with = "opt_bigint_json")]
    pub chambers_lp: Option<BigInt>,
    #[serde(with = "opt_bigint_json")]
    pub critical_points: Option<BigInt>,
    #[serde(with = "opt_bigint_json")]
    pub engine: Option<BigInt>,
    pub skipped: Vec<String>,
    /// Chambers whose critical point could not be certified.
    pub failures: Vec<String>,
    pub status: RowStatus,
}

impl VerifyRow {
    /// The computed values, in column order.
    pub fn values(&self) -> impl Iterator<Item = &BigInt> {
        [
            &self.chromatic,
            &self.stanley_pairs,
            &self.chambers_bijective,
            &self.chambers_lp,
            &self.critical_points,
            &self.engine,
        ]
        .into_iter()
        .flatten()
    }

    fn settle(&mut self) {
        let vals: Vec<&BigInt> = self.values().collect();
        self.status = if vals.windows(2).any(|w| w[0] != w[1]) {
            RowStatus::Disagree
        } else if !self.skipped.is_empty() || vals.len() < 2 {
            RowStatus::Skipped
        } else {
            RowStatus::Agree
        };
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.status == RowStatus::Agree)
    }

    pub fn any_disagree(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Disagree)
    }

    pub fn any_skipped(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Skipped)
    }
}

/// A single value, `None` plus the method name when it hit a budget.
fn attempt(name: &str, skipped: &mut Vec<String>, r: Result<BigInt>) -> Result<Option<BigInt>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => {
            skipped.push(name.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn signed(n: usize, v: BigInt) -> BigInt {
    if n.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

fn graph_row(name: &str, g: &SimpleGraph, m: u32, opts: &VerifyOptions) -> Result<VerifyRow> {
    let n = g.vertex_count();
    let k = m - 2;
    let mu = m as usize;
    let chi = chromatic_polynomial(g);
    let mut skipped = Vec::new();
    let mut failures = Vec::new();

    let stanley = stanley_pair_count(g, k, opts.enumeration_budget).map(BigInt::from);
    let bijective = bounded_chambers_bijective(g, mu, opts.enumeration_budget).map(|c| BigInt::from(c.len()));
    let lp = build_arrangement(g, mu)
        .and_then(|a| bounded_chambers_lp(&a, opts.lp_budget))
        .map(|c| BigInt::from(c.len()));
    let critical = build_arrangement(g, mu).and_then(|a| {
        let u = WeightVector::sample(a.len(), opts.seed);
        let c = count_critical_points(g, mu, &u, opts.enumeration_budget)?;
        failures = c.failures;
        Ok(BigInt::from(c.count))
    });
    let engine_opts = EngineOptions {
        term_cap: opts.term_cap,
        ..EngineOptions::default()
    };
    let engine = omega_with(
        &GraphInput::Graph(g.clone()),
        0,
        m,
        NeighborhoodMode::Undirected,
        &engine_opts,
    )
    .map(|r| r.value);

    let mut row = VerifyRow {
        graph: name.to_string(),
        kind: RowKind::Graph,
        vertices: n,
        edges: g.edge_count(),
        m,
        chromatic: Some(signed(n, chi.evaluate_i64(-(k as i64)))),
        stanley_pairs: attempt("stanley_pairs", &mut skipped, stanley)?,
        chambers_bijective: attempt("chambers_bijective", &mut skipped, bijective)?,
        chambers_lp: attempt("chambers_lp", &mut skipped, lp)?,
        critical_points: attempt("critical_points", &mut skipped, critical)?,
        engine: attempt("engine", &mut skipped, engine)?,
        skipped,
        failures,
        status: RowStatus::Skipped,
    };
    row.settle();
    Ok(row)
}

fn digraph_rows(name: &str, d: &crate::graph::Digraph, m: u32, opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let n = d.vertex_count();
    let engine_opts = EngineOptions {
        term_cap: opts.term_cap,
        ..EngineOptions::default()
    };
    let input = GraphInput::Digraph(d.clone());
    [
        (Direction::In, RowKind::DigraphIn),
        (Direction::Out, RowKind::DigraphOut),
    ]
    .into_iter()
    .map(|(dir, kind)| {
        let mut skipped = Vec::new();
        let formula = match chi_acyclic(d, dir) {
            Ok(chi) => Some(signed(n, chi.evaluate_i64(-((m - 2) as i64)))),
            Err(Error::CyclicDigraph) => None,
            Err(e) => return Err(e),
        };
        let engine = omega_with(&input, 0, m, dir.mode(), &engine_opts).map(|r| r.value);
        let mut row = VerifyRow {
            graph: name.to_string(),
            kind,
            vertices: n,
            edges: d.arc_count(),
            m,
            chromatic: formula,
            stanley_pairs: None,
            chambers_bijective: None,
            chambers_lp: None,
            critical_points: None,
            engine: attempt("engine", &mut skipped, engine)?,
            skipped,
            failures: Vec::new(),
            status: RowStatus::Skipped,
        };
        row.settle();
        Ok(row)
    })
    .collect()
}

/// Runs every method on every `(graph, m)` pair. Rows come out ordered by
/// graph (in the given order), then `m`, then kind.
pub fn verify(graphs: &[(String, GraphInput)], ms: &[u32], opts: &VerifyOptions) -> Result<VerifyReport> {
    if let Some(&m) = ms.iter().find(|&&m| m < 3) {
        return Err(Error::TooFewMarkings(m as usize));
    }
    let jobs: Vec<(&String, &GraphInput, u32)> = graphs
        .iter()
        .flat_map(|(name, g)| ms.iter().map(move |&m| (name, g, m)))
        .collect();
    let rows: Vec<Vec<VerifyRow>> = jobs
        .par_iter()
        .map(|&(name, g, m)| match g {
            GraphInput::Graph(g) => graph_row(name, g, m, opts).map(|r| vec![r]),
            GraphInput::Digraph(d) => digraph_rows(name, d, m, opts),
        })
        .collect::<Result<_>>()?;
    Ok(VerifyReport {
        seed: opts.seed,
        rows: rows.into_iter().flatten().collect(),
    })
}

/// `omega_{G,1,0}`, which the genus reduction does not reach, read off the
/// chromatic polynomial as `(-1)^{|V|-1} chi_G'(0)`.
pub fn omega_one_zero_by_formula(g: &SimpleGraph) -> BigInt {
    omega_one_zero(&chromatic_polynomial(g), g.vertex_count())
}

/// Serializable wrapper for a single exact integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exact(#[serde(with = "bigint_json")] pub BigInt);

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> SimpleGraph {
        SimpleGraph::new(0..4, [(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn flagship_row() {
        let g = vec![("fig1".to_string(), GraphInput::Graph(fig1()))];
        let r = verify(&g, &[3], &VerifyOptions::default()).unwrap();
        let row = &r.rows[0];
        assert_eq!(row.status, RowStatus::Agree);
        assert_eq!(row.values().count(), 6);
        assert!(row.values().all(|v| *v == BigInt::from(12)));
    }

    #[test]
    fn small_examples() {
        let gs = vec![
            ("k3".to_string(), GraphInput::Graph(SimpleGraph::complete(3))),
            ("e2".to_string(), GraphInput::Graph(SimpleGraph::edgeless(2))),
        ];
        let r = verify(&gs, &[3, 4], &VerifyOptions::default()).unwrap();
        let at = |name: &str, m: u32| r.rows.iter().find(|x| x.graph == name && x.m == m).unwrap();
        assert!(at("k3", 3).values().all(|v| *v == BigInt::from(6)));
        assert!(at("e2", 4).values().all(|v| *v == BigInt::from(4)));
        assert!(r.all_agree());
    }

    #[test]
    fn budget_marks_rows_skipped() {
        let gs = vec![("k4".to_string(), GraphInput::Graph(SimpleGraph::complete(4)))];
        let opts = VerifyOptions {
            enumeration_budget: 10,
            ..VerifyOptions::default()
        };
        let r = verify(&gs, &[3], &opts).unwrap();
        assert_eq!(r.rows[0].status, RowStatus::Skipped);
        assert!(r.rows[0].skipped.contains(&"stanley_pairs".to_string()));
        assert!(!r.any_disagree());
    }

    #[test]
    fn digraph_rows_compare_formula_and_engine() {
        let d = crate::graph::Digraph::new(0..3, [(0, 1), (2, 1)]).unwrap();
        let r = verify(
            &[("fig2".into(), GraphInput::Digraph(d))],
            &[3, 4],
            &VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.all_agree());
    }

    #[test]
    fn deterministic_json() {
        let gs = vec![("fig1".to_string(), GraphInput::Graph(fig1()))];
        let a = serde_json::to_string(&verify(&gs, &[3, 4], &VerifyOptions::default()).unwrap()).unwrap();
        let b = serde_json::to_string(&verify(&gs, &[3, 4], &VerifyOptions::default()).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn genus_one_no_markings() {
        // chi = x^4 - 4x^3 + 5x^2 - 2x, so chi'(0) = -2 and the sign is -1.
        assert_eq!(omega_one_zero_by_formula(&fig1()), BigInt::from(2));
    }
}

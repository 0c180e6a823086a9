//! The graph intersection numbers
//!
//! ```text
//! omega_{G,0,m} = int_{M_{0, V + M}} pi_M^*[pt] * prod_v pi_{N[v] + M}^* psi_v
//! ```
//!
//! with `|M| = m`, and their in/out variants for digraphs. Higher genus is
//! answered through `omega_{G,g,m} = omega_{G,0,m+2g}`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cerberus::{cerberus_check, Constraint};
use super::rewrite::{integrate, point_class_capped};
use super::stratum::{MarkingSet, MAX_MARKINGS};
use super::{apply_constraints, EngineOptions, EngineStats};
use crate::error::{Error, Result};
use crate::graph::{Digraph, GraphInput, SimpleGraph, Vertex};
use crate::polynomial::bigint_json;

/// Which neighborhoods feed the psi factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighborhoodMode {
    /// `N[v]`. For a digraph, arcs are read as undirected edges.
    #[default]
    Undirected,
    /// `N^in[v]`: `v` and its in-neighbors.
    In,
    /// `N^out[v]`: `v` and its out-neighbors.
    Out,
}

/// The marking layout for one graph and `m`.
///
/// Vertex number `t` (in increasing label order) becomes marking `t`; the
/// extra markings are `|V|, ..., |V| + m - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaProblem {
    pub markings: MarkingSet,
    pub extra: MarkingSet,
    /// One factor per vertex, in vertex order.
    pub constraints: Vec<Constraint>,
    pub vertices: Vec<Vertex>,
}

pub fn omega_problem(input: &GraphInput, m: u32, mode: NeighborhoodMode) -> Result<OmegaProblem> {
    let (vertices, hoods): (Vec<Vertex>, Vec<Vec<Vertex>>) = match input {
        GraphInput::Graph(g) => {
            let vs: Vec<Vertex> = g.vertices().collect();
            let hs = vs
                .iter()
                .map(|&v| g.closed_neighborhood(v).into_iter().collect())
                .collect();
            (vs, hs)
        }
        GraphInput::Digraph(d) => {
            let vs: Vec<Vertex> = d.vertices().collect();
            let hs = vs
                .iter()
                .map(|&v| match mode {
                    NeighborhoodMode::In => d.closed_in_neighborhood(v).into_iter().collect(),
                    NeighborhoodMode::Out => d.closed_out_neighborhood(v).into_iter().collect(),
                    NeighborhoodMode::Undirected => {
                        let mut h = d.closed_in_neighborhood(v);
                        h.extend(d.closed_out_neighborhood(v));
                        h.into_iter().collect()
                    }
                })
                .collect();
            (vs, hs)
        }
    };
    let n = vertices.len() as u32;
    if n + m > MAX_MARKINGS {
        return Err(Error::InvalidMarking(format!(
            "{n} vertices and {m} extra markings exceed {MAX_MARKINGS} markings"
        )));
    }
    let extra = MarkingSet::from_labels(n..n + m)?;
    let markings = MarkingSet::range(n + m)?;
    let index = |v: Vertex| vertices.binary_search(&v).expect("neighbor is a vertex") as u32;
    let constraints = hoods
        .iter()
        .enumerate()
        .map(|(t, h)| {
            let set = MarkingSet::from_labels(h.iter().map(|&v| index(v)))?;
            Ok(Constraint {
                set: MarkingSet::from_bits(set.bits() | extra.bits()),
                point: t as u32,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OmegaProblem {
        markings,
        extra,
        constraints,
        vertices,
    })
}

/// `omega_{G,0,m}` for a simple graph.
pub fn omega(g: &SimpleGraph, m: u32) -> Result<BigInt> {
    let input = GraphInput::Graph(g.clone());
    omega_with(&input, 0, m, NeighborhoodMode::Undirected, &EngineOptions::default()).map(|r| r.value)
}

/// `omega^in` or `omega^out` in genus 0.
pub fn omega_digraph(d: &Digraph, m: u32, mode: NeighborhoodMode) -> Result<BigInt> {
    let input = GraphInput::Digraph(d.clone());
    omega_with(&input, 0, m, mode, &EngineOptions::default()).map(|r| r.value)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub genus: u32,
    pub m: u32,
    pub mode: NeighborhoodMode,
    /// Number of extra markings the genus-0 computation used, `m + 2g`.
    pub engine_m: u32,
    /// True when the value was obtained by trading genus for markings.
    pub genus_reduced: bool,
    #[serde(with = "bigint_json")]
    pub value: BigInt,
    pub stats: EngineStats,
}

/// `omega_{G,g,m}` for any `(g, m)` with `m + 2g >= 3`. The pair `(1, 0)`
/// is not covered; it is given by the derivative of the polynomial at zero.
pub fn omega_with(
    input: &GraphInput,
    genus: u32,
    m: u32,
    mode: NeighborhoodMode,
    opts: &EngineOptions,
) -> Result<OmegaReport> {
    let engine_m = m + 2 * genus;
    if engine_m < 3 {
        return Err(if (genus, m) == (1, 0) {
            Error::InvalidMarking("(g, m) = (1, 0) has no genus-0 reduction; use the derivative formula".into())
        } else {
            Error::TooFewMarkings(engine_m as usize)
        });
    }
    let problem = omega_problem(input, engine_m, mode)?;
    let mut report = OmegaReport {
        genus,
        m,
        mode,
        engine_m,
        genus_reduced: genus > 0,
        value: BigInt::zero(),
        stats: EngineStats::default(),
    };
    if opts.cerberus && !cerberus_check(&with_point_factors(&problem))? {
        report.stats.cerberus_zero = true;
        return Ok(report);
    }
    let order: Vec<u32> = problem.extra.labels().collect();
    let start = point_class_capped(&order, problem.markings, opts.term_cap)?;
    let (x, stats) = apply_constraints(start, &problem.constraints, opts)?;
    report.value = integrate(&x)?;
    report.stats = stats;
    Ok(report)
}

/// The vertex factors plus `m - 3` copies of `pi_M^* psi` for the smallest
/// extra marking. On `M_{0,M}` that power of psi and the point class are
/// both the generator of top cohomology, so this system has the same degree.
pub(crate) fn with_point_factors(problem: &OmegaProblem) -> Vec<Constraint> {
    let mut all = problem.constraints.clone();
    let first = problem.extra.labels().next().expect("at least three extra markings");
    let extra = problem.extra.len();
    all.extend((3..extra).map(|_| Constraint {
        set: problem.extra,
        point: first,
    }));
    all
}

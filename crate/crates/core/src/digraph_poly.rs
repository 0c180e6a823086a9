//! The digraph polynomials `chi^in` and `chi^out`.
//!
//! For a digraph `G` they are the monic degree-`|V|` integer polynomials with
//!
//! ```text
//! omega^in_{G,g,m} = (-1)^|V| chi^in_G(-(2g - 2 + m))
//! ```
//!
//! and likewise for `out`. Three routes compute them:
//!
//! * acyclic digraphs have the closed form `prod_v (x - indeg v)` (or
//!   `outdeg` for `out`);
//! * a sink `v` can be peeled off, `chi^in_G = (x - indeg v) chi^in_{G - v}`,
//!   and a source likewise for `out`;
//! * for anything else, the engine's `omega` values at `m = 3, ..., |V| + 3`
//!   determine the polynomial by interpolation.
//!
//! ```
//! use chromoduli::digraph_poly::{chi_acyclic, Direction};
//! use chromoduli::graph::Digraph;
//!
//! let d = Digraph::new(0..3, [(0, 1), (2, 1)])?;
//! assert_eq!(chi_acyclic(&d, Direction::In)?.to_string(), "x^3 - 2x^2");
//! assert_eq!(chi_acyclic(&d, Direction::Out)?.to_string(), "x^3 - 2x^2 + x");
//! # Ok::<(), chromoduli::Error>(())
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, GraphInput, Vertex};
use crate::moduli::{omega_with, EngineOptions, NeighborhoodMode};
use crate::polynomial::{bigint_json, IntPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn mode(self) -> NeighborhoodMode {
        match self {
            Direction::In => NeighborhoodMode::In,
            Direction::Out => NeighborhoodMode::Out,
        }
    }

    fn degree(self, d: &Digraph, v: Vertex) -> usize {
        match self {
            Direction::In => d.in_degree(v),
            Direction::Out => d.out_degree(v),
        }
    }

    /// Vertices that can be peeled: sinks for `in`, sources for `out`.
    fn peelable(self, d: &Digraph, v: Vertex) -> bool {
        match self {
            Direction::In => d.is_sink(v),
            Direction::Out => d.is_source(v),
        }
    }
}

/// `prod_v (x - deg v)` with in- or out-degrees. Only valid without
/// directed cycles.
pub fn chi_acyclic(d: &Digraph, dir: Direction) -> Result<IntPolynomial> {
    if !d.is_acyclic() {
        return Err(Error::CyclicDigraph);
    }
    Ok(d.vertices().fold(IntPolynomial::one(), |acc, v| {
        &acc * &IntPolynomial::linear(dir.degree(d, v) as i64)
    }))
}

/// Removes a sink (for `in`) or source (for `out`) and returns its linear
/// factor. `rest` is `None` when `v` was the last vertex.
pub fn peel_step(d: &Digraph, v: Vertex, dir: Direction) -> Result<(IntPolynomial, Option<Digraph>)> {
    if !d.contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    if !dir.peelable(d, v) {
        return Err(Error::NotSinkOrSource {
            vertex: v,
            role: match dir {
                Direction::In => "sink",
                Direction::Out => "source",
            },
        });
    }
    let factor = IntPolynomial::linear(dir.degree(d, v) as i64);
    Ok((factor, d.remove_vertex(v)))
}

/// Peels vertices (smallest label first) while possible. Returns the product
/// of the factors and whatever could not be peeled.
pub fn peel_all(d: &Digraph, dir: Direction) -> Result<(IntPolynomial, Option<Digraph>)> {
    let mut product = IntPolynomial::one();
    let mut rest = Some(d.clone());
    while let Some(g) = &rest {
        let Some(v) = g.vertices().find(|&v| dir.peelable(g, v)) else {
            break;
        };
        let (factor, next) = peel_step(g, v, dir)?;
        product = &product * &factor;
        rest = next;
    }
    Ok((product, rest))
}

/// `omega_{G,0,m}` in the given direction for `m = 3, ..., |V| + 3`.
pub fn omega_samples(d: &Digraph, dir: Direction, opts: &EngineOptions) -> Result<Vec<(u32, BigInt)>> {
    let n = d.vertex_count() as u32;
    let input = GraphInput::Digraph(d.clone());
    (3..=n + 3)
        .into_par_iter()
        .map(|m| omega_with(&input, 0, m, dir.mode(), opts).map(|r| (m, r.value)))
        .collect()
}

/// Interpolates `chi` through the engine's `omega` values, and checks that
/// the result is a monic integer polynomial of degree `|V|`.
pub fn chi_interpolated(d: &Digraph, dir: Direction, opts: &EngineOptions) -> Result<IntPolynomial> {
    let n = d.vertex_count();
    let sign = if n % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    let points: Vec<(BigInt, BigInt)> = omega_samples(d, dir, opts)?
        .into_iter()
        .map(|(m, w)| (-BigInt::from(m as i64 - 2), &sign * w))
        .collect();
    let p = interpolate(&points)?;
    if p.degree() != Some(n) || !p.is_monic() {
        return Err(Error::Interpolation(format!(
            "expected a monic polynomial of degree {n}, got {p}"
        )));
    }
    Ok(p)
}

/// Lagrange interpolation in exact rationals; the result must have integer
/// coefficients.
pub fn interpolate(points: &[(BigInt, BigInt)]) -> Result<IntPolynomial> {
    let n = points.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis numerator prod_{j != i} (x - x_j), lowest degree first
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let diff = BigRational::from_integer(xi - xj);
            if diff.is_zero() {
                return Err(Error::Interpolation(format!("repeated node {xi}")));
            }
            denom *= diff;
            let shift = BigRational::from_integer(xj.clone());
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, b) in basis.iter().enumerate() {
                next[d + 1] += b;
                next[d] -= b * &shift;
            }
            basis = next;
        }
        let scale = BigRational::from_integer(yi.clone()) / denom;
        for (d, b) in basis.iter().enumerate() {
            coeffs[d] += b * &scale;
        }
    }
    let ints = coeffs
        .into_iter()
        .enumerate()
        .map(|(d, c)| {
            if c.denom().is_one() {
                Ok(c.to_integer())
            } else {
                Err(Error::Interpolation(format!(
                    "coefficient of x^{d} is {c}, not an integer"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::new(ints))
}

/// `omega_{G,1,0} = (-1)^(|V| - 1) chi'(0)`.
pub fn omega_one_zero(chi: &IntPolynomial, vertex_count: usize) -> BigInt {
    let c = chi.derivative_at_zero();
    if vertex_count.is_multiple_of(2) {
        -c
    } else {
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    AcyclicFormula,
    /// Peeling down to a nonempty core, which is then interpolated.
    Peeling,
    Interpolation,
}

/// Open questions about `chi^in` and `chi^out`, checked on one polynomial.
/// A false entry is interesting, not an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Advisory {
    /// `chi(k) >= 0` for `k = 0..=|V| + 2`.
    pub nonnegative_at_small_integers: bool,
    pub alternating_signs: bool,
    pub log_concave: bool,
}

impl Advisory {
    pub fn of(chi: &IntPolynomial, vertex_count: usize) -> Self {
        Advisory {
            nonnegative_at_small_integers: (0..=vertex_count as i64 + 2).all(|k| !chi.evaluate_i64(k).is_negative()),
            alternating_signs: chi.has_alternating_signs(),
            log_concave: chi.has_log_concave_magnitudes(),
        }
    }

    pub fn all_hold(&self) -> bool {
        self.nonnegative_at_small_integers && self.alternating_signs && self.log_concave
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiReport {
    pub direction: Direction,
    pub polynomial: IntPolynomial,
    pub route: Route,
    /// Every route that was run produced this polynomial.
    pub routes_agree: bool,
    /// `omega_{G,1,0}` from the derivative at zero.
    #[serde(with = "bigint_json")]
    pub omega_one_zero: BigInt,
    pub advisory: Advisory,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphPolynomialReport {
    pub vertices: usize,
    pub arcs: usize,
    pub chi_in: ChiReport,
    pub chi_out: ChiReport,
}

/// Computes `chi` by the cheapest route. With `cross_check`, also runs the
/// engine interpolation (when it was not the main route) and the peeling
/// product (for acyclic digraphs) and records whether they agree.
pub fn chi_report(d: &Digraph, dir: Direction, cross_check: bool, opts: &EngineOptions) -> Result<ChiReport> {
    let (peeled, core) = peel_all(d, dir)?;
    let (polynomial, route, mut agree) = match &core {
        None => {
            let formula = chi_acyclic(d, dir)?;
            let agree = formula == peeled;
            (formula, Route::AcyclicFormula, agree)
        }
        Some(c) if c.vertex_count() < d.vertex_count() => {
            let p = &peeled * &chi_interpolated(c, dir, opts)?;
            (p, Route::Peeling, true)
        }
        Some(_) => (chi_interpolated(d, dir, opts)?, Route::Interpolation, true),
    };
    if cross_check && route != Route::Interpolation {
        agree &= chi_interpolated(d, dir, opts)? == polynomial;
    }
    let n = d.vertex_count();
    Ok(ChiReport {
        direction: dir,
        omega_one_zero: omega_one_zero(&polynomial, n),
        advisory: Advisory::of(&polynomial, n),
        polynomial,
        route,
        routes_agree: agree,
    })
}

pub fn digraph_polynomials(d: &Digraph, cross_check: bool, opts: &EngineOptions) -> Result<DigraphPolynomialReport> {
    let (chi_in, chi_out) = rayon::join(
        || chi_report(d, Direction::In, cross_check, opts),
        || chi_report(d, Direction::Out, cross_check, opts),
    );
    Ok(DigraphPolynomialReport {
        vertices: d.vertex_count(),
        arcs: d.arc_count(),
        chi_in: chi_in?,
        chi_out: chi_out?,
    })
}

//! The graphical arrangement with integer levels: for a graph `G` and
//! `m >= 3`, the hyperplanes `z_v = i` for every vertex `v` and
//! `i in {0, ..., m-2}`, together with `z_v = z_w` for every edge.
//!
//! Bounded chambers are enumerated two independent ways:
//!
//! * [`bounded_chambers_bijective`] builds one chamber per compatible
//!   (coloring, acyclic orientation) pair, with colors in `{1, ..., m-2}`:
//!   `sigma(v) = ceil(z_v)` and `u -> w` iff `z_u > z_w`.
//! * [`bounded_chambers_lp`] inserts hyperplanes one at a time into the open
//!   cube `(0, m-2)^V`, keeping every sign vector whose region is nonempty,
//!   with each feasibility question settled by the exact simplex in
//!   [`crate::lp`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, Vertex};
use crate::lp::{int, LinearProgram, LpOutcome, Rational};
use crate::orientation::{acyclic_orientations, Coloring, Orientation};

/// Default cap on LP solves during the sign-vector search.
pub const DEFAULT_LP_BUDGET: u128 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HyperplaneTag {
    /// `z_v - level`.
    Level { vertex: Vertex, level: u32 },
    /// `z_u - z_w` with `u < w`.
    Edge { u: Vertex, w: Vertex },
}

/// An affine function `coeffs . z + constant` on `R^V`, indexed by the
/// sorted vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFunctional {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub tag: HyperplaneTag,
}

impl AffineFunctional {
    pub fn eval(&self, z: &[Rational]) -> Rational {
        self.coeffs.iter().zip(z).map(|(a, x)| a * x).sum::<Rational>() + &self.constant
    }

    pub fn eval_f64(&self, z: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .zip(z)
            .map(|(a, x)| a.to_f64().unwrap() * x)
            .sum::<f64>()
            + self.constant.to_f64().unwrap()
    }

    fn l1_norm(&self) -> Rational {
        self.coeffs.iter().map(|a| a.abs()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn of(x: &Rational) -> Option<Sign> {
        if x.is_positive() {
            Some(Sign::Plus)
        } else if x.is_negative() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    fn factor(self) -> Rational {
        match self {
            Sign::Plus => Rational::one(),
            Sign::Minus => -Rational::one(),
        }
    }
}

/// One sign per functional, in the arrangement's order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<Sign>);

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SignVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(Error::InvalidMarking(format!("bad sign character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }
}

/// A region of the complement, with a point strictly inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chamber {
    #[serde(with = "sign_string")]
    pub signs: SignVector,
    #[serde(with = "rational_strings")]
    pub witness: Vec<Rational>,
    pub bounded: bool,
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    graph: SimpleGraph,
    m: usize,
    functionals: Vec<AffineFunctional>,
}

pub fn build_arrangement(g: &SimpleGraph, m: usize) -> Result<Arrangement> {
    if m < 3 {
        return Err(Error::TooFewMarkings(m));
    }
    let verts: Vec<Vertex> = g.vertices().collect();
    let n = verts.len();
    let unit = |k: usize| {
        let mut c = vec![Rational::zero(); n];
        c[k] = Rational::one();
        c
    };
    let mut functionals = Vec::with_capacity(n * (m - 1) + g.edge_count());
    for (k, &v) in verts.iter().enumerate() {
        for level in 0..=(m - 2) as u32 {
            functionals.push(AffineFunctional {
                coeffs: unit(k),
                constant: -int(level as i64),
                tag: HyperplaneTag::Level { vertex: v, level },
            });
        }
    }
    for e in g.edges() {
        let (a, b) = (verts.binary_search(&e.0).unwrap(), verts.binary_search(&e.1).unwrap());
        let mut coeffs = unit(a);
        coeffs[b] = -Rational::one();
        functionals.push(AffineFunctional {
            coeffs,
            constant: Rational::zero(),
            tag: HyperplaneTag::Edge { u: e.0, w: e.1 },
        });
    }
    Ok(Arrangement {
        graph: g.clone(),
        m,
        functionals,
    })
}

impl Arrangement {
    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn functionals(&self) -> &[AffineFunctional] {
        &self.functionals
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    fn level_index(&self, vertex_pos: usize, level: usize) -> usize {
        vertex_pos * (self.m - 1) + level
    }

    /// Sign vector of `z`, or the index of a hyperplane containing it.
    pub fn signs_at(&self, z: &[Rational]) -> std::result::Result<SignVector, usize> {
        self.functionals
            .iter()
            .enumerate()
            .map(|(i, h)| Sign::of(&h.eval(z)).ok_or(i))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(SignVector)
    }

    /// Margin LP over the constraints `sign_H f_H(z) >= t |a_H|_1` for the
    /// assigned entries of `signs`, `0 <= t <= 1`. Variables are
    /// `z^+ (n), z^- (n), t`.
    fn margin_lp(&self, signs: &[Option<Sign>]) -> LinearProgram {
        let n = self.dimension();
        let mut lp = LinearProgram::new(2 * n + 1);
        let mut c = vec![Rational::zero(); 2 * n + 1];
        c[2 * n] = Rational::one();
        lp.set_objective(c);
        for (h, s) in self.functionals.iter().zip(signs) {
            let Some(s) = s else { continue };
            let f = s.factor();
            let mut row = Vec::with_capacity(2 * n + 1);
            row.extend(h.coeffs.iter().map(|a| -(&f * a)));
            row.extend(h.coeffs.iter().map(|a| &f * a));
            row.push(h.l1_norm());
            lp.add_le(row, &f * &h.constant);
        }
        let mut cap = vec![Rational::zero(); 2 * n + 1];
        cap[2 * n] = Rational::one();
        lp.add_le(cap, Rational::one());
        lp
    }

    /// Chebyshev-style center: maximizes the smallest `|f_H(z)| / |a_H|_1`
    /// (capped at 1) over the region. `None` when the open region is empty.
    fn center(&self, signs: &[Option<Sign>]) -> Option<(Vec<Rational>, Rational)> {
        let n = self.dimension();
        match self.margin_lp(signs).solve() {
            LpOutcome::Optimal { x, value, .. } if value.is_positive() => {
                let z = (0..n).map(|k| &x[k] - &x[n + k]).collect();
                Some((z, value))
            }
            _ => None,
        }
    }

    /// Interior point of the region with sign vector `signs`, every
    /// functional bounded away from zero by the LP margin.
    pub fn interior_point(&self, signs: &SignVector) -> Result<Vec<Rational>> {
        self.check_len(signs)?;
        let partial: Vec<Option<Sign>> = signs.0.iter().copied().map(Some).collect();
        self.center(&partial).map(|(z, _)| z).ok_or(Error::InfeasibleChamber)
    }

    /// Certificate that a region is bounded: the recession cone
    /// `{d : sign_H a_H . d >= 0}` is `{0}`. On failure returns a nonzero ray.
    pub fn recession_ray(&self, signs: &SignVector) -> Result<Option<Vec<Rational>>> {
        self.check_len(signs)?;
        let n = self.dimension();
        for k in 0..n {
            for dir in [Rational::one(), -Rational::one()] {
                let mut lp = LinearProgram::new(2 * n);
                let mut c = vec![Rational::zero(); 2 * n];
                c[k] = dir.clone();
                c[n + k] = -dir.clone();
                lp.set_objective(c);
                for (h, s) in self.functionals.iter().zip(&signs.0) {
                    let f = s.factor();
                    let mut row = Vec::with_capacity(2 * n);
                    row.extend(h.coeffs.iter().map(|a| -(&f * a)));
                    row.extend(h.coeffs.iter().map(|a| &f * a));
                    lp.add_le(row, Rational::zero());
                }
                for j in 0..2 * n {
                    let mut row = vec![Rational::zero(); 2 * n];
                    row[j] = Rational::one();
                    lp.add_le(row, Rational::one());
                }
                if let LpOutcome::Optimal { x, value, .. } = lp.solve() {
                    if value.is_positive() {
                        return Ok(Some((0..n).map(|j| &x[j] - &x[n + j]).collect()));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_bounded(&self, signs: &SignVector) -> Result<bool> {
        Ok(self.recession_ray(signs)?.is_none())
    }

    fn check_len(&self, signs: &SignVector) -> Result<()> {
        if signs.0.len() != self.len() {
            return Err(Error::InvalidMarking(format!(
                "sign vector has {} entries, arrangement has {}",
                signs.0.len(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Builds a chamber from an interior point.
    pub fn chamber_at(&self, z: Vec<Rational>) -> Result<Chamber> {
        let signs = self.signs_at(&z).map_err(Error::OnHyperplane)?;
        let bounded = self.is_bounded(&signs)?;
        Ok(Chamber {
            signs,
            witness: z,
            bounded,
        })
    }
}

/// Chamber for a compatible pair `(sigma, O)`. Each `z_v` lies in
/// `(sigma(v) - 1, sigma(v))`; vertices sharing an interval are spaced at
/// `k / (t + 1)` so that `u -> w` puts `z_u` above `z_w`.
pub fn pair_to_chamber(a: &Arrangement, sigma: &Coloring, o: &Orientation) -> Result<Chamber> {
    let g = a.graph();
    let k = (a.m - 2) as u32;
    for v in g.vertices() {
        match sigma.get(&v) {
            Some(&c) if (1..=k).contains(&c) => {}
            _ => {
                return Err(Error::InvalidMarking(format!(
                    "coloring must send vertex {v} into 1..={k}"
                )))
            }
        }
    }
    let o = Orientation::from_arcs(g, o.arcs().to_vec())?;
    if o.arcs().iter().any(|&(u, w)| sigma[&u] < sigma[&w]) {
        return Err(Error::InvalidMarking(
            "orientation is not compatible with the coloring".into(),
        ));
    }
    let topo = o.to_digraph(g).topological_order().ok_or(Error::CyclicDigraph)?;
    let mut groups: BTreeMap<u32, Vec<Vertex>> = BTreeMap::new();
    for &v in &topo {
        groups.entry(sigma[&v]).or_default().push(v);
    }
    let verts: Vec<Vertex> = g.vertices().collect();
    let mut z = vec![Rational::zero(); verts.len()];
    for (color, members) in groups {
        let t = members.len() as i64;
        for (j, v) in members.iter().enumerate() {
            let offset = Rational::new(BigInt::from(t - j as i64), BigInt::from(t + 1));
            z[verts.binary_search(v).unwrap()] = int(color as i64 - 1) + offset;
        }
    }
    a.chamber_at(z)
}

/// Inverse of [`pair_to_chamber`]: `sigma(v) = ceil(z_v)` read off the level
/// signs, `u -> w` iff `z_u > z_w` read off the edge signs.
pub fn chamber_to_pair(a: &Arrangement, c: &Chamber) -> Result<(Coloring, Orientation)> {
    if !c.bounded {
        return Err(Error::UnboundedChamber);
    }
    a.check_len(&c.signs)?;
    let g = a.graph();
    let mut sigma = Coloring::new();
    for (pos, v) in g.vertices().enumerate() {
        let above = (0..=a.m - 2)
            .filter(|&i| c.signs.0[a.level_index(pos, i)] == Sign::Plus)
            .count() as u32;
        sigma.insert(v, above);
    }
    let base = g.vertex_count() * (a.m - 1);
    let arcs = g
        .edges()
        .enumerate()
        .map(|(i, e)| match c.signs.0[base + i] {
            Sign::Plus => (e.0, e.1),
            Sign::Minus => (e.1, e.0),
        })
        .collect();
    Ok((sigma, Orientation::from_arcs(g, arcs)?))
}

/// One chamber per compatible pair `(sigma: V -> {1..m-2}, O acyclic)`,
/// sorted by sign vector.
pub fn bounded_chambers_bijective(g: &SimpleGraph, m: usize, budget: u128) -> Result<Vec<Chamber>> {
    let a = build_arrangement(g, m)?;
    let k = (m - 2) as u32;
    let n = g.vertex_count() as u32;
    let needed = (k as u128)
        .checked_pow(n)
        .and_then(|c| c.checked_mul(1u128.checked_shl(g.edge_count() as u32)?))
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "bijective chamber construction",
            needed,
            budget,
        });
    }
    let orientations = acyclic_orientations(g, budget)?;
    let verts: Vec<Vertex> = g.vertices().collect();
    let mut colorings = Vec::new();
    let mut digits = vec![1u32; verts.len()];
    loop {
        colorings.push(digits.clone());
        let Some(pos) = digits.iter().position(|&d| d < k) else {
            break;
        };
        digits[pos] += 1;
        digits[..pos].iter_mut().for_each(|d| *d = 1);
    }
    let mut chambers: Vec<Chamber> = colorings
        .par_iter()
        .flat_map_iter(|digits| {
            let sigma: Coloring = verts.iter().copied().zip(digits.iter().copied()).collect();
            orientations
                .iter()
                .filter(|o| o.arcs().iter().all(|&(u, w)| sigma[&u] >= sigma[&w]))
                .map(|o| pair_to_chamber(&a, &sigma, o))
                .collect::<Vec<_>>()
        })
        .collect::<Result<_>>()?;
    chambers.sort_by(|x, y| x.signs.cmp(&y.signs));
    let before = chambers.len();
    chambers.dedup_by(|x, y| x.signs == y.signs);
    debug_assert_eq!(before, chambers.len(), "pairs must give distinct chambers");
    Ok(chambers)
}

/// All bounded chambers by incremental sign-vector search inside the cube
/// `(0, m-2)^V`, sorted by sign vector. Witnesses are the LP centers.
pub fn bounded_chambers_lp(a: &Arrangement, budget: u128) -> Result<Vec<Chamber>> {
    let n = a.dimension();
    let top = a.m - 2;
    let mut base: Vec<Option<Sign>> = vec![None; a.len()];
    for pos in 0..n {
        base[a.level_index(pos, 0)] = Some(Sign::Plus);
        base[a.level_index(pos, top)] = Some(Sign::Minus);
    }
    let rest: Vec<usize> = (0..a.len()).filter(|&i| base[i].is_none()).collect();
    let (start, _) = a.center(&base).ok_or(Error::InfeasibleChamber)?;

    let mut solves: u128 = 1;
    let mut regions = vec![(base, start)];
    for &h in &rest {
        solves += regions.len() as u128;
        if solves > budget {
            return Err(Error::BudgetExceeded {
                what: "sign-vector search",
                needed: solves,
                budget,
            });
        }
        let functional = &a.functionals[h];
        regions = regions
            .into_par_iter()
            .flat_map_iter(|(signs, witness)| {
                let mut out = Vec::with_capacity(2);
                let here = Sign::of(&functional.eval(&witness));
                for s in [Sign::Minus, Sign::Plus] {
                    let mut next = signs.clone();
                    next[h] = Some(s);
                    if here == Some(s) {
                        out.push((next, witness.clone()));
                    } else if let Some((z, _)) = a.center(&next) {
                        out.push((next, z));
                    }
                }
                out
            })
            .collect();
    }

    let mut chambers: Vec<Chamber> = regions
        .into_par_iter()
        .map(|(signs, _)| {
            let signs = SignVector(signs.into_iter().map(Option::unwrap).collect());
            let witness = a.interior_point(&signs)?;
            let bounded = a.is_bounded(&signs)?;
            Ok(Chamber {
                signs,
                witness,
                bounded,
            })
        })
        .collect::<Result<_>>()?;
    chambers.sort_by(|x, y| x.signs.cmp(&y.signs));
    Ok(chambers)
}

/// Formats a rational as `"p/q"`.
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    let q: BigInt = q.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if q.is_zero() {
        return Err(format!("{s:?}: zero denominator"));
    }
    Ok(Rational::new(p, q))
}

mod sign_string {
    use super::SignVector;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &SignVector, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<SignVector, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod rational_strings {
    use super::{parse_rational, rational_to_string, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(rational_to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::chromatic_polynomial;
    use crate::lp::rat;
    use crate::orientation::DEFAULT_BUDGET;
    use std::collections::BTreeSet;

    fn fig1() -> SimpleGraph {
        SimpleGraph::new(0..4, [(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap()
    }

    fn expected_count(g: &SimpleGraph, m: usize) -> i64 {
        let v = chromatic_polynomial(g).evaluate_i64(-(m as i64 - 2));
        let v: i64 = v.try_into().unwrap();
        if g.vertex_count().is_multiple_of(2) {
            v
        } else {
            -v
        }
    }

    #[test]
    fn functional_counts() {
        let single = SimpleGraph::edgeless(1);
        let a = build_arrangement(&single, 3).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.functionals()[1].constant, int(-1));
        assert_eq!(build_arrangement(&SimpleGraph::complete(2), 3).unwrap().len(), 5);
        let f = build_arrangement(&fig1(), 3).unwrap();
        assert_eq!(f.len(), 12);
        for m in 3..7 {
            let g = fig1();
            assert_eq!(
                build_arrangement(&g, m).unwrap().len(),
                g.edge_count() + (m - 1) * g.vertex_count()
            );
        }
        assert!(matches!(build_arrangement(&single, 2), Err(Error::TooFewMarkings(2))));
    }

    #[test]
    fn edge_functional_shape() {
        let a = build_arrangement(&SimpleGraph::complete(2), 3).unwrap();
        let e = &a.functionals()[4];
        assert_eq!(e.tag, HyperplaneTag::Edge { u: 0, w: 1 });
        assert_eq!(e.coeffs, vec![int(1), int(-1)]);
        assert_eq!(e.constant, int(0));
    }

    #[test]
    fn single_vertex_chamber() {
        let g = SimpleGraph::edgeless(1);
        let a = build_arrangement(&g, 3).unwrap();
        let bij = bounded_chambers_bijective(&g, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(bij.len(), 1);
        assert_eq!(bij[0].witness, vec![rat(1, 2)]);
        let lp = bounded_chambers_lp(&a, DEFAULT_LP_BUDGET).unwrap();
        assert_eq!(lp.len(), 1);
        assert_eq!(lp[0].witness, vec![rat(1, 2)]);
        let (sigma, o) = chamber_to_pair(&a, &lp[0]).unwrap();
        assert_eq!(sigma, Coloring::from([(0, 1)]));
        assert!(o.arcs().is_empty());
    }

    #[test]
    fn k2_chambers_and_center() {
        let g = SimpleGraph::complete(2);
        let a = build_arrangement(&g, 3).unwrap();
        let chambers = bounded_chambers_lp(&a, DEFAULT_LP_BUDGET).unwrap();
        assert_eq!(chambers.len(), 2);
        // 0 < z_u < z_w < 1
        let c = a.chamber_at(vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert!(chambers.iter().any(|x| x.signs == c.signs));
        assert_eq!(a.interior_point(&c.signs).unwrap(), vec![rat(1, 4), rat(3, 4)]);
        let (sigma, o) = chamber_to_pair(&a, &c).unwrap();
        assert_eq!(sigma, Coloring::from([(0, 1), (1, 1)]));
        assert_eq!(o.arcs(), &[(1, 0)]);
    }

    #[test]
    fn interior_point_keeps_signs() {
        let a = build_arrangement(&fig1(), 4).unwrap();
        for c in bounded_chambers_bijective(&fig1(), 4, DEFAULT_BUDGET).unwrap() {
            let z = a.interior_point(&c.signs).unwrap();
            assert_eq!(a.signs_at(&z).unwrap(), c.signs);
            assert_eq!(a.signs_at(&c.witness).unwrap(), c.signs);
        }
    }

    #[test]
    fn infeasible_sign_vector() {
        let a = build_arrangement(&SimpleGraph::edgeless(1), 3).unwrap();
        // z < 0 and z > 1
        let bad: SignVector = "-+".parse().unwrap();
        assert_eq!(a.interior_point(&bad), Err(Error::InfeasibleChamber));
    }

    #[test]
    fn unbounded_chamber_rejected() {
        let a = build_arrangement(&SimpleGraph::edgeless(1), 3).unwrap();
        let c = a.chamber_at(vec![int(5)]).unwrap();
        assert!(!c.bounded);
        assert!(a.recession_ray(&c.signs).unwrap().is_some());
        assert_eq!(chamber_to_pair(&a, &c), Err(Error::UnboundedChamber));
    }

    #[test]
    fn edgeless_counts() {
        for n in 1..=3u32 {
            for m in 3..=5usize {
                let g = SimpleGraph::edgeless(n);
                let c = bounded_chambers_bijective(&g, m, DEFAULT_BUDGET).unwrap();
                assert_eq!(c.len(), (m - 2).pow(n));
            }
        }
    }

    #[test]
    fn flagship_counts() {
        let g = fig1();
        assert_eq!(bounded_chambers_bijective(&g, 3, DEFAULT_BUDGET).unwrap().len(), 12);
        let a = build_arrangement(&g, 3).unwrap();
        assert_eq!(bounded_chambers_lp(&a, DEFAULT_LP_BUDGET).unwrap().len(), 12);
    }

    #[test]
    fn both_methods_agree_on_small_graphs() {
        for n in 1..=4u32 {
            let pairs: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
            for mask in (0u32..1 << pairs.len()).step_by(5) {
                let edges = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p);
                let g = SimpleGraph::new(0..n, edges).unwrap();
                for m in [3, 4] {
                    let a = build_arrangement(&g, m).unwrap();
                    let bij = bounded_chambers_bijective(&g, m, DEFAULT_BUDGET).unwrap();
                    let lp = bounded_chambers_lp(&a, DEFAULT_LP_BUDGET).unwrap();
                    assert_eq!(bij.len() as i64, expected_count(&g, m));
                    let s1: BTreeSet<_> = bij.iter().map(|c| &c.signs).collect();
                    let s2: BTreeSet<_> = lp.iter().map(|c| &c.signs).collect();
                    assert_eq!(s1, s2);
                    let top = int(m as i64 - 2);
                    for c in bij.iter().chain(&lp) {
                        assert!(c.bounded);
                        assert!(c.witness.iter().all(|x| x.is_positive() && *x < top));
                    }
                }
            }
        }
    }

    #[test]
    fn round_trip_on_triangle() {
        let g = SimpleGraph::complete(3);
        let a = build_arrangement(&g, 3).unwrap();
        let chambers = bounded_chambers_lp(&a, DEFAULT_LP_BUDGET).unwrap();
        assert_eq!(chambers.len(), 6);
        for c in &chambers {
            let (sigma, o) = chamber_to_pair(&a, c).unwrap();
            let back = pair_to_chamber(&a, &sigma, &o).unwrap();
            assert_eq!(back.signs, c.signs);
            assert_eq!(chamber_to_pair(&a, &back).unwrap(), (sigma, o));
        }
    }

    #[test]
    fn chamber_json_format() {
        let g = SimpleGraph::complete(2);
        let a = build_arrangement(&g, 3).unwrap();
        let c = a.chamber_at(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"signs":"+-+--","witness":["1/4","3/4"],"bounded":true}"#);
        assert_eq!(serde_json::from_str::<Chamber>(&s).unwrap(), c);
    }
}

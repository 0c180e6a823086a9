//! Critical points of the master function `F = prod_H f_H^{u_H}` on the
//! graphical arrangement with levels.
//!
//! For positive weights there is exactly one critical point in each bounded
//! chamber, and none elsewhere. On a fixed chamber every `log |f_H|` is
//! concave, and the level hyperplanes make the sum strictly concave, so the
//! critical point is the unique maximizer of
//!
//! ```text
//! L(z) = sum_H u_H log |f_H(z)|
//! ```
//!
//! on that chamber. Damped Newton with a chamber-preserving backtracking
//! line search finds it from the LP center of the chamber.

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{bounded_chambers_bijective, build_arrangement, Arrangement, Chamber, Sign};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

pub const GRADIENT_TOLERANCE: f64 = 1e-10;
pub const MAX_NEWTON_ITERATIONS: usize = 200;
pub const ARMIJO: f64 = 1e-4;
pub const STEP_SHRINK: f64 = 0.5;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Strictly positive weight per functional of an arrangement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(u: Vec<f64>) -> Result<Self> {
        if let Some(bad) = u.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {bad} is not positive")));
        }
        Ok(WeightVector(u))
    }

    /// Uniform on `[1/2, 2]`, reproducible from `seed`.
    pub fn sample(len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        WeightVector((0..len).map(|_| rng.gen_range(0.5..=2.0)).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointReport {
    pub chamber: usize,
    pub signs: String,
    pub point: Vec<f64>,
    pub gradient_inf_norm: f64,
    pub hessian_negdef: bool,
    pub iterations: usize,
}

fn check_weights(a: &Arrangement, u: &WeightVector) -> Result<()> {
    if u.len() != a.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} hyperplanes",
            u.len(),
            a.len()
        )));
    }
    Ok(())
}

/// Values `f_H(z)`, failing if any vanishes.
fn functional_values(a: &Arrangement, z: &[f64]) -> Result<Vec<f64>> {
    a.functionals()
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let v = h.eval_f64(z);
            if v == 0.0 {
                Err(Error::OnHyperplane(i))
            } else {
                Ok(v)
            }
        })
        .collect()
}

/// `sum_H u_H log |f_H(z)|`.
pub fn log_master(a: &Arrangement, u: &WeightVector, z: &[f64]) -> Result<f64> {
    check_weights(a, u)?;
    let f = functional_values(a, z)?;
    Ok(f.iter().zip(u.as_slice()).map(|(v, w)| w * v.abs().ln()).sum())
}

/// Logarithmic derivatives: component `v` is
/// `sum_i u_{v,i} / (z_v - i) + sum_{edges at v} +- u_e / (z_v - z_w)`.
pub fn gradient(a: &Arrangement, u: &WeightVector, z: &[f64]) -> Result<Vec<f64>> {
    check_weights(a, u)?;
    let f = functional_values(a, z)?;
    let mut g = vec![0.0; z.len()];
    for ((h, v), w) in a.functionals().iter().zip(&f).zip(u.as_slice()) {
        for (k, c) in h.coeffs.iter().enumerate() {
            let c = c.to_f64().unwrap();
            if c != 0.0 {
                g[k] += w * c / v;
            }
        }
    }
    Ok(g)
}

/// `-sum_H u_H a_H a_H^T / f_H(z)^2`.
pub fn hessian(a: &Arrangement, u: &WeightVector, z: &[f64]) -> Result<DMatrix<f64>> {
    check_weights(a, u)?;
    let f = functional_values(a, z)?;
    let n = z.len();
    let mut h = DMatrix::zeros(n, n);
    for ((fun, v), w) in a.functionals().iter().zip(&f).zip(u.as_slice()) {
        let coeffs: Vec<f64> = fun.coeffs.iter().map(|c| c.to_f64().unwrap()).collect();
        let s = w / (v * v);
        for i in 0..n {
            if coeffs[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                h[(i, j)] -= s * coeffs[i] * coeffs[j];
            }
        }
    }
    Ok(h)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn inside(a: &Arrangement, c: &Chamber, z: &[f64]) -> bool {
    a.functionals().iter().zip(&c.signs.0).all(|(h, s)| {
        let v = h.eval_f64(z);
        match s {
            Sign::Plus => v > 0.0,
            Sign::Minus => v < 0.0,
        }
    })
}

/// Damped Newton maximization of [`log_master`] on chamber `c`.
pub fn solve_chamber(a: &Arrangement, u: &WeightVector, c: &Chamber, id: usize) -> Result<CriticalPointReport> {
    check_weights(a, u)?;
    if !c.bounded {
        return Err(Error::UnboundedChamber);
    }
    let seed = a.interior_point(&c.signs)?;
    let mut z: Vec<f64> = seed.iter().map(|q| q.to_f64().unwrap()).collect();
    let mut value = log_master(a, u, &z)?;
    let mut grad = gradient(a, u, &z)?;
    let mut iterations = 0;
    while inf_norm(&grad) > GRADIENT_TOLERANCE {
        if iterations == MAX_NEWTON_ITERATIONS {
            return Err(Error::NoConvergence {
                chamber: id,
                grad_norm: inf_norm(&grad),
            });
        }
        iterations += 1;
        let neg_h = -hessian(a, u, &z)?;
        let g = DVector::from_column_slice(&grad);
        let step = match neg_h.cholesky() {
            Some(ch) => ch.solve(&g),
            // Not expected on a chamber; fall back to gradient ascent.
            None => g.clone(),
        };
        let slope = g.dot(&step);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = z.iter().zip(step.iter()).map(|(x, d)| x + t * d).collect();
            if inside(a, c, &trial) {
                let v = log_master(a, u, &trial)?;
                let gain = ARMIJO * t * slope;
                // Below roundoff in the objective, fall back to the gradient norm.
                let accept = if gain <= 8.0 * f64::EPSILON * value.abs().max(1.0) {
                    inf_norm(&gradient(a, u, &trial)?) < inf_norm(&grad)
                } else {
                    v >= value + gain
                };
                if accept {
                    z = trial;
                    value = v;
                    break;
                }
            }
            t *= STEP_SHRINK;
            if t < 1e-30 {
                return Err(Error::NoConvergence {
                    chamber: id,
                    grad_norm: inf_norm(&grad),
                });
            }
        }
        grad = gradient(a, u, &z)?;
    }
    let hessian_negdef = (-hessian(a, u, &z)?).cholesky().is_some();
    Ok(CriticalPointReport {
        chamber: id,
        signs: c.signs.to_string(),
        point: z,
        gradient_inf_norm: inf_norm(&grad),
        hessian_negdef,
        iterations,
    })
}

/// Solves every chamber; results are in chamber order.
pub fn solve_all(a: &Arrangement, u: &WeightVector, chambers: &[Chamber]) -> Vec<Result<CriticalPointReport>> {
    chambers
        .par_iter()
        .enumerate()
        .map(|(id, c)| solve_chamber(a, u, c, id))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointCount {
    pub count: usize,
    pub reports: Vec<CriticalPointReport>,
    pub failures: Vec<String>,
}

/// Number of certified critical points, one solve per bounded chamber.
pub fn count_critical_points(g: &SimpleGraph, m: usize, u: &WeightVector, budget: u128) -> Result<CriticalPointCount> {
    let a = build_arrangement(g, m)?;
    check_weights(&a, u)?;
    let chambers = bounded_chambers_bijective(g, m, budget)?;
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for r in solve_all(&a, u, &chambers) {
        match r {
            Ok(rep) if rep.hessian_negdef && rep.gradient_inf_norm <= GRADIENT_TOLERANCE => reports.push(rep),
            Ok(rep) => failures.push(format!("chamber {}: certificate failed", rep.chamber)),
            Err(e) => failures.push(e.to_string()),
        }
    }
    Ok(CriticalPointCount {
        count: reports.len(),
        reports,
        failures,
    })
}

/// Whether the coordinates of `z` are pairwise at least `margin` apart and
/// at least `margin` away from every level `0, ..., m-2`.
pub fn avoids_complete_arrangement(z: &[f64], m: usize, margin: f64) -> bool {
    let distinct = z
        .iter()
        .enumerate()
        .all(|(i, x)| z[i + 1..].iter().all(|y| (x - y).abs() >= margin));
    let off_levels = z.iter().all(|x| (0..=m - 2).all(|l| (x - l as f64).abs() >= margin));
    distinct && off_levels
}

/// Residual of the in-neighbor-only analogue of the logarithmic derivative:
/// component `v` keeps the level terms and, for each arc `w -> v`, the term
/// `u_e / (z_v - z_w)`.
///
/// Experimental. Nothing here claims its zeros are counted by the
/// in-polynomial; it exists so that question can be probed numerically.
pub fn experimental_in_residual(
    d: &crate::graph::Digraph,
    m: usize,
    level_weights: &[f64],
    arc_weights: &[f64],
    z: &[f64],
) -> Result<Vec<f64>> {
    let verts: Vec<u32> = d.vertices().collect();
    let n = verts.len();
    if level_weights.len() != n * (m - 1) || arc_weights.len() != d.arc_count() {
        return Err(Error::InvalidWeights("wrong number of weights".into()));
    }
    let mut r = vec![0.0; n];
    for k in 0..n {
        for l in 0..=m - 2 {
            r[k] += level_weights[k * (m - 1) + l] / (z[k] - l as f64);
        }
    }
    for ((w, v), u) in d.arcs().zip(arc_weights) {
        let (kw, kv) = (verts.binary_search(&w).unwrap(), verts.binary_search(&v).unwrap());
        r[kv] += u / (z[kv] - z[kw]);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{bounded_chambers_lp, DEFAULT_LP_BUDGET};
    use crate::orientation::DEFAULT_BUDGET;

    fn fig1() -> SimpleGraph {
        SimpleGraph::new(0..4, [(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap()
    }

    fn single(m: usize) -> (Arrangement, Vec<Chamber>) {
        let g = SimpleGraph::edgeless(1);
        let a = build_arrangement(&g, m).unwrap();
        let c = bounded_chambers_lp(&a, DEFAULT_LP_BUDGET).unwrap();
        (a, c)
    }

    #[test]
    fn single_vertex_critical_point() {
        let (a, c) = single(3);
        let u = WeightVector::new(vec![1.0, 1.0]).unwrap();
        let r = solve_chamber(&a, &u, &c[0], 0).unwrap();
        assert!((r.point[0] - 0.5).abs() < 1e-12);
        let u = WeightVector::new(vec![2.0, 1.0]).unwrap();
        let r = solve_chamber(&a, &u, &c[0], 0).unwrap();
        assert!((r.point[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!(r.hessian_negdef);
    }

    #[test]
    fn single_vertex_gradient_zero() {
        let (a, _) = single(3);
        let u = WeightVector::new(vec![1.5, 0.7]).unwrap();
        let z0 = 1.5 / (1.5 + 0.7);
        assert!(gradient(&a, &u, &[z0]).unwrap()[0].abs() < 1e-12);
        assert!(gradient(&a, &u, &[0.3]).unwrap()[0].abs() > 1e-3);
    }

    #[test]
    fn log_master_values() {
        let (a, _) = single(3);
        let u = WeightVector::new(vec![1.0, 1.0]).unwrap();
        let v = log_master(&a, &u, &[0.5]).unwrap();
        assert!((v - 2.0 * 0.5f64.ln()).abs() < 1e-15);
        // decreasing toward the wall at 0
        let mut prev = v;
        for k in 1..20 {
            let z = 0.5 * 0.5f64.powi(k);
            let cur = log_master(&a, &u, &[z]).unwrap();
            assert!(cur < prev);
            prev = cur;
        }
        assert!(prev < -10.0);
        assert!(matches!(log_master(&a, &u, &[1.0]), Err(Error::OnHyperplane(1))));

        let k2 = build_arrangement(&SimpleGraph::complete(2), 3).unwrap();
        let sym = WeightVector::new(vec![1.0; 5]).unwrap();
        let x = log_master(&k2, &sym, &[0.25, 0.75]).unwrap();
        let y = log_master(&k2, &sym, &[0.75, 0.25]).unwrap();
        assert!((x - y).abs() < 1e-15);
    }

    #[test]
    fn edgeless_gradient_decouples() {
        let g = SimpleGraph::edgeless(3);
        let a = build_arrangement(&g, 4).unwrap();
        let u = WeightVector::sample(a.len(), 7);
        let z = [0.3, 1.7, 2.2];
        let full = gradient(&a, &u, &z).unwrap();
        for k in 0..3 {
            let single = build_arrangement(&SimpleGraph::edgeless(1), 4).unwrap();
            let uk = WeightVector::new(u.as_slice()[3 * k..3 * k + 3].to_vec()).unwrap();
            let g1 = gradient(&single, &uk, &[z[k]]).unwrap();
            assert!((g1[0] - full[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn gradient_matches_explicit_formula() {
        let g = fig1();
        let m = 4;
        let a = build_arrangement(&g, m).unwrap();
        let u = WeightVector::sample(a.len(), 3);
        let z = [0.31, 1.42, 0.77, 1.93];
        let grad = gradient(&a, &u, &z).unwrap();
        let w = u.as_slice();
        let mut expect = [0.0; 4];
        for v in 0..4 {
            for i in 0..=m - 2 {
                expect[v] += w[v * (m - 1) + i] / (z[v] - i as f64);
            }
        }
        for (k, e) in g.edges().enumerate() {
            let t = w[4 * (m - 1) + k] / (z[e.0 as usize] - z[e.1 as usize]);
            expect[e.0 as usize] += t;
            expect[e.1 as usize] -= t;
        }
        for v in 0..4 {
            assert!((grad[v] - expect[v]).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in [fig1(), SimpleGraph::complete(3), SimpleGraph::edgeless(2)] {
            let a = build_arrangement(&g, 4).unwrap();
            let u = WeightVector::sample(a.len(), 5);
            let chambers = bounded_chambers_bijective(&g, 4, DEFAULT_BUDGET).unwrap();
            for _ in 0..100 {
                let c = &chambers[rng.gen_range(0..chambers.len())];
                let z: Vec<f64> = c.witness.iter().map(|q| q.to_f64().unwrap()).collect();
                let grad = gradient(&a, &u, &z).unwrap();
                let h = 1e-7;
                for k in 0..z.len() {
                    let mut p = z.clone();
                    let mut q = z.clone();
                    p[k] += h;
                    q[k] -= h;
                    let fd = (log_master(&a, &u, &p).unwrap() - log_master(&a, &u, &q).unwrap()) / (2.0 * h);
                    let rel = (fd - grad[k]).abs() / grad[k].abs().max(1.0);
                    assert!(rel <= 1e-6, "rel error {rel}");
                }
            }
        }
    }

    #[test]
    fn k2_two_reports() {
        let g = SimpleGraph::complete(2);
        let a = build_arrangement(&g, 3).unwrap();
        let u = WeightVector::sample(a.len(), 1);
        let r = count_critical_points(&g, 3, &u, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.count, 2);
        assert!(r.failures.is_empty());
        for rep in &r.reports {
            assert!(rep.gradient_inf_norm <= GRADIENT_TOLERANCE && rep.hessian_negdef);
        }
        let _ = a;
    }

    #[test]
    fn flagship_and_complete_graph_counts() {
        for (g, want) in [
            (SimpleGraph::complete(3), 6),
            (SimpleGraph::complete(4), 24),
            (fig1(), 12),
        ] {
            let a = build_arrangement(&g, 3).unwrap();
            let u = WeightVector::sample(a.len(), DEFAULT_SEED);
            let r = count_critical_points(&g, 3, &u, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.count, want, "{:?}", r.failures);
            for rep in &r.reports {
                assert!(avoids_complete_arrangement(&rep.point, 3, 1e-8));
            }
            for (i, p) in r.reports.iter().enumerate() {
                for q in &r.reports[i + 1..] {
                    let d = p
                        .point
                        .iter()
                        .zip(&q.point)
                        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                    assert!(d >= 1e-8);
                }
            }
        }
    }

    #[test]
    fn weights_are_validated() {
        assert!(WeightVector::new(vec![1.0, 0.0]).is_err());
        assert!(WeightVector::new(vec![1.0, f64::NAN]).is_err());
        let (a, c) = single(3);
        let u = WeightVector::new(vec![1.0; 3]).unwrap();
        assert!(matches!(solve_chamber(&a, &u, &c[0], 0), Err(Error::InvalidWeights(_))));
        let s = WeightVector::sample(10, 4);
        assert!(s.as_slice().iter().all(|x| (0.5..=2.0).contains(x)));
        assert_eq!(s, WeightVector::sample(10, 4));
    }

    #[test]
    fn experimental_residual_shape() {
        let d = crate::graph::Digraph::new(0..3, [(0, 1), (2, 1)]).unwrap();
        let r = experimental_in_residual(&d, 3, &[1.0; 6], &[1.0; 2], &[0.2, 0.5, 0.8]).unwrap();
        // vertex 0 has no in-arcs: only its two level terms
        assert!((r[0] - (1.0 / 0.2 + 1.0 / (0.2 - 1.0))).abs() < 1e-12);
        assert!(experimental_in_residual(&d, 3, &[1.0; 5], &[1.0; 2], &[0.2, 0.5, 0.8]).is_err());
    }
}

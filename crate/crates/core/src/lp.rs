//! Exact rational linear programming: a dense two-phase tableau simplex
//! with Bland's pivoting rule.
//!
//! Problems are in the inequality form
//!
//! ```text
//! maximize    c . x
//! subject to  A x <= b,   x >= 0
//! ```
//!
//! and every answer carries a certificate that can be re-checked by
//! substitution: an optimal solution comes with a dual vector, an infeasible
//! problem with a Farkas vector, an unbounded one with a feasible point and
//! an improving ray.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// `dual` is `y >= 0` with `A^T y >= c` and `b . y = value`.
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        dual: Vec<Rational>,
    },
    /// `farkas` is `y >= 0` with `A^T y >= 0` and `b . y < 0`.
    Infeasible { farkas: Vec<Rational> },
    /// `x` is feasible; `ray >= 0` has `A ray <= 0` and `c . ray > 0`.
    Unbounded { x: Vec<Rational>, ray: Vec<Rational> },
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn set_objective(&mut self, c: Vec<Rational>) {
        assert_eq!(c.len(), self.num_vars);
        self.objective = c;
    }

    /// Adds `a . x <= b`.
    pub fn add_le(&mut self, a: Vec<Rational>, b: Rational) {
        assert_eq!(a.len(), self.num_vars);
        self.rows.push(a);
        self.rhs.push(b);
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }

    fn row_dot(&self, i: usize, x: &[Rational]) -> Rational {
        dot(&self.rows[i], x)
    }

    /// Re-checks a claimed outcome against the problem data.
    pub fn verify(&self, outcome: &LpOutcome) -> bool {
        let m = self.rows.len();
        let at_y = |y: &[Rational]| -> Vec<Rational> {
            (0..self.num_vars)
                .map(|j| (0..m).map(|i| &self.rows[i][j] * &y[i]).sum())
                .collect()
        };
        let feasible = |x: &[Rational]| {
            x.len() == self.num_vars
                && x.iter().all(|v| !v.is_negative())
                && (0..m).all(|i| self.row_dot(i, x) <= self.rhs[i])
        };
        match outcome {
            LpOutcome::Optimal { x, value, dual } => {
                dual.len() == m
                    && feasible(x)
                    && dot(&self.objective, x) == *value
                    && dual.iter().all(|v| !v.is_negative())
                    && at_y(dual).iter().zip(&self.objective).all(|(l, c)| l >= c)
                    && dot(&self.rhs, dual) == *value
            }
            LpOutcome::Infeasible { farkas } => {
                farkas.len() == m
                    && farkas.iter().all(|v| !v.is_negative())
                    && at_y(farkas).iter().all(|v| !v.is_negative())
                    && dot(&self.rhs, farkas).is_negative()
            }
            LpOutcome::Unbounded { x, ray } => {
                feasible(x)
                    && ray.len() == self.num_vars
                    && ray.iter().all(|v| !v.is_negative())
                    && (0..m).all(|i| !self.row_dot(i, ray).is_positive())
                    && dot(&self.objective, ray).is_positive()
            }
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Columns: structural `0..n`, slacks `n..n+m`, artificials after that.
struct Tableau {
    n: usize,
    m: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    artificial: Vec<bool>,
}

enum PhaseResult {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let m = lp.rows.len();
        let n_art = lp.rhs.iter().filter(|b| b.is_negative()).count();
        let width = n + m + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut artificial = vec![false; width];
        let mut next_art = n + m;
        for i in 0..m {
            let mut row = vec![Rational::zero(); width];
            let negate = lp.rhs[i].is_negative();
            for (slot, a) in row.iter_mut().zip(&lp.rows[i]) {
                *slot = if negate { -a } else { a.clone() };
            }
            if negate {
                row[n + i] = -Rational::one();
                row[next_art] = Rational::one();
                artificial[next_art] = true;
                basis.push(next_art);
                next_art += 1;
                rhs.push(-&lp.rhs[i]);
            } else {
                row[n + i] = Rational::one();
                basis.push(n + i);
                rhs.push(lp.rhs[i].clone());
            }
            rows.push(row);
        }
        Tableau {
            n,
            m,
            rows,
            rhs,
            basis,
            artificial,
        }
    }

    fn width(&self) -> usize {
        self.artificial.len()
    }

    /// Reduced costs `c_j - c_B B^{-1} A_j` for the cost vector `cost`.
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                if !self.rows[i][j].is_zero() {
                    *dj -= &cost[b] * &self.rows[i][j];
                }
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        for i in 0..self.m {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for j in 0..self.width() {
                if !self.rows[r][j].is_zero() {
                    let delta = &f * &self.rows[r][j];
                    self.rows[i][j] -= delta;
                }
            }
            let delta = &f * &self.rhs[r];
            self.rhs[i] -= delta;
        }
        self.basis[r] = col;
    }

    /// Primal simplex maximizing `cost`, restricted to columns in `allowed`.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> PhaseResult {
        loop {
            let d = self.reduced_costs(cost);
            // Bland: smallest eligible entering index...
            let Some(col) = (0..self.width()).find(|&j| allowed[j] && d[j].is_positive()) else {
                return PhaseResult::Optimal;
            };
            // ...and smallest basic index among ratio-test ties.
            let mut best: Option<(Rational, usize, usize)> = None;
            for i in 0..self.m {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            match best {
                None => return PhaseResult::Unbounded(col),
                Some((_, r, _)) => self.pivot(r, col),
            }
        }
    }

    fn primal(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }

    /// Dual value of original row `i` is minus the reduced cost of its slack.
    fn duals(&self, cost: &[Rational]) -> Vec<Rational> {
        let d = self.reduced_costs(cost);
        (0..self.m).map(|i| -&d[self.n + i]).collect()
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let width = self.width();
        if self.artificial.iter().any(|&a| a) {
            let cost: Vec<Rational> = (0..width)
                .map(|j| {
                    if self.artificial[j] {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let everything = vec![true; width];
            // Phase one is bounded above by zero, so it always stops.
            let _ = self.optimize(&cost, &everything);
            let infeasibility: Rational = self
                .basis
                .iter()
                .zip(&self.rhs)
                .filter(|(&b, _)| self.artificial[b])
                .map(|(_, v)| v.clone())
                .sum();
            if infeasibility.is_positive() {
                return LpOutcome::Infeasible {
                    farkas: self.duals(&cost),
                };
            }
            // Drive zero-level artificials out of the basis where possible.
            for r in 0..self.m {
                if !self.artificial[self.basis[r]] {
                    continue;
                }
                if let Some(col) = (0..self.n + self.m).find(|&j| !self.rows[r][j].is_zero()) {
                    self.pivot(r, col);
                }
            }
        }

        let mut cost = vec![Rational::zero(); width];
        cost[..self.n].clone_from_slice(&lp.objective);
        let allowed: Vec<bool> = self.artificial.iter().map(|a| !a).collect();
        match self.optimize(&cost, &allowed) {
            PhaseResult::Optimal => {
                let x = self.primal();
                let value = dot(&lp.objective, &x);
                LpOutcome::Optimal {
                    dual: self.duals(&cost),
                    x,
                    value,
                }
            }
            PhaseResult::Unbounded(col) => {
                let x = self.primal();
                let mut ray = vec![Rational::zero(); self.n];
                if col < self.n {
                    ray[col] = Rational::one();
                }
                for (i, &b) in self.basis.iter().enumerate() {
                    if b < self.n {
                        ray[b] = -&self.rows[i][col];
                    }
                }
                LpOutcome::Unbounded { x, ray }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.set_objective(ints(&[3, 5]));
        lp.add_le(ints(&[1, 0]), int(4));
        lp.add_le(ints(&[0, 2]), int(12));
        lp.add_le(ints(&[3, 2]), int(18));
        let out = lp.solve();
        assert!(lp.verify(&out));
        match out {
            LpOutcome::Optimal { x, value, .. } => {
                assert_eq!(x, ints(&[2, 6]));
                assert_eq!(value, int(36));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn needs_phase_one() {
        // max -x - y with x + y >= 2, x <= 3: optimum -2
        let mut lp = LinearProgram::new(2);
        lp.set_objective(ints(&[-1, -1]));
        lp.add_le(ints(&[-1, -1]), int(-2));
        lp.add_le(ints(&[1, 0]), int(3));
        let out = lp.solve();
        assert!(lp.verify(&out));
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == int(-2)));
    }

    #[test]
    fn infeasible_has_farkas_certificate() {
        // x >= 2 and x <= 1
        let mut lp = LinearProgram::new(1);
        lp.add_le(ints(&[-1]), int(-2));
        lp.add_le(ints(&[1]), int(1));
        let out = lp.solve();
        assert!(matches!(out, LpOutcome::Infeasible { .. }));
        assert!(lp.verify(&out));
    }

    #[test]
    fn unbounded_has_ray() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(ints(&[1, 1]));
        lp.add_le(ints(&[1, -1]), int(1));
        let out = lp.solve();
        assert!(matches!(out, LpOutcome::Unbounded { .. }));
        assert!(lp.verify(&out));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the textbook largest-coefficient rule.
        let mut lp = LinearProgram::new(4);
        lp.set_objective(vec![rat(3, 4), int(-150), rat(1, 50), int(-6)]);
        lp.add_le(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], int(0));
        lp.add_le(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], int(0));
        lp.add_le(ints(&[0, 0, 1, 0]), int(1));
        let out = lp.solve();
        assert!(lp.verify(&out));
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == rat(1, 20)));
    }

    #[test]
    fn redundant_equality_rows() {
        // x + y = 1 written twice as pairs of inequalities
        let mut lp = LinearProgram::new(2);
        lp.set_objective(ints(&[1, 2]));
        for _ in 0..2 {
            lp.add_le(ints(&[1, 1]), int(1));
            lp.add_le(ints(&[-1, -1]), int(-1));
        }
        let out = lp.solve();
        assert!(lp.verify(&out));
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == int(2)));
    }
}

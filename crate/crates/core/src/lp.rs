//! Dense simplex for `max cᵀx` subject to `A x ≤ b` with free `x` and
//! `b ≥ 0` (so the origin is feasible).
//!
//! The method walks vertices of the polytope: a vertex is described by `n`
//! linearly independent active rows (the basis), the multipliers
//! `u = A_B^{-ᵀ} c` certify optimality when nonnegative, and otherwise the
//! row with the smallest index among negative multipliers is released
//! (Bland's rule, with the smallest-index tie break in the ratio test). This
//! is the simplex method applied to the standard-form dual
//! `min bᵀy, Aᵀy = c, y ≥ 0`.
//!
//! A [`Solver`] keeps its basis between calls, so a sequence of objectives
//! over the same polytope warm-starts from the previous optimum.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Lu;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;

/// The constraint system `A x ≤ b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    n: usize,
}

/// An optimal vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub optimum: f64,
    pub x: Vec<f64>,
    /// Indices of the `n` rows active at `x`.
    pub basis: Vec<usize>,
    pub pivots: usize,
}

impl LpProblem {
    pub fn new(rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: rhs.len(),
            });
        }
        let n = rows.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::domain("the problem needs at least one variable and one row"));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::domain("constraint entries must be finite"));
            }
        }
        if rhs.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::domain("right-hand sides must be finite and nonnegative"));
        }
        Ok(LpProblem { rows, rhs, n })
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn solver(&self, tol: f64) -> Solver<'_> {
        Solver {
            problem: self,
            tol,
            state: None,
        }
    }

    pub fn maximize(&self, c: &[f64]) -> Result<LpSolution> {
        self.solver(DEFAULT_TOLERANCE).maximize(c)
    }
}

/// `max cᵀx` subject to `A x ≤ b`; returns the optimum and a maximizer.
pub fn lp_maximize(c: &[f64], a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<(f64, Vec<f64>)> {
    let sol = LpProblem::new(a, b)?.maximize(c)?;
    Ok((sol.optimum, sol.x))
}

#[derive(Debug, Clone)]
struct Vertex {
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// `A_B^{-1}`, row-major.
    inverse: Vec<Vec<f64>>,
    x: Vec<f64>,
    since_refactor: usize,
}

/// Warm-startable solver over one [`LpProblem`].
#[derive(Debug, Clone)]
pub struct Solver<'a> {
    problem: &'a LpProblem,
    tol: f64,
    state: Option<Vertex>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Solver<'_> {
    pub fn maximize(&mut self, c: &[f64]) -> Result<LpSolution> {
        let p = self.problem;
        if c.len() != p.n {
            return Err(Error::DimensionMismatch {
                expected: p.n,
                found: c.len(),
            });
        }
        let mut vertex = match self.state.take() {
            Some(v) => v,
            None => self.crash(c)?,
        };
        let mut pivots = 0usize;
        let limit = 50 * (p.rows.len() + p.n) + 1000;
        loop {
            // multipliers u_j = Σ_i c_i inverse[i][j]
            let n = p.n;
            let mut leaving: Option<usize> = None;
            for j in 0..n {
                let u: f64 = (0..n).map(|i| c[i] * vertex.inverse[i][j]).sum();
                if u < -self.tol && leaving.is_none_or(|l| vertex.basis[j] < vertex.basis[l]) {
                    leaving = Some(j);
                }
            }
            let Some(j) = leaving else {
                let optimum = dot(c, &vertex.x);
                let solution = LpSolution {
                    optimum,
                    x: vertex.x.clone(),
                    basis: vertex.basis.clone(),
                    pivots,
                };
                self.state = Some(vertex);
                return Ok(solution);
            };
            if pivots >= limit {
                return Err(Error::Numeric("simplex iteration limit reached".into()));
            }
            // moving along d = -A_B^{-1} e_j releases row j and keeps the others active
            let d: Vec<f64> = (0..n).map(|i| -vertex.inverse[i][j]).collect();
            let entering = self
                .ratio_test(&vertex.x, &vertex.in_basis, &d)
                .ok_or(Error::Unbounded)?;
            let (i_new, step) = entering;
            for (xi, di) in vertex.x.iter_mut().zip(&d) {
                *xi += step * di;
            }
            self.replace(&mut vertex, j, i_new)?;
            pivots += 1;
        }
    }

    /// Smallest step to a blocking row along `d`; ties go to the lowest index.
    fn ratio_test(&self, x: &[f64], in_basis: &[bool], d: &[f64]) -> Option<(usize, f64)> {
        let p = self.problem;
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in p.rows.iter().enumerate() {
            let ad = dot(row, d);
            if ad <= self.tol || in_basis[i] {
                continue;
            }
            let slack = (p.rhs[i] - dot(row, x)).max(0.0);
            let t = slack / ad;
            match best {
                Some((_, bt)) if t >= bt - 1e-12 * bt.abs().max(1.0) => {}
                _ => best = Some((i, t)),
            }
        }
        best
    }

    /// Swaps basis position `j` for row `i`, updating the inverse by a
    /// rank-one correction and refactoring periodically.
    fn replace(&self, vertex: &mut Vertex, j: usize, i: usize) -> Result<()> {
        let p = self.problem;
        let n = p.n;
        vertex.in_basis[vertex.basis[j]] = false;
        vertex.in_basis[i] = true;
        vertex.basis[j] = i;
        vertex.since_refactor += 1;
        if vertex.since_refactor >= REFACTOR_EVERY {
            *vertex = self.refactor(vertex.basis.clone())?;
            return Ok(());
        }
        let row = &p.rows[i];
        // w = a_i^T A_B^{-1}; new inverse column j = old column j / w_j
        let w: Vec<f64> = (0..n)
            .map(|col| (0..n).map(|k| row[k] * vertex.inverse[k][col]).sum())
            .collect();
        let pivot = w[j];
        if pivot.abs() < 1e-14 {
            *vertex = self.refactor(vertex.basis.clone())?;
            return Ok(());
        }
        for r in 0..n {
            let cj = vertex.inverse[r][j] / pivot;
            for col in 0..n {
                if col != j {
                    vertex.inverse[r][col] -= cj * w[col];
                }
            }
            vertex.inverse[r][j] = cj;
        }
        Ok(())
    }

    fn refactor(&self, basis: Vec<usize>) -> Result<Vertex> {
        let p = self.problem;
        let n = p.n;
        let matrix: Vec<Vec<f64>> = basis.iter().map(|&i| p.rows[i].clone()).collect();
        let lu = Lu::factor(matrix, 1e-12)
            .ok_or_else(|| Error::Numeric("basis matrix became singular".into()))?;
        let mut inverse = vec![vec![0.0; n]; n];
        for col in 0..n {
            let mut e = vec![0.0; n];
            e[col] = 1.0;
            let x = lu.solve(&e);
            for r in 0..n {
                inverse[r][col] = x[r];
            }
        }
        let b: Vec<f64> = basis.iter().map(|&i| p.rhs[i]).collect();
        let x = lu.solve(&b);
        let mut in_basis = vec![false; p.rows.len()];
        for &i in &basis {
            in_basis[i] = true;
        }
        Ok(Vertex {
            basis,
            in_basis,
            inverse,
            x,
            since_refactor: 0,
        })
    }

    /// Moves from the origin to a vertex, never decreasing `cᵀx`.
    fn crash(&self, c: &[f64]) -> Result<Vertex> {
        let p = self.problem;
        let n = p.n;
        let mut x = vec![0.0; n];
        let mut active: Vec<usize> = Vec::with_capacity(n);
        let mut in_basis = vec![false; p.rows.len()];
        // orthonormal basis of the span of the active rows
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
        let project = |v: &[f64], q: &[Vec<f64>]| -> Vec<f64> {
            let mut out = v.to_vec();
            for qi in q {
                let s = dot(qi, &out);
                for (o, e) in out.iter_mut().zip(qi) {
                    *o -= s * e;
                }
            }
            out
        };
        while active.len() < n {
            let mut d = project(c, &q);
            if dot(&d, &d) < 1e-20 {
                // c lies in the active span: take the coordinate direction
                // with the largest free component
                d = (0..n)
                    .map(|k| {
                        let mut e = vec![0.0; n];
                        e[k] = 1.0;
                        project(&e, &q)
                    })
                    .max_by(|a, b| dot(a, a).total_cmp(&dot(b, b)))
                    .expect("n >= 1");
            }
            let gain = dot(c, &d);
            let mut hit = self.ratio_test(&x, &in_basis, &d);
            if hit.is_none() {
                if gain > self.tol {
                    return Err(Error::Unbounded);
                }
                for v in &mut d {
                    *v = -*v;
                }
                hit = self.ratio_test(&x, &in_basis, &d);
            }
            let Some((i, t)) = hit else {
                return Err(Error::Numeric(
                    "constraint rows do not span the variables".into(),
                ));
            };
            for (xi, di) in x.iter_mut().zip(&d) {
                *xi += t * di;
            }
            let mut r = project(&p.rows[i], &q);
            let norm = libm::sqrt(dot(&r, &r));
            if norm < 1e-12 {
                return Err(Error::Numeric("dependent row entered the basis".into()));
            }
            for v in &mut r {
                *v /= norm;
            }
            q.push(r);
            active.push(i);
            in_basis[i] = true;
        }
        self.refactor(active)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional() {
        let (opt, x) = lp_maximize(&[1.0], vec![vec![1.0], vec![-1.0]], vec![1.0, 1.0]).unwrap();
        assert!((opt - 1.0).abs() < 1e-12 && (x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_rotated() {
        let rows = vec![
            vec![1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
        ];
        let (opt, x) = lp_maximize(&[1.0, 1.0], rows.clone(), vec![1.0; 4]).unwrap();
        assert!((opt - 1.0).abs() < 1e-12);
        assert!(rows.iter().all(|r| dot(r, &x) <= 1.0 + 1e-12));
        let (opt, _) = lp_maximize(&[0.0, 0.0], rows, vec![1.0; 4]).unwrap();
        assert_eq!(opt, 0.0);
    }

    #[test]
    fn unbounded_and_errors() {
        assert_eq!(
            lp_maximize(&[1.0, 0.0], vec![vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]], vec![1.0; 3]),
            Err(Error::Unbounded)
        );
        assert!(lp_maximize(&[1.0], vec![vec![1.0]], vec![-1.0]).is_err());
        assert!(lp_maximize(&[1.0, 2.0], vec![vec![1.0]], vec![1.0]).is_err());
        assert!(LpProblem::new(vec![vec![1.0], vec![1.0, 2.0]], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn warm_start_matches_cold() {
        // unit cross-polytope in 3D written as 8 facets
        let mut rows = Vec::new();
        for s in 0..8u32 {
            rows.push((0..3).map(|k| if s >> k & 1 == 1 { -1.0 } else { 1.0 }).collect());
        }
        let problem = LpProblem::new(rows, vec![1.0; 8]).unwrap();
        let mut warm = problem.solver(1e-9);
        for c in [[1.0, 2.0, 3.0], [-1.0, 0.5, 0.0], [0.2, -0.2, -4.0], [1.0, 1.0, 1.0]] {
            let a = warm.maximize(&c).unwrap();
            let b = problem.maximize(&c).unwrap();
            let expect = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!((a.optimum - expect).abs() < 1e-12);
            assert!((b.optimum - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_vertex() {
        // many rows through the same vertex (1, 1)
        let rows = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![2.0, 1.0],
            vec![1.0, 2.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ];
        let b = vec![1.0, 1.0, 2.0, 3.0, 3.0, 1.0, 1.0];
        let (opt, x) = lp_maximize(&[1.0, 1.0], rows, b).unwrap();
        assert!((opt - 2.0).abs() < 1e-12 && (x[0] - 1.0).abs() < 1e-12);
    }
}

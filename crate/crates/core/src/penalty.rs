//! The regularized quadratic-penalty objective
//!
//! ```text
//! f_beta(x) = c^T x - ubar^T (Ax - b) + (beta/2) ||Ax - b||^2
//!             + (1/(2 beta)) ||x - xbar||^2
//! ```
//!
//! together with its per-coordinate gradient and the coordinate Lipschitz
//! constant. `f_beta` is strongly convex with modulus `1/beta`, and its
//! Hessian diagonals are bounded by `L_max = beta * max_i ||A_:i||^2 + 1/beta`.
//! All evaluations use the LP's internal minimize-form cost.

use crate::error::{Error, Result};
use crate::lp::StandardFormLp;

/// Coordinate Lipschitz data for `f_beta`.
#[derive(Debug, Clone)]
pub struct LipschitzInfo {
    /// `beta * max_i ||A_:i||^2 + 1/beta`; equals `1/beta` for an empty matrix.
    pub l_max: f64,
    /// Strong-convexity modulus `1/beta`.
    pub l_strong: f64,
    /// Per-column Hessian diagonal `beta * ||A_:i||^2 + 1/beta`.
    pub diag: Vec<f64>,
}

/// `f_beta` bound to an LP with penalty `beta` and anchors `(ubar, xbar)`.
///
/// Immutable once built; `ubar^T A_:i` is precomputed per column so a
/// coordinate gradient touches only that column's nonzeros. Rebuild the
/// problem whenever an outer loop updates the anchors.
#[derive(Debug)]
pub struct PenaltyProblem<'a> {
    lp: &'a StandardFormLp,
    beta: f64,
    u_bar: Vec<f64>,
    x_bar: Vec<f64>,
    ubar_dot_cols: Vec<f64>,
}

impl<'a> PenaltyProblem<'a> {
    pub fn new(lp: &'a StandardFormLp, beta: f64, u_bar: Vec<f64>, x_bar: Vec<f64>) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::InvalidConfig(format!("beta must be positive, got {beta}")));
        }
        if u_bar.len() != lp.num_rows() {
            return Err(Error::DimensionMismatch(format!(
                "u_bar has {} entries but LP has {} rows",
                u_bar.len(),
                lp.num_rows()
            )));
        }
        if x_bar.len() != lp.num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "x_bar has {} entries but LP has {} variables",
                x_bar.len(),
                lp.num_cols()
            )));
        }
        let ubar_dot_cols = lp.matrix().mul_transpose_vec(&u_bar);
        Ok(Self {
            lp,
            beta,
            u_bar,
            x_bar,
            ubar_dot_cols,
        })
    }

    /// Zero anchors: plain quadratic penalty plus proximal term around 0.
    pub fn zero_anchors(lp: &'a StandardFormLp, beta: f64) -> Result<Self> {
        Self::new(lp, beta, vec![0.0; lp.num_rows()], vec![0.0; lp.num_cols()])
    }

    pub fn lp(&self) -> &StandardFormLp {
        self.lp
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn u_bar(&self) -> &[f64] {
        &self.u_bar
    }

    pub fn x_bar(&self) -> &[f64] {
        &self.x_bar
    }

    /// `f_beta(x)`.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        let r = self.lp.residual(x)?;
        Ok(self.objective_with_residual(x, &r))
    }

    /// `f_beta(x)` given the caller-maintained residual `r = Ax - b`.
    pub fn objective_with_residual(&self, x: &[f64], r: &[f64]) -> f64 {
        let c_term = self.lp.internal_objective(x);
        let u_term: f64 = crate::linalg::dot(&self.u_bar, r);
        let pen: f64 = crate::linalg::dot(r, r);
        let prox: f64 = x
            .iter()
            .zip(&self.x_bar)
            .map(|(xi, xb)| (xi - xb) * (xi - xb))
            .sum();
        c_term - u_term + 0.5 * self.beta * pen + prox / (2.0 * self.beta)
    }

    /// Partial derivative of `f_beta` at coordinate `i`, given the current
    /// residual `r = Ax - b` and the current value `x_i`. Touches only the
    /// nonzeros of column `i`.
    #[inline]
    pub fn grad_component(&self, r: &[f64], x_i: f64, i: usize) -> f64 {
        let (rows, vals) = self.lp.matrix().col(i);
        let mut a_dot_r = 0.0;
        for (&row, &v) in rows.iter().zip(vals) {
            a_dot_r += v * r[row];
        }
        self.grad_component_cached(a_dot_r, x_i, i)
    }

    /// Same as [`grad_component`](Self::grad_component) with `A_:i^T r`
    /// already accumulated by the caller.
    #[inline]
    pub fn grad_component_cached(&self, a_dot_r: f64, x_i: f64, i: usize) -> f64 {
        self.lp.min_cost()[i] - self.ubar_dot_cols[i]
            + self.beta * a_dot_r
            + (x_i - self.x_bar[i]) / self.beta
    }

    /// Full gradient; dense helper for the reference solver and stop checks.
    pub fn gradient(&self, x: &[f64], r: &[f64]) -> Vec<f64> {
        let at_r = self.lp.matrix().mul_transpose_vec(r);
        (0..x.len())
            .map(|i| self.grad_component_cached(at_r[i], x[i], i))
            .collect()
    }

    /// `L_max` of the coordinate Hessian diagonals; O(1) via the cached
    /// maximum column norm.
    #[inline]
    pub fn l_max(&self) -> f64 {
        self.beta * self.lp.matrix().max_col_sq_norm() + 1.0 / self.beta
    }

    pub fn lipschitz(&self) -> LipschitzInfo {
        let n = self.lp.num_cols();
        let diag = (0..n)
            .map(|i| self.beta * self.lp.matrix().col_sq_norm(i) + 1.0 / self.beta)
            .collect();
        LipschitzInfo {
            l_max: self.l_max(),
            l_strong: 1.0 / self.beta,
            diag,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{Sense, SparseMatrix};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn scalar_lp() -> StandardFormLp {
        let m = SparseMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap();
        StandardFormLp::new(m, vec![1.0], vec![1.0], Sense::Minimize).unwrap()
    }

    fn random_lp(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> StandardFormLp {
        let mut triplets = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(0.6) {
                    triplets.push((r, c, rng.gen_range(-2.0..2.0)));
                }
            }
        }
        let m = SparseMatrix::from_triplets(rows, cols, &triplets).unwrap();
        let b = (0..rows).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let c = (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
        StandardFormLp::new(m, b, c, Sense::Minimize).unwrap()
    }

    #[test]
    fn objective_scalar_example() {
        let lp = scalar_lp();
        let p = PenaltyProblem::zero_anchors(&lp, 1.0).unwrap();
        // f(1) = 1 - 0 + 0.5*0 + 0.5*1 = 1.5
        assert!((p.objective(&[1.0]).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn objective_feasible_anchored_point_is_cost() {
        let lp = scalar_lp();
        // x = xbar = 1 (feasible: Ax = b), ubar arbitrary: penalty terms vanish.
        let p = PenaltyProblem::new(&lp, 3.0, vec![-2.5], vec![1.0]).unwrap();
        assert!((p.objective(&[1.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn objective_ubar_term_vanishes_at_feasibility() {
        let lp = scalar_lp();
        let p = PenaltyProblem::new(&lp, 1.0, vec![1.0], vec![0.0]).unwrap();
        // Same data as the first example but ubar = 1; at x = 1 the residual
        // is zero so -ubar^T(Ax-b) contributes nothing.
        assert!((p.objective(&[1.0]).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn grad_component_feasible_anchored() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lp = random_lp(&mut rng, 4, 6);
        // Build a feasible x by setting b := Ax, then anchor xbar = x, ubar = 0.
        let x: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..1.0)).collect();
        let b = lp.matrix().mul_vec(&x);
        let lp2 = StandardFormLp::new(
            lp.matrix().clone(),
            b,
            lp.min_cost().to_vec(),
            Sense::Minimize,
        )
        .unwrap();
        let p = PenaltyProblem::new(&lp2, 2.0, vec![0.0; 4], x.clone()).unwrap();
        let r = lp2.residual(&x).unwrap();
        for i in 0..6 {
            let g = p.grad_component(&r, x[i], i);
            assert!((g - lp2.min_cost()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn grad_component_scalar_example() {
        let lp = scalar_lp();
        let p = PenaltyProblem::zero_anchors(&lp, 2.0).unwrap();
        let r = lp.residual(&[0.0]).unwrap();
        // 1 + 2*1*(-1) + 0 = -1
        assert!((p.grad_component(&r, 0.0, 0) - (-1.0)).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-5;
        let mut checked = 0;
        while checked < 100 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..7);
            let lp = random_lp(&mut rng, rows, cols);
            let beta = rng.gen_range(0.2..4.0);
            let u_bar = (0..rows).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x_bar = (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p = PenaltyProblem::new(&lp, beta, u_bar, x_bar).unwrap();
            let x: Vec<f64> = (0..cols).map(|_| rng.gen_range(0.0..1.0)).collect();
            let r = lp.residual(&x).unwrap();
            let i = rng.gen_range(0..cols);
            let g = p.grad_component(&r, x[i], i);

            let mut xp = x.clone();
            xp[i] += h;
            let mut xm = x.clone();
            xm[i] -= h;
            let fd = (p.objective(&xp).unwrap() - p.objective(&xm).unwrap()) / (2.0 * h);
            let scale = g.abs().max(fd.abs()).max(1e-3);
            assert!(
                (g - fd).abs() / scale < 1e-6,
                "grad {g} vs fd {fd} at coord {i}"
            );
            checked += 1;
        }
    }

    #[test]
    fn lipschitz_examples() {
        // Columns (1,0) and (0,2) with beta = 2: L_max = 2*4 + 0.5 = 8.5.
        let m = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 2.0)]).unwrap();
        let lp = StandardFormLp::new(m, vec![0.0, 0.0], vec![0.0, 0.0], Sense::Minimize).unwrap();
        let p = PenaltyProblem::zero_anchors(&lp, 2.0).unwrap();
        let lip = p.lipschitz();
        assert!((lip.l_max - 8.5).abs() < 1e-15);
        assert!((lip.l_strong - 0.5).abs() < 1e-15);
        assert_eq!(lip.diag, vec![2.0 * 1.0 + 0.5, 2.0 * 4.0 + 0.5]);
        assert!(lip.l_max >= lip.l_strong);

        // Identity with beta = 1: L_max = 2.
        let id = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap();
        let lp2 = StandardFormLp::new(id, vec![0.0, 0.0], vec![0.0, 0.0], Sense::Minimize).unwrap();
        let p2 = PenaltyProblem::zero_anchors(&lp2, 1.0).unwrap();
        assert!((p2.lipschitz().l_max - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lipschitz_beta_scaling_and_empty_matrix() {
        let m = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 2.0)]).unwrap();
        let lp = StandardFormLp::new(m, vec![0.0, 0.0], vec![0.0, 0.0], Sense::Minimize).unwrap();
        for beta in [0.5, 1.0, 3.0] {
            let p = PenaltyProblem::zero_anchors(&lp, beta).unwrap();
            let doubled = PenaltyProblem::zero_anchors(&lp, 2.0 * beta).unwrap();
            let maxnorm = lp.matrix().max_col_sq_norm();
            assert!((doubled.l_max() - (2.0 * beta * maxnorm + 1.0 / (2.0 * beta))).abs() < 1e-12);
            assert!((p.l_max() - (beta * maxnorm + 1.0 / beta)).abs() < 1e-12);
        }

        let empty = SparseMatrix::from_triplets(2, 2, &[]).unwrap();
        let lp0 =
            StandardFormLp::new(empty, vec![0.0, 0.0], vec![0.0, 0.0], Sense::Minimize).unwrap();
        let p0 = PenaltyProblem::zero_anchors(&lp0, 4.0).unwrap();
        assert_eq!(p0.l_max(), 0.25);
    }

    #[test]
    fn strong_convexity_holds_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let rows = rng.gen_range(1..4);
            let cols = rng.gen_range(1..6);
            let lp = random_lp(&mut rng, rows, cols);
            let beta = rng.gen_range(0.3..3.0);
            let p = PenaltyProblem::zero_anchors(&lp, beta).unwrap();
            let x: Vec<f64> = (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let rx = lp.residual(&x).unwrap();
            let g = p.gradient(&x, &rx);
            let fy = p.objective(&y).unwrap();
            let fx = p.objective(&x).unwrap();
            let lin: f64 = g
                .iter()
                .zip(x.iter().zip(&y))
                .map(|(gi, (xi, yi))| gi * (yi - xi))
                .sum();
            let sq: f64 = x
                .iter()
                .zip(&y)
                .map(|(xi, yi)| (yi - xi) * (yi - xi))
                .sum();
            assert!(fy >= fx + lin + sq / (2.0 * beta) - 1e-9);
        }
    }

    #[test]
    fn coordinate_smoothness_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let rows = rng.gen_range(1..4);
            let cols = rng.gen_range(1..6);
            let lp = random_lp(&mut rng, rows, cols);
            let beta = rng.gen_range(0.3..3.0);
            let p = PenaltyProblem::zero_anchors(&lp, beta).unwrap();
            let l_max = p.l_max();
            let x: Vec<f64> = (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = lp.residual(&x).unwrap();
            let i = rng.gen_range(0..cols);
            let t: f64 = rng.gen_range(-1.0..1.0);
            let g = p.grad_component(&r, x[i], i);
            let mut xt = x.clone();
            xt[i] += t;
            let lhs = p.objective(&xt).unwrap() - p.objective(&x).unwrap() - t * g;
            assert!(lhs <= 0.5 * l_max * t * t + 1e-9);
        }
    }
}

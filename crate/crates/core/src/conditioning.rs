//! Condition-number and penalty-parameter estimation, plus empirical
//! verification of the perturbation bounds that connect the penalty
//! minimizer `x(beta)` to the LP optimum.
//!
//! The estimates work on the natural (pre-slack) form of a covering program,
//! where the `x <= 1` bound rows are part of the data triple `d = (A, b, c)`
//! and `||d|| = max(||A||_F, ||b||_2, ||c||_2)`. `delta_P` and `delta_D` are
//! normalized distances to primal/dual infeasibility; the closed forms here
//! are provable lower bounds, so every quantity derived from them stays
//! conservative.

use crate::alm::{alm_solve, AlmOptions};
use crate::error::{Error, Result};
use crate::linalg::{dist2, norm2, norm_inf};
use crate::lp::{Sense, SparseMatrix, StandardFormLp};
use crate::penalty::PenaltyProblem;
use crate::problems::{CoveringConstraints, Graph};
use crate::scd::SolveOptions;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;
const SQRT_6: f64 = 2.449489742783178;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateSource {
    VcClosedForm,
    CoveringSlack,
    User,
}

#[derive(Debug, Clone)]
pub struct ConditionEstimate {
    /// `||d|| = max(||A||_F, ||b||_2, ||c||_2)` of the natural form.
    pub d_norm: f64,
    /// Lower bound on the primal distance-to-infeasibility ratio.
    pub delta_p_lb: f64,
    /// Lower bound on the dual distance-to-infeasibility ratio.
    pub delta_d_lb: f64,
    /// `C_* = max(||x* - xbar||, ||u* - ubar||)` bound or heuristic.
    pub c_star: f64,
    pub source: EstimateSource,
    /// True when `c_star` is a size heuristic rather than a derived bound.
    pub c_star_is_heuristic: bool,
}

impl ConditionEstimate {
    /// Replaces the anchor-distance constant with a user-supplied value
    /// (e.g. measured from known solutions).
    pub fn with_c_star(mut self, c_star: f64) -> Self {
        self.c_star = c_star;
        self.c_star_is_heuristic = false;
        self
    }
}

/// Closed-form bounds for the vertex-cover relaxation:
/// `||d|| = sqrt(2m + n)` for unit costs, `delta_P >= 1/(4 ||d|| sqrt(n))`,
/// `delta_D >= min_v c_v / ||d||`, and `C_* = sqrt(m)` for the anchors
/// `xbar = 1`, `ubar = 0`.
pub fn estimate_vc_condition(g: &Graph) -> Result<ConditionEstimate> {
    let n = g.num_vertices();
    let m = g.num_edges();
    if m == 0 || n == 0 {
        return Err(Error::InvalidConfig(
            "condition estimate needs a nonempty graph".into(),
        ));
    }
    let a_frob = ((2 * m + n) as f64).sqrt();
    let b_norm = ((m + n) as f64).sqrt();
    let c_norm = norm2(g.vertex_costs());
    let d_norm = a_frob.max(b_norm).max(c_norm);
    let min_cost = g
        .vertex_costs()
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b));
    Ok(ConditionEstimate {
        d_norm,
        delta_p_lb: 1.0 / (4.0 * d_norm * (n as f64).sqrt()),
        delta_d_lb: min_cost / d_norm,
        c_star: (m as f64).sqrt(),
        source: EstimateSource::VcClosedForm,
        c_star_is_heuristic: false,
    })
}

/// General covering bounds from a feasible interior point: with slack
/// `s = min(min_i scale(1 - x_i), min_j (A_j x - b_j))`,
/// `delta_P >= s / (2 ||d|| sqrt(n))` and `delta_D >= min_i c_i / ||d||`.
/// When no point is supplied, a max-slack LP is solved with the toolkit at
/// loose tolerance and the slack of that point is measured exactly.
pub fn estimate_covering_condition(
    cov: &CoveringConstraints,
    costs: &[f64],
    point: Option<&[f64]>,
) -> Result<ConditionEstimate> {
    let n = cov.num_vars;
    let m = cov.rows.len();
    if costs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} costs for {n} variables",
            costs.len()
        )));
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidConfig("empty covering program".into()));
    }
    let x_owned;
    let x: &[f64] = match point {
        Some(p) => {
            if p.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "interior point has {} entries for {n} variables",
                    p.len()
                )));
            }
            p
        }
        None => {
            x_owned = max_slack_point(cov)?;
            &x_owned
        }
    };
    let mut slack = f64::INFINITY;
    for (i, &xi) in x.iter().enumerate() {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::BoundsViolation(format!(
                "interior point component {i} = {xi} outside [0,1]"
            )));
        }
        slack = slack.min(cov.bound_scale * (1.0 - xi));
    }
    for j in 0..m {
        slack = slack.min(cov.row_value(j, x) - cov.rhs[j]);
    }
    if !(slack > 0.0) {
        return Err(Error::InfeasibleInput(format!(
            "supplied point has nonpositive slack {slack}; need a strict interior point"
        )));
    }

    let row_sq: f64 = cov
        .rows
        .iter()
        .map(|r| r.iter().map(|&(_, a)| a * a).sum::<f64>())
        .sum();
    let a_frob = (row_sq + n as f64 * cov.bound_scale * cov.bound_scale).sqrt();
    let b_norm = (norm2(&cov.rhs).powi(2) + n as f64 * cov.bound_scale * cov.bound_scale).sqrt();
    let c_norm = norm2(costs);
    let d_norm = a_frob.max(b_norm).max(c_norm);
    let min_cost = costs.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    Ok(ConditionEstimate {
        d_norm,
        delta_p_lb: slack / (2.0 * d_norm * (n as f64).sqrt()),
        delta_d_lb: min_cost / d_norm,
        // Size heuristic in the spirit of the vertex-cover closed form.
        c_star: (m as f64).sqrt(),
        source: EstimateSource::CoveringSlack,
        c_star_is_heuristic: true,
    })
}

/// Solves `max t  s.t.  A x - t >= b, scale*x + t <= scale, x in [0,1]`
/// with the toolkit at loose tolerance and returns the x part.
fn max_slack_point(cov: &CoveringConstraints) -> Result<Vec<f64>> {
    let n = cov.num_vars;
    let m = cov.rows.len();
    let t_var = n;
    let cols = n + 1 + m + n;
    let rows = m + n;
    let mut triplets = Vec::new();
    for (j, row) in cov.rows.iter().enumerate() {
        for &(i, a) in row {
            triplets.push((j, i, a));
        }
        triplets.push((j, t_var, -1.0));
        triplets.push((j, n + 1 + j, -1.0)); // covering slack z_j >= 0
    }
    for i in 0..n {
        let r = m + i;
        triplets.push((r, i, cov.bound_scale));
        triplets.push((r, t_var, 1.0));
        triplets.push((r, n + 1 + m + i, 1.0)); // bound slack y_i >= 0
    }
    let matrix = SparseMatrix::from_triplets(rows, cols, &triplets)?;
    let mut rhs = cov.rhs.clone();
    rhs.extend(std::iter::repeat(cov.bound_scale).take(n));
    let mut cost = vec![0.0; cols];
    cost[t_var] = -1.0; // maximize t
    let mut lp = StandardFormLp::new(matrix, rhs, cost, Sense::Minimize)?;
    for i in 0..n {
        lp.set_bounds(i, 0.0, 1.0)?;
    }
    lp.set_bounds(t_var, 0.0, cov.bound_scale.max(norm_inf(&cov.rhs)))?;

    let opts = AlmOptions {
        beta0: crate::alm::default_beta0(&lp),
        target_eps: 1e-4,
        max_outer: 30,
        inner: SolveOptions {
            max_steps: 400_000,
            target_qp_gap: 1e-10,
            ..Default::default()
        },
        ..Default::default()
    };
    let out = alm_solve(&lp, &opts)?;
    let mut x = out.x[..n].to_vec();
    for xi in x.iter_mut() {
        *xi = xi.clamp(0.0, 1.0);
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingBound {
    /// `beta >= 10 C_* / (||d|| min(delta_P, delta_D))`
    Conditioning,
    /// the `delta |c^T x*|` objective bound
    Objective,
    /// the `eps` feasibility bound
    Feasibility,
}

#[derive(Debug, Clone)]
pub struct BetaChoice {
    pub beta: f64,
    pub binding: BindingBound,
    /// The three lower bounds in order (conditioning, objective, feasibility).
    pub bounds: [f64; 3],
    /// Target QP accuracy `eps_bar = C20^2 / beta^3`.
    pub eps_bar: f64,
    pub c20: f64,
}

/// Penalty parameter satisfying the three lower bounds that guarantee an
/// (eps, delta)-approximate solution. Pass infinite `eps` / `delta` to drop
/// the corresponding bound.
pub fn choose_beta(
    est: &ConditionEstimate,
    eps: f64,
    delta: f64,
    objective_magnitude: f64,
    x_bar_norm: f64,
) -> Result<BetaChoice> {
    if !(eps > 0.0) || !(delta > 0.0) {
        return Err(Error::InvalidConfig(
            "eps and delta targets must be positive".into(),
        ));
    }
    if delta.is_finite() && objective_magnitude == 0.0 {
        return Err(Error::ZeroReference);
    }
    let c = est.c_star;
    let d = est.d_norm;
    let dp = est.delta_p_lb;
    let dd = est.delta_d_lb;
    let dpd = dp * dd;
    let b1 = 10.0 * c / (d * dp.min(dd));
    let objective_numerator = 25.0 * c / dpd + 6.0 * c * c + SQRT_6 * x_bar_norm * c;
    let b2 = if delta.is_finite() {
        objective_numerator / (delta * objective_magnitude)
    } else {
        0.0
    };
    let b3 = if eps.is_finite() {
        ((1.0 + SQRT_2) * c + 25.0 * c / (2.0 * dpd)) / eps
    } else {
        0.0
    };
    let bounds = [b1, b2, b3];
    let beta = b1.max(b2).max(b3).max(1e-9);
    let binding = if beta == b1 {
        BindingBound::Conditioning
    } else if beta == b2 {
        BindingBound::Objective
    } else {
        BindingBound::Feasibility
    };
    let c20 = 25.0 * c / (2.0 * d * dpd);
    Ok(BetaChoice {
        beta,
        binding,
        bounds,
        eps_bar: c20 * c20 / (beta * beta * beta),
        c20,
    })
}

#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; nonnegative (within tolerance) when the bound holds.
    pub slack: f64,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct PerturbationReport {
    pub c_star: f64,
    pub beta: f64,
    /// Whether `beta` met the conditioning bound required for the objective
    /// check (the first two checks hold unconditionally).
    pub beta_condition_met: bool,
    pub checks: Vec<BoundCheck>,
    pub all_hold: bool,
}

/// Default absolute tolerance for the perturbation-bound checks.
pub const PERTURBATION_TOL: f64 = 1e-7;

/// Empirically verifies the penalty perturbation bounds at a high-accuracy
/// minimizer `x_beta` against an oracle primal-dual pair:
///
/// * `||A x(beta) - b||_2 <= (1 + sqrt 2) C_* / beta`
/// * `||x(beta) - xbar||_2 <= sqrt(6) C_*`
/// * when `beta >= 10 C_* / (||d|| min(delta_P, delta_D))`:
///   `|c^T x* - c^T x(beta)| <= (25 C_*/(2 dP dD) + 6 C_*^2 + sqrt(6)||xbar|| C_*) / beta`
///
/// These are theorems; a failure (beyond `tol`) indicates an implementation
/// bug or an invalid condition estimate.
pub fn verify_perturbation_bounds(
    p: &PenaltyProblem,
    est: &ConditionEstimate,
    x_beta: &[f64],
    x_star: &[f64],
    u_star: &[f64],
    tol: f64,
) -> Result<PerturbationReport> {
    let lp = p.lp();
    if x_beta.len() != lp.num_cols() || x_star.len() != lp.num_cols() {
        return Err(Error::DimensionMismatch("primal dimension".into()));
    }
    if u_star.len() != lp.num_rows() {
        return Err(Error::DimensionMismatch("dual dimension".into()));
    }
    let beta = p.beta();
    let c_star = dist2(x_star, p.x_bar()).max(dist2(u_star, p.u_bar()));
    let mut checks = Vec::new();

    let r = lp.residual(x_beta)?;
    let lhs1 = norm2(&r);
    let rhs1 = (1.0 + SQRT_2) * c_star / beta;
    checks.push(make_check("residual", lhs1, rhs1, tol));

    let lhs2 = dist2(x_beta, p.x_bar());
    let rhs2 = SQRT_6 * c_star;
    checks.push(make_check("anchor-distance", lhs2, rhs2, tol));

    let beta_condition =
        beta >= 10.0 * c_star / (est.d_norm * est.delta_p_lb.min(est.delta_d_lb));
    if beta_condition {
        let lhs3 = (lp.internal_objective(x_star) - lp.internal_objective(x_beta)).abs();
        let rhs3 = (25.0 * c_star / (2.0 * est.delta_p_lb * est.delta_d_lb)
            + 6.0 * c_star * c_star
            + SQRT_6 * norm2(p.x_bar()) * c_star)
            / beta;
        checks.push(make_check("objective-gap", lhs3, rhs3, tol));
    }

    let all_hold = checks.iter().all(|c| c.holds);
    Ok(PerturbationReport {
        c_star,
        beta,
        beta_condition_met: beta_condition,
        checks,
        all_hold,
    })
}

fn make_check(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> BoundCheck {
    let slack = rhs - lhs;
    BoundCheck {
        name,
        lhs,
        rhs,
        slack,
        holds: slack >= -tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::random_covering;

    fn k3() -> Graph {
        Graph::unit(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn vc_condition_k3_numbers() {
        let est = estimate_vc_condition(&k3()).unwrap();
        assert_eq!(est.d_norm, 3.0); // sqrt(2*3 + 3)
        assert!((est.delta_p_lb - 1.0 / (12.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!((est.delta_d_lb - 1.0 / 3.0).abs() < 1e-15);
        assert!((est.c_star - 3f64.sqrt()).abs() < 1e-15);
        assert!(!est.c_star_is_heuristic);
    }

    #[test]
    fn vc_condition_single_edge_numbers() {
        let g = Graph::unit(2, &[(0, 1)]).unwrap();
        let est = estimate_vc_condition(&g).unwrap();
        assert_eq!(est.d_norm, 2.0); // sqrt(2 + 2)
        assert!((est.delta_p_lb - 1.0 / (8.0 * SQRT_2)).abs() < 1e-15);
        assert!((est.delta_d_lb - 0.5).abs() < 1e-15);
    }

    #[test]
    fn vc_condition_more_edges_decreases_bounds() {
        let sparse = Graph::unit(6, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let dense = Graph::unit(
            6,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 0),
                (0, 2),
                (1, 3),
            ],
        )
        .unwrap();
        let a = estimate_vc_condition(&sparse).unwrap();
        let b = estimate_vc_condition(&dense).unwrap();
        assert!(b.delta_p_lb < a.delta_p_lb);
        assert!(b.delta_d_lb < a.delta_d_lb);
    }

    #[test]
    fn vc_condition_rejects_empty_graph() {
        let g = Graph::unit(3, &[]).unwrap();
        assert!(estimate_vc_condition(&g).is_err());
    }

    #[test]
    fn covering_condition_recovers_vc_constant_up_to_factor_two() {
        let g = k3();
        let vc = estimate_vc_condition(&g).unwrap();
        let cov = g.covering_constraints();
        let x = vec![2.0 / 3.0; 3];
        let est = estimate_covering_condition(&cov, g.vertex_costs(), Some(&x)).unwrap();
        // Same ||d||; the slack derivation pays an extra factor relative to
        // the sharper closed-form case analysis: s = 1/3 gives 1/(6 d sqrt n)
        // against 1/(4 d sqrt n).
        assert_eq!(est.d_norm, vc.d_norm);
        assert!((est.delta_p_lb - 1.0 / (18.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!(est.delta_p_lb <= vc.delta_p_lb && est.delta_p_lb >= vc.delta_p_lb / 2.0);
        assert_eq!(est.delta_d_lb, vc.delta_d_lb);
    }

    #[test]
    fn covering_condition_unit_costs_delta_d() {
        let (cov, _) = random_covering(3, 5, 7);
        let ones = vec![1.0; 5];
        let est = estimate_covering_condition(&cov, &ones, Some(&vec![2.0 / 3.0; 5])).unwrap();
        assert!((est.delta_d_lb - 1.0 / est.d_norm).abs() < 1e-15);
    }

    #[test]
    fn covering_condition_scale_invariant() {
        let (cov, costs) = random_covering(3, 5, 13);
        let x = vec![2.0 / 3.0; 5];
        let base = estimate_covering_condition(&cov, &costs, Some(&x)).unwrap();
        let scaled_cov = cov.scale_by(2.0);
        let scaled_costs: Vec<f64> = costs.iter().map(|c| 2.0 * c).collect();
        let scaled = estimate_covering_condition(&scaled_cov, &scaled_costs, Some(&x)).unwrap();
        assert!((scaled.d_norm - 2.0 * base.d_norm).abs() < 1e-12);
        assert!((scaled.delta_p_lb - base.delta_p_lb).abs() < 1e-12);
        assert!((scaled.delta_d_lb - base.delta_d_lb).abs() < 1e-12);
    }

    #[test]
    fn covering_condition_finds_its_own_interior_point() {
        let (cov, costs) = random_covering(3, 6, 21);
        let est = estimate_covering_condition(&cov, &costs, None).unwrap();
        assert!(est.delta_p_lb > 0.0);
        assert_eq!(est.source, EstimateSource::CoveringSlack);
    }

    #[test]
    fn choose_beta_worked_example() {
        let est = ConditionEstimate {
            d_norm: 10.0,
            delta_p_lb: 0.1,
            delta_d_lb: 0.1,
            c_star: 1.0,
            source: EstimateSource::User,
            c_star_is_heuristic: false,
        };
        let choice = choose_beta(&est, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert!((choice.bounds[0] - 10.0).abs() < 1e-12);
        assert!((choice.bounds[1] - 2506.0).abs() < 1e-9);
        assert!((choice.bounds[2] - (1.0 + SQRT_2 + 1250.0)).abs() < 1e-9);
        assert_eq!(choice.beta, choice.bounds[1]);
        assert_eq!(choice.binding, BindingBound::Objective);
        // eps_bar = C20^2 / beta^3 with C20 = 25/(2*10*0.01) = 125.
        assert!((choice.c20 - 125.0).abs() < 1e-9);
        assert!((choice.eps_bar - 125.0f64.powi(2) / 2506.0f64.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn choose_beta_infinite_targets_leave_first_bound() {
        let est = ConditionEstimate {
            d_norm: 10.0,
            delta_p_lb: 0.1,
            delta_d_lb: 0.1,
            c_star: 1.0,
            source: EstimateSource::User,
            c_star_is_heuristic: false,
        };
        let choice = choose_beta(&est, f64::INFINITY, f64::INFINITY, 1.0, 0.0).unwrap();
        assert_eq!(choice.beta, choice.bounds[0]);
        assert_eq!(choice.binding, BindingBound::Conditioning);
    }

    #[test]
    fn choose_beta_halving_eps_doubles_third_bound() {
        let est = ConditionEstimate {
            d_norm: 10.0,
            delta_p_lb: 0.1,
            delta_d_lb: 0.1,
            c_star: 1.0,
            source: EstimateSource::User,
            c_star_is_heuristic: false,
        };
        let a = choose_beta(&est, 1.0, f64::INFINITY, 1.0, 0.0).unwrap();
        let b = choose_beta(&est, 0.5, f64::INFINITY, 1.0, 0.0).unwrap();
        assert!((b.bounds[2] - 2.0 * a.bounds[2]).abs() < 1e-9);
    }

    #[test]
    fn choose_beta_rejects_zero_reference_with_finite_delta() {
        let est = estimate_vc_condition(&k3()).unwrap();
        assert!(matches!(
            choose_beta(&est, 0.1, 0.1, 0.0, 0.0),
            Err(Error::ZeroReference)
        ));
    }

    #[test]
    fn choose_beta_monotonicity() {
        let base = ConditionEstimate {
            d_norm: 5.0,
            delta_p_lb: 0.05,
            delta_d_lb: 0.2,
            c_star: 2.0,
            source: EstimateSource::User,
            c_star_is_heuristic: false,
        };
        let b0 = choose_beta(&base, 0.1, 0.1, 3.0, 1.0).unwrap().beta;
        // Nonincreasing in eps and delta.
        assert!(choose_beta(&base, 0.2, 0.1, 3.0, 1.0).unwrap().beta <= b0);
        assert!(choose_beta(&base, 0.1, 0.2, 3.0, 1.0).unwrap().beta <= b0);
        // Nonincreasing in delta_p / delta_d.
        let better_p = ConditionEstimate {
            delta_p_lb: 0.1,
            ..base.clone()
        };
        assert!(choose_beta(&better_p, 0.1, 0.1, 3.0, 1.0).unwrap().beta <= b0);
        // Nondecreasing in c_star.
        let bigger_c = ConditionEstimate {
            c_star: 4.0,
            ..base
        };
        assert!(choose_beta(&bigger_c, 0.1, 0.1, 3.0, 1.0).unwrap().beta >= b0);
    }

    #[test]
    fn perturbation_bounds_trivial_at_optimal_anchors() {
        // Anchors at the optimum: C_* = 0 and x(beta) = x*, so every bound
        // holds with (near) zero slack.
        let g = Graph::unit(2, &[(0, 1)]).unwrap();
        let enc = crate::problems::encode_vertex_cover(&g).unwrap();
        let sol = crate::oracle::exact_lp(&enc.lp).unwrap();
        let est = estimate_vc_condition(&g).unwrap();
        let p = PenaltyProblem::new(&enc.lp, 50.0, sol.u.clone(), sol.x.clone()).unwrap();
        let report =
            verify_perturbation_bounds(&p, &est, &sol.x, &sol.x, &sol.u, PERTURBATION_TOL)
                .unwrap();
        assert_eq!(report.c_star, 0.0);
        assert!(report.beta_condition_met);
        assert!(report.all_hold);
        for check in &report.checks {
            assert!(check.slack.abs() <= PERTURBATION_TOL, "{check:?}");
        }
    }
}

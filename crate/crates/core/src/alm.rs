//! Augmented-Lagrangian outer loop (proximal method of multipliers): a
//! sequence of penalty problems is solved by SCD, with the dual anchor
//! `ubar`, the primal anchor `xbar` and (on stall) the penalty `beta`
//! updated between rounds:
//!
//! ```text
//! ubar <- ubar - beta * (A xhat - b)
//! xbar <- xhat
//! beta <- beta * growth      when the residual did not halve
//! ```

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::norm_inf;
use crate::lp::{ApproxCertificate, ReferenceKind, StandardFormLp};
use crate::penalty::PenaltyProblem;
use crate::scd::{self, SolveOptions};

#[derive(Debug, Clone)]
pub struct AlmOptions {
    /// Penalty for the first round.
    pub beta0: f64,
    /// Multiplier applied to beta when a round fails to halve the residual.
    pub beta_growth: f64,
    pub max_outer: usize,
    /// Options for the inner SCD solves (threads, step budget, QP-gap target).
    pub inner: SolveOptions,
    /// Stop once the measured max-norm residual drops below this.
    pub target_eps: f64,
    /// Desired relative objective gap; only measurable when `reference` is
    /// set, and never used as a stopping criterion (references are external).
    pub target_delta: f64,
    /// Initial primal anchor; defaults to 0 clamped into the box.
    pub x_bar0: Option<Vec<f64>>,
    /// Initial dual anchor; defaults to 0.
    pub u_bar0: Option<Vec<f64>>,
    /// Reference objective for delta certification.
    pub reference: Option<(f64, ReferenceKind)>,
    /// Wall-clock budget; exceeding it returns the best-so-far outcome with
    /// `timed_out` set instead of an error.
    pub time_limit: Option<std::time::Duration>,
}

impl Default for AlmOptions {
    fn default() -> Self {
        Self {
            beta0: 1.0,
            beta_growth: 2.0,
            max_outer: 20,
            inner: SolveOptions::default(),
            target_eps: 0.1,
            target_delta: 0.1,
            x_bar0: None,
            u_bar0: None,
            reference: None,
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoundStats {
    pub round: usize,
    pub beta: f64,
    /// Max-norm residual of the round's solution.
    pub eps: f64,
    /// Objective (original sense) of the round's solution.
    pub objective: f64,
    pub inner_steps: u64,
    pub inner_converged: bool,
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct AlmOutcome {
    pub x: Vec<f64>,
    /// Final dual estimate; usable as an objective bound reference.
    pub u: Vec<f64>,
    pub certificate: ApproxCertificate,
    pub rounds: Vec<RoundStats>,
    pub timed_out: bool,
    /// Total SCD steps across all rounds.
    pub total_steps: u64,
}

/// Picks a first-round penalty so the inner QP stays well conditioned:
/// the coordinate condition number `L_max / l = beta^2 max_i ||A_:i||^2 + 1`
/// is held near a small constant, and the multiplier updates do the rest.
pub fn default_beta0(lp: &StandardFormLp) -> f64 {
    let max_sq = lp.matrix().max_col_sq_norm();
    if max_sq > 0.0 {
        3.0 / max_sq.sqrt()
    } else {
        1.0
    }
}

pub fn alm_solve(lp: &StandardFormLp, opts: &AlmOptions) -> Result<AlmOutcome> {
    if !(opts.beta0 > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "beta0 must be positive, got {}",
            opts.beta0
        )));
    }
    if opts.beta_growth < 1.0 {
        return Err(Error::InvalidConfig(format!(
            "beta_growth must be >= 1, got {}",
            opts.beta_growth
        )));
    }
    let start = Instant::now();
    let n = lp.num_cols();
    let m = lp.num_rows();
    let mut x_bar = match &opts.x_bar0 {
        Some(x) => {
            if x.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "x_bar0 has {} entries, LP has {n} variables",
                    x.len()
                )));
            }
            let mut x = x.clone();
            lp.clamp_to_bounds(&mut x);
            x
        }
        None => {
            let mut x = vec![0.0; n];
            lp.clamp_to_bounds(&mut x);
            x
        }
    };
    let mut u_bar = match &opts.u_bar0 {
        Some(u) => {
            if u.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "u_bar0 has {} entries, LP has {m} rows",
                    u.len()
                )));
            }
            u.clone()
        }
        None => vec![0.0; m],
    };

    let mut beta = opts.beta0;
    let mut rounds = Vec::new();
    let mut prev_eps = f64::INFINITY;
    let mut nondecrease_streak = 0usize;
    let mut timed_out = false;
    let mut total_steps = 0u64;
    let mut x = x_bar.clone();

    for round in 0..opts.max_outer {
        let round_start = Instant::now();
        let p = PenaltyProblem::new(lp, beta, u_bar.clone(), x_bar.clone())?;
        let mut inner = opts.inner.clone();
        // Decorrelate the coordinate sampling between rounds.
        inner.seed = opts.inner.seed.wrapping_add(round as u64);
        let out = if inner.threads > 1 {
            scd::solve_parallel(&p, &inner)?
        } else {
            scd::solve(&p, &inner)?
        };
        x = out.x;
        total_steps += out.stats.steps;

        let residual = lp.residual(&x)?;
        let eps = norm_inf(&residual);
        rounds.push(RoundStats {
            round,
            beta,
            eps,
            objective: lp.objective(&x),
            inner_steps: out.stats.steps,
            inner_converged: out.stats.converged,
            wall_ms: round_start.elapsed().as_secs_f64() * 1e3,
        });

        // Method-of-multipliers update, consistent with the -ubar^T(Ax-b)
        // term of the penalty objective.
        for (ui, ri) in u_bar.iter_mut().zip(&residual) {
            *ui -= beta * ri;
        }
        x_bar = x.clone();

        if eps <= opts.target_eps {
            break;
        }
        if eps >= prev_eps {
            nondecrease_streak += 1;
            if nondecrease_streak >= 3 {
                return Err(Error::Stalled(format!(
                    "residual did not decrease for 3 consecutive rounds (eps = {eps:.3e} at round {round})"
                )));
            }
        } else {
            nondecrease_streak = 0;
        }
        if eps > 0.5 * prev_eps {
            beta *= opts.beta_growth;
        }
        prev_eps = eps;

        if let Some(limit) = opts.time_limit {
            if start.elapsed() >= limit {
                timed_out = true;
                break;
            }
        }
    }

    let certificate = lp.certify(&x, opts.reference)?;
    Ok(AlmOutcome {
        x,
        u: u_bar,
        certificate,
        rounds,
        timed_out,
        total_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{Sense, SparseMatrix};

    fn edge_lp() -> StandardFormLp {
        // min x1 + x2  s.t.  x1 + x2 = 1, bounds [0,1].
        let m = SparseMatrix::from_triplets(1, 2, &[(0, 0, 1.0), (0, 1, 1.0)]).unwrap();
        let mut lp = StandardFormLp::new(m, vec![1.0], vec![1.0, 1.0], Sense::Minimize).unwrap();
        lp.set_bounds(0, 0.0, 1.0).unwrap();
        lp.set_bounds(1, 0.0, 1.0).unwrap();
        lp
    }

    #[test]
    fn feasible_anchors_terminate_in_one_round() {
        let lp = edge_lp();
        let opts = AlmOptions {
            beta0: 4.0,
            x_bar0: Some(vec![0.5, 0.5]),
            u_bar0: Some(vec![1.0]),
            target_eps: 1e-9,
            ..Default::default()
        };
        let out = alm_solve(&lp, &opts).unwrap();
        assert_eq!(out.rounds.len(), 1);
        assert!(out.certificate.eps < 1e-9);
        assert!((lp.objective(&out.x) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn edge_lp_converges_within_five_rounds() {
        let lp = edge_lp();
        let opts = AlmOptions {
            beta0: 10.0,
            target_eps: 1e-3,
            inner: SolveOptions {
                max_steps: 200_000,
                target_qp_gap: 1e-12,
                ..Default::default()
            },
            ..Default::default()
        };
        let out = alm_solve(&lp, &opts).unwrap();
        assert!(out.rounds.len() <= 5, "took {} rounds", out.rounds.len());
        assert!(out.certificate.eps <= 1e-3);
        assert!((lp.objective(&out.x) - 1.0).abs() < 5e-3);
    }

    #[test]
    fn multiplier_update_is_exact() {
        // One round from zero anchors: u_out = -beta * (A xhat - b) exactly.
        let lp = edge_lp();
        let beta0 = 7.0;
        let opts = AlmOptions {
            beta0,
            max_outer: 1,
            target_eps: 0.0,
            ..Default::default()
        };
        let out = alm_solve(&lp, &opts).unwrap();
        let r = lp.residual(&out.x).unwrap();
        for (ui, ri) in out.u.iter().zip(&r) {
            assert_eq!(*ui, -beta0 * ri);
        }
    }

    #[test]
    fn rejects_bad_options() {
        let lp = edge_lp();
        assert!(matches!(
            alm_solve(
                &lp,
                &AlmOptions {
                    beta0: 0.0,
                    ..Default::default()
                }
            ),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            alm_solve(
                &lp,
                &AlmOptions {
                    beta_growth: 0.5,
                    ..Default::default()
                }
            ),
            Err(Error::InvalidConfig(_))
        ));
    }
}

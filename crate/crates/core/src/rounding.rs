//! Feasibility repair of (eps, delta)-approximate fractional solutions and
//! oblivious rounding schemes producing certified integral solutions.
//!
//! Repairs are scale-and-project maps: a covering solution with residual
//! bounded by eps becomes exactly feasible after multiplying by
//! `1/(1 - alpha)` and clipping to `[0,1]`; a packing solution after dividing
//! by `1 + alpha`. Rounding schemes are oblivious: their factor guarantees
//! hold for any feasible fractional input, optimal or not.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::ApproxCertificate;
use crate::problems::{CoveringConstraints, Graph, MultiwayInstance, PackingConstraints, SetSystem};

/// Absolute slack allowed in post-repair feasibility checks. The repair
/// lemmas are exact in real arithmetic; this absorbs the one-ulp rounding of
/// the scale-and-project map so "exactly feasible" is checkable in floats.
pub const FEAS_GUARD: f64 = 1e-9;

/// Fractional point over the combinatorial decision variables, in `[0,1]`.
#[derive(Debug, Clone)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    pub certificate: ApproxCertificate,
}

impl FractionalSolution {
    pub fn new(x: Vec<f64>, certificate: ApproxCertificate) -> Result<Self> {
        for (i, &xi) in x.iter().enumerate() {
            if !((-1e-12..=1.0 + 1e-12).contains(&xi)) {
                return Err(Error::BoundsViolation(format!(
                    "fractional value x[{i}] = {xi} outside [0,1]"
                )));
            }
        }
        Ok(Self { x, certificate })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    Vertices(Vec<usize>),
    Sets(Vec<usize>),
    /// vertex -> terminal index
    Assignment(Vec<usize>),
}

/// Integral solution with a re-evaluated cost and an explicit feasibility
/// verdict. `feasible == false` is a value (a failed randomized rounding),
/// not an error.
#[derive(Debug, Clone)]
pub struct IntegralSolution {
    pub selection: Selection,
    pub cost: f64,
    pub feasible: bool,
    pub violations: Vec<String>,
}

// ---- feasibility repair -----------------------------------------------------

/// Vertex-cover repair: `Pi_[0,1]( x / (1 - eps) )` satisfies every edge
/// constraint exactly, inflating the objective by at most `1/(1-eps)`.
pub fn repair_vertex_cover(g: &Graph, x_hat: &[f64], eps: f64) -> Result<FractionalSolution> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidConfig(format!("eps = {eps} must lie in [0, 1)")));
    }
    if x_hat.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} vertices",
            x_hat.len(),
            g.num_vertices()
        )));
    }
    let scale = 1.0 / (1.0 - eps);
    let x: Vec<f64> = x_hat.iter().map(|&v| (v * scale).min(1.0)).collect();
    for e in g.edges() {
        let lhs = x[e.u] + x[e.v];
        if lhs < 1.0 - FEAS_GUARD {
            return Err(Error::InfeasibleInput(format!(
                "edge ({}, {}) still uncovered after repair: {lhs} < 1; input violated the eps = {eps} premise",
                e.u, e.v
            )));
        }
    }
    FractionalSolution::new(
        x,
        ApproxCertificate {
            eps: 0.0,
            delta: None,
            reference_kind: None,
        },
    )
}

/// Exact minimum infeasibility measure `q(P)` of an integer-data covering
/// program: the smallest gap `b_j - A_j x` over integral points violating a
/// row. Enumerates each row's support (must have <= 20 variables).
pub fn q_p_exact(cov: &CoveringConstraints) -> Result<f64> {
    let integral = |v: f64| v.fract() == 0.0;
    for (j, row) in cov.rows.iter().enumerate() {
        if row.iter().any(|&(_, a)| !integral(a)) || !integral(cov.rhs[j]) {
            return Err(Error::InvalidConfig(
                "q(P) requires integer covering data".into(),
            ));
        }
        if row.len() > 20 {
            return Err(Error::TooLarge(format!(
                "row {j} has {} variables; exact q(P) enumerates at most 2^20 points",
                row.len()
            )));
        }
    }
    let mut q = f64::INFINITY;
    for (j, row) in cov.rows.iter().enumerate() {
        let k = row.len();
        for mask in 0u32..(1u32 << k) {
            let mut val = 0.0;
            for (t, &(_, a)) in row.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    val += a;
                }
            }
            if val < cov.rhs[j] {
                q = q.min(cov.rhs[j] - val);
            }
        }
    }
    if q.is_finite() {
        Ok(q)
    } else {
        Err(Error::InvalidConfig(
            "trivial covering program: no integral point violates any row".into(),
        ))
    }
}

/// General covering repair with `alpha = eps / q(P)`:
/// `Pi_[0,1]( x / (1 - alpha) )` is feasible for `A x >= b`.
pub fn repair_covering(
    cov: &CoveringConstraints,
    x_hat: &[f64],
    eps: f64,
    q_p: f64,
) -> Result<FractionalSolution> {
    if !(q_p > 0.0) {
        return Err(Error::InvalidConfig(format!("q(P) = {q_p} must be positive")));
    }
    let alpha = eps / q_p;
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidConfig(format!(
            "alpha = eps/q(P) = {alpha} must lie in [0, 1)"
        )));
    }
    if x_hat.len() != cov.num_vars {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} variables",
            x_hat.len(),
            cov.num_vars
        )));
    }
    let scale = 1.0 / (1.0 - alpha);
    let x: Vec<f64> = x_hat.iter().map(|&v| (v * scale).min(1.0)).collect();
    for j in 0..cov.rows.len() {
        let lhs = cov.row_value(j, &x);
        if lhs < cov.rhs[j] - FEAS_GUARD {
            return Err(Error::InfeasibleInput(format!(
                "covering row {j} infeasible after repair: {lhs} < {}; input violated the eps premise",
                cov.rhs[j]
            )));
        }
    }
    FractionalSolution::new(
        x,
        ApproxCertificate {
            eps: 0.0,
            delta: None,
            reference_kind: None,
        },
    )
}

/// Packing repair with the tight inflation factor
/// `alpha = max_j ((rows_j . u - cap_j) / cap_j)_+`: `u / (1 + alpha)`
/// satisfies every packing row.
pub fn repair_packing(pack: &PackingConstraints, u_hat: &[f64]) -> Result<FractionalSolution> {
    if u_hat.len() != pack.num_vars {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} variables",
            u_hat.len(),
            pack.num_vars
        )));
    }
    for (i, &v) in u_hat.iter().enumerate() {
        if !((-1e-12..=1.0 + 1e-12).contains(&v)) {
            return Err(Error::BoundsViolation(format!(
                "u[{i}] = {v} outside [0,1]"
            )));
        }
    }
    let mut alpha = 0.0f64;
    for j in 0..pack.rows.len() {
        let viol = (pack.row_value(j, u_hat) - pack.caps[j]) / pack.caps[j];
        alpha = alpha.max(viol);
    }
    let scale = 1.0 / (1.0 + alpha);
    let x: Vec<f64> = u_hat.iter().map(|&v| (v * scale).clamp(0.0, 1.0)).collect();
    for j in 0..pack.rows.len() {
        let lhs = pack.row_value(j, &x);
        if lhs > pack.caps[j] + FEAS_GUARD {
            return Err(Error::InfeasibleInput(format!(
                "packing row {j} infeasible after repair: {lhs} > {}",
                pack.caps[j]
            )));
        }
    }
    FractionalSolution::new(
        x,
        ApproxCertificate {
            eps: 0.0,
            delta: None,
            reference_kind: None,
        },
    )
}

// ---- rounding schemes ---------------------------------------------------------

/// Threshold comparisons use a closed `>=` with a tiny guard so exact
/// boundary solutions (x = 1/f) round to feasible covers.
#[inline]
fn above_threshold(x: f64, threshold: f64) -> bool {
    x >= threshold - FEAS_GUARD
}

/// Half-rounding for vertex cover: select `{v : x_v >= 1/2}`. Input must be
/// feasible (repair first); output covers every edge with cost at most twice
/// the fractional cost.
pub fn round_vertex_cover(g: &Graph, fs: &FractionalSolution) -> Result<IntegralSolution> {
    let x = &fs.x;
    if x.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} vertices",
            x.len(),
            g.num_vertices()
        )));
    }
    for e in g.edges() {
        if x[e.u] + x[e.v] < 1.0 - FEAS_GUARD {
            return Err(Error::InfeasibleInput(format!(
                "fractional input violates edge ({}, {})",
                e.u, e.v
            )));
        }
    }
    let selected: Vec<usize> = (0..g.num_vertices())
        .filter(|&v| above_threshold(x[v], 0.5))
        .collect();
    let in_cover: Vec<bool> = {
        let mut m = vec![false; g.num_vertices()];
        for &v in &selected {
            m[v] = true;
        }
        m
    };
    let mut violations = Vec::new();
    for e in g.edges() {
        if !in_cover[e.u] && !in_cover[e.v] {
            violations.push(format!("edge ({}, {}) uncovered", e.u, e.v));
        }
    }
    let cost: f64 = selected.iter().map(|&v| g.vertex_costs()[v]).sum();
    let frac_cost: f64 = x
        .iter()
        .zip(g.vertex_costs())
        .map(|(xi, ci)| xi * ci)
        .sum();
    debug_assert!(cost <= 2.0 * frac_cost + FEAS_GUARD * g.num_vertices() as f64);
    Ok(IntegralSolution {
        feasible: violations.is_empty(),
        violations,
        selection: Selection::Vertices(selected),
        cost,
    })
}

/// Threshold rounding for set cover: pick `{s : x_s >= 1/f}` where `f` is the
/// max number of sets containing one element. f-factor guarantee.
pub fn round_set_cover_threshold(
    ss: &SetSystem,
    fs: &FractionalSolution,
    f: usize,
) -> Result<IntegralSolution> {
    if f < 1 {
        return Err(Error::InvalidConfig("f must be >= 1".into()));
    }
    let x = &fs.x;
    if x.len() != ss.num_sets() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} sets",
            x.len(),
            ss.num_sets()
        )));
    }
    let idx = ss.element_index();
    for (a, sets) in idx.iter().enumerate() {
        let total: f64 = sets.iter().map(|&(s, _)| x[s]).sum();
        if total < 1.0 - FEAS_GUARD {
            return Err(Error::InfeasibleInput(format!(
                "element {a} fractionally uncovered ({total} < 1)"
            )));
        }
    }
    let threshold = 1.0 / f as f64;
    let selected: Vec<usize> = (0..ss.num_sets())
        .filter(|&s| above_threshold(x[s], threshold))
        .collect();
    let chosen: Vec<bool> = {
        let mut m = vec![false; ss.num_sets()];
        for &s in &selected {
            m[s] = true;
        }
        m
    };
    let mut violations = Vec::new();
    for (a, sets) in idx.iter().enumerate() {
        if !sets.iter().any(|&(s, _)| chosen[s]) {
            violations.push(format!("element {a} uncovered"));
        }
    }
    let cost: f64 = selected.iter().map(|&s| ss.sets()[s].cost).sum();
    Ok(IntegralSolution {
        feasible: violations.is_empty(),
        violations,
        selection: Selection::Sets(selected),
        cost,
    })
}

/// Randomized set cover: include each set independently with probability
/// `min(1, d * x_s)`, `d = ceil(ln(2N))` over `N` elements. The amplification
/// keeps the expected O(log N) factor while covering with probability >= 1/2;
/// an uncovered sample is reported as an infeasible value, not an error.
pub fn round_set_cover_randomized(
    ss: &SetSystem,
    fs: &FractionalSolution,
    seed: u64,
) -> Result<IntegralSolution> {
    let x = &fs.x;
    if x.len() != ss.num_sets() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} sets",
            x.len(),
            ss.num_sets()
        )));
    }
    let n_elems = ss.num_elements().max(1);
    let d = (2.0 * n_elems as f64).ln().ceil().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selected = Vec::new();
    for s in 0..ss.num_sets() {
        let p = (d * x[s]).min(1.0);
        if rng.gen::<f64>() < p {
            selected.push(s);
        }
    }
    let chosen: Vec<bool> = {
        let mut m = vec![false; ss.num_sets()];
        for &s in &selected {
            m[s] = true;
        }
        m
    };
    let idx = ss.element_index();
    let mut violations = Vec::new();
    for (a, sets) in idx.iter().enumerate() {
        if !sets.iter().any(|&(s, _)| chosen[s]) {
            violations.push(format!("element {a} uncovered"));
        }
    }
    let cost: f64 = selected.iter().map(|&s| ss.sets()[s].cost).sum();
    Ok(IntegralSolution {
        feasible: violations.is_empty(),
        violations,
        selection: Selection::Sets(selected),
        cost,
    })
}

#[derive(Debug, Clone)]
pub struct SetPackingRound {
    pub solution: IntegralSolution,
    /// Sets whose sampling probability x_s/(k*theta) exceeded 1 and was capped.
    pub capped_probabilities: usize,
    pub sampled: usize,
    pub deleted: usize,
}

/// Randomized set-packing rounding (sample-and-alter):
///
/// 1. choose set `s` with probability `x_s / (k * theta)`, capped at 1;
/// 2. for every chosen `s` and element `a ∈ s`, mark `s` for deletion when
///    the chosen sets strictly heavier than `s` on `a` (ties broken by set
///    index) together with `s` itself overweigh the unit capacity;
/// 3. delete marked sets.
///
/// Counting the set's own weight and breaking ties totally is what makes the
/// survivor weights per element provably sum to at most 1.
pub fn round_set_packing(
    ss: &SetSystem,
    fs: &FractionalSolution,
    theta: f64,
    seed: u64,
) -> Result<SetPackingRound> {
    if !(theta > 0.0) {
        return Err(Error::InvalidConfig(format!("theta = {theta} must be positive")));
    }
    let x = &fs.x;
    if x.len() != ss.num_sets() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} sets",
            x.len(),
            ss.num_sets()
        )));
    }
    let k = ss.max_frequency().max(1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = Vec::new();
    let mut capped = 0usize;
    for s in 0..ss.num_sets() {
        let raw = x[s] / (k * theta);
        if raw > 1.0 {
            capped += 1;
        }
        if rng.gen::<f64>() < raw.min(1.0) {
            chosen.push(s);
        }
    }
    let is_chosen: Vec<bool> = {
        let mut m = vec![false; ss.num_sets()];
        for &s in &chosen {
            m[s] = true;
        }
        m
    };

    // Deletion events per element: order chosen sets by (weight, index)
    // descending and kill any set whose prefix (including itself) overflows.
    let mut marked = vec![false; ss.num_sets()];
    let idx = ss.element_index();
    for sets in idx.iter() {
        let mut present: Vec<(f64, usize)> = sets
            .iter()
            .filter(|&&(s, _)| is_chosen[s])
            .map(|&(s, w)| (w, s))
            .collect();
        if present.is_empty() {
            continue;
        }
        present.sort_by(|a, b| b.partial_cmp(a).expect("finite weights"));
        let mut prefix = 0.0;
        for &(w, s) in &present {
            if prefix + w > 1.0 {
                marked[s] = true;
            }
            prefix += w;
        }
    }
    let kept: Vec<usize> = chosen.iter().copied().filter(|&s| !marked[s]).collect();
    let deleted = chosen.len() - kept.len();

    // Validity: per element, kept weights sum to at most 1.
    let keep_mask: Vec<bool> = {
        let mut m = vec![false; ss.num_sets()];
        for &s in &kept {
            m[s] = true;
        }
        m
    };
    let mut violations = Vec::new();
    for (a, sets) in idx.iter().enumerate() {
        let total: f64 = sets
            .iter()
            .filter(|&&(s, _)| keep_mask[s])
            .map(|&(_, w)| w)
            .sum();
        if total > 1.0 + FEAS_GUARD {
            violations.push(format!("element {a} overweight: {total}"));
        }
    }
    let cost: f64 = kept.iter().map(|&s| ss.sets()[s].cost).sum();
    Ok(SetPackingRound {
        solution: IntegralSolution {
            feasible: violations.is_empty(),
            violations,
            selection: Selection::Sets(kept),
            cost,
        },
        capped_probabilities: capped,
        sampled: chosen.len(),
        deleted,
    })
}

/// Single-threshold randomized multiway-cut rounding: draw `theta ~ U(0,1)`
/// and a uniform permutation `sigma` of terminals; for the first k-1
/// terminals in `sigma`, assign every unassigned vertex with
/// `x_v^sigma(t) >= theta`; the remainder goes to the last terminal.
/// Terminals are pre-assigned to themselves and never move.
pub fn round_multiway_cut(
    mi: &MultiwayInstance,
    fs: &FractionalSolution,
    seed: u64,
) -> Result<IntegralSolution> {
    let k = mi.k();
    let n = mi.graph.num_vertices();
    let x = &fs.x;
    if x.len() != n * k {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {n} vertices x {k} terminals",
            x.len()
        )));
    }
    for v in 0..n {
        let block = &x[v * k..(v + 1) * k];
        let sum: f64 = block.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || block.iter().any(|&b| b < -1e-12) {
            return Err(Error::InfeasibleInput(format!(
                "vertex {v} block is not on the simplex (sum = {sum})"
            )));
        }
    }
    for (j, &t) in mi.terminals.iter().enumerate() {
        if (x[t * k + j] - 1.0).abs() > 1e-9 {
            return Err(Error::InfeasibleInput(format!(
                "terminal {t} is not fixed to corner {j}"
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = loop {
        let t: f64 = rng.gen();
        if t > 0.0 {
            break t;
        }
    };
    let mut sigma: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = rng.gen_range(0..=i);
        sigma.swap(i, j);
    }

    let mut assignment = vec![usize::MAX; n];
    for (j, &t) in mi.terminals.iter().enumerate() {
        assignment[t] = j;
    }
    for &i in sigma.iter().take(k - 1) {
        for v in 0..n {
            if assignment[v] == usize::MAX && x[v * k + i] >= theta {
                assignment[v] = i;
            }
        }
    }
    let last = sigma[k - 1];
    for slot in assignment.iter_mut() {
        if *slot == usize::MAX {
            *slot = last;
        }
    }

    let cost = mi.cut_cost(&assignment);
    // Terminals sit in their own parts by construction.
    let feasible = mi
        .terminals
        .iter()
        .enumerate()
        .all(|(j, &t)| assignment[t] == j);
    Ok(IntegralSolution {
        selection: Selection::Assignment(assignment),
        cost,
        feasible,
        violations: Vec::new(),
    })
}

/// Runs a randomized rounder once per seed and keeps the best feasible
/// result (lowest cost when `minimize`, highest otherwise). Errors only when
/// every repetition failed.
pub fn best_of<F>(seeds: &[u64], minimize: bool, mut rounder: F) -> Result<IntegralSolution>
where
    F: FnMut(u64) -> Result<IntegralSolution>,
{
    let mut best: Option<IntegralSolution> = None;
    for &seed in seeds {
        let candidate = rounder(seed)?;
        if !candidate.feasible {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                if minimize {
                    candidate.cost < b.cost
                } else {
                    candidate.cost > b.cost
                }
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    best.ok_or(Error::AllRepetitionsFailed(seeds.len()))
}

/// Convenience: seeds `base, base+1, ..., base+reps-1`.
pub fn seed_range(base: u64, reps: usize) -> Vec<u64> {
    (0..reps as u64).map(|i| base.wrapping_add(i)).collect()
}

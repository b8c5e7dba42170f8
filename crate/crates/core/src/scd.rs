//! Stochastic coordinate descent on the penalty objective: serial steps,
//! block steps with simplex projection, and an asynchronous shared-memory
//! parallel variant.
//!
//! Every step samples a coordinate (or block) uniformly with replacement and
//! moves it by `step_safety / L_max` along the negative partial gradient,
//! clamping to the box. The residual `r = Ax - b` is maintained incrementally
//! and refreshed exactly once per epoch (`n` coordinate steps) to cancel
//! floating-point drift. Stopping uses a strong-convexity surrogate for the
//! QP gap: `f(x) - f* <= ||g_proj||^2 / (2 l)` with `l = 1/beta`.
//!
//! The parallel variant follows the lock-free shared-memory recipe: every
//! worker owns an independent RNG stream derived from the master seed, reads
//! possibly-stale `x` and `r`, and publishes each coordinate update and
//! residual delta with component-atomic read-modify-writes. An epoch barrier
//! recomputes `r` from `x` exactly. With one thread the trajectory is
//! bitwise identical to the serial solver.

use std::sync::atomic::{AtomicU64, AtomicU8, Ordering};
use std::sync::Barrier;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::ApproxCertificate;
use crate::penalty::PenaltyProblem;

/// Smallest automatic step-safety factor before the solver gives up.
const MIN_STEP_SAFETY: f64 = 1.0 / 1024.0;

/// Mutable solver state: iterate, maintained residual and counters.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub x: Vec<f64>,
    /// Maintained residual `r = Ax - b` (drift-bounded between refreshes).
    pub r: Vec<f64>,
    pub epoch: u64,
    pub steps: u64,
    pub rng_seed: u64,
    /// Objective cache, refreshed at each epoch boundary.
    pub f_current: f64,
}

impl SolverState {
    /// Starts from `x0` clamped into the box, with an exact residual.
    pub fn new(p: &PenaltyProblem, mut x0: Vec<f64>, rng_seed: u64) -> Result<Self> {
        if x0.len() != p.lp().num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "x0 has {} entries but LP has {} variables",
                x0.len(),
                p.lp().num_cols()
            )));
        }
        p.lp().clamp_to_bounds(&mut x0);
        let r = p.lp().residual(&x0)?;
        let f_current = p.objective_with_residual(&x0, &r);
        Ok(Self {
            x: x0,
            r,
            epoch: 0,
            steps: 0,
            rng_seed,
            f_current,
        })
    }

    /// Recomputes `r` exactly from `x` and refreshes the objective cache.
    pub fn refresh(&mut self, p: &PenaltyProblem) {
        p.lp().matrix().mul_vec_into(&self.x, &mut self.r);
        for (ri, bi) in self.r.iter_mut().zip(p.lp().rhs()) {
            *ri -= bi;
        }
        self.f_current = p.objective_with_residual(&self.x, &self.r);
    }

    /// Max-norm drift between the maintained residual and the exact one.
    pub fn residual_drift(&self, p: &PenaltyProblem) -> f64 {
        let exact = p.lp().residual(&self.x).expect("state dims match");
        self.r
            .iter()
            .zip(&exact)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// A coordinate block; `simplex` requests Euclidean projection onto the
/// probability simplex after the gradient step (bounds must be `[0,1]`).
#[derive(Debug, Clone)]
pub struct Block {
    pub indices: Vec<usize>,
    pub simplex: bool,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_steps: u64,
    /// Target on the QP-gap surrogate; reaching it stops the solve.
    pub target_qp_gap: f64,
    /// Steps between surrogate checks; 0 means every epoch. Checks are
    /// quantized to epoch boundaries so serial and parallel runs share the
    /// same schedule.
    pub check_interval: u64,
    pub threads: usize,
    /// Disjoint, covering index blocks; when present each step updates one
    /// block instead of one coordinate.
    pub blocks: Option<Vec<Block>>,
    /// Multiplier on the `1/L_max` step. Halved automatically when an epoch
    /// check sees the objective increase (possible under heavy asynchrony).
    pub step_safety: f64,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_steps: 2_000_000,
            target_qp_gap: 1e-9,
            check_interval: 0,
            threads: 1,
            blocks: None,
            step_safety: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveStats {
    pub steps: u64,
    pub epochs: u64,
    pub wall_ms: f64,
    pub f_final: f64,
    /// Last measured QP-gap surrogate (`f - f*` upper bound).
    pub qp_gap: f64,
    pub step_safety_used: f64,
    pub threads: usize,
    /// True when the surrogate reached the target (vs. hitting max_steps).
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub x: Vec<f64>,
    pub certificate: ApproxCertificate,
    pub stats: SolveStats,
}

/// Euclidean projection onto the probability simplex `{v >= 0, sum v = 1}`.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&vi| (vi - theta).max(0.0)).collect()
}

#[inline]
fn clamp_step(p: &PenaltyProblem, inv_l: f64, a_dot_r: f64, xi: f64, i: usize) -> f64 {
    let g = p.grad_component_cached(a_dot_r, xi, i);
    (xi - inv_l * g).clamp(p.lp().lower()[i], p.lp().upper()[i])
}

/// One coordinate step of the serial solver: clamped gradient move on `x_i`
/// with an incremental residual update.
pub fn scd_step(p: &PenaltyProblem, s: &mut SolverState, i: usize) {
    scd_step_scaled(p, s, i, 1.0 / p.l_max());
}

fn scd_step_scaled(p: &PenaltyProblem, s: &mut SolverState, i: usize, inv_l: f64) {
    let (rows, vals) = p.lp().matrix().col(i);
    let mut a_dot_r = 0.0;
    for (&row, &v) in rows.iter().zip(vals) {
        a_dot_r += v * s.r[row];
    }
    let xi = s.x[i];
    let new = clamp_step(p, inv_l, a_dot_r, xi, i);
    let dx = new - xi;
    if dx != 0.0 {
        s.x[i] = new;
        for (&row, &v) in rows.iter().zip(vals) {
            s.r[row] += v * dx;
        }
    }
}

/// One block step: simultaneous gradient move on every block coordinate,
/// then simplex projection (when flagged) or a per-coordinate clamp.
pub fn block_step(p: &PenaltyProblem, s: &mut SolverState, block: &Block) -> Result<()> {
    block_step_scaled(p, s, block, 1.0 / p.l_max())
}

fn block_step_scaled(
    p: &PenaltyProblem,
    s: &mut SolverState,
    block: &Block,
    inv_l: f64,
) -> Result<()> {
    if block.simplex {
        validate_simplex_bounds(p, block)?;
    }
    let mut target: Vec<f64> = Vec::with_capacity(block.indices.len());
    for &i in &block.indices {
        let (rows, vals) = p.lp().matrix().col(i);
        let mut a_dot_r = 0.0;
        for (&row, &v) in rows.iter().zip(vals) {
            a_dot_r += v * s.r[row];
        }
        let g = p.grad_component_cached(a_dot_r, s.x[i], i);
        target.push(s.x[i] - inv_l * g);
    }
    if block.simplex {
        target = project_simplex(&target);
    } else {
        for (t, &i) in target.iter_mut().zip(&block.indices) {
            *t = t.clamp(p.lp().lower()[i], p.lp().upper()[i]);
        }
    }
    for (&i, &new) in block.indices.iter().zip(&target) {
        let dx = new - s.x[i];
        if dx != 0.0 {
            s.x[i] = new;
            let (rows, vals) = p.lp().matrix().col(i);
            for (&row, &v) in rows.iter().zip(vals) {
                s.r[row] += v * dx;
            }
        }
    }
    Ok(())
}

fn validate_simplex_bounds(p: &PenaltyProblem, block: &Block) -> Result<()> {
    for &i in &block.indices {
        if p.lp().lower()[i] != 0.0 || p.lp().upper()[i] != 1.0 {
            return Err(Error::InvalidConfig(format!(
                "simplex block contains variable {i} with bounds [{}, {}]; need [0, 1]",
                p.lp().lower()[i],
                p.lp().upper()[i]
            )));
        }
    }
    Ok(())
}

fn validate_blocks(p: &PenaltyProblem, blocks: &[Block]) -> Result<()> {
    let n = p.lp().num_cols();
    let mut seen = vec![false; n];
    for b in blocks {
        if b.indices.is_empty() {
            return Err(Error::InvalidConfig("empty block".into()));
        }
        for &i in &b.indices {
            if i >= n {
                return Err(Error::InvalidConfig(format!("block index {i} out of range")));
            }
            if seen[i] {
                return Err(Error::InvalidConfig(format!(
                    "blocks are not disjoint: variable {i} repeated"
                )));
            }
            seen[i] = true;
        }
        if b.simplex {
            validate_simplex_bounds(p, b)?;
        }
    }
    if let Some(miss) = seen.iter().position(|&s| !s) {
        return Err(Error::InvalidConfig(format!(
            "blocks do not cover all variables: {miss} missing"
        )));
    }
    Ok(())
}

/// QP-gap surrogate `||g_proj||^2 / (2 l)`. Components pinned at a box bound
/// with an outward gradient are dropped; inside a simplex block the per-block
/// mean over the support plays the role of the multiplier of the sum
/// constraint.
pub fn qp_gap_surrogate(p: &PenaltyProblem, x: &[f64], r: &[f64], blocks: Option<&[Block]>) -> f64 {
    let g = p.gradient(x, r);
    let lo = p.lp().lower();
    let hi = p.lp().upper();
    let mut in_simplex = vec![false; x.len()];
    let mut acc = 0.0;
    if let Some(blocks) = blocks {
        for b in blocks.iter().filter(|b| b.simplex) {
            let support: Vec<usize> = b.indices.iter().copied().filter(|&i| x[i] > 0.0).collect();
            let mu = if support.is_empty() {
                0.0
            } else {
                support.iter().map(|&i| g[i]).sum::<f64>() / support.len() as f64
            };
            for &i in &b.indices {
                in_simplex[i] = true;
                let gi = g[i] - mu;
                let proj = if x[i] == 0.0 { gi.min(0.0) } else { gi };
                acc += proj * proj;
            }
        }
    }
    for i in 0..x.len() {
        if in_simplex[i] {
            continue;
        }
        let gi = g[i];
        let pinned_low = x[i] == lo[i] && gi > 0.0;
        let pinned_high = x[i] == hi[i] && gi < 0.0;
        if !(pinned_low || pinned_high) {
            acc += gi * gi;
        }
    }
    acc * p.beta() / 2.0
}

/// Shared epoch bookkeeping for the serial and parallel drivers, so both
/// follow exactly the same schedule and stopping logic.
struct EpochControl {
    epoch_len: u64,
    max_steps: u64,
    check_interval: u64,
    target_gap: f64,
    steps: u64,
    epochs: u64,
    since_check: u64,
    f_prev: f64,
    step_safety: f64,
    gap: f64,
    converged: bool,
}

enum EpochDecision {
    Continue,
    Stop,
    Diverged,
}

impl EpochControl {
    fn new(opts: &SolveOptions, epoch_len: u64, f0: f64) -> Self {
        Self {
            epoch_len,
            max_steps: opts.max_steps,
            check_interval: if opts.check_interval == 0 {
                epoch_len
            } else {
                opts.check_interval
            },
            target_gap: opts.target_qp_gap,
            steps: 0,
            epochs: 0,
            since_check: 0,
            f_prev: f0,
            step_safety: opts.step_safety,
            gap: f64::INFINITY,
            converged: false,
        }
    }

    fn next_budget(&self) -> u64 {
        self.epoch_len.min(self.max_steps - self.steps)
    }

    /// Called after an epoch's refresh with the fresh objective; `gap_fn` is
    /// evaluated lazily only when a check is due.
    fn after_epoch(&mut self, budget: u64, f_new: f64, gap_fn: impl FnOnce() -> f64) -> EpochDecision {
        self.steps += budget;
        self.epochs += 1;
        self.since_check += budget;
        if !f_new.is_finite() {
            return EpochDecision::Diverged;
        }
        if f_new > self.f_prev + 1e-9 * (1.0 + self.f_prev.abs()) {
            // Objective went up across the epoch: step too aggressive for the
            // current asynchrony level.
            self.step_safety *= 0.5;
            if self.step_safety < MIN_STEP_SAFETY {
                return EpochDecision::Diverged;
            }
        }
        self.f_prev = f_new;
        if self.since_check >= self.check_interval {
            self.since_check = 0;
            self.gap = gap_fn();
            if self.gap <= self.target_gap {
                self.converged = true;
                return EpochDecision::Stop;
            }
        }
        if self.steps >= self.max_steps {
            return EpochDecision::Stop;
        }
        EpochDecision::Continue
    }
}

enum Sampler<'a> {
    Coordinates(usize),
    Blocks(&'a [Block]),
}

impl<'a> Sampler<'a> {
    fn len(&self) -> u64 {
        match self {
            Sampler::Coordinates(n) => *n as u64,
            Sampler::Blocks(b) => b.len() as u64,
        }
    }
}

fn finish(
    p: &PenaltyProblem,
    mut state: SolverState,
    ctl: &EpochControl,
    opts: &SolveOptions,
    start: Instant,
) -> Result<SolveOutcome> {
    // Simplex blocks get one exact final projection so downstream consumers
    // can rely on feasible blocks even after asynchronous updates.
    if let Some(blocks) = &opts.blocks {
        for b in blocks.iter().filter(|b| b.simplex) {
            let vals: Vec<f64> = b.indices.iter().map(|&i| state.x[i]).collect();
            let proj = project_simplex(&vals);
            for (&i, &v) in b.indices.iter().zip(&proj) {
                state.x[i] = v;
            }
        }
        state.refresh(p);
    }
    let certificate = p.lp().certify(&state.x, None)?;
    let stats = SolveStats {
        steps: ctl.steps,
        epochs: ctl.epochs,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        f_final: state.f_current,
        qp_gap: ctl.gap,
        step_safety_used: ctl.step_safety,
        threads: opts.threads,
        converged: ctl.converged,
    };
    Ok(SolveOutcome {
        x: state.x,
        certificate,
        stats,
    })
}

/// Serial SCD on `f_beta`, starting from the proximal anchor `xbar` clamped
/// into the box. Samples coordinates (or blocks) uniformly with replacement.
pub fn solve(p: &PenaltyProblem, opts: &SolveOptions) -> Result<SolveOutcome> {
    let start = Instant::now();
    let n = p.lp().num_cols();
    if n == 0 {
        return Err(Error::InvalidConfig("LP has no variables".into()));
    }
    if let Some(blocks) = &opts.blocks {
        validate_blocks(p, blocks)?;
    }
    let sampler = match &opts.blocks {
        Some(blocks) => Sampler::Blocks(blocks),
        None => Sampler::Coordinates(n),
    };
    let mut state = SolverState::new(p, p.x_bar().to_vec(), opts.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(0);
    let l_max = p.l_max();
    let mut ctl = EpochControl::new(opts, sampler.len(), state.f_current);

    loop {
        let budget = ctl.next_budget();
        if budget == 0 {
            break;
        }
        let inv_l = ctl.step_safety / l_max;
        for _ in 0..budget {
            match &sampler {
                Sampler::Coordinates(n) => {
                    let i = rng.gen_range(0..*n);
                    scd_step_scaled(p, &mut state, i, inv_l);
                }
                Sampler::Blocks(blocks) => {
                    let b = rng.gen_range(0..blocks.len());
                    block_step_scaled(p, &mut state, &blocks[b], inv_l)?;
                }
            }
        }
        state.refresh(p);
        state.steps += budget;
        state.epoch += 1;
        let f_new = state.f_current;
        match ctl.after_epoch(budget, f_new, || {
            qp_gap_surrogate(p, &state.x, &state.r, opts.blocks.as_deref())
        }) {
            EpochDecision::Continue => {}
            EpochDecision::Stop => break,
            EpochDecision::Diverged => {
                return Err(Error::Diverged(format!(
                    "objective {f_new} after {} steps (beta = {})",
                    ctl.steps,
                    p.beta()
                )))
            }
        }
    }
    finish(p, state, &ctl, opts, start)
}

// ---- asynchronous parallel driver -----------------------------------------

#[inline]
fn load_f64(a: &AtomicU64) -> f64 {
    f64::from_bits(a.load(Ordering::Relaxed))
}

#[inline]
fn add_f64(a: &AtomicU64, v: f64) {
    let mut cur = a.load(Ordering::Relaxed);
    loop {
        let new = (f64::from_bits(cur) + v).to_bits();
        match a.compare_exchange_weak(cur, new, Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => return,
            Err(actual) => cur = actual,
        }
    }
}

const CTL_CONTINUE: u8 = 0;
const CTL_STOP: u8 = 1;
const CTL_DIVERGED: u8 = 2;

struct SharedState {
    x: Vec<AtomicU64>,
    r: Vec<AtomicU64>,
    control: AtomicU8,
    inv_l_bits: AtomicU64,
}

impl SharedState {
    fn snapshot_x(&self) -> Vec<f64> {
        self.x.iter().map(load_f64).collect()
    }
}

fn async_coordinate_step(p: &PenaltyProblem, shared: &SharedState, inv_l: f64, i: usize) {
    let (rows, vals) = p.lp().matrix().col(i);
    let mut a_dot_r = 0.0;
    for (&row, &v) in rows.iter().zip(vals) {
        a_dot_r += v * load_f64(&shared.r[row]);
    }
    let mut cur_bits = shared.x[i].load(Ordering::Relaxed);
    loop {
        let cur = f64::from_bits(cur_bits);
        let new = clamp_step(p, inv_l, a_dot_r, cur, i);
        let dx = new - cur;
        if dx == 0.0 {
            return;
        }
        match shared.x[i].compare_exchange(
            cur_bits,
            new.to_bits(),
            Ordering::Relaxed,
            Ordering::Relaxed,
        ) {
            Ok(_) => {
                for (&row, &v) in rows.iter().zip(vals) {
                    add_f64(&shared.r[row], v * dx);
                }
                return;
            }
            Err(actual) => cur_bits = actual,
        }
    }
}

fn async_block_step(p: &PenaltyProblem, shared: &SharedState, inv_l: f64, block: &Block) {
    let mut target: Vec<f64> = Vec::with_capacity(block.indices.len());
    let mut read: Vec<f64> = Vec::with_capacity(block.indices.len());
    for &i in &block.indices {
        let (rows, vals) = p.lp().matrix().col(i);
        let mut a_dot_r = 0.0;
        for (&row, &v) in rows.iter().zip(vals) {
            a_dot_r += v * load_f64(&shared.r[row]);
        }
        let xi = load_f64(&shared.x[i]);
        let g = p.grad_component_cached(a_dot_r, xi, i);
        read.push(xi);
        target.push(xi - inv_l * g);
    }
    if block.simplex {
        target = project_simplex(&target);
    } else {
        for (t, &i) in target.iter_mut().zip(&block.indices) {
            *t = t.clamp(p.lp().lower()[i], p.lp().upper()[i]);
        }
    }
    for (&i, &new) in block.indices.iter().zip(&target) {
        // swap keeps x/r consistent even if another thread touched x_i since
        // our read: the residual delta uses the value actually replaced.
        let old = f64::from_bits(shared.x[i].swap(new.to_bits(), Ordering::Relaxed));
        let dx = new - old;
        if dx != 0.0 {
            let (rows, vals) = p.lp().matrix().col(i);
            for (&row, &v) in rows.iter().zip(vals) {
                add_f64(&shared.r[row], v * dx);
            }
        }
    }
}

/// Asynchronous parallel SCD. Same contract as [`solve`]; the result is
/// nondeterministic for `threads > 1` but must satisfy the same certificate
/// checks. `threads == 1` reproduces [`solve`] bit for bit.
pub fn solve_parallel(p: &PenaltyProblem, opts: &SolveOptions) -> Result<SolveOutcome> {
    let start = Instant::now();
    let n = p.lp().num_cols();
    if n == 0 {
        return Err(Error::InvalidConfig("LP has no variables".into()));
    }
    if opts.threads == 0 {
        return Err(Error::InvalidConfig("threads must be >= 1".into()));
    }
    if let Some(blocks) = &opts.blocks {
        validate_blocks(p, blocks)?;
    }
    let threads = opts.threads;
    let state0 = SolverState::new(p, p.x_bar().to_vec(), opts.seed)?;
    let sampler_len = match &opts.blocks {
        Some(blocks) => blocks.len(),
        None => n,
    };
    let l_max = p.l_max();
    let mut ctl = EpochControl::new(opts, sampler_len as u64, state0.f_current);

    let shared = SharedState {
        x: state0.x.iter().map(|&v| AtomicU64::new(v.to_bits())).collect(),
        r: state0.r.iter().map(|&v| AtomicU64::new(v.to_bits())).collect(),
        control: AtomicU8::new(CTL_CONTINUE),
        inv_l_bits: AtomicU64::new((ctl.step_safety / l_max).to_bits()),
    };
    let barrier = Barrier::new(threads);
    // The epoch loop is data-parallel between two barriers; thread 0 plays
    // leader for the refresh/stop logic so the control flow is deterministic.
    let ctl_cell = std::sync::Mutex::new(&mut ctl);

    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::new();
        for t in 0..threads {
            let shared = &shared;
            let barrier = &barrier;
            let ctl_cell = &ctl_cell;
            let opts_ref = &*opts;
            handles.push(scope.spawn(move || -> Result<()> {
                let mut rng = ChaCha8Rng::seed_from_u64(opts_ref.seed);
                rng.set_stream(t as u64);
                let mut rbuf = vec![0.0f64; p.lp().num_rows()];
                loop {
                    // Budget schedule is deterministic; every thread computes it
                    // from the shared control state set at the previous barrier.
                    let budget = {
                        let ctl = ctl_cell.lock().unwrap();
                        ctl.next_budget()
                    };
                    if budget == 0 {
                        break;
                    }
                    let share = budget / threads as u64
                        + u64::from((t as u64) < budget % threads as u64);
                    let inv_l = f64::from_bits(shared.inv_l_bits.load(Ordering::Relaxed));
                    for _ in 0..share {
                        match &opts_ref.blocks {
                            None => {
                                let i = rng.gen_range(0..n);
                                async_coordinate_step(p, shared, inv_l, i);
                            }
                            Some(blocks) => {
                                let b = rng.gen_range(0..blocks.len());
                                async_block_step(p, shared, inv_l, &blocks[b]);
                            }
                        }
                    }
                    barrier.wait();
                    if t == 0 {
                        // Leader: exact refresh, divergence and stop checks.
                        let x = shared.snapshot_x();
                        p.lp().matrix().mul_vec_into(&x, &mut rbuf);
                        for (ri, bi) in rbuf.iter_mut().zip(p.lp().rhs()) {
                            *ri -= bi;
                        }
                        for (slot, &v) in shared.r.iter().zip(rbuf.iter()) {
                            slot.store(v.to_bits(), Ordering::Relaxed);
                        }
                        let f_new = p.objective_with_residual(&x, &rbuf);
                        let mut ctl = ctl_cell.lock().unwrap();
                        let decision = ctl.after_epoch(budget, f_new, || {
                            qp_gap_surrogate(p, &x, &rbuf, opts_ref.blocks.as_deref())
                        });
                        shared
                            .inv_l_bits
                            .store((ctl.step_safety / l_max).to_bits(), Ordering::Relaxed);
                        let word = match decision {
                            EpochDecision::Continue => CTL_CONTINUE,
                            EpochDecision::Stop => CTL_STOP,
                            EpochDecision::Diverged => CTL_DIVERGED,
                        };
                        shared.control.store(word, Ordering::SeqCst);
                    }
                    barrier.wait();
                    match shared.control.load(Ordering::SeqCst) {
                        CTL_CONTINUE => {}
                        _ => break,
                    }
                }
                Ok(())
            }));
        }
        for h in handles {
            h.join().expect("solver thread panicked")?;
        }
        Ok(())
    })?;
    drop(ctl_cell);

    if shared.control.load(Ordering::SeqCst) == CTL_DIVERGED {
        return Err(Error::Diverged(format!(
            "objective non-finite or rising at minimum step safety after {} steps (beta = {})",
            ctl.steps,
            p.beta()
        )));
    }

    let mut state = state0;
    state.x = shared.snapshot_x();
    state.steps = ctl.steps;
    state.epoch = ctl.epochs;
    state.refresh(p);
    finish(p, state, &ctl, opts, start)
}

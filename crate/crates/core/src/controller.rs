//! Drift-plus-penalty control loop.
//!
//! A virtual queue `Q` accumulates the shortfall of the user SINR against
//! `gamma_min`:
//!
//! ```text
//! Q(t+1) = max(Q(t) - gamma_c(t), 0) + gamma_min,   Q(0) = 0
//! ```
//!
//! Each slot the controller draws the channel, asks a per-slot solver to
//! maximise `V gamma_r + Q gamma_c`, measures the realised SINR/SNR on the true
//! channel and feeds the realised SINR back into the queue. Keeping the queue
//! bounded keeps the long-run average SINR at or above the target; `V` trades
//! queue size (and convergence time) against radar SNR.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{ChannelRealization, ChannelSampler, ParamError, SystemParams, RNG_ALGORITHM};
use crate::metrics::{from_db, to_db, RunningAverage, SlotMetrics};
use crate::solver::{make_solver, BaselineParams, PrecoderDecision, ScaParams, SlotSolver, SolverId, SolverStatus};

/// Budget slack accepted from a solver before its decision is rejected.
const POWER_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControllerError {
    #[error("invalid system parameters: {0}")]
    Params(#[from] ParamError),
    #[error("V must be positive and finite, got {0}")]
    InvalidV(f64),
    #[error("gamma_min must be nonnegative and finite, got {0}")]
    InvalidGammaMin(f64),
    #[error("episode needs at least one slot")]
    NoSlots,
}

/// Controller state `S(t) = {Q(t), h(t), G(t)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub q: f64,
    pub channel: ChannelRealization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerParams {
    pub v: f64,
    /// Linear SINR target.
    pub gamma_min: f64,
    pub n_slots: usize,
    pub solver: SolverId,
}

impl Default for ControllerParams {
    fn default() -> Self {
        Self {
            v: 100.0,
            gamma_min: from_db(5.0),
            n_slots: 2000,
            solver: SolverId::Zf,
        }
    }
}

impl ControllerParams {
    pub fn validate(&self) -> Result<(), ControllerError> {
        if !(self.v > 0.0 && self.v.is_finite()) {
            return Err(ControllerError::InvalidV(self.v));
        }
        if !(self.gamma_min >= 0.0 && self.gamma_min.is_finite()) {
            return Err(ControllerError::InvalidGammaMin(self.gamma_min));
        }
        if self.n_slots == 0 {
            return Err(ControllerError::NoSlots);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord {
    /// Zero-based slot index.
    pub t: usize,
    /// Queue seen by the solver in this slot.
    pub q_before: f64,
    pub gamma_c: f64,
    pub gamma_r: f64,
    pub p_c: f64,
    pub p_r: f64,
    pub status: SolverStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeTrace {
    pub seed: u64,
    pub solver: SolverId,
    pub rng_algorithm: String,
    pub gamma_min: f64,
    pub records: Vec<SlotRecord>,
    /// Queue after the last update, `Q(T)`.
    pub q_final: f64,
    pub average: RunningAverage,
}

impl EpisodeTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records in the final `fraction` of the episode (at least one).
    pub fn tail(&self, fraction: f64) -> &[SlotRecord] {
        let n = self.records.len();
        let k = ((n as f64 * fraction).ceil() as usize).clamp(1.min(n), n);
        &self.records[n - k..]
    }

    /// Linear mean of `(gamma_c, gamma_r)` over the tail window.
    pub fn tail_means(&self, fraction: f64) -> (f64, f64) {
        let tail = self.tail(fraction);
        let n = tail.len() as f64;
        (
            tail.iter().map(|r| r.gamma_c).sum::<f64>() / n,
            tail.iter().map(|r| r.gamma_r).sum::<f64>() / n,
        )
    }

    /// Fraction of slots not flagged infeasible.
    pub fn feasibility_fraction(&self) -> f64 {
        crate::solver::baseline::feasibility_fraction(self.records.iter().map(|r| &r.status))
    }

    /// Running average of `gamma_c` after each slot.
    pub fn running_gamma_c(&self) -> Vec<f64> {
        let mut sum = 0.0;
        self.records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                sum += r.gamma_c;
                sum / (i + 1) as f64
            })
            .collect()
    }

    /// First slot count `t` (1-based) at which the running average SINR lies
    /// within `band_db` of the target, or `None` if it never does.
    pub fn convergence_slot(&self, band_db: f64) -> Option<usize> {
        let target = to_db(self.gamma_min);
        self.running_gamma_c()
            .iter()
            .position(|&g| (to_db(g) - target).abs() <= band_db)
            .map(|i| i + 1)
    }
}

/// `max(q - gamma_c, 0) + gamma_min`.
pub fn queue_update(q: f64, gamma_c: f64, gamma_min: f64) -> f64 {
    (q - gamma_c).max(0.0) + gamma_min
}

/// Run one episode with a solver chosen by `ctrl.solver` and default solver settings.
pub fn run_episode(params: &SystemParams, ctrl: &ControllerParams, seed: u64) -> Result<EpisodeTrace, ControllerError> {
    let solver = make_solver(ctrl.solver, &ScaParams::default(), &BaselineParams::default());
    run_episode_with_solver(params, ctrl, seed, solver.as_ref())
}

/// Run one episode with an explicit solver. `ctrl.solver` is ignored in favour
/// of `solver.id()`.
pub fn run_episode_with_solver(
    params: &SystemParams,
    ctrl: &ControllerParams,
    seed: u64,
    solver: &dyn SlotSolver,
) -> Result<EpisodeTrace, ControllerError> {
    params.validate()?;
    ctrl.validate()?;

    let mut sampler = ChannelSampler::new(params, seed);
    let mut q = 0.0;
    let mut average = RunningAverage::default();
    let mut records = Vec::with_capacity(ctrl.n_slots);

    for t in 0..ctrl.n_slots {
        let state = NetworkState {
            q,
            channel: sampler.next_slot(),
        };
        let decision = sanitize(solver.solve(&state, params, ctrl.v, ctrl.gamma_min), params);
        let metrics = SlotMetrics::evaluate(&state, &decision.w_c, &decision.w_r, params);
        average = average.update(&metrics);
        records.push(SlotRecord {
            t,
            q_before: q,
            gamma_c: metrics.gamma_c,
            gamma_r: metrics.gamma_r,
            p_c: metrics.p_c,
            p_r: metrics.p_r,
            status: decision.status,
            iterations: decision.diagnostics.iterations,
        });
        q = queue_update(q, metrics.gamma_c, ctrl.gamma_min);
    }

    Ok(EpisodeTrace {
        seed,
        solver: solver.id(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        gamma_min: ctrl.gamma_min,
        records,
        q_final: q,
        average,
    })
}

/// Replace malformed decisions (non-finite, over budget, wrong size) by zero
/// precoders so the queue keeps absorbing the slot.
fn sanitize(decision: PrecoderDecision, params: &SystemParams) -> PrecoderDecision {
    let n = params.n_tx;
    let ok = decision.w_c.len() == n
        && decision.w_r.len() == n
        && decision.w_c.is_finite()
        && decision.w_r.is_finite()
        && decision.w_c.norm_sqr() + decision.w_r.norm_sqr() <= params.p_max + POWER_SLACK;
    if ok {
        decision
    } else {
        let mut d = PrecoderDecision::fallback(n, SolverStatus::Fallback, "decision violated power budget or was non-finite");
        d.diagnostics.iterations = decision.diagnostics.iterations;
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub tail_len: usize,
    pub tail_mean_q: f64,
    pub tail_mean_gamma_c: f64,
    pub max_q: f64,
    /// Tail mean SINR at least `gamma_min` less `tolerance_db`.
    pub satisfied: bool,
}

pub fn verify_constraint_satisfaction(
    trace: &EpisodeTrace,
    gamma_min: f64,
    tail_fraction: f64,
    tolerance_db: f64,
) -> ConstraintReport {
    let tail = trace.tail(tail_fraction);
    let n = tail.len() as f64;
    let tail_mean_gamma_c = tail.iter().map(|r| r.gamma_c).sum::<f64>() / n;
    let tail_mean_q = tail.iter().map(|r| r.q_before).sum::<f64>() / n;
    let max_q = trace
        .records
        .iter()
        .map(|r| r.q_before)
        .chain(std::iter::once(trace.q_final))
        .fold(0.0, f64::max);
    ConstraintReport {
        tail_len: tail.len(),
        tail_mean_q,
        tail_mean_gamma_c,
        max_q,
        satisfied: tail_mean_gamma_c >= gamma_min * from_db(-tolerance_db),
    }
}

/// Sample-path accounting of the queue recursion.
///
/// Summing the recursion gives `Q(T) = T gamma_min - sum gamma_c + sum s_t`
/// with hinge slack `s_t = max(gamma_c(t) - Q(t), 0) >= 0`, hence
/// `mean gamma_c >= gamma_min - Q(T) / T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TelescopingReport {
    pub mean_gamma_c: f64,
    /// `gamma_min - Q(T) / T`.
    pub bound: f64,
    pub total_slack: f64,
    /// `|Q(T) - (T gamma_min - sum gamma_c + sum s_t)|`, relative to the largest term.
    pub identity_residual: f64,
    /// Every stored `q_before` follows from its predecessor by [`queue_update`].
    pub recursion_consistent: bool,
}

impl TelescopingReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.recursion_consistent
            && self.identity_residual <= tol
            && self.mean_gamma_c >= self.bound - tol * (1.0 + self.bound.abs())
    }
}

pub fn telescoping_check(trace: &EpisodeTrace) -> TelescopingReport {
    let t = trace.records.len() as f64;
    let sum_gamma: f64 = trace.records.iter().map(|r| r.gamma_c).sum();
    let total_slack: f64 = trace
        .records
        .iter()
        .map(|r| (r.gamma_c - r.q_before).max(0.0))
        .sum();
    let arrivals = t * trace.gamma_min;
    let predicted = arrivals - sum_gamma + total_slack;
    let scale = arrivals.max(sum_gamma).max(trace.q_final).max(1.0);

    let mut q = 0.0;
    let mut consistent = true;
    for r in &trace.records {
        consistent &= r.q_before == q;
        q = queue_update(q, r.gamma_c, trace.gamma_min);
    }
    consistent &= q == trace.q_final;

    TelescopingReport {
        mean_gamma_c: sum_gamma / t,
        bound: trace.gamma_min - trace.q_final / t,
        total_slack,
        identity_residual: (trace.q_final - predicted).abs() / scale,
        recursion_consistent: consistent,
    }
}

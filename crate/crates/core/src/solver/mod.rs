//! Per-slot precoder solvers.
//!
//! Three solvers share one output type, [`PrecoderDecision`]:
//! - [`zf`]: closed-form zero-forcing solution of the drift-plus-penalty problem,
//! - [`sca`]: successive convex approximation of the same problem,
//! - [`baseline`]: the myopic per-slot-constrained comparison method.

pub mod barrier;
pub mod baseline;
pub mod sca;
pub mod zf;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::SystemParams;
use crate::controller::NetworkState;
use crate::linalg::ComplexVector;

pub use baseline::BaselineParams;
pub use sca::ScaParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverId {
    Sca,
    Zf,
    Baseline,
}

impl SolverId {
    pub const ALL: [SolverId; 3] = [SolverId::Sca, SolverId::Zf, SolverId::Baseline];

    pub fn as_str(&self) -> &'static str {
        match self {
            SolverId::Sca => "sca",
            SolverId::Zf => "zf",
            SolverId::Baseline => "baseline",
        }
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sca" => Ok(SolverId::Sca),
            "zf" => Ok(SolverId::Zf),
            "baseline" => Ok(SolverId::Baseline),
            other => Err(format!("unknown solver `{other}` (expected sca, zf or baseline)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverStatus {
    Ok,
    /// Per-slot constraint could not be met (baseline only).
    Infeasible,
    /// Solver failed; zero precoders were emitted.
    Fallback,
}

impl SolverStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverStatus::Ok => "ok",
            SolverStatus::Infeasible => "infeasible",
            SolverStatus::Fallback => "fallback",
        }
    }
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Solver-specific diagnostics. Fields a solver does not produce stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub iterations: usize,
    /// Drift-plus-penalty objective at the returned precoders.
    pub objective: Option<f64>,
    /// `||G d_r||^2` for the radar direction.
    pub gain_r: Option<f64>,
    /// Combined communications gain used by the power split.
    pub gain_c: Option<f64>,
    pub converged: Option<bool>,
    /// Radar direction had zero gain (`a` parallel to `h`).
    pub degenerate: bool,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderDecision {
    pub w_c: ComplexVector,
    pub w_r: ComplexVector,
    pub p_c: f64,
    pub p_r: f64,
    pub status: SolverStatus,
    pub diagnostics: Diagnostics,
}

impl PrecoderDecision {
    /// Build from precoders, taking powers from their squared norms.
    pub fn from_precoders(w_c: ComplexVector, w_r: ComplexVector, status: SolverStatus) -> Self {
        let p_c = w_c.norm_sqr();
        let p_r = w_r.norm_sqr();
        Self {
            w_c,
            w_r,
            p_c,
            p_r,
            status,
            diagnostics: Diagnostics::default(),
        }
    }

    /// Zero precoders with the given status and reason.
    pub fn fallback(n: usize, status: SolverStatus, message: impl Into<String>) -> Self {
        let mut d = Self::from_precoders(ComplexVector::zeros(n), ComplexVector::zeros(n), status);
        d.diagnostics.message = Some(message.into());
        d
    }
}

/// A per-slot decision rule driven by the controller.
pub trait SlotSolver {
    fn id(&self) -> SolverId;

    /// Choose precoders for one slot. `v` is the drift-plus-penalty weight and
    /// `gamma_min` the (linear) SINR target; solvers use whichever they need.
    fn solve(&self, state: &NetworkState, params: &SystemParams, v: f64, gamma_min: f64) -> PrecoderDecision;
}

pub struct ZfSolver;

impl SlotSolver for ZfSolver {
    fn id(&self) -> SolverId {
        SolverId::Zf
    }

    fn solve(&self, state: &NetworkState, params: &SystemParams, v: f64, _gamma_min: f64) -> PrecoderDecision {
        zf::zf_solve(state, params, v)
    }
}

pub struct ScaSolver(pub ScaParams);

impl SlotSolver for ScaSolver {
    fn id(&self) -> SolverId {
        SolverId::Sca
    }

    fn solve(&self, state: &NetworkState, params: &SystemParams, v: f64, _gamma_min: f64) -> PrecoderDecision {
        match sca::sca_solve(state, params, v, &self.0) {
            Ok(d) => d,
            Err(e) => PrecoderDecision::fallback(params.n_tx, SolverStatus::Fallback, e.to_string()),
        }
    }
}

pub struct BaselineSolver {
    pub grid_points: usize,
}

impl SlotSolver for BaselineSolver {
    fn id(&self) -> SolverId {
        SolverId::Baseline
    }

    fn solve(&self, state: &NetworkState, params: &SystemParams, _v: f64, gamma_min: f64) -> PrecoderDecision {
        let bl = BaselineParams {
            gamma_min,
            grid_points: self.grid_points,
        };
        baseline::baseline_solve(&state.channel, params, &bl)
    }
}

/// Boxed solver for a given id.
pub fn make_solver(id: SolverId, sca: &ScaParams, baseline: &BaselineParams) -> Box<dyn SlotSolver + Send + Sync> {
    match id {
        SolverId::Sca => Box::new(ScaSolver(sca.clone())),
        SolverId::Zf => Box::new(ZfSolver),
        SolverId::Baseline => Box::new(BaselineSolver {
            grid_points: baseline.grid_points,
        }),
    }
}

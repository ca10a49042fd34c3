//! Successive convex approximation of the per-slot problem.
//!
//! After dividing the drift-plus-penalty objective by `V |alpha|^2 / sigma_r^2`
//! and introducing `beta <= SINR`, each outer iteration maximises
//!
//! ```text
//! L_r(w_r) + L_c(w_c) + Vt * beta
//! s.t. ||w_c||^2 + ||w_r||^2 <= P_max
//!      |h^H w_r|^2 + sigma_c^2 <= R(w_c, w_r, beta)
//!      beta >= 0
//! ```
//!
//! where `L_r`, `L_c` are first-order expansions of `||G w||^2` and `R` is the
//! first-order expansion of `(|h^H w_c|^2 + |h^H w_r|^2 + sigma_c^2) / (beta + 1)`.
//! Both are global under-estimators of convex functions, so every subproblem
//! solution is feasible for the original problem and the true objective never
//! decreases.
//!
//! Complex variables enter the real solver as `(re, im)` pairs. For a complex
//! coefficient `c`, the gradient of `Re{c^H w}` with respect to `(re w, im w)`
//! is `(re c, im c)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::SystemParams;
use crate::controller::NetworkState;
use crate::linalg::{ComplexMatrix, ComplexVector, LinalgError};
use crate::metrics::{comm_sinr, dpp_objective};

use super::barrier::{self, BarrierError, BarrierParams, Qcqp, Quadratic};
use super::zf::zf_radar_direction;
use super::{PrecoderDecision, SolverStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaParams {
    /// Outer stop: relative change of the true objective.
    pub tol: f64,
    pub max_outer_iters: usize,
    /// Duality-gap target of each convex subproblem.
    pub subproblem_tol: f64,
}

impl Default for ScaParams {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            max_outer_iters: 50,
            subproblem_tol: 1e-8,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScaError {
    #[error("degenerate user channel")]
    ZeroChannel,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("convex subproblem failed: {source}")]
    Subproblem {
        source: BarrierError,
        best: Box<ScaIterate>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaIterate {
    pub w_c: ComplexVector,
    pub w_r: ComplexVector,
    pub beta: f64,
    /// True drift-plus-penalty objective at `(w_c, w_r)`.
    pub objective: f64,
    /// Surrogate value of the subproblem that produced this iterate, in the
    /// normalised units of the subproblem. `None` for the starting point.
    pub surrogate: Option<f64>,
}

/// `constant + gradient . (x - point)` over real coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm {
    pub constant: f64,
    pub gradient: Vec<f64>,
    pub point: Vec<f64>,
}

impl AffineForm {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant
            + self
                .gradient
                .iter()
                .zip(x.iter().zip(&self.point))
                .map(|(g, (xi, pi))| g * (xi - pi))
                .sum::<f64>()
    }
}

/// `[re w; im w]`.
pub fn to_real(w: &ComplexVector) -> Vec<f64> {
    w.iter().map(|z| z.re).chain(w.iter().map(|z| z.im)).collect()
}

pub fn from_real(x: &[f64]) -> ComplexVector {
    let n = x.len() / 2;
    (0..n)
        .map(|i| num_complex::Complex64::new(x[i], x[n + i]))
        .collect::<Vec<_>>()
        .into()
}

/// `[re w_c; im w_c; re w_r; im w_r; beta]`.
pub fn pack(w_c: &ComplexVector, w_r: &ComplexVector, beta: f64) -> Vec<f64> {
    let mut x = to_real(w_c);
    x.extend(to_real(w_r));
    x.push(beta);
    x
}

pub fn unpack(x: &[f64]) -> (ComplexVector, ComplexVector, f64) {
    let n = (x.len() - 1) / 4;
    (from_real(&x[..2 * n]), from_real(&x[2 * n..4 * n]), x[4 * n])
}

fn complex_gradient(c: &ComplexVector, factor: f64) -> Vec<f64> {
    to_real(c).into_iter().map(|v| factor * v).collect()
}

/// First-order expansion of `||G w||^2` at `w_prev`, over `[re w; im w]`.
pub fn linearize_radar_term(g: &ComplexMatrix, w_prev: &ComplexVector) -> AffineForm {
    let gw = g.mul_vec(w_prev);
    let c = g.adjoint().mul_vec(&gw);
    AffineForm {
        constant: gw.norm_sqr(),
        gradient: complex_gradient(&c, 2.0),
        point: to_real(w_prev),
    }
}

/// `(|h^H w_c|^2 + |h^H w_r|^2 + sigma2_c) / (beta + 1)`.
pub fn sinr_rhs(h: &ComplexVector, w_c: &ComplexVector, w_r: &ComplexVector, beta: f64, sigma2_c: f64) -> f64 {
    (h.dot(w_c).norm_sqr() + h.dot(w_r).norm_sqr() + sigma2_c) / (beta + 1.0)
}

/// First-order expansion of [`sinr_rhs`] at the given point, over the packed
/// `4N + 1` real coordinates.
pub fn linearize_sinr_rhs(
    h: &ComplexVector,
    w_c_prev: &ComplexVector,
    w_r_prev: &ComplexVector,
    beta_prev: f64,
    sigma2_c: f64,
) -> AffineForm {
    let denom = beta_prev + 1.0;
    let value = sinr_rhs(h, w_c_prev, w_r_prev, beta_prev, sigma2_c);
    // h h^H w / (beta + 1)
    let c_c = h.scale_complex(h.dot(w_c_prev)).scale(1.0 / denom);
    let c_r = h.scale_complex(h.dot(w_r_prev)).scale(1.0 / denom);
    let mut gradient = complex_gradient(&c_c, 2.0);
    gradient.extend(complex_gradient(&c_r, 2.0));
    gradient.push(-value / denom);
    AffineForm {
        constant: value,
        gradient,
        point: pack(w_c_prev, w_r_prev, beta_prev),
    }
}

/// `Q sigma_r^2 / (V |alpha|^2)`.
pub fn v_tilde(q: f64, v: f64, params: &SystemParams) -> f64 {
    q * params.sigma2_r / (v * params.alpha_mag2)
}

#[derive(Debug, Clone)]
pub struct SubproblemSolution {
    pub w_c: ComplexVector,
    pub w_r: ComplexVector,
    pub beta: f64,
    /// Surrogate objective at the returned point (dropped constants included).
    pub surrogate: f64,
    /// Surrogate objective at the expansion point.
    pub surrogate_at_expansion: f64,
    pub newton_steps: usize,
    /// The linearised constraint had no interior; the expansion point is returned.
    pub stalled: bool,
}

/// Real symmetric form of `w^H (h h^H) w` on `[re w; im w]`.
fn hermitian_block(h: &ComplexVector) -> Vec<f64> {
    let n = h.len();
    let m = 2 * n;
    let mut out = vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = h[r] * h[c].conj();
            out[r * m + c] = z.re;
            out[(n + r) * m + (n + c)] = z.re;
            out[r * m + (n + c)] = -z.im;
            out[(n + r) * m + c] = z.im;
        }
    }
    out
}

/// Solve one convexified subproblem around `expansion` (whose `beta` must not
/// exceed the SINR at its precoders).
pub fn solve_convex_subproblem(
    h: &ComplexVector,
    g: &ComplexMatrix,
    v_tilde: f64,
    p_max: f64,
    sigma2_c: f64,
    expansion: &ScaIterate,
    tol: f64,
) -> Result<SubproblemSolution, BarrierError> {
    let n = h.len();
    let dim = 4 * n + 1;
    let beta_idx = 4 * n;

    let lin_c = linearize_radar_term(g, &expansion.w_c);
    let lin_r = linearize_radar_term(g, &expansion.w_r);
    let rhs = linearize_sinr_rhs(h, &expansion.w_c, &expansion.w_r, expansion.beta, sigma2_c);
    let x_exp = pack(&expansion.w_c, &expansion.w_r, expansion.beta);

    // Maximise => minimise the negated linear part.
    let mut objective = Vec::with_capacity(dim);
    objective.extend(lin_c.gradient.iter().map(|g| -g));
    objective.extend(lin_r.gradient.iter().map(|g| -g));
    objective.push(-v_tilde);
    let surrogate = |x: &[f64]| {
        lin_c.eval(&x[..2 * n]) + lin_r.eval(&x[2 * n..4 * n]) + v_tilde * x[beta_idx]
    };

    let mut power = vec![0.0; dim * dim];
    for i in 0..4 * n {
        power[i * dim + i] = 1.0;
    }
    let power = Quadratic {
        a: Some(power),
        b: vec![0.0; dim],
        d: -p_max,
    };

    let block = hermitian_block(h);
    let mut interference = vec![0.0; dim * dim];
    for r in 0..2 * n {
        for c in 0..2 * n {
            interference[(2 * n + r) * dim + (2 * n + c)] = block[r * 2 * n + c];
        }
    }
    let sinr = Quadratic {
        a: Some(interference),
        b: rhs.gradient.iter().map(|g| -g).collect(),
        d: sigma2_c - rhs.constant + rhs.gradient.iter().zip(&rhs.point).map(|(g, p)| g * p).sum::<f64>(),
    };

    let mut nonneg = vec![0.0; dim];
    nonneg[beta_idx] = -1.0;
    let problem = Qcqp {
        objective,
        constraints: vec![power, sinr, Quadratic::affine(nonneg, 0.0)],
    };

    let params = BarrierParams {
        gap_tol: tol,
        ..BarrierParams::default()
    };
    let at_expansion = surrogate(&x_exp);

    // The expansion point sits on the boundary; pulling the precoders in and
    // lowering beta restores strict feasibility whenever |h^H w_c| > 0.
    let start = [(1.0 - 1e-3, 1.0 - 1e-2), (0.99, 0.9), (0.9, 0.5)]
        .iter()
        .map(|&(sw, sb)| {
            let mut x: Vec<f64> = x_exp.iter().map(|v| v * sw).collect();
            x[beta_idx] = expansion.beta * sb;
            x
        })
        .find(|x| problem.max_constraint(x) < 0.0)
        .or_else(|| barrier::phase_one(&problem, &x_exp, &params));

    let Some(start) = start else {
        return Ok(SubproblemSolution {
            w_c: expansion.w_c.clone(),
            w_r: expansion.w_r.clone(),
            beta: expansion.beta,
            surrogate: at_expansion,
            surrogate_at_expansion: at_expansion,
            newton_steps: 0,
            stalled: true,
        });
    };

    let sol = barrier::solve(&problem, &start, &params)?;
    let (w_c, w_r, beta) = unpack(&sol.x);
    Ok(SubproblemSolution {
        surrogate: surrogate(&sol.x),
        surrogate_at_expansion: at_expansion,
        w_c,
        w_r,
        beta,
        newton_steps: sol.newton_steps,
        stalled: false,
    })
}

#[derive(Debug, Clone)]
pub struct ScaOutcome {
    pub decision: PrecoderDecision,
    /// Starting point followed by every accepted iterate.
    pub history: Vec<ScaIterate>,
}

/// Default starting point: half the budget on the matched filter, half on the
/// zero-forcing radar direction.
pub fn initial_point(state: &NetworkState, params: &SystemParams) -> Result<(ComplexVector, ComplexVector), ScaError> {
    let ch = &state.channel;
    let d_c = ch.h.normalized().ok_or(ScaError::ZeroChannel)?;
    let d_r = zf_radar_direction(&ch.h, &ch.g)?.direction;
    let amp = (params.p_max / 2.0).sqrt();
    Ok((d_c.scale(amp), d_r.scale(amp)))
}

pub fn sca_solve(state: &NetworkState, params: &SystemParams, v: f64, sca: &ScaParams) -> Result<PrecoderDecision, ScaError> {
    let init = initial_point(state, params)?;
    Ok(sca_solve_from(state, params, v, sca, init)?.decision)
}

/// Run SCA from a given feasible pair of precoders.
pub fn sca_solve_from(
    state: &NetworkState,
    params: &SystemParams,
    v: f64,
    sca: &ScaParams,
    init: (ComplexVector, ComplexVector),
) -> Result<ScaOutcome, ScaError> {
    let ch = &state.channel;
    if ch.h.norm_sqr() == 0.0 {
        return Err(ScaError::ZeroChannel);
    }
    let vt = v_tilde(state.q, v, params);
    let tighten = |w_c: ComplexVector, w_r: ComplexVector, surrogate: Option<f64>| {
        let beta = comm_sinr(&ch.h, &w_c, &w_r, params.sigma2_c);
        let objective = dpp_objective(state, &w_c, &w_r, params, v);
        ScaIterate {
            w_c,
            w_r,
            beta,
            objective,
            surrogate,
        }
    };

    let mut current = tighten(init.0, init.1, None);
    let mut history = vec![current.clone()];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < sca.max_outer_iters {
        iterations += 1;
        let sub = solve_convex_subproblem(&ch.h, &ch.g, vt, params.p_max, params.sigma2_c, &current, sca.subproblem_tol)
            .map_err(|source| ScaError::Subproblem {
                source,
                best: Box::new(current.clone()),
            })?;
        let next = tighten(sub.w_c, sub.w_r, Some(sub.surrogate));
        let prev_obj = current.objective;
        let scale = prev_obj.abs().max(f64::MIN_POSITIVE);
        if next.objective < prev_obj {
            // Only reachable through subproblem inexactness; keep the better point.
            converged = (prev_obj - next.objective) <= sca.tol * scale;
            break;
        }
        let change = (next.objective - prev_obj) / scale;
        current = next;
        history.push(current.clone());
        if change <= sca.tol || sub.stalled {
            converged = true;
            break;
        }
    }

    let mut decision = PrecoderDecision::from_precoders(current.w_c.clone(), current.w_r.clone(), SolverStatus::Ok);
    decision.diagnostics.iterations = iterations;
    decision.diagnostics.objective = Some(current.objective);
    decision.diagnostics.converged = Some(converged);
    Ok(ScaOutcome { decision, history })
}

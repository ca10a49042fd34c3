//! Zero-forcing solution of the per-slot drift-plus-penalty problem.
//!
//! The radar beam is confined to the null space of the user channel, so it
//! causes no interference. Its direction is the top eigenvector of
//! `P_h G^H G P_h`. The communications direction is the top eigenvector of
//! `B = G^H G + K h h^H`. The objective is then linear in the two powers and
//! the optimum puts the whole budget on one beam.

use crate::channel::SystemParams;
use crate::controller::NetworkState;
use crate::linalg::{
    complement_projector, hermitian_top_eigpair, ComplexMatrix, ComplexVector, LinalgError, DEFAULT_TOL,
};
use crate::metrics::dpp_objective;

use super::{PrecoderDecision, SolverStatus};

/// Relative threshold below which the projected radar Gram matrix counts as zero.
const DEGENERATE_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RadarDirection {
    /// Unit vector orthogonal to `h`.
    pub direction: ComplexVector,
    /// `||G d||^2`.
    pub gain: f64,
    /// Set when the projected Gram matrix vanished and `direction` is an
    /// arbitrary (deterministic) null-space vector.
    pub degenerate: bool,
}

/// Weight of the communications term once the objective is normalised by the
/// radar coefficient: `K = Q sigma_r^2 / (V |alpha|^2 sigma_c^2)`.
pub fn comm_weight(q: f64, v: f64, params: &SystemParams) -> f64 {
    q * params.sigma2_r / (v * params.alpha_mag2 * params.sigma2_c)
}

/// Best radar direction in the null space of `h`.
pub fn zf_radar_direction(h: &ComplexVector, g: &ComplexMatrix) -> Result<RadarDirection, LinalgError> {
    let proj = complement_projector(h)?;
    let gram = g.gram();
    let projected = proj.adjoint().matmul(&gram).matmul(&proj);
    let top = hermitian_top_eigpair(&projected, DEFAULT_TOL)?;

    if top.value <= DEGENERATE_REL * (1.0 + gram.frobenius_norm()) {
        // Column of P_h with the largest norm; never zero for N >= 2.
        let n = h.len();
        let mut best = ComplexVector::zeros(n);
        let mut best_norm = 0.0;
        for k in 0..n {
            let col = proj.mul_vec(&ComplexVector::basis(n, k));
            let nk = col.norm();
            if nk > best_norm + 1e-15 {
                best_norm = nk;
                best = col;
            }
        }
        let direction = best
            .normalized()
            .unwrap_or_else(|| ComplexVector::zeros(n))
            .with_canonical_phase();
        let gain = g.mul_vec(&direction).norm_sqr();
        return Ok(RadarDirection {
            direction,
            gain,
            degenerate: true,
        });
    }

    // Re-project to scrub rounding leakage along h before normalising.
    let direction = proj
        .mul_vec(&top.vector)
        .normalized()
        .ok_or(LinalgError::ZeroVector)?
        .with_canonical_phase();
    let gain = g.mul_vec(&direction).norm_sqr();
    Ok(RadarDirection {
        direction,
        gain,
        degenerate: false,
    })
}

/// Top eigenvector of `G^H G + k h h^H`.
pub fn zf_comm_direction(h: &ComplexVector, g: &ComplexMatrix, k: f64) -> Result<ComplexVector, LinalgError> {
    let b = g.gram().add(&ComplexMatrix::outer(h, h).scale(k));
    Ok(hermitian_top_eigpair(&b, DEFAULT_TOL)?.vector)
}

/// Bang-bang split `(p_r, p_c)`; ties go to radar.
pub fn zf_power_split(gain_r: f64, gain_c_combined: f64, p_max: f64) -> (f64, f64) {
    if gain_r >= gain_c_combined {
        (p_max, 0.0)
    } else {
        (0.0, p_max)
    }
}

pub fn zf_solve(state: &NetworkState, params: &SystemParams, v: f64) -> PrecoderDecision {
    let ch = &state.channel;
    let n = ch.h.len();
    if ch.h.norm_sqr() == 0.0 {
        return PrecoderDecision::fallback(n, SolverStatus::Fallback, "zero user channel");
    }
    let k = comm_weight(state.q, v, params);
    let (radar, d_c) = match zf_radar_direction(&ch.h, &ch.g)
        .and_then(|r| zf_comm_direction(&ch.h, &ch.g, k).map(|c| (r, c)))
    {
        Ok(pair) => pair,
        Err(e) => return PrecoderDecision::fallback(n, SolverStatus::Fallback, e.to_string()),
    };

    let gain_c = ch.g.mul_vec(&d_c).norm_sqr() + k * ch.h.dot(&d_c).norm_sqr();
    let (p_r, p_c) = zf_power_split(radar.gain, gain_c, params.p_max);
    let w_r = radar.direction.scale(p_r.sqrt());
    let w_c = d_c.scale(p_c.sqrt());

    let objective = dpp_objective(state, &w_c, &w_r, params, v);
    let mut decision = PrecoderDecision {
        w_c,
        w_r,
        p_c,
        p_r,
        status: SolverStatus::Ok,
        diagnostics: Default::default(),
    };
    decision.diagnostics.objective = Some(objective);
    decision.diagnostics.gain_r = Some(radar.gain);
    decision.diagnostics.gain_c = Some(gain_c);
    decision.diagnostics.degenerate = radar.degenerate;
    decision
}

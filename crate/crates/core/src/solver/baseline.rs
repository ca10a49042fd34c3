//! Myopic comparison method: enforce the SINR target in every slot.
//!
//! The radar beam uses the zero-forcing direction and the communications beam
//! the matched filter `h / ||h||`. A line search over the radar power picks the
//! split with the largest radar SNR among those meeting the per-slot target.
//! Because the radar beam is interference-free, the smallest sufficient
//! communications power is `gamma_min sigma_c^2 / ||h||^2`; that point is added
//! to the grid so the search is exact rather than off by one grid step.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, SystemParams};
use crate::metrics::{comm_sinr, radar_snr};

use super::zf::zf_radar_direction;
use super::{PrecoderDecision, SolverStatus};

/// Relative slack on the SINR check, absorbing rounding at the exact threshold.
const SINR_REL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineParams {
    /// Linear per-slot SINR target.
    pub gamma_min: f64,
    pub grid_points: usize,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            gamma_min: 1.0,
            grid_points: 1001,
        }
    }
}

/// Smallest communications power meeting the target with interference-free radar.
pub fn min_comm_power(channel: &ChannelRealization, params: &SystemParams, gamma_min: f64) -> f64 {
    gamma_min * params.sigma2_c / channel.h.norm_sqr()
}

pub fn baseline_solve(channel: &ChannelRealization, params: &SystemParams, bl: &BaselineParams) -> PrecoderDecision {
    let n = channel.h.len();
    let Some(d_c) = channel.h.normalized() else {
        return PrecoderDecision::fallback(n, SolverStatus::Fallback, "zero user channel");
    };
    let radar = match zf_radar_direction(&channel.h, &channel.g) {
        Ok(r) => r,
        Err(e) => return PrecoderDecision::fallback(n, SolverStatus::Fallback, e.to_string()),
    };
    let p_max = params.p_max;
    let steps = bl.grid_points.max(2) - 1;

    let mut candidates: Vec<f64> = (0..=steps).map(|i| p_max * i as f64 / steps as f64).collect();
    let exact = p_max - min_comm_power(channel, params, bl.gamma_min);
    if (0.0..=p_max).contains(&exact) {
        candidates.push(exact);
    }

    let mut best: Option<(f64, f64)> = None;
    for p_r in candidates {
        let p_c = (p_max - p_r).max(0.0);
        let w_c = d_c.scale(p_c.sqrt());
        let w_r = radar.direction.scale(p_r.sqrt());
        let sinr = comm_sinr(&channel.h, &w_c, &w_r, params.sigma2_c);
        if sinr < bl.gamma_min * (1.0 - SINR_REL_SLACK) {
            continue;
        }
        let snr = radar_snr(&channel.g, &w_c, &w_r, params.alpha_mag2, params.sigma2_r);
        // Strict improvement keeps the first (lowest radar power) maximiser.
        if best.is_none_or(|(_, s)| snr > s) {
            best = Some((p_r, snr));
        }
    }

    let (p_r, status) = match best {
        Some((p_r, _)) => (p_r, SolverStatus::Ok),
        // Infeasible: everything to communications, which minimises the violation.
        None => (0.0, SolverStatus::Infeasible),
    };
    let p_c = p_max - p_r;
    let mut d = PrecoderDecision {
        w_c: d_c.scale(p_c.sqrt()),
        w_r: radar.direction.scale(p_r.sqrt()),
        p_c,
        p_r,
        status,
        diagnostics: Default::default(),
    };
    d.diagnostics.gain_r = Some(radar.gain);
    d.diagnostics.degenerate = radar.degenerate;
    d
}

/// Fraction of slots whose status is not `Infeasible`.
pub fn feasibility_fraction<'a>(statuses: impl IntoIterator<Item = &'a SolverStatus>) -> f64 {
    let (mut ok, mut total) = (0usize, 0usize);
    for s in statuses {
        total += 1;
        if *s != SolverStatus::Infeasible {
            ok += 1;
        }
    }
    if total == 0 {
        f64::NAN
    } else {
        ok as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexVector;

    /// `||h||^2 = 2` along e1, target along e2 so the radar beam has unit gain.
    fn channel() -> ChannelRealization {
        ChannelRealization::new(
            ComplexVector::from_real(&[2f64.sqrt(), 0.0, 0.0, 0.0]),
            ComplexVector::basis(4, 1),
            ComplexVector::basis(2, 0),
        )
    }

    fn params(p_max: f64) -> SystemParams {
        SystemParams {
            p_max,
            alpha_mag2: 1.0,
            ..SystemParams::default()
        }
    }

    #[test]
    fn exact_split_against_closed_form() {
        let p = params(5.0);
        let bl = BaselineParams {
            gamma_min: 4.0,
            grid_points: 1001,
        };
        let d = baseline_solve(&channel(), &p, &bl);
        assert_eq!(d.status, SolverStatus::Ok);
        assert!((d.p_r - 3.0).abs() <= 5.0 / 1000.0);
        assert!((d.p_c - 2.0).abs() <= 5.0 / 1000.0);
        assert!(comm_sinr(&channel().h, &d.w_c, &d.w_r, 1.0) >= 4.0 * (1.0 - 1e-9));
    }

    #[test]
    fn zero_target_gives_full_radar_power() {
        let d = baseline_solve(
            &channel(),
            &params(5.0),
            &BaselineParams {
                gamma_min: 0.0,
                grid_points: 1001,
            },
        );
        assert_eq!(d.p_r, 5.0);
    }

    #[test]
    fn insufficient_budget_is_infeasible() {
        let d = baseline_solve(
            &channel(),
            &params(1.0),
            &BaselineParams {
                gamma_min: 4.0,
                grid_points: 1001,
            },
        );
        assert_eq!(d.status, SolverStatus::Infeasible);
        assert_eq!((d.p_c, d.p_r), (1.0, 0.0));
    }

    #[test]
    fn grid_only_search_lands_within_one_step() {
        // Two-point grid: the refinement alone must find the optimum.
        let d = baseline_solve(
            &channel(),
            &params(5.0),
            &BaselineParams {
                gamma_min: 4.0,
                grid_points: 2,
            },
        );
        assert!((d.p_r - 3.0).abs() < 1e-12);
    }

    #[test]
    fn fraction_examples() {
        use SolverStatus::*;
        assert_eq!(feasibility_fraction(&[Ok, Ok]), 1.0);
        assert_eq!(feasibility_fraction(&[Infeasible, Infeasible]), 0.0);
        assert_eq!(feasibility_fraction(&[Ok, Infeasible, Fallback, Ok]), 0.75);
    }
}

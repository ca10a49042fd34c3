//! Per-slot link metrics and running averages.
//!
//! Everything is linear. Conversion to dB happens only at the reporting
//! boundary via [`to_db`]; averaging dB values would silently break the
//! virtual-queue accounting, which is defined on linear SINR.

use serde::{Deserialize, Serialize};

use crate::channel::SystemParams;
use crate::controller::NetworkState;
use crate::linalg::{ComplexMatrix, ComplexVector};

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// User SINR `|h^H w_c|^2 / (|h^H w_r|^2 + sigma2_c)`.
pub fn comm_sinr(h: &ComplexVector, w_c: &ComplexVector, w_r: &ComplexVector, sigma2_c: f64) -> f64 {
    debug_assert!(sigma2_c > 0.0);
    h.dot(w_c).norm_sqr() / (h.dot(w_r).norm_sqr() + sigma2_c)
}

/// Echo SNR `|alpha|^2 (||G w_r||^2 + ||G w_c||^2) / sigma2_r`.
pub fn radar_snr(
    g: &ComplexMatrix,
    w_c: &ComplexVector,
    w_r: &ComplexVector,
    alpha_mag2: f64,
    sigma2_r: f64,
) -> f64 {
    debug_assert!(sigma2_r > 0.0);
    alpha_mag2 * (g.mul_vec(w_r).norm_sqr() + g.mul_vec(w_c).norm_sqr()) / sigma2_r
}

/// Per-slot drift-plus-penalty objective:
/// `(V |alpha|^2 / sigma2_r)(||G w_r||^2 + ||G w_c||^2) + Q |h^H w_c|^2 / (|h^H w_r|^2 + sigma2_c)`.
pub fn dpp_objective(
    state: &NetworkState,
    w_c: &ComplexVector,
    w_r: &ComplexVector,
    params: &SystemParams,
    v: f64,
) -> f64 {
    let ch = &state.channel;
    let radar = ch.g.mul_vec(w_r).norm_sqr() + ch.g.mul_vec(w_c).norm_sqr();
    v * params.alpha_mag2 / params.sigma2_r * radar
        + state.q * comm_sinr(&ch.h, w_c, w_r, params.sigma2_c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotMetrics {
    pub gamma_c: f64,
    pub gamma_r: f64,
    pub p_c: f64,
    pub p_r: f64,
}

impl SlotMetrics {
    pub fn evaluate(
        state: &NetworkState,
        w_c: &ComplexVector,
        w_r: &ComplexVector,
        params: &SystemParams,
    ) -> Self {
        let ch = &state.channel;
        Self {
            gamma_c: comm_sinr(&ch.h, w_c, w_r, params.sigma2_c),
            gamma_r: radar_snr(&ch.g, w_c, w_r, params.alpha_mag2, params.sigma2_r),
            p_c: w_c.norm_sqr(),
            p_r: w_r.norm_sqr(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningAverage {
    pub count: usize,
    pub sum_gamma_c: f64,
    pub sum_gamma_r: f64,
}

impl RunningAverage {
    pub fn update(self, m: &SlotMetrics) -> Self {
        Self {
            count: self.count + 1,
            sum_gamma_c: self.sum_gamma_c + m.gamma_c,
            sum_gamma_r: self.sum_gamma_r + m.gamma_r,
        }
    }

    /// `None` before the first update.
    pub fn avg_gamma_c(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum_gamma_c / self.count as f64)
    }

    pub fn avg_gamma_r(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum_gamma_r / self.count as f64)
    }
}

/// Functional form of [`RunningAverage::update`].
pub fn running_average_update(acc: RunningAverage, m: &SlotMetrics) -> RunningAverage {
    acc.update(m)
}

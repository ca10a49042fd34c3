//! Seeded channel generation: i.i.d. Rayleigh user channel redrawn every slot
//! and a rank-one steering-vector radar channel `G = b a^H`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{ComplexMatrix, ComplexVector};

/// Identifier of the random stream recorded in every trace.
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64/box-muller";

/// Stream index used for the optional target-angle jitter, kept apart from the
/// user-channel stream so enabling jitter leaves `h(t)` unchanged.
const JITTER_STREAM: u64 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("{field} must be positive and finite, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("{field} must be at least 1")]
    ZeroCount { field: &'static str },
}

/// Physical system parameters. All powers and gains are linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Transmit antennas `N`.
    pub n_tx: usize,
    /// Receive antennas `M`.
    pub n_rx: usize,
    /// Noise variance at the user.
    pub sigma2_c: f64,
    /// Noise variance at the BS radar receiver.
    pub sigma2_r: f64,
    /// Reflection power gain `|alpha|^2`.
    pub alpha_mag2: f64,
    /// Per-slot transmit power budget.
    pub p_max: f64,
    /// Target angle in radians.
    pub theta: f64,
    /// Standard deviation (radians) of a per-slot Gaussian perturbation of the
    /// target angle. Zero keeps `a`, `b`, `G` constant across slots.
    #[serde(default)]
    pub theta_jitter: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            n_tx: 4,
            n_rx: 2,
            sigma2_c: 1.0,
            sigma2_r: 1.0,
            alpha_mag2: 1.0,
            p_max: 1.0,
            theta: PI / 8.0,
            theta_jitter: 0.0,
        }
    }
}

impl SystemParams {
    /// Default geometry with `|alpha|^2 P_max = 1` for the given budget.
    pub fn normalized(p_max: f64) -> Self {
        Self {
            p_max,
            alpha_mag2: 1.0 / p_max,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.n_tx == 0 {
            return Err(ParamError::ZeroCount { field: "n_tx" });
        }
        if self.n_rx == 0 {
            return Err(ParamError::ZeroCount { field: "n_rx" });
        }
        for (field, value) in [
            ("sigma2_c", self.sigma2_c),
            ("sigma2_r", self.sigma2_r),
            ("alpha_mag2", self.alpha_mag2),
            ("p_max", self.p_max),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ParamError::NotPositive { field, value });
            }
        }
        if !(self.theta_jitter >= 0.0 && self.theta_jitter.is_finite()) {
            return Err(ParamError::NotPositive {
                field: "theta_jitter",
                value: self.theta_jitter,
            });
        }
        Ok(())
    }
}

/// One slot's channel draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: ComplexVector,
    pub a: ComplexVector,
    pub b: ComplexVector,
    pub g: ComplexMatrix,
}

impl ChannelRealization {
    pub fn new(h: ComplexVector, a: ComplexVector, b: ComplexVector) -> Self {
        let g = radar_channel(&a, &b);
        Self { h, a, b, g }
    }
}

/// Uniform linear array response with half-wavelength spacing, unit norm:
/// entry `k` is `exp(j pi k sin(theta)) / sqrt(n)`.
pub fn steering_vector(n_elems: usize, theta: f64) -> ComplexVector {
    assert!(n_elems >= 1, "steering vector needs at least one element");
    let amp = 1.0 / (n_elems as f64).sqrt();
    let s = theta.sin();
    (0..n_elems)
        .map(|k| Complex64::from_polar(amp, PI * k as f64 * s))
        .collect::<Vec<_>>()
        .into()
}

/// Two-way radar channel `G[m][n] = b[m] conj(a[n])`.
pub fn radar_channel(a: &ComplexVector, b: &ComplexVector) -> ComplexMatrix {
    ComplexMatrix::outer(b, a)
}

/// One circularly-symmetric complex Gaussian sample with unit variance, built
/// from a single Box-Muller pair: `(x + j y) / sqrt(2)`.
pub fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // u1 in (0, 1] keeps ln finite.
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let phi = 2.0 * PI * u2;
    Complex64::new(r * phi.cos(), r * phi.sin()) / 2f64.sqrt()
}

/// I.i.d. `CN(0, 1)` entries of length `n`.
pub fn sample_user_channel<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    assert!(n >= 1, "channel needs at least one antenna");
    (0..n)
        .map(|_| standard_complex_normal(rng))
        .collect::<Vec<_>>()
        .into()
}

/// Per-episode channel source. Owns its random streams; not shareable mid-run.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    params: SystemParams,
    user_rng: ChaCha8Rng,
    jitter_rng: ChaCha8Rng,
    fixed: ChannelRealization,
}

impl ChannelSampler {
    pub fn new(params: &SystemParams, seed: u64) -> Self {
        let user_rng = ChaCha8Rng::seed_from_u64(seed);
        let mut jitter_rng = ChaCha8Rng::seed_from_u64(seed);
        jitter_rng.set_stream(JITTER_STREAM);
        let a = steering_vector(params.n_tx, params.theta);
        let b = steering_vector(params.n_rx, params.theta);
        let fixed = ChannelRealization::new(ComplexVector::zeros(params.n_tx), a, b);
        Self {
            params: params.clone(),
            user_rng,
            jitter_rng,
            fixed,
        }
    }

    /// Draw the next slot's channel.
    pub fn next_slot(&mut self) -> ChannelRealization {
        let h = sample_user_channel(&mut self.user_rng, self.params.n_tx);
        if self.params.theta_jitter > 0.0 {
            let theta =
                self.params.theta + self.params.theta_jitter * standard_complex_normal(&mut self.jitter_rng).re * 2f64.sqrt();
            let a = steering_vector(self.params.n_tx, theta);
            let b = steering_vector(self.params.n_rx, theta);
            ChannelRealization::new(h, a, b)
        } else {
            ChannelRealization {
                h,
                ..self.fixed.clone()
            }
        }
    }
}

//! Dynamic joint communications-and-sensing precoding.
//!
//! A base station with `N` transmit and `M` receive antennas serves one
//! single-antenna user while illuminating a radar target. Every slot it picks a
//! communications precoder `w_c` and a radar precoder `w_r` under a power
//! budget. The goal is the largest long-run average radar SNR subject to a
//! long-run average user SINR of at least `gamma_min`.
//!
//! The long-run constraint is turned into a virtual queue and handled by a
//! drift-plus-penalty controller ([`controller`]), which calls one of three
//! per-slot solvers ([`solver`]): successive convex approximation, closed-form
//! zero forcing, or a myopic per-slot baseline. [`harness`] wraps the loop in
//! configuration files, parameter sweeps and CSV output.
//!
//! ```no_run
//! use jcas::prelude::*;
//!
//! let system = SystemParams::normalized(1.0);
//! let ctrl = ControllerParams { v: 100.0, gamma_min: from_db(5.0), n_slots: 2000, solver: SolverId::Zf };
//! let trace = run_episode(&system, &ctrl, 7).unwrap();
//! let (gamma_c, gamma_r) = trace.tail_means(0.25);
//! println!("SINR {:.2} dB, radar SNR {:.2} dB", to_db(gamma_c), to_db(gamma_r));
//! ```

pub mod channel;
pub mod controller;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod solver;

pub mod prelude {
    pub use crate::channel::{ChannelRealization, ChannelSampler, SystemParams};
    pub use crate::controller::{
        queue_update, run_episode, run_episode_with_solver, telescoping_check, verify_constraint_satisfaction,
        ControllerParams, EpisodeTrace, NetworkState,
    };
    pub use crate::linalg::{ComplexMatrix, ComplexVector};
    pub use crate::metrics::{comm_sinr, dpp_objective, from_db, radar_snr, to_db};
    pub use crate::solver::{BaselineParams, PrecoderDecision, ScaParams, SlotSolver, SolverId, SolverStatus};
}

//! Plug a user-defined per-slot policy into the controller through the
//! `SlotSolver` trait. This one splits power at a fixed ratio between the
//! matched filter and the zero-forcing radar beam, ignoring the queue.
//!
//! ```text
//! cargo run --release --example custom_solver
//! ```

use jcas::channel::SystemParams;
use jcas::controller::{run_episode, run_episode_with_solver, ControllerParams, NetworkState};
use jcas::metrics::{from_db, to_db};
use jcas::solver::zf::zf_radar_direction;
use jcas::solver::{PrecoderDecision, SlotSolver, SolverId, SolverStatus};

struct FixedSplit {
    comm_share: f64,
}

impl SlotSolver for FixedSplit {
    fn id(&self) -> SolverId {
        // Traces carry a solver id; report the closest built-in family.
        SolverId::Baseline
    }

    fn solve(&self, state: &NetworkState, params: &SystemParams, _v: f64, _gamma_min: f64) -> PrecoderDecision {
        let ch = &state.channel;
        let (Some(d_c), Ok(radar)) = (ch.h.normalized(), zf_radar_direction(&ch.h, &ch.g)) else {
            return PrecoderDecision::fallback(params.n_tx, SolverStatus::Fallback, "degenerate channel");
        };
        let p_c = self.comm_share * params.p_max;
        PrecoderDecision::from_precoders(
            d_c.scale(p_c.sqrt()),
            radar.direction.scale((params.p_max - p_c).sqrt()),
            SolverStatus::Ok,
        )
    }
}

fn main() {
    let system = SystemParams::normalized(1.0);
    let ctrl = ControllerParams {
        v: 100.0,
        gamma_min: from_db(5.0),
        n_slots: 2000,
        solver: SolverId::Zf,
    };
    for share in [0.6, 0.8, 1.0] {
        let trace = run_episode_with_solver(&system, &ctrl, 0, &FixedSplit { comm_share: share }).unwrap();
        let (gc, gr) = trace.tail_means(0.25);
        println!("fixed split {share:.1}: SINR {:.3} dB, radar SNR {:.3} dB", to_db(gc), to_db(gr));
    }
    let trace = run_episode(&system, &ctrl, 0).unwrap();
    let (gc, gr) = trace.tail_means(0.25);
    println!("ZF:              SINR {:.3} dB, radar SNR {:.3} dB", to_db(gc), to_db(gr));
}

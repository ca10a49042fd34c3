//! One full episode of the drift-plus-penalty controller. Prints the running
//! average SINR and the queue at a few checkpoints, then checks the queue
//! telescoping bound `mean SINR >= gamma_min - Q(T)/T`.
//!
//! ```text
//! cargo run --release --example lyapunov_episode -- sca
//! ```
//! The optional argument picks the solver (`zf`, `sca` or `baseline`).

use jcas::prelude::*;

fn main() {
    let solver: SolverId = std::env::args().nth(1).map(|s| s.parse().expect("solver id")).unwrap_or(SolverId::Zf);
    let system = SystemParams::normalized(1.0);
    let ctrl = ControllerParams {
        v: 100.0,
        gamma_min: from_db(5.0),
        n_slots: 2000,
        solver,
    };
    let trace = run_episode(&system, &ctrl, 0).expect("valid parameters");

    let running = trace.running_gamma_c();
    for t in [1usize, 10, 100, 500, 1000, 2000] {
        let r = &trace.records[t - 1];
        println!("t = {t:>4}: running SINR {:>7.3} dB, Q {:>8.3}", to_db(running[t - 1]), r.q_before);
    }
    let (gc, gr) = trace.tail_means(0.25);
    println!("{solver}: tail SINR {:.3} dB, tail radar SNR {:.3} dB", to_db(gc), to_db(gr));
    println!("running average first within 0.5 dB of target at t = {:?}", trace.convergence_slot(0.5));

    let report = telescoping_check(&trace);
    println!(
        "telescoping: mean SINR {:.6} >= bound {:.6} (identity residual {:.1e})",
        report.mean_gamma_c, report.bound, report.identity_residual
    );
}

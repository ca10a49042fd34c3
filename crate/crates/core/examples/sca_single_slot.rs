//! Run successive convex approximation on one slot and print the objective
//! after every outer iteration, next to the zero-forcing value.
//!
//! ```text
//! cargo run --release --example sca_single_slot -- 25
//! ```
//! The optional argument is the queue backlog `Q`.

use jcas::channel::{ChannelSampler, SystemParams};
use jcas::controller::NetworkState;
use jcas::metrics::{comm_sinr, dpp_objective};
use jcas::solver::sca::{initial_point, sca_solve_from, ScaParams};
use jcas::solver::zf::zf_solve;

fn main() {
    let q: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(25.0);
    let params = SystemParams::normalized(1.0);
    let v = 100.0;
    let state = NetworkState {
        q,
        channel: ChannelSampler::new(&params, 11).next_slot(),
    };

    let init = initial_point(&state, &params).expect("nonzero channel");
    let outcome = sca_solve_from(&state, &params, v, &ScaParams::default(), init).expect("SCA failed");
    for (k, it) in outcome.history.iter().enumerate() {
        println!("iter {k:>2}: objective {:.8}  beta {:.5}", it.objective, it.beta);
    }

    let d = &outcome.decision;
    println!(
        "SCA: p_c {:.4}, p_r {:.4}, SINR {:.4}, status {}",
        d.p_c,
        d.p_r,
        comm_sinr(&state.channel.h, &d.w_c, &d.w_r, params.sigma2_c),
        d.status
    );
    let zf = zf_solve(&state, &params, v);
    println!(
        "ZF objective {:.8} vs SCA {:.8}",
        dpp_objective(&state, &zf.w_c, &zf.w_r, &params, v),
        dpp_objective(&state, &d.w_c, &d.w_r, &params, v)
    );
}

//! Solve one slot with the closed-form zero-forcing method and show how the
//! queue backlog moves power from the radar-friendly direction to the user.
//!
//! ```text
//! cargo run --release --example zf_single_slot
//! ```

use jcas::channel::{ChannelSampler, SystemParams};
use jcas::controller::NetworkState;
use jcas::metrics::{comm_sinr, radar_snr, to_db};
use jcas::solver::zf::{comm_weight, zf_radar_direction, zf_solve};

fn main() {
    let params = SystemParams::normalized(1.0);
    let v = 100.0;
    let channel = ChannelSampler::new(&params, 3).next_slot();

    let radar = zf_radar_direction(&channel.h, &channel.g).expect("valid channel");
    println!(
        "null-space radar gain ||G d_r||^2 = {:.4}, leakage |h^H d_r| = {:.2e}",
        radar.gain,
        channel.h.dot(&radar.direction).norm()
    );

    println!("{:>8} {:>8} {:>6} {:>6} {:>10} {:>12}", "Q", "K", "p_c", "p_r", "SINR dB", "radar SNR dB");
    for q in [0.0, 1.0, 10.0, 100.0, 1000.0] {
        let state = NetworkState { q, channel: channel.clone() };
        let d = zf_solve(&state, &params, v);
        let sinr = comm_sinr(&channel.h, &d.w_c, &d.w_r, params.sigma2_c);
        let snr = radar_snr(&channel.g, &d.w_c, &d.w_r, params.alpha_mag2, params.sigma2_r);
        println!(
            "{q:>8} {:>8.3} {:>6.2} {:>6.2} {:>10.3} {:>12.3}",
            comm_weight(q, v, &params),
            d.p_c,
            d.p_r,
            to_db(sinr),
            to_db(snr)
        );
    }
}

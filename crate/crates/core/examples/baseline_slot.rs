//! The myopic baseline: meet the SINR target in every slot, give the rest of
//! the budget to the null-space radar beam. Prints the chosen split per slot
//! and the infeasible fraction against its closed form.
//!
//! ```text
//! cargo run --release --example baseline_slot
//! ```

use jcas::channel::{ChannelSampler, SystemParams};
use jcas::metrics::from_db;
use jcas::solver::baseline::{baseline_solve, min_comm_power, BaselineParams};
use jcas::solver::SolverStatus;

/// `P(X < x)` for `X ~ Gamma(n, 1)`, the law of `||h||^2` with `n` antennas.
fn gamma_cdf(n: usize, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..n {
        term *= x / k as f64;
        sum += term;
    }
    1.0 - (-x).exp() * sum
}

fn main() {
    let bl = BaselineParams {
        gamma_min: from_db(10.0),
        ..BaselineParams::default()
    };
    for p_db in [0.0, 5.0, 10.0] {
        let params = SystemParams::normalized(from_db(p_db));
        let mut sampler = ChannelSampler::new(&params, 1);
        for t in 0..3 {
            let ch = sampler.next_slot();
            let d = baseline_solve(&ch, &params, &bl);
            println!(
                "P_max {p_db:>4} dB slot {t}: need p_c >= {:.3}, chose p_c {:.3} p_r {:.3} ({})",
                min_comm_power(&ch, &params, bl.gamma_min),
                d.p_c,
                d.p_r,
                d.status
            );
        }
        let slots = 2000;
        let infeasible = (0..slots)
            .filter(|_| baseline_solve(&sampler.next_slot(), &params, &bl).status == SolverStatus::Infeasible)
            .count();
        let oracle = gamma_cdf(params.n_tx, bl.gamma_min * params.sigma2_c / params.p_max);
        println!(
            "  infeasible fraction {:.4}, closed form {:.4}",
            infeasible as f64 / slots as f64,
            oracle
        );
    }
}

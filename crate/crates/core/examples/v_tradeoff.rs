//! The queue-versus-utility tradeoff: sweep `V` over several seeds and report
//! tail averages and the convergence slot of the running SINR average.
//!
//! ```text
//! cargo run --release --example v_tradeoff -- zf 10
//! ```
//! Arguments: solver (default `zf`) and number of seeds (default 5).

use jcas::prelude::*;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn main() {
    let mut args = std::env::args().skip(1);
    let solver: SolverId = args.next().map(|s| s.parse().expect("solver id")).unwrap_or(SolverId::Zf);
    let seeds: u64 = args.next().map(|s| s.parse().expect("seed count")).unwrap_or(5);
    let system = SystemParams::normalized(1.0);

    println!("{:>6} {:>10} {:>14} {:>16}", "V", "SINR dB", "radar SNR dB", "median conv slot");
    for v in [1.0, 10.0, 100.0, 1000.0] {
        let ctrl = ControllerParams {
            v,
            gamma_min: from_db(5.0),
            n_slots: 2000,
            solver,
        };
        let (mut gc, mut gr, mut conv) = (0.0, 0.0, Vec::new());
        for seed in 0..seeds {
            let trace = run_episode(&system, &ctrl, seed).expect("valid parameters");
            let (c, r) = trace.tail_means(0.25);
            gc += c;
            gr += r;
            conv.push(trace.convergence_slot(0.5).map_or(f64::INFINITY, |t| t as f64));
        }
        let k = seeds as f64;
        println!("{v:>6} {:>10.3} {:>14.3} {:>16}", to_db(gc / k), to_db(gr / k), median(conv));
    }
}

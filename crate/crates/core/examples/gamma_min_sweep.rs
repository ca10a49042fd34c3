//! Average radar SNR against the SINR target at a 5 dB power budget. Prints
//! one column per solver plus the baseline's fraction of feasible slots.
//!
//! ```text
//! cargo run --release --example gamma_min_sweep
//! ```

use jcas::harness::config::SweepParameter;
use jcas::harness::{repro_config, run_sweep, Figure};
use jcas::solver::SolverId;

fn main() {
    let mut cfg = repro_config(Figure::Fig3b);
    cfg.seeds = vec![0, 1, 2];
    if let Some(sw) = cfg.sweep.as_mut() {
        sw.solvers = vec![SolverId::Zf, SolverId::Baseline];
        assert_eq!(sw.parameter, SweepParameter::GammaMinDb);
    }
    let table = run_sweep(&cfg).expect("sweep config");

    println!("{:>12} {:>12} {:>12} {:>10}", "gamma_min dB", "ZF dB", "baseline dB", "bl feas");
    for (zf, bl) in table.column(SolverId::Zf).iter().zip(table.column(SolverId::Baseline)) {
        println!(
            "{:>12} {:>12.3} {:>12.3} {:>10.3}",
            zf.value, zf.avg_gamma_r_db, bl.avg_gamma_r_db, bl.feas_frac
        );
    }
}

//! Average radar SNR against the power budget at a 10 dB SINR target, for the
//! three solvers, written as CSV through the harness.
//!
//! ```text
//! cargo run --release --example power_sweep -- out/power
//! ```
//! Uses three seeds and 1000 slots to stay quick; the `fig3a` repro setup
//! runs the full-size version.

use std::path::PathBuf;

use jcas::harness::csv::format_sweep_csv;
use jcas::harness::sweep::write_sweep;
use jcas::harness::{repro_config, run_sweep, Figure};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/power_sweep".into()));
    let mut cfg = repro_config(Figure::Fig3a);
    cfg.seeds = vec![0, 1, 2];
    cfg.controller.n_slots = 1000;

    let table = run_sweep(&cfg).expect("sweep config");
    print!("{}", format_sweep_csv(&table));
    let path = write_sweep(&cfg, &table, &dir).expect("writable output directory");
    println!("wrote {}", path.display());
}

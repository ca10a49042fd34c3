//! Parse an experiment config, apply one sweep point and print the canonical
//! form that is stored next to every result.
//!
//! ```text
//! cargo run --release --example config_file
//! ```

use jcas::harness::config::{parse_config, SweepParameter};

const TEXT: &str = r#"
system.p_max_db = 3
controller.v = 100
controller.gamma_min_db = 8
controller.solver = "sca"
sweep.parameter = "v"
sweep.values = [1, 10, 100]
sweep.solvers = ["sca", "zf"]
run.seeds = [0, 1, 2]
"#;

fn main() {
    let cfg = parse_config(TEXT).expect("valid config");
    println!(
        "P_max = {:.6} (|alpha|^2 = {:.6}), gamma_min = {:.6}",
        cfg.system.p_max, cfg.system.alpha_mag2, cfg.controller.gamma_min
    );
    let point = cfg.at_point(SweepParameter::V, 10.0);
    println!("at sweep point V = {}", point.controller.v);
    println!("--- canonical form ---\n{}", cfg.to_toml());
    assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);

    match parse_config("controller.v = 0\nsystem.p_max = 1.0\ncontroller.gamma_min = 1.0\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}

//! Exit codes and output locations of the `jcas` binary.

use std::path::Path;
use std::process::{Command, Output};

fn jcas(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jcas"))
        .args(args)
        .current_dir(cwd)
        .env_remove("JCAS_OUT")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn run_writes_trace_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = jcas(&["run", "--slots", "12", "--seed", "5", "--solver", "baseline", "--out", "res"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let trace = std::fs::read_to_string(dir.path().join("res/trace_baseline_seed5.csv")).unwrap();
    assert_eq!(trace.lines().count(), 13);
    assert!(dir.path().join("res/config.toml").exists());
}

#[test]
fn env_var_sets_output_and_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jcas"));
    cmd.args(["run", "--slots", "3"]).current_dir(dir.path()).env("JCAS_OUT", "from_env");
    assert!(cmd.status().unwrap().success());
    assert!(dir.path().join("from_env/trace_zf_seed0.csv").exists());
    cmd.args(["--out", "from_flag"]);
    assert!(cmd.status().unwrap().success());
    assert!(dir.path().join("from_flag/trace_zf_seed0.csv").exists());
}

#[test]
fn sweep_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.toml"),
        "system.p_max_db = 0.0\ncontroller.v = 10.0\ncontroller.n_slots = 20\n\
         sweep.parameter = \"gamma_min_db\"\nsweep.values = [0.0, 3.0]\nsweep.solvers = [\"zf\"]\nrun.seeds = [0]\n",
    )
    .unwrap();
    let out = jcas(&["sweep", "--config", "s.toml", "--out", "sw"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sw/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "controller.v = \"many\"\n").unwrap();
    let out = jcas(&["run", "--config", "bad.toml"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("controller.v"));

    std::fs::write(dir.path().join("typo.toml"), "controller.vv = 1.0\n").unwrap();
    assert_eq!(code(&jcas(&["run", "--config", "typo.toml"], dir.path())), 1);
    assert_eq!(code(&jcas(&["run", "--config", "missing.toml"], dir.path())), 1);
    assert_eq!(code(&jcas(&["run", "--slots", "0"], dir.path())), 1);
    assert_eq!(code(&jcas(&["repro", "fig9"], dir.path())), 1);
    assert_eq!(code(&jcas(&["sweep"], dir.path())), 1);
}

#[test]
fn runtime_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("blocker"), "").unwrap();
    let out = jcas(&["run", "--slots", "2", "--out", "blocker/sub"], dir.path());
    assert_eq!(code(&out), 2);
}

//! Experiment configuration files.
//!
//! The format is TOML written as flat dotted keys:
//!
//! ```toml
//! system.p_max_db = 0
//! controller.v = 100
//! controller.gamma_min_db = 5
//! controller.solver = "sca"
//! run.seeds = [0, 1, 2]
//! ```
//!
//! Decibel keys (`system.p_max_db`, `controller.gamma_min_db`) are converted
//! to linear values once, here. [`ExperimentConfig::to_toml`] writes the
//! canonical linear form, which parses back to an equal config.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::SystemParams;
use crate::controller::ControllerParams;
use crate::metrics::from_db;
use crate::solver::{BaselineParams, ScaParams, SolverId};

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    V,
    PMaxDb,
    GammaMinDb,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::V => "v",
            Self::PMaxDb => "p_max_db",
            Self::GammaMinDb => "gamma_min_db",
        }
    }
}

impl std::fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    /// Values in the parameter's own unit (dB for the `_db` parameters).
    pub values: Vec<f64>,
    pub solvers: Vec<SolverId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemParams,
    /// Keep `|alpha|^2 P_max = 1` whenever `P_max` changes.
    pub normalize_alpha: bool,
    pub controller: ControllerParams,
    pub sca: ScaParams,
    pub baseline: BaselineParams,
    pub sweep: Option<SweepSpec>,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    /// Fraction of final slots used for reported averages.
    pub tail_fraction: f64,
    /// Worker threads for sweeps; 0 uses one per core.
    pub workers: usize,
    /// Also write one trace CSV per episode.
    pub emit_traces: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let controller = ControllerParams::default();
        Self {
            system: SystemParams::normalized(1.0),
            normalize_alpha: true,
            baseline: BaselineParams {
                gamma_min: controller.gamma_min,
                ..BaselineParams::default()
            },
            controller,
            sca: ScaParams::default(),
            sweep: None,
            seeds: vec![0],
            output_dir: PathBuf::from("out"),
            tail_fraction: 0.25,
            workers: 0,
            emit_traces: false,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    system: RawSystem,
    #[serde(default)]
    controller: RawController,
    #[serde(default)]
    sca: RawSca,
    #[serde(default)]
    baseline: RawBaseline,
    sweep: Option<RawSweep>,
    #[serde(default)]
    run: RawRun,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    n_tx: Option<usize>,
    n_rx: Option<usize>,
    sigma2_c: Option<f64>,
    sigma2_r: Option<f64>,
    p_max: Option<f64>,
    p_max_db: Option<f64>,
    alpha_mag2: Option<f64>,
    normalize_alpha: Option<bool>,
    theta: Option<f64>,
    theta_jitter: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawController {
    v: Option<f64>,
    gamma_min: Option<f64>,
    gamma_min_db: Option<f64>,
    n_slots: Option<usize>,
    solver: Option<SolverId>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSca {
    tol: Option<f64>,
    max_outer_iters: Option<usize>,
    subproblem_tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBaseline {
    grid_points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: SweepParameter,
    values: Vec<f64>,
    solvers: Option<Vec<SolverId>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    seeds: Option<Vec<u64>>,
    output_dir: Option<PathBuf>,
    tail_fraction: Option<f64>,
    workers: Option<usize>,
    traces: Option<bool>,
}

/// Pick exactly one of a linear and a dB key, or none.
fn linear_or_db(
    linear: Option<f64>,
    db: Option<f64>,
    linear_key: &str,
    db_key: &str,
) -> Result<Option<f64>, HarnessError> {
    match (linear, db) {
        (Some(_), Some(_)) => Err(HarnessError::config(
            linear_key,
            format!("conflicts with `{db_key}`; give only one"),
        )),
        (Some(x), None) => Ok(Some(x)),
        (None, Some(d)) => Ok(Some(from_db(d))),
        (None, None) => Ok(None),
    }
}

fn positive(key: &str, x: f64) -> Result<f64, HarnessError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(HarnessError::config(key, format!("must be positive and finite, got {x}")))
    }
}

fn required<T>(value: Option<T>, key: &str) -> Result<T, HarnessError> {
    value.ok_or_else(|| HarnessError::config(key, "missing required key"))
}

/// Parse and validate a configuration document.
///
/// `system.p_max`, `controller.v` and `controller.gamma_min` (or their dB
/// forms) are required unless the sweep covers them, in which case they
/// default to the first sweep value.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, HarnessError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| HarnessError::Syntax(e.to_string()))?;
    let defaults = ExperimentConfig::default();

    let sweep = match raw.sweep {
        None => None,
        Some(s) => {
            if s.values.is_empty() {
                return Err(HarnessError::config("sweep.values", "must not be empty"));
            }
            if let Some(x) = s.values.iter().find(|x| !x.is_finite()) {
                return Err(HarnessError::config("sweep.values", format!("non-finite value {x}")));
            }
            if s.parameter == SweepParameter::V {
                for &x in &s.values {
                    positive("sweep.values", x)?;
                }
            }
            let solvers = s.solvers.unwrap_or_else(|| vec![SolverId::Sca, SolverId::Zf, SolverId::Baseline]);
            if solvers.is_empty() {
                return Err(HarnessError::config("sweep.solvers", "must not be empty"));
            }
            Some(SweepSpec {
                parameter: s.parameter,
                values: s.values,
                solvers,
            })
        }
    };
    let swept = |p: SweepParameter| sweep.as_ref().filter(|s| s.parameter == p).map(|s| s.values[0]);

    let sys = raw.system;
    let p_max = match linear_or_db(sys.p_max, sys.p_max_db, "system.p_max", "system.p_max_db")? {
        Some(p) => p,
        None => from_db(required(swept(SweepParameter::PMaxDb), "system.p_max")?),
    };
    let p_max = positive("system.p_max", p_max)?;
    let normalize_alpha = sys.normalize_alpha.unwrap_or(true);
    let alpha_mag2 = match (normalize_alpha, sys.alpha_mag2) {
        (true, Some(_)) => {
            return Err(HarnessError::config(
                "system.alpha_mag2",
                "cannot be set while system.normalize_alpha is true",
            ))
        }
        (true, None) => 1.0 / p_max,
        (false, a) => positive("system.alpha_mag2", a.unwrap_or(1.0))?,
    };
    let system = SystemParams {
        n_tx: sys.n_tx.unwrap_or(defaults.system.n_tx),
        n_rx: sys.n_rx.unwrap_or(defaults.system.n_rx),
        sigma2_c: positive("system.sigma2_c", sys.sigma2_c.unwrap_or(defaults.system.sigma2_c))?,
        sigma2_r: positive("system.sigma2_r", sys.sigma2_r.unwrap_or(defaults.system.sigma2_r))?,
        alpha_mag2,
        p_max,
        theta: sys.theta.unwrap_or(defaults.system.theta),
        theta_jitter: sys.theta_jitter.unwrap_or(0.0),
    };
    if system.n_tx == 0 {
        return Err(HarnessError::config("system.n_tx", "must be at least 1"));
    }
    if system.n_rx == 0 {
        return Err(HarnessError::config("system.n_rx", "must be at least 1"));
    }
    if !system.theta.is_finite() {
        return Err(HarnessError::config("system.theta", "must be finite"));
    }
    if !(system.theta_jitter >= 0.0 && system.theta_jitter.is_finite()) {
        return Err(HarnessError::config("system.theta_jitter", "must be nonnegative and finite"));
    }

    let ctl = raw.controller;
    let v = match ctl.v.or(swept(SweepParameter::V)) {
        Some(v) => v,
        None => required(None, "controller.v")?,
    };
    let v = positive("controller.v", v)?;
    let gamma_min = match linear_or_db(
        ctl.gamma_min,
        ctl.gamma_min_db,
        "controller.gamma_min",
        "controller.gamma_min_db",
    )? {
        Some(g) => g,
        None => from_db(required(swept(SweepParameter::GammaMinDb), "controller.gamma_min")?),
    };
    if !(gamma_min >= 0.0 && gamma_min.is_finite()) {
        return Err(HarnessError::config(
            "controller.gamma_min",
            format!("must be nonnegative and finite, got {gamma_min}"),
        ));
    }
    let n_slots = ctl.n_slots.unwrap_or(defaults.controller.n_slots);
    if n_slots == 0 {
        return Err(HarnessError::config("controller.n_slots", "must be at least 1"));
    }
    let controller = ControllerParams {
        v,
        gamma_min,
        n_slots,
        solver: ctl.solver.unwrap_or(defaults.controller.solver),
    };

    let sca = ScaParams {
        tol: positive("sca.tol", raw.sca.tol.unwrap_or(defaults.sca.tol))?,
        max_outer_iters: raw.sca.max_outer_iters.unwrap_or(defaults.sca.max_outer_iters),
        subproblem_tol: positive(
            "sca.subproblem_tol",
            raw.sca.subproblem_tol.unwrap_or(defaults.sca.subproblem_tol),
        )?,
    };
    if sca.max_outer_iters == 0 {
        return Err(HarnessError::config("sca.max_outer_iters", "must be at least 1"));
    }
    let grid_points = raw.baseline.grid_points.unwrap_or(defaults.baseline.grid_points);
    if grid_points < 2 {
        return Err(HarnessError::config("baseline.grid_points", "must be at least 2"));
    }

    let run = raw.run;
    let seeds = run.seeds.unwrap_or_else(|| if sweep.is_some() { (0..10).collect() } else { vec![0] });
    if seeds.is_empty() {
        return Err(HarnessError::config("run.seeds", "must not be empty"));
    }
    let tail_fraction = run.tail_fraction.unwrap_or(defaults.tail_fraction);
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(HarnessError::config("run.tail_fraction", "must lie in (0, 1]"));
    }

    Ok(ExperimentConfig {
        system,
        normalize_alpha,
        controller,
        sca,
        baseline: BaselineParams { gamma_min, grid_points },
        sweep,
        seeds,
        output_dir: run.output_dir.unwrap_or(defaults.output_dir),
        tail_fraction,
        workers: run.workers.unwrap_or(0),
        emit_traces: run.traces.unwrap_or(false),
    })
}

/// Read and parse a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_config(&text)
}

fn toml_string(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn float_list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|x| format!("{x:?}")).collect();
    format!("[{}]", items.join(", "))
}

impl ExperimentConfig {
    /// Change the power budget, renormalising `|alpha|^2` if enabled.
    pub fn set_p_max(&mut self, p_max: f64) {
        self.system.p_max = p_max;
        if self.normalize_alpha {
            self.system.alpha_mag2 = 1.0 / p_max;
        }
    }

    pub fn set_gamma_min(&mut self, gamma_min: f64) {
        self.controller.gamma_min = gamma_min;
        self.baseline.gamma_min = gamma_min;
    }

    /// Copy of this config with one sweep value applied.
    pub fn at_point(&self, parameter: SweepParameter, value: f64) -> ExperimentConfig {
        let mut c = self.clone();
        match parameter {
            SweepParameter::V => c.controller.v = value,
            SweepParameter::PMaxDb => c.set_p_max(from_db(value)),
            SweepParameter::GammaMinDb => c.set_gamma_min(from_db(value)),
        }
        c
    }

    /// Canonical document. Floats use the shortest exact representation, so
    /// parsing the output gives back an equal config.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        let s_ = &mut s;
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s_, "{k} = {v}");
        };
        let sys = &self.system;
        line("system.n_tx", sys.n_tx.to_string());
        line("system.n_rx", sys.n_rx.to_string());
        line("system.sigma2_c", format!("{:?}", sys.sigma2_c));
        line("system.sigma2_r", format!("{:?}", sys.sigma2_r));
        line("system.p_max", format!("{:?}", sys.p_max));
        line("system.normalize_alpha", self.normalize_alpha.to_string());
        if !self.normalize_alpha {
            line("system.alpha_mag2", format!("{:?}", sys.alpha_mag2));
        }
        line("system.theta", format!("{:?}", sys.theta));
        line("system.theta_jitter", format!("{:?}", sys.theta_jitter));
        let c = &self.controller;
        line("controller.v", format!("{:?}", c.v));
        line("controller.gamma_min", format!("{:?}", c.gamma_min));
        line("controller.n_slots", c.n_slots.to_string());
        line("controller.solver", toml_string(c.solver.as_str()));
        line("sca.tol", format!("{:?}", self.sca.tol));
        line("sca.max_outer_iters", self.sca.max_outer_iters.to_string());
        line("sca.subproblem_tol", format!("{:?}", self.sca.subproblem_tol));
        line("baseline.grid_points", self.baseline.grid_points.to_string());
        if let Some(sw) = &self.sweep {
            line("sweep.parameter", toml_string(sw.parameter.as_str()));
            line("sweep.values", float_list(&sw.values));
            let solvers: Vec<String> = sw.solvers.iter().map(|id| toml_string(id.as_str())).collect();
            line("sweep.solvers", format!("[{}]", solvers.join(", ")));
        }
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        line("run.seeds", format!("[{}]", seeds.join(", ")));
        line("run.output_dir", toml_string(&self.output_dir.to_string_lossy()));
        line("run.tail_fraction", format!("{:?}", self.tail_fraction));
        line("run.workers", self.workers.to_string());
        line("run.traces", self.emit_traces.to_string());
        s
    }
}

//! Canned experiment setups for the four standard figures.
//!
//! | figure | varies | fixed | solvers | seeds |
//! |---|---|---|---|---|
//! | `fig1` | V in {1, 10, 100, 1000} | P_max = 0 dB, gamma_min = 5 dB | SCA | 1 |
//! | `fig2` | V in {1, 10, 100, 1000} | P_max = 0 dB, gamma_min = 5 dB | ZF | 1 |
//! | `fig3a` | P_max in {0, 2, ..., 10} dB | gamma_min = 10 dB, V = 100 | all | 10 |
//! | `fig3b` | gamma_min in {0, 2, ..., 12} dB | P_max = 5 dB, V = 100 | all | 10 |
//!
//! The two V sweeps also write per-slot traces, since those figures show
//! convergence over time.

use std::path::Path;
use std::str::FromStr;

use crate::metrics::from_db;
use crate::solver::SolverId;

use super::config::{ExperimentConfig, SweepParameter, SweepSpec};
use super::sweep::{run_sweep, write_sweep, SweepTable};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3a,
    Fig3b,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3a, Figure::Fig3b];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3a => "fig3a",
            Self::Fig3b => "fig3b",
        }
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig1, fig2, fig3a or fig3b)"))
    }
}

fn steps(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

pub fn repro_config(figure: Figure) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.output_dir = Path::new("out").join(figure.name());
    match figure {
        Figure::Fig1 | Figure::Fig2 => {
            let solver = if figure == Figure::Fig1 { SolverId::Sca } else { SolverId::Zf };
            cfg.set_p_max(1.0);
            cfg.set_gamma_min(from_db(5.0));
            cfg.controller.solver = solver;
            cfg.seeds = vec![0];
            cfg.emit_traces = true;
            cfg.sweep = Some(SweepSpec {
                parameter: SweepParameter::V,
                values: vec![1.0, 10.0, 100.0, 1000.0],
                solvers: vec![solver],
            });
        }
        Figure::Fig3a | Figure::Fig3b => {
            cfg.controller.v = 100.0;
            cfg.seeds = (0..10).collect();
            let (parameter, values) = if figure == Figure::Fig3a {
                cfg.set_gamma_min(from_db(10.0));
                (SweepParameter::PMaxDb, steps(0.0, 10.0, 2.0))
            } else {
                cfg.set_p_max(from_db(5.0));
                (SweepParameter::GammaMinDb, steps(0.0, 12.0, 2.0))
            };
            let base = cfg.at_point(parameter, values[0]);
            cfg = base;
            cfg.sweep = Some(SweepSpec {
                parameter,
                values,
                solvers: vec![SolverId::Sca, SolverId::Zf, SolverId::Baseline],
            });
        }
    }
    cfg
}

/// Run a (possibly modified) figure config and write its outputs to `dir`.
pub fn run_repro(cfg: &ExperimentConfig, dir: &Path) -> Result<SweepTable, HarnessError> {
    let table = run_sweep(cfg)?;
    write_sweep(cfg, &table, dir)?;
    Ok(table)
}

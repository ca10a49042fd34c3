//! Multi-seed runs and parameter sweeps.
//!
//! Episodes are independent, so they run on a rayon pool. Results are
//! collected in job order, which makes every table independent of thread
//! scheduling.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::channel::RNG_ALGORITHM;
use crate::controller::{run_episode_with_solver, ControllerError, EpisodeTrace};
use crate::metrics::to_db;
use crate::solver::{make_solver, SolverId};

use super::config::{ExperimentConfig, SweepParameter};
use super::csv::{emit_sweep_csv, emit_trace_csv, write_text};
use super::HarnessError;

/// Fraction of slots in which the per-slot SINR target could be met.
pub fn baseline_feasibility_fraction(trace: &EpisodeTrace) -> f64 {
    trace.feasibility_fraction()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeSummary {
    pub seed: u64,
    pub solver: SolverId,
    /// Linear tail-window means.
    pub tail_gamma_c: f64,
    pub tail_gamma_r: f64,
    pub feas_frac: f64,
    pub q_final: f64,
    pub convergence_slot: Option<usize>,
}

impl EpisodeSummary {
    pub fn from_trace(trace: &EpisodeTrace, tail_fraction: f64) -> Self {
        let (tail_gamma_c, tail_gamma_r) = trace.tail_means(tail_fraction);
        Self {
            seed: trace.seed,
            solver: trace.solver,
            tail_gamma_c,
            tail_gamma_r,
            feas_frac: trace.feasibility_fraction(),
            q_final: trace.q_final,
            convergence_slot: trace.convergence_slot(0.5),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEpisode {
    pub value: f64,
    pub solver: SolverId,
    pub seed: u64,
    pub outcome: Result<EpisodeTrace, ControllerError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub solver: SolverId,
    /// dB of the seed-mean of linear tail averages.
    pub avg_gamma_c_db: f64,
    pub avg_gamma_r_db: f64,
    pub feas_frac: f64,
    /// Episodes that completed.
    pub n_seeds: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub parameter: SweepParameter,
    /// Sorted by value, then by solver order in the config.
    pub rows: Vec<SweepRow>,
    pub episodes: Vec<SweepEpisode>,
}

impl SweepTable {
    pub fn row(&self, value: f64, solver: SolverId) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.value == value && r.solver == solver)
    }

    /// Rows for one solver, in value order.
    pub fn column(&self, solver: SolverId) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.solver == solver).collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().map(|r| r.failed).sum()
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn run_one(cfg: &ExperimentConfig, solver: SolverId, seed: u64) -> Result<EpisodeTrace, ControllerError> {
    let mut ctrl = cfg.controller.clone();
    ctrl.solver = solver;
    let s = make_solver(solver, &cfg.sca, &cfg.baseline);
    run_episode_with_solver(&cfg.system, &ctrl, seed, s.as_ref())
}

/// One episode per seed with the configured solver.
pub fn run_seeds(cfg: &ExperimentConfig) -> Vec<(u64, Result<EpisodeTrace, ControllerError>)> {
    with_pool(cfg.workers, || {
        cfg.seeds
            .par_iter()
            .map(|&seed| (seed, run_one(cfg, cfg.controller.solver, seed)))
            .collect()
    })
}

/// Run every sweep value x solver x seed and aggregate per point.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepTable, HarnessError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| HarnessError::config("sweep.parameter", "missing required key"))?;

    let mut values = sweep.values.clone();
    values.sort_by(f64::total_cmp);
    values.dedup();

    let jobs: Vec<(f64, SolverId, u64)> = values
        .iter()
        .flat_map(|&v| {
            sweep
                .solvers
                .iter()
                .flat_map(move |&s| cfg.seeds.iter().map(move |&seed| (v, s, seed)))
        })
        .collect();

    let episodes: Vec<SweepEpisode> = with_pool(cfg.workers, || {
        jobs.par_iter()
            .map(|&(value, solver, seed)| SweepEpisode {
                value,
                solver,
                seed,
                outcome: run_one(&cfg.at_point(sweep.parameter, value), solver, seed),
            })
            .collect()
    });

    let mut rows = Vec::new();
    for &value in &values {
        for &solver in &sweep.solvers {
            let summaries: Vec<EpisodeSummary> = episodes
                .iter()
                .filter(|e| e.value == value && e.solver == solver)
                .filter_map(|e| e.outcome.as_ref().ok())
                .map(|t| EpisodeSummary::from_trace(t, cfg.tail_fraction))
                .collect();
            let n = summaries.len();
            let mean = |f: fn(&EpisodeSummary) -> f64| {
                if n == 0 {
                    f64::NAN
                } else {
                    summaries.iter().map(f).sum::<f64>() / n as f64
                }
            };
            rows.push(SweepRow {
                value,
                solver,
                avg_gamma_c_db: to_db(mean(|s| s.tail_gamma_c)),
                avg_gamma_r_db: to_db(mean(|s| s.tail_gamma_r)),
                feas_frac: mean(|s| s.feas_frac),
                n_seeds: n,
                failed: cfg.seeds.len() - n,
            });
        }
    }

    Ok(SweepTable {
        parameter: sweep.parameter,
        rows,
        episodes,
    })
}

/// Comment block written above the canonical config in every output directory.
pub fn metadata_header(cfg: &ExperimentConfig) -> String {
    let seeds: Vec<String> = cfg.seeds.iter().map(u64::to_string).collect();
    let solvers: Vec<&str> = match &cfg.sweep {
        Some(s) => s.solvers.iter().map(SolverId::as_str).collect(),
        None => vec![cfg.controller.solver.as_str()],
    };
    format!(
        "# rng: {RNG_ALGORITHM}\n\
         # seeds: [{}]\n\
         # solvers: [{}]\n\
         # averages: tail window of the last {} of slots; sweep rows average linear values over seeds, then convert to dB\n\
         # baseline: infeasible slots send the whole budget to communications\n",
        seeds.join(", "),
        solvers.join(", "),
        cfg.tail_fraction,
    )
}

fn write_config(cfg: &ExperimentConfig, dir: &Path) -> Result<(), HarnessError> {
    write_text(&dir.join("config.toml"), &(metadata_header(cfg) + &cfg.to_toml()))
}

pub fn trace_file_name(solver: SolverId, seed: u64, point: Option<(SweepParameter, f64)>) -> String {
    match point {
        Some((p, v)) => format!("trace_{solver}_{p}_{v}_seed{seed}.csv"),
        None => format!("trace_{solver}_seed{seed}.csv"),
    }
}

/// Write traces plus `config.toml`. Returns the paths of the trace files.
pub fn write_run(
    cfg: &ExperimentConfig,
    traces: &[(u64, Result<EpisodeTrace, ControllerError>)],
    dir: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    write_config(cfg, dir)?;
    let mut paths = Vec::new();
    for (seed, outcome) in traces {
        if let Ok(trace) = outcome {
            let path = dir.join(trace_file_name(trace.solver, *seed, None));
            emit_trace_csv(trace, &path)?;
            paths.push(path);
        }
    }
    Ok(paths)
}

/// Write `sweep.csv`, `config.toml` and, if enabled, one trace per episode.
pub fn write_sweep(cfg: &ExperimentConfig, table: &SweepTable, dir: &Path) -> Result<PathBuf, HarnessError> {
    write_config(cfg, dir)?;
    let path = dir.join("sweep.csv");
    emit_sweep_csv(table, &path)?;
    if cfg.emit_traces {
        for e in &table.episodes {
            if let Ok(trace) = &e.outcome {
                let name = trace_file_name(e.solver, e.seed, Some((table.parameter, e.value)));
                emit_trace_csv(trace, &dir.join("traces").join(name))?;
            }
        }
    }
    Ok(path)
}

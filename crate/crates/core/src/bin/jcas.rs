//! Command-line front end: `jcas run`, `jcas sweep`, `jcas repro`.
//!
//! Exit codes: 0 on success, 1 for configuration errors, 2 for runtime errors
//! (I/O failures or episodes that did not complete).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jcas::harness::config::load_config;
use jcas::harness::csv::format_sweep_csv;
use jcas::harness::sweep::{run_seeds, write_run, write_sweep, EpisodeSummary};
use jcas::harness::{repro_config, run_sweep, ExperimentConfig, Figure, HarnessError};
use jcas::metrics::to_db;
use jcas::solver::SolverId;

#[derive(Parser)]
#[command(name = "jcas", version, about = "Dynamic joint communications-and-sensing precoding simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one episode and write its per-slot trace.
    Run(Overrides),
    /// Run the sweep described by the config file.
    Sweep(Overrides),
    /// Run a canned figure setup: fig1, fig2, fig3a, fig3b or all.
    Repro {
        figure: String,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// Configuration file (TOML with dotted keys).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Use this single seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Use only this solver.
    #[arg(long)]
    solver: Option<SolverId>,
    /// Number of slots per episode.
    #[arg(long)]
    slots: Option<usize>,
    /// Output directory; takes precedence over JCAS_OUT and the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<(), HarnessError> {
        if let Some(seed) = self.seed {
            cfg.seeds = vec![seed];
        }
        if let Some(solver) = self.solver {
            cfg.controller.solver = solver;
            if let Some(sw) = cfg.sweep.as_mut() {
                sw.solvers = vec![solver];
            }
        }
        if let Some(slots) = self.slots {
            if slots == 0 {
                return Err(HarnessError::Config {
                    key: "--slots".into(),
                    message: "must be at least 1".into(),
                });
            }
            cfg.controller.n_slots = slots;
        }
        if let Some(dir) = std::env::var_os("JCAS_OUT") {
            cfg.output_dir = dir.into();
        }
        if let Some(dir) = &self.out {
            cfg.output_dir = dir.clone();
        }
        Ok(())
    }

    fn load(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path).map_err(|e| match e {
                HarnessError::Io { .. } => HarnessError::Config {
                    key: "--config".into(),
                    message: e.to_string(),
                },
                e => e,
            })?,
            None => ExperimentConfig::default(),
        };
        self.apply(&mut cfg)?;
        Ok(cfg)
    }
}

fn run(o: &Overrides) -> Result<(), HarnessError> {
    let mut cfg = o.load()?;
    cfg.seeds.truncate(1);
    let results = run_seeds(&cfg);
    let paths = write_run(&cfg, &results, &cfg.output_dir)?;
    for (seed, outcome) in &results {
        match outcome {
            Ok(trace) => {
                let s = EpisodeSummary::from_trace(trace, cfg.tail_fraction);
                println!(
                    "{} seed {seed}: tail SINR {:.3} dB, tail radar SNR {:.3} dB, Q(T) {:.3}",
                    trace.solver,
                    to_db(s.tail_gamma_c),
                    to_db(s.tail_gamma_r),
                    s.q_final
                );
            }
            Err(e) => return Err(HarnessError::Episode(e.clone())),
        }
    }
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn sweep(cfg: &ExperimentConfig) -> Result<(), HarnessError> {
    let table = run_sweep(cfg)?;
    let path = write_sweep(cfg, &table, &cfg.output_dir)?;
    print!("{}", format_sweep_csv(&table));
    println!("wrote {}", path.display());
    let failed = table.failures();
    if failed > 0 {
        return Err(HarnessError::Incomplete {
            failed,
            total: table.episodes.len(),
        });
    }
    Ok(())
}

fn repro(figure: &str, o: &Overrides) -> Result<(), HarnessError> {
    let figures: Vec<Figure> = if figure == "all" {
        Figure::ALL.to_vec()
    } else {
        vec![figure.parse().map_err(|m| HarnessError::Config {
            key: "figure".into(),
            message: m,
        })?]
    };
    if o.config.is_some() {
        return Err(HarnessError::Config {
            key: "--config".into(),
            message: "repro uses built-in configs; use `sweep --config` instead".into(),
        });
    }
    for f in figures {
        let mut cfg = repro_config(f);
        cfg.output_dir = PathBuf::from("out");
        o.apply(&mut cfg)?;
        cfg.output_dir = cfg.output_dir.join(f.name());
        println!("== {}", f.name());
        sweep(&cfg)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(o) => run(o),
        Command::Sweep(o) => o.load().and_then(|cfg| sweep(&cfg)),
        Command::Repro { figure, overrides } => repro(figure, overrides),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 1 } else { 2 })
        }
    }
}

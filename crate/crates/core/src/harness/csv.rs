//! CSV output with fixed column order and deterministic number formatting.
//!
//! Numbers are written in scientific notation with nine significant digits,
//! fields are comma separated and lines end in `\n`. The header is always
//! present, so an empty trace produces a one-line file.

use std::path::Path;

use crate::controller::EpisodeTrace;
use crate::metrics::to_db;

use super::sweep::SweepTable;
use super::HarnessError;

pub const TRACE_HEADER: &str = "t,q,gamma_c_db,gamma_r_db,p_c,p_r,status,iters";
pub const SWEEP_HEADER: &str = "sweep_param,value,solver,avg_gamma_c_db,avg_gamma_r_db,feas_frac,n_seeds";

/// Nine significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn format_trace_csv(trace: &EpisodeTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        let fields = [
            r.t.to_string(),
            fmt_num(r.q_before),
            fmt_num(to_db(r.gamma_c)),
            fmt_num(to_db(r.gamma_r)),
            fmt_num(r.p_c),
            fmt_num(r.p_r),
            r.status.as_str().to_string(),
            r.iterations.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn format_sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in &table.rows {
        let fields = [
            table.parameter.as_str().to_string(),
            fmt_num(row.value),
            row.solver.as_str().to_string(),
            fmt_num(row.avg_gamma_c_db),
            fmt_num(row.avg_gamma_r_db),
            fmt_num(row.feas_frac),
            row.n_seeds.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

pub fn emit_trace_csv(trace: &EpisodeTrace, path: &Path) -> Result<(), HarnessError> {
    write(path, &format_trace_csv(trace))
}

pub fn emit_sweep_csv(table: &SweepTable, path: &Path) -> Result<(), HarnessError> {
    write(path, &format_sweep_csv(table))
}

/// Write any text file, creating parent directories.
pub(crate) fn write_text(path: &Path, contents: &str) -> Result<(), HarnessError> {
    write(path, contents)
}

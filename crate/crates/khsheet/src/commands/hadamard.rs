use std::f64::consts::LN_10;

use khsheet_core::dispersion::growth_rate;
use khsheet_core::hadamard::{find_n_star, table_row, TableRow};
use khsheet_core::BackgroundState;
use rayon::prelude::*;
use serde_json::json;

use crate::config::HadamardConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, PlotFile, Report};

pub const HEADER: [&str; 10] = [
    "n", "norm_f0", "norm_h0", "norm_v0", "norm_G0", "norm_f_T", "norm_h_T", "norm_v_T", "norm_G_T", "log10_ratio",
];

pub fn validate(cfg: &HadamardConfig) -> CliResult<()> {
    if cfg.j < cfg.k {
        return Err(CliError::usage(format!("j = {} must be at least k = {}", cfg.j, cfg.k)));
    }
    if !(cfg.t0 > 0.0) || !cfg.t0.is_finite() {
        return Err(CliError::usage("t0 must be positive"));
    }
    if !(cfg.cbar > 0.0) || !cfg.cbar.is_finite() {
        return Err(CliError::usage("cbar must be positive"));
    }
    if let Some(a) = cfg.alpha {
        if !(a > 0.0) || !a.is_finite() {
            return Err(CliError::usage("alpha must be positive"));
        }
    }
    if cfg.n_list.contains(&0) {
        return Err(CliError::usage("band indices start at 1"));
    }
    Ok(())
}

fn cells(r: &TableRow) -> Vec<Cell> {
    let i = &r.initial.norms;
    let g = &r.grown.log_norms;
    let mut out = vec![Cell::Int(r.n as i64)];
    out.extend([i.f, i.h, i.v, i.g].map(Cell::Num));
    out.extend([g.f, g.h, g.v, g.g].map(|l| if l == f64::NEG_INFINITY { Cell::Num(0.0) } else { Cell::Log10(l / LN_10) }));
    out.push(Cell::Num(r.log10_ratio));
    out
}

pub fn run(state: &BackgroundState, cfg: &HadamardConfig) -> CliResult<Report> {
    validate(cfg)?;
    // fails with exit 1 outside the window, before any row is computed
    let x1 = growth_rate(state, 1.0)?;
    if cfg.n_list.is_empty() {
        return Err(CliError::Empty("n_list is empty".into()));
    }
    let rows: Vec<TableRow> =
        cfg.n_list.par_iter().map(|&n| table_row(state, n, cfg.j, cfg.k, cfg.t0, cfg.cbar)).collect::<Result<_, _>>()?;
    let n_star = match cfg.alpha {
        Some(a) => Some(find_n_star(state, a, cfg.t0, cfg.j, cfg.k, cfg.cbar)?),
        None => None,
    };
    let summary = json!({
        "background": state,
        "x1": x1,
        "j": cfg.j,
        "k": cfg.k,
        "t0": cfg.t0,
        "cbar": cfg.cbar,
        "alpha": cfg.alpha,
        "n_star": n_star,
        "c_univ": rows.first().map(|r| r.initial.c_univ),
    });
    let plot = PlotFile {
        name: "log10_ratio".into(),
        columns: vec!["n", "log10_ratio"],
        rows: rows.iter().map(|r| vec![r.n as f64, r.log10_ratio]).collect(),
    };
    Ok(Report { header: HEADER.to_vec(), rows: rows.iter().map(cells).collect(), summary: Some(summary), plots: vec![plot] })
}

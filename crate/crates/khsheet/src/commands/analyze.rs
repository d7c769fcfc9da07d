use khsheet_core::dispersion::{bound_constants, quartic_roots};
use khsheet_core::BackgroundState;
use rayon::prelude::*;

use crate::config::AnalyzeConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, PlotFile, Report};

pub const HEADER: [&str; 13] =
    ["K", "M", "c", "x1_sq", "x2_sq", "X1", "u_low", "u_upp", "classification", "C1", "C_star", "C2", "C3"];

fn row(k: f64, m: f64, cfg: &AnalyzeConfig) -> CliResult<Vec<Cell>> {
    let state = BackgroundState::from_dimensionless(k, m, cfg.c, cfg.eps0)?;
    let roots = quartic_roots(&state);
    let w = state.window();
    let mut out = vec![
        Cell::Num(k),
        Cell::Num(m),
        Cell::Num(cfg.c),
        Cell::Num(roots.x1_sq),
        Cell::Num(roots.x2_sq),
        Cell::opt(roots.x1),
        Cell::Num(w.u_low),
        Cell::Num(w.u_upp),
        Cell::Text(w.classification.as_str().to_string()),
    ];
    match bound_constants(&state) {
        Ok(b) => out.extend([b.c1, b.c_star, b.c2, b.c3].map(Cell::Num)),
        Err(_) => out.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
    }
    Ok(out)
}

pub fn run(cfg: &AnalyzeConfig) -> CliResult<Report> {
    let pairs: Vec<(f64, f64)> =
        cfg.k.values().iter().flat_map(|&k| cfg.m.values().into_iter().map(move |m| (k, m))).collect();
    if pairs.is_empty() {
        return Err(CliError::Empty("the sweep has no (K, M) pairs".into()));
    }
    let rows: Vec<Vec<Cell>> = pairs.par_iter().map(|&(k, m)| row(k, m, cfg)).collect::<CliResult<_>>()?;
    let plot = PlotFile {
        name: "x1_sq".into(),
        columns: vec!["K", "M", "x1_sq"],
        rows: pairs
            .iter()
            .zip(&rows)
            .map(|(&(k, m), r)| match r[3] {
                Cell::Num(x) => vec![k, m, x],
                _ => unreachable!("x1_sq is always a number"),
            })
            .collect(),
    };
    Ok(Report { header: HEADER.to_vec(), rows, summary: None, plots: vec![plot] })
}

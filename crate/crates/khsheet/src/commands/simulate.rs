use khsheet_core::dispersion::growth_rate;
use khsheet_core::modes::NormalMode;
use khsheet_core::simulator::growth::fit_log_slope;
use khsheet_core::simulator::{
    assemble_generator, cfl_limit, energy_monitor, evolve, spectral_abscissa, EvolveOptions, Grid1D, SimState,
};
use khsheet_core::{BackgroundState, Complex64, Side};
use serde_json::json;

use crate::config::{InitialData, SimulateConfig};
use crate::error::{CliError, CliResult};
use crate::output::{num, Cell, PlotFile, Report};

pub const HEADER: [&str; 4] = ["t", "log_norm", "energy", "residual"];

/// Gaussian in every scalar field on both sides, centred on the sheet, plus a
/// unit front displacement.
fn pulse(grid: &Grid1D, eta: f64, width: f64) -> SimState {
    let mut st = SimState::zeros(grid, eta);
    for side in Side::BOTH {
        let s = st.side_mut(side);
        for i in 0..grid.n {
            let x = grid.x(side, i);
            let g = Complex64::new((-x * x / width).exp(), 0.0);
            s[0][i] = g;
            s[2][i] = g * 0.5;
            s[3][i] = g * Complex64::new(0.0, 0.2);
        }
    }
    st.g = Complex64::new(1.0, 0.0);
    st
}

pub fn run(state: &BackgroundState, cfg: &SimulateConfig) -> CliResult<Report> {
    if !(cfg.eta.is_finite()) {
        return Err(CliError::usage("eta must be finite"));
    }
    if !(cfg.pulse_width > 0.0) {
        return Err(CliError::usage("pulse_width must be positive"));
    }
    let grid = Grid1D::new(cfg.l, cfg.n)?;
    let gen = assemble_generator(state, cfg.eta, &grid)?;
    let limit = cfl_limit(&gen, cfg.cfl);
    let dt = cfg.dt.unwrap_or(limit);
    let mut opts = EvolveOptions::new(dt, cfg.t);
    opts.cfl = cfg.cfl;
    // validate the step before any work is done
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(khsheet_core::Error::Cfl { dt, limit }.into());
    }
    let initial = match cfg.initial {
        InitialData::Pulse => pulse(&grid, cfg.eta, cfg.pulse_width),
        InitialData::Mode => SimState::from_mode(&grid, &NormalMode::on_shell(state, cfg.eta, Complex64::new(1.0, 0.0))?),
    };
    let (trajectory, abscissa) = rayon::join(|| evolve(&gen, &initial, &opts), || spectral_abscissa(&gen, cfg.method));
    let tr = trajectory?;
    let abscissa = abscissa?;

    let monitor = energy_monitor(&tr);
    let mut residuals = vec![None; tr.samples.len()];
    let mut m = 0;
    for (i, s) in tr.samples.iter().enumerate() {
        if m < monitor.len() && monitor[m].t == s.t {
            residuals[i] = Some(monitor[m].residual);
            m += 1;
        }
    }
    let fit = fit_log_slope(&tr.times(), &tr.log_norms(), cfg.discard)?;
    let predicted = growth_rate(state, cfg.eta).ok();
    let relative_error = predicted.filter(|p| *p > 0.0).map(|p| (fit.rate - p).abs() / p);
    let max_res = monitor.iter().fold(0.0f64, |a, r| a.max(r.residual));
    let max_rel = monitor.iter().filter(|r| r.energy > 0.0).fold(0.0f64, |a, r| a.max(r.residual / r.energy));

    let summary = json!({
        "fitted_rate": num(fit.rate),
        "abscissa": num(abscissa.abscissa),
        "abscissa_imag": num(abscissa.eigenvalue.im),
        "abscissa_method": abscissa.method,
        "abscissa_residual": num(abscissa.residual),
        "predicted_rate": predicted,
        "relative_error": relative_error,
        "abscissa_relative_error": predicted.filter(|p| *p > 0.0).map(|p| (abscissa.abscissa - p).abs() / p),
        "e_folds": num(fit.e_folds),
        "low_confidence": fit.low_confidence,
        "reflection": num(tr.reflection),
        "reflection_warning": tr.reflection_warning,
        "max_energy_residual": num(max_res),
        "max_relative_energy_residual": num(max_rel),
        "dt": dt,
        "steps": tr.samples.len() - 1,
        "eta": cfg.eta,
        "N": cfg.n,
        "L": cfg.l,
        "T": cfg.t,
        "background": state,
    });
    let rows = tr
        .samples
        .iter()
        .zip(&residuals)
        .map(|(s, r)| vec![Cell::Num(s.t), Cell::Num(s.log_norm), Cell::Num(s.energy), Cell::opt(*r)])
        .collect();
    let plots = vec![
        PlotFile { name: "log_norm".into(), columns: vec!["t", "log_norm"], rows: tr.samples.iter().map(|s| vec![s.t, s.log_norm]).collect() },
        PlotFile {
            name: "energy_residual".into(),
            columns: vec!["t", "residual"],
            rows: monitor.iter().map(|r| vec![r.t, r.residual]).collect(),
        },
    ];
    Ok(Report { header: HEADER.to_vec(), rows, summary: Some(summary), plots })
}

use khsheet_core::dispersion::growth_rate;
use khsheet_core::modes::{boundary_residual, interior_residual, Field, NormalMode};
use khsheet_core::{BackgroundState, Complex64, Side};
use serde_json::{json, Map, Value};

use crate::config::ModeConfig;
use crate::error::{CliError, CliResult};
use crate::output::{num, Cell, PlotFile, Report};

pub const HEADER: [&str; 4] = ["x1", "x2", "field", "value"];

/// Depths at which the interior residual is reported.
const RESIDUAL_DEPTHS: usize = 50;

fn pair(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn build(state: &BackgroundState, cfg: &ModeConfig) -> CliResult<NormalMode> {
    if !(cfg.eta.is_finite()) || cfg.eta == 0.0 {
        return Err(CliError::usage("mode needs a finite nonzero eta"));
    }
    let g = Complex64::new(cfg.g_hat[0], cfg.g_hat[1]);
    Ok(match cfg.tau {
        Some([re, im]) => NormalMode::build(state, cfg.eta, Complex64::new(re, im), g)?,
        None => NormalMode::on_shell(state, cfg.eta, g)?,
    })
}

fn metadata(state: &BackgroundState, cfg: &ModeConfig, mode: &NormalMode) -> Value {
    let reach = cfg.x2.start.abs().max(cfg.x2.stop.abs()).max(1.0 / cfg.eta.abs());
    let depths: Vec<f64> = (0..RESIDUAL_DEPTHS).map(|i| reach * i as f64 / (RESIDUAL_DEPTHS - 1) as f64).collect();
    let interior = interior_residual(state, mode, &depths);
    let b = boundary_residual(state, mode);
    let mut sides = Map::new();
    for side in Side::BOTH {
        let p = mode.side(side);
        let mut coeffs = Map::new();
        for f in Field::ALL {
            coeffs.insert(f.name().into(), pair(p.coefficients[f.index()]));
        }
        sides.insert(side.to_string(), json!({ "decay": pair(p.decay), "coefficients": coeffs }));
    }
    json!({
        "background": state,
        "eta": cfg.eta,
        "tau": pair(mode.tau),
        "g_hat": pair(mode.g_hat),
        "on_shell": mode.on_shell,
        "predicted_rate": growth_rate(state, cfg.eta).ok(),
        "t": cfg.t,
        "sides": sides,
        "residual": {
            "interior": num(interior),
            "boundary": {
                "kinematic": num(b.kinematic),
                "pressure_continuity": num(b.pressure_continuity),
                "velocity_jump": num(b.velocity_jump),
                "deformation": b.deformation,
                "pressure_derivative_jump": num(b.pressure_derivative_jump),
            },
            "max": num(interior.max(b.max())),
        },
    })
}

pub fn run(state: &BackgroundState, cfg: &ModeConfig) -> CliResult<Report> {
    let mode = build(state, cfg)?;
    let (x1s, x2s) = (cfg.x1.values(), cfg.x2.values());
    if x1s.is_empty() || x2s.is_empty() {
        return Err(CliError::Empty("the sample grid is empty".into()));
    }
    let mut rows = Vec::with_capacity(x1s.len() * (x2s.len() * Field::ALL.len() + 1));
    for &x1 in &x1s {
        rows.push(vec![Cell::Num(x1), Cell::Num(0.0), Cell::Text("f".into()), Cell::Num(mode.physical_front(x1, cfg.t) + 0.0)]);
        for &x2 in &x2s {
            for f in Field::ALL {
                // + 0.0 folds a negative zero into zero
                let v = mode.physical(f, x1, x2, cfg.t) + 0.0;
                rows.push(vec![Cell::Num(x1), Cell::Num(x2), Cell::Text(f.name().into()), Cell::Num(v)]);
            }
        }
    }
    let plots = Field::ALL
        .iter()
        .map(|&f| PlotFile {
            name: format!("{}_profile", f.name()),
            columns: vec!["x2", "re", "im"],
            rows: x2s
                .iter()
                .map(|&x2| {
                    let z = mode.eval(f, x2);
                    vec![x2, z.re + 0.0, z.im + 0.0]
                })
                .collect(),
        })
        .collect();
    Ok(Report { header: HEADER.to_vec(), rows, summary: Some(metadata(state, cfg, &mode)), plots })
}

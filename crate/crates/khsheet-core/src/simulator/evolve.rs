use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::generator::{Generator, SimState};
use super::grid::FIELDS;
use crate::error::{Error, Result};
use crate::state::Side;

pub const DEFAULT_CFL: f64 = 0.4;
pub const BLOWUP: f64 = 1e100;

/// Largest stable step for the given Courant number.
pub fn cfl_limit(gen: &Generator, cfl: f64) -> f64 {
    let s = &gen.state;
    cfl * gen.grid.spacing() / (s.c * (1.0 + s.m() + s.k()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub dt: f64,
    pub t_end: f64,
    pub cfl: f64,
    /// Keep every k-th state in the trajectory (0 keeps none but the last).
    pub keep_every: usize,
}

impl EvolveOptions {
    pub fn new(dt: f64, t_end: f64) -> Self {
        EvolveOptions { dt, t_end, cfl: DEFAULT_CFL, keep_every: 0 }
    }
}

/// Per-step diagnostics, all evaluated on the state at `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub energy: f64,
    pub flux: f64,
    /// ln sqrt(2 E).
    pub log_norm: f64,
    pub boundary: f64,
    pub pressure_defect: f64,
    pub velocity_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dt: f64,
    pub samples: Vec<Sample>,
    pub states: Vec<SimState>,
    pub last: SimState,
    /// Largest outer-boundary value relative to the largest initial value.
    pub reflection: f64,
    /// The run reached the time a signal needs to cross from the initial
    /// support to the truncation boundary.
    pub reflection_warning: bool,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn log_norms(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.log_norm).collect()
    }
}

/// Largest |x2| at which some initial field exceeds 1e-8 of the overall maximum.
fn support_radius(gen: &Generator, u: &[Complex64]) -> f64 {
    let grid = &gen.grid;
    let peak = u.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if peak == 0.0 {
        return 0.0;
    }
    let mut r: f64 = 0.0;
    for side in Side::BOTH {
        for i in 0..grid.n {
            if (0..FIELDS).any(|f| u[grid.index(side, i, f)].norm() > 1e-8 * peak) {
                r = r.max(grid.x(side, i).abs());
            }
        }
    }
    r
}

fn sample(gen: &Generator, u: &[Complex64], t: f64) -> Sample {
    let energy = gen.energy(u);
    let (pressure_defect, velocity_defect) = gen.interface_defect(u);
    Sample {
        t,
        energy,
        flux: gen.energy_flux(u),
        log_norm: 0.5 * (2.0 * energy).ln(),
        boundary: gen.outer_boundary_max(u),
        pressure_defect,
        velocity_defect,
    }
}

/// Classical four-stage Runge-Kutta from `initial` to `t_end`. The last step
/// is shortened to land on `t_end`.
pub fn evolve(gen: &Generator, initial: &SimState, opts: &EvolveOptions) -> Result<Trajectory> {
    let limit = cfl_limit(gen, opts.cfl);
    if !(opts.dt > 0.0) || opts.dt > limit * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt: opts.dt, limit });
    }
    if !(opts.t_end >= 0.0) || !opts.t_end.is_finite() {
        return Err(Error::Domain { what: "T", value: opts.t_end });
    }
    let grid = &gen.grid;
    let a = &gen.matrix;
    let n = grid.unknowns();
    let mut u = initial.pack(grid);
    if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::argument("initial state has non-finite entries"));
    }
    let peak0 = u.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let radius = support_radius(gen, &u);
    let travel = (grid.l - radius) / gen.state.c;

    let steps = (opts.t_end / opts.dt).ceil() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut states = Vec::new();
    let mut t = initial.time;
    samples.push(sample(gen, &u, t));
    if opts.keep_every > 0 {
        states.push(SimState::unpack(grid, &u, gen.eta, t));
    }
    let (mut k1, mut k2, mut k3, mut k4) =
        (vec![Complex64::zero(); n], vec![Complex64::zero(); n], vec![Complex64::zero(); n], vec![Complex64::zero(); n]);
    let mut tmp = vec![Complex64::zero(); n];
    let end = initial.time + opts.t_end;
    for step in 1..=steps {
        let h = opts.dt.min(end - t);
        a.matvec(&u, &mut k1);
        for i in 0..n {
            tmp[i] = u[i] + k1[i] * (0.5 * h);
        }
        a.matvec(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = u[i] + k2[i] * (0.5 * h);
        }
        a.matvec(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = u[i] + k3[i] * h;
        }
        a.matvec(&tmp, &mut k4);
        for i in 0..n {
            u[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        t = if step == steps { end } else { t + h };
        let s = sample(gen, &u, t);
        if !(s.energy.is_finite()) || (2.0 * s.energy).sqrt() > BLOWUP {
            return Err(Error::Blowup { time: t, norm: (2.0 * s.energy).sqrt() });
        }
        samples.push(s);
        if opts.keep_every > 0 && step % opts.keep_every == 0 {
            states.push(SimState::unpack(grid, &u, gen.eta, t));
        }
    }
    let reflection = samples.iter().fold(0.0f64, |m, s| m.max(s.boundary)) / peak0.max(f64::MIN_POSITIVE);
    Ok(Trajectory {
        dt: opts.dt,
        samples,
        states,
        last: SimState::unpack(grid, &u, gen.eta, t),
        reflection,
        reflection_warning: opts.t_end >= travel,
    })
}

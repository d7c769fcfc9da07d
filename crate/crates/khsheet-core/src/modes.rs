//! Explicit normal modes of the linearized problem and their residuals.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dispersion::{mu_pair, unstable_x1, FrequencyPoint, MuPair};
use crate::error::{Error, Result};
use crate::state::{BackgroundState, Side};
use crate::I;

/// The seven per-side unknowns, in the order used everywhere in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    H,
    W1,
    W2,
    E11,
    E12,
    E21,
    E22,
}

impl Field {
    pub const ALL: [Field; 7] = [Field::H, Field::W1, Field::W2, Field::E11, Field::E12, Field::E21, Field::E22];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Deformation entry E_ij for i, j in {1, 2}.
    pub fn deformation(i: usize, j: usize) -> Field {
        match (i, j) {
            (1, 1) => Field::E11,
            (1, 2) => Field::E12,
            (2, 1) => Field::E21,
            (2, 2) => Field::E22,
            _ => panic!("deformation index out of range"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::H => "h",
            Field::W1 => "w1",
            Field::W2 => "w2",
            Field::E11 => "E11",
            Field::E12 => "E12",
            Field::E21 => "E21",
            Field::E22 => "E22",
        }
    }
}

/// x2 -> coefficient e^{-decay x2} above the sheet, coefficient e^{decay x2} below.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentialProfile {
    pub coefficient: Complex64,
    pub decay: Complex64,
    pub side: Side,
}

impl ExponentialProfile {
    pub fn new(coefficient: Complex64, decay: Complex64, side: Side) -> Self {
        ExponentialProfile { coefficient, decay, side }
    }

    /// Rate of x2 -> value as seen from the sheet: -decay above, +decay below.
    fn rate(&self) -> Complex64 {
        -self.decay * self.side.sign()
    }

    /// Value at x2 (on the profile's own side, so x2 >= 0 above and x2 <= 0 below).
    pub fn eval(&self, x2: f64) -> Complex64 {
        self.coefficient * (self.rate() * x2).exp()
    }

    /// s-th derivative in x2.
    pub fn derivative(&self, x2: f64, s: u32) -> Complex64 {
        self.eval(x2) * self.rate().powu(s)
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        ExponentialProfile { coefficient: self.coefficient * alpha, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePair {
    pub upper: ExponentialProfile,
    pub lower: ExponentialProfile,
}

impl ProfilePair {
    pub fn get(&self, side: Side) -> &ExponentialProfile {
        match side {
            Side::Upper => &self.upper,
            Side::Lower => &self.lower,
        }
    }
}

fn pair(mu: &MuPair, coef: [Complex64; 2]) -> ProfilePair {
    ProfilePair {
        upper: ExponentialProfile::new(coef[0], mu.mu_plus, Side::Upper),
        lower: ExponentialProfile::new(coef[1], mu.mu_minus, Side::Lower),
    }
}

fn shifted(state: &BackgroundState, tau: Complex64, eta: f64, side: Side) -> Complex64 {
    tau + I * (side.sign() * state.v1_plus * eta)
}

/// Checks D(s) = (tau +- i v eta)^2 + G^2 eta^2 and tau +- i v eta against a
/// relative threshold and returns them.
fn denominators(state: &BackgroundState, tau: Complex64, eta: f64, side: Side) -> Result<(Complex64, Complex64)> {
    let t = shifted(state, tau, eta, side);
    let d = t * t + state.g_sq() * eta * eta;
    let lin = tau.norm() + (state.v1_plus * eta).abs();
    let scale = lin * lin + state.g_sq() * eta * eta;
    if t.norm() < 1e-12 * lin || d.norm() < 1e-12 * scale {
        return Err(Error::SingularDenominator { side });
    }
    Ok((t, d))
}

/// Pressure profiles with the common coefficient 4 i v tau eta g / (c^2 (mu+ + mu-)).
pub fn build_pressure(state: &BackgroundState, eta: f64, tau: Complex64, g_hat: Complex64) -> Result<ProfilePair> {
    let mu = mu_pair(state, FrequencyPoint::new(tau, eta))?;
    let coef = pressure_coefficient(state, &mu, eta, tau, g_hat);
    Ok(pair(&mu, [coef, coef]))
}

fn pressure_coefficient(state: &BackgroundState, mu: &MuPair, eta: f64, tau: Complex64, g_hat: Complex64) -> Complex64 {
    4.0 * I * state.v1_plus * tau * eta * g_hat / (state.c * state.c * (mu.mu_plus + mu.mu_minus))
}

/// The simplified amplitude (mu+ - mu-) g. Since mu+^2 - mu-^2 = 4 i v tau eta / c^2
/// for every tau, it coincides with the pressure coefficient off-shell as well.
pub fn pressure_coefficient_reduced(state: &BackgroundState, eta: f64, tau: Complex64, g_hat: Complex64) -> Result<Complex64> {
    let mu = mu_pair(state, FrequencyPoint::new(tau, eta))?;
    Ok((mu.mu_plus - mu.mu_minus) * g_hat)
}

/// (w1, w2) profiles.
pub fn build_velocity(state: &BackgroundState, eta: f64, tau: Complex64, g_hat: Complex64) -> Result<(ProfilePair, ProfilePair)> {
    let mu = mu_pair(state, FrequencyPoint::new(tau, eta))?;
    let (w1, w2) = velocity_coefficients(state, &mu, eta, tau, g_hat)?;
    Ok((pair(&mu, w1), pair(&mu, w2)))
}

fn velocity_coefficients(
    state: &BackgroundState,
    mu: &MuPair,
    eta: f64,
    tau: Complex64,
    g_hat: Complex64,
) -> Result<([Complex64; 2], [Complex64; 2])> {
    let m = pressure_coefficient(state, mu, eta, tau, g_hat);
    let c2 = state.c * state.c;
    let (tp, dp) = denominators(state, tau, eta, Side::Upper)?;
    let (tm, dm) = denominators(state, tau, eta, Side::Lower)?;
    let w1 = [-c2 * I * eta * tp * m / dp, -c2 * I * eta * tm * m / dm];
    let w2 = [c2 * mu.mu_plus * tp * m / dp, -c2 * mu.mu_minus * tm * m / dm];
    Ok((w1, w2))
}

/// e[i-1][j-1] is the profile pair of E_ij.
pub fn build_deformation(state: &BackgroundState, eta: f64, tau: Complex64, g_hat: Complex64) -> Result<[[ProfilePair; 2]; 2]> {
    let mu = mu_pair(state, FrequencyPoint::new(tau, eta))?;
    let (w1, w2) = velocity_coefficients(state, &mu, eta, tau, g_hat)?;
    let e = deformation_coefficients(state, eta, tau, [w1, w2])?;
    let p = |i: usize, j: usize| pair(&mu, [e[0][i][j], e[1][i][j]]);
    Ok([[p(0, 0), p(0, 1)], [p(1, 0), p(1, 1)]])
}

/// Indexed [side][i][j].
fn deformation_coefficients(
    state: &BackgroundState,
    eta: f64,
    tau: Complex64,
    w: [[Complex64; 2]; 2],
) -> Result<[[[Complex64; 2]; 2]; 2]> {
    let mut e = [[[Complex64::zero(); 2]; 2]; 2];
    for (s, side) in Side::BOTH.iter().enumerate() {
        let (t, _) = denominators(state, tau, eta, *side)?;
        let g = state.deformation_row(*side);
        for i in 0..2 {
            for j in 0..2 {
                e[s][i][j] = I * g[j] * eta * w[i][s] / t;
            }
        }
    }
    Ok(e)
}

/// All fields of one side. Every profile shares `decay`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideProfiles {
    pub side: Side,
    pub decay: Complex64,
    /// Coefficients indexed by `Field::index`.
    pub coefficients: [Complex64; 7],
}

impl SideProfiles {
    pub fn profile(&self, field: Field) -> ExponentialProfile {
        ExponentialProfile::new(self.coefficients[field.index()], self.decay, self.side)
    }

    pub fn eval(&self, field: Field, x2: f64) -> Complex64 {
        self.profile(field).eval(x2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalMode {
    pub eta: f64,
    pub tau: Complex64,
    pub g_hat: Complex64,
    /// tau equals X1 |eta| (to rounding) inside the window.
    pub on_shell: bool,
    pub upper: SideProfiles,
    pub lower: SideProfiles,
}

impl NormalMode {
    /// The mode for any (tau, eta) in Xi. Off-shell modes solve the interior
    /// equations and the pressure jumps but not the kinematic rows.
    pub fn build(state: &BackgroundState, eta: f64, tau: Complex64, g_hat: Complex64) -> Result<Self> {
        let mu = mu_pair(state, FrequencyPoint::new(tau, eta))?;
        let m = pressure_coefficient(state, &mu, eta, tau, g_hat);
        let (w1, w2) = velocity_coefficients(state, &mu, eta, tau, g_hat)?;
        let e = deformation_coefficients(state, eta, tau, [w1, w2])?;
        let side = |s: usize, side: Side, decay: Complex64| SideProfiles {
            side,
            decay,
            coefficients: [m, w1[s], w2[s], e[s][0][0], e[s][0][1], e[s][1][0], e[s][1][1]],
        };
        let on_shell = match unstable_x1(state) {
            Ok(x1) => (tau - x1 * eta.abs()).norm() <= 1e-12 * (1.0 + tau.norm()),
            Err(_) => false,
        };
        Ok(NormalMode {
            eta,
            tau,
            g_hat,
            on_shell,
            upper: side(0, Side::Upper, mu.mu_plus),
            lower: side(1, Side::Lower, mu.mu_minus),
        })
    }

    /// The growing mode tau = X1 |eta|.
    pub fn on_shell(state: &BackgroundState, eta: f64, g_hat: Complex64) -> Result<Self> {
        let x1 = unstable_x1(state)?;
        Self::build(state, eta, Complex64::new(x1 * eta.abs(), 0.0), g_hat)
    }

    pub fn side(&self, side: Side) -> &SideProfiles {
        match side {
            Side::Upper => &self.upper,
            Side::Lower => &self.lower,
        }
    }

    /// Field value at signed x2 (x2 >= 0 is read from the upper side).
    pub fn eval(&self, field: Field, x2: f64) -> Complex64 {
        let side = if x2 >= 0.0 { Side::Upper } else { Side::Lower };
        self.side(side).eval(field, x2)
    }

    /// Re(psi(x2) e^{i eta x1 + tau t}) for a single Fourier mode.
    pub fn physical(&self, field: Field, x1: f64, x2: f64, t: f64) -> f64 {
        (self.eval(field, x2) * (I * self.eta * x1 + self.tau * t).exp()).re
    }

    pub fn physical_front(&self, x1: f64, t: f64) -> f64 {
        (self.g_hat * (I * self.eta * x1 + self.tau * t).exp()).re
    }
}

fn row(terms: &[Complex64]) -> f64 {
    let scale: f64 = terms.iter().map(|z| z.norm()).sum();
    if scale == 0.0 {
        0.0
    } else {
        terms.iter().copied().sum::<Complex64>().norm() / scale
    }
}

/// Largest normalized residual of the interior equations (mass, momentum,
/// deformation and the second-order pressure equation) at each depth on both
/// sides. Depths are taken as |x2|.
pub fn interior_residual(state: &BackgroundState, mode: &NormalMode, depths: &[f64]) -> f64 {
    let c2 = state.c * state.c;
    let (eta, g2) = (mode.eta, state.g_sq());
    let mut worst: f64 = 0.0;
    for side in Side::BOTH {
        let sp = mode.side(side);
        let t = shifted(state, mode.tau, eta, side);
        let g = state.deformation_row(side);
        for &d in depths {
            let x2 = side.sign() * d.abs();
            let val = |f: Field| sp.eval(f, x2);
            let dx = |f: Field, s: u32| sp.profile(f).derivative(x2, s);
            let (m, w1, w2) = (val(Field::H), val(Field::W1), val(Field::W2));
            let e = [[val(Field::E11), val(Field::E12)], [val(Field::E21), val(Field::E22)]];
            let w = [w1, w2];
            let mut r = [
                row(&[t * m, I * eta * w1, dx(Field::W2, 1)]),
                row(&[t * w1, c2 * I * eta * m, -I * eta * g[0] * e[0][0], -I * eta * g[1] * e[0][1]]),
                row(&[t * w2, c2 * dx(Field::H, 1), -I * eta * g[0] * e[1][0], -I * eta * g[1] * e[1][1]]),
                row(&[(t * t + c2 * eta * eta + g2 * eta * eta) * m, -c2 * dx(Field::H, 2)]),
            ]
            .iter()
            .fold(0.0f64, |a, b| a.max(*b));
            for i in 0..2 {
                for j in 0..2 {
                    r = r.max(row(&[t * e[i][j], -I * g[j] * eta * w[i]]));
                }
            }
            worst = worst.max(r);
        }
    }
    worst
}

/// Normalized residuals of the interface rows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResidual {
    /// w2+(0) = (tau + i v eta) g
    pub kinematic: f64,
    /// [m] = 0
    pub pressure_continuity: f64,
    /// [w2] = 2 i v eta g
    pub velocity_jump: f64,
    /// E2j(s)(0) = i G1j(s) eta g, indexed [side][j]
    pub deformation: [[f64; 2]; 2],
    /// c^2 [d2 m] = -4 i v tau eta g
    pub pressure_derivative_jump: f64,
}

impl BoundaryResidual {
    /// Worst of the rows imposed on the sheet (every row here).
    pub fn max(&self) -> f64 {
        let mut r = self.kinematic.max(self.pressure_continuity).max(self.velocity_jump).max(self.pressure_derivative_jump);
        for s in self.deformation {
            for x in s {
                r = r.max(x);
            }
        }
        r
    }
}

pub fn boundary_residual(state: &BackgroundState, mode: &NormalMode) -> BoundaryResidual {
    let (eta, tau, g, v) = (mode.eta, mode.tau, mode.g_hat, state.v1_plus);
    let up = &mode.upper;
    let lo = &mode.lower;
    let c2 = state.c * state.c;
    let mut deformation = [[0.0; 2]; 2];
    for (s, side) in Side::BOTH.iter().enumerate() {
        let row_g = state.deformation_row(*side);
        for j in 0..2 {
            let e = mode.side(*side).eval(Field::deformation(2, j + 1), 0.0);
            deformation[s][j] = row(&[e, -I * row_g[j] * eta * g]);
        }
    }
    BoundaryResidual {
        kinematic: row(&[up.eval(Field::W2, 0.0), -(tau + I * v * eta) * g]),
        pressure_continuity: row(&[up.eval(Field::H, 0.0), -lo.eval(Field::H, 0.0)]),
        velocity_jump: row(&[up.eval(Field::W2, 0.0), -lo.eval(Field::W2, 0.0), -2.0 * I * v * eta * g]),
        deformation,
        pressure_derivative_jump: row(&[
            c2 * up.profile(Field::H).derivative(0.0, 1),
            -c2 * lo.profile(Field::H).derivative(0.0, 1),
            4.0 * I * v * tau * eta * g,
        ]),
    }
}

/// Sigma(tau, eta) g with Sigma in its direct form.
pub fn front_symbol_residual(state: &BackgroundState, eta: f64, tau: Complex64, g_hat: Complex64) -> Result<Complex64> {
    Ok(crate::dispersion::symbol_direct(state, FrequencyPoint::new(tau, eta))? * g_hat)
}

/// A band-limited superposition of on-shell modes with front amplitude chi(eta).
pub struct ModeFamily<'a> {
    pub state: BackgroundState,
    pub amplitude: &'a dyn Fn(f64) -> Complex64,
    /// Support [a, b] of chi, with 0 < a < b.
    pub band: (f64, f64),
    /// Trapezoid nodes per unit of eta.
    pub points_per_unit: usize,
}

pub const DEFAULT_POINTS_PER_UNIT: usize = 512;

/// Physical fields on an x1 x x2 grid. `interior[(i1 * x2.len() + i2)]` holds the
/// seven fields in `Field` order; x2 >= 0 samples the upper fluid.
#[derive(Clone, Debug, PartialEq)]
pub struct Synthesis {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub front: Vec<f64>,
    pub interior: Vec<[f64; 7]>,
}

/// Real part of (1/2pi) * trapezoid over the eta grid of psi(eta, x2) e^{X1 eta t + i eta x1}.
pub fn synthesize_physical(family: &ModeFamily<'_>, t: f64, x1: &[f64], x2: &[f64]) -> Result<Synthesis> {
    let (a, b) = family.band;
    if !(b > a) || family.points_per_unit == 0 {
        return Err(Error::argument("empty eta grid"));
    }
    let intervals = ((b - a) * family.points_per_unit as f64).ceil().max(1.0) as usize;
    let h = (b - a) / intervals as f64;
    let mut modes = Vec::with_capacity(intervals + 1);
    for k in 0..=intervals {
        let eta = a + h * k as f64;
        let w = if k == 0 || k == intervals { 0.5 * h } else { h };
        let chi = (family.amplitude)(eta);
        if chi.is_zero() {
            continue;
        }
        let mode = NormalMode::on_shell(&family.state, eta, chi)?;
        let growth = (mode.tau * t).exp();
        modes.push((w / (2.0 * core::f64::consts::PI) * growth, mode));
    }
    let mut front = Vec::with_capacity(x1.len());
    let mut interior = Vec::with_capacity(x1.len() * x2.len());
    for &p in x1 {
        let mut f = Complex64::zero();
        for (w, mode) in &modes {
            f += mode.g_hat * (I * mode.eta * p).exp() * *w;
        }
        front.push(f.re);
        for &q in x2 {
            let mut acc = [Complex64::zero(); 7];
            for (w, mode) in &modes {
                let phase = (I * mode.eta * p).exp() * *w;
                let sp = mode.side(if q >= 0.0 { Side::Upper } else { Side::Lower });
                let ex = (-sp.decay * q.abs()).exp() * phase;
                for (slot, c) in acc.iter_mut().zip(sp.coefficients.iter()) {
                    *slot += c * ex;
                }
            }
            let mut out = [0.0; 7];
            for (o, z) in out.iter_mut().zip(acc.iter()) {
                *o = z.re;
            }
            interior.push(out);
        }
    }
    Ok(Synthesis { x1: x1.to_vec(), x2: x2.to_vec(), front, interior })
}

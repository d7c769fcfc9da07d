//! The ill-posedness sequence: band-limited data of size O(1/n) whose growing
//! normal modes reach any prescribed size by a fixed time once n is large.
//!
//! Every spectral integral runs over the band (n, n+1) only. Grown norms are
//! carried as natural logarithms so that very large n and T stay finite.

use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{bound_constants, unstable_x1, BoundConstants};
use crate::error::{Error, Result};
use crate::modes::{Field, NormalMode};
use crate::norms::{combined_norm, spectral_weight, ComponentNorms, Term};
use crate::quad::trapezoid;
use crate::state::{BackgroundState, Side};

const BUMP_RTOL: f64 = 1e-14;
const NORM_RTOL: f64 = 1e-12;

fn weight(eta: f64, p: u32) -> f64 {
    (1.0 + eta * eta).powi(p as i32)
}

/// exp(-1/(1 - t^2)) on (-1, 1), zero elsewhere.
fn unit_bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    pub n: u32,
    pub j: u32,
    pub cbar_j: f64,
    pub scale: f64,
}

impl BumpProfile {
    pub fn band(&self) -> (f64, f64) {
        let n = self.n as f64;
        (n, n + 1.0)
    }

    pub fn amplitude(&self, eta: f64) -> f64 {
        self.scale * unit_bump(2.0 * (eta - self.n as f64) - 1.0)
    }

    /// int (1+eta^2)^p amplitude^2 over the band.
    pub fn moment(&self, p: u32) -> Result<f64> {
        let (a, b) = self.band();
        let f = |eta: f64| weight(eta, p) * self.amplitude(eta).powi(2);
        Ok(trapezoid(f, a, b, BUMP_RTOL, 0.0)?.value)
    }
}

/// Bump on (n, n+1) scaled so that int (1+eta^2)^{j+1} chi^2 = 1/(cbar_j n)^2.
pub fn make_bump(n: u32, j: u32, cbar_j: f64) -> Result<BumpProfile> {
    if n < 1 {
        return Err(Error::argument("band index n must be at least 1"));
    }
    if !(cbar_j > 0.0) || !cbar_j.is_finite() {
        return Err(Error::Domain { what: "cbar_j", value: cbar_j });
    }
    let raw = BumpProfile { n, j, cbar_j, scale: 1.0 };
    let m = raw.moment(j + 1)?;
    let scale = 1.0 / (cbar_j * n as f64 * m.sqrt());
    Ok(BumpProfile { scale, ..raw })
}

/// Component norms at t = 0 with the bounds they are proven to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialNorms {
    pub norms: ComponentNorms,
    pub bounds: ComponentNorms,
    /// n times the combined bound.
    pub c_univ: f64,
}

impl InitialNorms {
    pub fn within_bounds(&self) -> bool {
        let (a, b) = (&self.norms, &self.bounds);
        a.f <= b.f && a.h <= b.h && a.v <= b.v && a.g <= b.g
    }
}

/// Natural logarithms of the four component norms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogNorms {
    pub f: f64,
    pub h: f64,
    pub v: f64,
    pub g: f64,
}

impl LogNorms {
    pub fn combined(&self) -> f64 {
        let xs = [self.f, self.h, self.v, self.g];
        let top = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return top;
        }
        top + xs.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
    }

    /// The plain norms; entries overflow to infinity beyond f64 range.
    pub fn exp(&self) -> ComponentNorms {
        ComponentNorms { f: self.f.exp(), h: self.h.exp(), v: self.v.exp(), g: self.g.exp() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrownNorms {
    pub t: f64,
    pub log_norms: LogNorms,
    /// Logs of the lower bounds from the growth estimates. A component whose
    /// constant vanishes (G when the sheet is purely fluid) has -inf here.
    pub log_lower: LogNorms,
}

impl GrownNorms {
    pub fn above_lower_bounds(&self) -> bool {
        let (a, b) = (&self.log_norms, &self.log_lower);
        // relative slack for quadrature rounding
        let ok = |x: f64, y: f64| y == f64::NEG_INFINITY || x >= y - 1e-10;
        ok(a.f, b.f) && ok(a.h, b.h) && ok(a.v, b.v) && ok(a.g, b.g)
    }
}

fn field_terms(mode: &NormalMode, fields: &[Field]) -> Vec<Term> {
    let mut out = Vec::with_capacity(2 * fields.len());
    for (component, field) in fields.iter().enumerate() {
        for side in Side::BOTH {
            out.push(Term { component, profile: mode.side(side).profile(*field) });
        }
    }
    out
}

const VELOCITY: [Field; 2] = [Field::W1, Field::W2];
const DEFORMATION: [Field; 4] = [Field::E11, Field::E12, Field::E21, Field::E22];

/// Spectral densities [f, h, v, G] at eta for g_hat = chi(eta), without time
/// growth.
fn densities(state: &BackgroundState, bump: &BumpProfile, eta: f64, j: u32) -> Result<[f64; 4]> {
    let chi = bump.amplitude(eta);
    if chi == 0.0 {
        return Ok([0.0; 4]);
    }
    let mode = NormalMode::on_shell(state, eta, Complex64::new(chi, 0.0))?;
    Ok([
        weight(eta, j) * chi * chi,
        spectral_weight(&field_terms(&mode, &[Field::H]), eta, j)?,
        spectral_weight(&field_terms(&mode, &VELOCITY), eta, j)?,
        spectral_weight(&field_terms(&mode, &DEFORMATION), eta, j)?,
    ])
}

/// int density_i(eta) e^{2 X1 (eta - n - 1) t} over the band, for each component.
fn band_integrals(state: &BackgroundState, bump: &BumpProfile, j: u32, x1: f64, t: f64) -> Result<[f64; 4]> {
    let (a, b) = bump.band();
    let mut out = [0.0; 4];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut failure = None;
        let f = |eta: f64| match densities(state, bump, eta, j) {
            Ok(d) => d[i] * (2.0 * x1 * (eta - b) * t).exp(),
            Err(e) => {
                failure = Some(e);
                0.0
            }
        };
        let r = trapezoid(f, a, b, NORM_RTOL, 0.0)?;
        if let Some(e) = failure {
            return Err(e);
        }
        *slot = r.value.max(0.0);
    }
    Ok(out)
}

fn initial_bounds(state: &BackgroundState, k: &BoundConstants, n: u32, j: u32, cbar: f64) -> ComponentNorms {
    let base = 1.0 / (cbar * n as f64);
    let jj = (j + 1) as f64;
    ComponentNorms {
        f: base,
        h: (8.0 * k.c_star * jj).sqrt() * base,
        v: state.c * k.c2 * (16.0 * k.c_star * jj).sqrt() * base,
        g: state.c * k.c2 * (16.0 * state.g_sq() * k.c3 * k.c_star * jj).sqrt() * base,
    }
}

/// Norms of the sequence member n at t = 0 in H^j, with g_hat = chi_n on the
/// band and tau = X1 eta.
pub fn sequence_initial_norms(state: &BackgroundState, n: u32, j: u32, cbar_j: f64) -> Result<InitialNorms> {
    let consts = bound_constants(state)?;
    let x1 = unstable_x1(state)?;
    let bump = make_bump(n, j, cbar_j)?;
    let ints = band_integrals(state, &bump, j, x1, 0.0)?;
    let norms = ComponentNorms { f: ints[0].sqrt(), h: ints[1].sqrt(), v: ints[2].sqrt(), g: ints[3].sqrt() };
    let bounds = initial_bounds(state, &consts, n, j, cbar_j);
    Ok(InitialNorms { norms, bounds, c_univ: n as f64 * bounds.combined() })
}

/// Norms in H^k at time t of the sequence member built with regularity j.
pub fn sequence_grown_norms(state: &BackgroundState, n: u32, j: u32, k: u32, t: f64, cbar_j: f64) -> Result<GrownNorms> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain { what: "t", value: t });
    }
    let consts = bound_constants(state)?;
    let x1 = unstable_x1(state)?;
    let bump = make_bump(n, j, cbar_j)?;
    let top = bump.band().1;
    let offset = 2.0 * x1 * top * t;
    let ints = band_integrals(state, &bump, k, x1, t)?;
    let log_sqrt = |v: f64| 0.5 * (v.ln() + offset);
    let log_norms = LogNorms { f: log_sqrt(ints[0]), h: log_sqrt(ints[1]), v: log_sqrt(ints[2]), g: log_sqrt(ints[3]) };

    // chi-moment with growth, shared by the h, v and G bounds
    let (a, b) = bump.band();
    let grown_moment =
        trapezoid(|eta| weight(eta, k) * (2.0 * x1 * (eta - b) * t).exp() * bump.amplitude(eta).powi(2), a, b, NORM_RTOL, 0.0)?
            .value;
    let log_grown = grown_moment.ln() + offset;
    let log_plain_f = bump.moment(k)?.ln() + 2.0 * x1 * n as f64 * t;
    let kk = state.k();
    let side_g_sq = 2.0 * state.g_sq();
    let c1 = consts.c1;
    let half = |factor: f64, lg: f64| if factor > 0.0 { 0.5 * (factor.ln() + lg) } else { f64::NEG_INFINITY };
    let log_lower = LogNorms {
        f: 0.5 * log_plain_f,
        h: half(c1, log_grown),
        v: half((kk * kk + 2.0) * state.c * state.c * c1 / 8.0, log_grown),
        g: half(side_g_sq * c1 / 8.0, log_grown),
    };
    Ok(GrownNorms { t, log_norms, log_lower })
}

/// Smallest n with e^{2 X1 n T0} / (1+(n+1)^2)^{j-k+1} >= alpha^2 cbar^2 n^2,
/// scanned in logarithms.
pub fn find_n_star(state: &BackgroundState, alpha: f64, t0: f64, j: u32, k: u32, cbar_j: f64) -> Result<u32> {
    if !(alpha > 0.0) {
        return Err(Error::Domain { what: "alpha", value: alpha });
    }
    if !(t0 > 0.0) {
        return Err(Error::Domain { what: "T0", value: t0 });
    }
    if j < k {
        return Err(Error::argument("find_n_star needs j >= k"));
    }
    bound_constants(state)?;
    let x1 = unstable_x1(state)?;
    let p = (j - k + 1) as f64;
    let rhs0 = 2.0 * (alpha * cbar_j).ln();
    for n in 1..=u32::MAX {
        let nf = n as f64;
        let lhs = 2.0 * x1 * nf * t0 - p * (1.0 + (nf + 1.0).powi(2)).ln();
        if lhs >= rhs0 + 2.0 * nf.ln() {
            return Ok(n);
        }
    }
    Err(Error::argument("no admissible n below u32::MAX"))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u32,
    pub initial: InitialNorms,
    pub grown: GrownNorms,
    /// log10 of combined grown norm over combined initial norm.
    pub log10_ratio: f64,
}

pub fn table_row(state: &BackgroundState, n: u32, j: u32, k: u32, t0: f64, cbar_j: f64) -> Result<TableRow> {
    let initial = sequence_initial_norms(state, n, j, cbar_j)?;
    let grown = sequence_grown_norms(state, n, j, k, t0, cbar_j)?;
    let start = initial.norms;
    let log_start = combined_norm(start.f, start.h, start.v, start.g).ln();
    let log10_ratio = (grown.log_norms.combined() - log_start) / core::f64::consts::LN_10;
    Ok(TableRow { n, initial, grown, log10_ratio })
}

/// Rows in the order of `n_list`.
pub fn illposedness_table(state: &BackgroundState, j: u32, k: u32, t0: f64, cbar_j: f64, n_list: &[u32]) -> Result<Vec<TableRow>> {
    n_list.iter().map(|&n| table_row(state, n, j, k, t0, cbar_j)).collect()
}

//! Piecewise Sobolev norms evaluated on the Fourier side.
//!
//! Transform convention: forward psi^(eta) = int psi e^{-i x1 eta} dx1 without a
//! prefactor, inverse (1/2pi) int psi^ e^{i eta x1} d eta. All norms below are
//! spectral, so for a front f the j = 0 norm equals sqrt(2 pi) times the L2 norm
//! of f in x1.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::ExponentialProfile;
use crate::quad::{romberg, romberg_vec, trapezoid};
use crate::state::Side;

pub const FRONT_RTOL: f64 = 1e-8;
pub const HALFSPACE_RTOL: f64 = 1e-11;

const PANELS: usize = 12;
/// Starting intervals per panel; the geometric split already resolves the decay.
const PANEL_START: usize = 2;

fn check_band(band: (f64, f64)) -> Result<()> {
    if !band.0.is_finite() || !band.1.is_finite() {
        return Err(Error::argument("unbounded spectral support"));
    }
    if band.1 < band.0 {
        return Err(Error::argument("spectral band has negative length"));
    }
    Ok(())
}

fn weight(eta: f64, p: u32) -> f64 {
    (1.0 + eta * eta).powi(p as i32)
}

/// A front amplitude eta -> psi^(eta), zero outside `band`.
pub struct FrontDensity<'a> {
    pub amplitude: &'a dyn Fn(f64) -> Complex64,
    pub band: (f64, f64),
}

/// sqrt(int (1 + eta^2)^j |psi^|^2 d eta).
pub fn front_norm(density: &FrontDensity<'_>, j: u32) -> Result<f64> {
    front_norm_with(density, j, FRONT_RTOL)
}

pub fn front_norm_with(density: &FrontDensity<'_>, j: u32, rtol: f64) -> Result<f64> {
    check_band(density.band)?;
    let f = |eta: f64| weight(eta, j) * (density.amplitude)(eta).norm_sqr();
    Ok(trapezoid(f, density.band.0, density.band.1, rtol, 0.0)?.value.max(0.0).sqrt())
}

/// One exponential term of an interior field. Terms sharing a component and a
/// side are added before squaring; different components add in quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub component: usize,
    pub profile: ExponentialProfile,
}

/// eta -> the exponential terms of a (possibly vector or tensor) field.
pub struct InteriorDensity<'a> {
    pub terms: &'a dyn Fn(f64) -> Vec<Term>,
    pub band: (f64, f64),
}

/// sum_s (1+eta^2)^{j-s} int |d2^s psi^(eta, .)|^2 dx2 over both half-lines, in
/// closed form: the cross term of c_k e^{-mu_k x} and c_l e^{-mu_l x} integrates to
/// c_k conj(c_l) / (mu_k + conj(mu_l)).
pub fn spectral_weight(terms: &[Term], eta: f64, j: u32) -> Result<f64> {
    for t in terms {
        if !(t.profile.decay.re > 0.0) {
            return Err(Error::Domain { what: "Re decay", value: t.profile.decay.re });
        }
    }
    let mut total = 0.0;
    for (a, ta) in terms.iter().enumerate() {
        for tb in &terms[a..] {
            if ta.component != tb.component || ta.profile.side != tb.profile.side {
                continue;
            }
            let (pa, pb) = (&ta.profile, &tb.profile);
            let sgn = -pa.side.sign();
            let ra = pa.decay * sgn;
            let rb = pb.decay * sgn;
            let cross = pa.coefficient * pb.coefficient.conj() / (pa.decay + pb.decay.conj());
            let mut acc = 0.0;
            let mut pow = Complex64::new(1.0, 0.0);
            let step = ra * rb.conj();
            for s in 0..=j {
                acc += weight(eta, j - s) * (cross * pow).re;
                pow *= step;
            }
            // off-diagonal pairs appear twice in |sum|^2
            total += if core::ptr::eq(ta, tb) { acc } else { 2.0 * acc };
        }
    }
    Ok(total.max(0.0))
}

pub fn halfspace_norm_exponential(density: &InteriorDensity<'_>, j: u32) -> Result<f64> {
    Ok(halfspace_norm_sq(density, j, HALFSPACE_RTOL)?.sqrt())
}

pub(crate) fn halfspace_norm_sq(density: &InteriorDensity<'_>, j: u32, rtol: f64) -> Result<f64> {
    check_band(density.band)?;
    let mut failure = None;
    let f = |eta: f64| match spectral_weight(&(density.terms)(eta), eta, j) {
        Ok(w) => w,
        Err(e) => {
            failure = Some(e);
            0.0
        }
    };
    let r = romberg(f, density.band.0, density.band.1, rtol, 0.0)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r.value.max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub band: (f64, f64),
    /// The x2 integrals run over [0, x2_max] and [-x2_max, 0].
    pub x2_max: f64,
    pub rtol: f64,
}

impl QuadratureGrid {
    pub fn new(band: (f64, f64)) -> Self {
        QuadratureGrid { band, x2_max: 40.0, rtol: 1e-10 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureNorm {
    pub value: f64,
    pub error_estimate: f64,
    /// The field is not negligible at |x2| = x2_max somewhere on the band.
    pub truncation_warning: bool,
}

/// Tensor-product quadrature of the norm: Romberg-accelerated trapezoid in x2
/// on each half-line, then in eta. `sampler(component, eta, x2, s)` returns the
/// s-th x2-derivative of that component at signed x2 (-0.0 is the lower side
/// of the interface).
///
/// The half-line [0, x2_max] is split into geometrically growing panels so that
/// fields decaying on a short scale are resolved near the interface without
/// refining the whole line.
pub fn halfspace_norm_quadrature(
    sampler: &dyn Fn(usize, f64, f64, u32) -> Complex64,
    components: usize,
    j: u32,
    grid: &QuadratureGrid,
) -> Result<QuadratureNorm> {
    check_band(grid.band)?;
    let l = grid.x2_max;
    if !(l > 0.0) {
        return Err(Error::argument("x2 truncation must be positive"));
    }
    let mut edges = Vec::with_capacity(PANELS + 1);
    edges.push(0.0);
    for p in (0..PANELS).rev() {
        edges.push(l / (1u64 << p) as f64);
    }
    let dim = j as usize + 1;
    let mut inner_err = 0.0f64;
    let mut warn = false;
    let mut failure = None;
    let outer = |eta: f64| {
        let mut total = 0.0;
        for comp in 0..components {
            for side in Side::BOTH {
                let sg = side.sign();
                let at0 = sampler(comp, eta, sg * 0.0, 0).norm_sqr();
                let at_l = sampler(comp, eta, sg * l, 0).norm_sqr();
                if at_l > grid.rtol * at0.max(f64::MIN_POSITIVE) && at_l > 0.0 {
                    warn = true;
                }
                let mut acc = alloc::vec![0.0; dim];
                for w in edges.windows(2) {
                    let f = |x: f64, out: &mut [f64]| {
                        for (s, o) in out.iter_mut().enumerate() {
                            *o = sampler(comp, eta, sg * x, s as u32).norm_sqr();
                        }
                    };
                    // panels far out only need to be small against what has been collected
                    let floor = grid.rtol * acc.iter().copied().fold(f64::INFINITY, f64::min);
                    match romberg_vec(f, dim, (w[0], w[1]), PANEL_START, grid.rtol, floor) {
                        Ok((v, e)) => {
                            acc.iter_mut().zip(&v).for_each(|(a, b)| *a += b);
                            inner_err = inner_err.max(e);
                        }
                        Err(e) => failure = Some(e),
                    }
                }
                for (s, a) in acc.iter().enumerate() {
                    total += weight(eta, j - s as u32) * a;
                }
            }
        }
        total
    };
    let r = romberg(outer, grid.band.0, grid.band.1, grid.rtol, 0.0)?;
    if let Some(e) = failure {
        return Err(e);
    }
    let value = r.value.max(0.0).sqrt();
    // relative error of the square halves under the root
    let rel = 0.5 * (r.error / r.value.abs().max(f64::MIN_POSITIVE) + inner_err);
    Ok(QuadratureNorm { value, error_estimate: rel * value, truncation_warning: warn })
}

/// Sampler for a density of exponential terms, for use with the quadrature.
pub fn sample_terms(terms: &[Term], component: usize, x2: f64, s: u32) -> Complex64 {
    // -0.0 selects the lower side, so the lower half-line can be sampled at the interface
    let side = if x2.is_sign_negative() { Side::Lower } else { Side::Upper };
    terms
        .iter()
        .filter(|t| t.component == component && t.profile.side == side)
        .map(|t| t.profile.derivative(x2, s))
        .fold(Complex64::zero(), |a, b| a + b)
}

/// The four component norms of (f, h, v, G) at one regularity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComponentNorms {
    pub f: f64,
    pub h: f64,
    pub v: f64,
    pub g: f64,
}

impl ComponentNorms {
    pub fn combined(&self) -> f64 {
        combined_norm(self.f, self.h, self.v, self.g)
    }
}

pub fn combined_norm(f: f64, h: f64, v: f64, g: f64) -> f64 {
    f + h + v + g
}

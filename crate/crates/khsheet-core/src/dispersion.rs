//! Decay rates, the front symbol, quartic roots and the Lemma constants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{BackgroundState, Side};
use crate::I;

/// A point (tau, eta) of the Laplace-Fourier dual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPoint {
    pub tau: Complex64,
    pub eta: f64,
}

impl FrequencyPoint {
    pub fn new(tau: Complex64, eta: f64) -> Self {
        FrequencyPoint { tau, eta }
    }

    /// Re tau > 0. That already excludes (0, 0).
    pub fn in_xi(&self) -> bool {
        self.tau.re > 0.0 && self.tau.im.is_finite() && self.tau.re.is_finite() && self.eta.is_finite()
    }

    fn require_xi(&self) -> Result<()> {
        if self.in_xi() {
            Ok(())
        } else {
            Err(Error::OutsideXi { tau_re: self.tau.re, tau_im: self.tau.im, eta: self.eta })
        }
    }
}

/// Square root with Re >= 0, taking sign(0) = +1 on the cut so that the
/// negative real axis maps to the positive imaginary axis.
pub fn complex_sqrt_halfplane(z: Complex64) -> Complex64 {
    let (a, b) = (z.re, z.im);
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let sgn = if b < 0.0 { -1.0 } else { 1.0 };
    // avoid cancellation in r - a or r + a
    if a >= 0.0 {
        let re = ((r + a) / 2.0).sqrt();
        Complex64::new(re, b / (2.0 * re))
    } else {
        let im = ((r - a) / 2.0).sqrt();
        Complex64::new(b.abs() / (2.0 * im), sgn * im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuPair {
    pub mu_plus: Complex64,
    pub mu_minus: Complex64,
    /// Cartesian data of the radicand of mu_plus.
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

impl MuPair {
    pub fn get(&self, side: Side) -> Complex64 {
        match side {
            Side::Upper => self.mu_plus,
            Side::Lower => self.mu_minus,
        }
    }
}

/// ((tau + s i v eta)^2 + G^2 eta^2)/c^2 + eta^2 with s = +1 for mu_plus.
pub fn mu_radicand(state: &BackgroundState, tau: Complex64, eta: f64, side: Side) -> Complex64 {
    let shifted = tau + I * (side.sign() * state.v1_plus * eta);
    let c2 = state.c * state.c;
    (shifted * shifted + state.g_sq() * eta * eta) / c2 + eta * eta
}

pub fn mu_pair(state: &BackgroundState, p: FrequencyPoint) -> Result<MuPair> {
    p.require_xi()?;
    Ok(mu_pair_unchecked(state, p.tau, p.eta))
}

pub(crate) fn mu_pair_unchecked(state: &BackgroundState, tau: Complex64, eta: f64) -> MuPair {
    let zp = mu_radicand(state, tau, eta, Side::Upper);
    let zm = mu_radicand(state, tau, eta, Side::Lower);
    MuPair {
        mu_plus: complex_sqrt_halfplane(zp),
        mu_minus: complex_sqrt_halfplane(zm),
        a: zp.re,
        b: zp.im,
        r: zp.norm(),
    }
}

pub fn symbol_direct(state: &BackgroundState, p: FrequencyPoint) -> Result<Complex64> {
    let mu = mu_pair(state, p)?;
    let (tau, eta, v) = (p.tau, p.eta, state.v1_plus);
    let ratio = (mu.mu_plus - mu.mu_minus) / (mu.mu_plus + mu.mu_minus);
    Ok(tau * tau - v * v * eta * eta - 2.0 * I * v * eta * tau * ratio + state.g_sq() * eta * eta)
}

pub fn symbol_reduced(state: &BackgroundState, p: FrequencyPoint) -> Result<Complex64> {
    let mu = mu_pair(state, p)?;
    Ok(state.c * state.c * (mu.mu_plus * mu.mu_minus - p.eta * p.eta))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolRoots {
    pub x1_sq: f64,
    pub x2_sq: f64,
    pub x1: Option<f64>,
    /// Coefficient of the front wave equation f_tt + lambda f_11 = 0.
    pub lambda: f64,
    /// X2 = i y2.
    pub y2: f64,
}

/// Coefficients (1, 2S, P) of the quadratic in X^2 obtained from the quartic.
pub fn quartic_coefficients(state: &BackgroundState) -> [f64; 3] {
    let v2 = state.v1_plus * state.v1_plus;
    let g2 = state.g_sq();
    let c2 = state.c * state.c;
    let s = v2 + g2 + c2;
    [1.0, 2.0 * s, (v2 - g2) * (v2 - g2 - 2.0 * c2)]
}

pub fn quartic_roots(state: &BackgroundState) -> SymbolRoots {
    let v2 = state.v1_plus * state.v1_plus;
    let g2 = state.g_sq();
    let c2 = state.c * state.c;
    let s = v2 + g2 + c2;
    let sq = (c2 * c2 + 4.0 * (g2 + c2) * v2).sqrt();
    // sq - s rewritten as a quotient; exact zeros at both window ends
    let x1_sq = (v2 - g2) * (2.0 * c2 + g2 - v2) / (sq + s);
    let x2_sq = -s - sq;
    SymbolRoots {
        x1_sq,
        x2_sq,
        x1: if x1_sq >= 0.0 { Some(x1_sq.sqrt()) } else { None },
        lambda: x1_sq,
        y2: (-x2_sq).sqrt(),
    }
}

/// Real growth rate X1 |eta| of the unstable root.
pub fn growth_rate(state: &BackgroundState, eta: f64) -> Result<f64> {
    Ok(unstable_x1(state)? * eta.abs())
}

pub(crate) fn unstable_x1(state: &BackgroundState) -> Result<f64> {
    let roots = quartic_roots(state);
    if roots.x1_sq > 0.0 {
        Ok(roots.x1_sq.sqrt())
    } else {
        Err(Error::NoUnstableRoot { k: state.k(), m: state.m() })
    }
}

/// mu-tilde(+) mu-tilde(-), the scaled decay product at tau = X eta, eta > 0.
pub fn scaled_mu_product(state: &BackgroundState, x: Complex64) -> Complex64 {
    let (mp, mm) = scaled_mu(state, x);
    mp * mm
}

fn scaled_mu(state: &BackgroundState, x: Complex64) -> (Complex64, Complex64) {
    let c2 = state.c * state.c;
    let g2 = state.g_sq();
    let iv = I * state.v1_plus;
    let zp = ((x + iv) * (x + iv) + g2) / c2 + 1.0;
    let zm = ((x - iv) * (x - iv) + g2) / c2 + 1.0;
    (complex_sqrt_halfplane(zp), complex_sqrt_halfplane(zm))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleRootReport {
    pub x1: f64,
    /// phi(X1) = mu-tilde(+) mu-tilde(-) - 1.
    pub phi_value: f64,
    /// Central difference with h = 1e-6 max(1, X1).
    pub dphi_dx: f64,
    /// 2X(X^2 + v^2 + G^2 + c^2)/(c^4 mu-tilde(+) mu-tilde(-)).
    pub dphi_dx_closed: f64,
    /// The printed form, without the G^2 term and with a single 1/c.
    pub dphi_dx_printed: f64,
}

pub fn check_simple_root(state: &BackgroundState, eta: f64) -> Result<SimpleRootReport> {
    if eta == 0.0 || !eta.is_finite() {
        return Err(Error::Domain { what: "eta", value: eta });
    }
    let x1 = unstable_x1(state)?;
    let phi = |x: f64| scaled_mu_product(state, Complex64::new(x, 0.0)) - 1.0;
    let h = 1e-6 * x1.max(1.0);
    let fd = (phi(x1 + h) - phi(x1 - h)) / (2.0 * h);
    let prod = scaled_mu_product(state, Complex64::new(x1, 0.0));
    let (v2, g2, c) = (state.v1_plus * state.v1_plus, state.g_sq(), state.c);
    let closed = 2.0 * x1 * (x1 * x1 + v2 + g2 + c * c) / (c.powi(4) * prod);
    let printed = (2.0 * x1 / c) / prod * ((x1 / c).powi(2) + v2 / (c * c) + 1.0);
    Ok(SimpleRootReport {
        x1,
        phi_value: phi(x1).norm(),
        dphi_dx: fd.re,
        dphi_dx_closed: closed.re,
        dphi_dx_printed: printed.re,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct X2Report {
    pub y2: f64,
    pub y2_sq: f64,
    /// mu-tilde(+) mu-tilde(-) at X = offset + i Y2.
    pub product: Complex64,
    pub offset: f64,
    /// Whether tau = i Y2 eta belongs to Xi (it never does).
    pub on_axis_in_xi: bool,
}

impl X2Report {
    pub fn distance_to_minus_one(&self) -> f64 {
        (self.product + 1.0).norm()
    }
    pub fn distance_to_plus_one(&self) -> f64 {
        (self.product - 1.0).norm()
    }
}

/// Evaluates the decay product just to the right of X2 = i Y2.
pub fn verify_x2_excluded(state: &BackgroundState) -> X2Report {
    let roots = quartic_roots(state);
    let offset = 1e-8;
    let product = scaled_mu_product(state, Complex64::new(offset, roots.y2));
    let on_axis = FrequencyPoint::new(Complex64::new(0.0, roots.y2), 1.0);
    X2Report { y2: roots.y2, y2_sq: -roots.x2_sq, product, offset, on_axis_in_xi: on_axis.in_xi() }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c1: f64,
    pub c_star: f64,
    /// Dimensionless; the velocity prefactor is bounded by c2 / c.
    pub c2: f64,
    /// Carries 1/c^2.
    pub c3: f64,
}

pub fn bound_constants(state: &BackgroundState) -> Result<BoundConstants> {
    let (k, m) = state.elastic_parameters()?;
    let eps = state.eps0;
    let top = (k * k + 2.0).sqrt();
    if !(m >= k + eps && m <= top - eps) {
        return Err(Error::NoUnstableRoot { k, m });
    }
    let ke = k + eps;
    let k2 = k * k;
    let z0 = (1.0 + 4.0 * (k2 + 1.0) * ke * ke).sqrt();
    let c1 = 2.0 - 2.0 * (z0 - 2.0 * ke * ke);
    let inner = ((2.0 * k2 + 3.0).powi(2) - 4.0 * (k2 + 1.0) * eps * (2.0 * top - eps)).sqrt();
    let c_star = 1.0 / 2f64.sqrt() / (1.0 + inner - 2.0 * (top - eps).powi(2)).sqrt();
    let d = z0 - k2 - 1.0;
    let c2 = (d / (d * d + 2.0 * k2 * (z0 - 2.0 * ke * ke - k2 - 1.0) + k2 * k2)).sqrt();
    let c3 = 1.0 / (state.c * state.c * d);
    Ok(BoundConstants { c1, c_star, c2, c3 })
}

/// The four ratios bounded in the proof of the ill-posedness lemma, evaluated
/// at tau = X1 eta. Index 0 is the upper side (+), 1 the lower side (-).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRatios {
    /// |(mu+ - mu-)/mu(s)|^2
    pub diff_over_mu_sq: [f64; 2],
    /// |mu(s)/(mu+ + mu-)|
    pub mu_over_sum: [f64; 2],
    /// |i eta (tau +- i v eta)/D(s)|
    pub velocity_prefactor: [f64; 2],
    /// |i eta/(tau +- i v eta)|^2
    pub deformation_prefactor_sq: [f64; 2],
}

pub fn bound_ratios(state: &BackgroundState, eta: f64) -> Result<BoundRatios> {
    let tau = Complex64::new(growth_rate(state, eta)?, 0.0);
    let p = FrequencyPoint::new(tau, eta);
    let mu = mu_pair(state, p)?;
    let diff = mu.mu_plus - mu.mu_minus;
    let sum = mu.mu_plus + mu.mu_minus;
    let mut out = BoundRatios {
        diff_over_mu_sq: [0.0; 2],
        mu_over_sum: [0.0; 2],
        velocity_prefactor: [0.0; 2],
        deformation_prefactor_sq: [0.0; 2],
    };
    for (i, side) in Side::BOTH.iter().enumerate() {
        let m = mu.get(*side);
        let shifted = tau + I * (side.sign() * state.v1_plus * eta);
        let d = shifted * shifted + state.g_sq() * eta * eta;
        out.diff_over_mu_sq[i] = (diff / m).norm_sqr();
        out.mu_over_sum[i] = (m / sum).norm();
        out.velocity_prefactor[i] = (I * eta * shifted / d).norm();
        out.deformation_prefactor_sq[i] = (I * eta / shifted).norm_sqr();
    }
    Ok(out)
}

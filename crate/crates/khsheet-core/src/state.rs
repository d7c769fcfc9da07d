//! Background (rectilinear) state, pressure laws and the instability window.

use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_EPS0: f64 = 0.05;

/// Which half-plane a quantity lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Upper, Side::Lower];

    /// +1 above the sheet, -1 below.
    pub fn sign(self) -> f64 {
        match self {
            Side::Upper => 1.0,
            Side::Lower => -1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        })
    }
}

/// Barotropic pressure law p(rho).
pub trait PressureLaw {
    fn evaluate(&self, rho: f64) -> f64;
    fn derivative(&self, rho: f64) -> f64;
}

/// p = c0^2 rho. The default law; the sound speed is c0 everywhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearLaw {
    pub c0: f64,
}

impl Default for LinearLaw {
    fn default() -> Self {
        LinearLaw { c0: 1.0 }
    }
}

impl PressureLaw for LinearLaw {
    fn evaluate(&self, rho: f64) -> f64 {
        self.c0 * self.c0 * rho
    }
    fn derivative(&self, _rho: f64) -> f64 {
        self.c0 * self.c0
    }
}

/// p = kappa rho^gamma.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLaw {
    pub kappa: f64,
    pub gamma: f64,
}

impl PressureLaw for PowerLaw {
    fn evaluate(&self, rho: f64) -> f64 {
        self.kappa * rho.powf(self.gamma)
    }
    fn derivative(&self, rho: f64) -> f64 {
        self.kappa * self.gamma * rho.powf(self.gamma - 1.0)
    }
}

pub fn sound_speed<L: PressureLaw + ?Sized>(law: &L, rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain { what: "rho", value: rho });
    }
    let dp = law.derivative(rho);
    if !(dp > 0.0) || !dp.is_finite() {
        return Err(Error::Domain { what: "p'(rho)", value: dp });
    }
    Ok(dp.sqrt())
}

/// The rectilinear solution. Only the upper-fluid values are stored; the lower
/// fluid is its antisymmetric mirror.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundState {
    pub rho_dot: f64,
    pub v1_plus: f64,
    pub g11_plus: f64,
    pub g12_plus: f64,
    pub c: f64,
    #[serde(default = "default_eps0")]
    pub eps0: f64,
}

fn default_eps0() -> f64 {
    DEFAULT_EPS0
}

impl BackgroundState {
    pub fn new(rho_dot: f64, v1_plus: f64, g11_plus: f64, g12_plus: f64, c: f64, eps0: f64) -> Result<Self> {
        let s = BackgroundState { rho_dot, v1_plus, g11_plus, g12_plus, c, eps0 };
        s.validate()?;
        Ok(s)
    }

    /// Builds the state with c taken from a pressure law at `rho_dot`.
    pub fn from_law<L: PressureLaw + ?Sized>(
        law: &L,
        rho_dot: f64,
        v1_plus: f64,
        g11_plus: f64,
        g12_plus: f64,
        eps0: f64,
    ) -> Result<Self> {
        let c = sound_speed(law, rho_dot)?;
        Self::new(rho_dot, v1_plus, g11_plus, g12_plus, c, eps0)
    }

    /// State with elastic number `k`, Mach number `m`, sound speed `c`,
    /// unit density and the deformation row aligned with e1.
    pub fn from_dimensionless(k: f64, m: f64, c: f64, eps0: f64) -> Result<Self> {
        if !(k >= 0.0) {
            return Err(Error::Domain { what: "K", value: k });
        }
        if !(m >= 0.0) {
            return Err(Error::Domain { what: "M", value: m });
        }
        Self::new(1.0, m * c, k * c, 0.0, c, eps0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.rho_dot, self.v1_plus, self.g11_plus, self.g12_plus, self.c, self.eps0];
        if let Some(bad) = finite.iter().find(|x| !x.is_finite()) {
            return Err(Error::Domain { what: "non-finite background value", value: *bad });
        }
        if !(self.rho_dot > 0.0) {
            return Err(Error::Domain { what: "rho_dot", value: self.rho_dot });
        }
        if !(self.c > 0.0) {
            return Err(Error::Domain { what: "c", value: self.c });
        }
        if !(self.eps0 > 0.0) {
            return Err(Error::Domain { what: "eps0", value: self.eps0 });
        }
        Ok(())
    }

    pub fn elastic_parameters(&self) -> Result<(f64, f64)> {
        if !(self.c > 0.0) {
            return Err(Error::Domain { what: "c", value: self.c });
        }
        Ok((self.g_sq().sqrt() / self.c, self.v1_plus.abs() / self.c))
    }

    /// K, assuming a validated state.
    pub fn k(&self) -> f64 {
        self.g_sq().sqrt() / self.c
    }

    /// M, assuming a validated state.
    pub fn m(&self) -> f64 {
        self.v1_plus.abs() / self.c
    }

    /// G11^2 + G12^2 of the upper fluid.
    pub fn g_sq(&self) -> f64 {
        self.g11_plus * self.g11_plus + self.g12_plus * self.g12_plus
    }

    pub fn rho_minus(&self) -> f64 {
        self.rho_dot
    }

    pub fn v1_minus(&self) -> f64 {
        -self.v1_plus
    }

    pub fn g11_minus(&self) -> f64 {
        -self.g11_plus
    }

    pub fn g12_minus(&self) -> f64 {
        -self.g12_plus
    }

    pub fn velocity(&self, side: Side) -> f64 {
        side.sign() * self.v1_plus
    }

    /// First deformation row (G_11, G_12) on `side`.
    pub fn deformation_row(&self, side: Side) -> [f64; 2] {
        let s = side.sign();
        [s * self.g11_plus, s * self.g12_plus]
    }

    pub fn window(&self) -> StabilityWindow {
        stability_window(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    BelowWindow,
    InUniformWindow,
    MarginalBand,
    AboveWindow,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::BelowWindow => "below_window",
            Classification::InUniformWindow => "in_uniform_window",
            Classification::MarginalBand => "marginal_band",
            Classification::AboveWindow => "above_window",
        }
    }

    /// Strictly between the critical speeds.
    pub fn is_unstable(self) -> bool {
        matches!(self, Classification::InUniformWindow | Classification::MarginalBand)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityWindow {
    pub u_low: f64,
    pub u_upp: f64,
    pub eps0: f64,
    pub classification: Classification,
}

impl StabilityWindow {
    /// The eps0-shrunk window in speed units.
    pub fn uniform_bounds(&self, c: f64) -> (f64, f64) {
        (self.u_low + c * self.eps0, self.u_upp - c * self.eps0)
    }
}

pub fn stability_window(state: &BackgroundState) -> StabilityWindow {
    let c = state.c;
    let k = state.k();
    let u_low = c * k;
    let u_upp = c * (k * k + 2.0).sqrt();
    let speed = state.v1_plus.abs();
    let classification = if speed <= u_low {
        Classification::BelowWindow
    } else if speed >= u_upp {
        Classification::AboveWindow
    } else if u_low + c * state.eps0 <= speed && speed <= u_upp - c * state.eps0 {
        Classification::InUniformWindow
    } else {
        Classification::MarginalBand
    };
    StabilityWindow { u_low, u_upp, eps0: state.eps0, classification }
}

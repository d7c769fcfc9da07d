use alloc::string::String;

use crate::state::Side;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {what} = {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("no unstable root: M = {m}, K = {k} lies outside the open window (K, sqrt(K^2+2))")]
    NoUnstableRoot { k: f64, m: f64 },

    #[error("outside the frequency set: tau = {tau_re}{tau_im:+}i, eta = {eta} (need Re tau > 0)")]
    OutsideXi { tau_re: f64, tau_im: f64, eta: f64 },

    #[error("singular denominator on the {side} side")]
    SingularDenominator { side: Side },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("quadrature did not reach tolerance (last estimate {estimate}, change {change})")]
    Quadrature { estimate: f64, change: f64 },

    #[error("time step {dt} exceeds the CFL limit {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("solution blew up at t = {time} (norm {norm})")]
    Blowup { time: f64, norm: f64 },

    #[error("eigen-solver failure: {0}")]
    Eigen(String),

    #[error("singular matrix at pivot {0}")]
    Singular(usize),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

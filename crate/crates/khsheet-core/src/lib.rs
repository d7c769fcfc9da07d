//! Linear stability toolkit for two-dimensional compressible elastic vortex sheets.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function of
//! its inputs; IO and the command line live in the `khsheet` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dispersion;
pub mod error;
pub mod hadamard;
pub mod linalg;
pub mod modes;
pub mod norms;
pub mod quad;
pub mod simulator;
pub mod state;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use state::{BackgroundState, Classification, Side, StabilityWindow};

/// The imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

//! Per-wavenumber simulation of the linearized sheet on two truncated
//! half-lines.
//!
//! Space: diagonal-norm summation-by-parts differences. The interface
//! conditions and the outer boundaries enter through characteristic penalties,
//! so the semi-discrete energy changes exactly by computable boundary terms.
//! Time: classical Runge-Kutta.

pub mod abscissa;
pub mod energy;
pub mod evolve;
pub mod generator;
pub mod grid;
pub mod growth;
pub mod sbp;

pub use abscissa::{spectral_abscissa, Abscissa, Method};
pub use energy::{energy_monitor, EnergyResidual};
pub use evolve::{cfl_limit, evolve, EvolveOptions, Sample, Trajectory};
pub use generator::{assemble_generator, Generator, SimState};
pub use grid::Grid1D;
pub use growth::{fit_log_slope, measure_growth, GrowthFit};

#[cfg(test)]
mod tests;

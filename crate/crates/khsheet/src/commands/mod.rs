pub mod analyze;
pub mod hadamard;
pub mod mode;
pub mod simulate;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::evolve::Trajectory;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyResidual {
    pub t: f64,
    pub energy: f64,
    /// Five-point central difference of the energy samples.
    pub de_dt: f64,
    pub flux: f64,
    pub residual: f64,
}

/// |dE/dt - flux| at every sample with two equally spaced neighbours on each
/// side. Samples next to a shortened final step are skipped.
pub fn energy_monitor(series: &Trajectory) -> Vec<EnergyResidual> {
    let s = &series.samples;
    let mut out = Vec::new();
    if s.len() < 5 {
        return out;
    }
    for i in 2..s.len() - 2 {
        let h = s[i + 1].t - s[i].t;
        let uniform = (-2..2).all(|k: isize| {
            let a = (i as isize + k) as usize;
            ((s[a + 1].t - s[a].t) - h).abs() <= 1e-9 * h
        });
        if !uniform || h <= 0.0 {
            continue;
        }
        let de_dt = (s[i - 2].energy - 8.0 * s[i - 1].energy + 8.0 * s[i + 1].energy - s[i + 2].energy) / (12.0 * h);
        out.push(EnergyResidual {
            t: s[i].t,
            energy: s[i].energy,
            de_dt,
            flux: s[i].flux,
            residual: (de_dt - s[i].flux).abs(),
        });
    }
    out
}

/// Largest residual of a monitor series (0 when empty).
pub fn max_residual(r: &[EnergyResidual]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.residual))
}

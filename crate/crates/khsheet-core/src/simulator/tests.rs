use alloc::vec::Vec;

use num_complex::Complex64;

use super::abscissa::{dense_abscissa, krylov_abscissa, KrylovOptions};
use super::energy::max_residual;
use super::*;
use crate::dispersion::growth_rate;
use crate::modes::NormalMode;
use crate::state::BackgroundState;

fn case(k: f64, m: f64) -> BackgroundState {
    BackgroundState::from_dimensionless(k, m, 1.0, 0.05).unwrap()
}

#[test]
fn zero_data_stays_zero() {
    let grid = Grid1D::new(10.0, 32).unwrap();
    let gen = assemble_generator(&case(0.0, 1.0), 1.0, &grid).unwrap();
    let dt = cfl_limit(&gen, 0.4);
    let tr = evolve(&gen, &SimState::zeros(&grid, 1.0), &EvolveOptions::new(dt, 1.0)).unwrap();
    assert!(tr.last.pack(&grid).iter().all(|z| z.norm() == 0.0));
    assert_eq!(max_residual(&energy_monitor(&tr)), 0.0);
}

#[test]
fn cfl_is_enforced() {
    let grid = Grid1D::new(10.0, 32).unwrap();
    let gen = assemble_generator(&case(0.0, 1.0), 1.0, &grid).unwrap();
    let dt = cfl_limit(&gen, 0.4);
    let r = evolve(&gen, &SimState::zeros(&grid, 1.0), &EvolveOptions::new(2.0 * dt, 1.0));
    assert!(matches!(r, Err(crate::Error::Cfl { .. })));
}

#[test]
fn acoustics_are_neutral() {
    let state = BackgroundState::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.05).unwrap();
    let grid = Grid1D::new(10.0, 24).unwrap();
    let gen = assemble_generator(&state, 0.0, &grid).unwrap();
    let a = dense_abscissa(&gen.matrix).unwrap();
    assert!(a.abscissa <= 1e-8, "{}", a.abscissa);
}

#[test]
fn dense_and_krylov_agree() {
    let state = case(0.0, 1.0);
    let grid = Grid1D::new(20.0, 64).unwrap();
    let gen = assemble_generator(&state, 1.0, &grid).unwrap();
    let d = dense_abscissa(&gen.matrix).unwrap();
    let k = krylov_abscissa(&gen.matrix, &KrylovOptions::default()).unwrap();
    assert!((d.eigenvalue - k.eigenvalue).norm() < 1e-8, "{} vs {}", d.eigenvalue, k.eigenvalue);
    assert!(k.residual < 1e-8);
    let x1 = growth_rate(&state, 1.0).unwrap();
    assert!((d.abscissa - x1).abs() < 0.05 * x1, "{} vs {}", d.abscissa, x1);
}

#[test]
fn on_shell_data_grows_at_the_predicted_rate() {
    let state = case(0.0, 1.0);
    let eta = 1.0;
    let x1 = growth_rate(&state, eta).unwrap();
    let grid = Grid1D::new(30.0, 241).unwrap();
    let gen = assemble_generator(&state, eta, &grid).unwrap();
    let mode = NormalMode::on_shell(&state, eta, Complex64::new(1.0, 0.0)).unwrap();
    let init = SimState::from_mode(&grid, &mode);
    let dt = cfl_limit(&gen, 0.4);
    let tr = evolve(&gen, &init, &EvolveOptions::new(dt, 5.0)).unwrap();
    let l0 = tr.samples[0].log_norm;
    for s in &tr.samples {
        let ratio = (s.log_norm - l0 - x1 * s.t).exp();
        assert!((ratio - 1.0).abs() < 0.02, "t={} ratio={}", s.t, ratio);
    }
    let fit = measure_growth(&tr).unwrap();
    assert!((fit.rate - x1).abs() < 0.02 * x1);
    assert!(!tr.reflection_warning);
    assert!(tr.reflection < 1e-8, "{}", tr.reflection);
}

#[test]
fn rk4_is_fourth_order_in_time() {
    let state = case(0.5, 1.2);
    let grid = Grid1D::new(10.0, 48).unwrap();
    let gen = assemble_generator(&state, 0.8, &grid).unwrap();
    let mode = NormalMode::on_shell(&state, 0.8, Complex64::new(1.0, 0.0)).unwrap();
    let init = SimState::from_mode(&grid, &mode);
    let dt = cfl_limit(&gen, 0.4);
    let run = |h: f64| evolve(&gen, &init, &EvolveOptions::new(h, 1.0)).unwrap().last.pack(&grid);
    let (a, b, c) = (run(dt), run(dt / 2.0), run(dt / 4.0));
    let diff = |x: &[Complex64], y: &[Complex64]| x.iter().zip(y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
    let ratio = diff(&a, &b) / diff(&b, &c);
    assert!(ratio > 12.0 && ratio < 20.0, "{ratio}");
}

/// Smooth pulses centred at |x2| = 3, negligible at the interface and the
/// truncation boundaries when the run starts.
fn pulse(grid: &Grid1D, eta: f64) -> SimState {
    let mut st = SimState::zeros(grid, eta);
    for side in crate::Side::BOTH {
        let s = st.side_mut(side);
        for i in 0..grid.n {
            let x = grid.x(side, i);
            let g = Complex64::new((-(x - 3.0 * side.sign()).powi(2) / 0.25).exp(), 0.0);
            s[0][i] = g;
            s[2][i] = g * 0.5;
            s[3][i] = g * Complex64::new(0.0, 0.2);
        }
    }
    st
}

#[test]
fn energy_identity_converges() {
    let state = BackgroundState::new(1.0, 0.0, 0.6, 0.8, 1.0, 0.05).unwrap();
    let mut res = Vec::new();
    for n in [97, 193, 385] {
        let grid = Grid1D::new(12.0, n).unwrap();
        let gen = assemble_generator(&state, 1.0, &grid).unwrap();
        let dt = cfl_limit(&gen, 0.4);
        let tr = evolve(&gen, &pulse(&grid, 1.0), &EvolveOptions::new(dt, 4.0)).unwrap();
        assert!(!tr.reflection_warning);
        res.push(max_residual(&energy_monitor(&tr)));
    }
    assert!(res[0] / res[1] > 12.0 && res[1] / res[2] > 12.0, "{res:?}");
    assert!(res[2] < 1e-6);
}

#[test]
fn below_window_is_not_unstable() {
    let state = case(1.0, 0.5);
    // a neutral interface wave whose discrete real part shrinks with dx
    let mut prev = f64::INFINITY;
    for n in [40, 56] {
        let grid = Grid1D::new(20.0, n).unwrap();
        let gen = assemble_generator(&state, 1.0, &grid).unwrap();
        let a = dense_abscissa(&gen.matrix).unwrap();
        assert!(a.abscissa < prev && a.abscissa < 5e-3, "{n}: {}", a.abscissa);
        prev = a.abscissa;
    }
}


#[test]
fn leading_eigenvector_matches_the_mode() {
    let state = case(0.5, 1.2);
    let eta = 1.0;
    let x1 = growth_rate(&state, eta).unwrap();
    let mode = NormalMode::on_shell(&state, eta, Complex64::new(1.0, 0.0)).unwrap();
    let mut errs = Vec::new();
    for n in [129, 257] {
        let grid = Grid1D::new(30.0, n).unwrap();
        let gen = assemble_generator(&state, eta, &grid).unwrap();
        let a = spectral_abscissa(&gen, Method::Krylov).unwrap();
        assert!((a.abscissa - x1).abs() < 0.02 * x1);
        let v = a.eigenvector.unwrap();
        let u = SimState::from_mode(&grid, &mode).pack(&grid);
        // best complex multiple of v approximating u
        let alpha = crate::linalg::dot(&v, &u) / crate::linalg::dot(&v, &v);
        let r: Vec<Complex64> = u.iter().zip(&v).map(|(p, q)| p - q * alpha).collect();
        errs.push(crate::linalg::norm2(&r) / crate::linalg::norm2(&u));
    }
    assert!(errs[1] < 1e-3, "{errs:?}");
    assert!(errs[0] / errs[1] > 6.0, "{errs:?}");
}

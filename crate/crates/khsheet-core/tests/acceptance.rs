//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::cell::RefCell;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use khsheet_core::dispersion::{
    bound_constants, bound_ratios, growth_rate, mu_pair, quartic_roots, symbol_direct, symbol_reduced, FrequencyPoint,
};
use khsheet_core::hadamard::{find_n_star, illposedness_table, sequence_grown_norms};
use khsheet_core::linalg::SplitMix;
use khsheet_core::modes::{boundary_residual, interior_residual, ExponentialProfile, NormalMode};
use khsheet_core::norms::{halfspace_norm_exponential, halfspace_norm_quadrature, sample_terms, InteriorDensity, QuadratureGrid, Term};
use khsheet_core::simulator::abscissa::{dense_abscissa, krylov_abscissa, KrylovOptions};
use khsheet_core::simulator::energy::max_residual;
use khsheet_core::simulator::{
    assemble_generator, cfl_limit, energy_monitor, evolve, measure_growth, EvolveOptions, Grid1D, SimState,
};
use khsheet_core::{BackgroundState, Complex64, Side};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn state(k: f64, m: f64, cc: f64) -> BackgroundState {
    BackgroundState::from_dimensionless(k, m, cc, 0.05).unwrap()
}

/// Uniform in [lo, hi).
fn uniform(rng: &mut SplitMix, lo: f64, hi: f64) -> f64 {
    lo + 0.5 * (rng.next_f64() + 1.0) * (hi - lo)
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail }
    }
}

fn window_endpoints() -> Outcome {
    let cc = 1.7;
    let mut worst_end: f64 = 0.0;
    let mut min_inside = f64::INFINITY;
    for k in [0.0, 0.3, 1.0, 2.0] {
        let top = (k * k + 2.0f64).sqrt();
        for m in [k, top] {
            worst_end = worst_end.max(quartic_roots(&state(k, m, cc)).x1_sq.abs() / (cc * cc));
        }
        for i in 1..=20 {
            let m = k + (top - k) * i as f64 / 21.0;
            min_inside = min_inside.min(quartic_roots(&state(k, m, cc)).x1_sq);
        }
    }
    Outcome::new(
        worst_end <= 1e-10 && min_inside > 0.0,
        format!("max |x1_sq|/c^2 at endpoints {worst_end:.2e}, min interior x1_sq {min_inside:.3e}"),
    )
}

fn euler_reduction() -> Outcome {
    let eps0 = 0.05;
    let mut worst_window: f64 = 0.0;
    for cc in [1.0, 2.3] {
        let s = state(0.0, 1.0, cc);
        let (lo, hi) = s.window().uniform_bounds(cc);
        worst_window = worst_window.max((lo / cc - eps0).abs()).max((hi / cc - (2f64.sqrt() - eps0)).abs());
    }
    let err = (quartic_roots(&state(0.0, 1.0, 1.0)).x1_sq - (5f64.sqrt() - 2.0)).abs();
    Outcome::new(
        worst_window <= 1e-15 && err <= 1e-12,
        format!("window offset {worst_window:.1e}, |x1_sq - (sqrt5 - 2)| = {err:.1e}"),
    )
}

fn symbol_equivalence() -> Outcome {
    let mut rng = SplitMix(0xacce);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let s = BackgroundState::new(
            uniform(&mut rng, 0.2, 3.0),
            uniform(&mut rng, -2.0, 2.0),
            uniform(&mut rng, -1.5, 1.5),
            uniform(&mut rng, -1.5, 1.5),
            uniform(&mut rng, 0.3, 3.0),
            0.05,
        )
        .unwrap();
        for _ in 0..2000 {
            let tau = c(uniform(&mut rng, 1e-3, 10.0), uniform(&mut rng, -10.0, 10.0));
            let eta = uniform(&mut rng, -10.0, 10.0);
            let p = FrequencyPoint::new(tau, eta);
            let a = symbol_direct(&s, p).unwrap();
            let b = symbol_reduced(&s, p).unwrap();
            let scale = 1f64.max(tau.norm_sqr() + eta * eta * s.c * s.c);
            worst = worst.max((a - b).norm() / scale);
        }
    }
    Outcome::new(worst <= 1e-10, format!("10000 points, max scaled gap {worst:.2e}"))
}

fn root_identities() -> Outcome {
    let mut worst_product: f64 = 0.0;
    let mut worst_modulus: f64 = 0.0;
    for (k, m) in [(0.0, 1.0), (0.5, 1.2), (1.0, 1.5)] {
        let s = state(k, m, 1.3);
        for eta in [0.1, 1.0, 10.0, 100.0] {
            let tau = growth_rate(&s, eta).unwrap();
            let mu = mu_pair(&s, FrequencyPoint::new(c(tau, 0.0), eta)).unwrap();
            worst_product = worst_product.max((mu.mu_plus * mu.mu_minus - eta * eta).norm() / (eta * eta));
            for z in [mu.mu_plus, mu.mu_minus] {
                worst_modulus = worst_modulus.max((z.norm() - eta).abs() / eta);
            }
        }
    }
    Outcome::new(
        worst_product <= 1e-10 && worst_modulus <= 1e-10,
        format!("product {worst_product:.1e}, modulus {worst_modulus:.1e}"),
    )
}

fn mode_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    for (k, m) in [(0.0, 1.0), (0.5, 1.2), (1.0, 1.5), (2.0, 2.1)] {
        let s = BackgroundState::new(1.4, m * 0.9, 0.6 * k * 0.9, 0.8 * k * 0.9, 0.9, 0.05).unwrap();
        for eta in [0.3, 1.0, 7.0] {
            let mode = NormalMode::on_shell(&s, eta, c(0.8, -0.6)).unwrap();
            let depths: Vec<f64> = (0..50).map(|i| i as f64 * 0.08 / eta).collect();
            worst = worst.max(interior_residual(&s, &mode, &depths)).max(boundary_residual(&s, &mode).max());
        }
    }
    Outcome::new(worst <= 1e-10, format!("max relative residual {worst:.2e}"))
}

fn bound_sandwiches() -> Outcome {
    let mut ok = true;
    let mut tight: f64 = f64::INFINITY;
    // rounding slack on the non-strict sides
    let slack = 1e-12;
    for k in [0.0, 1.0] {
        for cc in [1.0, 1.5] {
            let eps = 0.05;
            let (lo, hi) = (k + eps, (k * k + 2.0f64).sqrt() - eps);
            let top = (k * k + 2.0f64).sqrt();
            for i in 0..200 {
                let m = lo + (hi - lo) * i as f64 / 199.0;
                let s = state(k, m, cc);
                let b = bound_constants(&s).unwrap();
                let r = bound_ratios(&s, 1.0).unwrap();
                for side in 0..2 {
                    let checks = [
                        (b.c1 - slack <= r.diff_over_mu_sq[side], r.diff_over_mu_sq[side] < 4.0),
                        (0.5 < r.mu_over_sum[side], r.mu_over_sum[side] <= b.c_star * (1.0 + slack)),
                        (top / (2.0 * cc) < r.velocity_prefactor[side], r.velocity_prefactor[side] <= b.c2 / cc * (1.0 + slack)),
                        (
                            1.0 / (cc * cc * (k * k + 2.0)) < r.deformation_prefactor_sq[side],
                            r.deformation_prefactor_sq[side] <= b.c3 * (1.0 + slack),
                        ),
                    ];
                    ok &= checks.iter().all(|(a, b)| *a && *b);
                    tight = tight.min(r.diff_over_mu_sq[side] - b.c1);
                }
            }
        }
    }
    Outcome::new(ok, format!("800 grid points, closest approach to C1 {tight:.1e}"))
}

/// Two components on both sides, coefficients and decays affine in eta.
fn random_profile(rng: &mut SplitMix) -> (impl Fn(f64) -> Vec<Term>, (f64, f64)) {
    let a = uniform(rng, 0.5, 6.0);
    let band = (a, a + uniform(rng, 0.2, 2.0));
    let mut parts = Vec::new();
    for component in 0..2 {
        for side in Side::BOTH {
            let c0 = c(rng.next_f64(), rng.next_f64());
            let c1 = c(rng.next_f64(), rng.next_f64()) * 0.3;
            let d0 = c(uniform(rng, 0.6, 1.6), 2.0 * rng.next_f64());
            let d1 = c(uniform(rng, 0.0, 0.2), rng.next_f64());
            parts.push((component, side, c0, c1, d0, d1));
        }
    }
    let f = move |eta: f64| {
        parts
            .iter()
            .map(|&(component, side, c0, c1, d0, d1)| Term {
                component,
                profile: ExponentialProfile::new(c0 + c1 * eta, d0 + d1 * eta, side),
            })
            .collect()
    };
    (f, band)
}

fn norm_engine() -> Outcome {
    let mut rng = SplitMix(0x707);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (f, band) = random_profile(&mut rng);
        let d = InteriorDensity { terms: &f, band };
        // the quadrature sweeps x2 at fixed eta, so rebuild the terms only when eta moves
        let cache: RefCell<(f64, Vec<Term>)> = RefCell::new((f64::NAN, Vec::new()));
        let sampler = |k: usize, eta: f64, x: f64, s: u32| {
            let mut cached = cache.borrow_mut();
            if cached.0 != eta {
                *cached = (eta, f(eta));
            }
            sample_terms(&cached.1, k, x, s)
        };
        for j in 0..=4 {
            let exact = halfspace_norm_exponential(&d, j).unwrap();
            let q = halfspace_norm_quadrature(&sampler, 2, j, &QuadratureGrid::new(band)).unwrap();
            worst = worst.max((q.value - exact).abs() / exact);
        }
    }
    Outcome::new(worst <= 1e-6, format!("100 norms, max relative gap {worst:.2e}"))
}

fn hadamard_table() -> Outcome {
    let s = state(0.0, 1.0, 1.0);
    let (j, k, t0, cbar) = (3, 3, 1.0, 1.0);
    let x1 = growth_rate(&s, 1.0).unwrap();
    let rows = illposedness_table(&s, j, k, t0, cbar, &[5, 10, 20, 40]).unwrap();
    let mut ok = true;
    let mut scaled = Vec::new();
    for r in &rows {
        let n = r.n as f64;
        let norm = r.initial.norms.combined();
        ok &= norm <= 1.1 * r.initial.c_univ / n;
        scaled.push(n * norm);
        ok &= r.log10_ratio >= x1 * n * t0 / std::f64::consts::LN_10 - 2.0;
    }
    ok &= rows.windows(2).all(|w| w[1].log10_ratio > w[0].log10_ratio);
    ok &= scaled.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
    let alpha = 2.0;
    let n_star = find_n_star(&s, alpha, t0, j, k, cbar).unwrap();
    // every member at or beyond n* exceeds alpha at T0, through the front alone
    for n in [n_star, n_star + 1] {
        let g = sequence_grown_norms(&s, n, j, k, t0, cbar).unwrap();
        ok &= g.log_lower.f >= alpha.ln() && g.log_norms.f >= alpha.ln();
    }
    for r in rows.iter().filter(|r| r.n >= n_star) {
        ok &= r.grown.log_norms.combined() >= alpha.ln();
    }
    let ratios: Vec<String> = rows.iter().map(|r| format!("{:.2}", r.log10_ratio)).collect();
    let nn: Vec<String> = scaled.iter().map(|v| format!("{v:.4}")).collect();
    Outcome::new(ok, format!("log10 ratios [{}], n*norm [{}], n* = {n_star}", ratios.join(", "), nn.join(", ")))
}

fn gaussian_pulse(grid: &Grid1D, eta: f64, centre: f64, width: f64) -> SimState {
    let mut st = SimState::zeros(grid, eta);
    for side in Side::BOTH {
        let s = st.side_mut(side);
        for i in 0..grid.n {
            let x = grid.x(side, i);
            let g = c((-(x - centre * side.sign()).powi(2) / width).exp(), 0.0);
            s[0][i] = g;
            s[2][i] = g * 0.5;
            s[3][i] = g * c(0.0, 0.2);
        }
    }
    st
}

fn simulator() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let eta = 1.0;
    for (k, m) in [(0.0, 1.0), (0.5, 1.2), (1.0, 1.5)] {
        let s = state(k, m, 1.0);
        let x1 = growth_rate(&s, eta).unwrap();
        let mut errs = Vec::new();
        for n in [512, 1024] {
            let gen = assemble_generator(&s, eta, &Grid1D::new(40.0, n).unwrap()).unwrap();
            let a = krylov_abscissa(&gen.matrix, &KrylovOptions::default()).unwrap();
            errs.push((a.abscissa - x1).abs() / x1);
        }
        ok &= errs[0] <= 0.02 && errs[1] < errs[0];
        notes.push(format!("({k},{m}) {:.1e}->{:.1e}", errs[0], errs[1]));
    }

    // time marching from a localized pulse at the sheet
    let s = state(0.0, 1.0, 1.0);
    let x1 = growth_rate(&s, eta).unwrap();
    let grid = Grid1D::new(40.0, 512).unwrap();
    let gen = assemble_generator(&s, eta, &grid).unwrap();
    let mut init = gaussian_pulse(&grid, eta, 0.0, 1.0);
    init.g = c(1.0, 0.0);
    let tr = evolve(&gen, &init, &EvolveOptions::new(cfl_limit(&gen, 0.4), 20.0)).unwrap();
    let fit = measure_growth(&tr).unwrap();
    let rel = (fit.rate - x1).abs() / x1;
    ok &= rel <= 0.02 && !tr.reflection_warning;
    notes.push(format!("marching {rel:.1e}"));

    // below the window: a neutral interface wave, nothing grows
    let s = state(1.0, 0.5, 1.0);
    let gen = assemble_generator(&s, eta, &Grid1D::new(20.0, 96).unwrap()).unwrap();
    let dense = dense_abscissa(&gen.matrix).unwrap().abscissa;
    let gen = assemble_generator(&s, eta, &Grid1D::new(40.0, 512).unwrap()).unwrap();
    let kry = krylov_abscissa(&gen.matrix, &KrylovOptions::default()).unwrap().abscissa;
    ok &= dense <= 1e-3 && kry <= 1e-3;
    notes.push(format!("below window {dense:.1e} (dense), {kry:.1e} (Krylov)"));
    Outcome::new(ok, notes.join(", "))
}

fn energy_identity() -> Outcome {
    let s = BackgroundState::new(1.0, 0.0, 0.6, 0.8, 1.0, 0.05).unwrap();
    let mut res = Vec::new();
    let mut clean = true;
    for n in [97, 193, 385] {
        let grid = Grid1D::new(12.0, n).unwrap();
        let gen = assemble_generator(&s, 1.0, &grid).unwrap();
        let tr = evolve(&gen, &gaussian_pulse(&grid, 1.0, 3.0, 0.25), &EvolveOptions::new(cfl_limit(&gen, 0.4), 4.0)).unwrap();
        clean &= !tr.reflection_warning;
        res.push(max_residual(&energy_monitor(&tr)));
    }
    let orders: Vec<f64> = res.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Outcome::new(
        clean && orders.iter().all(|p| *p >= 3.5) && res[2] <= 1e-6,
        format!("residuals {:.1e} {:.1e} {:.1e}, observed orders {:.2} {:.2}", res[0], res[1], res[2], orders[0], orders[1]),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("window endpoints", window_endpoints, 1),
        ("Euler reduction", euler_reduction, 1),
        ("symbol equivalence", symbol_equivalence, 5),
        ("root identities", root_identities, 1),
        ("mode exactness", mode_exactness, 1),
        ("bound sandwiches", bound_sandwiches, 5),
        ("norm engine", norm_engine, 10),
        ("Hadamard table", hadamard_table, 30),
        ("simulator cross-validation", simulator, 300),
        ("energy identity", energy_identity, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed < Duration::from_secs(*limit);
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<27} {} ({}; {:.2} s of {} s)",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            limit
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

//! Largest real part of the generator spectrum.
//!
//! Small generators go through the dense QR algorithm. Large ones use Arnoldi
//! on the Runge-Kutta propagator over a fixed time, whose eigenvalues of largest
//! modulus belong to the eigenvalues of A with largest real part, and then
//! polish each Ritz value by Rayleigh quotient iteration with a banded LU.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::generator::Generator;
use crate::error::{Error, Result};
use crate::linalg::arnoldi::{dominant_ritz, ArnoldiOptions};
use crate::linalg::banded::BandedLu;
use crate::linalg::dense::eigenvalues;
use crate::linalg::sparse::CsrMatrix;
use crate::linalg::{dot, norm2, SplitMix};

/// Generators up to this many unknowns are handled densely by `Method::Auto`.
pub const DENSE_LIMIT: usize = 1500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Auto,
    Dense,
    Krylov,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrylovOptions {
    /// Propagation time per Arnoldi product.
    pub horizon: f64,
    pub arnoldi: ArnoldiOptions,
    pub seed: u64,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions {
            horizon: 2.0,
            // Rayleigh quotient iteration supplies the accuracy, Arnoldi only the start
            arnoldi: ArnoldiOptions { dim: 24, wanted: 4, max_restarts: 20, tol: 1e-6 },
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Abscissa {
    pub abscissa: f64,
    /// Eigenvalue attaining the abscissa.
    pub eigenvalue: Complex64,
    pub method: Method,
    /// |A x - lambda x| / |x| for the Krylov path; 0 for dense.
    pub residual: f64,
    /// Eigenvector (Krylov path only), unit 2-norm.
    pub eigenvector: Option<Vec<Complex64>>,
}

pub fn spectral_abscissa(gen: &Generator, method: Method) -> Result<Abscissa> {
    let n = gen.matrix.dim();
    match method {
        Method::Dense => dense_abscissa(&gen.matrix),
        Method::Krylov => krylov_abscissa(&gen.matrix, &KrylovOptions::default()),
        Method::Auto if n <= DENSE_LIMIT => dense_abscissa(&gen.matrix),
        Method::Auto => krylov_abscissa(&gen.matrix, &KrylovOptions::default()),
    }
}

/// Full spectrum of a small generator.
pub fn spectrum(a: &CsrMatrix) -> Result<Vec<Complex64>> {
    eigenvalues(a.to_dense())
}

pub fn dense_abscissa(a: &CsrMatrix) -> Result<Abscissa> {
    let ev = spectrum(a)?;
    let top = ev
        .iter()
        .copied()
        .max_by(|x, y| x.re.partial_cmp(&y.re).unwrap_or(core::cmp::Ordering::Equal))
        .ok_or_else(|| Error::Eigen("empty generator".into()))?;
    Ok(Abscissa { abscissa: top.re, eigenvalue: top, method: Method::Dense, residual: 0.0, eigenvector: None })
}

fn rk4_propagate(a: &CsrMatrix, x: &[Complex64], y: &mut [Complex64], dt: f64, steps: usize, work: &mut [Vec<Complex64>; 5]) {
    let n = x.len();
    let [u, k, acc, tmp, _] = work;
    u.copy_from_slice(x);
    for _ in 0..steps {
        // acc = u + dt/6 (k1 + 2k2 + 2k3 + k4), stages formed in place
        acc.copy_from_slice(u);
        a.matvec(u, k);
        for i in 0..n {
            acc[i] += k[i] * (dt / 6.0);
            tmp[i] = u[i] + k[i] * (0.5 * dt);
        }
        a.matvec(tmp, k);
        for i in 0..n {
            acc[i] += k[i] * (dt / 3.0);
            tmp[i] = u[i] + k[i] * (0.5 * dt);
        }
        a.matvec(tmp, k);
        for i in 0..n {
            acc[i] += k[i] * (dt / 3.0);
            tmp[i] = u[i] + k[i] * dt;
        }
        a.matvec(tmp, k);
        for i in 0..n {
            u[i] = acc[i] + k[i] * (dt / 6.0);
        }
    }
    y.copy_from_slice(u);
}

fn rayleigh(a: &CsrMatrix, x: &[Complex64]) -> Complex64 {
    dot(x, &a.apply(x)) / dot(x, x)
}

fn residual(a: &CsrMatrix, x: &[Complex64], lambda: Complex64) -> f64 {
    let ax = a.apply(x);
    let r: Vec<Complex64> = ax.iter().zip(x).map(|(p, q)| p - q * lambda).collect();
    norm2(&r) / norm2(x)
}

/// Rayleigh quotient iteration from (lambda, x). Returns the refined pair and
/// its residual.
fn polish(a: &CsrMatrix, mut lambda: Complex64, mut x: Vec<Complex64>) -> (Complex64, Vec<Complex64>, f64) {
    let scale = a.inf_norm().max(1.0);
    for _ in 0..8 {
        // nudge off the exact eigenvalue so the factorization stays regular
        let lu = BandedLu::factor(a, lambda + Complex64::new(1e-13 * scale, 0.0));
        x = lu.solve(&x);
        let nrm = norm2(&x);
        if !(nrm > 0.0) || !nrm.is_finite() {
            break;
        }
        x.iter_mut().for_each(|z| *z /= nrm);
        let next = rayleigh(a, &x);
        let done = (next - lambda).norm() <= 1e-13 * (1.0 + lambda.norm());
        lambda = next;
        if done {
            break;
        }
    }
    let r = residual(a, &x, lambda);
    (lambda, x, r)
}

pub fn krylov_abscissa(a: &CsrMatrix, opts: &KrylovOptions) -> Result<Abscissa> {
    let n = a.dim();
    let norm = a.inf_norm();
    if !(norm > 0.0) {
        return Ok(Abscissa { abscissa: 0.0, eigenvalue: Complex64::zero(), method: Method::Krylov, residual: 0.0, eigenvector: None });
    }
    // the RK4 stability region contains the closed left half-disc of radius
    // 2.5, and |lambda| <= |A|_inf, so no decaying mode is amplified
    let dt0 = 2.5 / norm;
    let steps = (opts.horizon / dt0).ceil().max(1.0) as usize;
    let dt = opts.horizon / steps as f64;
    let mut work: [Vec<Complex64>; 5] = core::array::from_fn(|_| vec![Complex64::zero(); n]);
    let op = |x: &[Complex64], y: &mut [Complex64]| rk4_propagate(a, x, y, dt, steps, &mut work);
    let start = SplitMix(opts.seed).complex_vec(n);
    let ritz = dominant_ritz(op, start, opts.arnoldi)?;
    let mut best: Option<(Complex64, Vec<Complex64>, f64)> = None;
    for p in ritz {
        let lambda0 = rayleigh(a, &p.vector);
        let (lambda, x, r) = polish(a, lambda0, p.vector);
        if !lambda.re.is_finite() {
            continue;
        }
        if best.as_ref().map_or(true, |b| lambda.re > b.0.re) {
            best = Some((lambda, x, r));
        }
    }
    let (lambda, x, r) = best.ok_or_else(|| Error::Eigen("no Ritz value could be refined".into()))?;
    Ok(Abscissa { abscissa: lambda.re, eigenvalue: lambda, method: Method::Krylov, residual: r, eigenvector: Some(x) })
}

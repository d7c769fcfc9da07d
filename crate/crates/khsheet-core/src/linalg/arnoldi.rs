//! Restarted Arnoldi for the eigenvalues of largest modulus of an operator that
//! is only available through products.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::dense::{eigenvector, hessenberg_eigenvalues, DenseMatrix};
use super::{axpy, dot, norm2, scale};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArnoldiOptions {
    /// Krylov dimension per cycle.
    pub dim: usize,
    /// How many leading Ritz pairs to return and to combine in the restart.
    pub wanted: usize,
    pub max_restarts: usize,
    /// Relative residual |h_{m+1,m} y_m| / |theta| accepted for the leading pair.
    pub tol: f64,
}

impl Default for ArnoldiOptions {
    fn default() -> Self {
        ArnoldiOptions { dim: 24, wanted: 3, max_restarts: 30, tol: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RitzPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
}

/// Returns up to `opts.wanted` Ritz pairs ordered by decreasing modulus.
pub fn dominant_ritz<F>(mut op: F, start: Vec<Complex64>, opts: ArnoldiOptions) -> Result<Vec<RitzPair>>
where
    F: FnMut(&[Complex64], &mut [Complex64]),
{
    let n = start.len();
    if n == 0 {
        return Err(Error::argument("empty start vector"));
    }
    let m = opts.dim.min(n).max(1);
    let mut v0 = start;
    let mut best: Vec<RitzPair> = Vec::new();
    for _cycle in 0..=opts.max_restarts {
        let nrm = norm2(&v0);
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::Eigen("degenerate Krylov start vector".into()));
        }
        scale(Complex64::new(1.0 / nrm, 0.0), &mut v0);
        let mut basis: Vec<Vec<Complex64>> = vec![v0.clone()];
        let mut h = DenseMatrix::zeros(m + 1);
        let mut w = vec![Complex64::zero(); n];
        let mut k_done = m;
        for k in 0..m {
            op(&basis[k], &mut w);
            let w0 = norm2(&w);
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for (i, q) in basis.iter().enumerate() {
                    let c = dot(q, &w);
                    h[(i, k)] += c;
                    axpy(-c, q, &mut w);
                }
            }
            let beta = norm2(&w);
            h[(k + 1, k)] = Complex64::new(beta, 0.0);
            if beta <= 1e-13 * w0 {
                k_done = k + 1;
                break;
            }
            let mut q = w.clone();
            scale(Complex64::new(1.0 / beta, 0.0), &mut q);
            basis.push(q);
        }
        let mut hk = DenseMatrix::zeros(k_done);
        for i in 0..k_done {
            for j in 0..k_done {
                hk[(i, j)] = h[(i, j)];
            }
        }
        let beta = if k_done < m || k_done == n { 0.0 } else { h[(k_done, k_done - 1)].re };
        let mut vals = hessenberg_eigenvalues(hk.clone())?;
        vals.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
        best.clear();
        for &theta in vals.iter().take(opts.wanted) {
            let y = eigenvector(&hk, theta);
            let mut x = vec![Complex64::zero(); n];
            for (j, q) in basis.iter().take(k_done).enumerate() {
                axpy(y[j], q, &mut x);
            }
            let residual = beta * y[k_done - 1].norm() / theta.norm().max(f64::MIN_POSITIVE);
            best.push(RitzPair { value: theta, vector: x, residual });
        }
        if best.first().map_or(true, |p| p.residual <= opts.tol) {
            return Ok(best);
        }
        // restart from the sum of the wanted Ritz vectors
        v0 = vec![Complex64::zero(); n];
        for p in &best {
            axpy(Complex64::new(1.0, 0.0), &p.vector, &mut v0);
        }
    }
    Ok(best)
}

//! Small dense complex matrices: LU solves and a Hessenberg QR eigenvalue solver.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Square, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![Complex64::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Exactly zero pivots are replaced by a tiny multiple of the matrix scale,
/// which is what inverse iteration wants.
pub fn solve(mut a: DenseMatrix, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = a.n;
    let scale = a.data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().partial_cmp(&a[(j, k)].norm()).unwrap()).unwrap();
        if p != k {
            for j in 0..n {
                a.data.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        if a[(k, k)].norm() < f64::EPSILON * scale {
            a[(k, k)] = Complex64::new(f64::EPSILON * scale, 0.0);
        }
        let piv = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[(k, j)] * b[j];
        }
        b[k] = s / a[(k, k)];
    }
    b
}

/// Householder reduction to upper Hessenberg form, in place.
pub fn hessenberg(a: &mut DenseMatrix) {
    let n = a.n;
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::zero(); n];
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] -= alpha;
        let vn = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for i in k + 1..n {
            v[i] /= vn;
        }
        // left: rows k+1.., columns k..
        for j in k..n {
            let mut s = Complex64::zero();
            for i in k + 1..n {
                s += v[i].conj() * a[(i, j)];
            }
            s *= 2.0;
            for i in k + 1..n {
                a[(i, j)] -= v[i] * s;
            }
        }
        // right: all rows, columns k+1..
        for i in 0..n {
            let mut s = Complex64::zero();
            for j in k + 1..n {
                s += a[(i, j)] * v[j];
            }
            s *= 2.0;
            for j in k + 1..n {
                a[(i, j)] -= s * v[j].conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::zero();
        }
    }
}

/// All eigenvalues of a general complex matrix.
pub fn eigenvalues(mut a: DenseMatrix) -> Result<Vec<Complex64>> {
    hessenberg(&mut a);
    hessenberg_eigenvalues(a)
}

/// Single-shift QR on an upper Hessenberg matrix, Wilkinson shifts, deflating
/// from the bottom. Only the active block is updated since the eigenvectors
/// are not needed.
pub fn hessenberg_eigenvalues(mut h: DenseMatrix) -> Result<Vec<Complex64>> {
    let n = h.n;
    let mut eig = vec![Complex64::zero(); n];
    if n == 0 {
        return Ok(eig);
    }
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut rot: Vec<(f64, Complex64)> = vec![(0.0, Complex64::zero()); n];
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let off = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if off <= eps * diag || off < f64::MIN_POSITIVE {
                h[(l, l - 1)] = Complex64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 60 * n.max(10) {
            return Err(Error::Eigen(format!("QR iteration did not converge ({} eigenvalues left)", hi + 1)));
        }
        let a = h[(hi - 1, hi - 1)];
        let b = h[(hi - 1, hi)];
        let c = h[(hi, hi - 1)];
        let d = h[(hi, hi)];
        let mut mu = if iter % 11 == 10 {
            // exceptional shift
            d + Complex64::new(0.75 * c.norm(), 0.5 * c.norm())
        } else {
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let m1 = (a + d) * 0.5 + disc;
            let m2 = (a + d) * 0.5 - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        if !mu.re.is_finite() || !mu.im.is_finite() {
            mu = d;
        }
        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        for k in l..hi {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if r == 0.0 {
                (1.0, Complex64::zero())
            } else if x.norm() == 0.0 {
                (0.0, Complex64::new(1.0, 0.0))
            } else {
                let cs = x.norm() / r;
                (cs, (x / x.norm()) * y.conj() / r)
            };
            rot[k] = (cs, sn);
            for j in k..=hi {
                let p = h[(k, j)];
                let q = h[(k + 1, j)];
                h[(k, j)] = p * cs + sn * q;
                h[(k + 1, j)] = -sn.conj() * p + q * cs;
            }
        }
        for k in l..hi {
            let (cs, sn) = rot[k];
            let top = (k + 2).min(hi);
            for i in l..=top {
                let p = h[(i, k)];
                let q = h[(i, k + 1)];
                h[(i, k)] = p * cs + q * sn.conj();
                h[(i, k + 1)] = -p * sn + q * cs;
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(eig)
}

/// Eigenvector of `a` for the approximate eigenvalue `lambda` by two steps of
/// inverse iteration with a slightly perturbed shift.
pub fn eigenvector(a: &DenseMatrix, lambda: Complex64) -> Vec<Complex64> {
    let n = a.n;
    let scale = a.data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let shift = lambda + Complex64::new(1e-10 * scale, 1e-10 * scale);
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] -= shift;
    }
    let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0, 0.1 * i as f64)).collect();
    for _ in 0..3 {
        x = solve(m.clone(), x);
        let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in x.iter_mut() {
            *z /= nrm;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    #[test]
    fn triangular_eigenvalues() {
        let mut a = DenseMatrix::zeros(3);
        a[(0, 0)] = c(1.0, 0.0);
        a[(0, 2)] = c(5.0, 1.0);
        a[(1, 1)] = c(-2.0, 3.0);
        a[(2, 2)] = c(0.5, 0.0);
        let mut e = eigenvalues(a).unwrap();
        e.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!((e[0] - c(-2.0, 3.0)).norm() < 1e-14);
        assert!((e[1] - c(0.5, 0.0)).norm() < 1e-14);
        assert!((e[2] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_matrix_eigenvalues() {
        let mut a = DenseMatrix::zeros(2);
        a[(0, 1)] = c(-1.0, 0.0);
        a[(1, 0)] = c(1.0, 0.0);
        let mut e = eigenvalues(a).unwrap();
        e.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((e[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((e[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    /// Similarity transform of a known diagonal.
    #[test]
    fn random_similarity() {
        let n = 40;
        let mut seed = 7u64;
        let diag: Vec<Complex64> = (0..n).map(|i| c(i as f64 * 0.37 - 3.0, (i as f64).sin())).collect();
        let mut s = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = c(lcg(&mut seed), lcg(&mut seed));
            }
            s[(i, i)] += c(4.0, 0.0);
        }
        // a = s diag s^{-1}: solve columns of s^{-1}
        let mut sinv = DenseMatrix::zeros(n);
        for j in 0..n {
            let mut e = vec![Complex64::zero(); n];
            e[j] = c(1.0, 0.0);
            let col = solve(s.clone(), e);
            for i in 0..n {
                sinv[(i, j)] = col[i];
            }
        }
        let mut a = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::zero();
                for k in 0..n {
                    acc += s[(i, k)] * diag[k] * sinv[(k, j)];
                }
                a[(i, j)] = acc;
            }
        }
        let e = eigenvalues(a).unwrap();
        for d in &diag {
            let best = e.iter().map(|z| (z - d).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "{d} missed by {best}");
        }
    }

    #[test]
    fn solve_and_eigenvector() {
        let mut a = DenseMatrix::zeros(3);
        a[(0, 0)] = c(2.0, 0.0);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 1)] = c(3.0, 0.0);
        a[(2, 2)] = c(-1.0, 1.0);
        a[(2, 0)] = c(0.5, 0.0);
        let x = solve(a.clone(), vec![c(3.0, 0.0), c(3.0, 0.0), c(0.5, 0.0)]);
        let ax = a.matvec(&x);
        assert!((ax[0] - c(3.0, 0.0)).norm() < 1e-14 && (ax[2] - c(0.5, 0.0)).norm() < 1e-14);
        let v = eigenvector(&a, c(3.0, 0.0));
        let av = a.matvec(&v);
        let res: f64 = av.iter().zip(&v).map(|(p, q)| (p - q * 3.0).norm_sqr()).sum::<f64>().sqrt();
        assert!(res < 1e-8);
    }
}

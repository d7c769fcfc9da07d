//! Banded LU with partial pivoting, column-major band storage as in LINPACK.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use super::sparse::CsrMatrix;

pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    ab: Vec<Complex64>,
    ipiv: Vec<usize>,
    /// Pivots that had to be nudged off zero.
    pub perturbed: usize,
}

impl BandedLu {
    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        j * self.ld + self.kl + self.ku + i - j
    }

    /// Factors `a - shift I`.
    pub fn factor(a: &CsrMatrix, shift: Complex64) -> Self {
        let n = a.dim();
        let (kl, ku) = a.bandwidth();
        let ld = 2 * kl + ku + 1;
        let mut lu = BandedLu { n, kl, ku, ld, ab: vec![Complex64::zero(); ld * n], ipiv: vec![0; n], perturbed: 0 };
        for i in 0..n {
            for (j, v) in a.row(i) {
                let k = lu.at(i, j);
                lu.ab[k] = v;
            }
            let k = lu.at(i, i);
            lu.ab[k] -= shift;
        }
        let tiny = f64::EPSILON * a.inf_norm().max(shift.norm()).max(f64::MIN_POSITIVE);
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut p = 0;
            let mut best = -1.0;
            for i in 0..=km {
                let v = lu.ab[lu.at(j + i, j)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.ipiv[j] = j + p;
            if best < tiny {
                let k = lu.at(j + p, j);
                lu.ab[k] = Complex64::new(tiny, 0.0);
                lu.perturbed += 1;
            }
            ju = ju.max((j + ku + p).min(n - 1));
            if p != 0 {
                for col in j..=ju {
                    let (x, y) = (lu.at(j, col), lu.at(j + p, col));
                    lu.ab.swap(x, y);
                }
            }
            let piv = lu.ab[lu.at(j, j)];
            let inv = Complex64::new(1.0, 0.0) / piv;
            let base = lu.at(j, j);
            for i in 1..=km {
                lu.ab[base + i] *= inv;
            }
            for col in j + 1..=ju {
                let t = lu.ab[lu.at(j, col)];
                if t.is_zero() {
                    continue;
                }
                let cb = lu.at(j, col);
                for i in 1..=km {
                    let l = lu.ab[base + i];
                    lu.ab[cb + i] -= l * t;
                }
            }
        }
        lu
    }

    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.n;
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(j, p);
            }
            let km = self.kl.min(n - 1 - j);
            let bj = b[j];
            if bj.is_zero() {
                continue;
            }
            let base = self.at(j, j);
            for i in 1..=km {
                b[j + i] -= self.ab[base + i] * bj;
            }
        }
        let w = self.kl + self.ku;
        for j in (0..n).rev() {
            b[j] /= self.ab[self.at(j, j)];
            let bj = b[j];
            let lo = j.saturating_sub(w);
            for i in lo..j {
                b[i] -= self.ab[self.at(i, j)] * bj;
            }
        }
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

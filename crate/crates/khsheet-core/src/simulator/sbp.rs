//! Diagonal-norm summation-by-parts first derivative, fourth order in the
//! interior with second-order boundary closures.

use alloc::vec::Vec;

const NORM: [f64; 4] = [17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0];

const CLOSURE: [&[f64]; 4] = [
    &[-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0],
    &[-1.0 / 2.0, 0.0, 1.0 / 2.0],
    &[4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0],
    &[3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0],
];

const INTERIOR: [f64; 5] = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];

/// Quadrature weight of node `i` out of `n` (spacing `dx`).
pub fn norm_weight(i: usize, n: usize, dx: f64) -> f64 {
    let k = i.min(n - 1 - i);
    dx * if k < 4 { NORM[k] } else { 1.0 }
}

/// Nonzeros (column, value) of row `i` of D on `n` nodes with spacing `dx`.
pub fn derivative_row(i: usize, n: usize, dx: f64) -> Vec<(usize, f64)> {
    debug_assert!(n >= 8);
    let mut out = Vec::with_capacity(6);
    if i < 4 {
        for (k, &a) in CLOSURE[i].iter().enumerate() {
            if a != 0.0 {
                out.push((k, a / dx));
            }
        }
    } else if i >= n - 4 {
        // mirror of the left closure with a sign flip
        let m = n - 1 - i;
        for (k, &a) in CLOSURE[m].iter().enumerate() {
            if a != 0.0 {
                out.push((n - 1 - k, -a / dx));
            }
        }
    } else {
        for (k, &a) in INTERIOR.iter().enumerate() {
            if a != 0.0 {
                out.push((i + k - 2, a / dx));
            }
        }
    }
    out
}

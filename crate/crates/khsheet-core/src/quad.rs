//! One-dimensional quadrature by successive interval halving.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Change between the last two refinement levels.
    pub error: f64,
    pub evaluations: usize,
}

const START_INTERVALS: usize = 16;
const MAX_LEVEL: usize = 22;

/// Trapezoid rule on [a, b], halving the step until two successive levels
/// agree to `rtol` (relative) or `atol` (absolute). At least three halvings
/// are always done so that a coarse grid landing on zeros of the integrand
/// is not mistaken for convergence.
pub fn trapezoid<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rtol: f64, atol: f64) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut n = START_INTERVALS;
    let mut h = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n {
        sum += f(a + h * i as f64);
    }
    let mut evals = n + 1;
    let mut t = sum * h;
    for level in 1..=MAX_LEVEL {
        let mut mid = 0.0;
        for i in 0..n {
            mid += f(a + h * (i as f64 + 0.5));
        }
        evals += n;
        sum += mid;
        n *= 2;
        h *= 0.5;
        let next = sum * h;
        let change = (next - t).abs();
        t = next;
        if level >= 3 && (change <= rtol * next.abs() || change <= atol) {
            return Ok(QuadResult { value: next, error: change, evaluations: evals });
        }
    }
    Err(Error::Quadrature { estimate: t, change: f64::NAN })
}

/// Romberg extrapolation of the halving trapezoid sequence. The error is the
/// difference between the last two diagonal entries.
pub fn romberg<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rtol: f64, atol: f64) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut n = START_INTERVALS;
    let mut h = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n {
        sum += f(a + h * i as f64);
    }
    let mut evals = n + 1;
    let mut prev: Vec<f64> = alloc::vec![sum * h];
    for level in 1..=MAX_LEVEL {
        let mut mid = 0.0;
        for i in 0..n {
            mid += f(a + h * (i as f64 + 0.5));
        }
        evals += n;
        sum += mid;
        n *= 2;
        h *= 0.5;
        let mut row = Vec::with_capacity(level + 1);
        row.push(sum * h);
        let mut p4 = 1.0;
        for k in 1..=level {
            p4 *= 4.0;
            let r = row[k - 1] + (row[k - 1] - prev[k - 1]) / (p4 - 1.0);
            row.push(r);
        }
        let value = row[level];
        let change = (value - prev[level - 1]).abs();
        if level >= 3 && (change <= rtol * value.abs() || change <= atol) {
            return Ok(QuadResult { value, error: change, evaluations: evals });
        }
        prev = row;
    }
    Err(Error::Quadrature { estimate: prev[prev.len() - 1], change: f64::NAN })
}

/// Romberg for a vector-valued integrand, starting from `start` intervals.
/// `f(x, out)` fills `out` (length `dim`); every component must meet `rtol`
/// relative to itself or `atol`. Returns values and the largest change
/// relative to max(|value|, atol/rtol).
pub fn romberg_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    (a, b): (f64, f64),
    start: usize,
    rtol: f64,
    atol: f64,
) -> Result<(Vec<f64>, f64)> {
    if start == 0 {
        return Err(Error::argument("quadrature needs at least one interval"));
    }
    if a == b {
        return Ok((alloc::vec![0.0; dim], 0.0));
    }
    let mut buf = alloc::vec![0.0; dim];
    let mut n = start;
    let mut h = (b - a) / n as f64;
    let mut sum = alloc::vec![0.0; dim];
    f(a, &mut buf);
    sum.iter_mut().zip(&buf).for_each(|(s, v)| *s += 0.5 * v);
    f(b, &mut buf);
    sum.iter_mut().zip(&buf).for_each(|(s, v)| *s += 0.5 * v);
    for i in 1..n {
        f(a + h * i as f64, &mut buf);
        sum.iter_mut().zip(&buf).for_each(|(s, v)| *s += v);
    }
    // prev[c][k]: Romberg row of component c
    let mut prev: Vec<Vec<f64>> = sum.iter().map(|s| alloc::vec![s * h]).collect();
    for level in 1..=MAX_LEVEL {
        for i in 0..n {
            f(a + h * (i as f64 + 0.5), &mut buf);
            sum.iter_mut().zip(&buf).for_each(|(s, v)| *s += v);
        }
        n *= 2;
        h *= 0.5;
        let mut worst: f64 = 0.0;
        let mut done = level >= 3;
        for (c, p) in prev.iter_mut().enumerate() {
            let mut row = Vec::with_capacity(level + 1);
            row.push(sum[c] * h);
            let mut p4 = 1.0;
            for k in 1..=level {
                p4 *= 4.0;
                let r = row[k - 1] + (row[k - 1] - p[k - 1]) / (p4 - 1.0);
                row.push(r);
            }
            let change = (row[level] - p[level - 1]).abs();
            let scale = row[level].abs();
            if change > rtol * scale && change > atol {
                done = false;
            }
            let reference = if rtol > 0.0 { scale.max(atol / rtol) } else { scale };
            if reference > 0.0 {
                worst = worst.max(change / reference);
            }
            *p = row;
        }
        if done {
            return Ok((prev.iter().map(|p| p[level]).collect(), worst));
        }
    }
    Err(Error::Quadrature { estimate: prev.first().and_then(|p| p.last().copied()).unwrap_or(f64::NAN), change: f64::NAN })
}

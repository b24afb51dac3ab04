//! Bessel functions `J_0`, `J_1` and their positive zeros.

use crate::{Error, Result};

/// `J_ν(x)` for `ν ∈ {0, 1}`, `x ≥ 0`.
pub fn bessel_j(nu: usize, x: f64) -> Result<f64> {
    if nu > 1 {
        return Err(Error::InvalidParameter(format!("Bessel order {nu} is not supported")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("Bessel argument {x} must be finite and nonnegative")));
    }
    Ok(if x < 1.0 { series(nu, x) } else { miller(nu, x) })
}

fn series(nu: usize, x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = if nu == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for m in 1..60 {
        term *= -y / (m as f64 * (m + nu) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Backward recurrence normalized by `J_0 + 2 Σ J_{2k} = 1`.
fn miller(nu: usize, x: f64) -> f64 {
    let start = (x + 20.0 + 10.0 * x.sqrt()) as usize;
    let start = start + start % 2;
    let (mut next, mut cur) = (0.0_f64, 1e-30_f64);
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds J_{k-1}
        let order = k - 1;
        if order == nu {
            wanted = cur;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    wanted / norm
}

const SCAN_STEP: f64 = 0.05;

/// The `k`-th positive zero of `J_ν`, `ν ∈ {0, 1}`, `k ≥ 1`.
pub fn bessel_zero(nu: usize, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("zero index starts at 1".into()));
    }
    let f = |x: f64| bessel_j(nu, x).unwrap_or(f64::NAN);
    let mut a = SCAN_STEP;
    let mut fa = f(a);
    let mut found = 0;
    loop {
        let b = a + SCAN_STEP;
        let fb = f(b);
        if fa.signum() != fb.signum() {
            found += 1;
            if found == k {
                let (mut lo, mut hi, mut flo) = (a, b, fa);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let fm = f(mid);
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(0.5 * (lo + hi));
            }
        }
        a = b;
        fa = fb;
    }
}

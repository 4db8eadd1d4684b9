//! Bessel functions of the first kind, integer order.
//!
//! Values come from Miller's backward recurrence
//! `J_{k-1}(x) = (2k/x) J_k(x) - J_{k+1}(x)` started well above both the
//! order and the argument, normalised with `J_0 + 2 sum_k J_{2k} = 1`.
//! Backward recurrence is stable for every order below the start index,
//! so one pass yields the whole ladder `J_0 .. J_nmax`.

use crate::error::{Error, Result};

pub const BESSEL_MAX_ORDER: i32 = 200;
pub const BESSEL_MAX_ARG: f64 = 500.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

fn check_range(n: i32, x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > BESSEL_MAX_ARG || n.unsigned_abs() > BESSEL_MAX_ORDER as u32 {
        return Err(Error::BesselOutOfRange { n, x });
    }
    Ok(())
}

/// Start index for the backward recurrence: even and far enough past the
/// transition region `k ~ x` that the neglected tail is below rounding.
fn start_index(nmax: usize, x: f64) -> usize {
    let top = (nmax as f64).max(x);
    let m = (top + 15.0 * x.cbrt() + 30.0).ceil() as usize;
    m + (m % 2)
}

/// `J_0(x) ..= J_nmax(x)` for `x > 0`.
fn ladder(nmax: usize, x: f64) -> Vec<f64> {
    let m = start_index(nmax, x);
    let mut out = vec![0.0; nmax + 1];
    let two_over_x = 2.0 / x;

    let mut j_next = 0.0; // J_{k+1}
    let mut j_cur = 1e-300; // J_k, arbitrary seed at k = m
    let mut norm = 0.0;
    if m <= nmax {
        out[m] = j_cur;
    }
    for k in (1..=m).rev() {
        let j_prev = k as f64 * two_over_x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        let idx = k - 1;
        if idx <= nmax {
            out[idx] = j_cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * j_cur;
        }
        if j_cur.abs() > RESCALE_ABOVE {
            j_cur *= RESCALE_BY;
            j_next *= RESCALE_BY;
            norm *= RESCALE_BY;
            for v in out.iter_mut().skip(idx) {
                *v *= RESCALE_BY;
            }
        }
    }
    norm += j_cur;
    for v in &mut out {
        *v /= norm;
    }
    out
}

/// `J_n(x)` for `|n| <= 200`, `|x| <= 500`.
pub fn bessel_j(n: i32, x: f64) -> Result<f64> {
    check_range(n, x)?;
    let order = n.unsigned_abs() as usize;
    // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x)
    let mut sign = 1.0;
    if n < 0 && order % 2 == 1 {
        sign = -sign;
    }
    if x < 0.0 && order % 2 == 1 {
        sign = -sign;
    }
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    Ok(sign * ladder(order, ax)[order])
}

/// `J_0(x) ..= J_nmax(x)` in one recurrence pass.
pub fn bessel_j_orders(nmax: usize, x: f64) -> Result<Vec<f64>> {
    check_range(nmax.min(i32::MAX as usize) as i32, x)?;
    if x == 0.0 {
        let mut v = vec![0.0; nmax + 1];
        v[0] = 1.0;
        return Ok(v);
    }
    let mut v = ladder(nmax, x.abs());
    if x < 0.0 {
        for (k, val) in v.iter_mut().enumerate() {
            if k % 2 == 1 {
                *val = -*val;
            }
        }
    }
    Ok(v)
}

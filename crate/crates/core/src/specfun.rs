//! Bessel functions of the first kind (J0, J1) and modified Bessel functions
//! of the first kind (I0, I1) for real arguments.
//!
//! Three regimes are used for J:
//!
//! * `|x| < 8`: the defining power series. The largest term is O(10^2) so the
//!   alternating sum loses at most two digits.
//! * `8 <= |x| < 30`: Miller's backward recurrence normalised with
//!   `J0 + 2 (J2 + J4 + ...) = 1`.
//! * `|x| >= 30`: Hankel's asymptotic expansion, truncated at its smallest
//!   term (relative error below `exp(-2|x|)`).
//!
//! I0 and I1 use the power series (all terms positive, no cancellation) up to
//! `|x| = 30` and the large-argument asymptotic expansion beyond.

use std::f64::consts::PI;

use crate::error::{BkmError, Result};

const SERIES_LIMIT_J: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 30.0;

fn check_finite(function: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(BkmError::Domain {
            function,
            argument: x,
        })
    }
}

/// Bessel function of the first kind of order zero.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_finite("J0", x)?;
    Ok(j0(x))
}

/// Bessel function of the first kind of order one.
pub fn bessel_j1(x: f64) -> Result<f64> {
    check_finite("J1", x)?;
    Ok(j1(x))
}

/// Modified Bessel function of the first kind of order zero.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check_finite("I0", x)?;
    Ok(i0(x))
}

/// Modified Bessel function of the first kind of order one.
pub fn bessel_i1(x: f64) -> Result<f64> {
    check_finite("I1", x)?;
    Ok(i1(x))
}

/// Unchecked J0. Returns NaN for non-finite input.
pub(crate) fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT_J {
        j_series(0, ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller_j01(ax).0
    } else {
        hankel_asymptotic(0, ax)
    }
}

/// Unchecked J1. Returns NaN for non-finite input.
pub(crate) fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT_J {
        j_series(1, ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller_j01(ax).1
    } else {
        hankel_asymptotic(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J1(x) / x`, continuous at zero with limit 1/2.
pub(crate) fn j1_over_x(x: f64) -> f64 {
    if x.abs() < SERIES_LIMIT_J {
        // sum_k (-1)^k (x/2)^{2k} / (2 k! (k+1)!)
        let q = 0.25 * x * x;
        let mut term = 0.5;
        let mut sum = term;
        for k in 1..200 {
            let kf = k as f64;
            term *= -q / (kf * (kf + 1.0));
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        j1(x) / x
    }
}

/// Unchecked I0. Returns NaN for non-finite input.
pub(crate) fn i0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= ASYMPTOTIC_LIMIT {
        i_series(0, ax)
    } else {
        i_asymptotic(0, ax)
    }
}

/// Unchecked I1. Returns NaN for non-finite input.
pub(crate) fn i1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= ASYMPTOTIC_LIMIT {
        i_series(1, ax)
    } else {
        i_asymptotic(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `I1(x) / x`, continuous at zero with limit 1/2.
pub(crate) fn i1_over_x(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let q = 0.25 * x * x;
        let mut term = 0.5;
        let mut sum = term;
        for k in 1..200 {
            let kf = k as f64;
            term *= q / (kf * (kf + 1.0));
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        sum
    } else {
        i1(x) / x
    }
}

/// Power series of J_n for n in {0, 1}, x >= 0.
fn j_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    let n = order as f64;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (kf + n));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Power series of I_n for n in {0, 1}, x >= 0.
fn i_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    let n = order as f64;
    for k in 1..400 {
        let kf = k as f64;
        term *= q / (kf * (kf + n));
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence for (J0(x), J1(x)), x > 0.
fn miller_j01(x: f64) -> (f64, f64) {
    let start = x + 12.0 * x.cbrt() + 30.0;
    let mut m = start.ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=m).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
        let order = k - 1;
        if order == 1 {
            j1 = cur;
        } else if order > 0 && order % 2 == 0 {
            norm += 2.0 * cur;
        }
    }
    let j0 = cur;
    norm += j0;
    (j0 / norm, j1 / norm)
}

/// Coefficients a_k(nu) of the Hankel expansions:
/// a_k = prod_{i=1..k} (4 nu^2 - (2i - 1)^2) / (k! 8^k).
fn hankel_coefficient_ratio(order: u32, k: usize) -> f64 {
    let mu = 4.0 * (order as f64).powi(2);
    let odd = (2 * k - 1) as f64;
    (mu - odd * odd) / (k as f64 * 8.0)
}

/// Hankel's asymptotic expansion of J_n, n in {0, 1}, x >= 30.
fn hankel_asymptotic(order: u32, x: f64) -> f64 {
    // J_n(x) ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
    // P = sum (-1)^k a_{2k} / x^{2k}, Q = sum (-1)^k a_{2k+1} / x^{2k+1}.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..100 {
        let next = term * hankel_coefficient_ratio(order, k) / x;
        if next.abs() >= last || next.abs() < 1e-17 {
            break;
        }
        last = next.abs();
        term = next;
        // k odd contributes to Q, k even to P, with sign (-1)^{floor(k/2)}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
    }
    let chi = x - (0.5 * order as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Large-argument expansion of I_n, n in {0, 1}, x > 30.
fn i_asymptotic(order: u32, x: f64) -> f64 {
    // I_n(x) ~ e^x / sqrt(2 pi x) sum (-1)^k a_k / x^k
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..100 {
        let next = -term * hankel_coefficient_ratio(order, k) / x;
        if next.abs() >= last || next.abs() < 1e-17 {
            break;
        }
        last = next.abs();
        term = next;
        sum += term;
    }
    x.exp() / (2.0 * PI * x).sqrt() * sum
}

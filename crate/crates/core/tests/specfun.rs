use std::f64::consts::PI;

use bkm::specfun::{bessel_i0, bessel_i1, bessel_j0, bessel_j1};
use bkm::BkmError;

/// Equispaced rule over one period; spectrally accurate for the smooth
/// periodic integrands of the Bessel integral representations.
fn periodic_mean(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    (0..n)
        .map(|k| f(2.0 * PI * k as f64 / n as f64))
        .sum::<f64>()
        / n as f64
}

fn j0_integral(x: f64) -> f64 {
    periodic_mean(512, |t| (x * t.sin()).cos())
}

fn j1_integral(x: f64) -> f64 {
    periodic_mean(512, |t| (t - x * t.sin()).cos())
}

fn i0_integral(x: f64) -> f64 {
    periodic_mean(512, |t| (x * t.cos()).exp())
}

fn i1_integral(x: f64) -> f64 {
    periodic_mean(512, |t| (x * t.cos()).exp() * t.cos())
}

/// `sum_k s^k (x/2)^(2k+n) / (k! (k+n)!)` with `s = -1` for J and `+1` for I.
fn power_series(x: f64, n: i32, sign: f64) -> f64 {
    let h = x / 2.0;
    let mut term = h.powi(n) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= sign * h * h / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

#[test]
fn exact_values_at_zero() {
    assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
    assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
    assert_eq!(bessel_j1(0.0).unwrap(), 0.0);
    assert_eq!(bessel_i1(0.0).unwrap(), 0.0);
}

#[test]
fn j0_and_j1_match_integral_representation_up_to_50() {
    for x in grid(-50.0, 50.0, 1001) {
        let (j0, j1) = (bessel_j0(x).unwrap(), bessel_j1(x).unwrap());
        assert!((j0 - j0_integral(x)).abs() <= 1e-10, "J0({x})");
        assert!((j1 - j1_integral(x)).abs() <= 1e-10, "J1({x})");
    }
}

#[test]
fn i0_and_i1_match_integral_representation_up_to_30() {
    for x in grid(-30.0, 30.0, 601) {
        let (i0, i1) = (bessel_i0(x).unwrap(), bessel_i1(x).unwrap());
        let (e0, e1) = (i0_integral(x), i1_integral(x));
        assert!((i0 - e0).abs() <= 1e-10 * e0.abs().max(1.0), "I0({x})");
        assert!((i1 - e1).abs() <= 1e-10 * e1.abs().max(1.0), "I1({x})");
    }
}

#[test]
fn tabulated_points_against_power_series() {
    let cases = [
        (
            bessel_j0(1.0).unwrap(),
            power_series(1.0, 0, -1.0),
            0.7651976865579666,
        ),
        (
            bessel_j1(1.0).unwrap(),
            power_series(1.0, 1, -1.0),
            0.4400505857449335,
        ),
        (
            bessel_i0(1.0).unwrap(),
            power_series(1.0, 0, 1.0),
            1.2660658777520084,
        ),
        (
            bessel_i0(2.0).unwrap(),
            power_series(2.0, 0, 1.0),
            2.2795853023360673,
        ),
        (
            bessel_i1(1.0).unwrap(),
            power_series(1.0, 1, 1.0),
            0.5651591039924851,
        ),
    ];
    for (value, series, expected) in cases {
        assert!((series - expected).abs() <= 1e-14);
        assert!((value - series).abs() <= 1e-10);
    }
}

#[test]
fn first_zero_of_j0() {
    // bisection on the series oracle
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if power_series(lo, 0, -1.0) * power_series(mid, 0, -1.0) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    assert!((root - 2.404825557695773).abs() < 1e-12);
    assert!(bessel_j0(root).unwrap().abs() <= 1e-9);
    assert!(bessel_j0(2.404825557695773).unwrap().abs() <= 1e-9);
}

#[test]
fn derivative_identities() {
    let h = 1e-5;
    let d = |f: fn(f64) -> Result<f64, BkmError>, x: f64| {
        (f(x + h).unwrap() - f(x - h).unwrap()) / (2.0 * h)
    };
    assert!((d(bessel_j0, 1.3) + bessel_j1(1.3).unwrap()).abs() <= 1e-8);
    assert!((d(bessel_i0, 0.7) - bessel_i1(0.7).unwrap()).abs() <= 1e-8);
    for x in grid(0.1, 10.0, 100) {
        assert!(
            (d(bessel_j0, x) + bessel_j1(x).unwrap()).abs() <= 1e-7,
            "x = {x}"
        );
        let scale = bessel_i1(x).unwrap().max(1.0);
        assert!(
            (d(bessel_i0, x) - bessel_i1(x).unwrap()).abs() <= 1e-7 * scale,
            "x = {x}"
        );
    }
}

#[test]
fn bessel_ode_residuals() {
    // fourth-order stencils; a wide step keeps rounding noise out of y''
    let h = 1e-2;
    let residual = |f: fn(f64) -> Result<f64, BkmError>, x: f64, n: f64, sign: f64| {
        let y = |k: f64| f(x + k * h).unwrap();
        let d1 = (-y(2.0) + 8.0 * y(1.0) - 8.0 * y(-1.0) + y(-2.0)) / (12.0 * h);
        let d2 =
            (-y(2.0) + 16.0 * y(1.0) - 30.0 * y(0.0) + 16.0 * y(-1.0) - y(-2.0)) / (12.0 * h * h);
        let y = y(0.0);
        x * x * d2 + x * d1 + (sign * x * x - n * n) * y
    };
    for x in grid(0.5, 10.0, 40) {
        assert!(residual(bessel_j0, x, 0.0, 1.0).abs() <= 1e-5, "J0 at {x}");
        assert!(residual(bessel_j1, x, 1.0, 1.0).abs() <= 1e-5, "J1 at {x}");
    }
    // modified functions grow like e^x, so the residual is taken relative to y
    for x in grid(0.5, 10.0, 40) {
        let r0 = residual(bessel_i0, x, 0.0, -1.0) / bessel_i0(x).unwrap();
        let r1 = residual(bessel_i1, x, 1.0, -1.0) / bessel_i1(x).unwrap();
        assert!(r0.abs() <= 1e-5, "I0 at {x}");
        assert!(r1.abs() <= 1e-5, "I1 at {x}");
    }
}

#[test]
fn non_finite_arguments_are_rejected() {
    for f in [bessel_j0, bessel_j1, bessel_i0, bessel_i1] {
        for x in [f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
            assert!(matches!(f(x), Err(BkmError::Domain { .. })));
        }
    }
}

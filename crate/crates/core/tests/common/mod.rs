//! Finite-difference operators shared by the integration tests.
#![allow(dead_code)]

use bkm::geometry::{Point2, Point3};

/// Second-order five-point Laplacian.
pub fn laplacian2(f: &dyn Fn(Point2) -> f64, p: Point2, h: f64) -> f64 {
    let at = |dx: f64, dy: f64| f(Point2::new(p.x + dx, p.y + dy));
    (at(h, 0.0) + at(-h, 0.0) + at(0.0, h) + at(0.0, -h) - 4.0 * at(0.0, 0.0)) / (h * h)
}

/// Fourth-order Laplacian from five-point second differences along each axis.
pub fn laplacian2_4th(f: &dyn Fn(Point2) -> f64, p: Point2, h: f64) -> f64 {
    let at = |dx: f64, dy: f64| f(Point2::new(p.x + dx, p.y + dy));
    let d2 = |g: &dyn Fn(f64) -> f64| {
        (-g(2.0 * h) + 16.0 * g(h) - 30.0 * g(0.0) + 16.0 * g(-h) - g(-2.0 * h)) / (12.0 * h * h)
    };
    d2(&|s| at(s, 0.0)) + d2(&|s| at(0.0, s))
}

/// Bilaplacian as the fourth-order Laplacian applied twice.
pub fn bilaplacian2(f: &dyn Fn(Point2) -> f64, p: Point2, h: f64) -> f64 {
    let inner = |q: Point2| laplacian2_4th(f, q, h);
    laplacian2_4th(&inner, p, h)
}

pub fn gradient2(f: &dyn Fn(Point2) -> f64, p: Point2, h: f64) -> (f64, f64) {
    let at = |dx: f64, dy: f64| f(Point2::new(p.x + dx, p.y + dy));
    (
        (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h),
        (at(0.0, h) - at(0.0, -h)) / (2.0 * h),
    )
}

/// Second-order seven-point Laplacian.
pub fn laplacian3(f: &dyn Fn(Point3) -> f64, p: Point3, h: f64) -> f64 {
    let at = |dx: f64, dy: f64, dz: f64| f(Point3::new(p.x + dx, p.y + dy, p.z + dz));
    (at(h, 0.0, 0.0)
        + at(-h, 0.0, 0.0)
        + at(0.0, h, 0.0)
        + at(0.0, -h, 0.0)
        + at(0.0, 0.0, h)
        + at(0.0, 0.0, -h)
        - 6.0 * at(0.0, 0.0, 0.0))
        / (h * h)
}

/// Fourth-order accurate Laplacian in 3D.
pub fn laplacian3_4th(f: &dyn Fn(Point3) -> f64, p: Point3, h: f64) -> f64 {
    let at = |dx: f64, dy: f64, dz: f64| f(Point3::new(p.x + dx, p.y + dy, p.z + dz));
    let d2 = |g: &dyn Fn(f64) -> f64| {
        (-g(2.0 * h) + 16.0 * g(h) - 30.0 * g(0.0) + 16.0 * g(-h) - g(-2.0 * h)) / (12.0 * h * h)
    };
    d2(&|s| at(s, 0.0, 0.0)) + d2(&|s| at(0.0, s, 0.0)) + d2(&|s| at(0.0, 0.0, s))
}

pub fn bilaplacian3(f: &dyn Fn(Point3) -> f64, p: Point3, h: f64) -> f64 {
    let inner = |q: Point3| laplacian3_4th(f, q, h);
    laplacian3_4th(&inner, p, h)
}

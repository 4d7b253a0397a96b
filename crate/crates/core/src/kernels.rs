//! Nonsingular general solutions used as boundary basis functions.
//!
//! Every kernel here is finite at `r = 0`; removable singularities such as
//! `sin(lambda r) / r` switch to their Taylor expansion for `lambda r < 1e-6`.

use serde::{Deserialize, Serialize};

use crate::error::{BkmError, Result};
use crate::geometry::Point2;
use crate::specfun;

const SMALL_ARGUMENT: f64 = 1e-6;

/// `J0(lambda r)`, solves `(Laplacian + lambda^2) u = 0` in 2D.
pub fn helmholtz2d(r: f64, lambda: f64) -> f64 {
    specfun::j0(lambda * r)
}

/// Gradient of `J0(lambda |x - x_k|)` with respect to the response point `x`.
pub fn helmholtz2d_gradient(response: Point2, source: Point2, lambda: f64) -> (f64, f64) {
    let (dx, dy) = response.delta(source);
    let r = dx.hypot(dy);
    // d/dx J0(lambda r) = -lambda J1(lambda r) dx / r = -lambda^2 [J1(z)/z] dx
    let g = -lambda * lambda * specfun::j1_over_x(lambda * r);
    (g * dx, g * dy)
}

/// Directional derivative of `J0(lambda |x - x_k|)` along the unit vector `normal`
/// at the response point.
pub fn helmholtz2d_normal_derivative(
    response: Point2,
    source: Point2,
    normal: (f64, f64),
    lambda: f64,
) -> f64 {
    let (gx, gy) = helmholtz2d_gradient(response, source, lambda);
    gx * normal.0 + gy * normal.1
}

/// `I0(lambda r)`, solves `(Laplacian - lambda^2) u = 0` in 2D.
pub fn modified_helmholtz2d(r: f64, lambda: f64) -> f64 {
    specfun::i0(lambda * r)
}

/// Gradient of `I0(lambda |x - x_k|)` with respect to the response point.
pub fn modified_helmholtz2d_gradient(response: Point2, source: Point2, lambda: f64) -> (f64, f64) {
    let (dx, dy) = response.delta(source);
    let r = dx.hypot(dy);
    let g = lambda * lambda * specfun::i1_over_x(lambda * r);
    (g * dx, g * dy)
}

/// `sin(lambda r) / r`, solves `(Laplacian + lambda^2) u = 0` in 3D. Equals
/// `lambda` at `r = 0`.
pub fn helmholtz3d(r: f64, lambda: f64) -> f64 {
    let z = lambda * r;
    if z.abs() < SMALL_ARGUMENT {
        lambda * (1.0 - z * z / 6.0)
    } else {
        z.sin() / r
    }
}

/// `sinh(lambda r) / r`, solves `(Laplacian - lambda^2) u = 0` in 3D. Equals
/// `lambda` at `r = 0`.
pub fn modified_helmholtz3d(r: f64, lambda: f64) -> f64 {
    let z = lambda * r;
    if z.abs() < SMALL_ARGUMENT {
        lambda * (1.0 + z * z / 6.0)
    } else {
        z.sinh() / r
    }
}

/// `(J0(lambda r), I0(lambda r))`. Both components satisfy
/// `Laplacian^2 w = lambda^4 w` in 2D.
pub fn biharmonic2d_basis(r: f64, lambda: f64) -> (f64, f64) {
    (helmholtz2d(r, lambda), modified_helmholtz2d(r, lambda))
}

/// `(sin(lambda r) / r, sinh(lambda r) / r)`. Both components satisfy
/// `Laplacian^2 w = lambda^4 w` in 3D.
pub fn biharmonic3d_basis(r: f64, lambda: f64) -> (f64, f64) {
    (helmholtz3d(r, lambda), modified_helmholtz3d(r, lambda))
}

/// `exp(-k (t - t_k)) sin(r) / r`, a nonsingular solution of
/// `Laplacian u = (1/k) du/dt` in 3D.
pub fn heat3d(r: f64, t: f64, t_k: f64, k: f64) -> f64 {
    (-k * (t - t_k)).exp() * helmholtz3d(r, 1.0)
}

/// `[a1 cos(c (t - t_k)) + (a2 / c) sin(c (t - t_k))] sin(r) / r`, a
/// nonsingular solution of `Laplacian u = (1/c^2) d^2u/dt^2` in 3D.
pub fn wave3d(r: f64, t: f64, t_k: f64, c: f64, a1: f64, a2: f64) -> f64 {
    let phase = c * (t - t_k);
    (a1 * phase.cos() + a2 / c * phase.sin()) * helmholtz3d(r, 1.0)
}

/// `I0(sqrt(2) r / |x_response|)`: the response-dependent general solution of
/// `Laplacian u - (2 / x^2) u = 0`.
pub fn varying_helmholtz2d(response: Point2, source: Point2) -> Result<f64> {
    ResponseKernel::default().evaluate(response, source)
}

/// General solutions whose parameter is taken from the response point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResponseKernel {
    /// `I0(sqrt(coefficient) r / |x_i|)` for `Laplacian u - (coefficient / x^2) u = 0`.
    InverseSquareX { coefficient: f64 },
}

impl Default for ResponseKernel {
    fn default() -> Self {
        Self::InverseSquareX { coefficient: 2.0 }
    }
}

impl ResponseKernel {
    /// The wavenumber the kernel uses when `response` is the collocation point.
    pub fn wavenumber_at(&self, response: Point2) -> Result<f64> {
        match *self {
            Self::InverseSquareX { coefficient } => {
                if response.x == 0.0 {
                    return Err(BkmError::SingularParameter {
                        x: response.x,
                        y: response.y,
                    });
                }
                Ok(coefficient.sqrt() / response.x.abs())
            }
        }
    }

    pub fn evaluate(&self, response: Point2, source: Point2) -> Result<f64> {
        let lambda = self.wavenumber_at(response)?;
        let v = specfun::i0(lambda * response.distance(source));
        if !v.is_finite() {
            // the parameter is large enough near x = 0 to overflow the kernel
            return Err(BkmError::SingularParameter {
                x: response.x,
                y: response.y,
            });
        }
        Ok(v)
    }

    /// The kernel as a function of a field point `p`, with the parameter frozen
    /// at the value belonging to `response`.
    pub fn evaluate_frozen(&self, response: Point2, source: Point2, p: Point2) -> Result<f64> {
        let lambda = self.wavenumber_at(response)?;
        Ok(specfun::i0(lambda * p.distance(source)))
    }
}

/// Kernels with a single fixed wavenumber, symmetric in their two points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RadialKernel {
    /// `J0(lambda r)`.
    Helmholtz { wavenumber: f64 },
    /// `I0(lambda r)`.
    ModifiedHelmholtz { wavenumber: f64 },
}

impl RadialKernel {
    pub fn evaluate(&self, response: Point2, source: Point2) -> f64 {
        let r = response.distance(source);
        match *self {
            Self::Helmholtz { wavenumber } => helmholtz2d(r, wavenumber),
            Self::ModifiedHelmholtz { wavenumber } => modified_helmholtz2d(r, wavenumber),
        }
    }

    pub fn gradient(&self, response: Point2, source: Point2) -> (f64, f64) {
        match *self {
            Self::Helmholtz { wavenumber } => helmholtz2d_gradient(response, source, wavenumber),
            Self::ModifiedHelmholtz { wavenumber } => {
                modified_helmholtz2d_gradient(response, source, wavenumber)
            }
        }
    }

    pub fn normal_derivative(&self, response: Point2, source: Point2, normal: (f64, f64)) -> f64 {
        let (gx, gy) = self.gradient(response, source);
        gx * normal.0 + gy * normal.1
    }
}

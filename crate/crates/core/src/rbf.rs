//! Radial function pairs for the reverse particular-solution scheme.
//!
//! A pair fixes the approximate particular solution `phi_hat(r)` first and
//! derives the interpolation basis as its image under the 2D operator
//! `Laplacian + 1`:
//!
//! ```text
//! phi(r) = phi_hat''(r) + phi_hat'(r) / r + phi_hat(r)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{BkmError, Result};

/// Radial basis pair `(phi_hat, phi)` with `(Laplacian + 1) phi_hat = phi` in 2D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RbfPair {
    /// `phi_hat = (r^2 + c^2)^{3/2}`.
    Multiquadric { c: f64 },
    /// `phi_hat = r^3`, the linear-like comparison basis.
    Cubic,
    /// `phi_hat = r^4 ln r`, the thin-plate-like comparison basis.
    QuarticThinPlate,
}

impl RbfPair {
    pub fn multiquadric(c: f64) -> Result<Self> {
        check_shape(c)?;
        Ok(Self::Multiquadric { c })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Multiquadric { .. } => "multiquadric",
            Self::Cubic => "cubic",
            Self::QuarticThinPlate => "quartic-tps",
        }
    }

    /// Approximate particular solution `phi_hat(r)`.
    pub fn particular(&self, r: f64) -> f64 {
        match *self {
            Self::Multiquadric { c } => {
                let s = r * r + c * c;
                s * s.sqrt()
            }
            Self::Cubic => r * r * r,
            Self::QuarticThinPlate => {
                if r == 0.0 {
                    0.0
                } else {
                    r.powi(4) * r.ln()
                }
            }
        }
    }

    /// Forcing function `phi(r) = (Laplacian + 1) phi_hat`.
    pub fn forcing(&self, r: f64) -> f64 {
        match *self {
            Self::Multiquadric { c } => {
                let s = r * r + c * c;
                let root = s.sqrt();
                6.0 * root + 3.0 * r * r / root + s * root
            }
            Self::Cubic => 9.0 * r + r * r * r,
            Self::QuarticThinPlate => {
                if r == 0.0 {
                    0.0
                } else {
                    let r2 = r * r;
                    let ln = r.ln();
                    16.0 * r2 * ln + 8.0 * r2 + r2 * r2 * ln
                }
            }
        }
    }

    /// `d phi_hat / dr`.
    pub fn particular_radial_derivative(&self, r: f64) -> f64 {
        r * self.gradient_factor(r)
    }

    /// `phi_hat'(r) / r`, finite at `r = 0`.
    fn gradient_factor(&self, r: f64) -> f64 {
        match *self {
            Self::Multiquadric { c } => 3.0 * (r * r + c * c).sqrt(),
            Self::Cubic => 3.0 * r,
            Self::QuarticThinPlate => {
                if r == 0.0 {
                    0.0
                } else {
                    r * r * (4.0 * r.ln() + 1.0)
                }
            }
        }
    }

    /// Gradient of `phi_hat(|d|)` with respect to the field point, where
    /// `d = (dx, dy)` is the field point minus the centre.
    pub fn particular_gradient(&self, dx: f64, dy: f64) -> (f64, f64) {
        let g = self.gradient_factor(dx.hypot(dy));
        (g * dx, g * dy)
    }
}

fn check_shape(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(BkmError::InvalidArgument(format!(
            "shape parameter must be positive and finite, got {c}"
        )))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(BkmError::InvalidArgument(format!(
            "radius must be non-negative and finite, got {r}"
        )))
    }
}

/// `(r^2 + c^2)^{3/2}`.
pub fn mq_particular(r: f64, c: f64) -> Result<f64> {
    check_radius(r)?;
    check_shape(c)?;
    Ok(RbfPair::Multiquadric { c }.particular(r))
}

/// `6 sqrt(r^2 + c^2) + 3 r^2 / sqrt(r^2 + c^2) + (r^2 + c^2)^{3/2}`.
pub fn mq_forcing(r: f64, c: f64) -> Result<f64> {
    check_radius(r)?;
    check_shape(c)?;
    Ok(RbfPair::Multiquadric { c }.forcing(r))
}

/// `3 sqrt(r^2 + c^2) (dx, dy)`.
pub fn mq_particular_gradient(dx: f64, dy: f64, c: f64) -> Result<(f64, f64)> {
    check_shape(c)?;
    Ok(RbfPair::Multiquadric { c }.particular_gradient(dx, dy))
}

/// The non-multiquadric comparison pairs.
pub fn alt_rbf_pairs() -> Vec<RbfPair> {
    vec![RbfPair::Cubic, RbfPair::QuarticThinPlate]
}

/// Coefficients of the linear tail `x * x_coef + y * y_coef + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PolyTail {
    pub x: f64,
    pub y: f64,
    pub constant: f64,
}

impl PolyTail {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.x * x + self.y * y + self.constant
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.constant]
    }
}

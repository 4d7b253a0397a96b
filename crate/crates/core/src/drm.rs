//! Dual-reciprocity interpolation of a nodal right-hand side and evaluation of
//! the particular solution it induces.
//!
//! The right-hand side is interpolated as
//! `sum_j alpha_j phi(|x - x_j|) + a x + b y + d` subject to the moment
//! conditions `sum alpha_j = sum alpha_j x_j = sum alpha_j y_j = 0`.
//! Because the linear tail is annihilated by the Laplacian, it is its own
//! particular solution under `Laplacian + 1`, so
//! `u_p = sum_j alpha_j phi_hat(|x - x_j|) + a x + b y + d`.

use crate::error::{BkmError, Result};
use crate::geometry::{Knot, Point2};
use crate::linalg::{lu_solve, DenseMatrix};
use crate::rbf::{PolyTail, RbfPair};

/// Number of linear tail terms in 2D.
pub const TAIL_LEN: usize = 3;

/// A fitted interpolant: RBF coefficients followed by the tail `(x, y, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrmInterpolant {
    centers: Vec<Point2>,
    rbf: RbfPair,
    alpha: Vec<f64>,
}

fn check_distinct(points: &[Point2]) -> Result<()> {
    for i in 0..points.len() {
        for j in 0..i {
            if points[i].distance(points[j]) <= 1e-12 {
                return Err(BkmError::InvalidArgument(format!(
                    "knots {j} and {i} coincide at ({}, {})",
                    points[i].x, points[i].y
                )));
            }
        }
    }
    Ok(())
}

/// The block matrix `[[Phi, P], [P^T, 0]]` with `Phi_ij = phi(|x_i - x_j|)`
/// and `P_i = (x_i, y_i, 1)`.
pub fn build_interpolation_matrix(knots: &[Knot], rbf: &RbfPair) -> Result<DenseMatrix> {
    let points: Vec<Point2> = knots.iter().map(|k| k.position).collect();
    interpolation_matrix_for_points(&points, rbf)
}

pub(crate) fn interpolation_matrix_for_points(
    points: &[Point2],
    rbf: &RbfPair,
) -> Result<DenseMatrix> {
    if points.is_empty() {
        return Err(BkmError::InvalidArgument("no interpolation knots".into()));
    }
    check_distinct(points)?;
    let m = points.len();
    let mut a = DenseMatrix::zeros(m + TAIL_LEN, m + TAIL_LEN);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = rbf.forcing(points[i].distance(points[j]));
        }
        let tail = [points[i].x, points[i].y, 1.0];
        for (t, v) in tail.into_iter().enumerate() {
            a[(i, m + t)] = v;
            a[(m + t, i)] = v;
        }
    }
    Ok(a)
}

/// Interpolate `rhs_values` given at `knots`.
pub fn fit(knots: &[Knot], rbf: RbfPair, rhs_values: &[f64]) -> Result<DrmInterpolant> {
    let points: Vec<Point2> = knots.iter().map(|k| k.position).collect();
    DrmInterpolant::fit_points(points, rbf, rhs_values)
}

impl DrmInterpolant {
    pub fn fit_points(points: Vec<Point2>, rbf: RbfPair, rhs_values: &[f64]) -> Result<Self> {
        if rhs_values.len() != points.len() {
            return Err(BkmError::InvalidArgument(format!(
                "{} right-hand side values for {} knots",
                rhs_values.len(),
                points.len()
            )));
        }
        let a = interpolation_matrix_for_points(&points, &rbf)?;
        let mut b = rhs_values.to_vec();
        b.extend([0.0; TAIL_LEN]);
        let alpha = lu_solve(&a, &b)?;
        Ok(Self {
            centers: points,
            rbf,
            alpha,
        })
    }

    /// Build an interpolant from already known coefficients (`M + 3` values).
    pub fn from_coefficients(centers: Vec<Point2>, rbf: RbfPair, alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() != centers.len() + TAIL_LEN {
            return Err(BkmError::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                centers.len() + TAIL_LEN,
                alpha.len()
            )));
        }
        Ok(Self {
            centers,
            rbf,
            alpha,
        })
    }

    /// The identically zero interpolant over `centers`.
    pub fn zero(centers: Vec<Point2>, rbf: RbfPair) -> Self {
        let alpha = vec![0.0; centers.len() + TAIL_LEN];
        Self {
            centers,
            rbf,
            alpha,
        }
    }

    pub fn centers(&self) -> &[Point2] {
        &self.centers
    }

    pub fn rbf(&self) -> &RbfPair {
        &self.rbf
    }

    /// All coefficients, RBF part first.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn rbf_coefficients(&self) -> &[f64] {
        &self.alpha[..self.centers.len()]
    }

    pub fn tail(&self) -> PolyTail {
        let m = self.centers.len();
        PolyTail {
            x: self.alpha[m],
            y: self.alpha[m + 1],
            constant: self.alpha[m + 2],
        }
    }

    /// The interpolated right-hand side at `p`.
    pub fn eval_forcing(&self, p: Point2) -> f64 {
        let s: f64 = self
            .centers
            .iter()
            .zip(&self.alpha)
            .map(|(c, a)| a * self.rbf.forcing(p.distance(*c)))
            .sum();
        s + self.tail().eval(p.x, p.y)
    }

    /// Particular solution `u_p(p)`.
    pub fn eval_particular(&self, p: Point2) -> f64 {
        let s: f64 = self
            .centers
            .iter()
            .zip(&self.alpha)
            .map(|(c, a)| a * self.rbf.particular(p.distance(*c)))
            .sum();
        s + self.tail().eval(p.x, p.y)
    }

    /// Gradient of the particular solution at `p`.
    pub fn eval_particular_gradient(&self, p: Point2) -> (f64, f64) {
        let tail = self.tail();
        let mut gx = tail.x;
        let mut gy = tail.y;
        for (c, a) in self.centers.iter().zip(&self.alpha) {
            let (dx, dy) = p.delta(*c);
            let (px, py) = self.rbf.particular_gradient(dx, dy);
            gx += a * px;
            gy += a * py;
        }
        (gx, gy)
    }

    /// `d u_p / dn` at `p` along the unit vector `normal`.
    pub fn eval_particular_normal_derivative(&self, p: Point2, normal: (f64, f64)) -> f64 {
        let (gx, gy) = self.eval_particular_gradient(p);
        gx * normal.0 + gy * normal.1
    }
}

/// `u_p(p)` for a fitted interpolant.
pub fn eval_particular(interp: &DrmInterpolant, p: Point2) -> f64 {
    interp.eval_particular(p)
}

/// `d u_p / dn` at `p`.
pub fn eval_particular_normal_derivative(
    interp: &DrmInterpolant,
    p: Point2,
    normal: (f64, f64),
) -> f64 {
    interp.eval_particular_normal_derivative(p, normal)
}

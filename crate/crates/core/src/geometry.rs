//! Points, knots and the elliptical test domain.

use std::f64::consts::TAU;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{BkmError, Result};

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Components of `self - other`.
    pub fn delta(self, other: Point2) -> (f64, f64) {
        (self.x - other.x, self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// A point in space, used by the three-dimensional kernels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(self, other: Point3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Role a knot plays in the collocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnotRole {
    Boundary,
    Interior,
}

/// A collocation point. Boundary knots carry their unit outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot {
    pub position: Point2,
    pub role: KnotRole,
    pub normal: Option<(f64, f64)>,
}

impl Knot {
    pub fn boundary(position: Point2, normal: (f64, f64)) -> Self {
        Self {
            position,
            role: KnotRole::Boundary,
            normal: Some(normal),
        }
    }

    pub fn interior(position: Point2) -> Self {
        Self {
            position,
            role: KnotRole::Interior,
            normal: None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        self.role == KnotRole::Boundary
    }
}

/// Axis-aligned ellipse `(x - cx)^2 / a^2 + (y - cy)^2 / b^2 <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseDomain {
    pub center: Point2,
    /// Semi-major axis (along x).
    pub a: f64,
    /// Semi-minor axis (along y).
    pub b: f64,
}

impl EllipseDomain {
    pub fn new(center: Point2, a: f64, b: f64) -> Result<Self> {
        if !(center.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(BkmError::InvalidArgument(
                "ellipse parameters must be finite".into(),
            ));
        }
        if !(b > 0.0 && a >= b) {
            return Err(BkmError::InvalidArgument(format!(
                "ellipse axes must satisfy a >= b > 0, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { center, a, b })
    }

    /// The 2 x 1 ellipse centred at the origin used by most benchmarks.
    pub fn standard() -> Self {
        Self {
            center: Point2::new(0.0, 0.0),
            a: 2.0,
            b: 1.0,
        }
    }

    /// Value of the implicit form `(x-cx)^2/a^2 + (y-cy)^2/b^2`; 1 on the boundary.
    pub fn quadratic_form(&self, p: Point2) -> f64 {
        let u = (p.x - self.center.x) / self.a;
        let v = (p.y - self.center.y) / self.b;
        u * u + v * v
    }

    /// Gradient of the implicit form at `p`.
    pub fn implicit_gradient(&self, p: Point2) -> (f64, f64) {
        (
            2.0 * (p.x - self.center.x) / (self.a * self.a),
            2.0 * (p.y - self.center.y) / (self.b * self.b),
        )
    }

    /// Point at parametric angle `t`.
    pub fn point_at(&self, t: f64) -> Point2 {
        Point2::new(
            self.center.x + self.a * t.cos(),
            self.center.y + self.b * t.sin(),
        )
    }

    /// Unit outward normal at parametric angle `t`.
    pub fn normal_at(&self, t: f64) -> (f64, f64) {
        let (nx, ny) = (self.b * t.cos(), self.a * t.sin());
        let len = nx.hypot(ny);
        (nx / len, ny / len)
    }

    /// Unit outward normal at a point on (or near) the boundary.
    pub fn normal_at_point(&self, p: Point2) -> (f64, f64) {
        let (gx, gy) = self.implicit_gradient(p);
        let len = gx.hypot(gy);
        (gx / len, gy / len)
    }

    pub fn contains_strictly(&self, p: Point2) -> bool {
        self.quadratic_form(p) < 1.0 - 1e-9
    }
}

/// `n` boundary knots equally spaced in parametric angle, starting at `t = 0`.
pub fn boundary_knots(domain: &EllipseDomain, n: usize) -> Result<Vec<Knot>> {
    if n < 3 {
        return Err(BkmError::InvalidArgument(format!(
            "at least 3 boundary knots are required, got {n}"
        )));
    }
    Ok((0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            Knot::boundary(domain.point_at(t), domain.normal_at(t))
        })
        .collect())
}

/// A ring of interior knots on the ellipse scaled by `scale` about its centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    pub scale: f64,
    pub count: usize,
}

/// Placement of interior knots: explicit points followed by concentric rings.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InteriorLayout {
    #[serde(default)]
    pub points: Vec<Point2>,
    #[serde(default)]
    pub rings: Vec<Ring>,
}

impl InteriorLayout {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn explicit(points: Vec<Point2>) -> Self {
        Self {
            points,
            rings: Vec::new(),
        }
    }

    pub fn ring(scale: f64, count: usize) -> Self {
        Self {
            points: Vec::new(),
            rings: vec![Ring { scale, count }],
        }
    }

    pub fn with_ring(mut self, scale: f64, count: usize) -> Self {
        self.rings.push(Ring { scale, count });
        self
    }

    pub fn extend(&mut self, other: InteriorLayout) {
        self.points.extend(other.points);
        self.rings.extend(other.rings);
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.rings.iter().all(|r| r.count == 0)
    }

    /// Number of knots this layout produces.
    pub fn len(&self) -> usize {
        self.points.len() + self.rings.iter().map(|r| r.count).sum::<usize>()
    }
}

/// Interior knots for `layout`, validated to lie strictly inside `domain`
/// with no two closer than 1e-9.
pub fn interior_knots(domain: &EllipseDomain, layout: &InteriorLayout) -> Result<Vec<Knot>> {
    let mut points: Vec<Point2> = layout.points.clone();
    for ring in &layout.rings {
        if !(ring.scale > 0.0 && ring.scale < 1.0) {
            return Err(BkmError::InvalidArgument(format!(
                "ring scale must lie in (0, 1), got {}",
                ring.scale
            )));
        }
        for k in 0..ring.count {
            let t = TAU * k as f64 / ring.count as f64;
            points.push(Point2::new(
                domain.center.x + ring.scale * domain.a * t.cos(),
                domain.center.y + ring.scale * domain.b * t.sin(),
            ));
        }
    }
    for (i, p) in points.iter().enumerate() {
        if !p.is_finite() || !domain.contains_strictly(*p) {
            return Err(BkmError::InvalidArgument(format!(
                "interior knot ({}, {}) is not strictly inside the domain",
                p.x, p.y
            )));
        }
        if let Some(q) = points[..i].iter().find(|q| q.distance(*p) <= 1e-9) {
            return Err(BkmError::InvalidArgument(format!(
                "duplicate interior knot at ({}, {})",
                q.x, q.y
            )));
        }
    }
    Ok(points.into_iter().map(Knot::interior).collect())
}

#[derive(Debug, Serialize, Deserialize)]
struct KnotRecord {
    x: f64,
    y: f64,
    role: KnotRole,
    nx: Option<f64>,
    ny: Option<f64>,
}

/// Write knots as CSV with columns `x, y, role, nx, ny`.
pub fn write_knots_csv<W: Write>(writer: W, knots: &[Knot]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for k in knots {
        w.serialize(KnotRecord {
            x: k.position.x,
            y: k.position.y,
            role: k.role,
            nx: k.normal.map(|n| n.0),
            ny: k.normal.map(|n| n.1),
        })
        .map_err(|e| BkmError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| BkmError::Io(e.to_string()))
}

/// Read knots written by [`write_knots_csv`].
pub fn read_knots_csv<R: Read>(reader: R) -> Result<Vec<Knot>> {
    let mut r = csv::Reader::from_reader(reader);
    let mut knots = Vec::new();
    for (line, record) in r.deserialize::<KnotRecord>().enumerate() {
        let rec = record.map_err(|e| BkmError::Io(e.to_string()))?;
        let position = Point2::new(rec.x, rec.y);
        let knot = match (rec.role, rec.nx, rec.ny) {
            (KnotRole::Boundary, Some(nx), Some(ny)) => {
                let len = nx.hypot(ny);
                if (len - 1.0).abs() > 1e-9 {
                    return Err(BkmError::Io(format!(
                        "record {}: boundary normal is not unit length",
                        line + 1
                    )));
                }
                Knot::boundary(position, (nx, ny))
            }
            (KnotRole::Boundary, _, _) => {
                return Err(BkmError::Io(format!(
                    "record {}: boundary knot without a normal",
                    line + 1
                )))
            }
            (KnotRole::Interior, _, _) => Knot::interior(position),
        };
        knots.push(knot);
    }
    Ok(knots)
}

//! The five elliptical-domain benchmarks, their exact solutions and the
//! published reference values they are compared against.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{BkmError, Result};
use crate::geometry::{EllipseDomain, InteriorLayout, Point2};
use crate::kernels::ResponseKernel;
use crate::rbf::RbfPair;
use crate::solver::{field, solve, FirstOrderOperator, OperatorMode, ProblemSpec};

/// Identifies one of the built-in benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseId {
    Helmholtz,
    Laplace,
    ConvectionX,
    ConvectionXy,
    VaryingHelmholtz,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [
        CaseId::Helmholtz,
        CaseId::Laplace,
        CaseId::ConvectionX,
        CaseId::ConvectionXy,
        CaseId::VaryingHelmholtz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Helmholtz => "helmholtz",
            CaseId::Laplace => "laplace",
            CaseId::ConvectionX => "convection-x",
            CaseId::ConvectionXy => "convection-xy",
            CaseId::VaryingHelmholtz => "varying-helmholtz",
        }
    }

    pub fn from_name(name: &str) -> Option<CaseId> {
        CaseId::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn case(self) -> BenchmarkCase {
        match self {
            CaseId::Helmholtz => case_helmholtz(),
            CaseId::Laplace => case_laplace(),
            CaseId::ConvectionX => case_convection_x(),
            CaseId::ConvectionXy => case_convection_xy(),
            CaseId::VaryingHelmholtz => case_varying_helmholtz(),
        }
    }
}

/// The governing equation of a benchmark, as data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GoverningPde {
    /// `Laplacian u + wavenumber^2 u = 0`.
    Helmholtz { wavenumber: f64 },
    /// `Laplacian u = 0`.
    Laplace,
    /// `Laplacian u + dx du/dx + dy du/dy = 0`.
    Convection { dx: f64, dy: f64 },
    /// `Laplacian u - (coefficient / x^2) u = 0`.
    InverseSquareX { coefficient: f64 },
}

/// Whether the published BKM and competitor columns are values or relative errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    Value,
    RelativeError,
}

/// One published table row.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRow {
    pub point: Point2,
    /// Tabulated exact value (3 decimals), absent when only errors are published.
    pub exact: Option<f64>,
    /// Competitor method (BEM or DRBEM); `None` where the table has no entry.
    pub competitor: Option<f64>,
    /// BKM results keyed by total knot count.
    pub bkm: Vec<(usize, f64)>,
}

/// Error norm an acceptance threshold applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    MaxAbs,
    AvgRel,
}

/// Pass/fail threshold for one benchmark configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Criterion {
    pub metric: Metric,
    pub threshold: f64,
}

impl Criterion {
    pub fn value(&self, result: &CaseResult) -> f64 {
        match self.metric {
            Metric::MaxAbs => result.max_abs_error,
            Metric::AvgRel => result.avg_rel_error,
        }
    }

    pub fn passes(&self, result: &CaseResult) -> bool {
        self.value(result) <= self.threshold
    }
}

/// A ready-to-run benchmark.
#[derive(Debug, Clone)]
pub struct BenchmarkCase {
    pub id: CaseId,
    pub description: &'static str,
    /// Where the reference values come from.
    pub reference_table: &'static str,
    pub competitor_label: &'static str,
    pub reference_kind: ReferenceKind,
    pub domain: EllipseDomain,
    pub pde: GoverningPde,
    pub exact: fn(Point2) -> f64,
    /// Default multiquadric shape parameter; `None` when no DRM part is used.
    pub shape_parameter: Option<f64>,
    pub default_boundary_knots: usize,
    pub default_interior: InteriorLayout,
    pub rows: Vec<ReferenceRow>,
}

fn row(
    x: f64,
    y: f64,
    exact: Option<f64>,
    competitor: Option<f64>,
    bkm: &[(usize, f64)],
) -> ReferenceRow {
    ReferenceRow {
        point: Point2::new(x, y),
        exact,
        competitor,
        bkm: bkm.to_vec(),
    }
}

/// The eight evaluation points shared by the convection benchmarks, also
/// used as their interior knots.
fn convection_points() -> Vec<Point2> {
    [
        (1.5, 0.0),
        (1.2, -0.35),
        (0.0, -0.45),
        (-0.6, -0.45),
        (-1.5, 0.0),
        (0.3, 0.0),
        (-0.3, 0.0),
        (0.0, 0.0),
    ]
    .into_iter()
    .map(Point2::from)
    .collect()
}

/// Eight tabulated points plus a ring of three to reach eleven interior knots.
pub fn convection_interior_11() -> InteriorLayout {
    InteriorLayout::explicit(convection_points()).with_ring(0.5, 3)
}

/// The eight tabulated points as interior knots.
pub fn convection_interior_8() -> InteriorLayout {
    InteriorLayout::explicit(convection_points())
}

/// `(Laplacian + 1) u = 0` with `u = sin x` on the boundary.
pub fn case_helmholtz() -> BenchmarkCase {
    // reference table 1: exact, DRBEM(33), BKM(7), BKM(11)
    let t = |x, y, e, d, b7, b11| row(x, y, Some(e), Some(d), &[(7, b7), (11, b11)]);
    BenchmarkCase {
        id: CaseId::Helmholtz,
        description: "Helmholtz equation, u = sin x; no particular solution",
        reference_table: "Table 1",
        competitor_label: "DRBEM(33)",
        reference_kind: ReferenceKind::Value,
        domain: EllipseDomain::standard(),
        pde: GoverningPde::Helmholtz { wavenumber: 1.0 },
        exact: |p| p.x.sin(),
        shape_parameter: None,
        default_boundary_knots: 11,
        default_interior: InteriorLayout::none(),
        rows: vec![
            t(1.5, 0.0, 0.997, 0.994, 0.999, 0.997),
            t(1.2, -0.35, 0.932, 0.928, 0.931, 0.932),
            t(0.6, -0.45, 0.565, 0.562, 0.557, 0.565),
            t(0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
            t(0.9, 0.0, 0.783, 0.780, 0.779, 0.783),
            t(0.3, 0.0, 0.296, 0.294, 0.289, 0.296),
            t(0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
        ],
    }
}

/// `Laplacian u = 0` with `u = x + y`, solved as `(Laplacian + 1) u = u`.
pub fn case_laplace() -> BenchmarkCase {
    // reference table 2: exact, BEM(16), BKM(3), BKM(5); the fourth row is
    // printed at (0, 0) but its exact value -0.45 places it at (0, -0.45)
    let t = |x, y, e, d, b3, b5| row(x, y, Some(e), Some(d), &[(3, b3), (5, b5)]);
    BenchmarkCase {
        id: CaseId::Laplace,
        description: "Laplace equation, u = x + y; right-hand side u fitted on boundary knots",
        reference_table: "Table 2",
        competitor_label: "BEM(16)",
        reference_kind: ReferenceKind::Value,
        domain: EllipseDomain::standard(),
        pde: GoverningPde::Laplace,
        exact: |p| p.x + p.y,
        shape_parameter: Some(25.0),
        default_boundary_knots: 5,
        default_interior: InteriorLayout::none(),
        rows: vec![
            t(1.5, 0.0, 1.500, 1.507, 1.500, 1.500),
            t(1.2, -0.35, 0.850, 0.857, 0.850, 0.850),
            t(0.6, -0.45, 0.150, 0.154, 0.150, 0.150),
            t(0.0, -0.45, -0.450, -0.451, -0.450, -0.450),
            t(0.9, 0.0, 0.900, 0.913, 0.900, 0.900),
            t(0.3, 0.0, 0.300, 0.304, 0.300, 0.300),
            t(0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
        ],
    }
}

/// `Laplacian u = -du/dx` with `u = exp(-x)`.
pub fn case_convection_x() -> BenchmarkCase {
    // reference table 3: exact, DRBEM(33), BKM(15), BKM(18)
    let t = |x, y, e, d, b15, b18| row(x, y, Some(e), Some(d), &[(15, b15), (18, b18)]);
    BenchmarkCase {
        id: CaseId::ConvectionX,
        description: "convection-diffusion, Laplacian u = -du/dx, u = exp(-x)",
        reference_table: "Table 3",
        competitor_label: "DRBEM(33)",
        reference_kind: ReferenceKind::Value,
        domain: EllipseDomain::standard(),
        pde: GoverningPde::Convection { dx: 1.0, dy: 0.0 },
        exact: |p| (-p.x).exp(),
        shape_parameter: Some(4.0),
        default_boundary_knots: 7,
        default_interior: convection_interior_11(),
        rows: vec![
            t(1.5, 0.0, 0.223, 0.229, 0.229, 0.224),
            t(1.2, -0.35, 0.301, 0.307, 0.301, 0.305),
            t(0.0, -0.45, 1.000, 1.003, 1.010, 1.000),
            t(-0.6, -0.45, 1.822, 1.819, 1.822, 1.818),
            t(-1.5, 0.0, 4.482, 4.489, 4.484, 4.477),
            t(0.3, 0.0, 0.741, 0.745, 0.744, 0.743),
            t(-0.3, 0.0, 1.350, 1.348, 1.353, 1.354),
            t(0.0, 0.0, 1.000, 1.002, 1.003, 1.004),
        ],
    }
}

/// `Laplacian u = -du/dx - du/dy` with `u = exp(-x) + exp(-y)`.
pub fn case_convection_xy() -> BenchmarkCase {
    // reference table 4: exact, DRBEM(33), BKM(15), BKM(18)
    let t = |x, y, e, d, b15, b18| row(x, y, Some(e), Some(d), &[(15, b15), (18, b18)]);
    BenchmarkCase {
        id: CaseId::ConvectionXy,
        description: "convection-diffusion, Laplacian u = -du/dx - du/dy, u = exp(-x) + exp(-y)",
        reference_table: "Table 4",
        competitor_label: "DRBEM(33)",
        reference_kind: ReferenceKind::Value,
        domain: EllipseDomain::standard(),
        pde: GoverningPde::Convection { dx: 1.0, dy: 1.0 },
        exact: |p| (-p.x).exp() + (-p.y).exp(),
        shape_parameter: Some(5.5),
        default_boundary_knots: 7,
        default_interior: convection_interior_11(),
        rows: vec![
            t(1.5, 0.0, 1.223, 1.231, 1.225, 1.224),
            t(1.2, -0.35, 1.720, 1.714, 1.725, 1.723),
            t(0.0, -0.45, 2.568, 2.557, 2.546, 2.551),
            t(-0.6, -0.45, 3.390, 3.378, 3.403, 3.405),
            t(-1.5, 0.0, 5.482, 5.485, 5.490, 5.491),
            t(0.3, 0.0, 1.741, 1.731, 1.729, 1.731),
            t(-0.3, 0.0, 2.350, 2.335, 2.349, 2.350),
            t(0.0, 0.0, 2.000, 1.989, 1.992, 1.993),
        ],
    }
}

/// `Laplacian u - (2 / x^2) u = 0` with `u = -2 / x` on the ellipse centred at (3, 0).
pub fn case_varying_helmholtz() -> BenchmarkCase {
    // reference table 5: relative errors of DRBEM(33), BKM(9), BKM(15)
    let t = |x, y, d: Option<f64>, b9, b15| row(x, y, None, d, &[(9, b9), (15, b15)]);
    BenchmarkCase {
        id: CaseId::VaryingHelmholtz,
        description:
            "varying-parameter Helmholtz, Laplacian u = (2/x^2) u, u = -2/x, centre (3, 0)",
        reference_table: "Table 5",
        competitor_label: "DRBEM(33)",
        reference_kind: ReferenceKind::RelativeError,
        domain: EllipseDomain {
            center: Point2::new(3.0, 0.0),
            a: 2.0,
            b: 1.0,
        },
        pde: GoverningPde::InverseSquareX { coefficient: 2.0 },
        exact: |p| -2.0 / p.x,
        shape_parameter: None,
        default_boundary_knots: 15,
        default_interior: InteriorLayout::none(),
        rows: vec![
            t(4.5, 0.0, Some(2.3e-3), 3.3e-3, 2.6e-3),
            t(4.2, -0.35, Some(2.1e-3), 4.1e-3, 3.3e-3),
            t(3.6, -0.45, Some(5.4e-3), 6.8e-3, 4.7e-3),
            t(3.0, -0.45, Some(4.5e-3), 1.1e-2, 4.4e-3),
            t(2.4, -0.45, Some(1.2e-3), 1.4e-2, 9.1e-4),
            t(1.8, -0.35, Some(9.0e-4), 5.2e-3, 1.7e-2),
            t(1.5, 0.0, None, 9.4e-3, 3.4e-2),
            t(3.9, 0.0, Some(3.9e-3), 7.0e-3, 5.3e-3),
            t(3.3, 0.0, Some(3.3e-3), 1.1e-2, 6.3e-3),
            t(3.0, 0.0, Some(4.5e-3), 1.3e-2, 5.6e-3),
            t(2.7, 0.0, Some(2.7e-3), 1.5e-2, 3.4e-3),
            t(2.1, 0.0, Some(3.2e-3), 1.6e-2, 8.8e-3),
        ],
    }
}

/// All five benchmarks in their canonical order.
pub fn all_cases() -> Vec<BenchmarkCase> {
    CaseId::ALL.into_iter().map(CaseId::case).collect()
}

/// Overrides applied on top of a case's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub boundary_knots: Option<usize>,
    pub interior: Option<InteriorLayout>,
    pub shape: Option<f64>,
    /// Replace the multiquadric pair altogether (shape is then ignored).
    pub rbf: Option<RbfPair>,
}

/// Result at one evaluation point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub x: f64,
    pub y: f64,
    pub computed: f64,
    pub exact: f64,
    pub abs_err: f64,
    /// `None` where the exact value is zero.
    pub rel_err: Option<f64>,
    pub paper_bkm: Option<f64>,
    pub paper_competitor: Option<f64>,
}

/// Outcome of running a benchmark at one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub case: CaseId,
    pub boundary_knots: usize,
    pub interior_knots: usize,
    pub shape: Option<f64>,
    pub rbf: Option<RbfPair>,
    pub reference_kind: ReferenceKind,
    pub points: Vec<PointResult>,
    pub max_abs_error: f64,
    pub avg_abs_error: f64,
    pub max_rel_error: f64,
    pub avg_rel_error: f64,
    pub condition_estimate: f64,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl BenchmarkCase {
    pub fn name(&self) -> &'static str {
        self.id.name()
    }

    pub fn evaluation_points(&self) -> Vec<Point2> {
        self.rows.iter().map(|r| r.point).collect()
    }

    fn rbf(&self, options: &RunOptions) -> Option<RbfPair> {
        let c = options.shape.or(self.shape_parameter)?;
        Some(options.rbf.unwrap_or(RbfPair::Multiquadric { c }))
    }

    /// The boundary value problem at the given knot counts and basis.
    pub fn problem(&self, options: &RunOptions) -> Result<ProblemSpec> {
        let n = options
            .boundary_knots
            .unwrap_or(self.default_boundary_knots);
        let interior = options
            .interior
            .clone()
            .unwrap_or_else(|| self.default_interior.clone());
        let exact = self.exact;
        let dirichlet = field(exact);
        let rbf = self.rbf(options);
        let need_rbf =
            || rbf.ok_or_else(|| BkmError::InvalidArgument("case needs a shape parameter".into()));
        let mode = match self.pde {
            GoverningPde::Helmholtz { wavenumber } => OperatorMode::Helmholtz { wavenumber },
            // Laplacian u + u = u with the boundary trace of u as right-hand side
            GoverningPde::Laplace => OperatorMode::KnownRhs {
                rhs: field(exact),
                rbf: need_rbf()?,
            },
            GoverningPde::Convection { dx, dy } => OperatorMode::Coupled {
                l1: FirstOrderOperator::new(dx, dy, 0.0),
                forcing: field(|_| 0.0),
                rbf: need_rbf()?,
            },
            GoverningPde::InverseSquareX { coefficient } => {
                OperatorMode::ResponseKernel(ResponseKernel::InverseSquareX { coefficient })
            }
        };
        Ok(ProblemSpec::new(self.domain, mode, dirichlet, n).with_interior(interior))
    }

    /// The acceptance threshold for a configuration, if one is defined.
    pub fn criterion(&self, boundary_knots: usize, interior_knots: usize) -> Option<Criterion> {
        let c = |metric, threshold| Some(Criterion { metric, threshold });
        match (self.id, boundary_knots, interior_knots) {
            (CaseId::Helmholtz, 11, 0) => c(Metric::MaxAbs, 2e-3),
            (CaseId::Helmholtz, 7, 0) => c(Metric::MaxAbs, 1e-2),
            (CaseId::Laplace, 5, 0) => c(Metric::MaxAbs, 5e-4),
            (CaseId::Laplace, 3, 0) => c(Metric::AvgRel, 5e-3),
            (CaseId::ConvectionX, 7, 11) => c(Metric::MaxAbs, 1e-2),
            (CaseId::ConvectionXy, 7, 11) => c(Metric::MaxAbs, 2.5e-2),
            (CaseId::VaryingHelmholtz, 15, 0) => c(Metric::AvgRel, 1.5e-2),
            _ => None,
        }
    }
}

/// Solve a benchmark and compare against its exact solution.
pub fn run_case(case: &BenchmarkCase, options: &RunOptions) -> Result<CaseResult> {
    let wrap = |e: BkmError| BkmError::Case {
        case: case.name().to_string(),
        source: Box::new(e),
    };
    let start = Instant::now();
    let spec = case.problem(options).map_err(wrap)?;
    let sol = solve(&spec).map_err(wrap)?;
    let total_knots = spec.boundary_knots + spec.interior.len();

    let mut points = Vec::with_capacity(case.rows.len());
    for r in &case.rows {
        let computed = sol.evaluate(r.point).map_err(wrap)?;
        let exact = (case.exact)(r.point);
        let abs_err = (computed - exact).abs();
        let rel_err = (exact != 0.0).then(|| abs_err / exact.abs());
        let paper_bkm = r
            .bkm
            .iter()
            .find(|(knots, _)| *knots == total_knots)
            .map(|(_, v)| *v);
        points.push(PointResult {
            x: r.point.x,
            y: r.point.y,
            computed,
            exact,
            abs_err,
            rel_err,
            paper_bkm,
            paper_competitor: r.competitor,
        });
    }
    let wall_time = start.elapsed();

    let max_abs_error = points.iter().map(|p| p.abs_err).fold(0.0, f64::max);
    let avg_abs_error = points.iter().map(|p| p.abs_err).sum::<f64>() / points.len() as f64;
    let rels: Vec<f64> = points.iter().filter_map(|p| p.rel_err).collect();
    let max_rel_error = rels.iter().copied().fold(0.0, f64::max);
    let avg_rel_error = if rels.is_empty() {
        0.0
    } else {
        rels.iter().sum::<f64>() / rels.len() as f64
    };
    let rbf = case.rbf(options);
    Ok(CaseResult {
        case: case.id,
        boundary_knots: spec.boundary_knots,
        interior_knots: spec.interior.len(),
        shape: match rbf {
            Some(RbfPair::Multiquadric { c }) => Some(c),
            _ => None,
        },
        rbf,
        reference_kind: case.reference_kind,
        points,
        max_abs_error,
        avg_abs_error,
        max_rel_error,
        avg_rel_error,
        condition_estimate: sol.diagnostics().condition_estimate,
        wall_time,
    })
}

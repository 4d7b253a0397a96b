//! Assembly and solution of boundary knot collocation systems.
//!
//! Every problem is rewritten as
//!
//! ```text
//! Laplacian u + u = f + u - L1{u},     u = v + u_p
//! ```
//!
//! where `v = sum_k beta_k J0(|x - x_k|)` over boundary knots `x_k` solves the
//! homogeneous Helmholtz equation exactly, and `u_p` is the dual-reciprocity
//! particular solution of the interpolated right-hand side.
//!
//! Four modes are supported:
//!
//! * [`OperatorMode::Helmholtz`]: no particular part, boundary collocation only.
//! * [`OperatorMode::KnownRhs`]: the right-hand side is a known function; fit it
//!   at all knots, then collocate the boundary conditions minus the `u_p` traces.
//! * [`OperatorMode::Coupled`]: the right-hand side depends on `u` and `L1{u}`.
//!   Closed through `L1{u} = L1{v} + L1{u_p}` with exact derivatives of both
//!   bases, giving a single square system in `(beta, alpha, tail, u_interior)`.
//! * [`OperatorMode::ResponseKernel`]: variable-coefficient operators handled by
//!   a kernel whose parameter is taken from the collocation point.

use std::fmt;
use std::sync::Arc;

use crate::drm::{DrmInterpolant, TAIL_LEN};
use crate::error::{BkmError, Result};
use crate::geometry::{
    boundary_knots, interior_knots, EllipseDomain, InteriorLayout, Knot, Point2,
};
use crate::kernels::{RadialKernel, ResponseKernel};
use crate::linalg::DenseMatrix;
use crate::rbf::RbfPair;

/// A scalar function of position.
pub type ScalarField = Arc<dyn Fn(Point2) -> f64 + Send + Sync>;

/// Neumann data as a function of position and unit outward normal.
pub type FluxField = Arc<dyn Fn(Point2, (f64, f64)) -> f64 + Send + Sync>;

pub fn field<F>(f: F) -> ScalarField
where
    F: Fn(Point2) -> f64 + Send + Sync + 'static,
{
    Arc::new(f)
}

pub fn flux<F>(f: F) -> FluxField
where
    F: Fn(Point2, (f64, f64)) -> f64 + Send + Sync + 'static,
{
    Arc::new(f)
}

/// `L1{u} = dx * du/dx + dy * du/dy + identity * u`.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct FirstOrderOperator {
    pub dx: f64,
    pub dy: f64,
    pub identity: f64,
}

impl FirstOrderOperator {
    pub const fn new(dx: f64, dy: f64, identity: f64) -> Self {
        Self { dx, dy, identity }
    }

    pub fn is_zero(&self) -> bool {
        self.dx == 0.0 && self.dy == 0.0 && self.identity == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.dx.is_finite() && self.dy.is_finite() && self.identity.is_finite()
    }

    /// Apply to a function with the given value and gradient at a point.
    pub fn apply(&self, value: f64, gradient: (f64, f64)) -> f64 {
        self.dx * gradient.0 + self.dy * gradient.1 + self.identity * value
    }
}

/// How the governing operator is split and closed.
#[derive(Clone)]
pub enum OperatorMode {
    /// `(Laplacian + wavenumber^2) u = 0`.
    Helmholtz { wavenumber: f64 },
    /// `(Laplacian + 1) u = rhs` with `rhs` a known function.
    KnownRhs { rhs: ScalarField, rbf: RbfPair },
    /// `Laplacian u + L1{u} = forcing`.
    Coupled {
        l1: FirstOrderOperator,
        forcing: ScalarField,
        rbf: RbfPair,
    },
    /// Homogeneous operator with a response-dependent general solution.
    ResponseKernel(ResponseKernel),
}

impl fmt::Debug for OperatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Helmholtz { wavenumber } => write!(f, "Helmholtz({wavenumber})"),
            Self::KnownRhs { rbf, .. } => write!(f, "KnownRhs({rbf:?})"),
            Self::Coupled { l1, rbf, .. } => write!(f, "Coupled({l1:?}, {rbf:?})"),
            Self::ResponseKernel(k) => write!(f, "ResponseKernel({k:?})"),
        }
    }
}

/// Which boundary knots carry Neumann data.
#[derive(Clone)]
pub enum NeumannKnots {
    /// Explicit indices into the boundary knot list.
    Indices(Vec<usize>),
    /// Every knot with odd index.
    OddIndices,
    /// Knots whose position satisfies the predicate.
    Where(Arc<dyn Fn(Point2) -> bool + Send + Sync>),
}

#[derive(Clone)]
pub struct NeumannCondition {
    pub knots: NeumannKnots,
    pub flux: FluxField,
}

/// Boundary condition type attached to a boundary knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

/// A boundary value problem on an ellipse together with its discretisation.
#[derive(Clone)]
pub struct ProblemSpec {
    pub domain: EllipseDomain,
    pub mode: OperatorMode,
    pub dirichlet: ScalarField,
    pub neumann: Option<NeumannCondition>,
    pub boundary_knots: usize,
    pub interior: InteriorLayout,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("domain", &self.domain)
            .field("mode", &self.mode)
            .field("neumann", &self.neumann.is_some())
            .field("boundary_knots", &self.boundary_knots)
            .field("interior", &self.interior)
            .finish()
    }
}

impl ProblemSpec {
    pub fn new(
        domain: EllipseDomain,
        mode: OperatorMode,
        dirichlet: ScalarField,
        boundary_knots: usize,
    ) -> Self {
        Self {
            domain,
            mode,
            dirichlet,
            neumann: None,
            boundary_knots,
            interior: InteriorLayout::none(),
        }
    }

    pub fn with_interior(mut self, interior: InteriorLayout) -> Self {
        self.interior = interior;
        self
    }

    pub fn with_neumann(mut self, knots: NeumannKnots, flux: FluxField) -> Self {
        self.neumann = Some(NeumannCondition { knots, flux });
        self
    }

    /// Generate knots and assign a boundary condition type to every boundary knot.
    pub fn discretize(&self) -> Result<Discretization> {
        let boundary = boundary_knots(&self.domain, self.boundary_knots)?;
        let interior = interior_knots(&self.domain, &self.interior)?;
        let mut bc = vec![BcKind::Dirichlet; boundary.len()];
        if let Some(neumann) = &self.neumann {
            match &neumann.knots {
                NeumannKnots::Indices(idx) => {
                    for &i in idx {
                        let slot = bc.get_mut(i).ok_or_else(|| {
                            BkmError::InvalidArgument(format!(
                                "Neumann knot index {i} out of range for {} boundary knots",
                                boundary.len()
                            ))
                        })?;
                        *slot = BcKind::Neumann;
                    }
                }
                NeumannKnots::OddIndices => {
                    for slot in bc.iter_mut().skip(1).step_by(2) {
                        *slot = BcKind::Neumann;
                    }
                }
                NeumannKnots::Where(pred) => {
                    for (slot, k) in bc.iter_mut().zip(&boundary) {
                        if pred(k.position) {
                            *slot = BcKind::Neumann;
                        }
                    }
                }
            }
        }
        Ok(Discretization {
            boundary,
            interior,
            bc,
        })
    }

    fn validate(&self) -> Result<()> {
        match &self.mode {
            OperatorMode::Helmholtz { wavenumber }
                if !(*wavenumber > 0.0 && wavenumber.is_finite()) =>
            {
                Err(BkmError::InvalidArgument(format!(
                    "wavenumber must be positive, got {wavenumber}"
                )))
            }
            OperatorMode::Coupled { l1, .. } if !l1.is_finite() => Err(BkmError::InvalidArgument(
                "first-order operator coefficients must be finite".into(),
            )),
            OperatorMode::KnownRhs { rbf, .. } | OperatorMode::Coupled { rbf, .. } => {
                if let RbfPair::Multiquadric { c } = rbf {
                    RbfPair::multiquadric(*c)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Knots of a problem and the boundary condition carried by each boundary knot.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub boundary: Vec<Knot>,
    pub interior: Vec<Knot>,
    pub bc: Vec<BcKind>,
}

impl Discretization {
    /// Boundary knots followed by interior knots.
    pub fn all_points(&self) -> Vec<Point2> {
        self.boundary
            .iter()
            .chain(&self.interior)
            .map(|k| k.position)
            .collect()
    }

    fn all_dirichlet(&self) -> bool {
        self.bc.iter().all(|b| *b == BcKind::Dirichlet)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Basis {
    Radial(RadialKernel),
    Response(ResponseKernel),
}

/// Size and conditioning of the final linear system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveDiagnostics {
    pub system_size: usize,
    /// 1-norm condition estimate of the (last) system solved.
    pub condition_estimate: f64,
    /// Fixed-point iterations, when the Picard path was used.
    pub iterations: Option<usize>,
}

/// Coefficients of a solved problem, evaluable anywhere in the domain.
#[derive(Debug, Clone)]
pub struct BkmSolution {
    beta: Vec<f64>,
    drm: Option<DrmInterpolant>,
    interior_values: Option<Vec<f64>>,
    basis: Basis,
    boundary: Vec<Knot>,
    interior: Vec<Knot>,
    diagnostics: SolveDiagnostics,
}

impl BkmSolution {
    /// Homogeneous coefficients, one per boundary knot.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn drm(&self) -> Option<&DrmInterpolant> {
        self.drm.as_ref()
    }

    /// Solution values recovered at the interior knots.
    pub fn interior_values(&self) -> Option<&[f64]> {
        self.interior_values.as_deref()
    }

    pub fn boundary_knots(&self) -> &[Knot] {
        &self.boundary
    }

    pub fn interior_knots(&self) -> &[Knot] {
        &self.interior
    }

    pub fn diagnostics(&self) -> SolveDiagnostics {
        self.diagnostics
    }

    /// `u(p) = v(p) + u_p(p)`.
    pub fn evaluate(&self, p: Point2) -> Result<f64> {
        let v = match self.basis {
            Basis::Radial(kernel) => self
                .boundary
                .iter()
                .zip(&self.beta)
                .map(|(k, b)| b * kernel.evaluate(p, k.position))
                .sum(),
            Basis::Response(kernel) => {
                let mut s = 0.0;
                for (k, b) in self.boundary.iter().zip(&self.beta) {
                    s += b * kernel.evaluate(p, k.position)?;
                }
                s
            }
        };
        let up = self.drm.as_ref().map_or(0.0, |d| d.eval_particular(p));
        Ok(v + up)
    }

    /// Gradient of `u` at `p`. Only defined for fixed-wavenumber kernels.
    pub fn gradient(&self, p: Point2) -> Result<(f64, f64)> {
        let Basis::Radial(kernel) = self.basis else {
            return Err(BkmError::Unsupported(
                "gradients of response-dependent solutions".into(),
            ));
        };
        let (mut gx, mut gy) = self
            .drm
            .as_ref()
            .map_or((0.0, 0.0), |d| d.eval_particular_gradient(p));
        for (k, b) in self.boundary.iter().zip(&self.beta) {
            let (kx, ky) = kernel.gradient(p, k.position);
            gx += b * kx;
            gy += b * ky;
        }
        Ok((gx, gy))
    }

    /// `du/dn` at `p` along the unit vector `normal`.
    pub fn normal_derivative(&self, p: Point2, normal: (f64, f64)) -> Result<f64> {
        let (gx, gy) = self.gradient(p)?;
        Ok(gx * normal.0 + gy * normal.1)
    }
}

/// Evaluate a solution at `p`.
pub fn evaluate(sol: &BkmSolution, p: Point2) -> Result<f64> {
    sol.evaluate(p)
}

fn solve_dense(a: &DenseMatrix, b: &[f64], disc: &Discretization) -> Result<(Vec<f64>, f64)> {
    let map = |e: BkmError| match e {
        BkmError::SingularMatrix { pivot } => BkmError::SingularSystem {
            size: a.rows(),
            pivot,
            boundary_knots: disc.boundary.len(),
            interior_knots: disc.interior.len(),
        },
        other => other,
    };
    let lu = a.lu().map_err(map)?;
    let x = lu.solve(b)?;
    let cond = a.norm_1() * lu.inverse_norm_1_estimate()?;
    Ok((x, cond))
}

/// Solve any problem, dispatching on its operator mode.
pub fn solve(spec: &ProblemSpec) -> Result<BkmSolution> {
    match spec.mode {
        OperatorMode::Helmholtz { .. } => solve_homogeneous(spec, None),
        OperatorMode::KnownRhs { .. } => solve_known_rhs(spec),
        OperatorMode::Coupled { .. } => solve_coupled(spec),
        OperatorMode::ResponseKernel(_) => solve_response_kernel(spec),
    }
}

/// Collocation matrix of the homogeneous boundary system: `J0(lambda r_ik)` on
/// Dirichlet rows and `dJ0(lambda r_ik)/dn_i` on Neumann rows.
pub fn assemble_homogeneous(disc: &Discretization, wavenumber: f64) -> DenseMatrix {
    let kernel = RadialKernel::Helmholtz { wavenumber };
    let n = disc.boundary.len();
    let mut g = DenseMatrix::zeros(n, n);
    for (i, (ki, bc)) in disc.boundary.iter().zip(&disc.bc).enumerate() {
        for (k, kk) in disc.boundary.iter().enumerate() {
            g[(i, k)] = match bc {
                BcKind::Dirichlet => kernel.evaluate(ki.position, kk.position),
                BcKind::Neumann => kernel.normal_derivative(
                    ki.position,
                    kk.position,
                    ki.normal.expect("boundary knot has a normal"),
                ),
            };
        }
    }
    g
}

fn boundary_rhs(
    spec: &ProblemSpec,
    disc: &Discretization,
    up: Option<&DrmInterpolant>,
) -> Result<Vec<f64>> {
    disc.boundary
        .iter()
        .zip(&disc.bc)
        .map(|(k, bc)| {
            let p = k.position;
            match bc {
                BcKind::Dirichlet => {
                    Ok((spec.dirichlet)(p) - up.map_or(0.0, |d| d.eval_particular(p)))
                }
                BcKind::Neumann => {
                    let n = k.normal.expect("boundary knot has a normal");
                    let neumann = spec.neumann.as_ref().ok_or_else(|| {
                        BkmError::InvalidArgument("Neumann knot without Neumann data".into())
                    })?;
                    Ok((neumann.flux)(p, n)
                        - up.map_or(0.0, |d| d.eval_particular_normal_derivative(p, n)))
                }
            }
        })
        .collect()
}

fn solve_boundary_system(
    spec: &ProblemSpec,
    disc: &Discretization,
    wavenumber: f64,
    up: Option<DrmInterpolant>,
) -> Result<BkmSolution> {
    let g = assemble_homogeneous(disc, wavenumber);
    let b = boundary_rhs(spec, disc, up.as_ref())?;
    let (beta, cond) = solve_dense(&g, &b, disc)?;
    let mut sol = BkmSolution {
        beta,
        drm: up,
        interior_values: None,
        basis: Basis::Radial(RadialKernel::Helmholtz { wavenumber }),
        boundary: disc.boundary.clone(),
        interior: disc.interior.clone(),
        diagnostics: SolveDiagnostics {
            system_size: g.rows(),
            condition_estimate: cond,
            iterations: None,
        },
    };
    if !disc.interior.is_empty() {
        let values = disc
            .interior
            .iter()
            .map(|k| sol.evaluate(k.position))
            .collect::<Result<Vec<_>>>()?;
        sol.interior_values = Some(values);
    }
    Ok(sol)
}

/// Boundary collocation of the homogeneous Helmholtz equation, optionally
/// offset by a particular solution whose traces are subtracted from the data.
pub fn solve_homogeneous(spec: &ProblemSpec, up: Option<&DrmInterpolant>) -> Result<BkmSolution> {
    spec.validate()?;
    let OperatorMode::Helmholtz { wavenumber } = spec.mode else {
        return Err(BkmError::InvalidArgument(format!(
            "solve_homogeneous needs Helmholtz mode, got {:?}",
            spec.mode
        )));
    };
    if up.is_some() && wavenumber != 1.0 {
        return Err(BkmError::Unsupported(
            "particular solutions are built for Laplacian + 1; use wavenumber 1".into(),
        ));
    }
    let disc = spec.discretize()?;
    solve_boundary_system(spec, &disc, wavenumber, up.cloned())
}

/// Two-stage solve for a known right-hand side: fit the DRM interpolant at
/// every knot, then collocate the boundary conditions minus its traces.
pub fn solve_known_rhs(spec: &ProblemSpec) -> Result<BkmSolution> {
    spec.validate()?;
    let OperatorMode::KnownRhs { rhs, rbf } = &spec.mode else {
        return Err(BkmError::InvalidArgument(format!(
            "solve_known_rhs needs KnownRhs mode, got {:?}",
            spec.mode
        )));
    };
    let disc = spec.discretize()?;
    let points = disc.all_points();
    let values: Vec<f64> = points.iter().map(|&p| rhs(p)).collect();
    let up = DrmInterpolant::fit_points(points, *rbf, &values)?;
    solve_boundary_system(spec, &disc, 1.0, Some(up))
}

/// Matrix and right-hand side of the one-shot coupled system.
///
/// Unknown ordering: `beta (N)`, `alpha (M)`, tail `(3)`, interior values `(L)`,
/// with `M = N + L`. Row ordering: interpolation rows (one per knot), the three
/// moment conditions, boundary collocation rows, interior consistency rows.
pub fn assemble_coupled(
    disc: &Discretization,
    l1: FirstOrderOperator,
    forcing: &ScalarField,
    dirichlet: &ScalarField,
    rbf: &RbfPair,
) -> Result<(DenseMatrix, Vec<f64>)> {
    if !disc.all_dirichlet() {
        return Err(BkmError::Unsupported(
            "the coupled solver needs Dirichlet data on every boundary knot".into(),
        ));
    }
    let kernel = RadialKernel::Helmholtz { wavenumber: 1.0 };
    let n = disc.boundary.len();
    let l = disc.interior.len();
    let m = n + l;
    let size = 2 * m + TAIL_LEN;
    let col_alpha = n;
    let col_tail = n + m;
    let col_u = n + m + TAIL_LEN;
    let points = disc.all_points();
    let sources: Vec<Point2> = disc.boundary.iter().map(|k| k.position).collect();

    let mut a = DenseMatrix::zeros(size, size);
    let mut b = vec![0.0; size];

    // interpolation rows: phi + L1 phi_hat, closing L1{u} through u = v + u_p
    for (i, &xi) in points.iter().enumerate() {
        for (k, &xk) in sources.iter().enumerate() {
            a[(i, k)] = l1.apply(kernel.evaluate(xi, xk), kernel.gradient(xi, xk));
        }
        for (j, &xj) in points.iter().enumerate() {
            let r = xi.distance(xj);
            let (dx, dy) = xi.delta(xj);
            a[(i, col_alpha + j)] =
                rbf.forcing(r) + l1.apply(rbf.particular(r), rbf.particular_gradient(dx, dy));
        }
        a[(i, col_tail)] = xi.x + l1.apply(xi.x, (1.0, 0.0));
        a[(i, col_tail + 1)] = xi.y + l1.apply(xi.y, (0.0, 1.0));
        a[(i, col_tail + 2)] = 1.0 + l1.apply(1.0, (0.0, 0.0));
        b[i] = forcing(xi);
        if i < n {
            b[i] += dirichlet(xi);
        } else {
            a[(i, col_u + (i - n))] = -1.0;
        }
    }

    // moment conditions
    for (j, &xj) in points.iter().enumerate() {
        a[(m, col_alpha + j)] = 1.0;
        a[(m + 1, col_alpha + j)] = xj.x;
        a[(m + 2, col_alpha + j)] = xj.y;
    }

    // boundary collocation and interior consistency rows: u(x_i) = v + u_p
    for (i, &xi) in points.iter().enumerate() {
        let row = m + TAIL_LEN + i;
        for (k, &xk) in sources.iter().enumerate() {
            a[(row, k)] = kernel.evaluate(xi, xk);
        }
        for (j, &xj) in points.iter().enumerate() {
            a[(row, col_alpha + j)] = rbf.particular(xi.distance(xj));
        }
        a[(row, col_tail)] = xi.x;
        a[(row, col_tail + 1)] = xi.y;
        a[(row, col_tail + 2)] = 1.0;
        if i < n {
            b[row] = dirichlet(xi);
        } else {
            a[(row, col_u + (i - n))] = -1.0;
        }
    }
    Ok((a, b))
}

/// One-shot solve of a problem whose right-hand side depends on the solution.
///
/// Without interior knots, a first-order operator that is identically zero
/// makes the right-hand side `f + u` known from the boundary data; such
/// problems are redirected to [`solve_known_rhs`] with `rhs = forcing + dirichlet`.
pub fn solve_coupled(spec: &ProblemSpec) -> Result<BkmSolution> {
    spec.validate()?;
    let OperatorMode::Coupled { l1, forcing, rbf } = &spec.mode else {
        return Err(BkmError::InvalidArgument(format!(
            "solve_coupled needs Coupled mode, got {:?}",
            spec.mode
        )));
    };
    if l1.is_zero() && spec.interior.is_empty() {
        return solve_known_rhs(&degenerate_known_rhs(spec, forcing, *rbf));
    }
    let disc = spec.discretize()?;
    let (a, b) = assemble_coupled(&disc, *l1, forcing, &spec.dirichlet, rbf)?;
    let (x, cond) = solve_dense(&a, &b, &disc)?;
    let n = disc.boundary.len();
    let m = n + disc.interior.len();
    let beta = x[..n].to_vec();
    let alpha = x[n..n + m + TAIL_LEN].to_vec();
    let interior_values = x[n + m + TAIL_LEN..].to_vec();
    let drm = DrmInterpolant::from_coefficients(disc.all_points(), *rbf, alpha)?;
    Ok(BkmSolution {
        beta,
        drm: Some(drm),
        interior_values: Some(interior_values),
        basis: Basis::Radial(RadialKernel::Helmholtz { wavenumber: 1.0 }),
        boundary: disc.boundary,
        interior: disc.interior,
        diagnostics: SolveDiagnostics {
            system_size: a.rows(),
            condition_estimate: cond,
            iterations: None,
        },
    })
}

/// The [`OperatorMode::KnownRhs`] problem a coupled problem with `L1 = 0` reduces to.
pub fn degenerate_known_rhs(
    spec: &ProblemSpec,
    forcing: &ScalarField,
    rbf: RbfPair,
) -> ProblemSpec {
    let f = forcing.clone();
    let g = spec.dirichlet.clone();
    let mut reduced = spec.clone();
    reduced.mode = OperatorMode::KnownRhs {
        rhs: field(move |p| f(p) + g(p)),
        rbf,
    };
    reduced
}

/// Stopping rule for [`solve_coupled_picard`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Under-relaxation weight in (0, 1]; 1 is the plain iteration.
    pub relaxation: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 100,
            relaxation: 1.0,
        }
    }
}

/// Fixed-point alternative to [`solve_coupled`]: starting from `u = 0` in the
/// interior and `L1{u} = 0`, repeatedly fit the right-hand side
/// `f + u - L1{u}` at the knots, solve the boundary system, and re-evaluate
/// `u` and `L1{u}` from the new solution, until the largest change at the
/// knots falls below the tolerance. With a relaxation weight below 1 only
/// that fraction of each update is applied.
///
/// Returns an error if the iteration has not converged within the limit.
pub fn solve_coupled_picard(spec: &ProblemSpec, options: PicardOptions) -> Result<BkmSolution> {
    spec.validate()?;
    let OperatorMode::Coupled { l1, forcing, rbf } = &spec.mode else {
        return Err(BkmError::InvalidArgument(format!(
            "solve_coupled_picard needs Coupled mode, got {:?}",
            spec.mode
        )));
    };
    let w = options.relaxation;
    if !(w > 0.0 && w <= 1.0) {
        return Err(BkmError::InvalidArgument(format!(
            "relaxation weight must lie in (0, 1], got {w}"
        )));
    }
    let disc = spec.discretize()?;
    if !disc.all_dirichlet() {
        return Err(BkmError::Unsupported(
            "the coupled solver needs Dirichlet data on every boundary knot".into(),
        ));
    }
    let points = disc.all_points();
    let n = disc.boundary.len();
    let base: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(i, &p)| forcing(p) + if i < n { (spec.dirichlet)(p) } else { 0.0 })
        .collect();
    let mut u_interior = vec![0.0; disc.interior.len()];
    let mut l1u = vec![0.0; points.len()];

    for iteration in 1..=options.max_iterations {
        let rhs: Vec<f64> = base
            .iter()
            .enumerate()
            .map(|(i, &b)| b + if i >= n { u_interior[i - n] } else { 0.0 } - l1u[i])
            .collect();
        let up = DrmInterpolant::fit_points(points.clone(), *rbf, &rhs)?;
        let mut sol = solve_boundary_system(spec, &disc, 1.0, Some(up))?;
        let mut change = 0.0f64;
        let new_interior = sol.interior_values.clone().unwrap_or_default();
        for (old, new) in u_interior.iter_mut().zip(&new_interior) {
            change = change.max((*old - new).abs());
            *old += w * (new - *old);
        }
        for (i, &p) in points.iter().enumerate() {
            let value = sol.evaluate(p)?;
            let next = l1.apply(value, sol.gradient(p)?);
            change = change.max((next - l1u[i]).abs());
            l1u[i] += w * (next - l1u[i]);
        }
        if change < options.tolerance {
            sol.diagnostics.iterations = Some(iteration);
            return Ok(sol);
        }
    }
    Err(BkmError::Unsupported(format!(
        "fixed-point iteration did not converge in {} iterations",
        options.max_iterations
    )))
}

/// Boundary collocation with a response-dependent kernel:
/// `sum_k beta_k K(x_i, x_k) = b1(x_i)`.
pub fn solve_response_kernel(spec: &ProblemSpec) -> Result<BkmSolution> {
    spec.validate()?;
    let OperatorMode::ResponseKernel(kernel) = spec.mode else {
        return Err(BkmError::InvalidArgument(format!(
            "solve_response_kernel needs ResponseKernel mode, got {:?}",
            spec.mode
        )));
    };
    if !spec.interior.is_empty() {
        return Err(BkmError::InvalidArgument(
            "response-dependent kernels use boundary knots only".into(),
        ));
    }
    let disc = spec.discretize()?;
    if !disc.all_dirichlet() {
        return Err(BkmError::Unsupported(
            "response-dependent kernels support Dirichlet data only".into(),
        ));
    }
    let n = disc.boundary.len();
    let mut a = DenseMatrix::zeros(n, n);
    for (i, ki) in disc.boundary.iter().enumerate() {
        for (k, kk) in disc.boundary.iter().enumerate() {
            a[(i, k)] = kernel.evaluate(ki.position, kk.position)?;
        }
    }
    let b: Vec<f64> = disc
        .boundary
        .iter()
        .map(|k| (spec.dirichlet)(k.position))
        .collect();
    let (beta, cond) = solve_dense(&a, &b, &disc)?;
    Ok(BkmSolution {
        beta,
        drm: None,
        interior_values: None,
        basis: Basis::Response(kernel),
        boundary: disc.boundary,
        interior: disc.interior,
        diagnostics: SolveDiagnostics {
            system_size: n,
            condition_estimate: cond,
            iterations: None,
        },
    })
}

//! User-specified boundary value problems read from TOML.
//!
//! ```toml
//! name = "my-problem"
//!
//! [domain]
//! center = [0.0, 0.0]
//! a = 1.5
//! b = 0.5
//!
//! # Laplacian u + dx u_x + dy u_y + k u = forcing
//! [operator]
//! dx = 1.0
//! k = 0.0
//! forcing = "0"
//! shape = 4.0
//!
//! [boundary]
//! dirichlet = "exp(-x)"
//!
//! [discretization]
//! boundary_knots = 15
//! interior = ["ring:0.5:6"]
//!
//! [evaluate]
//! points = [[0.0, 0.0], [0.3, 0.1]]
//! exact = "exp(-x)"
//! ```
//!
//! With no forcing and no first-order terms the operator is the Helmholtz
//! operator with wavenumber `sqrt(k)`, solved by boundary collocation alone;
//! only this mode accepts Neumann data.

use std::path::Path;
use std::sync::Arc;

use bkm::geometry::{EllipseDomain, InteriorLayout, Point2};
use bkm::rbf::RbfPair;
use bkm::solver::{field, flux, NeumannKnots};
use bkm::{FirstOrderOperator, OperatorMode, ProblemSpec};
use serde::Deserialize;

use crate::expr::{Env, Expr, ExprError};
use crate::layout::InteriorArg;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    name: Option<String>,
    domain: DomainSection,
    #[serde(default)]
    operator: OperatorSection,
    boundary: BoundarySection,
    #[serde(default)]
    discretization: DiscretizationSection,
    evaluate: EvaluateSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainSection {
    #[serde(default)]
    center: [f64; 2],
    a: f64,
    b: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorSection {
    #[serde(default)]
    dx: f64,
    #[serde(default)]
    dy: f64,
    #[serde(default)]
    k: f64,
    forcing: Option<String>,
    shape: Option<f64>,
    basis: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundarySection {
    dirichlet: String,
    neumann: Option<String>,
    neumann_knots: Option<NeumannSelection>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum NeumannSelection {
    Named(String),
    Indices(Vec<usize>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscretizationSection {
    boundary_knots: Option<usize>,
    #[serde(default)]
    interior: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvaluateSection {
    points: Vec<[f64; 2]>,
    exact: Option<String>,
}

/// Errors in a problem file; all of them are usage errors.
#[derive(Debug)]
pub enum ProblemError {
    Read(String),
    Toml(String),
    Expr {
        field: &'static str,
        source: String,
        error: ExprError,
    },
    Invalid(String),
}

impl std::fmt::Display for ProblemError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Read(m) | Self::Toml(m) | Self::Invalid(m) => f.write_str(m),
            Self::Expr {
                field,
                source,
                error,
            } => write!(f, "{field}: {error}\n{}", error.render(source)),
        }
    }
}

/// Overrides from the command line.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub boundary_knots: Option<usize>,
    pub interior: Option<InteriorLayout>,
    pub shape: Option<f64>,
}

/// A parsed problem ready to solve.
pub struct Problem {
    pub name: String,
    pub spec: ProblemSpec,
    pub shape: Option<f64>,
    pub basis: Option<RbfPair>,
    pub points: Vec<Point2>,
    pub exact: Option<Arc<Expr>>,
}

const DEFAULT_BOUNDARY_KNOTS: usize = 12;

fn expr(field: &'static str, source: &str, normal: bool) -> Result<Arc<Expr>, ProblemError> {
    let parsed = if normal {
        Expr::parse_with_normal(source)
    } else {
        Expr::parse(source)
    };
    parsed.map(Arc::new).map_err(|error| ProblemError::Expr {
        field,
        source: source.to_string(),
        error,
    })
}

fn scalar(e: Arc<Expr>) -> bkm::solver::ScalarField {
    field(move |p: Point2| {
        e.eval(&Env {
            x: p.x,
            y: p.y,
            ..Env::default()
        })
    })
}

fn basis(name: Option<&str>, shape: Option<f64>) -> Result<RbfPair, ProblemError> {
    let need_shape = || {
        shape.ok_or_else(|| {
            ProblemError::Invalid("operator.shape is required for the multiquadric basis".into())
        })
    };
    match name.unwrap_or("multiquadric") {
        "multiquadric" => RbfPair::multiquadric(need_shape()?)
            .map_err(|e| ProblemError::Invalid(format!("operator.shape: {e}"))),
        "cubic" => Ok(RbfPair::Cubic),
        "quartic-thin-plate" => Ok(RbfPair::QuarticThinPlate),
        other => Err(ProblemError::Invalid(format!(
            "operator.basis: unknown basis `{other}` (expected multiquadric, cubic or quartic-thin-plate)"
        ))),
    }
}

pub fn load(path: &Path, overrides: &Overrides) -> Result<Problem, ProblemError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ProblemError::Read(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, path, overrides)
}

pub fn parse(text: &str, path: &Path, overrides: &Overrides) -> Result<Problem, ProblemError> {
    let file: ProblemFile =
        toml::from_str(text).map_err(|e| ProblemError::Toml(format!("{}: {e}", path.display())))?;
    let name = file.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "problem".into())
    });

    let [cx, cy] = file.domain.center;
    let domain = EllipseDomain::new(Point2::new(cx, cy), file.domain.a, file.domain.b)
        .map_err(|e| ProblemError::Invalid(format!("domain: {e}")))?;

    let op = &file.operator;
    if ![op.dx, op.dy, op.k].iter().all(|v| v.is_finite()) {
        return Err(ProblemError::Invalid(
            "operator coefficients must be finite".into(),
        ));
    }
    let dirichlet = expr("boundary.dirichlet", &file.boundary.dirichlet, false)?;
    let helmholtz = op.forcing.is_none() && op.dx == 0.0 && op.dy == 0.0;
    let shape = overrides.shape.or(op.shape);
    let (mode, rbf) = if helmholtz {
        if op.k <= 0.0 {
            return Err(ProblemError::Invalid(
                "operator.k must be positive when there is no forcing or first-order term".into(),
            ));
        }
        (
            OperatorMode::Helmholtz {
                wavenumber: op.k.sqrt(),
            },
            None,
        )
    } else {
        let forcing = expr(
            "operator.forcing",
            op.forcing.as_deref().unwrap_or("0"),
            false,
        )?;
        let rbf = basis(op.basis.as_deref(), shape)?;
        let mode = OperatorMode::Coupled {
            l1: FirstOrderOperator::new(op.dx, op.dy, op.k),
            forcing: scalar(forcing),
            rbf,
        };
        (mode, Some(rbf))
    };

    let n = overrides
        .boundary_knots
        .or(file.discretization.boundary_knots)
        .unwrap_or(DEFAULT_BOUNDARY_KNOTS);
    let interior =
        match &overrides.interior {
            Some(layout) => layout.clone(),
            None => {
                let mut layout = InteriorLayout::none();
                for s in &file.discretization.interior {
                    let arg: InteriorArg = s.parse().map_err(|e| {
                        ProblemError::Invalid(format!("discretization.interior: {e}"))
                    })?;
                    let base = path.parent().unwrap_or(Path::new("."));
                    layout.extend(arg.resolve(base).map_err(|e| {
                        ProblemError::Invalid(format!("discretization.interior: {e}"))
                    })?);
                }
                layout
            }
        };
    let mut spec = ProblemSpec::new(domain, mode, scalar(dirichlet), n).with_interior(interior);

    match (&file.boundary.neumann, &file.boundary.neumann_knots) {
        (None, None) => {}
        (Some(src), sel) => {
            let g = expr("boundary.neumann", src, true)?;
            let knots = match sel {
                None => NeumannKnots::OddIndices,
                Some(NeumannSelection::Named(s)) if s == "odd" => NeumannKnots::OddIndices,
                Some(NeumannSelection::Named(s)) => {
                    return Err(ProblemError::Invalid(format!(
                        "boundary.neumann_knots: expected \"odd\" or a list of indices, got `{s}`"
                    )))
                }
                Some(NeumannSelection::Indices(v)) => NeumannKnots::Indices(v.clone()),
            };
            spec = spec.with_neumann(
                knots,
                flux(move |p: Point2, (nx, ny): (f64, f64)| {
                    g.eval(&Env {
                        x: p.x,
                        y: p.y,
                        nx,
                        ny,
                    })
                }),
            );
        }
        (None, Some(_)) => {
            return Err(ProblemError::Invalid(
                "boundary.neumann_knots given without boundary.neumann".into(),
            ))
        }
    }

    let exact = match &file.evaluate.exact {
        Some(src) => Some(expr("evaluate.exact", src, false)?),
        None => None,
    };
    if file.evaluate.points.is_empty() {
        return Err(ProblemError::Invalid("evaluate.points is empty".into()));
    }
    Ok(Problem {
        name,
        spec,
        shape: rbf.and(shape),
        basis: rbf,
        points: file
            .evaluate
            .points
            .iter()
            .map(|&[x, y]| Point2::new(x, y))
            .collect(),
        exact,
    })
}

use thiserror::Error;

/// Errors raised by the boundary knot method library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BkmError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {function} is undefined for argument {argument}")]
    Domain {
        function: &'static str,
        argument: f64,
    },

    #[error("singular matrix: zero pivot at index {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("singular kernel parameter: response point ({x}, {y}) has x = 0")]
    SingularParameter { x: f64, y: f64 },

    #[error(
        "collocation system of size {size} is singular (zero pivot at index {pivot}) \
         with {boundary_knots} boundary and {interior_knots} interior knots; \
         try a different knot count or interior layout"
    )]
    SingularSystem {
        size: usize,
        pivot: usize,
        boundary_knots: usize,
        interior_knots: usize,
    },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("case `{case}`: {source}")]
    Case {
        case: String,
        #[source]
        source: Box<BkmError>,
    },

    #[error("knot file: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, BkmError>;

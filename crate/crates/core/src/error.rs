use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("d^2 != 0 on {name}: d(d {name}) = {residual}")]
    Jacobi { name: String, residual: String },
    #[error("d {name} has a nonzero (0,2)-component: {component}")]
    Integrability { name: String, component: String },
    #[error("unknown builtin presentation `{0}`")]
    UnknownBuiltin(String),
    #[error("presentation mismatch: complex dimensions {0} and {1}")]
    PresentationMismatch(usize, usize),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("invalid arrow {0} -> {1}")]
    InvalidArrow(String, String),
    #[error("singular frame: det(1 - conj(phi) phi) = 0")]
    SingularFrame,
    #[error("singular operator: {0}")]
    SingularOperator(String),
    #[error("Beltrami differential is not integrable: dbar phi - [phi,phi]/2 = {0}")]
    NotIntegrable(String),
    #[error("no solution at order {order}: {detail}")]
    NotSolvable { order: String, detail: String },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

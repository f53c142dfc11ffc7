use thiserror::Error;

/// Failure modes shared by the library modules.
///
/// Payloads are stored as `f64` regardless of the scalar type the failing
/// routine was instantiated with.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("exponent p = {0} is outside (1, inf)")]
    ExponentDomain(f64),

    #[error("inadmissible pair: |1 - 2/p| = {lhs} is not below cos(theta) = {rhs}")]
    Inadmissible { lhs: f64, rhs: f64 },

    #[error("sector angle {0} is outside [0, pi/2)")]
    SectorAngleRange(f64),

    #[error("angle out of range: {0}")]
    AngleRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("coefficient field `{0}` does not provide second derivatives")]
    Capability(String),

    #[error("coefficient matrix rejected at x = {x:?}: {reason}")]
    SectorRejected { x: Vec<f64>, reason: String },

    #[error("every quadrature node was excluded by the zero-set threshold")]
    AllExcluded,

    #[error("grid with {nodes} nodes exceeds the cap of {cap}")]
    SizeCap { nodes: usize, cap: usize },

    #[error("grid size {0} must be even and at least 8")]
    GridSize(usize),

    #[error("linear system is singular")]
    Singular,

    #[error("matrix exponential scaling failed (norm {0})")]
    Scaling(f64),

    #[error("unknown coefficient field `{0}`")]
    UnknownField(String),

    #[error("bad field arguments for `{name}`: {reason}")]
    FieldArgs { name: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

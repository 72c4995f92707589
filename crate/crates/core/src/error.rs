use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mesh parameters: {0}")]
    InvalidMesh(String),

    #[error("cell {cell} is degenerate (volume {volume:e})")]
    DegenerateCell { cell: usize, volume: f64 },

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("conflicting Dirichlet values for dof {0}")]
    ConflictingDirichlet(usize),

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("conjugate gradient breakdown: operator is not positive definite (p^T A p = {0:e})")]
    NotPositiveDefinite(f64),

    #[error("no interface: the initial level set does not change sign")]
    NoInterface,

    #[error("fitted mode requires mesh vertices on the interface, none found")]
    NoFittedInterface,

    #[error("cut cell {0} has a zero level-set gradient")]
    ZeroGradientCutCell(usize),

    #[error("unsupported quadrature degree {degree} on {dim}-dimensional facets")]
    UnsupportedQuadrature { degree: usize, dim: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite value in field after {0}")]
    NonFinite(String),

    #[error("narrow band is empty")]
    EmptyBand,

    #[error("convergence order needs at least two samples with distinct mesh sizes and positive errors: {0}")]
    InvalidSamples(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not hermitian (‖M − M*‖_F = {defect:.3e})")]
    NonHermitianInput { defect: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive semidefinite (λ_min = {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("map is not completely positive (λ_min(Choi) = {min_eigenvalue:.3e})")]
    NotCp { min_eigenvalue: f64 },

    #[error("probe {index} is not positive definite")]
    ProbeNotPd { index: usize },

    #[error("Kraus set is empty")]
    EmptyKrausSet,

    #[error("map is strictly positive; no block form exists")]
    IsStrictlyPositive,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("vector lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("weight entry {index} is not strictly positive ({value})")]
    NonpositiveWeight { index: usize, value: f64 },

    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("matrix is not d-stochastic: {0}")]
    NotDStochastic(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("spectrum leaves the domain of the function: {0}")]
    DomainViolation(String),

    #[error("weights are proportional to the all-ones vector")]
    ConstantWeights,
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidSpec(String),
    #[error("matrix violates the {what} invariant (defect {defect:e})")]
    InvariantViolated { what: &'static str, defect: f64 },
    #[error("matrix logarithm requested outside the principal domain")]
    OutsideDomain,
    #[error("relator residual left the principal branch of the logarithm")]
    OutsideLogDomain,
    #[error("no convergence after {iterations} iterations (final residual {final_residual:e})")]
    NoConvergence { iterations: usize, final_residual: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("boundary component {index} is not tangent to its conjugacy class (defect {defect:e})")]
    NotClassTangent { index: usize, defect: f64 },
    #[error("form matrix has odd dimension {0}")]
    OddDimension(usize),
    #[error("only {landings} irreducible landings, at least {required} required")]
    InsufficientSamples { landings: usize, required: usize },
    #[error("rank split in {stage} is ill-conditioned (relative gap {gap:e})")]
    RankDeficiency { stage: &'static str, gap: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

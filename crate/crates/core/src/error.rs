use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input")]
    NonFinite,
    #[error("singular operand")]
    SingularOperand,
    #[error("mantissa width {0} outside [2, 113]")]
    InvalidPrecision(u32),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("spaces are not nested")]
    NotNested,
    #[error("fewer than 4 basis functions")]
    TooFewBasis,
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("negative quadratic form {0:e}")]
    NegativeQuadraticForm(f64),
    #[error("{what} did not converge within {iterations} iterations (estimate {estimate:e})")]
    NoConvergence { what: &'static str, iterations: usize, estimate: f64 },
    #[error("singular matrix")]
    Singular,
    #[error("smoother spectrum bounds are not set")]
    UnsetSpectrum,
    #[error("iteration diverged after {} cycles", history.len())]
    Divergence { history: Vec<f64> },
    #[error("dimension {n} exceeds the cap {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("IR divergent under these precisions (rho_ir = {0})")]
    IrDivergent(f64),
    #[error("coarsening ratio vartheta = {0} is not above 1")]
    VarthetaNotAboveOne(f64),
    #[error("no SPD guarantee (kappa_underbar * eps_check = {0})")]
    NoSpdGuarantee(f64),
    #[error("contraction rate {0} is not below 1")]
    RhoNotBelowOne(f64),
    #[error("precision budget exceeded at level {level}")]
    PrecisionBudgetExceeded { level: usize },
    #[error("condition estimates did not stabilize by level {0}")]
    NoStabilization(usize),
    #[error("rank-deficient sample set")]
    RankDeficient,
    #[error("level cap {0} reached before the stopping rule was met")]
    LevelCap(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector length {got} does not match vertex count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("malformed edge list at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("edge list is not a tree: {0}")]
    NotATree(String),

    #[error("graph has no edges, so its Laplacian has no non-zero eigenvalue")]
    NoNonzeroSpectrum,

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         (best estimate {estimate}, residual {residual:e})"
    )]
    NoConvergence {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },

    #[error("graph with {n} vertices exceeds the dense limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("perturbation precondition violated: 5 * {epsilon:e} > {delta:e}")]
    GapTooSmall { epsilon: f64, delta: f64 },

    #[error("no pendant line of size {t_star} is expected: balance {balance} exceeds 1")]
    NoLineExpected { t_star: usize, balance: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config: {0}")]
    Config(String),
}

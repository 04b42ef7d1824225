use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed or inconsistent input (shapes, non-finite entries, bad tolerances).
    #[error("input error: {0}")]
    Input(String),

    /// The caller broke an operation's contract (e.g. non-commuting input to the
    /// commuting-case solver, dependent Lie generators).
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("subspace is not invariant: residual {residual:.3e} exceeds bound {bound:.3e}")]
    NonInvariantSubspace { residual: f64, bound: f64 },

    /// A verification step failed. `residuals` carries the offending report when
    /// one exists.
    #[error("numerical failure in {stage}: {detail}")]
    NumericalFailure {
        stage: &'static str,
        detail: String,
        residuals: Vec<f64>,
    },

    #[error("QR iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("instance refused: {combinations} eigenvalue combinations exceed the limit {limit}")]
    RefusedInstance { combinations: u128, limit: u128 },

    #[error("at deflation depth {depth}: {source}")]
    AtDepth {
        depth: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn numerical(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::NumericalFailure {
            stage,
            detail: detail.into(),
            residuals: Vec::new(),
        }
    }

    /// True for failures of the floating-point machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NonInvariantSubspace { .. }
            | Error::NumericalFailure { .. }
            | Error::NoConvergence { .. } => true,
            Error::AtDepth { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// Deflation depth attached by the triangulation driver, if any.
    pub fn depth(&self) -> Option<usize> {
        match self {
            Error::AtDepth { depth, .. } => Some(*depth),
            _ => None,
        }
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mode count {0}: at least one mode is required")]
    InvalidModeCount(usize),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("matrix is not symmetric: max asymmetry {max_asymmetry:e} exceeds {tolerance:e}")]
    Asymmetric { max_asymmetry: f64, tolerance: f64 },

    #[error("matrix is not positive definite: eigenvalue {eigenvalue:e} <= 0")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("unphysical covariance matrix: symplectic eigenvalue {eigenvalue} < 1")]
    Unphysical { eigenvalue: f64 },

    #[error("{function} is undefined at {argument}: {reason}")]
    Domain {
        function: &'static str,
        argument: f64,
        reason: &'static str,
    },

    #[error("function is not finite at symplectic eigenvalue {eigenvalue}")]
    Evaluation { eigenvalue: f64 },

    #[error("ill-conditioned matrix: condition number {condition:e} exceeds {limit:e}")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("closed-form fidelity needs at least one pure state; use the Chernoff or Bhattacharyya terms for two mixed states")]
    PurityRequired,

    #[error("invalid s-schedule: {0}")]
    Schedule(String),

    #[error("invalid recipe: {0}")]
    Recipe(String),

    #[error("Fock truncation failed: cutoff {cutoff} exceeds cap {cap} (trace deficit {deficit:e}); use smaller occupation, squeezing or displacement")]
    Truncation { cutoff: usize, cap: usize, deficit: f64 },

    #[error("matrix is not Hermitian: max deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("density matrix has negative eigenvalue {eigenvalue:e}; the Fock cutoff is probably too small")]
    NegativeEigenvalue { eigenvalue: f64 },

    #[error("numerical backend failure: {0}")]
    Backend(String),
}

impl Error {
    /// True for failures of the numerical guards (conditioning, truncation,
    /// backend convergence) as opposed to invalid input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::IllConditioned { .. }
                | Error::Truncation { .. }
                | Error::NegativeEigenvalue { .. }
                | Error::Backend(_)
        )
    }
}

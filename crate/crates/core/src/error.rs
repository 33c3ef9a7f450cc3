use thiserror::Error;

/// Errors raised by matrix validation, state construction and the decision procedures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("hermiticity violation: max |M - M^dagger| = {max_asymmetry:.3e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("trace violation: |Tr(M) - 1| = {deviation:.3e}")]
    Trace { deviation: f64 },

    #[error("positivity violation: smallest eigenvalue is {min_eigenvalue:.3e} (violation {violation:.3e})")]
    Positivity { min_eigenvalue: f64, violation: f64 },

    #[error("unitarity violation: max |U^dagger U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("non-square bipartition {dim_a}x{dim_b}: the operation needs equal local dimensions")]
    NonSquareBipartition { dim_a: usize, dim_b: usize },

    #[error("unsupported local dimension {0}")]
    UnsupportedDimension(usize),

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    /// True for failures of the density-matrix invariants (as opposed to
    /// out-of-range parameters or unsupported shapes).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::Trace { .. }
                | Error::Positivity { .. }
                | Error::Shape(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

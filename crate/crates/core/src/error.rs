use thiserror::Error;

/// Everything that can go wrong between parsing a polynomial and printing a
/// Saito basis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("not a singular point: {0}")]
    NotSingular(String),

    #[error("singularity is not isolated: no pure power of {var} among the leading terms")]
    NonIsolatedSingularity { var: String },

    #[error("submodule has rank below {mu} at jet degree {degree}")]
    RankDeficient { mu: usize, degree: usize },

    #[error("characteristic polynomial does not split over the rationals ({residual_degree} roots missing)")]
    IrrationalEigenvalue { residual_degree: usize },

    #[error("eigenvalue spread still >= 1 after {steps} shifts")]
    SpreadNotClosing { steps: usize },

    #[error("commutator operator minus {k} is singular")]
    SingularCommutator { k: usize },

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("Hodge filtration is not strict for the nilpotent part: {0}")]
    StrictnessViolation(String),

    #[error("matrix of t in the final basis has nonzero coefficients beyond s^1")]
    DegreeNotOne,

    #[error("spectral symmetry violated: {0}")]
    SymmetryViolation(String),

    #[error("jet of degree {requested} requested but only degree {available} is available")]
    JetExhausted { requested: usize, available: usize },

    #[error("saturation did not stabilise within {bound} steps")]
    SaturationBound { bound: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI in JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::VariableMismatch { .. } => "variable_mismatch",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::Syntax { .. } => "syntax_error",
            Error::NotSingular(_) => "not_singular",
            Error::NonIsolatedSingularity { .. } => "non_isolated_singularity",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::IrrationalEigenvalue { .. } => "irrational_eigenvalue",
            Error::SpreadNotClosing { .. } => "spread_not_closing",
            Error::SingularCommutator { .. } => "singular_commutator",
            Error::NotNilpotent => "not_nilpotent",
            Error::StrictnessViolation(_) => "strictness_violation",
            Error::DegreeNotOne => "degree_not_one",
            Error::SymmetryViolation(_) => "symmetry_violation",
            Error::JetExhausted { .. } => "jet_exhausted",
            Error::SaturationBound { .. } => "saturation_bound",
            Error::Invariant(_) => "invariant_violation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

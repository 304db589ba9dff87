use thiserror::Error;

/// Errors raised by the laboratory.
///
/// Variants are grouped so the experiment runner can map them onto process
/// exit codes without string matching (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("frequency {k} is not on the lattice Z/{lambda}")]
    OffLattice { k: f64, lambda: f64 },

    #[error("frequency {k} exceeds the resolvable maximum {k_max}")]
    BeyondResolution { k: f64, k_max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "direct summation needs ~{estimated:.3e} multiplier evaluations, budget is {budget:.3e}"
    )]
    BudgetExceeded { estimated: f64, budget: f64 },

    #[error("non-finite value encountered at step {step}")]
    NonFinite { step: usize },

    #[error("imaginary residue {residue:.3e} exceeds tolerance {tolerance:.1e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code used by the `fnls` binary: 2 config, 3 budget, 4 numerical, 5 io.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            Error::NonFinite { .. } | Error::ImaginaryResidue { .. } => 4,
            Error::Io(_) => 5,
            _ => 2,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

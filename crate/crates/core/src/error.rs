use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("the listed residues do not generate (Z/{modulus}Z)^x")]
    NotAGeneratingSet { modulus: u64 },

    #[error("value of order {value_order} cannot be assigned to generator {generator} of order {generator_order}")]
    OrderMismatch {
        generator: u64,
        generator_order: u64,
        value_order: u64,
    },

    #[error("generator assignments are inconsistent at residue {residue}")]
    InconsistentAssignment { residue: u64 },

    #[error("residue {residue} is not coprime to modulus {modulus}")]
    InvalidResidue { residue: u64, modulus: u64 },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("pole at {0}")]
    Pole(String),

    #[error("argument lies on the branch cut: {0}")]
    Branch(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("the completed L-function is not entire (trivial character)")]
    NotEntire,

    #[error("the discriminant family is empty")]
    EmptyFamily,

    #[error("invalid quadrature specification: {0}")]
    QuadratureSpecInvalid(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

impl Error {
    /// True for errors caused by numerical non-convergence rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::QuadratureNonConvergence(_))
    }
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(alloc::format!($($arg)*)) };
}
pub(crate) use domain;

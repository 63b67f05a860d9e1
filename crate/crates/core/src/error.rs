use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Malformed input: bad site lists, coefficients, bitstrings, angles.
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    /// A Hermitian expectation came back with a large imaginary part.
    #[error("expectation has imaginary residue {0:e}; state is corrupted")]
    ImaginaryResidue(f64),

    #[error("non-finite gradient component in layer {layer}")]
    NonFiniteGradient { layer: usize },

    #[error("{n} qubits exceeds the dense oracle cap of {cap}")]
    OracleCap { n: usize, cap: usize },

    #[error("linear algebra failure: {0}")]
    Linalg(&'static str),

    #[error("all {0} optimizer starts failed")]
    AllStartsFailed(usize),

    #[error("run cancelled by observer")]
    Cancelled,
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

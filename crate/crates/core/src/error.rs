use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every layer of the laboratory.
///
/// Variants split into two classes: domain errors (the input lies outside the
/// mathematical domain of an operation) and conditioning errors (the input is
/// admissible but double precision could not resolve it). See
/// [`Error::is_domain`].
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("formal degree {formal} is smaller than the polynomial degree {actual}")]
    InvalidDegree { formal: usize, actual: usize },

    #[error("zero #{index} at {zero} has modulus {modulus}, outside the guard disk")]
    InvalidZero {
        index: usize,
        zero: Complex64,
        modulus: f64,
    },

    #[error("root iteration did not converge after {iterations} steps (worst backward error {residual:e})")]
    ConvergenceFailure {
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },

    #[error("derivative vanishes at the origin: {0}")]
    VanishingDerivative(String),

    #[error("critical point {0} is numerically at the origin")]
    DegenerateQuotient(Complex64),

    #[error("evaluation point {0} is too close to a pole")]
    PoleEvaluation(Complex64),

    #[error("conditioning failure: {0}")]
    Conditioning(String),

    #[error("critical point {0} cannot be classified against the unit circle")]
    BoundaryAmbiguity(Complex64),

    #[error("derivative at {point} is {modulus:e}; cannot normalize at a critical point")]
    DegenerateNormalization { point: Complex64, modulus: f64 },

    #[error("product is not normalized: no zero at the origin")]
    NotNormalized,

    #[error("degree-1 products have no critical points")]
    NoCriticalPoints,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("search produced no successful evaluation")]
    SearchFailure,
}

impl Error {
    /// True for errors caused by inadmissible input rather than numerics.
    pub fn is_domain(&self) -> bool {
        !matches!(
            self,
            Error::ConvergenceFailure { .. }
                | Error::Conditioning(_)
                | Error::BoundaryAmbiguity(_)
                | Error::SearchFailure
        )
    }
}

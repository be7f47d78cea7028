use thiserror::Error;

/// Failure modes shared across the crate.
///
/// `InvalidInput` covers precondition violations on plain parameters
/// (negative energies, angles out of range, malformed grids). The
/// remaining variants are genuine runtime conditions: they depend on
/// values that are only known once the scattering problem is solved.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Slab eigenmode counts must share parity so that both channels
    /// return to the same sign after one traversal.
    #[error("parity mismatch: mode counts {n_plus} and {n_minus} must both be even or both be odd")]
    ParityMismatch { n_plus: u32, n_minus: u32 },

    /// The open-path phase is undefined when the endpoint states have
    /// (numerically) zero overlap.
    #[error("endpoint states are orthogonal (|overlap| = {overlap:.3e}); open-path phase is undefined")]
    OrthogonalEndpoints { overlap: f64 },

    /// Total spinor norm fell below 1e-14 at an evaluation node.
    #[error("state norm vanished at s = {s:.6}")]
    VanishingNorm { s: f64 },

    /// The incident-region form divides by 1 + sqrt(r) e^(i delta); a
    /// perfectly reflecting channel with nonzero occupation makes that
    /// denominator zero.
    #[error("degenerate normalization: 1 + sqrt(r) e^(i delta) vanishes for an occupied channel")]
    DegenerateNormalization,

    #[error("quadrature did not converge: error estimate {error:.3e} after {panels} panels")]
    QuadratureNonConvergence { error: f64, panels: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

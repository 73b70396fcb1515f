//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the scalar, calculus, expression,
/// curve, and partner layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input lies outside the domain of the requested operation
    /// (non-positive value, log out of range for an inverse map, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Multiplicative division by `0*` (the value 1, whose log is 0).
    #[error("multiplicative division by 0* (divisor has log 0)")]
    DivByMZero,

    /// Expression-language parse failure. `offset` is a byte offset into the
    /// source string.
    #[error("parse error at byte {offset}: expected {expected}, found {found}")]
    Parse {
        offset: usize,
        expected: String,
        found: String,
    },

    /// A numerical routine could not reach the requested accuracy.
    /// `achieved` is the estimate it could certify.
    #[error("accuracy not reached: requested {requested:e}, achieved {achieved:e}")]
    Accuracy { requested: f64, achieved: f64 },

    /// A map or curve is singular at the given parameter value.
    #[error("singular at parameter {at}")]
    Singular { at: f64 },

    /// The Frenet frame is undefined (vanishing multiplicative curvature).
    #[error("Frenet frame undefined at parameter {at}: multiplicative curvature is 0*")]
    FrameUndefined { at: f64 },

    /// A curve expected to be naturally parametrized is not; `deviation` is
    /// the worst observed `|log speed|` over the sampled domain.
    #[error("curve is not naturally parametrized (max |log speed - 0| = {deviation:e})")]
    NotNatural { deviation: f64 },

    /// Requested construction is inadmissible for the supplied data
    /// (e.g. a partner offset that collapses the frame).
    #[error("inadmissible construction: {0}")]
    Inadmissible(String),

    /// A map is not differentiable where a derivative was requested.
    #[error("not differentiable: {0}")]
    NonDifferentiable(String),

    /// Two curves supplied as a partner pair do not correspond
    /// (mismatched domains or broken pointwise pairing).
    #[error("curves do not correspond: {0}")]
    Correspondence(String),
}

//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the library.
///
/// Operations distinguish configuration problems (bad family/rank), malformed
/// inputs (length mismatches, out-of-range generators, invalid 1-line
/// notation), violated mathematical preconditions (non-reduced words,
/// non-convex elements), and combinations the underlying theory does not
/// cover (for example string-parity defect tests at `s1~` entries).
#[derive(Debug, Error)]
pub enum Error {
    /// Unsupported family/rank combination.
    #[error("unsupported Coxeter system: {0}")]
    Configuration(String),

    /// Generator index outside `0..rank`.
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    /// Malformed element or word input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Mask length differs from word length.
    #[error("mask length {mask} does not match word length {word}")]
    MaskLengthMismatch { mask: usize, word: usize },

    /// A word required to be reduced is not.
    #[error("word is not reduced: {0}")]
    NotReduced(String),

    /// A documented mathematical precondition failed.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested combination is outside what the theory covers.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

use thiserror::Error;

/// Crate-wide error type. Variants are grouped by the subsystem that raises
/// them; construction operators verify their own postconditions and surface
/// failures through `VerificationFailed` rather than returning unchecked data.
#[derive(Debug, Error)]
pub enum Error {
    // field construction
    #[error("{0} is not a prime power; finite fields exist only for prime-power orders")]
    NotPrimePower(u64),

    // code construction and file I/O
    #[error("duplicate codeword at index {index}")]
    DuplicateCodeword { index: usize },
    #[error("symbol {sym} out of range for alphabet of size {q}{}", at.as_deref().map(|s| format!(" ({s})")).unwrap_or_default())]
    SymbolOutOfRange {
        sym: u32,
        q: u16,
        at: Option<String>,
    },
    #[error("codeword length {got} does not match dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("a code must contain at least one codeword")]
    EmptyCode,
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("header mismatch: {field} declared {declared} but body has {actual}")]
    HeaderMismatch {
        field: &'static str,
        declared: u64,
        actual: u64,
    },
    #[error("code is not graph-functional: prefix {prefix:?} matched by {count} codewords (expected exactly 1)")]
    NotFunctional { prefix: Vec<u16>, count: u64 },

    // linear constructions
    #[error("dimension d={d} too large for order q={q}: MDS(t,d,q) with t >= 2 requires d <= q+1 (equivalently s <= q-1)")]
    DimensionTooLarge { d: usize, q: u16 },
    #[error("no nested chain of distance-3/4/5 parity checks exists over GF({q}): {reason}")]
    ChainNotFound { q: u16, reason: String },
    #[error("not a subcode: {reason}")]
    NotSubcode { reason: String },
    #[error("code is not linear: {reason}")]
    NotLinear { reason: String },

    // combination operators
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("strength mismatch: {left} vs {right}")]
    StrengthMismatch { left: usize, right: usize },
    #[error("symbol map is not injective into the target alphabet: {reason}")]
    NotBijective { reason: String },
    #[error("hole set is not a proper subset of the alphabet: {reason}")]
    HoleNotSubset { reason: String },
    #[error("strength {t} too low: operation requires strength >= {min}")]
    StrengthTooLow { t: usize, min: usize },
    #[error("restriction to the hole letters is not an MDS subcode: {reason}")]
    NotASubcode { reason: String },
    #[error("coordinate {coord} out of range for dimension {dim}")]
    CoordOutOfRange { coord: usize, dim: usize },

    // hole-code assemblies
    #[error("ingredient `{which}` invalid: {reason}")]
    IngredientInvalid { which: &'static str, reason: String },
    #[error("hole letter sets overlap: {reason}")]
    HoleOverlap { reason: String },
    #[error("alphabet mismatch: {reason}")]
    AlphabetMismatch { reason: String },
    #[error("order {p} not admissible: {reason}")]
    NotAdmissible { p: u64, reason: String },

    // Steiner systems
    #[error("duplicate point in block {block:?}")]
    DuplicatePoint { block: Vec<u16> },
    #[error("designs are not nested: {reason}")]
    NotNested { reason: String },
    #[error("invalid design: {reason}")]
    InvalidDesign { reason: String },

    // verification
    #[error("input of size {words} exceeds the exhaustive-check bound {bound}")]
    TooLarge { words: usize, bound: usize },
    #[error("verification failed: {report}")]
    VerificationFailed { report: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use crate::maps::MapId;

/// Errors surfaced by the library.
///
/// Budget exhaustion during iteration is deliberately *not* an error: long
/// or divergent trajectories are expected behaviour and are reported as
/// statuses on the respective result types.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("undefined gcd: both inputs are zero")]
    UndefinedGcd,

    #[error("no integer solutions: gcd({a}, {b}) does not divide {c}")]
    NoIntegerSolutions { a: String, b: String, c: String },

    #[error("modulus must be >= 1, got {0}")]
    InvalidModulus(String),

    #[error("binomial requires 0 <= k <= n, got n={n}, k={k}")]
    InvalidBinomial { n: i64, k: i64 },

    #[error("ord2 is undefined for zero")]
    OrdOfZero,

    #[error("domain is odd integers: {map:?} cannot step {n}")]
    EvenInputToAcceleratedMap { map: MapId, n: String },

    #[error("{map:?} has no operation-word structure")]
    NotAWordMap { map: MapId },

    #[error("{map:?} has no stopping-time triangle (expected T3 or T5)")]
    NotACompressedMap { map: MapId },

    #[error("enumeration of {count} words for L={l} is too large; use the density DP instead")]
    EnumerationTooLarge { l: u32, count: String },

    #[error("infeasible word: guard intersection is empty (this is a bug)")]
    InfeasibleWord,

    #[error("comparator precondition violated: composite constant {c} is not positive")]
    ComparatorPrecondition { c: String },

    #[error("length range must satisfy 2 <= lo <= hi, got {lo}..{hi}")]
    InvalidLengthRange { lo: u32, hi: u32 },

    #[error("levels must be >= 1")]
    InvalidLevels,
}

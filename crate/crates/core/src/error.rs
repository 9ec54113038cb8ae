use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map one-to-one onto the named error conditions of the public
/// operations so the CLI can turn them into stable messages and exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("root certification failed at the working precision cap of {cap} bits")]
    PrecisionExhausted { cap: u32 },
    #[error("defining polynomial is reducible over the rationals: {0}")]
    Reducible(String),
    #[error("supplied discriminant {supplied} is incompatible with disc(f) = {poly_disc}")]
    DiscriminantMismatch { supplied: String, poly_disc: String },
    #[error("the equation order is not maximal at {0:?}; supply the field discriminant explicitly")]
    DiscriminantRequired(Vec<u64>),
    #[error("prime {0} is excluded for this field")]
    ExcludedPrime(u64),
    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: String, modulus: u64 },
    #[error("radicand denominator is divisible by the residue characteristic {0}")]
    DenominatorNotCoprime(u64),
    #[error("sign of the radicand at real place {0} could not be certified")]
    IndeterminateSign(usize),
    #[error("radicand {0} looks like a square in the field (no inert prime found)")]
    PossiblyTrivialExtension(String),
    #[error("compositum of the quadratic extensions is degenerate: observed subgroup has order {observed}, expected {expected}")]
    CompositumDegenerate { observed: usize, expected: usize },
    #[error("prime {0} is already in the ramification set")]
    AlreadyRamified(String),
    #[error("P0 and P_i must be different primes (both are {0})")]
    SamePrime(String),
    #[error("ramification set has odd cardinality {0}")]
    OddRamification(usize),
    #[error("place {0} is an opaque label and cannot be checked")]
    UncheckablePlace(String),
    #[error("the algebra has no finite ramified prime")]
    RamFEmpty,
    #[error("opaque prime {0} has no declared norm")]
    UnknownNorm(String),
    #[error("trace is not loxodromic: its complex image meets [-2, 2]")]
    NotLoxodromic,
    #[error("field needs exactly one complex place, found {0}")]
    NotOneComplexPlace(usize),
    #[error("no admissible P0 with norm <= {0}")]
    NoneBelowHeight(u64),
    #[error("no admissible tuples found: {0}")]
    NoTuplesFound(String),
    #[error("hypothesis check failed: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the engine.
///
/// Each variant corresponds to a failure the caller can act on; the CLI maps
/// `SizeBound` and `NotStabilized` to a dedicated exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exterior powers are only defined here for free groups, got {0}")]
    NonFreeGroup(String),

    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(usize),

    #[error("complex needs {needed} entries, above the size bound {bound}")]
    SizeBound { needed: u128, bound: u128 },

    #[error("map is not surjective: {0}")]
    NotSurjective(String),

    #[error("ladder {ladder:?} does not witness stabilization in degree {degree}")]
    NotStabilized { ladder: Vec<u64>, degree: usize },

    #[error("tensor product of two divisible modules is not supported: {0}")]
    UnsupportedTensor(String),

    #[error("twist {twist} is not invertible: gcd(q = {q}, exponent) > 1")]
    NonInvertibleTwist { q: u64, twist: i64 },

    #[error("unsupported base: {0}")]
    UnsupportedBase(String),

    #[error("unsupported module: {0}")]
    UnsupportedModule(String),

    #[error("malformed rows: {0}")]
    MalformedRows(String),

    #[error("{m} is not the prime-to-{p} part of {n}")]
    BadTower { m: u64, n: u64, p: u64 },

    #[error("point {0} has no finite residue field")]
    NonFiniteResidueField(String),

    #[error("module is not torsion: {0}")]
    NotTorsion(String),

    #[error("ill-defined homomorphism: {0}")]
    IllDefinedMap(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for the resource-style failures (size bound, too-short ladder).
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::SizeBound { .. } | Error::NotStabilized { .. })
    }
}

use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("complex is invalid ({0} violations); run validation for details")]
    InvalidComplex(usize),
    #[error("flip involution required")]
    FlipRequired,
    #[error("flip involution is present but fails validation")]
    InvalidFlip,
    #[error("region is not quotient-admissible at arrow {from} -> {to}")]
    InadmissibleRegion { from: String, to: String },
    #[error("relative Maslov grading of `{0}` is not an integer")]
    NonIntegralGrading(String),
    #[error("chain-map law fails at level {level} on tower `{tower}`")]
    ChainMapLaw { level: usize, tower: String },
    #[error("map source/target do not match")]
    MapMismatch,
    #[error(
        "unstabilized: truncated homology at levels {levels:?} has dimensions {counts:?}"
    )]
    Unstabilized { levels: [usize; 3], counts: [usize; 3] },
    #[error("large-surgery formula needs n >= 2g; got n = {n} with top Alexander grading {d}")]
    GenusBound { n: i64, d: i64 },
    #[error("surgery coefficient must be positive, got {0}")]
    NonPositiveSurgery(i64),
    #[error("spin^c index {t} mod {n} is ambiguous (k = +-{half}); pass k explicitly")]
    AmbiguousSpinc { n: i64, t: i64, half: i64 },
    #[error("knot Floer homology vanishes in every Alexander grading")]
    VanishingHfk,
}

pub type Result<T> = core::result::Result<T, Error>;

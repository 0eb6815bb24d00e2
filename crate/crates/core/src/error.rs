use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("a series needs at least one coefficient")]
    Empty,
    #[error("constant term must be zero, got {0}")]
    NonzeroConstantTerm(BigInt),
    #[error("coefficient {0} is negative")]
    NegativeCoefficient(usize),
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("parameter d must be at least 2, got {0}")]
    InvalidD(u64),
    #[error("parameter n must be at least 1, got {0}")]
    InvalidN(u64),
    #[error("custom term has exponent 0")]
    ZeroExponent,
    #[error("custom term with exponent {0} has multiplicity 0")]
    ZeroMultiplicity(u64),
    #[error("exponent {0} appears more than once")]
    DuplicateExponent(u64),
    #[error("custom multiset has no terms")]
    NoTerms,
    #[error("unknown multiset spec `{0}`")]
    Unknown(String),
    #[error("malformed parameter in `{0}`")]
    BadParameter(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid custom multiset document: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultisetError {
    #[error("no nonzero coefficient up to {0}; raise the bound")]
    EmptySupport(u64),
    #[error("q = {q} lies outside [0, {radius})")]
    OutsideRadius { q: BigRational, radius: BigRational },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("n = {n} exceeds the enumeration oracle bound {bound}")]
    AboveOracleBound { n: u64, bound: u64 },
    #[error("multiplicity of weight {0} does not fit in 64 bits")]
    MultiplicityTooLarge(u64),
    #[error("{0} has no minimal-variety interpretation")]
    NoVarietySemantics(String),
    #[error("part ({weight}, {color}) is not a valid colored part")]
    InvalidPart { weight: u64, color: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error(
        "cannot certify a probe at q = {q} within the order cap {max_order} \
         (bracket width reached {width})"
    )]
    Uncertifiable {
        q: BigRational,
        max_order: usize,
        width: BigRational,
    },
    #[error(
        "a(q) < 1 is certified at q = {0}, just below the radius; root too close to the radius"
    )]
    RootNearRadius(BigRational),
    #[error("no-root verdict has no beta bracket (beta = 1/rho = {0}, not certified)")]
    NoRoot(BigRational),
    #[error("alpha_lo is 0, beta is unbounded above; tighten the tolerance")]
    UnboundedBeta,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("lower witness at {q} is not below 1 (upper bound {value})")]
    LowerNotBelowOne { q: BigRational, value: BigRational },
    #[error("upper witness at {q} does not reach 1 (lower bound {value})")]
    UpperNotAboveOne { q: BigRational, value: BigRational },
    #[error("stored witness value differs from the recomputed one at {0}")]
    WitnessMismatch(BigRational),
    #[error("bracket endpoints are out of order")]
    Unordered,
    #[error("certified supremum {0} is not below 1")]
    SupremumNotBelowOne(BigRational),
    #[error(transparent)]
    Multiset(#[from] MultisetError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("generator list is empty")]
    NoGenerators,
    #[error("generators must be positive")]
    ZeroGenerator,
    #[error("generators are not coprime: gcd={0}")]
    GcdNotOne(u64),
    #[error(transparent)]
    Multiset(#[from] MultisetError),
}

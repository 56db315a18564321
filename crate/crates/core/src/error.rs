use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Ways a set of preimages of one can fail to describe a real 0-SYM filter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecViolation {
    #[error("forbidden preimage {0} (must avoid 0, 1, -1, i, -i)")]
    ForbiddenValue(Complex64),
    #[error("preimages {0} and {1} are reciprocal; keep only one of them")]
    ReciprocalPair(Complex64, Complex64),
    #[error("preimages {0} and {1} are negation-related (a = -b or a*b = -1)")]
    NegationPair(Complex64, Complex64),
    #[error("the values eta(lambda) are not closed under conjugation (unmatched {0})")]
    ConjugateClosure(Complex64),
    #[error("m must be at least 1, got {0}")]
    ZeroMultiplicity(i64),
    #[error("sign at i must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("stopband angle {0} is not inside (pi/2, pi)")]
    ThetaOutOfStopband(f64),
    #[error("extra preimage {0} must have positive real part and modulus different from 1")]
    ExtraOutsideHalfPlane(Complex64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{map} has a pole at {at}")]
    Pole { map: &'static str, at: Complex64 },
    #[error("invalid all-pass function: {0}")]
    InvalidAllPass(String),
    #[error("not a 0-SYM filter: identity {identity} deviates by {deviation:.3e}")]
    SymmetryViolation { identity: &'static str, deviation: f64 },
    #[error("invalid preimage specification: {0}")]
    Spec(#[from] SpecViolation),
    #[error("filter is not realizable: {0}")]
    Realizability(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("document error: {0}")]
    Document(String),
}

use thiserror::Error;

use crate::coideal::MultiIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exponent {index} is zero")]
    ZeroExponent { index: usize },
    #[error("algebra dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: u128, cap: usize },
    #[error("invalid structure constants: {0}")]
    StructureConstants(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live over different algebras or fields")]
    AlgebraMismatch,
    #[error("multi-indices of different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("co-ideal would have more than {cap} members")]
    MemberCap { cap: usize },
    #[error("not a co-ideal: {0} is a member but {1} is not")]
    NotCoIdeal(MultiIndex, MultiIndex),
    #[error("co-ideals differ")]
    CoIdealMismatch,
    #[error("target co-ideal is not contained in the source co-ideal")]
    NotSubCoIdeal,
    #[error("the zero vector has no ray")]
    ZeroVector,
    #[error("the ray order needs at least {needed} variables, got {found}")]
    TooFewVariables { needed: usize, found: usize },
    #[error("co-ideal has no nonzero member")]
    TrivialCoIdeal,
    #[error("{0} is not a member of the co-ideal")]
    NotMember(MultiIndex),
    #[error("series is not a unit: coefficient at 0 is not the identity")]
    NotUnit,
    #[error("substitution image of variable {0} has a nonzero constant term")]
    ConstantTerm(usize),
    #[error("HS-derivation is not certified")]
    NotCertified,
    #[error("Leibniz identity fails at {alpha} on basis pair ({i}, {j})")]
    Leibniz { alpha: MultiIndex, i: usize, j: usize },
    #[error("support hypothesis violated: coefficient at {0} should vanish")]
    SupportHypothesis(MultiIndex),
    #[error("factors do not match the ray data of the co-ideal: {0}")]
    MisalignedRays(String),
    #[error("tower levels are not truncation compatible: {0}")]
    IncompatibleTower(String),
    #[error("expected a uni-variate series")]
    NotUnivariate,
    #[error("lengths differ ({0} vs {1})")]
    LengthsDiffer(usize, usize),
    #[error("operation needs characteristic p > 0")]
    NeedsPositiveCharacteristic,
    #[error("length {length} is not of the form p^(a+1) - 1 for p = {p}")]
    BadPowerLength { length: usize, p: u64 },
    #[error("operator is not a k-derivation")]
    NotADerivation,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("algebra is not a monomial quotient")]
    NotMonomialQuotient,
}

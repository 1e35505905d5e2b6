use thiserror::Error;

use crate::series::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),

    #[error("constant term {0} is not a unit in {1}")]
    NonUnit(String, Ring),

    #[error("residue {residue} is not below the step {step}")]
    ResidueOutOfRange { step: usize, residue: usize },

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("cannot reduce a series over {from} to {to}")]
    IncompatibleReduction { from: Ring, to: Ring },

    #[error("malformed series text: {0}")]
    SeriesSyntax(String),

    #[error("malformed eta-quotient {input:?}: {reason}")]
    EtaSyntax { input: String, reason: String },

    #[error("invalid theta specification: {0}")]
    InvalidTheta(String),

    #[error("invalid (j,k) pair ({j},{k}): need 1 <= j < k")]
    InvalidSpec { j: u64, k: u64 },

    #[error("{0} is not a prime >= 5")]
    NotAdmissiblePrime(u64),

    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),

    #[error("unknown identity id {0:?}")]
    UnknownIdentity(String),

    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),

    #[error("malformed expression {input:?}: {reason}")]
    ExprSyntax { input: String, reason: String },

    #[error("cannot evaluate {expr:?}: {reason}")]
    ExprEval { expr: String, reason: String },

    #[error("argument map for {id} is not increasing and non-negative (U={u}, V={v})")]
    BadArgumentMap { id: String, u: i128, v: i128 },

    #[error("claim catalog: {0}")]
    Catalog(String),

    #[error("two constructions of the ({j},{k}) series disagree at q^{index}")]
    ConstructionMismatch { j: u64, k: u64, index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::lattice::LatticeKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("box side length must be at least {min} for {kind}, got {side}")]
    InvalidSide {
        kind: LatticeKind,
        side: usize,
        min: usize,
    },
    #[error("unknown lattice kind `{0}`")]
    UnknownLattice(String),
    #[error("matching lattice of {0} is not implemented")]
    UnsupportedMatching(LatticeKind),
    #[error("{0} has no tilde map")]
    NoTildeMap(LatticeKind),
    #[error("configuration belongs to a different graph")]
    GraphMismatch,
    #[error("{name} must lie in {range}, got {value}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("trial count must be positive")]
    NoTrials,
    #[error("instance too large to enumerate: {0}")]
    TooLarge(String),
    #[error("conditioning pattern has zero probability")]
    ZeroProbabilityPattern,
    #[error("parameters outside the hypotheses: {0}")]
    Hypothesis(String),
    #[error("bisection did not converge: {0}")]
    NonConvergence(String),
    #[error("crossing not bracketed: {0}")]
    BracketFailure(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

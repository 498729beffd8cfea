use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not symmetric under permutation of its variables")]
    NotSymmetric,
    #[error("polynomial is not a homogeneous quartic")]
    NotHomogeneousQuartic,
    #[error("power-sum quartic basis is degenerate in {nvars} variables (need at least 4)")]
    DegenerateBasis { nvars: usize },
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("l = {l} is outside [1, {n}]")]
    OutOfRange { n: u32, l: u32 },
    #[error("n = {0} is not supported (need n >= 3)")]
    UnsupportedN(u32),
    #[error("form is not in the sos cone: coordinates ({a}, {b}) are not both nonnegative")]
    NotInSosCone { a: Box<Rational>, b: Box<Rational> },
    #[error("form is not globally nonnegative")]
    NotGloballyPsd,
    #[error("{0} variables is too many for a literal group sum (max 6)")]
    TooManyVariables(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exact decision procedures for the cones of nonnegative and
//! sums-of-squares quartics invariant under the reflection group `A_n`
//! (the symmetric group `S_{n+1}` acting on the zero-sum hyperplane `U_n`).
//!
//! An invariant quartic is a class `a*p2^2 + b*p4` modulo `(p1)`, where `p_k`
//! is the `k`-th power sum in `n+1` variables. The crate classifies such
//! forms against both cones, produces exact witnesses for non-members, and
//! emits and checks explicit sum-of-squares certificates.

pub mod certify;
pub mod cli;
pub mod cones;
pub mod error;
pub mod exactpoly;
pub mod halfdeg;
pub mod oracle;
pub mod rational;
pub mod reynolds;

pub use error::{Error, Result};
pub use exactpoly::{InvariantQuartic, Monomial, PowerSumQuartic, SparsePoly};
pub use rational::Rational;

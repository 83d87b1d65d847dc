//! Exhaustive search for integers `x >= 2` whose `x² − 1` is smooth over the
//! primes up to a bound `K`.
//!
//! Every such `x` is the first coordinate of a solution of a Pell equation
//! `x² − dy² = 1` with `d` a squarefree product of basis primes. The search
//! walks all `2^t − 1` moduli, obtains each fundamental unit either exactly
//! (continued fractions) or as a compact representation built on the
//! infrastructure of reduced forms, and tests the first few tower members
//! for smoothness with modular arithmetic only.

pub mod checkpoint;
pub mod corollaries;
pub mod error;
pub mod infra;
pub mod quadfield;
pub mod real;
pub mod sieve;
pub mod smooth;

pub use corollaries::SolutionSet;
pub use error::{Error, Result};
pub use infra::{CompactRep, ReducedForm};
pub use quadfield::{CfExpansion, PellSolution, QuadInt};
pub use real::Real;
pub use sieve::{SearchConfig, SolutionRecord};
pub use smooth::{ExponentVector, SmoothBasis};

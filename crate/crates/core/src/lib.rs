//! Computational core of the parametric geometry of numbers.
//!
//! The central object is the *template*: an exact piecewise-linear map
//! `f: R+ -> R^d` whose components stay sorted, whose slopes are bounded by
//! `[-1/n, 1/m]`, and whose partial sums `F_j` are convex with slopes drawn
//! from a finite quantized set `Z(j)`. Templates model the successive minima
//! of the one-parameter lattice family `g_t u_A Z^d` up to bounded error, and
//! their time-averaged contraction rates compute Hausdorff and packing
//! dimensions of singular-matrix sets.
//!
//! The crate is split along those lines:
//!
//! - [`template`], [`analysis`], [`rates`], [`potential`], [`hull`]: exact
//!   rational template representation, validation, per-interval contraction
//!   analysis, asymptotic rates, and the potential-function checkers.
//! - [`standard`], [`families`], [`ksingular`]: constructors for the concrete
//!   template families used to realize dimension lower bounds.
//! - [`formulas`]: closed-form dimension evaluators, used as oracles against
//!   the constructions.
//! - [`lattice`]: floating-point successive minima of unimodular lattices
//!   under the diagonal flow, with reduction + enumeration.
//! - [`game`]: the dimension-computing Hausdorff/packing ball game and its
//!   lattice encoding.
//!
//! Template arithmetic is exact rational throughout; floating point appears
//! only in the lattice module, the game module, and the square-root-bearing
//! dimension formulas.

pub mod analysis;
pub mod dims;
pub mod families;
pub mod formulas;
pub mod game;
pub mod hull;
pub mod ksingular;
pub mod lattice;
pub mod potential;
pub mod rates;
pub mod rational;
pub mod slopes;
pub mod standard;
pub mod template;

pub use analysis::IntervalAnalysis;
pub use dims::Dims;
pub use rational::Rational;
pub use slopes::SlopeSet;
pub use template::{Tail, Template, ValidationReport};

use std::fmt;

/// Errors shared across the exact-arithmetic modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Structurally malformed input: wrong vector length, non-increasing
    /// breakpoints, empty input, index out of range. Distinct from a
    /// well-formed template that merely fails validation.
    Malformed(String),
    /// A well-formed template failed one of the template conditions.
    Invalid(String),
    /// A constructor's feasibility inequality is violated; the string names
    /// the inequality.
    Infeasible(String),
    /// Argument outside the documented domain of an operation.
    Domain(String),
    /// The operation's precondition is not supported for these dimensions.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Malformed(s) => write!(f, "malformed input: {s}"),
            Error::Invalid(s) => write!(f, "invalid template: {s}"),
            Error::Infeasible(s) => write!(f, "infeasible spec: {s}"),
            Error::Domain(s) => write!(f, "domain error: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

//! Constructive desingularization engine for pairs (ideal, control) on smooth
//! affine charts over the rationals.
//!
//! The engine works with *basic objects*: an ambient chart cover, an ideal `J`
//! per chart, a positive integer control `b`, and a list of exceptional
//! divisors kept as coordinate hyperplanes.  The singular locus of a pair is
//! the set of points where `J` has order at least `b`; blow-ups along smooth
//! centers inside that locus produce controlled transforms in which the
//! exceptional factor is divided out `b` times.  Centers are chosen by a
//! tower of upper semicontinuous invariants (order, w-order, the t pair,
//! monomial exponents) refined by induction on dimension through hypersurfaces
//! of maximal contact and coefficient ideals.
//!
//! Modules:
//! - [`algebra`]: exact polynomial arithmetic, Groebner bases, derivative
//!   ideals, orders, saturation, minimal primes, smoothness.
//! - [`charts`]: affine charts, coordinate changes, blow-up substitutions,
//!   exceptional records.
//! - [`basic_object`]: chart states, singular loci, controlled transforms,
//!   pull-backs.
//! - [`invariants`]: the resolution invariants and their maximum loci.
//! - [`descent`]: simple objects, maximal contact, coefficient ideals.
//! - [`resolver`]: the center-choice loop, principalization, embedded
//!   resolution, and the order-drop construction on a line.
//! - [`verify`]: independently recomputed certificates for finished runs.
//! - [`cli`]: the problem-file grammar, command driver, and JSON transcripts.

pub mod algebra;
pub mod basic_object;
pub mod charts;
pub mod cli;
pub mod descent;
pub mod invariants;
pub mod resolver;
pub mod verify;

/// Errors shared by every stage of the engine.
///
/// `exit_code` fixes the process-level contract: 1 for I/O, 2 for problem-file
/// parse errors, 3 for the step limit, 4 for everything that indicates a
/// violated precondition or internal assertion.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("minimal-prime decomposition unsupported: {0}")]
    DecompositionUnsupported(String),
    #[error("center cannot be coordinatized: {0}")]
    NotCoordinatizable(String),
    #[error("center is not permissible: {0}")]
    NotPermissible(String),
    #[error("exact division failed: {0}")]
    DivisionFailed(String),
    #[error("object is not in the monomial case: {0}")]
    MonomialCaseViolated(String),
    #[error("coefficient ideal is zero; hypersurface is bold regular")]
    ZeroCoefficientIdeal,
    #[error("no maximal-contact element of order one: {0}")]
    NoContactElement(String),
    #[error("step limit of {0} exceeded")]
    StepLimitExceeded(usize),
    #[error("parse error at line {line}, column {col}: {msg}")]
    ParseError { line: usize, col: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code associated with this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::ParseError { .. } => 2,
            Error::StepLimitExceeded(_) => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exact symbolic computation for differential polynomials over ℚ.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`] — rational arithmetic, sparse multivariate polynomials,
//!   pseudo-division, Sturm-sequence root isolation and truncated-power-series
//!   Hensel lifting.
//! * [`diffpoly`] — the differential polynomial ring K{x}: orders, separants,
//!   the derivation, rational prolongations and Ritt reduction.
//! * [`logic`] — quantifier-free formulas over the ordered-field signature,
//!   the star transform, Zariski/Kolchin constructors, λ-formulas and the
//!   good-form / nice-form normalisations.
//! * [`envelope`] — the envelope construction at depth d = 2m, linked triples,
//!   block projections and the fiber-cardinality bound.
//! * [`cells`] — cell and δ-cell certificates, exact 1-D cell decomposition
//!   and the sampling checkers.
//! * [`oracle`] — exact evaluation at jet points, Newton searches with exact
//!   re-certification, premise checking for the genericity scheme, sampled
//!   set equality and the dimension probe.
//! * [`parse`] — the textual grammar for differential polynomials and
//!   formulas.
//! * [`gen`] / [`suite`] — deterministic random generators and the bundled
//!   verification suites driven by the CLI.

pub mod algebra;
pub mod cells;
pub mod diffpoly;
pub mod envelope;
pub mod gen;
pub mod logic;
pub mod oracle;
pub mod parse;
pub mod suite;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Pseudo-division by a polynomial of non-positive degree in the chosen variable.
    DegenerateDivisor,
    /// An operation that requires a nonzero polynomial received zero.
    ZeroPolynomial,
    /// Separant requested for a polynomial free of its distinguished variable.
    UndefinedSeparant,
    /// Hensel lifting rejected: the derivative is not a unit at the reduction.
    SeparantVanishesAtReduction,
    /// `mk_Z`/`mk_Zcal` with R = 0 (the set would be empty).
    ZeroInequation,
    /// Variable/block arity does not match between two objects.
    ArityMismatch(String),
    /// Jet depth of a point is too small for the polynomial being evaluated.
    DepthMismatch { needed: usize, available: usize },
    /// Block projection applied to a formula mentioning a projected variable.
    ProjectedVariableOccurs,
    /// A cell operation would produce an empty cell.
    EmptyCell,
    /// Construction falls outside the exactly-computable fragment.
    OutOfFragment(String),
    /// Precision argument too small for the polynomial at hand.
    PrecisionTooSmall,
    /// Parse error with 1-based location.
    Parse { line: usize, col: usize, msg: String },
    /// Named definition missing from an input file.
    UnknownName(String),
    /// Everything else (I/O wrappers in the CLI, bad indices, ...).
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateDivisor => write!(f, "pseudo-division divisor has degree <= 0 in the chosen variable"),
            Error::ZeroPolynomial => write!(f, "zero polynomial not allowed here"),
            Error::UndefinedSeparant => write!(f, "undefined separant: distinguished variable does not occur"),
            Error::SeparantVanishesAtReduction => write!(f, "separant vanishes at reduction"),
            Error::ZeroInequation => write!(f, "inequation polynomial is zero (set would be empty)"),
            Error::ArityMismatch(s) => write!(f, "arity mismatch: {s}"),
            Error::DepthMismatch { needed, available } => {
                write!(f, "jet depth mismatch: need depth {needed}, point has {available}")
            }
            Error::ProjectedVariableOccurs => write!(f, "projected variable occurs in formula"),
            Error::EmptyCell => write!(f, "empty cell"),
            Error::OutOfFragment(s) => write!(f, "requires general cell decomposition (out of scope): {s}"),
            Error::PrecisionTooSmall => write!(f, "precision too small"),
            Error::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
            Error::UnknownName(n) => write!(f, "unknown name: {n}"),
            Error::Invalid(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

//! Special L-values of CM eta quotients.
//!
//! This crate computes central and near-central L-values of a small family of
//! CM modular forms (eta quotients with complex multiplication by Q(i) or
//! Q(sqrt(-3))) by three independent routes, and checks the results against
//! each other to high precision:
//!
//! * period integrals of the eta quotients themselves (exact integer
//!   q-expansions plus incomplete-gamma sums split at the Fricke point),
//! * hypergeometric closed forms (Gauss/Clausen evaluations reducing to
//!   Beta-function monomials),
//! * CM values of weight-k Eisenstein series attached to a Hecke character.
//!
//! Supporting layers: exact truncated q-series arithmetic ([`qseries`]),
//! high-precision special functions ([`hyperfun`]), Hecke character
//! coefficients ([`heckechar`]), the L-value routes ([`lvalues`]), CM
//! evaluation of modular functions as radical expressions ([`cmalg`]), and a
//! command-line driver ([`cli`]).

pub mod cli;
pub mod cmalg;
pub mod heckechar;
pub mod hyperfun;
pub mod lvalues;
pub mod qseries;
pub mod real;

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input text could not be parsed; `offset` is a byte position into the input.
    #[error("parse error at offset {offset}: {msg}")]
    Parse {
        /// Byte offset of the first character that could not be consumed.
        offset: usize,
        /// Human-readable description.
        msg: String,
    },
    /// An Eisenstein series outside the supported residue class was requested.
    #[error("unsupported residue class: {0}")]
    UnsupportedResidue(String),
    /// A numeric evaluation could not certify the requested accuracy from the
    /// available truncation.
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    /// Gamma (or a quantity derived from it) was evaluated at a pole.
    #[error("pole: {0}")]
    Pole(String),
    /// A hypergeometric series was evaluated outside its convergence domain.
    #[error("divergent series: {0}")]
    Divergent(String),
    /// An argument was outside the supported domain (e.g. an even-indexed
    /// radical of a negative number).
    #[error("domain error: {0}")]
    Domain(String),
    /// No candidate root matched the numeric estimate within tolerance.
    #[error("root selection failed: {0}")]
    RootSelection(String),
    /// Malformed argument combination.
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

//! Exact linear and multilinear algebra for three-way tensors over the
//! rationals and small prime fields, with a focus on *certified* statements
//! about tensor rank, border rank, and additivity of rank over direct sums.
//!
//! The crate is organised in layers:
//!
//! * [`exactalg`] — exact scalars (arbitrary-precision rationals and prime
//!   residue fields), dense exact matrices with fraction-free elimination,
//!   and Laurent polynomials used by the border-rank curve verifier.
//! * [`tensor3`] — dense order-three tensors, slice spaces of matrices,
//!   conciseness reduction, direct sums with block splittings, and matrix
//!   subspace utilities (membership, intersection, hook profiles).
//! * [`rankengine`] — an exact rank oracle over finite fields (depth-first
//!   search over projective rank-one matrices), rank lower bounds, the
//!   substitution method, and a prover that certifies additivity of rank
//!   for direct sums whose second summand has a hook-shaped slice space.
//! * [`sumsplit`] — analysis of minimal decompositions of a direct sum:
//!   E/F profiles, the seven-bucket classification of rank-one elements,
//!   projection inequalities, repletion and digestion transformations, and
//!   theorem gates that guarantee additivity from cheap side conditions.
//! * [`borderlab`] — border-rank machinery: commutator equations for
//!   border rank at most the slice count, Koszul flattenings, exact
//!   border-rank values for highly unbalanced formats, verification of
//!   epsilon-curve decompositions, and the table of smallest open
//!   border-additivity cases.
//! * [`cli`] — the `tensorlab` command-line interface: JSON reports on
//!   stdout, human-readable summaries on stderr.

pub mod borderlab;
pub mod cli;
pub mod exactalg;
pub mod rankengine;
pub mod report;
pub mod sumsplit;
pub mod tensor3;

use thiserror::Error;

/// Crate-wide error type. Arithmetic invariant violations (mixing fields,
/// shape mismatches in internal code paths) panic instead: they are bugs,
/// not runtime conditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime in the supported range (2..2^31)")]
    BadModulus(u64),
    #[error("cannot parse scalar {text:?}: {reason}")]
    BadScalar { text: String, reason: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("Laurent exponent {exp} outside allowed window {min}..={max}")]
    WindowOverflow { exp: i64, min: i64, max: i64 },
    #[error("zero Laurent polynomial has no lowest term")]
    ZeroPolynomial,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("tensor file is invalid: {0}")]
    BadTensorFile(String),
    #[error("duplicate entry at ({0}, {1}, {2})")]
    DuplicateEntry(usize, usize, usize),
    #[error("index ({i}, {j}, {k}) out of range for dims ({a}, {b}, {c})")]
    EntryOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        a: usize,
        b: usize,
        c: usize,
    },
    #[error("operation requires a finite field, got rationals")]
    NeedsFiniteField,
    #[error("operation unsupported over this field: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

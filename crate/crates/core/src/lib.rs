//! Exact-arithmetic engine for tree-sum tautological classes on moduli of curves.
//!
//! The crate is organized around the computation pipeline:
//!
//! - [`poly`] — arbitrary-precision rationals and sparse multivariate
//!   polynomials in the leg weights `a1..an` (and generic kernel weights
//!   `x1..xk`), with a canonical graded-lex text form used by cache files.
//! - [`trees`] — stable rooted trees, their degree-labeled/leveled and
//!   pre-stable star specializations, and the combinatorial coefficients
//!   attached to them.
//! - [`wk`] — Witten–Kontsevich psi-intersection numbers.
//! - [`kernel`] — integrals of `lambda_g DR_g` against psi powers, computed
//!   by a splitting recursion over a calibrated base table.
//! - [`assembly`] — the B, A and Xi pairings against frozen-psi monomials.
//! - [`reduce`] — reduction of decorated test classes (boundary splits,
//!   kappa classes, psi at regular legs) to frozen-psi pairings.
//! - [`verify`] — the degree-bound checks run by the verifier.
//!
//! The crate is `no_std` (alloc only); IO, caching and the CLI live in the
//! companion `tautrel` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assembly;
pub mod kernel;
pub mod poly;
pub mod reduce;
pub mod trees;
pub mod verify;
pub mod wk;

use alloc::string::String;
use core::fmt;

/// Errors shared by the computational modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Exact division failed; in the kernel recursion this signals a logic
    /// error in the caller rather than a recoverable condition.
    NotDivisible,
    /// The requested moduli target `(g, n[, m])` is unstable.
    UnstableTarget,
    /// Kernel base constants are not calibrated for this `(g, k)`.
    UncalibratedBase { g: u32, k: u32 },
    /// Base-table assembly or validation failed.
    InconsistentCalibration(String),
    /// Formal `(x1 + x2)^{-1}` pairing requested with vanishing denominator.
    ZeroDenominator,
    /// A separating-split rule was invoked with incompatible data.
    InvalidSplit(String),
    /// Operands live in different variable universes.
    VarMismatch,
    /// Canonical text form could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotDivisible => write!(f, "polynomial is not exactly divisible"),
            Error::UnstableTarget => write!(f, "unstable moduli target"),
            Error::UncalibratedBase { g, k } => {
                write!(f, "kernel base table not calibrated for (g={g}, k={k})")
            }
            Error::InconsistentCalibration(msg) => write!(f, "inconsistent calibration: {msg}"),
            Error::ZeroDenominator => write!(f, "formal pairing with zero denominator"),
            Error::InvalidSplit(msg) => write!(f, "invalid split: {msg}"),
            Error::VarMismatch => write!(f, "variable universe mismatch"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

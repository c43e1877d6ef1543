//! Bound-state energies of the short-range potential
//! `V(r) = V₀ (e^{-λr} - γ) / (e^{λr} - 1)` for any angular momentum.
//!
//! The primary solver is the asymptotic iteration method ([`aim`]) run on
//! extended-precision Taylor jets ([`numerics`]) after mapping the radial
//! equation, with the Pekeris-type centrifugal term, onto `x ∈ (-1, 1)`
//! ([`potential`]). A finite-difference eigensolver ([`oracle`]) solves the
//! same radial equation directly, with either the exact or the approximated
//! centrifugal term, and serves as an independent check.

// `!(a < b)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aim;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod potential;

pub use aim::{converge_spectrum, AimConfig, AimProblem, SpectrumResult};
pub use error::{Error, Result};
pub use numerics::{Jet, PScalar, Precision};
pub use oracle::{CentrifugalMode, OracleConfig};
pub use potential::{make_aim_problem, make_aim_problem_with, Formulation, PotentialParams};

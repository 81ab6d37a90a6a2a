//! Exact verification toolkit for 6x6 skew-symmetric matrices of linear forms
//! on P^4 with vanishing Pfaffian.
//!
//! Module map:
//! - [`exactalg`]: rationals, matrices, polynomials, graded pieces;
//! - [`pfaffcalc`]: Pfaffians, sub-Pfaffians, syzygies, ideal pieces, saturation;
//! - [`jets`]: truncated jets of matrices and polynomials;
//! - [`tangent`]: tangent spaces, degree-2 tangent cones, orbit codimensions;
//! - [`classify`]: the catalog of normal forms and the invariant classifier;
//! - [`strata`]: degeneration families between the strata;
//! - [`closure`]: membership in the closure of the Pfaffian incidence
//!   correspondence, with jet witnesses;
//! - [`report`]: named pass/fail checks used by the verifiers.

pub mod classify;
pub mod closure;
pub mod error;
pub mod exactalg;
pub mod jets;
pub mod pfaffcalc;
pub mod report;
pub mod strata;
pub mod tangent;

pub use error::{Error, Result};

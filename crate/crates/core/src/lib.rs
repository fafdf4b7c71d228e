//! Gap probabilities for the finite Gaussian and Jacobi unitary ensembles.
//!
//! The library evaluates the probability E2(0; I) that a symmetric region I
//! of the spectrum is free of eigenvalues, by several independent routes:
//!
//! * finite-rank Fredholm (Gram) determinants over the orthonormal
//!   polynomial basis ([`gap`]),
//! * coupled nonlinear ODE systems for the resolvent boundary values
//!   ([`ode`]),
//! * explicit closed forms for N = 1, 2 and the flat-weight family
//!   ([`closedform`]),
//! * Painleve-V / Painleve-VI parametrizations ([`painleve`]),
//! * Monte Carlo sampling of the matrix models ([`mc`]).
//!
//! The routes deliberately overlap so that each can be cross-validated
//! against the others; [`scaling`] adds the large-N edge limit and the
//! Jacobi-to-Hermite limit as further consistency checks.

// Comparisons written as !(x > 0.0) are deliberate: they reject NaN along
// with the out-of-domain values, which x <= 0.0 would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closedform;
pub mod error;
pub mod gap;
pub mod geometry;
pub mod linalg;
pub mod mc;
pub mod ode;
pub mod orthopoly;
pub mod painleve;
pub mod quadrature;
pub mod scaling;
pub mod specfun;

pub use error::{Error, Result};
pub use geometry::{GapGeometry, IntervalSet};
pub use orthopoly::{OrthonormalBasis, WeightSpec};

//! Exact computer algebra and q-spectral analysis on the quantum disc.
//!
//! - [`scalar`]: the coefficient field ℚ(q^(1/2)) and numeric evaluation
//! - [`polalg`]: Pol(ℂ)_q, normal-ordered polynomials in `z`, `z*`
//! - [`hopf`]: U_q sl₂ in PBW form, its Hopf structure and action on Pol(ℂ)_q
//! - [`discfun`]: Fun(U)_q = Pol(ℂ)_q + D(U)_q, the matrix model and invariant integrals
//! - [`laplace`]: the radial q-difference Laplacian, eigenfunctions and spectra
//! - [`cli`]: expression parsing, serialization and command dispatch

pub mod cli;
pub mod discfun;
pub mod error;
pub mod expr;
pub mod hopf;
pub mod laplace;
pub mod polalg;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{ExactScalar, NumericContext};

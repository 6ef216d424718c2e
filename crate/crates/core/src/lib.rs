//! Numerical realizations of the classical identities around the
//! Cauchy-Riemann equations: contour integrals and path independence,
//! Green's formula, the divergence theorem and steady potential-flow
//! equations, all driven by user expressions.
//!
//! The crate is organized bottom-up:
//!
//! * [`expr`]: parsing, evaluation and symbolic differentiation,
//! * [`geometry`]: paths, homotopies, plane regions and solids,
//! * [`quad`]: contour, area, surface and volume quadrature,
//! * [`analysis`]: pointwise residual fields and winding numbers,
//! * [`theorems`]: two-sided checks producing [`VerificationReport`]s,
//! * [`fluids`]: potential flow, incompressibility and Bernoulli checks.

pub mod error;
pub mod expr;
pub mod geometry;
pub mod quad;
pub mod analysis;
pub mod theorems;
pub mod fluids;

pub use error::{Error, Result};
pub use expr::{EvalEnv, Expr, Mode, Var};
pub use num_complex::Complex64;
pub use quad::QuadSpec;
pub use theorems::{Status, VerificationReport};

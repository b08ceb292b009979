//! Bounds for the first two Dirichlet eigenvalues of triangles.
//!
//! The crate is organised bottom-up:
//!
//! - [`triangle`]: normalisation, the `(U, M)` chart, metrics and reference maps.
//! - [`lower`]: closed-form lower bounds for `λ₁` and the Freitas/Pólya crossover.
//! - [`bessel`]: `J_v` for real order and refined zeros with Qu–Wong brackets.
//! - [`exact`] and [`trig`]: exact trigonometric polynomials and their integrals
//!   over the reference triangles.
//! - [`upper`]: variational bounds for `λ₂` and the polynomial inequalities behind
//!   the gap and ratio estimates.
//! - [`bipoly`] and [`prover`]: bivariate polynomials over `ℚ[π]` and the
//!   rectangle reduction prover.
//! - [`oracle`]: a raster eigensolver and symmetrisation transforms used as
//!   numerical ground truth.

pub mod bessel;
pub mod bipoly;
pub mod exact;
pub mod lower;
pub mod oracle;
pub mod prover;
pub mod triangle;
pub mod trig;
pub mod upper;

pub use lower::{BoundResult, Direction, Method};
pub use triangle::{Triangle, TriangleMetrics};

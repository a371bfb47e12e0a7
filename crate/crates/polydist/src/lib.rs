//! Polynomial probability distributions.
//!
//! A polynomial density is an ordinary polynomial that is non-negative on a
//! finite support interval and integrates to one there. This crate provides
//! the full toolchain around that idea:
//!
//! - [`poly`]: coefficient-form polynomials with exact calculus (evaluation,
//!   derivatives, integrals, moments) plus root finding and Sturm counting.
//! - [`forms`]: factored (root) and partial-fraction representations and the
//!   conversions between them.
//! - [`nonneg`]: non-negativity certification by Sturm counts, by root
//!   classification, and by numeric integral tests.
//! - [`pdf`]: validated densities with CDF, quantiles, moments, entropy,
//!   KL divergence, convolution, mixtures, and posterior products.
//! - [`transform`]: support remapping and the memoryless density transforms.
//! - [`fit`]: constrained least-squares and Lagrange square-root fits of
//!   histograms, with negativity repair.
//! - [`piecewise`]: smooth piecewise densities through prescribed control
//!   points, solved as small quadratic programs.
//! - [`estimate`]: likelihood machinery, moment matching, Fisher information
//!   and Cramér-Rao bounds.
//! - [`sample`]: deterministic random variate generation by discretized
//!   inverse CDF and by rejection with piecewise envelopes.

pub mod error;
pub mod estimate;
pub mod exp_integrals;
pub mod fit;
pub mod forms;
pub mod interval;
mod linalg;
pub mod nonneg;
pub mod pdf;
pub mod piecewise;
pub mod poly;
mod qp;
pub mod quadrature;
pub mod roots;
pub mod sample;
pub mod serialize;
pub mod sturm;
pub mod tol;
pub mod transform;

pub use error::{Error, Result};
pub use forms::{FactoredPolynomial, RationalExpansion};
pub use interval::Interval;
pub use nonneg::{NonNegativityReport, Verdict};
pub use pdf::{Density, PolynomialPdf};
pub use piecewise::{ControlPoints, PiecewisePdf};
pub use poly::Polynomial;
pub use sample::GeneratorState;

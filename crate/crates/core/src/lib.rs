//! Symmetric formal Fourier-Jacobi series of cogenus 1 in genus two.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: exact rationals, Bernoulli numbers, divisor sums, elliptic
//!   Eisenstein series, root-of-unity group-ring coefficients and truncated
//!   q-expansions with fractional exponents.
//! * [`reduction`]: positive definite rational symmetric matrices, the right
//!   action `t[u] = u^T t u`, Minkowski reduction in sizes up to three,
//!   unimodular completion and the torsion decomposition of
//!   `[[1, 0], [-lambda^T, 1]]`.
//! * [`jacobi`]: truncated Jacobi forms, the index-one weak generators,
//!   holomorphic/cusp bases, products and specialization at torsion points.
//! * [`fjseries`]: formal Fourier-Jacobi series, the arithmetic lift,
//!   symmetry audits, polynomial relations and monicization.
//! * [`convergence`]: numerical certificates for coefficient growth, the
//!   convergence disc at torsion points and local boundedness of partial
//!   sums.
//! * [`cli`]: the `fjcert` batch front-end.

pub mod arith;
pub mod cli;
pub mod convergence;
pub mod error;
pub mod fjseries;
pub mod jacobi;
pub mod reduction;

pub use error::{Error, Result};

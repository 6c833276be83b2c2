//! Reduction theory for small positive definite rational forms and the
//! integer matrix decompositions attached to torsion points.

mod enumerate;
mod matrix;
mod minkowski;
mod torsion;

pub use enumerate::{
    diagonal_bound, enumerate_r, enumerate_s, in_r, in_s, r_count_constant, REnumeration,
    DEFAULT_CAP,
};
pub use matrix::{act, is_positive_definite, HalfIntIndex, IntMatrix, QMatrix, SymMatQ, UnimodularMat};
pub use minkowski::{brute_force_minimum, hermite_check, is_minkowski_reduced, minkowski_reduce};
pub use torsion::{
    common_denominator, torsion_decomposition, unimodular_completion, TorsionDecomposition,
};

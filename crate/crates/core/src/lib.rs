//! Simulation and numerics for the Brownian separable permutons and the
//! Brownian cographons.
//!
//! * [`signed_trees`] samples permutations and cographs exactly at finite `n`
//!   through uniform signed binary trees, and runs the tree dynamic programs
//!   (longest increasing subsequence, cliques, selection and discarding rules).
//! * [`excursion`] is a discrete signed-excursion simulator: Dyck paths, the
//!   induced order on sample points, the interval fragmentation and the
//!   survival of a tagged fragment under the selection rule.
//! * [`exponents`] evaluates the Laplace exponents of the tagged fragment and
//!   solves for the exponent bounds `alpha_*(p)` and `beta^*(p)`.
//! * [`subsequence`] holds permutation-level LIS machinery.
//! * [`experiments`] is the reproducible Monte-Carlo harness.

// `!(x > y)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod excursion;
pub mod experiments;
pub mod exponents;
pub mod signed_trees;
pub mod subsequence;

pub use error::{Error, Result};
pub use signed_trees::{Permutation, Sign, SignedBinaryTree};

//! Exact rational linear algebra and linear feasibility.

pub mod feasibility;
pub mod matrix;
pub mod sign;

pub use feasibility::{solve_feasibility, FeasibilityResult, LinearConstraint, Relation};
pub use matrix::{orthocomplement_restricted, RationalMatrix, Rref};
pub use sign::{column_space_vector_with_signs, sign_compatible_sigma};

//! Sign compatibility with the column space of a matrix.

use num_traits::Zero;

use super::feasibility::{solve_feasibility, LinearConstraint, Relation};
use super::matrix::RationalMatrix;
use crate::rational::{primitive_integer_vector, sign_of, Rational};

/// Finds `σ = N x` whose sign pattern matches the prescribed one on every species
/// where a sign is given (`None` leaves the entry unconstrained).
pub fn column_space_vector_with_signs(
    n: &RationalMatrix,
    signs: &[Option<i8>],
) -> Option<Vec<Rational>> {
    assert_eq!(signs.len(), n.rows(), "one sign per row expected");
    let constraints: Vec<LinearConstraint> = signs
        .iter()
        .enumerate()
        .filter_map(|(s, sign)| {
            let relation = match (*sign)? {
                1 => Relation::Gt,
                -1 => Relation::Lt,
                _ => Relation::Eq,
            };
            let row = n.row(s).iter().cloned().enumerate();
            Some(LinearConstraint::new(row, relation, Rational::zero()))
        })
        .collect();
    let x = solve_feasibility(n.cols(), &constraints).into_sample()?;
    Some(primitive_integer_vector(&n.mul_vec(&x)))
}

/// A vector in the column space of `n` with exactly the signs of `mu`, scaled to
/// coprime integers; `None` when no such vector exists.
pub fn sign_compatible_sigma(mu: &[Rational], n: &RationalMatrix) -> Option<Vec<Rational>> {
    let signs: Vec<Option<i8>> = mu.iter().map(|v| Some(sign_of(v))).collect();
    column_space_vector_with_signs(n, &signs)
}

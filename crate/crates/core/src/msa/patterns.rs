//! Sign patterns for `g_W` and `h_W` on the class representatives.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::partition::EquivalencePartition;
use crate::linalg::{solve_feasibility, LinearConstraint, Relation};
use crate::rational::Rational;

/// Per-class signs of `g_W` and `h_W`, indexed by class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPattern {
    pub g: Vec<i8>,
    pub h: Vec<i8>,
}

impl SignPattern {
    pub fn is_degenerate(&self, class: usize) -> bool {
        self.g[class] == 0
    }

    /// Sign of `ρ = h / g` for a nondegenerate class.
    pub fn rho_sign(&self, class: usize) -> Option<i8> {
        (self.g[class] != 0).then(|| self.h[class] * self.g[class])
    }
}

/// Choices tried for a reversible class, in enumeration order.
pub const REVERSIBLE_CHOICES: [(i8, i8); 9] = [
    (1, 1),
    (1, -1),
    (1, 0),
    (-1, 1),
    (-1, -1),
    (-1, 0),
    (0, 1),
    (0, -1),
    (0, 0),
];

fn relation_for(sign: i8) -> Relation {
    match sign {
        1 => Relation::Gt,
        -1 => Relation::Lt,
        _ => Relation::Eq,
    }
}

/// Linear conditions on kernel combinations realizing the given partial patterns.
///
/// Variables `0..k` combine the kernel basis for `g`, variables `k..2k` for `h`.
fn realizability_constraints(
    partition: &EquivalencePartition,
    choices: &[(i8, i8)],
) -> Vec<LinearConstraint> {
    let k = partition.kernel.len();
    let mut constraints = Vec::new();
    for (class, &(g, h)) in choices.iter().enumerate() {
        let row = partition
            .row(partition.classes[class].representative)
            .expect("representative is oriented");
        for (offset, sign) in [(0, g), (k, h)] {
            let terms = row.iter().enumerate().map(|(l, c)| (l + offset, c.clone()));
            constraints.push(LinearConstraint::new(terms, relation_for(sign), Rational::zero()));
        }
    }
    constraints
}

/// Whether kernel vectors exist whose representative coordinates carry the given signs.
pub fn is_realizable(partition: &EquivalencePartition, pattern: &SignPattern) -> bool {
    let choices: Vec<(i8, i8)> = pattern.g.iter().copied().zip(pattern.h.iter().copied()).collect();
    let constraints = realizability_constraints(partition, &choices);
    solve_feasibility(2 * partition.kernel.len(), &constraints).is_feasible()
}

/// Every realizable sign pattern, nonreversible classes pinned to `(+, +)`.
pub fn enumerate_sign_patterns(partition: &EquivalencePartition) -> Vec<SignPattern> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    extend(partition, &mut prefix, &mut out);
    out
}

fn extend(partition: &EquivalencePartition, prefix: &mut Vec<(i8, i8)>, out: &mut Vec<SignPattern>) {
    let class = prefix.len();
    if class == partition.classes.len() {
        out.push(SignPattern {
            g: prefix.iter().map(|c| c.0).collect(),
            h: prefix.iter().map(|c| c.1).collect(),
        });
        return;
    }
    let options: &[(i8, i8)] = if partition.classes[class].reversible {
        &REVERSIBLE_CHOICES
    } else {
        &REVERSIBLE_CHOICES[..1]
    };
    for &choice in options {
        prefix.push(choice);
        let constraints = realizability_constraints(partition, prefix);
        if solve_feasibility(2 * partition.kernel.len(), &constraints).is_feasible() {
            extend(partition, prefix, out);
        }
        prefix.pop();
    }
}

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::graph;
use super::reaction_network::ReactionNetwork;
use crate::error::{MsaError, Result};
use crate::linalg::{solve_feasibility, LinearConstraint, Relation};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub positive_dependent: bool,
    pub t_minimal: bool,
    pub terminal_strong_linkage_classes: usize,
    pub linkage_classes: usize,
    pub cut_pair_condition: bool,
    /// Adjacent pairs of terminal complexes that are not cut pairs (complex indices).
    pub non_cut_pairs: Vec<(usize, usize)>,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.positive_dependent && self.t_minimal && self.cut_pair_condition
    }
}

impl ReactionNetwork {
    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.reactions()
            .iter()
            .any(|r| (r.reactant, r.product) == (a, b) || (r.reactant, r.product) == (b, a))
    }

    /// Whether removing every arrow between `a` and `b` splits their linkage class.
    pub fn is_cut_pair(&self, a: usize, b: usize) -> Result<bool> {
        if !self.are_adjacent(a, b) {
            return Err(MsaError::NotAdjacent(a, b));
        }
        let remaining: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter(|&(x, y)| !((x, y) == (a, b) || (x, y) == (b, a)))
            .collect();
        let vertices: Vec<usize> = (0..self.num_complexes()).collect();
        let comps = graph::undirected_components(&vertices, &remaining);
        Ok(!comps.iter().any(|c| c.contains(&a) && c.contains(&b)))
    }

    /// Exact test for `Σ α_j (y'_j − y_j) = 0` with every `α_j > 0`.
    pub fn is_positive_dependent(&self) -> bool {
        self.positive_dependence_vector().is_some()
    }

    /// A strictly positive vector in the kernel of `N`, if one exists.
    pub fn positive_dependence_vector(&self) -> Option<Vec<Rational>> {
        let n = self.stoichiometric_matrix();
        let r = self.num_reactions();
        let mut constraints: Vec<LinearConstraint> = (0..n.rows())
            .map(|s| {
                LinearConstraint::new(n.row(s).iter().cloned().enumerate(), Relation::Eq, Rational::zero())
            })
            .collect();
        constraints.extend(
            (0..r).map(|j| LinearConstraint::new([(j, Rational::one())], Relation::Gt, Rational::zero())),
        );
        solve_feasibility(r, &constraints).into_sample()
    }

    pub fn regularity_report(&self) -> RegularityReport {
        let terminal = self.terminal_strong_linkage_classes();
        let mut is_terminal = vec![false; self.num_complexes()];
        for c in terminal.iter().flatten() {
            is_terminal[*c] = true;
        }
        let mut non_cut_pairs = Vec::new();
        for r in self.reactions() {
            let (a, b) = (r.reactant.min(r.product), r.reactant.max(r.product));
            if is_terminal[a] && is_terminal[b] && !non_cut_pairs.contains(&(a, b)) {
                let cut = self.is_cut_pair(a, b).expect("reaction endpoints are adjacent");
                if !cut {
                    non_cut_pairs.push((a, b));
                }
            }
        }
        let linkage = self.linkage_classes().len();
        RegularityReport {
            positive_dependent: self.is_positive_dependent(),
            t_minimal: terminal.len() == linkage,
            terminal_strong_linkage_classes: terminal.len(),
            linkage_classes: linkage,
            cut_pair_condition: non_cut_pairs.is_empty(),
            non_cut_pairs,
        }
    }
}

//! Equivalence classes of oriented reactions and their fundamental closures.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::orientation::Orientation;
use crate::network::{graph, ReactionNetwork};
use crate::rational::Rational;

/// A nonzero equivalence class `P_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// Reaction indices, ascending.
    pub members: Vec<usize>,
    /// `alphas[k]`: kernel row of `members[k]` equals `alpha` times the representative's row.
    pub alphas: Vec<Rational>,
    pub representative: usize,
    /// Every member is reversible in the full network.
    pub reversible: bool,
}

impl EquivalenceClass {
    pub fn alpha_of(&self, j: usize) -> Option<&Rational> {
        self.members.iter().position(|&m| m == j).map(|k| &self.alphas[k])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalencePartition {
    pub orientation: Orientation,
    /// Kernel basis of `L_O`, each vector indexed by position in the orientation.
    pub kernel: Vec<Vec<Rational>>,
    /// Reactions whose kernel coordinates all vanish.
    pub p0: Vec<usize>,
    pub classes: Vec<EquivalenceClass>,
}

/// Reason the partition alone rules out multiple equilibria.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EarlyExit {
    IrreversibleInZerothClass { reaction: String },
    OppositeIrreversiblePair { first: String, second: String },
}

impl EquivalencePartition {
    pub fn compute(net: &ReactionNetwork, orientation: Orientation) -> Self {
        let kernel = orientation.l_matrix(net).nullspace();
        let rows: Vec<Vec<Rational>> = (0..orientation.len())
            .map(|p| kernel.iter().map(|v| v[p].clone()).collect())
            .collect();

        let mut p0 = Vec::new();
        // Key: row divided by its first nonzero entry.
        let mut groups: Vec<(Vec<Rational>, Vec<usize>)> = Vec::new();
        for (p, &j) in orientation.reactions().iter().enumerate() {
            let row = &rows[p];
            let Some(lead) = row.iter().find(|v| !v.is_zero()) else {
                p0.push(j);
                continue;
            };
            let key: Vec<Rational> = row.iter().map(|v| v / lead).collect();
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, members)) => members.push(j),
                None => groups.push((key, vec![j])),
            }
        }

        let classes = groups
            .into_iter()
            .map(|(_, members)| {
                let representative = members
                    .iter()
                    .copied()
                    .find(|&j| !net.is_reversible(j))
                    .unwrap_or(members[0]);
                let rep_row = &rows[orientation.position(representative).unwrap()];
                let lead = rep_row.iter().position(|v| !v.is_zero()).unwrap();
                let alphas = members
                    .iter()
                    .map(|&j| &rows[orientation.position(j).unwrap()][lead] / &rep_row[lead])
                    .collect();
                let reversible = members.iter().all(|&j| net.is_reversible(j));
                EquivalenceClass {
                    members,
                    alphas,
                    representative,
                    reversible,
                }
            })
            .collect();

        Self {
            orientation,
            kernel,
            p0,
            classes,
        }
    }

    /// Kernel coordinates of an oriented reaction.
    pub fn row(&self, j: usize) -> Option<Vec<Rational>> {
        let p = self.orientation.position(j)?;
        Some(self.kernel.iter().map(|v| v[p].clone()).collect())
    }

    pub fn class_of(&self, j: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.members.contains(&j))
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.representative).collect()
    }

    /// The zeroth-class and sign conditions that end the analysis immediately.
    pub fn early_exit(&self, net: &ReactionNetwork) -> Option<EarlyExit> {
        let id = |j: usize| net.reactions()[j].id.clone();
        if let Some(&j) = self.p0.iter().find(|&&j| !net.is_reversible(j)) {
            return Some(EarlyExit::IrreversibleInZerothClass { reaction: id(j) });
        }
        for class in &self.classes {
            let irreversible: Vec<(usize, &Rational)> = class
                .members
                .iter()
                .zip(&class.alphas)
                .filter(|(j, _)| !net.is_reversible(**j))
                .map(|(j, a)| (*j, a))
                .collect();
            for (x, (a, alpha_a)) in irreversible.iter().enumerate() {
                for (b, alpha_b) in &irreversible[x + 1..] {
                    if (*alpha_a * *alpha_b).is_negative() {
                        return Some(EarlyExit::OppositeIrreversiblePair {
                            first: id(*a),
                            second: id(*b),
                        });
                    }
                }
            }
        }
        None
    }

    /// Reversible members whose proportionality factor against the representative is negative.
    pub fn misaligned(&self) -> Vec<usize> {
        self.classes
            .iter()
            .flat_map(|c| {
                c.members
                    .iter()
                    .zip(&c.alphas)
                    .filter(|(_, a)| a.is_negative())
                    .map(|(j, _)| *j)
            })
            .collect()
    }
}

/// Flips misaligned reversible reactions until every proportionality factor is positive.
///
/// Returns the realigned partition and the reactions that were replaced by their
/// reverses, or `None` when some misaligned reaction is irreversible.
pub fn realign(
    net: &ReactionNetwork,
    partition: EquivalencePartition,
) -> Option<(EquivalencePartition, Vec<usize>)> {
    let mut current = partition;
    let mut flipped = Vec::new();
    // Flipping negates one kernel coordinate, so one round suffices; the bound only
    // guards against malformed input.
    for _ in 0..=net.num_reactions() {
        let bad = current.misaligned();
        if bad.is_empty() {
            return Some((current, flipped));
        }
        if bad.iter().any(|&j| !net.is_reversible(j)) {
            return None;
        }
        flipped.extend(bad.iter().copied());
        let orientation = current.orientation.flipped(net, &bad);
        current = EquivalencePartition::compute(net, orientation);
    }
    None
}

/// Strong-linkage structure of the subnetwork formed by one fundamental class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colinkage {
    pub complexes: Vec<usize>,
    pub strong_classes: Vec<Vec<usize>>,
    pub terminal: Vec<bool>,
}

impl Colinkage {
    fn of(net: &ReactionNetwork, reactions: &[usize]) -> Self {
        let edges: Vec<(usize, usize)> = reactions
            .iter()
            .map(|&j| (net.reactions()[j].reactant, net.reactions()[j].product))
            .collect();
        let mut complexes: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        complexes.sort_unstable();
        complexes.dedup();
        let strong_classes = graph::strong_components(&complexes, &edges);
        let terminal = graph::terminal_flags(&strong_classes, &edges);
        Self {
            complexes,
            strong_classes,
            terminal,
        }
    }

    /// Index of the strong class containing a complex of this subnetwork.
    pub fn strong_class_of(&self, complex: usize) -> Option<usize> {
        self.strong_classes.iter().position(|c| c.contains(&complex))
    }

    pub fn nonterminal_classes(&self) -> Vec<&Vec<usize>> {
        self.strong_classes
            .iter()
            .zip(&self.terminal)
            .filter_map(|(c, t)| (!t).then_some(c))
            .collect()
    }

    pub fn terminal_classes(&self) -> Vec<&Vec<usize>> {
        self.strong_classes
            .iter()
            .zip(&self.terminal)
            .filter_map(|(c, t)| t.then_some(c))
            .collect()
    }
}

/// `C_i`: an equivalence class closed under reversible pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalClass {
    /// Reaction indices, ascending.
    pub reactions: Vec<usize>,
    pub colinkage: Colinkage,
}

impl FundamentalClass {
    fn close(net: &ReactionNetwork, members: &[usize]) -> Self {
        let mut reactions: Vec<usize> = members
            .iter()
            .flat_map(|&j| std::iter::once(j).chain(net.reactions()[j].reverse))
            .collect();
        reactions.sort_unstable();
        reactions.dedup();
        let colinkage = Colinkage::of(net, &reactions);
        Self {
            reactions,
            colinkage,
        }
    }
}

/// Fundamental classes: the closure of `P_0` (if nonempty) and of each `P_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalClasses {
    pub zeroth: Option<FundamentalClass>,
    pub classes: Vec<FundamentalClass>,
}

impl FundamentalClasses {
    pub fn compute(net: &ReactionNetwork, partition: &EquivalencePartition) -> Self {
        let zeroth = (!partition.p0.is_empty()).then(|| FundamentalClass::close(net, &partition.p0));
        let classes = partition
            .classes
            .iter()
            .map(|c| FundamentalClass::close(net, &c.members))
            .collect();
        Self { zeroth, classes }
    }
}

/// Partition rows keyed by reaction, for display.
pub fn kernel_rows(partition: &EquivalencePartition) -> BTreeMap<usize, Vec<Rational>> {
    partition
        .orientation
        .reactions()
        .iter()
        .map(|&j| (j, partition.row(j).unwrap()))
        .collect()
}

use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::complex::Complex;
use super::graph;
use crate::error::{MsaError, Result};
use crate::linalg::RationalMatrix;
use crate::rational::Rational;

/// A directed reaction between two complexes (indices into the network's complex list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reaction {
    pub id: String,
    pub reactant: usize,
    pub product: usize,
    /// Index of the opposite reaction when the pair is declared reversible.
    pub reverse: Option<usize>,
}

/// Input record for one directed reaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedReactionSpec {
    pub id: String,
    pub reactant: Complex,
    pub product: Complex,
    pub reverse_id: Option<String>,
}

/// Input record that may describe a reversible pair in one go.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReactionSpec {
    pub reactant: Complex,
    pub product: Complex,
    pub reversible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkNumbers {
    pub species: usize,
    pub complexes: usize,
    pub reactant_complexes: usize,
    pub reactions: usize,
    pub irreversible_reactions: usize,
    pub linkage_classes: usize,
    pub strong_linkage_classes: usize,
    pub terminal_strong_linkage_classes: usize,
    pub rank: usize,
    pub deficiency: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReactionNetwork {
    species: Vec<String>,
    complexes: Vec<Complex>,
    reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    /// Builds a network from directed reactions; reverse links may be declared on one
    /// or both sides of a pair.
    pub fn from_directed(species: Vec<String>, specs: Vec<DirectedReactionSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(MsaError::EmptyNetwork);
        }
        let mut complexes: Vec<Complex> = Vec::new();
        let mut complex_index: HashMap<Complex, usize> = HashMap::new();
        let mut intern = |c: &Complex| -> Result<usize> {
            if let Some(s) = c.support().find(|&s| s >= species.len()) {
                return Err(MsaError::UnknownSpecies(s));
            }
            Ok(*complex_index.entry(c.clone()).or_insert_with(|| {
                complexes.push(c.clone());
                complexes.len() - 1
            }))
        };

        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
        let mut reactions = Vec::with_capacity(specs.len());
        for (j, spec) in specs.iter().enumerate() {
            if ids.insert(spec.id.clone(), j).is_some() {
                return Err(MsaError::DuplicateId(spec.id.clone()));
            }
            if spec.reactant == spec.product {
                return Err(MsaError::SelfLoop(spec.id.clone()));
            }
            let reactant = intern(&spec.reactant)?;
            let product = intern(&spec.product)?;
            if let Some(&k) = pairs.get(&(reactant, product)) {
                return Err(MsaError::DuplicateReaction {
                    id: spec.id.clone(),
                    existing: specs[k].id.clone(),
                });
            }
            pairs.insert((reactant, product), j);
            reactions.push(Reaction {
                id: spec.id.clone(),
                reactant,
                product,
                reverse: None,
            });
        }

        for (j, spec) in specs.iter().enumerate() {
            let Some(rev_id) = &spec.reverse_id else {
                continue;
            };
            let bad = |problem: &str| MsaError::BadReversePairing {
                id: spec.id.clone(),
                reverse: rev_id.clone(),
                problem: problem.to_string(),
            };
            let &k = ids.get(rev_id).ok_or_else(|| bad("no reaction has that id"))?;
            if reactions[k].reactant != reactions[j].product
                || reactions[k].product != reactions[j].reactant
            {
                return Err(bad("it is not the opposite reaction"));
            }
            if let Some(other) = &specs[k].reverse_id {
                if other != &spec.id {
                    return Err(bad("that reaction names a different reverse"));
                }
            }
            reactions[j].reverse = Some(k);
            reactions[k].reverse = Some(j);
        }

        Ok(Self {
            species,
            complexes,
            reactions,
        })
    }

    /// Builds a network with generated ids `R1, R2, ...`; a reversible spec yields the
    /// forward reaction followed by its reverse.
    pub fn build(species: Vec<String>, specs: &[ReactionSpec]) -> Result<Self> {
        let mut directed = Vec::new();
        for spec in specs {
            let forward_id = format!("R{}", directed.len() + 1);
            if spec.reversible {
                let reverse_id = format!("R{}", directed.len() + 2);
                directed.push(DirectedReactionSpec {
                    id: forward_id.clone(),
                    reactant: spec.reactant.clone(),
                    product: spec.product.clone(),
                    reverse_id: Some(reverse_id.clone()),
                });
                directed.push(DirectedReactionSpec {
                    id: reverse_id,
                    reactant: spec.product.clone(),
                    product: spec.reactant.clone(),
                    reverse_id: Some(forward_id),
                });
            } else {
                directed.push(DirectedReactionSpec {
                    id: forward_id,
                    reactant: spec.reactant.clone(),
                    product: spec.product.clone(),
                    reverse_id: None,
                });
            }
        }
        Self::from_directed(species, directed)
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_complexes(&self) -> usize {
        self.complexes.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }

    pub fn reaction_index(&self, id: &str) -> Option<usize> {
        self.reactions.iter().position(|r| r.id == id)
    }

    pub fn complex_index(&self, c: &Complex) -> Option<usize> {
        self.complexes.iter().position(|x| x == c)
    }

    pub fn is_reversible(&self, j: usize) -> bool {
        self.reactions[j].reverse.is_some()
    }

    pub fn reactant(&self, j: usize) -> &Complex {
        &self.complexes[self.reactions[j].reactant]
    }

    pub fn product(&self, j: usize) -> &Complex {
        &self.complexes[self.reactions[j].product]
    }

    pub fn display_complex(&self, c: usize) -> String {
        self.complexes[c].display(&self.species)
    }

    pub fn display_reaction(&self, j: usize) -> String {
        format!(
            "{} -> {}",
            self.display_complex(self.reactions[j].reactant),
            self.display_complex(self.reactions[j].product)
        )
    }

    /// Product minus reactant, as a dense species vector.
    pub fn reaction_vector(&self, j: usize) -> Vec<Rational> {
        let m = self.num_species();
        let r = self.reactant(j).to_dense(m);
        let p = self.product(j).to_dense(m);
        p.into_iter().zip(r).map(|(a, b)| a - b).collect()
    }

    /// Reactant complexes in order of first use as a reactant.
    pub fn reactant_complexes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.complexes.len()];
        let mut out = Vec::new();
        for r in &self.reactions {
            if !seen[r.reactant] {
                seen[r.reactant] = true;
                out.push(r.reactant);
            }
        }
        out
    }

    /// `Y`: species by complexes.
    pub fn molecularity_matrix(&self) -> RationalMatrix {
        let cols: Vec<Vec<Rational>> = self
            .complexes
            .iter()
            .map(|c| c.to_dense(self.num_species()))
            .collect();
        RationalMatrix::from_columns(self.num_species(), &cols)
    }

    /// `I_a`: complexes by reactions, -1 at the reactant and +1 at the product.
    pub fn incidence_matrix(&self) -> RationalMatrix {
        let mut ia = RationalMatrix::zeros(self.num_complexes(), self.num_reactions());
        for (j, r) in self.reactions.iter().enumerate() {
            ia[(r.reactant, j)] = -Rational::one();
            ia[(r.product, j)] = Rational::one();
        }
        ia
    }

    /// `N = Y I_a`, built directly from reaction vectors.
    pub fn stoichiometric_matrix(&self) -> RationalMatrix {
        let cols: Vec<Vec<Rational>> = (0..self.num_reactions())
            .map(|j| self.reaction_vector(j))
            .collect();
        RationalMatrix::from_columns(self.num_species(), &cols)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.reactions.iter().map(|r| (r.reactant, r.product)).collect()
    }

    fn all_complexes(&self) -> Vec<usize> {
        (0..self.num_complexes()).collect()
    }

    pub fn linkage_classes(&self) -> Vec<Vec<usize>> {
        graph::undirected_components(&self.all_complexes(), &self.edges())
    }

    pub fn strong_linkage_classes(&self) -> Vec<Vec<usize>> {
        graph::strong_components(&self.all_complexes(), &self.edges())
    }

    pub fn terminal_strong_linkage_classes(&self) -> Vec<Vec<usize>> {
        let strong = self.strong_linkage_classes();
        let flags = graph::terminal_flags(&strong, &self.edges());
        strong
            .into_iter()
            .zip(flags)
            .filter_map(|(c, t)| t.then_some(c))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.stoichiometric_matrix().rank()
    }

    pub fn deficiency(&self) -> usize {
        self.num_complexes() - self.linkage_classes().len() - self.rank()
    }

    pub fn is_weakly_reversible(&self) -> bool {
        self.strong_linkage_classes().len() == self.linkage_classes().len()
    }

    pub fn is_t_minimal(&self) -> bool {
        self.terminal_strong_linkage_classes().len() == self.linkage_classes().len()
    }

    pub fn numbers(&self) -> NetworkNumbers {
        let l = self.linkage_classes().len();
        let s = self.rank();
        NetworkNumbers {
            species: self.num_species(),
            complexes: self.num_complexes(),
            reactant_complexes: self.reactant_complexes().len(),
            reactions: self.num_reactions(),
            irreversible_reactions: self.reactions.iter().filter(|r| r.reverse.is_none()).count(),
            linkage_classes: l,
            strong_linkage_classes: self.strong_linkage_classes().len(),
            terminal_strong_linkage_classes: self.terminal_strong_linkage_classes().len(),
            rank: s,
            deficiency: self.num_complexes() - l - s,
        }
    }

    /// Species coefficient table for each complex, for reports.
    pub fn complex_table(&self) -> BTreeMap<usize, String> {
        (0..self.num_complexes())
            .map(|c| (c, self.display_complex(c)))
            .collect()
    }
}

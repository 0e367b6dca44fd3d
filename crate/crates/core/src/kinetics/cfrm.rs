//! Reactant-multiple transformation of non-reactant-determined systems.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::system::KineticSystem;
use crate::error::{MsaError, Result};
use crate::network::{Complex, DirectedReactionSpec, ReactionNetwork};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfRmChange {
    pub reaction: String,
    pub multiple: u32,
    pub old_reactant: String,
    pub old_product: String,
    pub new_reactant: String,
    pub new_product: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfRmRecord {
    pub changes: Vec<CfRmChange>,
    pub new_reactants: Vec<String>,
    /// Reversible pairs broken because one side moved to a new reactant.
    pub unpaired: Vec<String>,
}

impl CfRmRecord {
    pub fn is_identity(&self) -> bool {
        self.changes.is_empty()
    }
}

/// Transforms with the default choice of untouched CF-subset at each reactant.
pub fn cf_rm_transform(system: &KineticSystem) -> Result<(KineticSystem, CfRmRecord)> {
    cf_rm_transform_with(system, &BTreeMap::new())
}

/// `keep` maps a reactant complex index to a reaction whose CF-subset must stay
/// unchanged; other reactants keep their largest subset (lowest reaction index on ties).
pub fn cf_rm_transform_with(
    system: &KineticSystem,
    keep: &BTreeMap<usize, usize>,
) -> Result<(KineticSystem, CfRmRecord)> {
    let net = system.network();
    let mut reactants: HashSet<Complex> = net
        .reactant_complexes()
        .into_iter()
        .map(|y| net.complexes()[y].clone())
        .collect();
    let mut new_reactant: Vec<Complex> = (0..net.num_reactions()).map(|j| net.reactant(j).clone()).collect();
    let mut new_product: Vec<Complex> = (0..net.num_reactions()).map(|j| net.product(j).clone()).collect();
    let mut record = CfRmRecord::default();

    for y in net.reactant_complexes() {
        let groups = system.cf_subsets(y)?;
        if groups.len() < 2 {
            continue;
        }
        let base = net.complexes()[y].clone();
        if base.is_zero() {
            return Err(MsaError::ZeroComplexNotFactorizable);
        }
        let kept = match keep.get(&y) {
            Some(j) => groups
                .iter()
                .position(|g| g.contains(j))
                .ok_or_else(|| MsaError::Invalid(format!("reaction {j} does not leave the chosen reactant")))?,
            None => {
                let largest = groups.iter().map(Vec::len).max().unwrap();
                groups.iter().position(|g| g.len() == largest).unwrap()
            }
        };
        for (gi, group) in groups.iter().enumerate() {
            if gi == kept {
                continue;
            }
            let mut q = 2u32;
            let multiple = loop {
                let candidate = base.scaled(&int(q as i64));
                if !reactants.contains(&candidate) {
                    break candidate;
                }
                q += 1;
            };
            reactants.insert(multiple.clone());
            record.new_reactants.push(multiple.display(net.species()));
            let shift = base.scaled(&Rational::from_integer((q - 1).into()));
            for &j in group {
                new_reactant[j] = new_reactant[j].plus(&shift);
                new_product[j] = new_product[j].plus(&shift);
                record.changes.push(CfRmChange {
                    reaction: net.reactions()[j].id.clone(),
                    multiple: q,
                    old_reactant: net.reactant(j).display(net.species()),
                    old_product: net.product(j).display(net.species()),
                    new_reactant: new_reactant[j].display(net.species()),
                    new_product: new_product[j].display(net.species()),
                });
            }
        }
    }

    if record.is_identity() {
        return Ok((system.clone(), record));
    }

    let changed: HashSet<usize> = record
        .changes
        .iter()
        .map(|c| net.reaction_index(&c.reaction).unwrap())
        .collect();
    let specs: Vec<DirectedReactionSpec> = net
        .reactions()
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let reverse_id = r.reverse.and_then(|k| {
                if changed.contains(&j) || changed.contains(&k) {
                    None
                } else {
                    Some(net.reactions()[k].id.clone())
                }
            });
            if r.reverse.is_some() && reverse_id.is_none() {
                record.unpaired.push(r.id.clone());
            }
            DirectedReactionSpec {
                id: r.id.clone(),
                reactant: new_reactant[j].clone(),
                product: new_product[j].clone(),
                reverse_id,
            }
        })
        .collect();
    let network = ReactionNetwork::from_directed(net.species().to_vec(), specs)?;
    let transformed = KineticSystem::new(
        network,
        system.kinetic_orders().clone(),
        system.rate_constants().map(<[Rational]>::to_vec),
    )?;
    Ok((transformed, record))
}

use crate::error::{MsaError, Result};
use crate::linalg::RationalMatrix;
use crate::network::ReactionNetwork;

/// One direction from every reversible pair plus every irreversible reaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    reactions: Vec<usize>,
}

impl Orientation {
    /// The first-listed member of each reversible pair.
    pub fn default_for(net: &ReactionNetwork) -> Self {
        let reactions = net
            .reactions()
            .iter()
            .enumerate()
            .filter(|(j, r)| r.reverse.is_none_or(|k| *j < k))
            .map(|(j, _)| j)
            .collect();
        Self { reactions }
    }

    pub fn from_reactions(net: &ReactionNetwork, mut reactions: Vec<usize>) -> Result<Self> {
        reactions.sort_unstable();
        reactions.dedup();
        let r = net.num_reactions();
        if let Some(&j) = reactions.iter().find(|&&j| j >= r) {
            return Err(MsaError::InvalidOrientation(format!("reaction index {j} out of range")));
        }
        for (j, reaction) in net.reactions().iter().enumerate() {
            let has_self = reactions.binary_search(&j).is_ok();
            match reaction.reverse {
                None if !has_self => {
                    return Err(MsaError::InvalidOrientation(format!(
                        "irreversible reaction `{}` is missing",
                        reaction.id
                    )))
                }
                Some(k) if has_self == reactions.binary_search(&k).is_ok() => {
                    return Err(MsaError::InvalidOrientation(format!(
                        "exactly one of `{}` and `{}` must be chosen",
                        reaction.id,
                        net.reactions()[k].id
                    )))
                }
                _ => {}
            }
        }
        Ok(Self { reactions })
    }

    pub fn from_ids(net: &ReactionNetwork, ids: &[String]) -> Result<Self> {
        let reactions = ids
            .iter()
            .map(|id| {
                net.reaction_index(id)
                    .ok_or_else(|| MsaError::InvalidOrientation(format!("unknown reaction `{id}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_reactions(net, reactions)
    }

    pub fn reactions(&self) -> &[usize] {
        &self.reactions
    }

    pub fn len(&self) -> usize {
        self.reactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reactions.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.reactions.binary_search(&j).is_ok()
    }

    pub fn position(&self, j: usize) -> Option<usize> {
        self.reactions.binary_search(&j).ok()
    }

    /// Replaces each listed reaction by its reverse partner.
    pub fn flipped(&self, net: &ReactionNetwork, flips: &[usize]) -> Self {
        let mut reactions: Vec<usize> = self
            .reactions
            .iter()
            .map(|&j| {
                if flips.contains(&j) {
                    net.reactions()[j].reverse.expect("only reversible reactions flip")
                } else {
                    j
                }
            })
            .collect();
        reactions.sort_unstable();
        Self { reactions }
    }

    /// `L_O`: species by oriented reactions, columns are reaction vectors.
    pub fn l_matrix(&self, net: &ReactionNetwork) -> RationalMatrix {
        let cols: Vec<_> = self.reactions.iter().map(|&j| net.reaction_vector(j)).collect();
        RationalMatrix::from_columns(net.num_species(), &cols)
    }

    pub fn ids(&self, net: &ReactionNetwork) -> Vec<String> {
        self.reactions.iter().map(|&j| net.reactions()[j].id.clone()).collect()
    }
}

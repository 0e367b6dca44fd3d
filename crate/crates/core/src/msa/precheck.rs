//! A quick structural test for inflow and outflow reactions.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::kinetics::KineticSystem;

/// An inflow or outflow reaction whose species changes through no other reaction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecheckHit {
    pub reaction: String,
    pub species: String,
    pub inflow: bool,
}

/// Returns a hit when the system certainly has no positive equilibrium at all,
/// which rules out multiple equilibria.
///
/// The rule: an irreversible reaction `0 → ·` or `· → 0` changes a species whose
/// stoichiometric row is zero on every other reaction. That species is then
/// strictly produced (or consumed) at every positive state.
pub fn precheck_inflow_outflow(system: &KineticSystem) -> Option<PrecheckHit> {
    let net = system.network();
    let n = net.stoichiometric_matrix();
    for (j, reaction) in net.reactions().iter().enumerate() {
        if reaction.reverse.is_some() {
            continue;
        }
        let inflow = net.reactant(j).is_zero();
        let outflow = net.product(j).is_zero();
        if !inflow && !outflow {
            continue;
        }
        let side = if inflow { net.product(j) } else { net.reactant(j) };
        for s in side.support() {
            let alone = (0..net.num_reactions()).all(|k| k == j || n[(s, k)].is_zero());
            if alone && !n[(s, j)].is_zero() {
                return Some(PrecheckHit {
                    reaction: reaction.id.clone(),
                    species: net.species()[s].clone(),
                    inflow,
                });
            }
        }
    }
    None
}

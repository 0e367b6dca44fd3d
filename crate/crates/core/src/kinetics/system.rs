use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{MsaError, Result};
use crate::linalg::RationalMatrix;
use crate::network::ReactionNetwork;
use crate::rational::{to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KineticsClass {
    /// Reactions sharing a reactant share their kinetic-order rows.
    #[serde(rename = "PL-RDK")]
    Rdk,
    #[serde(rename = "PL-NDK")]
    Ndk,
}

impl std::fmt::Display for KineticsClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KineticsClass::Rdk => "PL-RDK",
            KineticsClass::Ndk => "PL-NDK",
        })
    }
}

/// Power-law kinetics on a network: rate of reaction `j` is `k_j · x^{F_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KineticSystem {
    network: ReactionNetwork,
    kinetic_orders: RationalMatrix,
    rate_constants: Option<Vec<Rational>>,
}

/// Species-by-reactant matrix of shared kinetic-order rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TMatrix {
    /// Reactant complex indices, one per column.
    pub reactants: Vec<usize>,
    pub matrix: RationalMatrix,
    /// Column used by each reaction.
    pub reaction_column: Vec<usize>,
}

impl TMatrix {
    pub fn column(&self, c: usize) -> Vec<Rational> {
        self.matrix.column(c)
    }

    pub fn column_for_reaction(&self, j: usize) -> Vec<Rational> {
        self.matrix.column(self.reaction_column[j])
    }

    /// Column index of a reactant complex, if it is one.
    pub fn column_of_complex(&self, complex: usize) -> Option<usize> {
        self.reactants.iter().position(|&c| c == complex)
    }
}

impl KineticSystem {
    pub fn new(
        network: ReactionNetwork,
        kinetic_orders: RationalMatrix,
        rate_constants: Option<Vec<Rational>>,
    ) -> Result<Self> {
        let (r, m) = (network.num_reactions(), network.num_species());
        if kinetic_orders.rows() != r || kinetic_orders.cols() != m {
            return Err(MsaError::KineticOrderShape {
                rows: kinetic_orders.rows(),
                cols: kinetic_orders.cols(),
                expected_rows: r,
                expected_cols: m,
            });
        }
        let system = Self {
            network,
            kinetic_orders,
            rate_constants: None,
        };
        match rate_constants {
            Some(k) => system.with_rate_constants(k),
            None => Ok(system),
        }
    }

    /// Mass-action kinetics: kinetic orders equal reactant stoichiometry.
    pub fn mass_action(network: ReactionNetwork) -> Self {
        let rows: Vec<Vec<Rational>> = (0..network.num_reactions())
            .map(|j| network.reactant(j).to_dense(network.num_species()))
            .collect();
        let f = RationalMatrix::from_rows(rows);
        Self::new(network, f, None).expect("shape matches by construction")
    }

    pub fn with_rate_constants(mut self, k: Vec<Rational>) -> Result<Self> {
        if k.len() != self.network.num_reactions() {
            return Err(MsaError::RateCount {
                expected: self.network.num_reactions(),
                got: k.len(),
            });
        }
        if let Some(j) = k.iter().position(|v| !v.is_positive()) {
            return Err(MsaError::NonPositiveRate(self.network.reactions()[j].id.clone()));
        }
        self.rate_constants = Some(k);
        Ok(self)
    }

    pub fn network(&self) -> &ReactionNetwork {
        &self.network
    }

    pub fn kinetic_orders(&self) -> &RationalMatrix {
        &self.kinetic_orders
    }

    pub fn rate_constants(&self) -> Option<&[Rational]> {
        self.rate_constants.as_deref()
    }

    pub fn kinetic_order_row(&self, j: usize) -> &[Rational] {
        self.kinetic_orders.row(j)
    }

    /// Reactions grouped by reactant complex, in reactant order.
    fn branching(&self) -> Vec<(usize, Vec<usize>)> {
        self.network
            .reactant_complexes()
            .into_iter()
            .map(|y| {
                let js = (0..self.network.num_reactions())
                    .filter(|&j| self.network.reactions()[j].reactant == y)
                    .collect();
                (y, js)
            })
            .collect()
    }

    /// Partition of the reactions leaving reactant `y` by identical kinetic-order rows.
    /// Groups are ordered by their lowest reaction index; the count is `N_R(y)`.
    pub fn cf_subsets(&self, y: usize) -> Result<Vec<Vec<usize>>> {
        let reactions: Vec<usize> = (0..self.network.num_reactions())
            .filter(|&j| self.network.reactions()[j].reactant == y)
            .collect();
        if reactions.is_empty() {
            let name = if y < self.network.num_complexes() {
                self.network.display_complex(y)
            } else {
                format!("#{y}")
            };
            return Err(MsaError::NotAReactant(name));
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for j in reactions {
            match groups
                .iter_mut()
                .find(|g| self.kinetic_order_row(g[0]) == self.kinetic_order_row(j))
            {
                Some(g) => g.push(j),
                None => groups.push(vec![j]),
            }
        }
        Ok(groups)
    }

    /// First reactant complex with more than one CF-subset, if any.
    pub fn first_nf_reactant(&self) -> Option<usize> {
        self.branching()
            .into_iter()
            .map(|(y, _)| y)
            .find(|&y| self.cf_subsets(y).map(|g| g.len() > 1).unwrap_or(false))
    }

    pub fn classify(&self) -> KineticsClass {
        if self.first_nf_reactant().is_some() {
            KineticsClass::Ndk
        } else {
            KineticsClass::Rdk
        }
    }

    pub fn t_matrix(&self) -> Result<TMatrix> {
        if let Some(y) = self.first_nf_reactant() {
            return Err(MsaError::NotReactantDetermined(self.network.display_complex(y)));
        }
        let reactants = self.network.reactant_complexes();
        let m = self.network.num_species();
        let mut matrix = RationalMatrix::zeros(m, reactants.len());
        let mut reaction_column = vec![0; self.network.num_reactions()];
        for (c, &y) in reactants.iter().enumerate() {
            let j = self
                .network
                .reactions()
                .iter()
                .position(|r| r.reactant == y)
                .expect("reactant complex has a reaction");
            for s in 0..m {
                matrix[(s, c)] = self.kinetic_orders[(j, s)].clone();
            }
        }
        for (j, r) in self.network.reactions().iter().enumerate() {
            reaction_column[j] = reactants.iter().position(|&y| y == r.reactant).unwrap();
        }
        Ok(TMatrix {
            reactants,
            matrix,
            reaction_column,
        })
    }

    fn check_positive(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.network.num_species() {
            return Err(MsaError::Dimension {
                expected: self.network.num_species(),
                got: x.len(),
            });
        }
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(MsaError::NonPositiveConcentration { index, value });
        }
        Ok(())
    }

    /// Reaction rates `k_j x^{F_j}` for explicit rate constants.
    ///
    /// Products that overflow or underflow are recomputed in log space.
    pub fn fluxes_with(&self, k: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        self.check_positive(x)?;
        if k.len() != self.network.num_reactions() {
            return Err(MsaError::RateCount {
                expected: self.network.num_reactions(),
                got: k.len(),
            });
        }
        let f: Vec<Vec<f64>> = (0..k.len())
            .map(|j| self.kinetic_order_row(j).iter().map(to_f64).collect())
            .collect();
        Ok(k.iter()
            .zip(&f)
            .map(|(&kj, row)| {
                let direct = row
                    .iter()
                    .zip(x)
                    .filter(|(e, _)| **e != 0.0)
                    .fold(kj, |acc, (e, xs)| acc * xs.powf(*e));
                if direct.is_finite() && (direct != 0.0 || kj == 0.0) {
                    direct
                } else {
                    let log: f64 = kj.ln() + row.iter().zip(x).map(|(e, xs)| e * xs.ln()).sum::<f64>();
                    log.exp()
                }
            })
            .collect())
    }

    /// Species formation rate `N · K(x)` for explicit rate constants.
    pub fn sfrf_with(&self, k: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let flux = self.fluxes_with(k, x)?;
        let n = self.network.stoichiometric_matrix();
        Ok((0..n.rows())
            .map(|s| {
                n.row(s)
                    .iter()
                    .zip(&flux)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, v)| to_f64(a) * v)
                    .sum()
            })
            .collect())
    }

    /// Species formation rate using the system's own rate constants.
    pub fn sfrf(&self, x: &[f64]) -> Result<Vec<f64>> {
        let k: Vec<f64> = self
            .rate_constants
            .as_ref()
            .ok_or(MsaError::MissingRates)?
            .iter()
            .map(to_f64)
            .collect();
        self.sfrf_with(&k, x)
    }

    /// Exact species formation rate at a rational point; only defined when every
    /// kinetic order is an integer (otherwise returns `None`).
    pub fn sfrf_exact(&self, k: &[Rational], x: &[Rational]) -> Option<Vec<Rational>> {
        if x.iter().any(|v| !v.is_positive()) || k.len() != self.network.num_reactions() {
            return None;
        }
        let mut flux = Vec::with_capacity(k.len());
        for (j, kj) in k.iter().enumerate() {
            let mut v = kj.clone();
            for (e, xs) in self.kinetic_order_row(j).iter().zip(x) {
                if !e.is_integer() {
                    return None;
                }
                let p: i32 = e.to_integer().try_into().ok()?;
                v *= num_traits::pow::Pow::pow(xs, p);
            }
            flux.push(v);
        }
        let n = self.network.stoichiometric_matrix();
        Some(n.mul_vec(&flux))
    }
}

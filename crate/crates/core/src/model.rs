//! Reading and writing model files.
//!
//! A model is a JSON document listing reactions as equations such as
//! `"A1 + 2 A2 -> 2 A1 + A2"` together with exact kinetic orders.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::MsaError;
use crate::kinetics::KineticSystem;
use crate::linalg::RationalMatrix;
use crate::network::{Complex, DirectedReactionSpec, ReactionNetwork};
use crate::rational::{parse_rational, to_decimal_string, Rational};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("reaction `{reaction}`: {message}")]
    Syntax { reaction: String, message: String },
    #[error("reaction `{reaction}`: unknown species `{species}`")]
    UnknownSpecies { reaction: String, species: String },
    #[error("reaction `{0}` is reversible but has no reverse kinetic orders")]
    MissingReverseOrders(String),
    #[error("reaction `{reaction}`: negative coefficient `{coefficient}`")]
    NegativeCoefficient { reaction: String, coefficient: String },
    #[error("rate constants must be given for every reaction or for none")]
    PartialRates,
    #[error(transparent)]
    Network(#[from] MsaError),
}

/// A number written either as a JSON string (`"1/3"`, `"-0.2344"`) or a JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberText {
    Text(String),
    Number(serde_json::Number),
}

impl NumberText {
    fn parse(&self) -> Option<Rational> {
        match self {
            NumberText::Text(s) => parse_rational(s),
            NumberText::Number(n) => parse_rational(&n.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionEntry {
    pub id: String,
    pub equation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverse_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reversible: Option<bool>,
    #[serde(default)]
    pub kinetic_orders: BTreeMap<String, NumberText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverse_kinetic_orders: Option<BTreeMap<String, NumberText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_constant: Option<NumberText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverse_rate_constant: Option<NumberText>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub species: Option<Vec<String>>,
    /// Reaction ids forming the preferred orientation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<String>>,
    pub reactions: Vec<ReactionEntry>,
}

/// A parsed model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub description: Option<String>,
    pub system: KineticSystem,
    pub orientation: Option<Vec<String>>,
}

type Side = Vec<(Rational, String)>;

fn is_species_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn parse_term(term: &str, reaction: &str) -> Result<(Rational, String), ModelError> {
    let syntax = |message: String| ModelError::Syntax {
        reaction: reaction.to_string(),
        message,
    };
    let t = term.trim();
    let split = t.find(is_species_start).ok_or_else(|| syntax(format!("`{t}` names no species")))?;
    let (coef, name) = t.split_at(split);
    let coef = coef.trim();
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(syntax(format!("invalid species name `{name}`")));
    }
    let value = if coef.is_empty() {
        Rational::from_integer(1.into())
    } else {
        if coef.starts_with('-') {
            return Err(ModelError::NegativeCoefficient {
                reaction: reaction.to_string(),
                coefficient: coef.to_string(),
            });
        }
        if !coef.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '/') {
            return Err(syntax(format!("invalid coefficient `{coef}`")));
        }
        parse_rational(coef).ok_or_else(|| syntax(format!("invalid coefficient `{coef}`")))?
    };
    Ok((value, name.to_string()))
}

fn parse_side(side: &str, reaction: &str) -> Result<Side, ModelError> {
    let s = side.trim();
    if s == "0" || s == "∅" {
        return Ok(Vec::new());
    }
    if s.is_empty() {
        return Err(ModelError::Syntax {
            reaction: reaction.to_string(),
            message: "empty side; write 0 for the zero complex".to_string(),
        });
    }
    s.split('+').map(|t| parse_term(t, reaction)).collect()
}

/// Splits an equation into its sides and reports whether it is reversible.
pub fn parse_equation(equation: &str, reaction: &str) -> Result<(Side, Side, bool), ModelError> {
    let (lhs, rhs, reversible) = if let Some((l, r)) = equation.split_once("<->") {
        (l, r, true)
    } else if let Some((l, r)) = equation.split_once("->") {
        (l, r, false)
    } else {
        return Err(ModelError::Syntax {
            reaction: reaction.to_string(),
            message: format!("`{equation}` has no `->` or `<->` arrow"),
        });
    };
    if rhs.contains("->") || rhs.contains('<') || lhs.contains('=') || rhs.contains('>') {
        return Err(ModelError::Syntax {
            reaction: reaction.to_string(),
            message: format!("`{equation}` is not a single reaction"),
        });
    }
    Ok((parse_side(lhs, reaction)?, parse_side(rhs, reaction)?, reversible))
}

struct Directed {
    id: String,
    reactant: Side,
    product: Side,
    reverse_id: Option<String>,
    orders: BTreeMap<String, NumberText>,
    rate: Option<NumberText>,
}

fn json_error(e: serde_json::Error) -> ModelError {
    ModelError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses a model document.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let file: ModelFile = serde_json::from_str(text).map_err(json_error)?;
    model_from_file(file)
}

pub fn model_from_file(file: ModelFile) -> Result<Model, ModelError> {
    let mut directed = Vec::new();
    for entry in &file.reactions {
        let (lhs, rhs, two_way) = parse_equation(&entry.equation, &entry.id)?;
        if let Some(flag) = entry.reversible {
            if flag != two_way {
                return Err(ModelError::Syntax {
                    reaction: entry.id.clone(),
                    message: "`reversible` disagrees with the arrow".to_string(),
                });
            }
        }
        if two_way {
            let reverse_orders = entry
                .reverse_kinetic_orders
                .clone()
                .ok_or_else(|| ModelError::MissingReverseOrders(entry.id.clone()))?;
            let reverse_id = entry.reverse_id.clone().unwrap_or_else(|| format!("{}_rev", entry.id));
            directed.push(Directed {
                id: entry.id.clone(),
                reactant: lhs.clone(),
                product: rhs.clone(),
                reverse_id: Some(reverse_id.clone()),
                orders: entry.kinetic_orders.clone(),
                rate: entry.rate_constant.clone(),
            });
            directed.push(Directed {
                id: reverse_id,
                reactant: rhs,
                product: lhs,
                reverse_id: Some(entry.id.clone()),
                orders: reverse_orders,
                rate: entry.reverse_rate_constant.clone(),
            });
        } else {
            if entry.reverse_kinetic_orders.is_some() || entry.reverse_rate_constant.is_some() {
                return Err(ModelError::Syntax {
                    reaction: entry.id.clone(),
                    message: "reverse data given for a one-way reaction".to_string(),
                });
            }
            directed.push(Directed {
                id: entry.id.clone(),
                reactant: lhs,
                product: rhs,
                reverse_id: entry.reverse_id.clone(),
                orders: entry.kinetic_orders.clone(),
                rate: entry.rate_constant.clone(),
            });
        }
    }

    let declared = file.species.is_some();
    let mut species: Vec<String> = file.species.clone().unwrap_or_default();
    let mut index: HashMap<String, usize> = species.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut lookup = |name: &str, reaction: &str, species: &mut Vec<String>| -> Result<usize, ModelError> {
        if let Some(&i) = index.get(name) {
            return Ok(i);
        }
        if declared {
            return Err(ModelError::UnknownSpecies {
                reaction: reaction.to_string(),
                species: name.to_string(),
            });
        }
        species.push(name.to_string());
        index.insert(name.to_string(), species.len() - 1);
        Ok(species.len() - 1)
    };

    let mut specs = Vec::new();
    let mut complex_of = |side: &Side, reaction: &str, species: &mut Vec<String>| -> Result<Complex, ModelError> {
        let mut terms = Vec::new();
        for (c, name) in side {
            terms.push((lookup(name, reaction, species)?, c.clone()));
        }
        Complex::from_terms(terms).ok_or_else(|| ModelError::NegativeCoefficient {
            reaction: reaction.to_string(),
            coefficient: "negative".to_string(),
        })
    };
    for d in &directed {
        let reactant = complex_of(&d.reactant, &d.id, &mut species)?;
        let product = complex_of(&d.product, &d.id, &mut species)?;
        specs.push(DirectedReactionSpec {
            id: d.id.clone(),
            reactant,
            product,
            reverse_id: d.reverse_id.clone(),
        });
    }
    let species_index: HashMap<&str, usize> = species.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut orders = RationalMatrix::zeros(directed.len(), species.len());
    for (j, d) in directed.iter().enumerate() {
        for (name, value) in &d.orders {
            let &s = species_index.get(name.as_str()).ok_or_else(|| ModelError::UnknownSpecies {
                reaction: d.id.clone(),
                species: name.clone(),
            })?;
            orders[(j, s)] = value.parse().ok_or_else(|| ModelError::Syntax {
                reaction: d.id.clone(),
                message: format!("invalid kinetic order for `{name}`"),
            })?;
        }
    }
    let rates: Vec<Option<Rational>> = directed
        .iter()
        .map(|d| {
            d.rate
                .as_ref()
                .map(|r| {
                    r.parse().ok_or_else(|| ModelError::Syntax {
                        reaction: d.id.clone(),
                        message: "invalid rate constant".to_string(),
                    })
                })
                .transpose()
        })
        .collect::<Result<_, _>>()?;
    let rate_constants = if rates.iter().all(Option::is_none) {
        None
    } else if rates.iter().all(Option::is_some) {
        Some(rates.into_iter().map(Option::unwrap).collect())
    } else {
        return Err(ModelError::PartialRates);
    };

    let network = ReactionNetwork::from_directed(species, specs)?;
    let system = KineticSystem::new(network, orders, rate_constants)?;
    if let Some(ids) = &file.orientation {
        crate::msa::Orientation::from_ids(system.network(), ids)?;
    }
    Ok(Model {
        name: file.name,
        description: file.description,
        system,
        orientation: file.orientation,
    })
}

fn side_text(c: &Complex, species: &[String]) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    c.terms()
        .map(|(s, q)| {
            if *q == Rational::from_integer(1.into()) {
                species[s].clone()
            } else {
                format!("{} {}", to_decimal_string(q), species[s])
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn orders_map(system: &KineticSystem, j: usize) -> BTreeMap<String, NumberText> {
    let species = system.network().species();
    system
        .kinetic_order_row(j)
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != Rational::from_integer(0.into()))
        .map(|(s, v)| (species[s].clone(), NumberText::Text(to_decimal_string(v))))
        .collect()
}

/// Describes a kinetic system as a model document; reversible pairs become one
/// `<->` entry.
pub fn model_to_file(model: &Model) -> ModelFile {
    let system = &model.system;
    let net = system.network();
    let rate = |j: usize| system.rate_constants().map(|k| NumberText::Text(to_decimal_string(&k[j])));
    let mut reactions = Vec::new();
    for (j, r) in net.reactions().iter().enumerate() {
        let equation_sides = (
            side_text(&net.complexes()[r.reactant], net.species()),
            side_text(&net.complexes()[r.product], net.species()),
        );
        match r.reverse {
            Some(k) if k < j => continue,
            Some(k) => reactions.push(ReactionEntry {
                id: r.id.clone(),
                equation: format!("{} <-> {}", equation_sides.0, equation_sides.1),
                reverse_id: Some(net.reactions()[k].id.clone()),
                reversible: None,
                kinetic_orders: orders_map(system, j),
                reverse_kinetic_orders: Some(orders_map(system, k)),
                rate_constant: rate(j),
                reverse_rate_constant: rate(k),
            }),
            None => reactions.push(ReactionEntry {
                id: r.id.clone(),
                equation: format!("{} -> {}", equation_sides.0, equation_sides.1),
                reverse_id: None,
                reversible: None,
                kinetic_orders: orders_map(system, j),
                reverse_kinetic_orders: None,
                rate_constant: rate(j),
                reverse_rate_constant: None,
            }),
        }
    }
    ModelFile {
        name: model.name.clone(),
        description: model.description.clone(),
        species: Some(net.species().to_vec()),
        orientation: model.orientation.clone(),
        reactions,
    }
}

/// Pretty JSON for a model.
pub fn emit_model(model: &Model) -> String {
    let mut text = serde_json::to_string_pretty(&model_to_file(model)).expect("model serializes");
    text.push('\n');
    text
}

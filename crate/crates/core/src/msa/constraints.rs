//! Linear systems over `μ` and the per-class `ρ` values.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::partition::{EquivalencePartition, FundamentalClasses};
use super::patterns::SignPattern;
use super::shelving::{Shelf, Shelving};
use crate::kinetics::TMatrix;
use crate::linalg::{LinearConstraint, Relation};
use crate::network::ReactionNetwork;
use crate::rational::{sign_of, Rational};

/// How the `ρ` value of a nondegenerate class enters the linear system.
///
/// Positive values are represented by `M = ln ρ`, negative values by `ρ` itself; both
/// are solver variables. Values of different kinds compare statically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "var", rename_all = "snake_case")]
pub enum RhoToken {
    Negative(usize),
    Zero,
    Positive(usize),
}

impl RhoToken {
    fn rank(self) -> i64 {
        match self {
            RhoToken::Negative(_) => 0,
            RhoToken::Zero => 1,
            RhoToken::Positive(_) => 2,
        }
    }
}

/// Result of comparing two `ρ` tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Always,
    Never,
    Linear(LinearConstraint),
}

pub fn compare_rho(a: RhoToken, relation: Relation, b: RhoToken) -> Comparison {
    match (a, b) {
        (RhoToken::Positive(x), RhoToken::Positive(y)) | (RhoToken::Negative(x), RhoToken::Negative(y)) => {
            Comparison::Linear(LinearConstraint::compare(
                [(x, Rational::one())],
                relation,
                [(y, Rational::one())],
            ))
        }
        _ => {
            if relation.holds(&Rational::from_integer(a.rank().into()), &Rational::from_integer(b.rank().into())) {
                Comparison::Always
            } else {
                Comparison::Never
            }
        }
    }
}

/// `a relation b` between the `ρ` values of two classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderingAtom {
    pub a: usize,
    pub relation: Relation,
    pub b: usize,
}

/// A conjunction of ordering atoms.
pub type Template = Vec<OrderingAtom>;

/// Sign of the degenerate sum for one basis vector, or the case being assumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DegenerateSum {
    Positive,
    Negative,
    Zero,
}

/// The ordering alternatives contributed by one basis vector of `Ker^⊥ L_O ∩ Γ_W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTemplates {
    /// Coordinates over the classes (one per representative).
    pub vector: Vec<Rational>,
    pub r_plus: Vec<usize>,
    pub r_minus: Vec<usize>,
    /// Disjunction of alternatives, each tagged with the degenerate-sum case it assumes.
    pub alternatives: Vec<(DegenerateSum, Template)>,
}

fn atom(a: usize, relation: Relation, b: usize) -> OrderingAtom {
    OrderingAtom { a, relation, b }
}

fn ordered_pairs(set: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &x in set {
        for &y in set {
            if x != y {
                out.push((x, y));
            }
        }
    }
    out
}

/// Alternatives under which the multisets of `ρ` values over `plus` and `minus` are
/// nonsegregated.
fn nonsegregated(plus: &[usize], minus: &[usize]) -> Vec<Template> {
    if plus.is_empty() && minus.is_empty() {
        return vec![Vec::new()];
    }
    if plus.is_empty() || minus.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (one, other) in [(plus, minus), (minus, plus)] {
        for &a in one {
            for (b, c) in ordered_pairs(other) {
                out.push(vec![atom(b, Relation::Lt, a), atom(a, Relation::Lt, c)]);
            }
        }
    }
    let all: Vec<usize> = plus.iter().chain(minus).copied().collect();
    out.push(all.windows(2).map(|w| atom(w[0], Relation::Eq, w[1])).collect());
    for (a, b) in ordered_pairs(plus) {
        for (c, d) in ordered_pairs(minus) {
            out.push(vec![
                atom(c, Relation::Eq, a),
                atom(a, Relation::Lt, b),
                atom(b, Relation::Eq, d),
            ]);
        }
    }
    out
}

impl BasisTemplates {
    pub fn build(vector: Vec<Rational>, pattern: &SignPattern) -> Self {
        let mut r_plus = Vec::new();
        let mut r_minus = Vec::new();
        let mut degenerate_signs = Vec::new();
        for (class, b) in vector.iter().enumerate() {
            let sb = sign_of(b);
            if sb == 0 {
                continue;
            }
            match pattern.g[class] * sb {
                1 => r_plus.push(class),
                -1 => r_minus.push(class),
                _ => degenerate_signs.push(pattern.h[class] * sb),
            }
        }
        let cases: Vec<DegenerateSum> = {
            let pos = degenerate_signs.iter().any(|&s| s > 0);
            let neg = degenerate_signs.iter().any(|&s| s < 0);
            match (pos, neg) {
                (false, false) => vec![DegenerateSum::Zero],
                (true, false) => vec![DegenerateSum::Positive],
                (false, true) => vec![DegenerateSum::Negative],
                (true, true) => vec![DegenerateSum::Positive, DegenerateSum::Negative, DegenerateSum::Zero],
            }
        };
        let mut alternatives = Vec::new();
        for case in cases {
            match case {
                DegenerateSum::Positive => {
                    for &a in &r_plus {
                        for &c in &r_minus {
                            alternatives.push((case, vec![atom(c, Relation::Gt, a)]));
                        }
                    }
                }
                DegenerateSum::Negative => {
                    for &a in &r_plus {
                        for &c in &r_minus {
                            alternatives.push((case, vec![atom(a, Relation::Gt, c)]));
                        }
                    }
                }
                DegenerateSum::Zero => {
                    alternatives.extend(nonsegregated(&r_plus, &r_minus).into_iter().map(|t| (case, t)));
                }
            }
        }
        Self {
            vector,
            r_plus,
            r_minus,
            alternatives,
        }
    }
}

/// A labelled constraint, kept for display and traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeled {
    pub step: &'static str,
    pub constraint: LinearConstraint,
}

/// STEPS 10 to 12 for one sign pattern and shelving, ready for the ordering alternatives.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub num_species: usize,
    pub num_vars: usize,
    /// `None` for degenerate classes.
    pub tokens: Vec<Option<RhoToken>>,
    pub constraints: Vec<Labeled>,
    /// The system cannot be satisfied for structural reasons.
    pub contradictory: bool,
}

impl ConstraintSystem {
    pub fn build(
        net: &ReactionNetwork,
        t: &TMatrix,
        partition: &EquivalencePartition,
        fundamental: &FundamentalClasses,
        pattern: &SignPattern,
        shelving: &Shelving,
    ) -> Self {
        let m = net.num_species();
        let mut num_vars = m;
        let mut constraints = Vec::new();
        let tokens: Vec<Option<RhoToken>> = (0..partition.classes.len())
            .map(|class| {
                let token = match pattern.rho_sign(class)? {
                    0 => RhoToken::Zero,
                    s => {
                        let var = num_vars;
                        num_vars += 1;
                        if s > 0 {
                            RhoToken::Positive(var)
                        } else {
                            constraints.push(Labeled {
                                step: "rho",
                                constraint: LinearConstraint::new([(var, Rational::one())], Relation::Lt, Rational::zero()),
                            });
                            RhoToken::Negative(var)
                        }
                    }
                };
                Some(token)
            })
            .collect();
        let mut contradictory = false;

        let t_mu = |j: usize| -> Vec<(usize, Rational)> {
            t.column_for_reaction(j).into_iter().enumerate().collect()
        };
        let t_mu_of_product = |j: usize| -> Vec<(usize, Rational)> {
            let reverse = net.reactions()[j].reverse.expect("cross constraints only for reversible reactions");
            t_mu(reverse)
        };

        for (class, fc) in fundamental.classes.iter().enumerate() {
            let Some(token) = tokens[class] else { continue };
            for &j in &fc.reactions {
                let shelf = shelving.shelf(j).expect("nondegenerate reactions are shelved");
                let RhoToken::Positive(var) = token else {
                    // e^{T·μ} > 0 ≥ ρ holds for every μ; any other shelf is impossible.
                    contradictory |= shelf != Shelf::Upper;
                    continue;
                };
                let relation = match shelf {
                    Shelf::Middle => Relation::Eq,
                    Shelf::Upper => Relation::Gt,
                    Shelf::Lower => Relation::Lt,
                };
                constraints.push(Labeled {
                    step: "shelf",
                    constraint: LinearConstraint::compare(t_mu(j), relation, [(var, Rational::one())]),
                });
            }
        }

        for (class, p) in partition.classes.iter().enumerate() {
            let g = pattern.g[class];
            for &j in &p.members {
                if g == 0 {
                    let relation = match pattern.h[class] {
                        1 => Relation::Gt,
                        -1 => Relation::Lt,
                        _ => Relation::Eq,
                    };
                    constraints.push(Labeled {
                        step: "degenerate",
                        constraint: LinearConstraint::compare(t_mu(j), relation, t_mu_of_product(j)),
                    });
                    continue;
                }
                let relation = match (g > 0, shelving.shelf(j)) {
                    (true, Some(Shelf::Upper)) | (false, Some(Shelf::Lower)) => Relation::Lt,
                    (true, Some(Shelf::Lower)) | (false, Some(Shelf::Upper)) => Relation::Gt,
                    _ => continue,
                };
                constraints.push(Labeled {
                    step: "cross",
                    constraint: LinearConstraint::compare(t_mu(j), relation, t_mu_of_product(j)),
                });
            }
        }

        for &j in &partition.p0 {
            if net.reactions()[j].reverse.is_some() {
                constraints.push(Labeled {
                    step: "zeroth",
                    constraint: LinearConstraint::compare(t_mu(j), Relation::Eq, t_mu_of_product(j)),
                });
            }
        }

        Self {
            num_species: m,
            num_vars,
            tokens,
            constraints,
            contradictory,
        }
    }

    pub fn linear(&self) -> Vec<LinearConstraint> {
        self.constraints.iter().map(|l| l.constraint.clone()).collect()
    }

    /// Resolves a template to linear constraints; `None` when some atom is impossible.
    pub fn resolve(&self, template: &Template) -> Option<Vec<LinearConstraint>> {
        let mut out = Vec::new();
        for a in template {
            let (x, y) = (self.tokens[a.a]?, self.tokens[a.b]?);
            match compare_rho(x, a.relation, y) {
                Comparison::Always => {}
                Comparison::Never => return None,
                Comparison::Linear(c) => out.push(c),
            }
        }
        Some(out)
    }
}

impl fmt::Display for OrderingAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rho{} {} rho{}", self.a + 1, self.relation, self.b + 1)
    }
}

/// Renders a linear form over `μ` like `0.7464*mu[X1] + 0.0243*mu[X5]`.
pub fn display_form(column: &[Rational], species: &[String]) -> String {
    render_terms(
        column
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| (c.clone(), format!("mu[{}]", species[s]))),
    )
}

/// Joins `coefficient*name` terms, writing unit coefficients as bare names.
pub(crate) fn render_terms(terms: impl IntoIterator<Item = (Rational, String)>) -> String {
    let mut out = String::new();
    for (c, name) in terms {
        let negative = c.is_negative();
        let magnitude = c.abs();
        let body = if magnitude.is_one() {
            name
        } else {
            format!("{}*{name}", crate::rational::to_decimal_string(&magnitude))
        };
        match (out.is_empty(), negative) {
            (true, false) => out.push_str(&body),
            (true, true) => out.push_str(&format!("-{body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
            (false, true) => out.push_str(&format!(" - {body}")),
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

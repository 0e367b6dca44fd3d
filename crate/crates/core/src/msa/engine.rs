//! The enumeration driver: orientation, partition, sign patterns, shelvings and
//! ordering alternatives, down to a verified witness or exhaustion.

use std::collections::BTreeMap;

use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::constraints::{display_form, BasisTemplates, ConstraintSystem, RhoToken, Template};
use super::orientation::Orientation;
use super::partition::{realign, EarlyExit, EquivalencePartition, FundamentalClasses};
use super::patterns::{enumerate_sign_patterns, SignPattern};
use super::shelving::{Shelf, Shelving, Shelvings};
use super::witness::{construct_witness, hint_equilibria, HintEquilibria, MuSource, WitnessOptions};
use crate::error::Result;
use crate::kinetics::{KineticSystem, TMatrix};
use crate::linalg::{
    column_space_vector_with_signs, orthocomplement_restricted, solve_feasibility, LinearConstraint,
    RationalMatrix, Relation,
};
use crate::network::ReactionNetwork;
use crate::rational::{primitive_integer_vector, sign_of, Rational};
use crate::verify::{VerificationReport, Witness, DEFAULT_TOL};

/// Default cap on the number of linear feasibility problems solved.
pub const DEFAULT_MAX_BRANCHES: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOptions {
    pub max_branches: u64,
    pub orientation: Option<Orientation>,
    pub sigma: Option<Vec<Rational>>,
    pub mu_hint: Option<Vec<f64>>,
    pub kappa: Option<Vec<f64>>,
    pub p: f64,
    pub tol: f64,
    pub trace: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            max_branches: DEFAULT_MAX_BRANCHES,
            orientation: None,
            sigma: None,
            mu_hint: None,
            kappa: None,
            p: 1.0,
            tol: DEFAULT_TOL,
            trace: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Multistationary,
    Monostationary,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InconclusiveReason {
    /// The linear-program budget ran out before the search finished.
    Budget,
    /// Some branch was feasible but no verified witness could be built from it.
    NoWitness,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStats {
    pub sign_patterns: u64,
    pub shelvings: u64,
    /// Fully specified constraint systems examined.
    pub branches: u64,
    pub feasible_branches: u64,
    pub lp_calls: u64,
    pub budget: u64,
}

/// A solution `(μ, ρ)` of one fully specified constraint system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub pattern: SignPattern,
    pub shelving: Shelving,
    pub templates: Vec<Template>,
    /// Coprime integers.
    pub mu: Vec<Rational>,
    /// Per class: the token and the value of its variable (`M` for positive `ρ`, `ρ` for negative).
    pub rho: Vec<Option<(RhoToken, Rational)>>,
    pub sigma: Vec<Rational>,
}

/// Everything the analysis determined.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub verdict: Verdict,
    pub reason: Option<InconclusiveReason>,
    pub early_exit: Option<EarlyExit>,
    pub t_matrix: TMatrix,
    pub orientation: Orientation,
    /// Reactions replaced by their reverses during realignment.
    pub realigned: Vec<usize>,
    pub partition: EquivalencePartition,
    pub fundamental: FundamentalClasses,
    /// Basis of `Ker^⊥ L_O ∩ Γ_W`, coordinates over the classes.
    pub basis: Vec<Vec<Rational>>,
    /// Distinct expressions `T_y · μ` forced equal by the all-middle shelving.
    pub equation_groups: Vec<Vec<Vec<Rational>>>,
    /// The first assembled system, rendered.
    pub first_system: Vec<String>,
    pub signature: Option<Signature>,
    /// First feasible branch whose witness construction failed.
    pub pre_signature: Option<Signature>,
    pub witness: Option<Witness>,
    pub verification: Option<VerificationReport>,
    /// `true` when the witness came from the supplied `μ` rather than the search.
    pub witness_from_hint: bool,
    /// Equilibria implied by the supplied `μ`, verified or not.
    pub hint: Option<HintEquilibria>,
    pub stats: BranchStats,
    pub trace: Vec<String>,
}

struct Exhausted;

struct Search<'a> {
    system: &'a KineticSystem,
    net: &'a ReactionNetwork,
    t: &'a TMatrix,
    n: RationalMatrix,
    options: &'a AnalysisOptions,
    stats: BranchStats,
    trace: Vec<String>,
}

impl<'a> Search<'a> {
    fn lp(&mut self, num_vars: usize, constraints: &[LinearConstraint]) -> std::result::Result<Option<Vec<Rational>>, Exhausted> {
        if self.stats.lp_calls >= self.stats.budget {
            return Err(Exhausted);
        }
        self.stats.lp_calls += 1;
        Ok(solve_feasibility(num_vars, constraints).into_sample())
    }

    fn note(&mut self, line: impl FnOnce() -> String) {
        if self.options.trace {
            self.trace.push(line());
        }
    }

    /// A nonzero `μ` in the solution set whose sign pattern is realised in the
    /// stoichiometric subspace; returns the full solution vector and `σ`.
    fn signature_point(
        &mut self,
        num_vars: usize,
        base: &[LinearConstraint],
        sample: Vec<Rational>,
    ) -> std::result::Result<Option<(Vec<Rational>, Vec<Rational>)>, Exhausted> {
        let m = self.net.num_species();
        let compatible = |x: &[Rational], n: &RationalMatrix| {
            let mu = &x[..m];
            if mu.iter().all(Zero::is_zero) {
                return None;
            }
            crate::linalg::sign_compatible_sigma(mu, n)
        };
        if let Some(sigma) = compatible(&sample, &self.n) {
            return Ok(Some((sample, sigma)));
        }
        let mut any_nonzero = false;
        for s in 0..m {
            for relation in [Relation::Gt, Relation::Lt] {
                let mut cs = base.to_vec();
                cs.push(LinearConstraint::new([(s, Rational::from_integer(1.into()))], relation, Rational::zero()));
                if let Some(x) = self.lp(num_vars, &cs)? {
                    any_nonzero = true;
                    if let Some(sigma) = compatible(&x, &self.n) {
                        return Ok(Some((x, sigma)));
                    }
                }
            }
        }
        if !any_nonzero {
            return Ok(None);
        }
        let mut signs: Vec<Option<i8>> = vec![None; m];
        self.sign_search(num_vars, base, &mut signs, 0)
    }

    fn sign_search(
        &mut self,
        num_vars: usize,
        base: &[LinearConstraint],
        signs: &mut Vec<Option<i8>>,
        s: usize,
    ) -> std::result::Result<Option<(Vec<Rational>, Vec<Rational>)>, Exhausted> {
        let m = signs.len();
        if s == m {
            if signs.iter().all(|v| *v == Some(0)) {
                return Ok(None);
            }
            let cs = with_signs(base, signs);
            let Some(x) = self.lp(num_vars, &cs)? else { return Ok(None) };
            let sigma = column_space_vector_with_signs(&self.n, signs);
            return Ok(sigma.map(|sigma| (x, sigma)));
        }
        for sign in [1i8, -1, 0] {
            signs[s] = Some(sign);
            let feasible = column_space_vector_with_signs(&self.n, signs).is_some()
                && self.lp(num_vars, &with_signs(base, signs))?.is_some();
            if feasible {
                if let Some(found) = self.sign_search(num_vars, base, signs, s + 1)? {
                    signs[s] = None;
                    return Ok(Some(found));
                }
            }
        }
        signs[s] = None;
        Ok(None)
    }
}

fn with_signs(base: &[LinearConstraint], signs: &[Option<i8>]) -> Vec<LinearConstraint> {
    let mut cs = base.to_vec();
    for (s, sign) in signs.iter().enumerate() {
        if let Some(sign) = sign {
            let relation = match sign {
                1 => Relation::Gt,
                -1 => Relation::Lt,
                _ => Relation::Eq,
            };
            cs.push(LinearConstraint::new([(s, Rational::from_integer(1.into()))], relation, Rational::zero()));
        }
    }
    cs
}

/// Scales a solution so that its `μ` part becomes coprime integers.
fn canonical(x: &[Rational], m: usize) -> Vec<Rational> {
    let prim = primitive_integer_vector(&x[..m]);
    match x[..m].iter().position(|v| !v.is_zero()) {
        Some(i) => {
            let factor = &prim[i] / &x[i];
            x.iter().map(|v| v * &factor).collect()
        }
        None => x.to_vec(),
    }
}

fn variable_name(var: usize, net: &ReactionNetwork, tokens: &[Option<RhoToken>]) -> String {
    if var < net.num_species() {
        return format!("mu[{}]", net.species()[var]);
    }
    for (class, token) in tokens.iter().enumerate() {
        match token {
            Some(RhoToken::Positive(v)) if *v == var => return format!("M{}", class + 1),
            Some(RhoToken::Negative(v)) if *v == var => return format!("rho{}", class + 1),
            _ => {}
        }
    }
    format!("x{var}")
}

/// Renders a constraint as `lhs relation 0` with named variables.
pub fn render_constraint(c: &LinearConstraint, net: &ReactionNetwork, tokens: &[Option<RhoToken>]) -> String {
    let lhs = super::constraints::render_terms(
        c.coeffs.iter().map(|(v, q)| (q.clone(), variable_name(*v, net, tokens))),
    );
    format!("{lhs} {} {}", c.relation, crate::rational::to_decimal_string(&c.rhs))
}

/// Groups of `T_y · μ` expressions tied together by middle-shelf equalities.
fn equation_groups(
    t: &TMatrix,
    net: &ReactionNetwork,
    fundamental: &FundamentalClasses,
    pattern: &SignPattern,
    shelving: &Shelving,
) -> Vec<Vec<Vec<Rational>>> {
    let mut per_class: Vec<Vec<Vec<Rational>>> = Vec::new();
    for (class, fc) in fundamental.classes.iter().enumerate() {
        if pattern.rho_sign(class) != Some(1) {
            continue;
        }
        let mut cols: Vec<Vec<Rational>> = fc
            .reactions
            .iter()
            .filter(|&&j| shelving.shelf(j) == Some(Shelf::Middle))
            .map(|&j| t.column_for_reaction(j))
            .collect();
        cols.sort();
        cols.dedup();
        if !cols.is_empty() {
            per_class.push(cols);
        }
    }
    let _ = net;
    let mut uf = UnionFind::<usize>::new(per_class.len());
    for a in 0..per_class.len() {
        for b in a + 1..per_class.len() {
            if per_class[a].iter().any(|c| per_class[b].contains(c)) {
                uf.union(a, b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<Rational>>> = BTreeMap::new();
    for (a, cols) in per_class.into_iter().enumerate() {
        let g = groups.entry(uf.find(a)).or_default();
        g.extend(cols);
        g.sort();
        g.dedup();
    }
    groups.into_values().collect()
}

enum Outcome {
    Witness(Signature, Witness, VerificationReport),
    Exhausted,
    Done,
}

/// Decides whether the power-law system has the capacity for multiple equilibria.
///
/// The system must be reactant-determined; otherwise an error is returned.
pub fn analyze(system: &KineticSystem, options: &AnalysisOptions) -> Result<Analysis> {
    let net = system.network();
    let t = system.t_matrix()?;
    let orientation = match &options.orientation {
        Some(o) => o.clone(),
        None => Orientation::default_for(net),
    };
    let initial = EquivalencePartition::compute(net, orientation.clone());
    let mut search = Search {
        system,
        net,
        t: &t,
        n: net.stoichiometric_matrix(),
        options,
        stats: BranchStats {
            budget: options.max_branches,
            ..BranchStats::default()
        },
        trace: Vec::new(),
    };

    let mut analysis = Analysis {
        verdict: Verdict::Monostationary,
        reason: None,
        early_exit: initial.early_exit(net),
        t_matrix: t.clone(),
        orientation,
        realigned: Vec::new(),
        fundamental: FundamentalClasses::compute(net, &initial),
        partition: initial.clone(),
        basis: Vec::new(),
        equation_groups: Vec::new(),
        first_system: Vec::new(),
        signature: None,
        pre_signature: None,
        witness: None,
        verification: None,
        witness_from_hint: false,
        hint: None,
        stats: BranchStats::default(),
        trace: Vec::new(),
    };
    if let Some(exit) = &analysis.early_exit {
        search.note(|| format!("early exit: {exit:?}"));
        analysis.trace = search.trace;
        analysis.stats = search.stats;
        return Ok(analysis);
    }
    let Some((partition, flipped)) = realign(net, initial) else {
        analysis.trace = search.trace;
        analysis.stats = search.stats;
        return Ok(analysis);
    };
    let fundamental = FundamentalClasses::compute(net, &partition);
    let positions: Vec<usize> = partition
        .representatives()
        .iter()
        .map(|&j| partition.orientation.position(j).unwrap())
        .collect();
    let basis = orthocomplement_restricted(&partition.orientation.l_matrix(net), &positions);
    analysis.orientation = partition.orientation.clone();
    analysis.realigned = flipped;
    analysis.partition = partition.clone();
    analysis.fundamental = fundamental.clone();
    analysis.basis = basis.clone();
    search.note(|| format!("orientation: {}", analysis.orientation.ids(net).join(", ")));
    search.note(|| format!("{} classes, {} basis vectors", partition.classes.len(), basis.len()));

    let witness_options = WitnessOptions {
        sigma: options.sigma.clone(),
        kappa: options.kappa.clone(),
        p: options.p,
        tol: options.tol,
    };
    if let Some(mu) = &options.mu_hint {
        analysis.hint = hint_equilibria(system, &t, mu, &witness_options);
        if let Some((w, report)) = construct_witness(system, &t, &MuSource::Fixed(mu.clone()), &witness_options) {
            search.note(|| "supplied mu yields a verified witness".to_string());
            analysis.verdict = Verdict::Multistationary;
            analysis.witness = Some(w);
            analysis.verification = Some(report);
            analysis.witness_from_hint = true;
        } else {
            search.note(|| "supplied mu does not yield a verified witness; searching".to_string());
        }
    }

    let patterns = enumerate_sign_patterns(&partition);
    let mut first = true;
    let mut outcome = Outcome::Done;
    'patterns: for pattern in &patterns {
        search.stats.sign_patterns += 1;
        search.note(|| format!("sign pattern g={:?} h={:?}", pattern.g, pattern.h));
        let templates: Vec<BasisTemplates> = basis.iter().map(|b| BasisTemplates::build(b.clone(), pattern)).collect();
        for shelving in Shelvings::new(net, &partition, &fundamental, pattern) {
            search.stats.shelvings += 1;
            let cs = ConstraintSystem::build(net, &t, &partition, &fundamental, pattern, &shelving);
            if first {
                first = false;
                analysis.equation_groups = equation_groups(&t, net, &fundamental, pattern, &shelving);
                analysis.first_system = cs
                    .constraints
                    .iter()
                    .map(|l| render_constraint(&l.constraint, net, &cs.tokens))
                    .collect();
            }
            if cs.contradictory || templates.iter().any(|b| b.alternatives.is_empty()) {
                continue;
            }
            let mut chosen = Vec::new();
            let base = cs.linear();
            match descend(&mut search, &cs, &templates, base, &mut chosen, pattern, &shelving, &witness_options, &mut analysis) {
                Ok(Some((sig, w, r))) => {
                    outcome = Outcome::Witness(sig, w, r);
                    break 'patterns;
                }
                Ok(None) => {}
                Err(Exhausted) => {
                    outcome = Outcome::Exhausted;
                    break 'patterns;
                }
            }
        }
    }

    match outcome {
        Outcome::Witness(sig, w, r) => {
            analysis.signature = Some(sig);
            if !analysis.witness_from_hint {
                analysis.witness = Some(w);
                analysis.verification = Some(r);
            }
            analysis.verdict = Verdict::Multistationary;
        }
        Outcome::Exhausted => {
            if analysis.verdict != Verdict::Multistationary {
                analysis.verdict = Verdict::Inconclusive;
                analysis.reason = Some(InconclusiveReason::Budget);
            }
        }
        Outcome::Done => {
            if analysis.verdict != Verdict::Multistationary {
                if analysis.pre_signature.is_some() {
                    analysis.verdict = Verdict::Inconclusive;
                    analysis.reason = Some(InconclusiveReason::NoWitness);
                } else {
                    analysis.verdict = Verdict::Monostationary;
                }
            }
        }
    }
    analysis.stats = search.stats;
    analysis.trace = search.trace;
    Ok(analysis)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    search: &mut Search<'_>,
    cs: &ConstraintSystem,
    templates: &[BasisTemplates],
    constraints: Vec<LinearConstraint>,
    chosen: &mut Vec<Template>,
    pattern: &SignPattern,
    shelving: &Shelving,
    witness_options: &WitnessOptions,
    analysis: &mut Analysis,
) -> std::result::Result<Option<(Signature, Witness, VerificationReport)>, Exhausted> {
    let depth = chosen.len();
    let Some(sample) = search.lp(cs.num_vars, &constraints)? else {
        if depth == templates.len() {
            search.stats.branches += 1;
        }
        return Ok(None);
    };
    if depth < templates.len() {
        for (_, template) in &templates[depth].alternatives {
            let Some(extra) = cs.resolve(template) else { continue };
            let mut next = constraints.clone();
            next.extend(extra);
            chosen.push(template.clone());
            let found = descend(search, cs, templates, next, chosen, pattern, shelving, witness_options, analysis)?;
            chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        return Ok(None);
    }

    search.stats.branches += 1;
    let preferred = match &witness_options.sigma {
        Some(user) => {
            let signs: Vec<Option<i8>> = user.iter().map(|v| Some(sign_of(v))).collect();
            search.lp(cs.num_vars, &with_signs(&constraints, &signs))?
        }
        None => None,
    };
    let sample = preferred.unwrap_or(sample);
    let Some((x, sigma)) = search.signature_point(cs.num_vars, &constraints, sample)? else {
        return Ok(None);
    };
    search.stats.feasible_branches += 1;
    let m = search.net.num_species();
    let x = canonical(&x, m);
    let sigma = match &witness_options.sigma {
        Some(user) if crate::msa::witness::sigma_matches(search.system, &x[..m], user) => user.clone(),
        _ => sigma,
    };
    let signature = Signature {
        pattern: pattern.clone(),
        shelving: shelving.clone(),
        templates: chosen.clone(),
        mu: x[..m].to_vec(),
        rho: cs
            .tokens
            .iter()
            .map(|tok| {
                tok.map(|tok| match tok {
                    RhoToken::Positive(v) | RhoToken::Negative(v) => (tok, x[v].clone()),
                    RhoToken::Zero => (tok, Rational::zero()),
                })
            })
            .collect(),
        sigma: sigma.clone(),
    };
    search.note(|| {
        let mu: Vec<String> = signature.mu.iter().map(crate::rational::to_fraction_string).collect();
        format!("feasible branch, mu = ({})", mu.join(", "))
    });
    if analysis.witness_from_hint {
        return Ok(Some((signature, analysis.witness.clone().unwrap(), analysis.verification.clone().unwrap())));
    }
    let opts = WitnessOptions {
        sigma: Some(sigma),
        ..witness_options.clone()
    };
    match construct_witness(search.system, search.t, &MuSource::Direction(signature.mu.clone()), &opts) {
        Some((w, r)) => Ok(Some((signature, w, r))),
        None => {
            search.note(|| "witness construction failed on this branch".to_string());
            if analysis.pre_signature.is_none() {
                analysis.pre_signature = Some(signature);
            }
            Ok(None)
        }
    }
}

/// Signs of `μ` as `+`, `-`, `0`.
pub fn sign_string(mu: &[Rational]) -> String {
    mu.iter()
        .map(|v| match sign_of(v) {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

/// Renders `T_y · μ` for a reactant column.
pub fn render_form(column: &[Rational], net: &ReactionNetwork) -> String {
    display_form(column, net.species())
}

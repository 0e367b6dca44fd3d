//! JSON and text reports for the command-line front end.
//!
//! JSON output uses sorted object keys, exact rationals as `"p/q"` strings and
//! floats rounded to 12 significant digits.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::kinetics::{CfRmRecord, KineticSystem};
use crate::msa::{render_form, sign_string, Analysis, HintEquilibria, PrecheckHit, Shelf, Signature, Verdict};
use crate::network::ReactionNetwork;
use crate::rational::{parse_rational, to_fraction_string, Rational};
use crate::verify::{VerificationReport, Witness};

/// Rounds to 12 significant digits; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    json!(rounded)
}

pub fn fraction(q: &Rational) -> Value {
    Value::String(to_fraction_string(q))
}

fn keyed<T>(names: &[String], values: &[T], f: impl Fn(&T) -> Value) -> Value {
    Value::Object(names.iter().cloned().zip(values.iter().map(f)).collect())
}

fn species(net: &ReactionNetwork) -> Vec<String> {
    net.species().to_vec()
}

fn reaction_ids(net: &ReactionNetwork) -> Vec<String> {
    net.reactions().iter().map(|r| r.id.clone()).collect()
}

fn ids(net: &ReactionNetwork, reactions: &[usize]) -> Value {
    json!(reactions.iter().map(|&j| net.reactions()[j].id.clone()).collect::<Vec<_>>())
}

/// Network numbers, kinetics class and regularity flags.
pub fn info_json(name: &str, system: &KineticSystem) -> Value {
    let net = system.network();
    let regularity = net.regularity_report();
    let non_cut: Vec<Value> = regularity
        .non_cut_pairs
        .iter()
        .map(|&(a, b)| json!([net.display_complex(a), net.display_complex(b)]))
        .collect();
    json!({
        "model": name,
        "species": species(net),
        "reactions": net.reactions().iter().enumerate().map(|(j, r)| json!({
            "id": r.id,
            "equation": net.display_reaction(j),
            "reversible": r.reverse.is_some(),
        })).collect::<Vec<_>>(),
        "network": serde_json::to_value(net.numbers()).expect("numbers serialize"),
        "kinetics": system.classify().to_string(),
        "regularity": {
            "positive_dependent": regularity.positive_dependent,
            "t_minimal": regularity.t_minimal,
            "linkage_classes": regularity.linkage_classes,
            "terminal_strong_linkage_classes": regularity.terminal_strong_linkage_classes,
            "cut_pair_condition": regularity.cut_pair_condition,
            "non_cut_pairs": non_cut,
            "regular": regularity.is_regular(),
        },
    })
}

pub fn info_text(name: &str, system: &KineticSystem) -> String {
    let net = system.network();
    let numbers = net.numbers();
    let regularity = net.regularity_report();
    let mut out = String::new();
    let _ = writeln!(out, "model {name}");
    for (j, _) in net.reactions().iter().enumerate() {
        let _ = writeln!(out, "  {}: {}", net.reactions()[j].id, net.display_reaction(j));
    }
    let _ = writeln!(out, "\nnetwork numbers");
    let rows = [
        ("species", numbers.species),
        ("complexes", numbers.complexes),
        ("reactant complexes", numbers.reactant_complexes),
        ("reactions", numbers.reactions),
        ("irreversible reactions", numbers.irreversible_reactions),
        ("linkage classes", numbers.linkage_classes),
        ("strong linkage classes", numbers.strong_linkage_classes),
        ("terminal strong linkage classes", numbers.terminal_strong_linkage_classes),
        ("rank", numbers.rank),
        ("deficiency", numbers.deficiency),
    ];
    for (label, value) in rows {
        let _ = writeln!(out, "  {label:<32} {value}");
    }
    let _ = writeln!(out, "\nkinetics {}", system.classify());
    let _ = writeln!(out, "\nregularity");
    let _ = writeln!(out, "  positive dependent   {}", regularity.positive_dependent);
    let _ = writeln!(
        out,
        "  t-minimal            {} (t = {}, l = {})",
        regularity.t_minimal, regularity.terminal_strong_linkage_classes, regularity.linkage_classes
    );
    let _ = writeln!(out, "  cut-pair condition   {}", regularity.cut_pair_condition);
    for &(a, b) in &regularity.non_cut_pairs {
        let _ = writeln!(out, "    not a cut pair: {{{}, {}}}", net.display_complex(a), net.display_complex(b));
    }
    let _ = writeln!(out, "  regular              {}", regularity.is_regular());
    out
}

/// Everything needed to describe one `analyze` run.
pub struct AnalysisReport<'a> {
    pub model: &'a str,
    /// The system that was analysed (after any transform).
    pub system: &'a KineticSystem,
    pub original: &'a KineticSystem,
    pub cf_rm: Option<&'a CfRmRecord>,
    pub precheck: Option<&'a PrecheckHit>,
    pub analysis: &'a Analysis,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Multistationary => "multistationary",
        Verdict::Monostationary => "monostationary",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn signature_json(net: &ReactionNetwork, s: &Signature) -> Value {
    let shelving: Map<String, Value> = s
        .shelving
        .shelves
        .iter()
        .map(|(&j, shelf)| (net.reactions()[j].id.clone(), json!(shelf.to_string())))
        .collect();
    let rho: Vec<Value> = s
        .rho
        .iter()
        .map(|entry| match entry {
            None => Value::Null,
            Some((crate::msa::RhoToken::Positive(_), v)) => json!({ "sign": "+", "ln_rho": fraction(v) }),
            Some((crate::msa::RhoToken::Negative(_), v)) => json!({ "sign": "-", "rho": fraction(v) }),
            Some((crate::msa::RhoToken::Zero, _)) => json!({ "sign": "0" }),
        })
        .collect();
    json!({
        "mu": keyed(&species(net), &s.mu, fraction),
        "mu_signs": sign_string(&s.mu),
        "sigma": keyed(&species(net), &s.sigma, fraction),
        "pattern": { "g": s.pattern.g, "h": s.pattern.h },
        "shelving": shelving,
        "templates": s.templates.iter().map(|t| t.iter().map(|a| a.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "rho": rho,
    })
}

pub fn witness_json(net: &ReactionNetwork, w: &Witness) -> Value {
    let sp = species(net);
    let rx = reaction_ids(net);
    json!({
        "mu": keyed(&sp, &w.mu, |x| float(*x)),
        "sigma": keyed(&sp, &w.sigma, fraction),
        "c_star": keyed(&sp, &w.c_star, |x| float(*x)),
        "c_double_star": keyed(&sp, &w.c_double_star, |x| float(*x)),
        "kappa": keyed(&rx, &w.kappa, |x| float(*x)),
        "k": keyed(&rx, &w.k, |x| float(*x)),
    })
}

pub fn verification_json(v: &VerificationReport) -> Value {
    json!({
        "residual_c_star": float(v.residual_c_star),
        "residual_c_double_star": float(v.residual_c_double_star),
        "compat_defect": float(v.compat_defect),
        "distinct": v.distinct,
        "positive": v.positive,
        "tol": float(v.tol),
        "pass": v.pass,
    })
}

fn hint_json(net: &ReactionNetwork, h: &HintEquilibria) -> Value {
    let sp = species(net);
    json!({
        "mu": keyed(&sp, &h.mu, |x| float(*x)),
        "sigma": keyed(&sp, &h.sigma, fraction),
        "c_star": keyed(&sp, &h.c_star, |x| float(*x)),
        "c_double_star": keyed(&sp, &h.c_double_star, |x| float(*x)),
        "sigma_in_subspace": h.sigma_in_subspace,
        "verified": h.verified,
    })
}

impl AnalysisReport<'_> {
    pub fn to_json(&self) -> Value {
        let net = self.system.network();
        let a = self.analysis;
        let classes: Vec<Value> = a
            .partition
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                json!({
                    "index": i + 1,
                    "members": ids(net, &c.members),
                    "alphas": c.alphas.iter().map(fraction).collect::<Vec<_>>(),
                    "representative": net.reactions()[c.representative].id,
                    "reversible": c.reversible,
                })
            })
            .collect();
        let groups: Vec<Value> = a
            .equation_groups
            .iter()
            .map(|g| json!(g.iter().map(|col| render_form(col, net)).collect::<Vec<_>>()))
            .collect();
        json!({
            "model": self.model,
            "network": serde_json::to_value(self.original.network().numbers()).expect("numbers serialize"),
            "kinetics": self.original.classify().to_string(),
            "cf_rm": self.cf_rm.map(|r| json!({
                "changes": serde_json::to_value(&r.changes).expect("changes serialize"),
                "new_reactants": r.new_reactants,
                "unpaired": r.unpaired,
                "network": serde_json::to_value(net.numbers()).expect("numbers serialize"),
            })),
            "precheck": self.precheck.map(|p| serde_json::to_value(p).expect("precheck serializes")),
            "verdict": verdict_name(a.verdict),
            "reason": a.reason.map(|r| serde_json::to_value(r).expect("reason serializes")),
            "early_exit": a.early_exit.as_ref().map(|e| serde_json::to_value(e).expect("exit serializes")),
            "orientation": ids(net, a.orientation.reactions()),
            "realigned": ids(net, &a.realigned),
            "partition": { "p0": ids(net, &a.partition.p0), "classes": classes },
            "basis": a.basis.iter().map(|b| b.iter().map(fraction).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "equation_groups": groups,
            "constraints": a.first_system,
            "signature": a.signature.as_ref().map(|s| signature_json(net, s)),
            "pre_signature": a.pre_signature.as_ref().map(|s| signature_json(net, s)),
            "witness": a.witness.as_ref().map(|w| {
                let mut v = witness_json(net, w);
                v["source"] = json!(if a.witness_from_hint { "hint" } else { "search" });
                v
            }),
            "verification": a.verification.as_ref().map(verification_json),
            "hint": a.hint.as_ref().map(|h| hint_json(net, h)),
            "stats": serde_json::to_value(&a.stats).expect("stats serialize"),
            "trace": a.trace,
        })
    }

    pub fn to_text(&self) -> String {
        let net = self.system.network();
        let a = self.analysis;
        let mut out = String::new();
        let _ = writeln!(out, "model {} ({})", self.model, self.original.classify());
        if let Some(r) = self.cf_rm {
            let _ = writeln!(out, "\nreactant-multiple transform applied");
            for c in &r.changes {
                let _ = writeln!(
                    out,
                    "  {}: {} -> {}  became  {} -> {}",
                    c.reaction, c.old_reactant, c.old_product, c.new_reactant, c.new_product
                );
            }
            let _ = writeln!(
                out,
                "  deficiency {} -> {}",
                self.original.network().deficiency(),
                net.deficiency()
            );
        }
        if let Some(p) = self.precheck {
            let kind = if p.inflow { "inflow" } else { "outflow" };
            let _ = writeln!(out, "\nprecheck: {kind} {} changes {} alone", p.reaction, p.species);
        }

        let _ = writeln!(out, "\norientation: {}", id_list(net, a.orientation.reactions()));
        if !a.realigned.is_empty() {
            let _ = writeln!(out, "realigned: {}", id_list(net, &a.realigned));
        }
        let _ = writeln!(out, "\nequivalence classes");
        let _ = writeln!(out, "  {:<6} {:<32} {:<14} alphas", "class", "reactions", "representative");
        if !a.partition.p0.is_empty() {
            let _ = writeln!(out, "  {:<6} {}", "P0", id_list(net, &a.partition.p0));
        }
        for (i, c) in a.partition.classes.iter().enumerate() {
            let alphas: Vec<String> = c.alphas.iter().map(to_fraction_string).collect();
            let _ = writeln!(
                out,
                "  {:<6} {:<32} {:<14} {}",
                format!("P{}", i + 1),
                id_list(net, &c.members),
                net.reactions()[c.representative].id,
                alphas.join(", ")
            );
        }
        if let Some(e) = &a.early_exit {
            let _ = writeln!(out, "\nearly exit: {}", serde_json::to_string(e).expect("exit serializes"));
        }
        if !a.basis.is_empty() {
            let _ = writeln!(out, "\nbasis over class representatives");
            for (i, b) in a.basis.iter().enumerate() {
                let entries: Vec<String> = b.iter().map(to_fraction_string).collect();
                let _ = writeln!(out, "  b{} = ({})", i + 1, entries.join(", "));
            }
        }
        if !a.equation_groups.is_empty() {
            let _ = writeln!(out, "\nequalities forced by the middle shelf");
            for g in &a.equation_groups {
                let forms: Vec<String> = g.iter().map(|c| render_form(c, net)).collect();
                let _ = writeln!(out, "  {}", forms.join(" = "));
            }
        }
        if !a.first_system.is_empty() {
            let _ = writeln!(out, "\nfirst constraint system");
            for line in &a.first_system {
                let _ = writeln!(out, "  {line}");
            }
        }
        for (label, s) in [("signature", &a.signature), ("pre-signature", &a.pre_signature)] {
            if let Some(s) = s {
                let _ = writeln!(out, "\n{label}");
                write_signature(&mut out, net, s);
            }
        }
        if let Some(h) = &a.hint {
            let _ = writeln!(out, "\nsupplied mu");
            let _ = writeln!(out, "  {:<8} {:>16} {:>8} {:>18} {:>18}", "species", "mu", "sigma", "c**", "c*");
            for (s, name) in net.species().iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {:<8} {:>16.9} {:>8} {:>18.9} {:>18.9}",
                    name,
                    h.mu[s],
                    to_fraction_string(&h.sigma[s]),
                    h.c_double_star[s],
                    h.c_star[s]
                );
            }
            if !h.sigma_in_subspace {
                let _ = writeln!(out, "  sigma is not in the stoichiometric subspace");
            }
            let _ = writeln!(out, "  verified: {}", h.verified);
        }
        if let Some(w) = &a.witness {
            let source = if a.witness_from_hint { "supplied mu" } else { "search" };
            let _ = writeln!(out, "\nwitness (from {source})");
            let _ = writeln!(out, "  {:<8} {:>18} {:>8} {:>18} {:>18}", "species", "mu", "sigma", "c**", "c*");
            for (s, name) in net.species().iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {:<8} {:>18.9e} {:>8} {:>18.9e} {:>18.9e}",
                    name,
                    w.mu[s],
                    to_fraction_string(&w.sigma[s]),
                    w.c_double_star[s],
                    w.c_star[s]
                );
            }
            let _ = writeln!(out, "  {:<8} {:>18} {:>18}", "reaction", "kappa", "k");
            for (j, r) in net.reactions().iter().enumerate() {
                let _ = writeln!(out, "  {:<8} {:>18.9e} {:>18.9e}", r.id, w.kappa[j], w.k[j]);
            }
        }
        if let Some(v) = &a.verification {
            let _ = writeln!(out, "\nverification");
            write_verification(&mut out, v);
        }
        let st = &a.stats;
        let _ = writeln!(
            out,
            "\nsearch: {} sign patterns, {} shelvings, {} branches ({} feasible), {} of {} LP calls",
            st.sign_patterns, st.shelvings, st.branches, st.feasible_branches, st.lp_calls, st.budget
        );
        if !a.trace.is_empty() {
            let _ = writeln!(out, "\ntrace");
            for line in &a.trace {
                let _ = writeln!(out, "  {line}");
            }
        }
        let _ = write!(out, "\nverdict: {}", verdict_name(a.verdict));
        if let Some(r) = a.reason {
            let _ = write!(out, " ({})", serde_json::to_value(r).expect("reason serializes").as_str().unwrap_or(""));
        }
        out.push('\n');
        out
    }
}

fn id_list(net: &ReactionNetwork, reactions: &[usize]) -> String {
    let names: Vec<&str> = reactions.iter().map(|&j| net.reactions()[j].id.as_str()).collect();
    names.join(", ")
}

fn write_signature(out: &mut String, net: &ReactionNetwork, s: &Signature) {
    let mu: Vec<String> = s.mu.iter().map(to_fraction_string).collect();
    let sigma: Vec<String> = s.sigma.iter().map(to_fraction_string).collect();
    let _ = writeln!(out, "  mu    = ({})   signs {}", mu.join(", "), sign_string(&s.mu));
    let _ = writeln!(out, "  sigma = ({})", sigma.join(", "));
    let _ = writeln!(out, "  sign pattern g = {:?}, h = {:?}", s.pattern.g, s.pattern.h);
    for shelf in [Shelf::Upper, Shelf::Middle, Shelf::Lower] {
        let on = s.shelving.on(shelf);
        if !on.is_empty() {
            let _ = writeln!(out, "  {shelf:<6}: {}", id_list(net, &on));
        }
    }
    for t in &s.templates {
        let atoms: Vec<String> = t.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "  ordering: {}", if atoms.is_empty() { "(none)".to_string() } else { atoms.join(", ") });
    }
}

pub fn write_verification(out: &mut String, v: &VerificationReport) {
    let _ = writeln!(out, "  residual at c*   {:.3e}", v.residual_c_star);
    let _ = writeln!(out, "  residual at c**  {:.3e}", v.residual_c_double_star);
    let _ = writeln!(out, "  compatibility    {:.3e}", v.compat_defect);
    let _ = writeln!(out, "  distinct {}, positive {}, tol {:e}", v.distinct, v.positive, v.tol);
    let _ = writeln!(out, "  pass {}", v.pass);
}

/// Reads a witness from a report (its `witness` member) or a bare witness object.
///
/// Rate constants missing from the object are taken from the model.
pub fn witness_from_json(value: &Value, system: &KineticSystem) -> Result<Witness, String> {
    let w = match value.get("witness") {
        Some(Value::Null) => return Err("report has no witness".to_string()),
        Some(inner) => inner,
        None => value,
    };
    let net = system.network();
    let floats = |key: &str, names: &[String]| -> Result<Option<Vec<f64>>, String> {
        let Some(obj) = w.get(key) else { return Ok(None) };
        let obj = obj.as_object().ok_or(format!("`{key}` must be an object"))?;
        names
            .iter()
            .map(|n| {
                let v = obj.get(n).ok_or(format!("`{key}` has no entry for `{n}`"))?;
                match v {
                    Value::Number(x) => x.as_f64().ok_or(format!("`{key}.{n}` is not a number")),
                    Value::String(s) => s.parse::<f64>().map_err(|_| format!("`{key}.{n}` is not a number")),
                    _ => Err(format!("`{key}.{n}` is not a number")),
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    };
    let sp = species(net);
    let rx = reaction_ids(net);
    let c_star = floats("c_star", &sp)?.ok_or("witness needs `c_star`")?;
    let c_double_star = floats("c_double_star", &sp)?.ok_or("witness needs `c_double_star`")?;
    let k = match floats("k", &rx)? {
        Some(k) => k,
        None => system
            .rate_constants()
            .ok_or("witness has no `k` and the model has no rate constants")?
            .iter()
            .map(crate::rational::to_f64)
            .collect(),
    };
    let mu = match floats("mu", &sp)? {
        Some(mu) => mu,
        None => c_star.iter().zip(&c_double_star).map(|(a, b)| (a / b).ln()).collect(),
    };
    let kappa = floats("kappa", &rx)?.unwrap_or_default();
    let sigma = match w.get("sigma").and_then(Value::as_object) {
        Some(obj) => sp
            .iter()
            .map(|n| {
                let text = match obj.get(n) {
                    Some(Value::String(s)) => s.clone(),
                    Some(Value::Number(x)) => x.to_string(),
                    _ => return Err(format!("`sigma` has no entry for `{n}`")),
                };
                parse_rational(&text).ok_or(format!("`sigma.{n}` is not a rational"))
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    Ok(Witness { mu, sigma, c_star, c_double_star, kappa, k })
}

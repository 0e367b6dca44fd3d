use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use msa_core::corpus;
use msa_core::kinetics::{cf_rm_transform, KineticsClass};
use msa_core::model::{emit_model, parse_model, Model};
use msa_core::msa::{analyze, precheck_inflow_outflow, AnalysisOptions, Orientation, Verdict, DEFAULT_MAX_BRANCHES};
use msa_core::rational::{parse_rational, to_f64, Rational};
use msa_core::report::{info_json, info_text, verification_json, witness_from_json, write_verification, AnalysisReport};
use msa_core::verify::{check_witness, DEFAULT_TOL};

/// Multistationarity analysis of power-law kinetic systems.
///
/// MODEL is a path to a model JSON file or the name of a builtin model
/// (ermog-yeast, heck-carbon, anderies, defone-cutpair, ndk-defone).
#[derive(Parser)]
#[command(name = "msa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Network numbers, kinetics class and regularity report.
    Info {
        model: String,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a non-reactant-determined system into a reactant-determined one.
    Transform {
        model: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Decide whether the system can admit multiple positive equilibria.
    Analyze {
        model: String,
        #[arg(long)]
        json: bool,
        /// Budget on linear-program calls.
        #[arg(long, default_value_t = DEFAULT_MAX_BRANCHES)]
        max_branches: u64,
        /// Stoichiometric direction c* - c**, comma separated rationals.
        #[arg(long)]
        sigma: Option<String>,
        /// Candidate mu = ln(c*/c**), comma separated.
        #[arg(long)]
        mu_hint: Option<String>,
        /// Values of kappa = k * c**^F, one per reaction.
        #[arg(long)]
        kappa: Option<String>,
        /// Common concentration of both equilibria where mu vanishes.
        #[arg(long, default_value = "1")]
        p: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        trace: bool,
    },
    /// Check a witness file against a model.
    Verify {
        model: String,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

fn load_model(spec: &str) -> Result<Model> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_model(&text).with_context(|| format!("parsing {}", path.display()));
    }
    match corpus::builtin(spec) {
        Some(parsed) => parsed.with_context(|| format!("builtin model {spec}")),
        None => bail!("no model file or builtin model named `{spec}` (builtins: {})", corpus::names().join(", ")),
    }
}

fn parse_list<T>(text: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    text.split(',')
        .map(|item| parse(item.trim()).ok_or_else(|| anyhow!("invalid {what} entry `{}`", item.trim())))
        .collect()
}

fn parse_floats(text: &str, what: &str, len: usize) -> Result<Vec<f64>> {
    let values = parse_list(text, what, |s| s.parse::<f64>().ok().filter(|v| v.is_finite()))?;
    if values.len() != len {
        bail!("{what} needs {len} values, got {}", values.len());
    }
    Ok(values)
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Info { model, json } => {
            let model = load_model(&model)?;
            if json {
                print_json(&info_json(&model.name, &model.system));
            } else {
                print!("{}", info_text(&model.name, &model.system));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform { model, output } => {
            let model = load_model(&model)?;
            let (system, record) = cf_rm_transform(&model.system)?;
            for c in &record.changes {
                eprintln!(
                    "{}: {} -> {} became {} -> {}",
                    c.reaction, c.old_reactant, c.old_product, c.new_reactant, c.new_product
                );
            }
            if record.is_identity() {
                eprintln!("system is already reactant-determined; written unchanged");
            }
            let orientation = model.orientation.clone().filter(|ids| {
                ids.iter().all(|id| system.network().reaction_index(id).is_some())
                    && Orientation::from_ids(system.network(), ids).is_ok()
            });
            let transformed = Model {
                name: format!("{}-cfrm", model.name),
                description: model.description.clone(),
                system,
                orientation,
            };
            std::fs::write(&output, emit_model(&transformed)).with_context(|| format!("writing {}", output.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { model, json, max_branches, sigma, mu_hint, kappa, p, tol, trace } => {
            let model = load_model(&model)?;
            let (system, record) = match model.system.classify() {
                KineticsClass::Rdk => (model.system.clone(), None),
                KineticsClass::Ndk => {
                    let (system, record) = cf_rm_transform(&model.system)?;
                    (system, Some(record))
                }
            };
            let net = system.network();
            let m = net.num_species();
            let mut options = AnalysisOptions { max_branches, tol, trace, ..AnalysisOptions::default() };
            if let Some(ids) = &model.orientation {
                if let Ok(o) = Orientation::from_ids(net, ids) {
                    options.orientation = Some(o);
                }
            }
            if let Some(text) = sigma {
                let values: Vec<Rational> = parse_list(&text, "sigma", parse_rational)?;
                if values.len() != m {
                    bail!("sigma needs {m} values, got {}", values.len());
                }
                options.sigma = Some(values);
            }
            if let Some(text) = mu_hint {
                options.mu_hint = Some(parse_floats(&text, "mu-hint", m)?);
            }
            if let Some(text) = kappa {
                let values = parse_floats(&text, "kappa", net.num_reactions())?;
                if values.iter().any(|v| *v <= 0.0) {
                    bail!("kappa values must be positive");
                }
                options.kappa = Some(values);
            }
            let p = parse_rational(&p).map(|q| to_f64(&q)).filter(|v| *v > 0.0);
            options.p = p.ok_or_else(|| anyhow!("--p must be a positive rational"))?;

            let precheck = precheck_inflow_outflow(&system);
            let analysis = analyze(&system, &options)?;
            let report = AnalysisReport {
                model: &model.name,
                system: &system,
                original: &model.system,
                cf_rm: record.as_ref(),
                precheck: precheck.as_ref(),
                analysis: &analysis,
            };
            if json {
                print_json(&report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            Ok(match analysis.verdict {
                Verdict::Inconclusive => ExitCode::from(2),
                _ => ExitCode::SUCCESS,
            })
        }
        Command::Verify { model, witness, tol, json } => {
            let model = load_model(&model)?;
            let text = std::fs::read_to_string(&witness).with_context(|| format!("reading {}", witness.display()))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", witness.display()))?;
            let w = witness_from_json(&value, &model.system).map_err(|e| anyhow!(e))?;
            let report = check_witness(&model.system, &w, tol)?;
            if json {
                print_json(&verification_json(&report));
            } else {
                let mut out = String::new();
                write_verification(&mut out, &report);
                print!("{out}");
            }
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

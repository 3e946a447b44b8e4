//! Batch command-line front end: parse, check, eval, valid, sat,
//! internalize, elim-nec, and corpus over the documented file formats.
//!
//! Exit codes: 0 for success/true/SAT, 1 for false/NOMODEL/check-failed,
//! 2 for usage or format errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use lpltl::canon::{decide, Certificate, DecideConfig};
use lpltl::internalize::{eliminate_necessitation, internalize, internalize_g};
use lpltl::proof::file::{parse_cs_file, parse_proof_file, write_proof_file, CsSpec, ProofFile};
use lpltl::proof::{check_derivation_with, theorem_corpus, ConstantSpecification};
use lpltl::semantics::file::{parse_system_file, write_system_file, SystemFile};
use lpltl::syntax::{parse_formula, parse_term, AgentId, ParseOptions};
use lpltl::SystemVariant;

const REPORT_SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "lpltl",
    version,
    about = "Temporal justification logic toolkit"
)]
struct Cli {
    /// Emit a machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LangOpts {
    /// System variant: lpltl, lpltl-star, or lpltl-g.
    #[arg(long, default_value = "lpltl")]
    variant: SystemVariant,
    /// Number of agents.
    #[arg(long, default_value_t = 2)]
    agents: u32,
    /// Enable the experimental interaction principles.
    #[arg(long, default_value_t = false)]
    experimental: bool,
}

impl LangOpts {
    fn parse_options(&self) -> ParseOptions {
        ParseOptions {
            agents: self.agents,
            variant: self.variant,
            experimental: self.experimental,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula or term and print its canonical core form.
    Parse {
        #[command(flatten)]
        lang: LangOpts,
        /// Formula text, or a path to a file containing one.
        #[arg(long, conflicts_with = "term")]
        formula: Option<String>,
        /// Term text.
        #[arg(long)]
        term: Option<String>,
    },
    /// Check a Hilbert derivation from a proof file.
    Check {
        /// Proof file path.
        #[arg(long)]
        proof: PathBuf,
        /// Override the file's constant specification (`schematic` or a path).
        #[arg(long)]
        cs: Option<String>,
        /// Check under this variant instead of the file header's.
        #[arg(long)]
        variant: Option<SystemVariant>,
        /// Override the agent count; derivation agents must stay in range.
        #[arg(long)]
        agents: Option<u32>,
    },
    /// Evaluate a formula on a system: everywhere, or at --run/--pos.
    Eval {
        /// System file path.
        #[arg(long)]
        system: PathBuf,
        /// Formula text, or a path to a file containing one.
        #[arg(long)]
        formula: String,
        /// Run index (0-based); requires --pos.
        #[arg(long, requires = "pos")]
        run: Option<usize>,
        /// Position within the run; requires --run.
        #[arg(long, requires = "run")]
        pos: Option<usize>,
    },
    /// Validate a system file.
    Valid {
        #[arg(long)]
        system: PathBuf,
    },
    /// Decide satisfiability; prints a verified witness system on SAT.
    Sat {
        #[command(flatten)]
        lang: LangOpts,
        /// Formula text, or a path to a file containing one.
        #[arg(long)]
        formula: String,
        /// Constant specification: `schematic` or a path.
        #[arg(long, default_value = "schematic")]
        cs: String,
        /// Cap on the closure size.
        #[arg(long, default_value_t = 24)]
        closure_cap: usize,
        /// Cap on acceptable lassos per search.
        #[arg(long, default_value_t = 64)]
        lasso_cap: usize,
        /// Write the witness system file here on SAT.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a checked derivation into a justification term.
    Internalize {
        /// Proof file path (star or G variant; eliminate necessitation first
        /// for base-variant proofs).
        #[arg(long)]
        proof: PathBuf,
        /// The agent the term justifies the conclusion for.
        #[arg(long)]
        agent: u32,
    },
    /// Rewrite a base-variant proof into the star variant without temporal
    /// necessitation rules.
    ElimNec {
        #[arg(long)]
        proof: PathBuf,
    },
    /// Check the built-in theorem corpus.
    Corpus {
        /// Restrict to one entry.
        #[arg(long)]
        name: Option<String>,
        /// Print the selected entry as a proof file.
        #[arg(long, requires = "name")]
        dump: bool,
    },
}

struct Failure {
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            message: e.to_string(),
        }
    }
}

fn emit(json: bool, command: &str, ok: bool, data: Value, diagnostics: Vec<String>, human: &str) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    // writes may hit a closed pipe; that is not an error worth a panic
    if json {
        let report = json!({
            "schema": REPORT_SCHEMA,
            "command": command,
            "ok": ok,
            "data": data,
            "diagnostics": diagnostics,
        });
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        if !human.is_empty() {
            let _ = writeln!(out, "{human}");
        }
        for d in diagnostics {
            eprintln!("{d}");
        }
    }
}

/// `--formula` accepts literal text or a path to a file holding the text.
fn formula_text(value: &str) -> Result<String, Failure> {
    let path = Path::new(value);
    if path.exists() && path.is_file() {
        Ok(fs::read_to_string(path)
            .map_err(Failure::from)?
            .trim()
            .to_string())
    } else {
        Ok(value.to_string())
    }
}

fn load_cs(
    spec: &CsSpec,
    base_dir: &Path,
    variant: SystemVariant,
) -> Result<ConstantSpecification, Failure> {
    match spec {
        CsSpec::Schematic => Ok(ConstantSpecification::schematic(variant)),
        CsSpec::Path(p) => {
            let path = base_dir.join(p);
            let text = fs::read_to_string(&path).map_err(|e| Failure {
                message: format!("{}: {e}", path.display()),
            })?;
            parse_cs_file(&text).map_err(|e| Failure {
                message: format!("{}: {e}", path.display()),
            })
        }
    }
}

fn load_proof(path: &Path) -> Result<(ProofFile, ConstantSpecification), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
    })?;
    let file = parse_proof_file(&text).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let cs = load_cs(&file.cs, base, file.variant)?;
    Ok((file, cs))
}

fn load_system(path: &Path) -> Result<SystemFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
    })?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    parse_system_file(&text, |spec, variant| {
        load_cs(spec, &base, variant).map_err(|f| f.message)
    })
    .map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            emit(json, "error", false, Value::Null, vec![failure.message], "");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Parse {
            lang,
            formula,
            term,
        } => {
            let opts = lang.parse_options();
            match (formula, term) {
                (Some(text), None) => {
                    let phi = parse_formula(&formula_text(&text)?, &opts)?;
                    let sub = lpltl::syntax::subformulas(&phi);
                    let plus = lpltl::syntax::closure_plus(&phi);
                    let data = json!({
                        "canonical": phi.to_string(),
                        "subformulas": sub.len(),
                        "closure_plus": plus.len(),
                    });
                    emit(json, "parse", true, data, vec![], &phi.to_string());
                    Ok(0)
                }
                (None, Some(text)) => {
                    let t = parse_term(&text, &opts)?;
                    let data = json!({ "canonical": t.to_string() });
                    emit(json, "parse", true, data, vec![], &t.to_string());
                    Ok(0)
                }
                _ => Err(Failure {
                    message: "pass exactly one of --formula or --term".into(),
                }),
            }
        }
        Command::Check {
            proof,
            cs,
            variant,
            agents,
        } => {
            let (file, mut specification) = load_proof(&proof)?;
            let variant = variant.unwrap_or(file.variant);
            if let Some(h) = agents {
                let out_of_range = file.derivation.lines.iter().any(|line| {
                    line.formula.max_agent() > h
                        || matches!(&line.just,
                            lpltl::proof::Justification::AxNec { agent, .. } if agent.get() > h)
                        || matches!(&line.just,
                            lpltl::proof::Justification::AxNecStar { agents, .. }
                            | lpltl::proof::Justification::IterConstNec { agents, .. }
                            if agents.iter().any(|a| a.get() > h))
                });
                if out_of_range {
                    return Err(Failure {
                        message: format!("derivation uses agents beyond --agents {h}"),
                    });
                }
            }
            if let Some(override_spec) = cs {
                let base = proof.parent().unwrap_or(Path::new("."));
                specification = load_cs(&CsSpec::parse(&override_spec), base, variant)?;
            } else if variant != file.variant && matches!(file.cs, CsSpec::Schematic) {
                specification = ConstantSpecification::schematic(variant);
            }
            let report =
                check_derivation_with(&file.derivation, &specification, variant, file.experimental);
            let failures: Vec<Value> = report
                .verdicts
                .iter()
                .filter_map(|(idx, r)| {
                    r.as_ref()
                        .err()
                        .map(|e| json!({ "line": idx, "error": e.to_string() }))
                })
                .collect();
            let data = json!({
                "variant": variant.to_string(),
                "lines": report.verdicts.len(),
                "failures": failures,
            });
            let human = format!("{report}");
            let ok = report.ok;
            emit(json, "check", ok, data, vec![], &human);
            Ok(if ok { 0 } else { 1 })
        }
        Command::Eval {
            system,
            formula,
            run,
            pos,
        } => {
            let file = load_system(&system)?;
            let sys = &file.system;
            let report = sys.validate();
            if !report.is_valid() {
                return Err(Failure {
                    message: format!("system is invalid: {report}"),
                });
            }
            let opts = ParseOptions {
                agents: sys.agents(),
                variant: sys.variant,
                experimental: false,
            };
            let phi = parse_formula(&formula_text(&formula)?, &opts)?;
            let (value, mode) = match (run, pos) {
                (Some(r), Some(n)) => {
                    let lasso = sys.runs.get(r).ok_or(Failure {
                        message: format!("no run with index {r}"),
                    })?;
                    (sys.eval(lasso, n, &phi)?, format!("run {r} position {n}"))
                }
                _ => (sys.holds_everywhere(&phi)?, "everywhere".to_string()),
            };
            let data = json!({ "formula": phi.to_string(), "mode": mode, "value": value });
            emit(
                json,
                "eval",
                value,
                data,
                vec![],
                &format!("{mode}: {value}"),
            );
            Ok(if value { 0 } else { 1 })
        }
        Command::Valid { system } => {
            let file = load_system(&system)?;
            let report = file.system.validate();
            let data = json!({
                "valid": report.is_valid(),
                "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            });
            let ok = report.is_valid();
            emit(json, "valid", ok, data, vec![], &report.to_string());
            Ok(if ok { 0 } else { 1 })
        }
        Command::Sat {
            lang,
            formula,
            cs,
            closure_cap,
            lasso_cap,
            out,
        } => {
            let opts = lang.parse_options();
            let phi = parse_formula(&formula_text(&formula)?, &opts)?;
            let spec = load_cs(&CsSpec::parse(&cs), Path::new("."), lang.variant)?;
            let config = DecideConfig {
                agents: lang.agents,
                closure_cap,
                lasso_cap,
                ..DecideConfig::default()
            };
            let certificate = decide(&phi, &spec, lang.variant, &config)?;
            match certificate {
                Certificate::Sat {
                    system,
                    witness,
                    stats,
                } => {
                    let text = write_system_file(&system, &CsSpec::parse(&cs));
                    if let Some(out_path) = &out {
                        fs::write(out_path, &text).map_err(|e| Failure {
                            message: format!("{}: {e}", out_path.display()),
                        })?;
                    }
                    let data = json!({
                        "result": "sat",
                        "witness_run": witness,
                        "stats": stats,
                        "system": text,
                    });
                    emit(json, "sat", true, data, vec![], &format!("SAT\n{text}"));
                    Ok(0)
                }
                Certificate::NoModel { stats } => {
                    let human = format!(
                        "NOMODEL (closure {}, atoms {} generated / {} retained, {} candidates, {} verification failures)",
                        stats.closure_size,
                        stats.atoms_generated,
                        stats.atoms_retained,
                        stats.candidates_tried,
                        stats.verification_failures,
                    );
                    let data = json!({ "result": "nomodel", "stats": stats });
                    emit(json, "sat", false, data, vec![], &human);
                    Ok(1)
                }
            }
        }
        Command::Internalize { proof, agent } => {
            let (file, specification) = load_proof(&proof)?;
            if agent < 1 || agent > file.agents {
                return Err(Failure {
                    message: format!("agent {agent} out of range 1..={}", file.agents),
                });
            }
            let check = check_derivation_with(
                &file.derivation,
                &specification,
                file.variant,
                file.experimental,
            );
            if !check.ok {
                return Err(Failure {
                    message: format!("input proof does not check: {check}"),
                });
            }
            let agent = AgentId::new(agent);
            let result = match file.variant {
                SystemVariant::LpltlStar => internalize(&file.derivation, agent, &specification)?,
                SystemVariant::LpltlG => internalize_g(&file.derivation, agent, &specification)?,
                SystemVariant::Lpltl => {
                    return Err(Failure {
                        message:
                            "base-variant proofs may use temporal necessitation; run elim-nec first"
                                .into(),
                    })
                }
            };
            let proof_text = write_proof_file(&result.derivation, file.agents, &file.cs);
            let data = json!({
                "term": result.term.to_string(),
                "conclusion": result.derivation.conclusion().map(|f| f.to_string()),
                "lines": result.derivation.lines.len(),
                "proof": proof_text,
            });
            emit(
                json,
                "internalize",
                true,
                data,
                vec![],
                &format!("term: {}\n{proof_text}", result.term),
            );
            Ok(0)
        }
        Command::ElimNec { proof } => {
            let (file, specification) = load_proof(&proof)?;
            if file.variant != SystemVariant::Lpltl {
                return Err(Failure {
                    message: format!("expected a base-variant proof, found {}", file.variant),
                });
            }
            let check = check_derivation_with(
                &file.derivation,
                &specification,
                file.variant,
                file.experimental,
            );
            if !check.ok {
                return Err(Failure {
                    message: format!("input proof does not check: {check}"),
                });
            }
            let star_cs = ConstantSpecification::schematic(SystemVariant::LpltlStar);
            let rewritten = eliminate_necessitation(&file.derivation, &star_cs)?;
            let proof_text = write_proof_file(&rewritten, file.agents, &CsSpec::Schematic);
            let data = json!({
                "lines": rewritten.lines.len(),
                "conclusion": rewritten.conclusion().map(|f| f.to_string()),
                "proof": proof_text,
            });
            emit(json, "elim-nec", true, data, vec![], &proof_text);
            Ok(0)
        }
        Command::Corpus { name, dump } => {
            let corpus = theorem_corpus();
            let selected: Vec<_> = match &name {
                Some(n) => corpus.iter().filter(|e| e.name == n).collect(),
                None => corpus.iter().collect(),
            };
            if selected.is_empty() {
                return Err(Failure {
                    message: format!("no corpus entry named {name:?}"),
                });
            }
            if dump {
                let entry = selected[0];
                let text = write_proof_file(&entry.derivation, 2, &CsSpec::Schematic);
                let data = json!({ "name": entry.name, "proof": text });
                emit(json, "corpus", true, data, vec![], &text);
                return Ok(0);
            }
            let mut all_ok = true;
            let mut rows = Vec::new();
            let mut human = String::new();
            for entry in selected {
                let cs = ConstantSpecification::schematic(entry.variant);
                let report = check_derivation_with(&entry.derivation, &cs, entry.variant, false);
                all_ok &= report.ok;
                rows.push(json!({
                    "name": entry.name,
                    "variant": entry.variant.to_string(),
                    "conclusion": entry.conclusion().to_string(),
                    "lines": entry.derivation.lines.len(),
                    "ok": report.ok,
                }));
                human.push_str(&format!(
                    "{:<16} {:<12} {:>3} lines  {}\n",
                    entry.name,
                    entry.variant.to_string(),
                    entry.derivation.lines.len(),
                    if report.ok { "ok" } else { "FAILED" }
                ));
            }
            let data = json!({ "entries": rows });
            emit(json, "corpus", all_ok, data, vec![], human.trim_end());
            Ok(if all_ok { 0 } else { 1 })
        }
    }
}

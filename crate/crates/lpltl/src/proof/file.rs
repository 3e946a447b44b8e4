//! The proof file format.
//!
//! Header lines set the context, then each line is `N. <formula> ; <JUST>`:
//!
//! ```text
//! variant: lpltl
//! agents: 2
//! cs: schematic
//! 1. (P -> P) ; TAUT
//! 2. X (P -> P) ; NECX 1
//! ```
//!
//! Justifications: `TAUT`, `AX <name>`, `MP i j`, `NECX i`, `NECG i`,
//! `CS c i`, `CSSTAR n c i0,...,in`, `ICN n c i0,...,in`.

use std::str::FromStr;

use super::axioms::AxiomName;
use super::check::{Derivation, Justification, Line};
use super::cs::ConstantSpecification;
use crate::syntax::{parse_formula, AgentId, Formula, ParseOptions, Term};
use crate::SystemVariant;

/// Where a file points for its constant specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CsSpec {
    Schematic,
    Path(String),
}

impl CsSpec {
    pub fn parse(text: &str) -> CsSpec {
        let t = text.trim();
        if t.eq_ignore_ascii_case("schematic") {
            CsSpec::Schematic
        } else {
            CsSpec::Path(t.to_string())
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProofFile {
    pub variant: SystemVariant,
    pub agents: u32,
    pub experimental: bool,
    pub cs: CsSpec,
    pub derivation: Derivation,
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    BadFormula {
        line: usize,
        #[source]
        source: crate::syntax::ParseError,
    },
}

fn fmt_err(line: usize, message: impl Into<String>) -> FileError {
    FileError::Format {
        line,
        message: message.into(),
    }
}

fn parse_agent(word: &str, agents: u32, lineno: usize) -> Result<AgentId, FileError> {
    let n: u32 = word
        .parse()
        .map_err(|_| fmt_err(lineno, format!("bad agent index `{word}`")))?;
    if n < 1 || n > agents {
        return Err(fmt_err(
            lineno,
            format!("agent index {n} out of range 1..={agents}"),
        ));
    }
    Ok(AgentId::new(n))
}

fn parse_agent_list(word: &str, agents: u32, lineno: usize) -> Result<Vec<AgentId>, FileError> {
    word.split(',')
        .map(|w| parse_agent(w.trim(), agents, lineno))
        .collect()
}

fn parse_justification(text: &str, agents: u32, lineno: usize) -> Result<Justification, FileError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let usage = |msg: &str| fmt_err(lineno, format!("bad justification `{text}`: {msg}"));
    let index = |w: &str| -> Result<usize, FileError> {
        w.parse()
            .map_err(|_| usage(&format!("bad line reference `{w}`")))
    };
    match words.as_slice() {
        ["TAUT"] => Ok(Justification::Axiom(AxiomName::Taut)),
        ["AX", name] => {
            let axiom = AxiomName::from_str(name).map_err(|e| usage(&e))?;
            Ok(Justification::Axiom(axiom))
        }
        ["MP", i, j] => Ok(Justification::Mp {
            minor: index(i)?,
            major: index(j)?,
        }),
        ["NECX", i] => Ok(Justification::NecNext { from: index(i)? }),
        ["NECG", i] => Ok(Justification::NecBox { from: index(i)? }),
        ["CS", c, i] => Ok(Justification::AxNec {
            constant: c.to_string(),
            agent: parse_agent(i, agents, lineno)?,
        }),
        ["CSSTAR", n, c, list] => {
            let n: usize = n.parse().map_err(|_| usage("bad star depth"))?;
            let agent_list = parse_agent_list(list, agents, lineno)?;
            if agent_list.len() != n + 1 {
                return Err(usage(&format!(
                    "expected {} agents for star depth {n}",
                    n + 1
                )));
            }
            Ok(Justification::AxNecStar {
                constant: c.to_string(),
                agents: agent_list,
            })
        }
        ["ICN", n, c, list] => {
            let n: usize = n.parse().map_err(|_| usage("bad star depth"))?;
            let agent_list = parse_agent_list(list, agents, lineno)?;
            if agent_list.len() != n + 1 {
                return Err(usage(&format!(
                    "expected {} agents for star depth {n}",
                    n + 1
                )));
            }
            Ok(Justification::IterConstNec {
                constant: c.to_string(),
                agents: agent_list,
            })
        }
        _ => Err(usage("unknown rule")),
    }
}

/// Parses a proof file.
pub fn parse_proof_file(text: &str) -> Result<ProofFile, FileError> {
    let mut variant = SystemVariant::Lpltl;
    let mut agents = 2u32;
    let mut experimental = false;
    let mut cs = CsSpec::Schematic;
    let mut lines: Vec<Line> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("variant:") {
            variant = SystemVariant::from_str(rest).map_err(|e| fmt_err(lineno, e))?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("agents:") {
            agents = rest
                .trim()
                .parse()
                .map_err(|_| fmt_err(lineno, format!("bad agent count `{}`", rest.trim())))?;
            if agents == 0 {
                return Err(fmt_err(lineno, "agent count must be at least 1"));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("experimental:") {
            experimental = rest.trim().eq_ignore_ascii_case("true");
            continue;
        }
        if let Some(rest) = line.strip_prefix("cs:") {
            cs = CsSpec::parse(rest);
            continue;
        }
        // N. <formula> ; <JUST>
        let (head, just_text) = line
            .rsplit_once(';')
            .ok_or_else(|| fmt_err(lineno, "expected `N. <formula> ; <JUST>`"))?;
        let (num, formula_text) = head
            .split_once('.')
            .ok_or_else(|| fmt_err(lineno, "expected a line number before `.`"))?;
        let index: usize = num
            .trim()
            .parse()
            .map_err(|_| fmt_err(lineno, format!("bad line number `{}`", num.trim())))?;
        let opts = ParseOptions {
            agents,
            variant,
            experimental,
        };
        let formula =
            parse_formula(formula_text.trim(), &opts).map_err(|source| FileError::BadFormula {
                line: lineno,
                source,
            })?;
        let just = parse_justification(just_text.trim(), agents, lineno)?;
        lines.push(Line {
            index,
            formula,
            just,
        });
    }
    Ok(ProofFile {
        variant,
        agents,
        experimental,
        cs,
        derivation: Derivation { variant, lines },
    })
}

fn justification_text(just: &Justification) -> String {
    match just {
        Justification::Axiom(AxiomName::Taut) => "TAUT".to_string(),
        Justification::Axiom(a) => format!("AX {a}"),
        Justification::Mp { minor, major } => format!("MP {minor} {major}"),
        Justification::NecNext { from } => format!("NECX {from}"),
        Justification::NecBox { from } => format!("NECG {from}"),
        Justification::AxNec { constant, agent } => format!("CS {constant} {agent}"),
        Justification::AxNecStar { constant, agents } => {
            let list: Vec<String> = agents.iter().map(|a| a.to_string()).collect();
            format!("CSSTAR {} {constant} {}", agents.len() - 1, list.join(","))
        }
        Justification::IterConstNec { constant, agents } => {
            let list: Vec<String> = agents.iter().map(|a| a.to_string()).collect();
            format!("ICN {} {constant} {}", agents.len() - 1, list.join(","))
        }
    }
}

/// Renders a derivation in the proof file format.
pub fn write_proof_file(derivation: &Derivation, agents: u32, cs: &CsSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("variant: {}\n", derivation.variant));
    out.push_str(&format!("agents: {agents}\n"));
    match cs {
        CsSpec::Schematic => out.push_str("cs: schematic\n"),
        CsSpec::Path(p) => out.push_str(&format!("cs: {p}\n")),
    }
    for line in &derivation.lines {
        out.push_str(&format!(
            "{}. {} ; {}\n",
            line.index,
            line.formula,
            justification_text(&line.just)
        ));
    }
    out
}

/// Parses a constant specification file: the same headers as a proof file,
/// followed by one `[c]_i <axiom>` formula per line.
pub fn parse_cs_file(text: &str) -> Result<ConstantSpecification, FileError> {
    let mut variant = SystemVariant::Lpltl;
    let mut agents = 2u32;
    let mut experimental = false;
    let mut entries: Vec<(String, AgentId, Formula)> = Vec::new();
    let mut pending: Vec<(usize, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("variant:") {
            variant = SystemVariant::from_str(rest).map_err(|e| fmt_err(lineno, e))?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("agents:") {
            agents = rest
                .trim()
                .parse()
                .map_err(|_| fmt_err(lineno, format!("bad agent count `{}`", rest.trim())))?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("experimental:") {
            experimental = rest.trim().eq_ignore_ascii_case("true");
            continue;
        }
        pending.push((lineno, line.to_string()));
    }
    for (lineno, line) in pending {
        let opts = ParseOptions {
            agents,
            variant,
            experimental,
        };
        let formula = parse_formula(&line, &opts).map_err(|source| FileError::BadFormula {
            line: lineno,
            source,
        })?;
        match formula {
            Formula::Just(Term::Const(c), agent, body) => entries.push((c, agent, *body)),
            other => {
                return Err(fmt_err(
                    lineno,
                    format!("expected a `[c]_i <axiom>` entry, found {other}"),
                ))
            }
        }
    }
    ConstantSpecification::finite(variant, entries).map_err(|e| fmt_err(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check::check_derivation;
    use crate::proof::corpus::theorem_corpus;

    #[test]
    fn parses_a_small_proof() {
        let text = "\
variant: lpltl
agents: 2
cs: schematic
1. (P -> P) ; TAUT
2. X (P -> P) ; NECX 1
";
        let file = parse_proof_file(text).unwrap();
        assert_eq!(file.variant, SystemVariant::Lpltl);
        assert_eq!(file.derivation.lines.len(), 2);
        let cs = ConstantSpecification::schematic(file.variant);
        assert!(check_derivation(&file.derivation, &cs, file.variant).ok);
    }

    #[test]
    fn corpus_round_trips_through_text() {
        for entry in theorem_corpus() {
            let text = write_proof_file(&entry.derivation, 2, &CsSpec::Schematic);
            let parsed = parse_proof_file(&text).unwrap_or_else(|e| {
                panic!("{}: {e}\n{text}", entry.name);
            });
            assert_eq!(parsed.derivation, entry.derivation, "{}", entry.name);
            let cs = ConstantSpecification::schematic(entry.variant);
            assert!(
                check_derivation(&parsed.derivation, &cs, entry.variant).ok,
                "{}",
                entry.name
            );
        }
    }

    #[test]
    fn cs_file_parses_entries() {
        let text = "\
variant: lpltl
agents: 2
[c1]_1 (P -> P)
[c2]_2 (X ~P <-> ~X P)
";
        let cs = parse_cs_file(text).unwrap();
        let p = Formula::prop("P");
        assert!(cs.lookup("c1", AgentId::new(1), &p.clone().implies(p.clone())));
        assert!(cs.lookup(
            "c2",
            AgentId::new(2),
            &p.clone().neg().next().iff(p.clone().next().neg())
        ));
        assert!(!cs.lookup("c1", AgentId::new(2), &p.clone().implies(p)));
    }

    #[test]
    fn cs_file_rejects_non_axiom() {
        let err = parse_cs_file("[c1]_1 P\n");
        assert!(err.is_err());
    }

    #[test]
    fn reports_bad_rule() {
        let err = parse_proof_file("1. P ; WAT\n").unwrap_err();
        assert!(matches!(err, FileError::Format { line: 1, .. }));
    }
}

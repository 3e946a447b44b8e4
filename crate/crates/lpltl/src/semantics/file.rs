//! The system file format.
//!
//! ```text
//! agents: 2
//! variant: lpltl
//! cs: schematic
//! states: s0 s1
//! rel 1: (s0,s0) (s0,s1) (s1,s1)
//! val s0: P Q
//! evid 1 s0 x : P
//! run: s0 ; s1        # prefix ; loop
//! ```

use std::collections::BTreeSet;
use std::str::FromStr;

use super::{EvidenceBase, Frame, InterpretedSystem, LassoRun};
use crate::proof::file::CsSpec;
use crate::proof::ConstantSpecification;
use crate::syntax::{parse_formula, parse_term, AgentId, ParseOptions};
use crate::SystemVariant;

#[derive(Debug, thiserror::Error)]
pub enum SystemFileError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    BadSyntax {
        line: usize,
        #[source]
        source: crate::syntax::ParseError,
    },
}

fn fmt_err(line: usize, message: impl Into<String>) -> SystemFileError {
    SystemFileError::Format {
        line,
        message: message.into(),
    }
}

/// A parsed system file; the constant specification is left as a reference
/// for the caller to resolve (schematic or a path).
#[derive(Debug)]
pub struct SystemFile {
    pub system: InterpretedSystem,
    pub cs_spec: CsSpec,
}

/// Parses a system file. `resolve_cs` maps a path reference to a loaded
/// specification; pass the schematic default when the file says so.
pub fn parse_system_file(
    text: &str,
    resolve_cs: impl Fn(&CsSpec, SystemVariant) -> Result<ConstantSpecification, String>,
) -> Result<SystemFile, SystemFileError> {
    let mut agents = 2u32;
    let mut variant = SystemVariant::Lpltl;
    let mut experimental = false;
    let mut cs_spec = CsSpec::Schematic;
    let mut states: Vec<String> = Vec::new();
    let mut rel_lines: Vec<(usize, u32, String)> = Vec::new();
    let mut val_lines: Vec<(usize, String, String)> = Vec::new();
    let mut evid_lines: Vec<(usize, u32, String, String)> = Vec::new();
    let mut run_lines: Vec<(usize, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
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
        } else if let Some(rest) = line.strip_prefix("variant:") {
            variant = SystemVariant::from_str(rest).map_err(|e| fmt_err(lineno, e))?;
        } else if let Some(rest) = line.strip_prefix("experimental:") {
            experimental = rest.trim().eq_ignore_ascii_case("true");
        } else if let Some(rest) = line.strip_prefix("cs:") {
            cs_spec = CsSpec::parse(rest);
        } else if let Some(rest) = line.strip_prefix("states:") {
            states.extend(rest.split_whitespace().map(str::to_string));
        } else if let Some(rest) = line.strip_prefix("rel") {
            let (agent_text, pairs) = rest
                .split_once(':')
                .ok_or_else(|| fmt_err(lineno, "expected `rel i: (a,b) ...`"))?;
            let agent: u32 = agent_text
                .trim()
                .parse()
                .map_err(|_| fmt_err(lineno, format!("bad agent `{}`", agent_text.trim())))?;
            rel_lines.push((lineno, agent, pairs.to_string()));
        } else if let Some(rest) = line.strip_prefix("val") {
            let (state, props) = rest
                .split_once(':')
                .ok_or_else(|| fmt_err(lineno, "expected `val s: P Q ...`"))?;
            val_lines.push((lineno, state.trim().to_string(), props.to_string()));
        } else if let Some(rest) = line.strip_prefix("evid") {
            let (head, formula) = rest
                .split_once(':')
                .ok_or_else(|| fmt_err(lineno, "expected `evid i s <term> : <formula>`"))?;
            let mut words = head.split_whitespace();
            let agent: u32 = words
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| fmt_err(lineno, "expected an agent index after `evid`"))?;
            let state = words
                .next()
                .ok_or_else(|| fmt_err(lineno, "expected a state name after the agent"))?
                .to_string();
            let term_text: String = words.collect::<Vec<_>>().join(" ");
            if term_text.is_empty() {
                return Err(fmt_err(lineno, "expected a term before `:`"));
            }
            evid_lines.push((lineno, agent, state, format!("{term_text}\u{0}{formula}")));
        } else if let Some(rest) = line.strip_prefix("run:") {
            run_lines.push((lineno, rest.to_string()));
        } else {
            return Err(fmt_err(lineno, format!("unrecognized line `{line}`")));
        }
    }

    if states.is_empty() {
        return Err(fmt_err(0, "no states declared"));
    }
    {
        let mut seen = BTreeSet::new();
        for s in &states {
            if !seen.insert(s.clone()) {
                return Err(fmt_err(0, format!("duplicate state name `{s}`")));
            }
        }
    }

    let opts = ParseOptions {
        agents,
        variant,
        experimental,
    };
    let mut frame = Frame::new(states.clone(), agents);
    let state_index = |name: &str, lineno: usize| {
        frame_index(&states, name).ok_or_else(|| fmt_err(lineno, format!("unknown state `{name}`")))
    };

    for (lineno, agent, pairs) in rel_lines {
        if agent < 1 || agent > agents {
            return Err(fmt_err(
                lineno,
                format!("agent index {agent} out of range 1..={agents}"),
            ));
        }
        for pair in pairs.split_whitespace() {
            let inner = pair
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| fmt_err(lineno, format!("expected `(a,b)`, found `{pair}`")))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| fmt_err(lineno, format!("expected `(a,b)`, found `{pair}`")))?;
            let from = state_index(a.trim(), lineno)?;
            let to = state_index(b.trim(), lineno)?;
            frame.add_edge(AgentId::new(agent), from, to);
        }
    }

    let mut valuation = vec![BTreeSet::new(); states.len()];
    for (lineno, state, props) in val_lines {
        let idx = state_index(&state, lineno)?;
        for prop in props.split_whitespace() {
            valuation[idx].insert(prop.to_string());
        }
    }

    let mut base = EvidenceBase::new();
    for (lineno, agent, state, packed) in evid_lines {
        if agent < 1 || agent > agents {
            return Err(fmt_err(
                lineno,
                format!("agent index {agent} out of range 1..={agents}"),
            ));
        }
        let idx = state_index(&state, lineno)?;
        let (term_text, formula_text) = packed.split_once('\u{0}').unwrap();
        let term = parse_term(term_text, &opts).map_err(|source| SystemFileError::BadSyntax {
            line: lineno,
            source,
        })?;
        let phi =
            parse_formula(formula_text, &opts).map_err(|source| SystemFileError::BadSyntax {
                line: lineno,
                source,
            })?;
        base.add(AgentId::new(agent), idx, term, phi);
    }

    let mut runs = Vec::new();
    for (lineno, spec) in run_lines {
        let (prefix_text, loop_text) = spec
            .split_once(';')
            .ok_or_else(|| fmt_err(lineno, "expected `run: prefix ; loop`"))?;
        let mut prefix = Vec::new();
        for name in prefix_text.split_whitespace() {
            prefix.push(state_index(name, lineno)?);
        }
        let mut looping = Vec::new();
        for name in loop_text.split_whitespace() {
            looping.push(state_index(name, lineno)?);
        }
        if looping.is_empty() {
            return Err(fmt_err(lineno, "run loop must be non-empty"));
        }
        runs.push(LassoRun::new(prefix, looping));
    }
    if runs.is_empty() {
        return Err(fmt_err(0, "no runs declared"));
    }

    let cs = resolve_cs(&cs_spec, variant).map_err(|message| fmt_err(0, message))?;
    let system = InterpretedSystem::new(frame, runs, base, valuation, cs, variant);
    Ok(SystemFile { system, cs_spec })
}

fn frame_index(states: &[String], name: &str) -> Option<usize> {
    states.iter().position(|s| s == name)
}

/// Renders a system in the file format, deterministically ordered.
pub fn write_system_file(system: &InterpretedSystem, cs_spec: &CsSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("agents: {}\n", system.agents()));
    out.push_str(&format!("variant: {}\n", system.variant));
    match cs_spec {
        CsSpec::Schematic => out.push_str("cs: schematic\n"),
        CsSpec::Path(p) => out.push_str(&format!("cs: {p}\n")),
    }
    let names: Vec<&str> = (0..system.frame.num_states())
        .map(|s| system.frame.state_name(s))
        .collect();
    out.push_str(&format!("states: {}\n", names.join(" ")));
    for agent in 1..=system.agents() {
        let agent = AgentId::new(agent);
        let mut pairs = Vec::new();
        for v in 0..system.frame.num_states() {
            for w in system.frame.successors(agent, v) {
                pairs.push(format!("({},{})", names[v], names[w]));
            }
        }
        if !pairs.is_empty() {
            out.push_str(&format!("rel {agent}: {}\n", pairs.join(" ")));
        }
    }
    for (idx, props) in system.valuation.iter().enumerate() {
        if !props.is_empty() {
            let list: Vec<&str> = props.iter().map(String::as_str).collect();
            out.push_str(&format!("val {}: {}\n", names[idx], list.join(" ")));
        }
    }
    for (agent, state, term, phi) in system.base.iter() {
        out.push_str(&format!("evid {agent} {} {term} : {phi}\n", names[state]));
    }
    for run in &system.runs {
        let prefix: Vec<&str> = run.prefix.iter().map(|&s| names[s]).collect();
        let looping: Vec<&str> = run.looping.iter().map(|&s| names[s]).collect();
        out.push_str(&format!(
            "run: {} ; {}\n",
            prefix.join(" "),
            looping.join(" ")
        ));
    }
    out
}

/// Resolver that only accepts the schematic specification; path references
/// are an error. Useful for tests and in-memory systems.
pub fn schematic_only(
    spec: &CsSpec,
    variant: SystemVariant,
) -> Result<ConstantSpecification, String> {
    match spec {
        CsSpec::Schematic => Ok(ConstantSpecification::schematic(variant)),
        CsSpec::Path(p) => Err(format!(
            "constant specification path `{p}` cannot be resolved here"
        )),
    }
}

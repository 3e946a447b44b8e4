use std::collections::HashMap;
use std::fmt;

use super::axioms::{match_axiom_with, AxiomName};
use super::cs::ConstantSpecification;
use super::taut::is_tautology;
use crate::syntax::{AgentId, Formula, Term};
use crate::SystemVariant;

/// How a derivation line is justified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// An instance of a named axiom schema.
    Axiom(AxiomName),
    /// Modus ponens from `minor` (the antecedent) and `major` (the
    /// implication). The checker also accepts the two citations swapped.
    Mp { minor: usize, major: usize },
    /// `X phi` from `phi` (base and G variants only).
    NecNext { from: usize },
    /// `G phi` from `phi` (base and G variants only).
    NecBox { from: usize },
    /// `[c]_i phi` for a specification entry.
    AxNec { constant: String, agent: AgentId },
    /// The starred rule: `[*^n c]_{i_n} G [*^(n-1) c]_{i_(n-1)} G ... [c]_{i_0} phi`
    /// with `[c]_{i_0} phi` in the specification. `agents` is `i_0 ..= i_n`.
    /// With a single agent this is exactly `AxNec`.
    AxNecStar {
        constant: String,
        agents: Vec<AgentId>,
    },
    /// Iterated constant necessitation (G variant):
    /// `[*^n c]_{i_n} ... [*c]_{i_1} [c]_{i_0} phi`, no boxes in between.
    IterConstNec {
        constant: String,
        agents: Vec<AgentId>,
    },
}

impl Justification {
    pub fn references(&self) -> Vec<usize> {
        match self {
            Justification::Mp { minor, major } => vec![*minor, *major],
            Justification::NecNext { from } | Justification::NecBox { from } => vec![*from],
            _ => Vec::new(),
        }
    }
}

/// One line of a Hilbert derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub index: usize,
    pub formula: Formula,
    pub just: Justification,
}

/// A line-indexed Hilbert derivation for one system variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub variant: SystemVariant,
    pub lines: Vec<Line>,
}

impl Derivation {
    pub fn new(variant: SystemVariant) -> Derivation {
        Derivation {
            variant,
            lines: Vec::new(),
        }
    }

    /// Appends a line with the next sequential index and returns that index.
    pub fn push(&mut self, formula: Formula, just: Justification) -> usize {
        let index = self.lines.last().map(|l| l.index + 1).unwrap_or(1);
        self.lines.push(Line {
            index,
            formula,
            just,
        });
        index
    }

    /// The formula established by the derivation.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn uses_temporal_necessitation(&self) -> bool {
        self.lines.iter().any(|l| {
            matches!(
                l.just,
                Justification::NecNext { .. } | Justification::NecBox { .. }
            )
        })
    }
}

/// Why a line was rejected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LineError {
    #[error("formula is not an instance of axiom {axiom}")]
    BadAxiomInstance { axiom: AxiomName },
    #[error("tautology check overflow: {atoms} opaque atoms (cap {cap})")]
    TautTooLarge { atoms: usize, cap: usize },
    #[error("modus ponens premises {minor} and {major} do not produce this formula")]
    BadMp { minor: usize, major: usize },
    #[error("rule {rule} is not available in this variant")]
    RuleNotInVariant { rule: &'static str },
    #[error("necessitation of line {from} does not produce this formula")]
    BadNecessitation { from: usize },
    #[error("[{constant}]_{agent} with this formula is not in the constant specification")]
    NotInCS { constant: String, agent: AgentId },
    #[error("malformed star chain: {detail}")]
    MalformedStarChain { detail: String },
    #[error("reference to line {index} which does not precede this line")]
    BadReference { index: usize },
    #[error("line index {index} is not strictly increasing")]
    NonIncreasingIndex { index: usize },
    #[error("term operator `{op}` is not in the variant's language")]
    OperatorNotInVariant { op: &'static str },
}

/// Per-line verdicts from checking a derivation.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub ok: bool,
    pub verdicts: Vec<(usize, Result<(), LineError>)>,
}

impl CheckReport {
    pub fn first_failure(&self) -> Option<(usize, &LineError)> {
        self.verdicts
            .iter()
            .find_map(|(idx, r)| r.as_ref().err().map(|e| (*idx, e)))
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            write!(f, "ok ({} lines)", self.verdicts.len())
        } else {
            match self.first_failure() {
                Some((idx, err)) => write!(f, "FAILED at line {idx}: {err}"),
                None => write!(f, "FAILED (empty derivation)"),
            }
        }
    }
}

fn rule_allowed(just: &Justification, variant: SystemVariant) -> Result<(), LineError> {
    match just {
        Justification::Axiom(_) | Justification::Mp { .. } | Justification::AxNec { .. } => Ok(()),
        Justification::NecNext { .. } => {
            if variant.allows_temporal_necessitation() {
                Ok(())
            } else {
                Err(LineError::RuleNotInVariant { rule: "NECX" })
            }
        }
        Justification::NecBox { .. } => {
            if variant.allows_temporal_necessitation() {
                Ok(())
            } else {
                Err(LineError::RuleNotInVariant { rule: "NECG" })
            }
        }
        Justification::AxNecStar { agents, .. } => {
            // a one-agent chain is plain axiom necessitation
            if agents.len() <= 1 || variant == SystemVariant::LpltlStar {
                Ok(())
            } else {
                Err(LineError::RuleNotInVariant { rule: "CSSTAR" })
            }
        }
        Justification::IterConstNec { agents, .. } => {
            if agents.len() <= 1 || variant == SystemVariant::LpltlG {
                Ok(())
            } else {
                Err(LineError::RuleNotInVariant { rule: "ICN" })
            }
        }
    }
}

/// Peels `[*^n c]_{i_n} G ... G [c]_{i_0} phi` (when `boxed`) or
/// `[*^n c]_{i_n} ... [c]_{i_0} phi` (when not), checking term shape and the
/// agent annotations, and returns the innermost `phi`.
fn peel_star_chain<'a>(
    formula: &'a Formula,
    constant: &str,
    agents: &[AgentId],
    boxed: bool,
) -> Result<&'a Formula, LineError> {
    if agents.is_empty() {
        return Err(LineError::MalformedStarChain {
            detail: "no agents given".into(),
        });
    }
    let n = agents.len() - 1;
    let mut current = formula;
    for level in (0..=n).rev() {
        let Formula::Just(term, agent, body) = current else {
            return Err(LineError::MalformedStarChain {
                detail: format!("expected a justification assertion at star level {level}"),
            });
        };
        match term.as_star_chain() {
            Some((depth, name)) if depth == level && name == constant => {}
            _ => {
                return Err(LineError::MalformedStarChain {
                    detail: format!("expected term *^{level} {constant}, found {term}"),
                })
            }
        }
        if *agent != agents[level] {
            return Err(LineError::MalformedStarChain {
                detail: format!("agent {agent} does not match annotation {}", agents[level]),
            });
        }
        if level == 0 {
            return Ok(body);
        }
        current = if boxed {
            body.as_always()
                .ok_or_else(|| LineError::MalformedStarChain {
                    detail: format!("expected G below star level {level}"),
                })?
        } else {
            body
        };
    }
    unreachable!()
}

/// Checks a Hilbert derivation line by line against the variant's axioms,
/// rules, and the constant specification.
pub fn check_derivation(
    derivation: &Derivation,
    cs: &ConstantSpecification,
    variant: SystemVariant,
) -> CheckReport {
    check_derivation_with(derivation, cs, variant, false)
}

/// `check_derivation` with the experimental principles enabled.
pub fn check_derivation_with(
    derivation: &Derivation,
    cs: &ConstantSpecification,
    variant: SystemVariant,
    experimental: bool,
) -> CheckReport {
    let mut verdicts = Vec::with_capacity(derivation.lines.len());
    let mut seen: HashMap<usize, &Formula> = HashMap::new();
    let mut last_index = 0usize;
    for line in &derivation.lines {
        let verdict = check_line(line, &seen, last_index, cs, variant, experimental);
        if line.index > last_index {
            last_index = line.index;
            seen.insert(line.index, &line.formula);
        }
        verdicts.push((line.index, verdict));
    }
    let ok = !verdicts.is_empty() && verdicts.iter().all(|(_, r)| r.is_ok());
    CheckReport { ok, verdicts }
}

fn check_line(
    line: &Line,
    seen: &HashMap<usize, &Formula>,
    last_index: usize,
    cs: &ConstantSpecification,
    variant: SystemVariant,
    experimental: bool,
) -> Result<(), LineError> {
    if line.index <= last_index {
        return Err(LineError::NonIncreasingIndex { index: line.index });
    }
    if let Err(op) = line.formula.check_ops(variant, experimental) {
        return Err(LineError::OperatorNotInVariant { op });
    }
    rule_allowed(&line.just, variant)?;
    let resolve = |idx: usize| {
        seen.get(&idx)
            .copied()
            .ok_or(LineError::BadReference { index: idx })
    };
    match &line.just {
        Justification::Axiom(axiom) => {
            if *axiom == AxiomName::Taut {
                match is_tautology(&line.formula) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err(LineError::BadAxiomInstance { axiom: *axiom }),
                    Err(e) => Err(LineError::TautTooLarge {
                        atoms: e.atoms,
                        cap: e.cap,
                    }),
                }
            } else if match_axiom_with(&line.formula, variant, experimental).contains(axiom) {
                Ok(())
            } else {
                Err(LineError::BadAxiomInstance { axiom: *axiom })
            }
        }
        Justification::Mp { minor, major } => {
            let a = resolve(*minor)?;
            let b = resolve(*major)?;
            let fits = |antecedent: &Formula, implication: &Formula| match implication {
                Formula::Implies(from, to) => **from == *antecedent && **to == line.formula,
                _ => false,
            };
            if fits(a, b) || fits(b, a) {
                Ok(())
            } else {
                Err(LineError::BadMp {
                    minor: *minor,
                    major: *major,
                })
            }
        }
        Justification::NecNext { from } => {
            let premise = resolve(*from)?;
            if line.formula == premise.clone().next() {
                Ok(())
            } else {
                Err(LineError::BadNecessitation { from: *from })
            }
        }
        Justification::NecBox { from } => {
            let premise = resolve(*from)?;
            if line.formula == premise.clone().always() {
                Ok(())
            } else {
                Err(LineError::BadNecessitation { from: *from })
            }
        }
        Justification::AxNec { constant, agent } => match &line.formula {
            Formula::Just(Term::Const(c), i, body) if c == constant && i == agent => {
                if cs.lookup(constant, *agent, body) {
                    Ok(())
                } else {
                    Err(LineError::NotInCS {
                        constant: constant.clone(),
                        agent: *agent,
                    })
                }
            }
            _ => Err(LineError::MalformedStarChain {
                detail: format!("expected [{constant}]_{agent} phi"),
            }),
        },
        Justification::AxNecStar { constant, agents } => {
            let phi = peel_star_chain(&line.formula, constant, agents, true)?;
            if cs.lookup(constant, agents[0], phi) {
                Ok(())
            } else {
                Err(LineError::NotInCS {
                    constant: constant.clone(),
                    agent: agents[0],
                })
            }
        }
        Justification::IterConstNec { constant, agents } => {
            let phi = peel_star_chain(&line.formula, constant, agents, false)?;
            if cs.lookup(constant, agents[0], phi) {
                Ok(())
            } else {
                Err(LineError::NotInCS {
                    constant: constant.clone(),
                    agent: agents[0],
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::cs::schematic_name;

    fn p() -> Formula {
        Formula::prop("P")
    }

    fn i(n: u32) -> AgentId {
        AgentId::new(n)
    }

    fn schematic(variant: SystemVariant) -> ConstantSpecification {
        ConstantSpecification::schematic(variant)
    }

    #[test]
    fn nec_next_variant_gating() {
        let mut d = Derivation::new(SystemVariant::Lpltl);
        let l1 = d.push(p().implies(p()), Justification::Axiom(AxiomName::Taut));
        d.push(p().implies(p()).next(), Justification::NecNext { from: l1 });

        let report = check_derivation(&d, &schematic(SystemVariant::Lpltl), SystemVariant::Lpltl);
        assert!(report.ok, "{report}");

        let report = check_derivation(
            &d,
            &schematic(SystemVariant::LpltlStar),
            SystemVariant::LpltlStar,
        );
        assert!(!report.ok);
        let (idx, err) = report.first_failure().unwrap();
        assert_eq!(idx, 2);
        assert_eq!(*err, LineError::RuleNotInVariant { rule: "NECX" });
    }

    #[test]
    fn mp_accepts_both_citation_orders() {
        let cs = schematic(SystemVariant::Lpltl);
        let mut d = Derivation::new(SystemVariant::Lpltl);
        let a = d.push(p().implies(p()), Justification::Axiom(AxiomName::Taut));
        let b = d.push(
            p().implies(p()).implies(p().implies(p().implies(p()))),
            Justification::Axiom(AxiomName::Taut),
        );
        d.push(
            p().implies(p().implies(p())),
            Justification::Mp { minor: a, major: b },
        );
        assert!(check_derivation(&d, &cs, SystemVariant::Lpltl).ok);

        let mut swapped = d.clone();
        swapped.lines[2].just = Justification::Mp { minor: b, major: a };
        assert!(check_derivation(&swapped, &cs, SystemVariant::Lpltl).ok);
    }

    #[test]
    fn mp_wrong_shape_is_rejected() {
        let cs = schematic(SystemVariant::Lpltl);
        let mut d = Derivation::new(SystemVariant::Lpltl);
        let a = d.push(p().implies(p()), Justification::Axiom(AxiomName::Taut));
        let b = d.push(p().or(p().neg()), Justification::Axiom(AxiomName::Taut));
        d.push(p(), Justification::Mp { minor: a, major: b });
        let report = check_derivation(&d, &cs, SystemVariant::Lpltl);
        assert!(matches!(
            report.first_failure(),
            Some((3, LineError::BadMp { .. }))
        ));
    }

    #[test]
    fn ax_nec_checks_cs_membership() {
        let cs = schematic(SystemVariant::Lpltl);
        let phi = p().implies(p());
        let c = schematic_name(&phi, i(1));
        let mut d = Derivation::new(SystemVariant::Lpltl);
        d.push(
            Formula::just(Term::constant(&c), i(1), phi.clone()),
            Justification::AxNec {
                constant: c.clone(),
                agent: i(1),
            },
        );
        assert!(check_derivation(&d, &cs, SystemVariant::Lpltl).ok);

        // wrong agent: the schematic name binds the agent
        let mut bad = Derivation::new(SystemVariant::Lpltl);
        bad.push(
            Formula::just(Term::constant(&c), i(2), phi),
            Justification::AxNec {
                constant: c,
                agent: i(2),
            },
        );
        let report = check_derivation(&bad, &cs, SystemVariant::Lpltl);
        assert!(matches!(
            report.first_failure(),
            Some((1, LineError::NotInCS { .. }))
        ));
    }

    #[test]
    fn ax_nec_star_chain() {
        let cs = schematic(SystemVariant::LpltlStar);
        let phi = p().implies(p());
        let c = schematic_name(&phi, i(1));
        // [*c]_2 G [c]_1 (P -> P)
        let formula = Formula::just(
            Term::constant(&c).star(),
            i(2),
            Formula::just(Term::constant(&c), i(1), phi).always(),
        );
        let mut d = Derivation::new(SystemVariant::LpltlStar);
        d.push(
            formula,
            Justification::AxNecStar {
                constant: c.clone(),
                agents: vec![i(1), i(2)],
            },
        );
        let report = check_derivation(&d, &cs, SystemVariant::LpltlStar);
        assert!(report.ok, "{report}");

        // same chain is not a base-variant rule
        let report = check_derivation(&d, &cs, SystemVariant::Lpltl);
        assert!(!report.ok);
    }

    #[test]
    fn malformed_star_chain() {
        let cs = schematic(SystemVariant::LpltlStar);
        let phi = p().implies(p());
        let c = schematic_name(&phi, i(1));
        // missing the G between levels
        let formula = Formula::just(
            Term::constant(&c).star(),
            i(2),
            Formula::just(Term::constant(&c), i(1), phi),
        );
        let mut d = Derivation::new(SystemVariant::LpltlStar);
        d.push(
            formula,
            Justification::AxNecStar {
                constant: c,
                agents: vec![i(1), i(2)],
            },
        );
        let report = check_derivation(&d, &cs, SystemVariant::LpltlStar);
        assert!(matches!(
            report.first_failure(),
            Some((1, LineError::MalformedStarChain { .. }))
        ));
    }

    #[test]
    fn iter_const_nec_is_g_only() {
        let cs = schematic(SystemVariant::LpltlG);
        let phi = p().implies(p());
        let c = schematic_name(&phi, i(1));
        // [*c]_2 [c]_1 (P -> P), no boxes
        let formula = Formula::just(
            Term::constant(&c).star(),
            i(2),
            Formula::just(Term::constant(&c), i(1), phi),
        );
        let mut d = Derivation::new(SystemVariant::LpltlG);
        d.push(
            formula,
            Justification::IterConstNec {
                constant: c,
                agents: vec![i(1), i(2)],
            },
        );
        assert!(check_derivation(&d, &cs, SystemVariant::LpltlG).ok);
        let report = check_derivation(&d, &cs, SystemVariant::LpltlStar);
        assert!(matches!(
            report.first_failure(),
            Some((1, LineError::RuleNotInVariant { .. }))
        ));
    }

    #[test]
    fn forward_reference_is_rejected() {
        let cs = schematic(SystemVariant::Lpltl);
        let mut d = Derivation::new(SystemVariant::Lpltl);
        d.push(p(), Justification::Mp { minor: 2, major: 3 });
        let report = check_derivation(&d, &cs, SystemVariant::Lpltl);
        assert!(matches!(
            report.first_failure(),
            Some((1, LineError::BadReference { .. }))
        ));
    }

    #[test]
    fn star_terms_rejected_in_base_language() {
        let cs = schematic(SystemVariant::Lpltl);
        let mut d = Derivation::new(SystemVariant::Lpltl);
        let j = Formula::just(Term::constant("c1").star(), i(1), p());
        d.push(j.clone().implies(j), Justification::Axiom(AxiomName::Taut));
        let report = check_derivation(&d, &cs, SystemVariant::Lpltl);
        assert!(matches!(
            report.first_failure(),
            Some((1, LineError::OperatorNotInVariant { op: "*" }))
        ));
    }
}

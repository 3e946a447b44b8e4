//! Necessitation elimination and internalization: rewriting temporal
//! necessitation steps into starred axiom necessitation, and compiling a
//! checked derivation of `phi` into a term `t` together with a checked
//! derivation of `[t]_i phi`.

use std::collections::HashMap;

use crate::proof::{
    box_implies_self_derivation, AxiomName, ConstantSpecification, Derivation, Justification,
};
use crate::syntax::{AgentId, Formula, Term};
use crate::SystemVariant;

#[derive(Debug, thiserror::Error)]
pub enum InternalizeError {
    #[error("line {line} uses temporal necessitation; eliminate it first")]
    ContainsNecessitation { line: usize },
    #[error("line {line} uses rule {rule}, which this transformation does not accept")]
    UnsupportedRule { line: usize, rule: &'static str },
    #[error("the constant specification has no constant for {formula} and agent {agent}")]
    NotAxAppropriate { formula: Formula, agent: AgentId },
    #[error("line {line} cites line {cited}, which does not precede it")]
    MalformedSource { line: usize, cited: usize },
}

/// The output of internalization: the justification term, a derivation of
/// `[term]_i phi` in the target variant, and the term each source line was
/// compiled to.
#[derive(Debug, Clone)]
pub struct InternalizationResult {
    pub term: Term,
    pub derivation: Derivation,
    pub trace: Vec<(usize, Term)>,
}

fn constant_for(
    cs: &ConstantSpecification,
    phi: &Formula,
    agent: AgentId,
) -> Result<String, InternalizeError> {
    cs.constant_for(phi, agent)
        .ok_or_else(|| InternalizeError::NotAxAppropriate {
            formula: phi.clone(),
            agent,
        })
}

fn source_formula(d: &Derivation, line: usize, cited: usize) -> Result<&Formula, InternalizeError> {
    d.lines
        .iter()
        .find(|l| l.index == cited)
        .map(|l| &l.formula)
        .ok_or(InternalizeError::MalformedSource { line, cited })
}

/// Resolves a modus ponens citation pair into (antecedent line, implication
/// line), accepting either citation order. Also returns the premise formula.
fn mp_roles(
    d: &Derivation,
    line: usize,
    conclusion: &Formula,
    minor: usize,
    major: usize,
) -> Result<(usize, usize, Formula), InternalizeError> {
    let f_minor = source_formula(d, line, minor)?;
    let f_major = source_formula(d, line, major)?;
    if *f_major == f_minor.clone().implies(conclusion.clone()) {
        Ok((minor, major, f_minor.clone()))
    } else if *f_minor == f_major.clone().implies(conclusion.clone()) {
        Ok((major, minor, f_major.clone()))
    } else {
        Err(InternalizeError::MalformedSource { line, cited: major })
    }
}

// ---------------------------------------------------------------------------
// Necessitation elimination

struct Eliminator<'a> {
    cs: &'a ConstantSpecification,
    out: Derivation,
    /// out index of `phi` -> out index of `G phi`
    boxed: HashMap<usize, usize>,
}

impl<'a> Eliminator<'a> {
    fn out_formula(&self, idx: usize) -> Formula {
        self.out.lines[idx - 1].formula.clone()
    }

    /// Derives `G phi` for the formula proved at out line `idx`. The output
    /// derivation is necessitation-free, so the recursion only meets axioms,
    /// modus ponens, and (starred) axiom necessitation.
    fn box_of(&mut self, idx: usize) -> Result<usize, InternalizeError> {
        if let Some(&done) = self.boxed.get(&idx) {
            return Ok(done);
        }
        let line = self.out.lines[idx - 1].clone();
        let result = match &line.just {
            Justification::Axiom(_) => self.box_axiom(&line.formula)?,
            Justification::Mp { minor, major } => {
                let minor_boxed = self.box_of(*minor)?;
                let major_boxed = self.box_of(*major)?;
                let Formula::Implies(a, b) = self.out_formula(*major) else {
                    unreachable!("major premise of modus ponens is an implication")
                };
                let k = a
                    .as_ref()
                    .clone()
                    .implies(b.as_ref().clone())
                    .always()
                    .implies(
                        a.as_ref()
                            .clone()
                            .always()
                            .implies(b.as_ref().clone().always()),
                    );
                let k_idx = self.out.push(k, Justification::Axiom(AxiomName::BoxK));
                let mid = self.out.push(
                    a.as_ref()
                        .clone()
                        .always()
                        .implies(b.as_ref().clone().always()),
                    Justification::Mp {
                        minor: major_boxed,
                        major: k_idx,
                    },
                );
                self.out.push(
                    b.as_ref().clone().always(),
                    Justification::Mp {
                        minor: minor_boxed,
                        major: mid,
                    },
                )
            }
            Justification::AxNec { constant, agent } => {
                let constant = constant.clone();
                let agents = vec![*agent];
                self.bump_star_chain(&line.formula, &constant, &agents)?
            }
            Justification::AxNecStar { constant, agents } => {
                let constant = constant.clone();
                let agents = agents.clone();
                self.bump_star_chain(&line.formula, &constant, &agents)?
            }
            Justification::NecNext { .. }
            | Justification::NecBox { .. }
            | Justification::IterConstNec { .. } => {
                unreachable!("output lines are necessitation-free")
            }
        };
        self.boxed.insert(idx, result);
        Ok(result)
    }

    /// Axiom case: `[*c]_1 G [c]_1 phi` by the starred rule, reflexivity to
    /// strip the outer assertion, then boxed reflexivity and the box-k axiom
    /// to reach `G phi`.
    fn box_axiom(&mut self, phi: &Formula) -> Result<usize, InternalizeError> {
        let one = AgentId::new(1);
        let c = constant_for(self.cs, phi, one)?;
        let asserted = Formula::just(Term::constant(&c), one, phi.clone());
        let boxed_assertion = asserted.clone().always();
        let starred = Formula::just(Term::constant(&c).star(), one, boxed_assertion.clone());
        let l1 = self.out.push(
            starred.clone(),
            Justification::AxNecStar {
                constant: c.clone(),
                agents: vec![one, one],
            },
        );
        let l2 = self.out.push(
            starred.implies(boxed_assertion.clone()),
            Justification::Axiom(AxiomName::Reflexivity),
        );
        let l3 = self.out.push(
            boxed_assertion.clone(),
            Justification::Mp {
                minor: l1,
                major: l2,
            },
        );
        let guard = asserted.clone().implies(phi.clone()).always();
        let l4 = self.out.push(
            guard.clone(),
            Justification::Axiom(AxiomName::BoxedReflexivity),
        );
        let k = guard.implies(boxed_assertion.clone().implies(phi.clone().always()));
        let l5 = self.out.push(k, Justification::Axiom(AxiomName::BoxK));
        let l6 = self.out.push(
            boxed_assertion.implies(phi.clone().always()),
            Justification::Mp {
                minor: l4,
                major: l5,
            },
        );
        Ok(self.out.push(
            phi.clone().always(),
            Justification::Mp {
                minor: l3,
                major: l6,
            },
        ))
    }

    /// Starred-rule case: extend the chain by one level and strip the new
    /// outer assertion with reflexivity.
    fn bump_star_chain(
        &mut self,
        phi: &Formula,
        constant: &str,
        agents: &[AgentId],
    ) -> Result<usize, InternalizeError> {
        let one = AgentId::new(1);
        let mut extended = agents.to_vec();
        extended.push(one);
        let boxed = phi.clone().always();
        let asserted = Formula::just(Term::star_chain(constant, agents.len()), one, boxed.clone());
        let l1 = self.out.push(
            asserted.clone(),
            Justification::AxNecStar {
                constant: constant.to_string(),
                agents: extended,
            },
        );
        let l2 = self.out.push(
            asserted.implies(boxed.clone()),
            Justification::Axiom(AxiomName::Reflexivity),
        );
        Ok(self.out.push(
            boxed,
            Justification::Mp {
                minor: l1,
                major: l2,
            },
        ))
    }
}

/// Rewrites a base-variant derivation into the star variant with the same
/// conclusion and no temporal necessitation steps. NECG lines become starred
/// axiom necessitation plus reflexivity and box-k reasoning; NECX lines take
/// the NECG route and finish through the mix axiom.
pub fn eliminate_necessitation(
    derivation: &Derivation,
    cs: &ConstantSpecification,
) -> Result<Derivation, InternalizeError> {
    let mut e = Eliminator {
        cs,
        out: Derivation::new(SystemVariant::LpltlStar),
        boxed: HashMap::new(),
    };
    let mut map: HashMap<usize, usize> = HashMap::new();
    for line in &derivation.lines {
        let remap = |map: &HashMap<usize, usize>, cited: usize| {
            map.get(&cited)
                .copied()
                .ok_or(InternalizeError::MalformedSource {
                    line: line.index,
                    cited,
                })
        };
        let out_idx = match &line.just {
            Justification::Axiom(a) => e.out.push(line.formula.clone(), Justification::Axiom(*a)),
            Justification::Mp { minor, major } => {
                let (minor_src, major_src, _) =
                    mp_roles(derivation, line.index, &line.formula, *minor, *major)?;
                let j = Justification::Mp {
                    minor: remap(&map, minor_src)?,
                    major: remap(&map, major_src)?,
                };
                e.out.push(line.formula.clone(), j)
            }
            Justification::AxNec { constant, agent } => e.out.push(
                line.formula.clone(),
                Justification::AxNec {
                    constant: constant.clone(),
                    agent: *agent,
                },
            ),
            Justification::AxNecStar { constant, agents } => e.out.push(
                line.formula.clone(),
                Justification::AxNecStar {
                    constant: constant.clone(),
                    agents: agents.clone(),
                },
            ),
            Justification::IterConstNec { .. } => {
                return Err(InternalizeError::UnsupportedRule {
                    line: line.index,
                    rule: "ICN",
                })
            }
            Justification::NecBox { from } => {
                let source = remap(&map, *from)?;
                e.box_of(source)?
            }
            Justification::NecNext { from } => {
                let source = remap(&map, *from)?;
                let boxed_idx = e.box_of(source)?;
                let inner = source_formula(derivation, line.index, *from)?.clone();
                let mix = inner.clone().always().implies(inner.clone().next());
                let mix_idx = e.out.push(mix, Justification::Axiom(AxiomName::Mix));
                e.out.push(
                    inner.next(),
                    Justification::Mp {
                        minor: boxed_idx,
                        major: mix_idx,
                    },
                )
            }
        };
        map.insert(line.index, out_idx);
    }
    Ok(e.out)
}

// ---------------------------------------------------------------------------
// Internalization

struct Internalizer<'a> {
    cs: &'a ConstantSpecification,
    agent: AgentId,
    out: Derivation,
}

impl<'a> Internalizer<'a> {
    /// Asserts an axiom through its specification constant.
    fn assert_axiom(&mut self, phi: &Formula) -> Result<(usize, Term), InternalizeError> {
        let c = constant_for(self.cs, phi, self.agent)?;
        let idx = self.out.push(
            Formula::just(Term::constant(&c), self.agent, phi.clone()),
            Justification::AxNec {
                constant: c.clone(),
                agent: self.agent,
            },
        );
        Ok((idx, Term::constant(c)))
    }

    /// From `[s1]_i (psi -> phi)` and `[s2]_i psi`, derives `[s1.s2]_i phi`
    /// through the application axiom.
    fn apply(
        &mut self,
        implication: (usize, &Term),
        antecedent: (usize, &Term),
        premise: &Formula,
        conclusion: &Formula,
    ) -> (usize, Term) {
        let (imp_idx, s1) = implication;
        let (ant_idx, s2) = antecedent;
        let term = s1.clone().app(s2.clone());
        let lhs = Formula::just(
            s1.clone(),
            self.agent,
            premise.clone().implies(conclusion.clone()),
        );
        let mid = Formula::just(s2.clone(), self.agent, premise.clone()).implies(Formula::just(
            term.clone(),
            self.agent,
            conclusion.clone(),
        ));
        let app_idx = self.out.push(
            lhs.implies(mid.clone()),
            Justification::Axiom(AxiomName::Application),
        );
        let mid_idx = self.out.push(
            mid,
            Justification::Mp {
                minor: imp_idx,
                major: app_idx,
            },
        );
        let idx = self.out.push(
            Formula::just(term.clone(), self.agent, conclusion.clone()),
            Justification::Mp {
                minor: ant_idx,
                major: mid_idx,
            },
        );
        (idx, term)
    }

    /// Weak internalization of an axioms-plus-modus-ponens derivation,
    /// appended to the output in place. Returns the line and term asserting
    /// the source conclusion.
    fn internalize_simple(&mut self, d: &Derivation) -> Result<(usize, Term), InternalizeError> {
        let mut map: HashMap<usize, (usize, Term)> = HashMap::new();
        for line in &d.lines {
            let produced = match &line.just {
                Justification::Axiom(_) => self.assert_axiom(&line.formula)?,
                Justification::Mp { minor, major } => {
                    let (minor_src, major_src, premise) =
                        mp_roles(d, line.index, &line.formula, *minor, *major)?;
                    let (ant_idx, s2) = map[&minor_src].clone();
                    let (imp_idx, s1) = map[&major_src].clone();
                    self.apply((imp_idx, &s1), (ant_idx, &s2), &premise, &line.formula)
                }
                Justification::NecNext { .. } | Justification::NecBox { .. } => {
                    return Err(InternalizeError::ContainsNecessitation { line: line.index })
                }
                _ => {
                    return Err(InternalizeError::UnsupportedRule {
                        line: line.index,
                        rule: "starred rule inside an embedded derivation",
                    })
                }
            };
            map.insert(line.index, produced);
        }
        let last = d.lines.last().expect("non-empty derivation");
        Ok(map[&last.index].clone())
    }

    /// Starred-rule case: the rule also yields `[*^(n+1) c]_i G phi`;
    /// internalizing `G phi -> phi` gives a term `u`, and application yields
    /// `[u . *^(n+1) c]_i phi`.
    fn lift_star_chain(
        &mut self,
        phi: &Formula,
        constant: &str,
        agents: &[AgentId],
    ) -> Result<(usize, Term), InternalizeError> {
        let mut extended = agents.to_vec();
        extended.push(self.agent);
        let boxed = phi.clone().always();
        let star_term = Term::star_chain(constant, agents.len());
        let star_idx = self.out.push(
            Formula::just(star_term.clone(), self.agent, boxed.clone()),
            Justification::AxNecStar {
                constant: constant.to_string(),
                agents: extended,
            },
        );
        let sub = box_implies_self_derivation(phi);
        let (u_idx, u_term) = self.internalize_simple(&sub)?;
        Ok(self.apply((u_idx, &u_term), (star_idx, &star_term), &boxed, phi))
    }

    /// From `[s]_i psi` at `s_idx`, derives `[up s]_i G psi` through NECG
    /// and the generalize axiom.
    fn generalize(&mut self, s: &Term, s_idx: usize, psi: &Formula) -> (usize, Term) {
        let asserted = Formula::just(s.clone(), self.agent, psi.clone());
        let boxed = asserted.clone().always();
        let l1 = self
            .out
            .push(boxed.clone(), Justification::NecBox { from: s_idx });
        let up_term = s.clone().up();
        let target = Formula::just(up_term.clone(), self.agent, psi.clone().always());
        let l2 = self.out.push(
            boxed.implies(target.clone()),
            Justification::Axiom(AxiomName::Generalize),
        );
        let idx = self.out.push(
            target,
            Justification::Mp {
                minor: l1,
                major: l2,
            },
        );
        (idx, up_term)
    }
}

/// Internalization for the star variant: compiles a necessitation-free
/// derivation of `phi` into a term `t` and a derivation of `[t]_i phi`.
///
/// Axiom lines become specification constants, modus ponens becomes term
/// application, and a starred-rule line is lifted one star level and
/// composed with an internalized derivation of `G phi -> phi`.
pub fn internalize(
    derivation: &Derivation,
    agent: AgentId,
    cs: &ConstantSpecification,
) -> Result<InternalizationResult, InternalizeError> {
    let mut z = Internalizer {
        cs,
        agent,
        out: Derivation::new(SystemVariant::LpltlStar),
    };
    let mut map: HashMap<usize, (usize, Term)> = HashMap::new();
    let mut trace = Vec::new();
    for line in &derivation.lines {
        let produced = match &line.just {
            Justification::Axiom(_) => z.assert_axiom(&line.formula)?,
            Justification::Mp { minor, major } => {
                let (minor_src, major_src, premise) =
                    mp_roles(derivation, line.index, &line.formula, *minor, *major)?;
                let (ant_idx, s2) = map[&minor_src].clone();
                let (imp_idx, s1) = map[&major_src].clone();
                z.apply((imp_idx, &s1), (ant_idx, &s2), &premise, &line.formula)
            }
            Justification::AxNec {
                constant,
                agent: i0,
            } => z.lift_star_chain(&line.formula, constant, &[*i0])?,
            Justification::AxNecStar { constant, agents } => {
                z.lift_star_chain(&line.formula, constant, agents)?
            }
            Justification::NecNext { .. } | Justification::NecBox { .. } => {
                return Err(InternalizeError::ContainsNecessitation { line: line.index })
            }
            Justification::IterConstNec { .. } => {
                return Err(InternalizeError::UnsupportedRule {
                    line: line.index,
                    rule: "ICN",
                })
            }
        };
        trace.push((line.index, produced.1.clone()));
        map.insert(line.index, produced);
    }
    let last = derivation.lines.last().expect("non-empty derivation");
    let (_, term) = map[&last.index].clone();
    Ok(InternalizationResult {
        term,
        derivation: z.out,
        trace,
    })
}

/// Internalization for the G variant, where the temporal necessitation
/// rules stay available: a NECG step becomes `up s` through the generalize
/// axiom, a NECX step composes that with a mix constant into `c . up s`, and
/// iterated constant necessitation extends its star chain by one level.
pub fn internalize_g(
    derivation: &Derivation,
    agent: AgentId,
    cs: &ConstantSpecification,
) -> Result<InternalizationResult, InternalizeError> {
    let mut z = Internalizer {
        cs,
        agent,
        out: Derivation::new(SystemVariant::LpltlG),
    };
    let mut map: HashMap<usize, (usize, Term)> = HashMap::new();
    let mut trace = Vec::new();
    for line in &derivation.lines {
        let produced = match &line.just {
            Justification::Axiom(_) => z.assert_axiom(&line.formula)?,
            Justification::Mp { minor, major } => {
                let (minor_src, major_src, premise) =
                    mp_roles(derivation, line.index, &line.formula, *minor, *major)?;
                let (ant_idx, s2) = map[&minor_src].clone();
                let (imp_idx, s1) = map[&major_src].clone();
                z.apply((imp_idx, &s1), (ant_idx, &s2), &premise, &line.formula)
            }
            Justification::AxNec {
                constant,
                agent: i0,
            } => {
                let term = Term::star_chain(constant, 1);
                let idx = z.out.push(
                    Formula::just(term.clone(), agent, line.formula.clone()),
                    Justification::IterConstNec {
                        constant: constant.clone(),
                        agents: vec![*i0, agent],
                    },
                );
                (idx, term)
            }
            Justification::IterConstNec { constant, agents } => {
                let mut extended = agents.clone();
                extended.push(agent);
                let term = Term::star_chain(constant, agents.len());
                let idx = z.out.push(
                    Formula::just(term.clone(), agent, line.formula.clone()),
                    Justification::IterConstNec {
                        constant: constant.clone(),
                        agents: extended,
                    },
                );
                (idx, term)
            }
            Justification::NecBox { from } => {
                let (s_idx, s) =
                    map.get(from)
                        .cloned()
                        .ok_or(InternalizeError::MalformedSource {
                            line: line.index,
                            cited: *from,
                        })?;
                z.generalize(&s, s_idx, source_formula(derivation, line.index, *from)?)
            }
            Justification::NecNext { from } => {
                let (s_idx, s) =
                    map.get(from)
                        .cloned()
                        .ok_or(InternalizeError::MalformedSource {
                            line: line.index,
                            cited: *from,
                        })?;
                let inner = source_formula(derivation, line.index, *from)?.clone();
                let (gen_idx, up_term) = z.generalize(&s, s_idx, &inner);
                let mix = inner.clone().always().implies(inner.clone().next());
                let (mix_idx, c_term) = z.assert_axiom(&mix)?;
                z.apply(
                    (mix_idx, &c_term),
                    (gen_idx, &up_term),
                    &inner.clone().always(),
                    &inner.next(),
                )
            }
            Justification::AxNecStar { .. } => {
                return Err(InternalizeError::UnsupportedRule {
                    line: line.index,
                    rule: "CSSTAR",
                })
            }
        };
        trace.push((line.index, produced.1.clone()));
        map.insert(line.index, produced);
    }
    let last = derivation.lines.last().expect("non-empty derivation");
    let (_, term) = map[&last.index].clone();
    Ok(InternalizationResult {
        term,
        derivation: z.out,
        trace,
    })
}

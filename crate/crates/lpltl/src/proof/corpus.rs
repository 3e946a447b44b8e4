//! A corpus of hand-encoded theorems with checked Hilbert derivations.
//!
//! The centerpiece is the MP-only derivation of `G p -> (p & X G p)`, which
//! is needed because `G` is a defined operator here. That derivation is also
//! reused by the internalizer, which embeds a derivation of `G p -> p` when
//! it rewrites starred axiom necessitation steps.

use super::axioms::AxiomName;
use super::check::{Derivation, Justification};
use super::cs::schematic_name;
use crate::syntax::{AgentId, Formula, Term};
use crate::SystemVariant;

/// A named corpus theorem.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub variant: SystemVariant,
    pub derivation: Derivation,
}

impl CorpusEntry {
    pub fn conclusion(&self) -> &Formula {
        self.derivation
            .conclusion()
            .expect("corpus derivations are non-empty")
    }
}

/// The MP-only derivation of `G phi -> (phi & X G phi)`.
///
/// `G phi` stands for `~(true U ~phi)`. From the until unfolding axiom we
/// get `(~phi | X(true U ~phi)) -> true U ~phi`, contraposition turns that
/// around, and the `fun` axiom moves the negation through `X`.
pub fn mix_lemma_derivation(phi: &Formula) -> Derivation {
    let dia = phi.clone().neg().eventually(); // true U ~phi
    let bx = phi.clone().always(); // ~(true U ~phi)
    let mut d = Derivation::new(SystemVariant::Lpltl);

    // (U2) at (true, ~phi)
    let unfold = dia
        .clone()
        .iff(phi.clone().neg().or(Formula::top().and(dia.clone().next())));
    let l1 = d.push(unfold.clone(), Justification::Axiom(AxiomName::Until2));

    let weakened = phi
        .clone()
        .neg()
        .or(dia.clone().next())
        .implies(dia.clone());
    let l2 = d.push(
        unfold.implies(weakened.clone()),
        Justification::Axiom(AxiomName::Taut),
    );
    let l3 = d.push(
        weakened.clone(),
        Justification::Mp {
            minor: l1,
            major: l2,
        },
    );

    let contra = bx
        .clone()
        .implies(phi.clone().neg().or(dia.clone().next()).neg());
    let l4 = d.push(
        weakened.implies(contra.clone()),
        Justification::Axiom(AxiomName::Taut),
    );
    let l5 = d.push(
        contra.clone(),
        Justification::Mp {
            minor: l3,
            major: l4,
        },
    );

    // (fun) at (true U ~phi)
    let fun = dia.clone().neg().next().iff(dia.next().neg());
    let l6 = d.push(fun.clone(), Justification::Axiom(AxiomName::Fun));

    let target = bx.clone().implies(phi.clone().and(bx.next()));
    let l7 = d.push(
        fun.implies(contra.clone().implies(target.clone())),
        Justification::Axiom(AxiomName::Taut),
    );
    let l8 = d.push(
        contra.implies(target.clone()),
        Justification::Mp {
            minor: l6,
            major: l7,
        },
    );
    d.push(
        target,
        Justification::Mp {
            minor: l5,
            major: l8,
        },
    );
    d
}

/// The MP-only derivation of `G phi -> phi`: the mix lemma followed by a
/// projection tautology.
pub fn box_implies_self_derivation(phi: &Formula) -> Derivation {
    let mut d = mix_lemma_derivation(phi);
    let l9 = d.lines.last().unwrap().index;
    let mixed = d.conclusion().unwrap().clone();
    let target = phi.clone().always().implies(phi.clone());
    let l10 = d.push(
        mixed.implies(target.clone()),
        Justification::Axiom(AxiomName::Taut),
    );
    d.push(
        target,
        Justification::Mp {
            minor: l9,
            major: l10,
        },
    );
    d
}

fn single_axiom(variant: SystemVariant, axiom: AxiomName, formula: Formula) -> Derivation {
    let mut d = Derivation::new(variant);
    d.push(formula, Justification::Axiom(axiom));
    d
}

/// `P -> F P` by unfolding the until.
fn until_intro_derivation(phi: &Formula) -> Derivation {
    let dia = phi.clone().eventually();
    let unfold = dia
        .clone()
        .iff(phi.clone().or(Formula::top().and(dia.clone().next())));
    let target = phi.clone().implies(dia);
    let mut d = Derivation::new(SystemVariant::Lpltl);
    let l1 = d.push(unfold.clone(), Justification::Axiom(AxiomName::Until2));
    let l2 = d.push(
        unfold.implies(target.clone()),
        Justification::Axiom(AxiomName::Taut),
    );
    d.push(
        target,
        Justification::Mp {
            minor: l1,
            major: l2,
        },
    );
    d
}

/// `G P -> X P`, derived in the base system. Uses NECX once, which makes it
/// a useful elimination test case.
fn box_to_next_derivation(phi: &Formula) -> Derivation {
    let bx = phi.clone().always();
    let mut d = box_implies_self_derivation(phi);
    let l9 = 9; // mix lemma conclusion: G phi -> (phi & X G phi)
    let l11 = d.lines.last().unwrap().index; // G phi -> phi
    let box_self = d.conclusion().unwrap().clone();

    let l12 = d.push(box_self.next(), Justification::NecNext { from: l11 });
    let k = bx
        .clone()
        .implies(phi.clone())
        .next()
        .implies(bx.clone().next().implies(phi.clone().next()));
    let l13 = d.push(k, Justification::Axiom(AxiomName::NextK));
    let step = bx.clone().next().implies(phi.clone().next());
    let l14 = d.push(
        step.clone(),
        Justification::Mp {
            minor: l12,
            major: l13,
        },
    );

    let mixed = d.lines[l9 - 1].formula.clone();
    let to_next_box = bx.clone().implies(bx.clone().next());
    let l15 = d.push(
        mixed.implies(to_next_box.clone()),
        Justification::Axiom(AxiomName::Taut),
    );
    let l16 = d.push(
        to_next_box.clone(),
        Justification::Mp {
            minor: l9,
            major: l15,
        },
    );

    let target = bx.implies(phi.clone().next());
    let syllogism = to_next_box.implies(step.clone().implies(target.clone()));
    let l17 = d.push(syllogism, Justification::Axiom(AxiomName::Taut));
    let l18 = d.push(
        step.implies(target.clone()),
        Justification::Mp {
            minor: l16,
            major: l17,
        },
    );
    d.push(
        target,
        Justification::Mp {
            minor: l14,
            major: l18,
        },
    );
    d
}

/// The theorem corpus. Every entry checks under a schematic constant
/// specification for its variant.
pub fn theorem_corpus() -> Vec<CorpusEntry> {
    let p = Formula::prop("P");
    let q = Formula::prop("Q");
    let i1 = AgentId::new(1);
    let i2 = AgentId::new(2);
    let x = Term::var("x1");
    let y = Term::var("x2");
    let base = SystemVariant::Lpltl;
    let star = SystemVariant::LpltlStar;

    let mut entries = vec![
        CorpusEntry {
            name: "mix1",
            variant: base,
            derivation: mix_lemma_derivation(&p),
        },
        CorpusEntry {
            name: "box-refl",
            variant: base,
            derivation: box_implies_self_derivation(&p),
        },
        CorpusEntry {
            name: "until-refl",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::Until1,
                p.clone().until(p.clone()).implies(p.clone().eventually()),
            ),
        },
        CorpusEntry {
            name: "taut-id",
            variant: base,
            derivation: single_axiom(base, AxiomName::Taut, p.clone().implies(p.clone())),
        },
        CorpusEntry {
            name: "next-k",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::NextK,
                p.clone()
                    .implies(q.clone())
                    .next()
                    .implies(p.clone().next().implies(q.clone().next())),
            ),
        },
        CorpusEntry {
            name: "box-k",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::BoxK,
                p.clone()
                    .implies(q.clone())
                    .always()
                    .implies(p.clone().always().implies(q.clone().always())),
            ),
        },
        CorpusEntry {
            name: "fun",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::Fun,
                p.clone().neg().next().iff(p.clone().next().neg()),
            ),
        },
        CorpusEntry {
            name: "ind",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::Ind,
                p.clone()
                    .implies(p.clone().next())
                    .always()
                    .implies(p.clone().implies(p.clone().always())),
            ),
        },
        CorpusEntry {
            name: "u2",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::Until2,
                p.clone().until(q.clone()).iff(
                    q.clone()
                        .or(p.clone().and(p.clone().until(q.clone()).next())),
                ),
            ),
        },
        CorpusEntry {
            name: "app",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::Application,
                Formula::just(x.clone(), i1, p.clone().implies(q.clone())).implies(
                    Formula::just(y.clone(), i1, p.clone()).implies(Formula::just(
                        x.clone().app(y.clone()),
                        i1,
                        q.clone(),
                    )),
                ),
            ),
        },
        CorpusEntry {
            name: "sum-left",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::Sum,
                Formula::just(x.clone(), i1, p.clone()).implies(Formula::just(
                    x.clone().sum(y.clone()),
                    i1,
                    p.clone(),
                )),
            ),
        },
        CorpusEntry {
            name: "refl",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::Reflexivity,
                Formula::just(x.clone(), i1, p.clone()).implies(p.clone()),
            ),
        },
        CorpusEntry {
            name: "pos-intro",
            variant: base,
            derivation: single_axiom(
                base,
                AxiomName::PositiveIntrospection,
                Formula::just(x.clone(), i1, p.clone()).implies(Formula::just(
                    x.clone().bang(),
                    i1,
                    Formula::just(x.clone(), i1, p.clone()),
                )),
            ),
        },
        CorpusEntry {
            name: "until-intro",
            variant: base,
            derivation: until_intro_derivation(&p),
        },
        CorpusEntry {
            name: "box-to-next",
            variant: base,
            derivation: box_to_next_derivation(&p),
        },
        CorpusEntry {
            name: "boxedrefl-star",
            variant: star,
            derivation: single_axiom(
                star,
                AxiomName::BoxedReflexivity,
                Formula::just(x.clone(), i2, p.clone())
                    .implies(p.clone())
                    .always(),
            ),
        },
        CorpusEntry {
            name: "mix-star",
            variant: star,
            derivation: single_axiom(
                star,
                AxiomName::Mix,
                p.clone().always().implies(p.clone().next()),
            ),
        },
    ];

    // NECX / NECG over a tautology, the shapes eliminated by the rewriter
    let taut = p.clone().implies(p.clone());
    let mut next_taut = Derivation::new(base);
    let l1 = next_taut.push(taut.clone(), Justification::Axiom(AxiomName::Taut));
    next_taut.push(taut.clone().next(), Justification::NecNext { from: l1 });
    entries.push(CorpusEntry {
        name: "next-taut",
        variant: base,
        derivation: next_taut,
    });

    let mut box_taut = Derivation::new(base);
    let l1 = box_taut.push(taut.clone(), Justification::Axiom(AxiomName::Taut));
    box_taut.push(taut.clone().always(), Justification::NecBox { from: l1 });
    entries.push(CorpusEntry {
        name: "box-taut",
        variant: base,
        derivation: box_taut,
    });

    // axiom necessitation with a schematic constant
    let c = schematic_name(&taut, i1);
    let mut cs_const = Derivation::new(base);
    cs_const.push(
        Formula::just(Term::constant(&c), i1, taut.clone()),
        Justification::AxNec {
            constant: c.clone(),
            agent: i1,
        },
    );
    entries.push(CorpusEntry {
        name: "cs-const",
        variant: base,
        derivation: cs_const,
    });

    // a starred chain: [*c]_2 G [c]_1 (P -> P)
    let mut chain = Derivation::new(star);
    chain.push(
        Formula::just(
            Term::constant(&c).star(),
            i2,
            Formula::just(Term::constant(&c), i1, taut).always(),
        ),
        Justification::AxNecStar {
            constant: c,
            agents: vec![i1, i2],
        },
    );
    entries.push(CorpusEntry {
        name: "csstar-chain",
        variant: star,
        derivation: chain,
    });

    entries
}

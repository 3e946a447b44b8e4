use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::taut::is_tautology;
use crate::syntax::{AgentId, Formula, Term};
use crate::SystemVariant;

/// Names of the axiom schemas across all variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AxiomName {
    /// All propositional tautologies.
    Taut,
    /// `X(p -> q) -> (X p -> X q)`
    NextK,
    /// `G(p -> q) -> (G p -> G q)`
    BoxK,
    /// `X ~p <-> ~X p`
    Fun,
    /// `G(p -> X p) -> (p -> G p)`
    Ind,
    /// `p U q -> F q`
    Until1,
    /// `p U q <-> q | (p & X(p U q))`
    Until2,
    /// `[t]_i (p -> q) -> ([s]_i p -> [t.s]_i q)`
    Application,
    /// `[t]_i p -> [t+s]_i p` and `[s]_i p -> [t+s]_i p`
    Sum,
    /// `[t]_i p -> p`
    Reflexivity,
    /// `[t]_i p -> [!t]_i [t]_i p`
    PositiveIntrospection,
    /// `G p -> X p` (star and G variants)
    Mix,
    /// `G([t]_i p -> p)` (star variant)
    BoxedReflexivity,
    /// `[t]_i G p -> G [dn t]_i p` (experimental)
    BoxAccess,
    /// `G [t]_i p -> [up t]_i G p` (G variant)
    Generalize,
    /// `[t]_i X p -> X [rr t]_i p` (experimental)
    NextAccess,
    /// `X [t]_i p -> [ll t]_i X p` (experimental)
    NextLeft,
}

impl AxiomName {
    pub fn id(self) -> &'static str {
        match self {
            AxiomName::Taut => "taut",
            AxiomName::NextK => "next-k",
            AxiomName::BoxK => "box-k",
            AxiomName::Fun => "fun",
            AxiomName::Ind => "ind",
            AxiomName::Until1 => "u1",
            AxiomName::Until2 => "u2",
            AxiomName::Application => "app",
            AxiomName::Sum => "sum",
            AxiomName::Reflexivity => "refl",
            AxiomName::PositiveIntrospection => "pos-intro",
            AxiomName::Mix => "mix",
            AxiomName::BoxedReflexivity => "boxed-refl",
            AxiomName::BoxAccess => "box-access",
            AxiomName::Generalize => "generalize",
            AxiomName::NextAccess => "next-access",
            AxiomName::NextLeft => "next-left",
        }
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for AxiomName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let all = [
            AxiomName::Taut,
            AxiomName::NextK,
            AxiomName::BoxK,
            AxiomName::Fun,
            AxiomName::Ind,
            AxiomName::Until1,
            AxiomName::Until2,
            AxiomName::Application,
            AxiomName::Sum,
            AxiomName::Reflexivity,
            AxiomName::PositiveIntrospection,
            AxiomName::Mix,
            AxiomName::BoxedReflexivity,
            AxiomName::BoxAccess,
            AxiomName::Generalize,
            AxiomName::NextAccess,
            AxiomName::NextLeft,
        ];
        let want = s.trim().to_ascii_lowercase();
        all.into_iter()
            .find(|a| a.id() == want)
            .ok_or_else(|| format!("unknown axiom name `{s}`"))
    }
}

/// The axiom schemas available in a variant. The experimental flag adds the
/// three time/justification interaction principles that have no semantics.
pub fn axioms_for(variant: SystemVariant, experimental: bool) -> BTreeSet<AxiomName> {
    let mut set: BTreeSet<AxiomName> = [
        AxiomName::Taut,
        AxiomName::NextK,
        AxiomName::BoxK,
        AxiomName::Fun,
        AxiomName::Ind,
        AxiomName::Until1,
        AxiomName::Until2,
        AxiomName::Application,
        AxiomName::Sum,
        AxiomName::Reflexivity,
        AxiomName::PositiveIntrospection,
    ]
    .into();
    match variant {
        SystemVariant::Lpltl => {}
        SystemVariant::LpltlStar => {
            set.insert(AxiomName::Mix);
            set.insert(AxiomName::BoxedReflexivity);
        }
        SystemVariant::LpltlG => {
            set.insert(AxiomName::Mix);
            set.insert(AxiomName::Generalize);
        }
    }
    if experimental {
        set.insert(AxiomName::BoxAccess);
        set.insert(AxiomName::NextAccess);
        set.insert(AxiomName::NextLeft);
    }
    set
}

// ---------------------------------------------------------------------------
// Schema patterns. A pattern is a formula skeleton with formula and term
// metavariables; all Just nodes of one schema share a single agent
// metavariable, matching the paper's per-instance agent index.

#[derive(Debug, Clone)]
enum PatF {
    Meta(usize),
    Bottom,
    Implies(Box<PatF>, Box<PatF>),
    Next(Box<PatF>),
    Until(Box<PatF>, Box<PatF>),
    Just(PatT, Box<PatF>),
}

#[derive(Debug, Clone)]
enum PatT {
    Meta(usize),
    Bang(Box<PatT>),
    Sum(Box<PatT>, Box<PatT>),
    App(Box<PatT>, Box<PatT>),
    Up(Box<PatT>),
    Down(Box<PatT>),
    RArr(Box<PatT>),
    LArr(Box<PatT>),
}

impl PatF {
    fn implies(self, other: PatF) -> PatF {
        PatF::Implies(Box::new(self), Box::new(other))
    }

    fn next(self) -> PatF {
        PatF::Next(Box::new(self))
    }

    fn until(self, other: PatF) -> PatF {
        PatF::Until(Box::new(self), Box::new(other))
    }

    fn just(term: PatT, body: PatF) -> PatF {
        PatF::Just(term, Box::new(body))
    }

    // mirrors of the surface abbreviations
    fn neg(self) -> PatF {
        self.implies(PatF::Bottom)
    }

    fn top() -> PatF {
        PatF::Bottom.neg()
    }

    fn or(self, other: PatF) -> PatF {
        self.neg().implies(other)
    }

    fn and(self, other: PatF) -> PatF {
        self.neg().or(other.neg()).neg()
    }

    fn iff(self, other: PatF) -> PatF {
        self.clone().implies(other.clone()).and(other.implies(self))
    }

    fn eventually(self) -> PatF {
        PatF::top().until(self)
    }

    fn always(self) -> PatF {
        self.neg().eventually().neg()
    }
}

#[derive(Default)]
struct Bindings<'a> {
    formulas: Vec<Option<&'a Formula>>,
    terms: Vec<Option<&'a Term>>,
    agent: Option<AgentId>,
}

fn match_formula<'a>(pat: &PatF, phi: &'a Formula, b: &mut Bindings<'a>) -> bool {
    match (pat, phi) {
        (PatF::Meta(k), _) => {
            if b.formulas.len() <= *k {
                b.formulas.resize(*k + 1, None);
            }
            match b.formulas[*k] {
                Some(bound) => bound == phi,
                None => {
                    b.formulas[*k] = Some(phi);
                    true
                }
            }
        }
        (PatF::Bottom, Formula::Bottom) => true,
        (PatF::Implies(p1, p2), Formula::Implies(f1, f2)) => {
            match_formula(p1, f1, b) && match_formula(p2, f2, b)
        }
        (PatF::Next(p), Formula::Next(f)) => match_formula(p, f, b),
        (PatF::Until(p1, p2), Formula::Until(f1, f2)) => {
            match_formula(p1, f1, b) && match_formula(p2, f2, b)
        }
        (PatF::Just(pt, p), Formula::Just(t, i, f)) => {
            let agent_ok = match b.agent {
                Some(bound) => bound == *i,
                None => {
                    b.agent = Some(*i);
                    true
                }
            };
            agent_ok && match_term(pt, t, b) && match_formula(p, f, b)
        }
        _ => false,
    }
}

fn match_term<'a>(pat: &PatT, t: &'a Term, b: &mut Bindings<'a>) -> bool {
    match (pat, t) {
        (PatT::Meta(k), _) => {
            if b.terms.len() <= *k {
                b.terms.resize(*k + 1, None);
            }
            match b.terms[*k] {
                Some(bound) => bound == t,
                None => {
                    b.terms[*k] = Some(t);
                    true
                }
            }
        }
        (PatT::Bang(p), Term::Bang(inner)) => match_term(p, inner, b),
        (PatT::Sum(p1, p2), Term::Sum(t1, t2)) => match_term(p1, t1, b) && match_term(p2, t2, b),
        (PatT::App(p1, p2), Term::App(t1, t2)) => match_term(p1, t1, b) && match_term(p2, t2, b),
        (PatT::Up(p), Term::Up(inner)) => match_term(p, inner, b),
        (PatT::Down(p), Term::Down(inner)) => match_term(p, inner, b),
        (PatT::RArr(p), Term::RArr(inner)) => match_term(p, inner, b),
        (PatT::LArr(p), Term::LArr(inner)) => match_term(p, inner, b),
        _ => false,
    }
}

fn schema_patterns() -> &'static Vec<(AxiomName, Vec<PatF>)> {
    static PATTERNS: OnceLock<Vec<(AxiomName, Vec<PatF>)>> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        let a = || PatF::Meta(0);
        let b = || PatF::Meta(1);
        let t = || PatT::Meta(0);
        let s = || PatT::Meta(1);
        let just = PatF::just;
        vec![
            (AxiomName::NextK, vec![a().implies(b()).next().implies(a().next().implies(b().next()))]),
            (AxiomName::BoxK, vec![a().implies(b()).always().implies(a().always().implies(b().always()))]),
            (AxiomName::Fun, vec![a().neg().next().iff(a().next().neg())]),
            (AxiomName::Ind, vec![a().implies(a().next()).always().implies(a().implies(a().always()))]),
            (AxiomName::Until1, vec![a().until(b()).implies(b().eventually())]),
            (
                AxiomName::Until2,
                vec![a().until(b()).iff(b().or(a().and(a().until(b()).next())))],
            ),
            (
                AxiomName::Application,
                vec![just(t(), a().implies(b()))
                    .implies(just(s(), a()).implies(just(PatT::App(Box::new(t()), Box::new(s())), b())))],
            ),
            (
                AxiomName::Sum,
                vec![
                    just(t(), a()).implies(just(PatT::Sum(Box::new(t()), Box::new(s())), a())),
                    just(s(), a()).implies(just(PatT::Sum(Box::new(t()), Box::new(s())), a())),
                ],
            ),
            (AxiomName::Reflexivity, vec![just(t(), a()).implies(a())]),
            (
                AxiomName::PositiveIntrospection,
                vec![just(t(), a()).implies(just(PatT::Bang(Box::new(t())), just(t(), a())))],
            ),
            (AxiomName::Mix, vec![a().always().implies(a().next())]),
            (AxiomName::BoxedReflexivity, vec![just(t(), a()).implies(a()).always()]),
            (
                AxiomName::BoxAccess,
                vec![just(t(), a().always()).implies(just(PatT::Down(Box::new(t())), a()).always())],
            ),
            (
                AxiomName::Generalize,
                vec![just(t(), a()).always().implies(just(PatT::Up(Box::new(t())), a().always()))],
            ),
            (
                AxiomName::NextAccess,
                vec![just(t(), a().next()).implies(just(PatT::RArr(Box::new(t())), a()).next())],
            ),
            (
                AxiomName::NextLeft,
                vec![just(t(), a()).next().implies(just(PatT::LArr(Box::new(t())), a().next()))],
            ),
        ]
    })
}

/// Returns every axiom schema enabled in the variant of which `phi` is an
/// instance. Formulas outside the variant's term language match nothing.
/// Tautologies larger than the atom cap are not reported as `Taut`; the
/// derivation checker surfaces the overflow instead.
pub fn match_axiom(phi: &Formula, variant: SystemVariant) -> BTreeSet<AxiomName> {
    match_axiom_with(phi, variant, false)
}

/// `match_axiom` with the experimental principles enabled.
pub fn match_axiom_with(
    phi: &Formula,
    variant: SystemVariant,
    experimental: bool,
) -> BTreeSet<AxiomName> {
    let mut out = BTreeSet::new();
    if phi.check_ops(variant, experimental).is_err() {
        return out;
    }
    let enabled = axioms_for(variant, experimental);
    for (name, pats) in schema_patterns() {
        if !enabled.contains(name) {
            continue;
        }
        for pat in pats {
            let mut b = Bindings::default();
            if match_formula(pat, phi, &mut b) {
                out.insert(*name);
                break;
            }
        }
    }
    if is_tautology(phi) == Ok(true) {
        out.insert(AxiomName::Taut);
    }
    out
}

use std::fmt;

use super::{Formula, Term};

// The Display impls are the canonical printers: fully parenthesized binary
// connectives, prefix unaries, and core connectives only. Parsing the
// printed text yields a structurally equal value.

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(name) | Term::Var(name) => f.write_str(name),
            Term::Bang(t) => write!(f, "!{t}"),
            Term::Star(t) => write!(f, "*{t}"),
            Term::Down(t) => write!(f, "dn {t}"),
            Term::Up(t) => write!(f, "up {t}"),
            Term::RArr(t) => write!(f, "rr {t}"),
            Term::LArr(t) => write!(f, "ll {t}"),
            Term::Sum(a, b) => write!(f, "({a} + {b})"),
            Term::App(a, b) => write!(f, "({a} . {b})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Prop(name) => f.write_str(name),
            Formula::Bottom => f.write_str("false"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Next(a) => write!(f, "X {a}"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::Just(t, i, a) => write!(f, "[{t}]_{i} {a}"),
        }
    }
}

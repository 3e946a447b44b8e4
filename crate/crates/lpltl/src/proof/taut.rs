use std::collections::HashMap;

use crate::syntax::Formula;

/// Hard cap on distinct opaque atoms per tautology check.
pub const TAUT_ATOM_CAP: usize = 20;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("tautology check needs {atoms} opaque atoms, cap is {cap}")]
pub struct TautOverflow {
    pub atoms: usize,
    pub cap: usize,
}

// Propositional skeleton of a formula: maximal non-propositional
// subformulas (Next, Until, Just nodes) become opaque atoms.
enum Skel {
    Atom(usize),
    False,
    Implies(Box<Skel>, Box<Skel>),
}

fn skeleton<'a>(phi: &'a Formula, atoms: &mut HashMap<&'a Formula, usize>) -> Skel {
    match phi {
        Formula::Bottom => Skel::False,
        Formula::Implies(a, b) => {
            Skel::Implies(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms)))
        }
        Formula::Prop(_) | Formula::Next(_) | Formula::Until(_, _) | Formula::Just(_, _, _) => {
            let next = atoms.len();
            Skel::Atom(*atoms.entry(phi).or_insert(next))
        }
    }
}

fn eval(skel: &Skel, assignment: u32) -> bool {
    match skel {
        Skel::Atom(i) => assignment & (1 << i) != 0,
        Skel::False => false,
        Skel::Implies(a, b) => !eval(a, assignment) || eval(b, assignment),
    }
}

/// Decides whether `phi` is a propositional tautology, treating its maximal
/// temporal and justification subformulas as opaque atoms and enumerating a
/// truth table over them.
pub fn is_tautology(phi: &Formula) -> Result<bool, TautOverflow> {
    let mut atoms = HashMap::new();
    let skel = skeleton(phi, &mut atoms);
    let n = atoms.len();
    if n > TAUT_ATOM_CAP {
        return Err(TautOverflow {
            atoms: n,
            cap: TAUT_ATOM_CAP,
        });
    }
    for assignment in 0..(1u32 << n) {
        if !eval(&skel, assignment) {
            return Ok(false);
        }
    }
    Ok(true)
}

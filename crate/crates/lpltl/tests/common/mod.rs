//! Shared generators for the integration suites: random formulas, terms,
//! and valid interpreted systems at desk scale.
#![allow(dead_code)] // each test binary uses a different slice of this module

use std::collections::BTreeSet;

use lpltl::proof::ConstantSpecification;
use lpltl::semantics::{EvidenceBase, Frame, InterpretedSystem, LassoRun};
use lpltl::syntax::{AgentId, Formula, Term};
use lpltl::SystemVariant;
use rand::rngs::StdRng;
use rand::Rng;

pub const PROPS: [&str; 3] = ["P", "Q", "R"];

/// Small pool of terms usable in evidence seeds and query formulas.
pub fn term_pool() -> Vec<Term> {
    let x = Term::var("x");
    let y = Term::var("x2");
    vec![
        x.clone(),
        y.clone(),
        Term::constant("c1"),
        x.clone().bang(),
        x.clone().sum(y.clone()),
        x.app(y),
    ]
}

/// Small pool of seed formulas.
pub fn seed_formulas() -> Vec<Formula> {
    let p = Formula::prop("P");
    let q = Formula::prop("Q");
    vec![
        p.clone(),
        q.clone(),
        p.clone().implies(q.clone()),
        q.implies(p.clone()),
        p.clone().implies(p),
    ]
}

pub fn random_term(rng: &mut StdRng, depth: usize) -> Term {
    if depth == 0 || rng.random_bool(0.4) {
        return match rng.random_range(0..3) {
            0 => Term::var("x"),
            1 => Term::var("x2"),
            _ => Term::constant("c1"),
        };
    }
    match rng.random_range(0..3) {
        0 => random_term(rng, depth - 1).bang(),
        1 => random_term(rng, depth - 1).sum(random_term(rng, depth - 1)),
        _ => random_term(rng, depth - 1).app(random_term(rng, depth - 1)),
    }
}

/// A random term over the full operator alphabet, for syntax round trips.
pub fn random_full_term(rng: &mut StdRng, depth: usize) -> Term {
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..3) {
            0 => Term::var("x1"),
            1 => Term::var("x2"),
            _ => Term::constant("c1"),
        };
    }
    match rng.random_range(0..8) {
        0 => random_full_term(rng, depth - 1).bang(),
        1 => random_full_term(rng, depth - 1).star(),
        2 => random_full_term(rng, depth - 1).up(),
        3 => random_full_term(rng, depth - 1).down(),
        4 => random_full_term(rng, depth - 1).rarr(),
        5 => random_full_term(rng, depth - 1).larr(),
        6 => random_full_term(rng, depth - 1).sum(random_full_term(rng, depth - 1)),
        _ => random_full_term(rng, depth - 1).app(random_full_term(rng, depth - 1)),
    }
}

/// A random core formula over the full language, for syntax round trips.
pub fn random_full_formula(rng: &mut StdRng, depth: usize, agents: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        return if rng.random_bool(0.15) {
            Formula::Bottom
        } else {
            Formula::prop(PROPS[rng.random_range(0..PROPS.len())])
        };
    }
    match rng.random_range(0..4) {
        0 => random_full_formula(rng, depth - 1, agents).implies(random_full_formula(
            rng,
            depth - 1,
            agents,
        )),
        1 => random_full_formula(rng, depth - 1, agents).next(),
        2 => random_full_formula(rng, depth - 1, agents).until(random_full_formula(
            rng,
            depth - 1,
            agents,
        )),
        _ => Formula::just(
            random_full_term(rng, depth.min(3)),
            AgentId::new(rng.random_range(1..=agents)),
            random_full_formula(rng, depth - 1, agents),
        ),
    }
}

/// A random formula suitable for evaluation on base-variant systems: core
/// connectives with justification terms drawn from the seedable pool.
pub fn random_eval_formula(rng: &mut StdRng, depth: usize, agents: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        return if rng.random_bool(0.1) {
            Formula::Bottom
        } else {
            Formula::prop(PROPS[rng.random_range(0..2)])
        };
    }
    match rng.random_range(0..5) {
        0 => random_eval_formula(rng, depth - 1, agents).implies(random_eval_formula(
            rng,
            depth - 1,
            agents,
        )),
        1 => random_eval_formula(rng, depth - 1, agents).next(),
        2 | 3 => random_eval_formula(rng, depth - 1, agents).until(random_eval_formula(
            rng,
            depth - 1,
            agents,
        )),
        _ => {
            let pool = term_pool();
            Formula::just(
                pool[rng.random_range(0..pool.len())].clone(),
                AgentId::new(rng.random_range(1..=agents)),
                random_eval_formula(rng, depth - 1, agents),
            )
        }
    }
}

/// A random valid interpreted system: up to 4 states, up to 3 lasso runs,
/// 2 agents, preorder-closed relations, random valuation and seeds.
pub fn random_system(rng: &mut StdRng, variant: SystemVariant) -> InterpretedSystem {
    let n = rng.random_range(1..=4);
    let agents = 2u32;
    let names = (0..n).map(|k| format!("s{k}")).collect();
    let mut frame = Frame::new(names, agents);
    for agent in 1..=agents {
        for v in 0..n {
            for w in 0..n {
                if rng.random_bool(0.3) {
                    frame.add_edge(AgentId::new(agent), v, w);
                }
            }
        }
    }
    frame.close_preorder();

    let mut valuation = vec![BTreeSet::new(); n];
    for val in valuation.iter_mut() {
        for prop in ["P", "Q"] {
            if rng.random_bool(0.5) {
                val.insert(prop.to_string());
            }
        }
    }

    let run_count = rng.random_range(1..=3);
    let runs = (0..run_count)
        .map(|_| {
            let prefix_len = rng.random_range(0..=2);
            let loop_len = rng.random_range(1..=2);
            LassoRun::new(
                (0..prefix_len).map(|_| rng.random_range(0..n)).collect(),
                (0..loop_len).map(|_| rng.random_range(0..n)).collect(),
            )
        })
        .collect();

    let mut base = EvidenceBase::new();
    let terms = term_pool();
    let formulas = seed_formulas();
    for _ in 0..rng.random_range(0..=4) {
        base.add(
            AgentId::new(rng.random_range(1..=agents)),
            rng.random_range(0..n),
            terms[rng.random_range(0..terms.len())].clone(),
            formulas[rng.random_range(0..formulas.len())].clone(),
        );
    }

    let cs = ConstantSpecification::schematic(variant);
    InterpretedSystem::new(frame, runs, base, valuation, cs, variant)
}

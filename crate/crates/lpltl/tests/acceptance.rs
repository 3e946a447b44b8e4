//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! and enforcing its runtime budget.

mod common;

use std::time::{Duration, Instant};

use common::{random_eval_formula, random_system};
use lpltl::canon::{decide, Certificate, DecideConfig};
use lpltl::internalize::{eliminate_necessitation, internalize, internalize_g};
use lpltl::proof::{
    check_derivation, schematic_name, star_condition_formula, theorem_corpus, AxiomName,
    ConstantSpecification, Derivation, Justification,
};
use lpltl::semantics::InterpretedSystem;
use lpltl::syntax::{parse_formula, subformulas, AgentId, Formula, ParseOptions, Term};
use lpltl::SystemVariant;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn finish(criterion: u32, description: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("ACCEPTANCE {criterion} PASS: {description} ({elapsed:.2?})");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its budget: {elapsed:.2?} > {budget:.2?}"
    );
}

#[test]
fn criterion_1_corpus_checks() {
    let started = Instant::now();
    let corpus = theorem_corpus();
    let names: Vec<&str> = corpus.iter().map(|e| e.name).collect();
    assert!(names.contains(&"mix1"));
    assert!(names.contains(&"until-refl"));
    assert!(corpus.len() >= 12, "corpus too small: {}", corpus.len());
    for entry in &corpus {
        let cs = ConstantSpecification::schematic(entry.variant);
        let report = check_derivation(&entry.derivation, &cs, entry.variant);
        assert!(report.ok, "{}: {report}", entry.name);
    }
    // the mix lemma conclusion is exactly G P -> (P & X G P)
    let p = Formula::prop("P");
    let mix = corpus.iter().find(|e| e.name == "mix1").unwrap();
    assert_eq!(
        *mix.conclusion(),
        p.clone().always().implies(p.clone().and(p.always().next()))
    );
    finish(
        1,
        "corpus derivations check under a schematic specification",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_soundness_on_random_systems() {
    let started = Instant::now();
    let corpus = theorem_corpus();
    let mut rng = StdRng::seed_from_u64(2026);
    let mut counterexamples = 0usize;
    for round in 0..200 {
        // star systems interpret every corpus variant (base axioms are a
        // subset and the schematic specification covers both axiom sets)
        let sys = random_system(&mut rng, SystemVariant::LpltlStar);
        assert!(
            sys.validate().is_valid(),
            "round {round} generated an invalid system"
        );
        for entry in &corpus {
            let holds = sys
                .holds_everywhere(entry.conclusion())
                .unwrap_or_else(|e| {
                    panic!("round {round}, {}: {e}", entry.name);
                });
            if !holds {
                counterexamples += 1;
                eprintln!("counterexample: {} fails on round {round}", entry.name);
            }
        }
    }
    assert_eq!(counterexamples, 0);
    finish(
        2,
        "corpus theorems hold at every point of 200 random systems",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_3_differential_semantics() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(3033);
    for round in 0..1000 {
        let sys = random_system(&mut rng, SystemVariant::Lpltl);
        let phi = random_eval_formula(&mut rng, 5, 2);
        let run = sys.runs[rng.random_range(0..sys.runs.len())].clone();
        let n = rng.random_range(0..run.period());
        let horizon = 2 * run.period() + 12;
        let direct = sys.eval(&run, n, &phi).unwrap();
        let brute = sys.brute_eval(&run, n, &phi, horizon).unwrap();
        assert_eq!(direct, brute, "round {round}: {phi} at position {n}");
    }
    finish(
        3,
        "eval agrees with brute-force unrolling on 1000 samples",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_4_evidence_closure() {
    let started = Instant::now();
    let p = Formula::prop("P");
    let q = Formula::prop("Q");
    let fun_instance = q.clone().neg().next().iff(q.clone().next().neg());
    let mix_instance = p.clone().always().implies(p.clone().next());
    let mut rng = StdRng::seed_from_u64(4044);
    for round in 0..100 {
        let variant = if round % 2 == 0 {
            SystemVariant::Lpltl
        } else {
            SystemVariant::LpltlStar
        };
        let mut entries = vec![
            (
                "c1".to_string(),
                AgentId::new(1),
                p.clone().implies(p.clone()),
            ),
            ("c2".to_string(), AgentId::new(2), fun_instance.clone()),
        ];
        if variant == SystemVariant::LpltlStar {
            entries.push(("c3".to_string(), AgentId::new(1), mix_instance.clone()));
        }
        let cs = ConstantSpecification::finite(variant, entries.clone()).unwrap();
        let base_sys = random_system(&mut rng, variant);
        let sys = InterpretedSystem::new(
            base_sys.frame.clone(),
            base_sys.runs.clone(),
            base_sys.base.clone(),
            base_sys.valuation.clone(),
            cs,
            variant,
        );
        check_closure_conditions(&sys, &entries, round);
    }
    finish(
        4,
        "saturated oracle satisfies the closure conditions on 100 random seeds",
        started,
        Duration::from_secs(30),
    );
}

fn check_closure_conditions(
    sys: &InterpretedSystem,
    cs_entries: &[(String, AgentId, Formula)],
    round: usize,
) {
    let states = sys.frame.num_states();
    let agents = sys.agents();
    // condition 1: monotonicity over the derived support
    let facts: Vec<(AgentId, usize, Term, Formula)> = sys
        .base
        .iter()
        .map(|(a, s, t, f)| (a, s, t.clone(), f.clone()))
        .collect();
    for (agent, _, term, phi) in &facts {
        for v in 0..states {
            if sys.ev_member(*agent, v, term, phi).unwrap() {
                for w in sys.frame.successors(*agent, v) {
                    assert!(
                        sys.ev_member(*agent, w, term, phi).unwrap(),
                        "round {round}: monotonicity"
                    );
                }
            }
        }
    }
    // condition 2: specification entries, at every state
    for (c, agent, phi) in cs_entries {
        for w in 0..states {
            assert!(
                sys.ev_member(*agent, w, &Term::constant(c), phi).unwrap(),
                "round {round}: constant specification"
            );
        }
    }
    // conditions 3-5 over the enumerable support of a small term pool
    let mut pool = common::term_pool();
    pool.push(Term::constant("c2"));
    for agent in 1..=agents {
        let agent = AgentId::new(agent);
        for w in 0..states {
            for t in &pool {
                let support = sys.enumerate_evidence(agent, w, t, 0).unwrap();
                for phi in &support {
                    // condition 5: positive introspection
                    let introspected = Formula::just(t.clone(), agent, phi.clone());
                    assert!(
                        sys.ev_member(agent, w, &t.clone().bang(), &introspected)
                            .unwrap(),
                        "round {round}: positive introspection"
                    );
                    for u in &pool {
                        // condition 4: sum, both sides
                        assert!(
                            sys.ev_member(agent, w, &t.clone().sum(u.clone()), phi)
                                .unwrap(),
                            "round {round}: sum (left)"
                        );
                        assert!(
                            sys.ev_member(agent, w, &u.clone().sum(t.clone()), phi)
                                .unwrap(),
                            "round {round}: sum (right)"
                        );
                        // condition 3: application
                        if let Formula::Implies(premise, conclusion) = phi {
                            if sys.ev_member(agent, w, u, premise).unwrap() {
                                assert!(
                                    sys.ev_member(agent, w, &t.clone().app(u.clone()), conclusion)
                                        .unwrap(),
                                    "round {round}: application"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    // the star condition, one and two levels
    if sys.variant == SystemVariant::LpltlStar {
        for (c, i0, phi) in cs_entries {
            for n in 1..=2usize {
                for w in 0..states {
                    for i in 1..=agents {
                        let mut inner = vec![*i0];
                        for j in 0..n - 1 {
                            inner.push(AgentId::new((j as u32 % agents) + 1));
                        }
                        let carried = star_condition_formula(c, &inner, phi);
                        assert!(
                            sys.ev_member(AgentId::new(i), w, &Term::star_chain(c, n), &carried)
                                .unwrap(),
                            "round {round}: star condition level {n}"
                        );
                    }
                }
            }
        }
    }
}

fn sat_suite() -> Vec<(Formula, ConstantSpecification, SystemVariant)> {
    let opts = ParseOptions::default();
    let schematic = || ConstantSpecification::schematic(SystemVariant::Lpltl);
    let mut suite: Vec<(Formula, ConstantSpecification, SystemVariant)> = [
        "P",
        "~P",
        "(P U Q)",
        "F P",
        "G P",
        "(F P & G (P -> X P))",
        "X X P",
        "(P U (Q U R))",
        "(G P -> P)",
        "[x]_1 P",
        "~[x]_1 P",
        "([x]_1 P & [x2]_2 Q)",
        "[x]_1 (P -> Q)",
        "([x]_1 (P -> Q) -> ([x2]_1 P -> [(x . x2)]_1 Q))",
        "G [x]_1 P",
        "(X [x]_1 P | [x2]_2 Q)",
        "(P U [x]_1 Q)",
        "(F [x]_1 P & G Q)",
    ]
    .into_iter()
    .map(|text| {
        (
            parse_formula(text, &opts).unwrap(),
            schematic(),
            SystemVariant::Lpltl,
        )
    })
    .collect();

    // a specification constant with its matching finite specification
    let p = Formula::prop("P");
    let axiom = p.clone().implies(p);
    let finite = ConstantSpecification::finite(
        SystemVariant::Lpltl,
        [("c1".to_string(), AgentId::new(1), axiom.clone())],
    )
    .unwrap();
    suite.push((
        Formula::just(Term::constant("c1"), AgentId::new(1), axiom),
        finite,
        SystemVariant::Lpltl,
    ));

    // a starred chain under the star variant
    let q = Formula::prop("Q");
    let star_axiom = q.clone().implies(q);
    let star_cs = ConstantSpecification::schematic(SystemVariant::LpltlStar);
    let c = star_cs.constant_for(&star_axiom, AgentId::new(1)).unwrap();
    let chain = Formula::just(
        Term::constant(&c).star(),
        AgentId::new(1),
        Formula::just(Term::constant(&c), AgentId::new(1), star_axiom).always(),
    );
    suite.push((chain, star_cs, SystemVariant::LpltlStar));
    assert_eq!(suite.len(), 20);
    suite
}

#[test]
fn criterion_5_satisfiability() {
    let started = Instant::now();
    let config = DecideConfig::default();

    for (chi, cs, variant) in sat_suite() {
        let cert = decide(&chi, &cs, variant, &config).unwrap_or_else(|e| panic!("{chi}: {e}"));
        match cert {
            Certificate::Sat {
                system, witness, ..
            } => {
                // re-verify the witness through the evaluator
                assert_eq!(
                    system.eval(&system.runs[witness], 0, &chi),
                    Ok(true),
                    "{chi}"
                );
                assert!(system.validate().is_valid(), "{chi}");
            }
            Certificate::NoModel { stats } => panic!("expected SAT for {chi}: {stats:?}"),
        }
    }

    // NOMODEL: the negations of every corpus theorem
    for entry in theorem_corpus() {
        let cs = ConstantSpecification::schematic(entry.variant);
        let negated = entry.conclusion().clone().neg();
        let cert = decide(&negated, &cs, entry.variant, &config)
            .unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        assert!(
            !cert.is_sat(),
            "negation of {} should have no model",
            entry.name
        );
    }
    // NOMODEL: the until reflexivity violation and bottom
    let p = Formula::prop("P");
    let chi = p.clone().and(p.clone().until(p).neg());
    let cs = ConstantSpecification::schematic(SystemVariant::Lpltl);
    assert!(!decide(&chi, &cs, SystemVariant::Lpltl, &config)
        .unwrap()
        .is_sat());
    assert!(
        !decide(&Formula::Bottom, &cs, SystemVariant::Lpltl, &config)
            .unwrap()
            .is_sat()
    );

    finish(
        5,
        "verified SAT for the 20-formula suite, NOMODEL for theorem negations",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_6_internalization_round_trip() {
    let started = Instant::now();
    let cs = ConstantSpecification::schematic(SystemVariant::LpltlStar);
    let mut checked = 0usize;
    for entry in theorem_corpus() {
        if entry.variant == SystemVariant::LpltlG {
            continue;
        }
        let eliminated = if entry.variant == SystemVariant::Lpltl {
            let out = eliminate_necessitation(&entry.derivation, &cs)
                .unwrap_or_else(|e| panic!("{}: {e}", entry.name));
            assert!(!out.uses_temporal_necessitation(), "{}", entry.name);
            assert_eq!(
                out.conclusion(),
                entry.derivation.conclusion(),
                "{}",
                entry.name
            );
            out
        } else {
            entry.derivation.clone()
        };
        for agent in [1u32, 2] {
            let agent = AgentId::new(agent);
            let result = internalize(&eliminated, agent, &cs)
                .unwrap_or_else(|e| panic!("{} agent {agent}: {e}", entry.name));
            let report = check_derivation(&result.derivation, &cs, SystemVariant::LpltlStar);
            assert!(report.ok, "{} agent {agent}: {report}", entry.name);
            assert_eq!(
                *result.derivation.conclusion().unwrap(),
                Formula::just(result.term.clone(), agent, entry.conclusion().clone()),
                "{} agent {agent}",
                entry.name
            );
            checked += 1;
        }
    }
    assert!(checked >= 24, "only {checked} round trips ran");
    finish(
        6,
        "internalization round trip over the corpus, both agents",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_7_g_internalization_shapes() {
    let started = Instant::now();
    let cs = ConstantSpecification::schematic(SystemVariant::LpltlG);
    let p = Formula::prop("P");
    let taut = p.clone().implies(p.clone());
    let agent = AgentId::new(1);

    // NECG case: the produced term is exactly `up c` for the axiom constant
    let mut nec_g = Derivation::new(SystemVariant::LpltlG);
    let l1 = nec_g.push(taut.clone(), Justification::Axiom(AxiomName::Taut));
    nec_g.push(taut.clone().always(), Justification::NecBox { from: l1 });
    let got = internalize_g(&nec_g, agent, &cs).unwrap();
    let c_taut = schematic_name(&taut, agent);
    assert_eq!(got.term, Term::constant(&c_taut).up());
    assert!(check_derivation(&got.derivation, &cs, SystemVariant::LpltlG).ok);
    assert_eq!(
        *got.derivation.conclusion().unwrap(),
        Formula::just(got.term.clone(), agent, taut.clone().always())
    );

    // NECX case: the produced term is exactly `c_mix . up c`
    let mut nec_x = Derivation::new(SystemVariant::LpltlG);
    let l1 = nec_x.push(taut.clone(), Justification::Axiom(AxiomName::Taut));
    nec_x.push(taut.clone().next(), Justification::NecNext { from: l1 });
    let got = internalize_g(&nec_x, agent, &cs).unwrap();
    let mix_instance = taut.clone().always().implies(taut.clone().next());
    let c_mix = schematic_name(&mix_instance, agent);
    assert_eq!(
        got.term,
        Term::constant(&c_mix).app(Term::constant(&c_taut).up())
    );
    assert!(check_derivation(&got.derivation, &cs, SystemVariant::LpltlG).ok);
    assert_eq!(
        *got.derivation.conclusion().unwrap(),
        Formula::just(got.term.clone(), agent, taut.next())
    );

    finish(
        7,
        "G-variant internalization reproduces the two proof-case term shapes",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_8_conservativity_of_the_star_extension() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(8088);
    let mut preserved_true = 0usize;
    let mut rounds = 0usize;
    while preserved_true < 50 {
        rounds += 1;
        assert!(rounds < 2000, "could not sample 50 true star-free formulas");
        let sys = random_system(&mut rng, SystemVariant::Lpltl);
        // the star extension of the same system: same seeds, same (base)
        // constant specification, the star clause of the oracle enabled
        let star_sys = sys.with_variant(SystemVariant::LpltlStar);
        let phi = random_eval_formula(&mut rng, 4, 2);
        for run_idx in 0..sys.runs.len() {
            let run = sys.runs[run_idx].clone();
            for n in 0..run.period() {
                let before = sys.eval(&run, n, &phi).unwrap();
                let after = star_sys.eval(&run, n, &phi).unwrap();
                assert_eq!(
                    before, after,
                    "star extension changed {phi} at position {n}"
                );
                if before {
                    preserved_true += 1;
                }
            }
        }
    }
    finish(
        8,
        "star-free truth preserved under the star evidence extension (50 samples)",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_9_canonical_finiteness() {
    let started = Instant::now();
    let config = DecideConfig::default();
    for (chi, cs, variant) in sat_suite() {
        let sub = subformulas(&chi);
        let cert = decide(&chi, &cs, variant, &config).unwrap();
        match cert {
            Certificate::Sat { system, .. } => {
                assert!(
                    system.frame.num_states() <= 1 << sub.len(),
                    "{chi}: {} states exceeds 2^{}",
                    system.frame.num_states(),
                    sub.len()
                );
                assert!(system.validate().is_valid(), "{chi}");
            }
            Certificate::NoModel { stats } => panic!("expected SAT for {chi}: {stats:?}"),
        }
    }
    finish(
        9,
        "extracted canonical systems are finite and validate",
        started,
        Duration::from_secs(60),
    );
}

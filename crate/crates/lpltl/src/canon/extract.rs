//! Extraction of an interpreted system from atom lassos.

use std::collections::BTreeSet;

use super::atoms::ClosureInfo;
use super::graph::AtomGraph;
use super::CanonError;
use crate::proof::ConstantSpecification;
use crate::semantics::{EvidenceBase, Frame, InterpretedSystem, LassoRun};
use crate::syntax::{AgentId, Formula};
use crate::SystemVariant;

/// Builds an interpreted system from the atoms appearing on the given
/// lassos.
///
/// States are the lasso atoms. The accessibility relation preserves
/// justification assertions: `R_i(G, D)` exactly when every `[t]_i phi` in
/// `G` is also in `D`. Because each atom's justification set is a subset of
/// the atom itself, this relation is reflexive and transitive by
/// construction, which mirrors how the canonical relation transports
/// `[!t]_i [t]_i phi` facts. Evidence seeds come from atom membership and
/// the saturating oracle recovers the closure facts; the valuation reads off
/// the propositions. The result must validate; a failure is an internal
/// error, not an input error.
pub fn extract_model(
    graph: &AtomGraph,
    info: &ClosureInfo,
    lassos: &[(Vec<usize>, Vec<usize>)],
    cs: &ConstantSpecification,
    variant: SystemVariant,
    agents: u32,
) -> Result<InterpretedSystem, CanonError> {
    assert!(!lassos.is_empty(), "extraction needs at least one lasso");
    let mut used: BTreeSet<usize> = BTreeSet::new();
    for (prefix, looping) in lassos {
        used.extend(prefix.iter().copied());
        used.extend(looping.iter().copied());
    }
    let states: Vec<usize> = used.into_iter().collect();
    let state_of = |atom: usize| states.binary_search(&atom).expect("atom is a state");

    let names: Vec<String> = states
        .iter()
        .map(|&a| format!("a{}", graph.atoms[a].id))
        .collect();
    let mut frame = Frame::new(names, agents);

    // justification assertions per (agent, atom), as closure index sets
    let just_set = |atom: usize, agent: AgentId| -> Vec<usize> {
        info.just_members
            .iter()
            .copied()
            .filter(|&j| {
                graph.atoms[atom].contains(j)
                    && matches!(info.set.get(j), Formula::Just(_, i, _) if *i == agent)
            })
            .collect()
    };

    for agent in 1..=agents {
        let agent = AgentId::new(agent);
        for (vs, &v) in states.iter().enumerate() {
            let justs = just_set(v, agent);
            for (ws, &w) in states.iter().enumerate() {
                if justs.iter().all(|&j| graph.atoms[w].contains(j)) {
                    frame.add_edge(agent, vs, ws);
                }
            }
        }
    }

    let mut base = EvidenceBase::new();
    let mut valuation = vec![BTreeSet::new(); states.len()];
    for (s, &atom) in states.iter().enumerate() {
        for &j in &info.just_members {
            if graph.atoms[atom].contains(j) {
                let Formula::Just(term, agent, body) = info.set.get(j) else {
                    unreachable!()
                };
                base.add(*agent, s, term.clone(), body.as_ref().clone());
            }
        }
        for &pr in &info.prop_members {
            if graph.atoms[atom].contains(pr) {
                let Formula::Prop(name) = info.set.get(pr) else {
                    unreachable!()
                };
                valuation[s].insert(name.clone());
            }
        }
    }

    let runs: Vec<LassoRun> = lassos
        .iter()
        .map(|(prefix, looping)| {
            LassoRun::new(
                prefix.iter().map(|&a| state_of(a)).collect(),
                looping.iter().map(|&a| state_of(a)).collect(),
            )
        })
        .collect();

    let system = InterpretedSystem::new(frame, runs, base, valuation, cs.clone(), variant);
    let report = system.validate();
    if !report.is_valid() {
        return Err(CanonError::InvalidExtraction { report });
    }
    Ok(system)
}

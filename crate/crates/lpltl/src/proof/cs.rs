use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use super::axioms::{match_axiom, match_axiom_with};
use crate::syntax::{AgentId, Formula, Term};
use crate::SystemVariant;

#[derive(Debug, thiserror::Error)]
pub enum CsError {
    #[error("constant specification entry [{constant}]_{agent} {formula} does not justify an axiom of {variant}")]
    NotAnAxiom {
        constant: String,
        agent: AgentId,
        formula: Formula,
        variant: SystemVariant,
    },
}

type InstanceTable = BTreeMap<(String, u32), BTreeSet<Formula>>;

/// A constant specification: the set of facts `[c]_i phi` stating that
/// constant `c` justifies axiom `phi` for agent `i`.
///
/// Two modes exist. `Finite` is an explicit table, typically loaded from a
/// file. `Schematic` justifies every axiom instance of its variant through a
/// content-addressed constant name, which makes it axiomatically appropriate
/// by construction; instances that have been looked up or named are recorded
/// so that evidence enumeration can replay them.
#[derive(Debug, Clone)]
pub struct ConstantSpecification {
    inner: CsInner,
}

#[derive(Debug, Clone)]
enum CsInner {
    Finite {
        variant: SystemVariant,
        entries: InstanceTable,
    },
    Schematic {
        variant: SystemVariant,
        experimental: bool,
        seen: Arc<Mutex<InstanceTable>>,
    },
}

/// The deterministic constant name a schematic specification assigns to an
/// axiom instance for an agent: `c_` followed by an FNV-1a hash of the
/// printed instance and the agent index.
pub fn schematic_name(phi: &Formula, agent: AgentId) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in phi
        .to_string()
        .bytes()
        .chain([0x1f])
        .chain(agent.get().to_string().bytes())
    {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("c_{hash:016x}")
}

impl ConstantSpecification {
    /// An axiomatically appropriate schematic specification for the variant.
    pub fn schematic(variant: SystemVariant) -> ConstantSpecification {
        ConstantSpecification {
            inner: CsInner::Schematic {
                variant,
                experimental: false,
                seen: Arc::new(Mutex::new(BTreeMap::new())),
            },
        }
    }

    /// A finite specification. Every entry's formula must be an instance of
    /// an axiom schema of the variant.
    pub fn finite(
        variant: SystemVariant,
        entries: impl IntoIterator<Item = (String, AgentId, Formula)>,
    ) -> Result<ConstantSpecification, CsError> {
        let mut table: InstanceTable = BTreeMap::new();
        for (constant, agent, formula) in entries {
            if match_axiom(&formula, variant).is_empty() {
                return Err(CsError::NotAnAxiom {
                    constant,
                    agent,
                    formula,
                    variant,
                });
            }
            table
                .entry((constant, agent.get()))
                .or_default()
                .insert(formula);
        }
        Ok(ConstantSpecification {
            inner: CsInner::Finite {
                variant,
                entries: table,
            },
        })
    }

    pub fn is_schematic(&self) -> bool {
        matches!(self.inner, CsInner::Schematic { .. })
    }

    pub fn variant(&self) -> SystemVariant {
        match &self.inner {
            CsInner::Finite { variant, .. } | CsInner::Schematic { variant, .. } => *variant,
        }
    }

    /// Membership test for `[c]_i phi`.
    pub fn lookup(&self, constant: &str, agent: AgentId, phi: &Formula) -> bool {
        match &self.inner {
            CsInner::Finite { entries, .. } => entries
                .get(&(constant.to_string(), agent.get()))
                .is_some_and(|set| set.contains(phi)),
            CsInner::Schematic {
                variant,
                experimental,
                seen,
            } => {
                if schematic_name(phi, agent) != constant
                    || match_axiom_with(phi, *variant, *experimental).is_empty()
                {
                    return false;
                }
                seen.lock()
                    .unwrap()
                    .entry((constant.to_string(), agent.get()))
                    .or_default()
                    .insert(phi.clone());
                true
            }
        }
    }

    /// A constant justifying `phi` for `agent`, if the specification has one.
    /// Schematic mode names (and records) one for every axiom instance.
    pub fn constant_for(&self, phi: &Formula, agent: AgentId) -> Option<String> {
        match &self.inner {
            CsInner::Finite { entries, .. } => entries
                .iter()
                .find(|((_, a), set)| *a == agent.get() && set.contains(phi))
                .map(|((c, _), _)| c.clone()),
            CsInner::Schematic {
                variant,
                experimental,
                seen,
            } => {
                if match_axiom_with(phi, *variant, *experimental).is_empty() {
                    return None;
                }
                let name = schematic_name(phi, agent);
                seen.lock()
                    .unwrap()
                    .entry((name.clone(), agent.get()))
                    .or_default()
                    .insert(phi.clone());
                Some(name)
            }
        }
    }

    /// The known instances justified by `(constant, agent)`. For a finite
    /// specification this is exact; for a schematic one it covers the
    /// instances recorded so far (the full instance set is infinite).
    pub fn instances(&self, constant: &str, agent: AgentId) -> Vec<Formula> {
        let key = (constant.to_string(), agent.get());
        match &self.inner {
            CsInner::Finite { entries, .. } => entries
                .get(&key)
                .map(|s| s.iter().cloned().collect())
                .unwrap_or_default(),
            CsInner::Schematic { seen, .. } => seen
                .lock()
                .unwrap()
                .get(&key)
                .map(|s| s.iter().cloned().collect())
                .unwrap_or_default(),
        }
    }

    /// All entries of a finite specification, sorted.
    pub fn finite_entries(&self) -> Vec<(String, AgentId, Formula)> {
        match &self.inner {
            CsInner::Finite { entries, .. } => entries
                .iter()
                .flat_map(|((c, a), set)| {
                    set.iter()
                        .map(move |phi| (c.clone(), AgentId::new(*a), phi.clone()))
                })
                .collect(),
            CsInner::Schematic { .. } => Vec::new(),
        }
    }

    /// The restriction `CS^r`: keeps exactly the entries whose formula is an
    /// axiom of the base system.
    pub fn restrict(&self) -> ConstantSpecification {
        match &self.inner {
            CsInner::Finite { entries, .. } => {
                let filtered = entries
                    .iter()
                    .map(|(key, set)| {
                        let kept: BTreeSet<Formula> = set
                            .iter()
                            .filter(|phi| !match_axiom(phi, SystemVariant::Lpltl).is_empty())
                            .cloned()
                            .collect();
                        (key.clone(), kept)
                    })
                    .filter(|(_, set)| !set.is_empty())
                    .collect();
                ConstantSpecification {
                    inner: CsInner::Finite {
                        variant: SystemVariant::Lpltl,
                        entries: filtered,
                    },
                }
            }
            CsInner::Schematic { .. } => ConstantSpecification::schematic(SystemVariant::Lpltl),
        }
    }
}

/// Builds the star-condition evidence formula
/// `G [*^(n-1) c]_{i_(n-1)} G ... [*c]_{i_1} G [c]_{i_0} phi`
/// that `*^n c` carries for a specification entry `[c]_{i_0} phi`.
pub fn star_condition_formula(constant: &str, inner_agents: &[AgentId], phi: &Formula) -> Formula {
    // inner_agents = [i_0, ..., i_(n-1)], n >= 1
    assert!(!inner_agents.is_empty());
    let mut acc = Formula::just(Term::constant(constant), inner_agents[0], phi.clone());
    for (level, agent) in inner_agents.iter().enumerate().skip(1) {
        acc = Formula::just(Term::star_chain(constant, level), *agent, acc.always());
    }
    acc.always()
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The three supported Hilbert systems.
///
/// The variant fixes which term operators are part of the language, which
/// axiom schemas are available, and which rules a derivation may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SystemVariant {
    /// The base system: LTL combined with the multi-agent Logic of Proofs.
    Lpltl,
    /// The star extension: adds `*` terms, the (mix) and (boxed reflexivity)
    /// axioms, and the starred axiom necessitation rule, but drops the
    /// temporal necessitation rules.
    LpltlStar,
    /// The (generalize) extension: keeps the temporal necessitation rules and
    /// adds the `up` term operator, the (generalize) and (mix) axioms, and
    /// iterated constant necessitation.
    LpltlG,
}

impl SystemVariant {
    pub const ALL: [SystemVariant; 3] = [
        SystemVariant::Lpltl,
        SystemVariant::LpltlStar,
        SystemVariant::LpltlG,
    ];

    /// Whether `*` is part of the term language.
    pub fn allows_star(self) -> bool {
        matches!(self, SystemVariant::LpltlStar | SystemVariant::LpltlG)
    }

    /// Whether `up` is part of the term language.
    pub fn allows_up(self) -> bool {
        matches!(self, SystemVariant::LpltlG)
    }

    /// Whether the temporal necessitation rules (NECX / NECG) are available.
    pub fn allows_temporal_necessitation(self) -> bool {
        matches!(self, SystemVariant::Lpltl | SystemVariant::LpltlG)
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemVariant::Lpltl => "lpltl",
            SystemVariant::LpltlStar => "lpltl-star",
            SystemVariant::LpltlG => "lpltl-g",
        }
    }
}

impl fmt::Display for SystemVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lpltl" => Ok(SystemVariant::Lpltl),
            "lpltl-star" | "lpltl_star" | "lpltlstar" | "star" => Ok(SystemVariant::LpltlStar),
            "lpltl-g" | "lpltl_g" | "lpltlg" | "g" => Ok(SystemVariant::LpltlG),
            other => Err(format!(
                "unknown variant `{other}` (expected lpltl, lpltl-star, or lpltl-g)"
            )),
        }
    }
}

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::game::{Action, Observation, PlayerId};

/// Tremble size: `ε`, or the far smaller `ε^(1/ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrembleClass {
    Fast,
    Slow,
}

impl fmt::Display for TrembleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrembleClass::Fast => "ε",
            TrembleClass::Slow => "ε^(1/ε)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OwnerSelector {
    AnyX,
    M,
    Any,
}

impl OwnerSelector {
    fn accepts(self, who: PlayerId) -> bool {
        match self {
            OwnerSelector::AnyX => who != PlayerId::M,
            OwnerSelector::M => who == PlayerId::M,
            OwnerSelector::Any => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecordMatch {
    Empty,
    Exact(Vec<Observation>),
    /// Non-empty records starting with this prefix.
    Prefix(Vec<Observation>),
    Any,
}

impl RecordMatch {
    fn accepts(&self, record: &[Observation]) -> bool {
        match self {
            RecordMatch::Empty => record.is_empty(),
            RecordMatch::Exact(r) => r.as_slice() == record,
            RecordMatch::Prefix(p) => !record.is_empty() && record.starts_with(p),
            RecordMatch::Any => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrembleRule {
    pub owner: OwnerSelector,
    pub record: RecordMatch,
    pub class: TrembleClass,
}

/// Ordered tremble rules; the first matching rule wins and unmatched
/// records tremble at `ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrembleScheme {
    pub name: String,
    pub rules: Vec<TrembleRule>,
}

/// Names accepted by [`TrembleScheme::named`].
pub const SCHEME_NAMES: [&str; 2] = ["contagion", "enforcement"];

fn opening(own: Action, other: Action) -> Observation {
    Observation::Opening { own, other }
}

fn rule(owner: OwnerSelector, record: RecordMatch, class: TrembleClass) -> TrembleRule {
    TrembleRule { owner, record, class }
}

impl TrembleScheme {
    /// Trembles for the contagious profile: slow after a cooperative
    /// opening, fast everywhere else (including after a mutual-defection
    /// opening).
    pub fn contagion() -> Self {
        use Action::{C, D};
        use OwnerSelector::{AnyX, M};
        use TrembleClass::{Fast, Slow};
        TrembleScheme {
            name: "contagion".into(),
            rules: vec![
                rule(AnyX, RecordMatch::Empty, Fast),
                rule(AnyX, RecordMatch::Prefix(vec![opening(C, D)]), Fast),
                rule(AnyX, RecordMatch::Prefix(vec![opening(D, C)]), Fast),
                rule(AnyX, RecordMatch::Prefix(vec![opening(C, C)]), Slow),
                rule(M, RecordMatch::Any, Fast),
            ],
        }
    }

    /// Trembles for the enforcement profile: slow only where an `X` player
    /// has cooperated and been cooperated with at every stage it played.
    pub fn enforcement() -> Self {
        use Action::C;
        use OwnerSelector::AnyX;
        use TrembleClass::Slow;
        let cc = opening(C, C);
        let pcc = Observation::Played { own: C, m: C };
        TrembleScheme {
            name: "enforcement".into(),
            rules: vec![
                rule(AnyX, RecordMatch::Exact(vec![cc]), Slow),
                rule(AnyX, RecordMatch::Exact(vec![cc, pcc]), Slow),
            ],
        }
    }

    pub fn named(name: &str) -> Result<Self> {
        match name {
            "contagion" => Ok(Self::contagion()),
            "enforcement" => Ok(Self::enforcement()),
            other => Err(Error::Invalid(format!(
                "unknown tremble scheme `{other}` (expected one of {})",
                SCHEME_NAMES.join(", ")
            ))),
        }
    }

    pub fn class(&self, who: PlayerId, record: &[Observation]) -> TrembleClass {
        self.rules
            .iter()
            .find(|r| r.owner.accepts(who) && r.record.accepts(record))
            .map_or(TrembleClass::Fast, |r| r.class)
    }
}

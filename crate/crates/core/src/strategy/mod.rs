//! Behavioral strategies as finite automata over private observations.

mod automaton;
mod deviation;
mod grim;
mod measurability;
mod sigma;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use automaton::{compile, Behavior, StateId, StrategyAutomaton};
pub use deviation::{apply_deviation, Continuation, DeviationPlan, Trigger};
pub use grim::{AllD, Contagious, ContagiousState, GrimState};
pub use measurability::{check_measurability, lift, Violation};
pub use sigma::{definition_action, definition_lines, seed_from_record, DefinitionLine, Sigma, SigmaState};

use crate::error::{Error, Result};
use crate::game::{Action, Observation, PlayerId};

/// Strategy names accepted by [`named`].
pub const STRATEGY_NAMES: [&str; 4] = ["contagious", "sigma", "all-d", "persistent-c-case5"];

pub fn contagious(owner: PlayerId) -> StrategyAutomaton {
    compile(&Contagious { owner }, "contagious")
}

/// The third-person enforcement strategy.
pub fn sigma(owner: PlayerId) -> StrategyAutomaton {
    compile(&Sigma { owner }, "sigma")
}

pub fn all_d(owner: PlayerId) -> StrategyAutomaton {
    compile(&AllD { owner }, "all-d")
}

/// Contagious play, except that after an opening in which only the other
/// `X` defected the owner keeps cooperating with `M` until it first sits
/// out a stage.
pub fn persistent_c_after_betrayal(owner: PlayerId) -> Result<StrategyAutomaton> {
    if owner == PlayerId::M {
        return Err(Error::Invalid("persistent-c-case5 is an X strategy".into()));
    }
    let trigger = Trigger::at(
        alloc::vec![Observation::Opening {
            own: Action::C,
            other: Action::D
        }],
        None,
    );
    let plan = DeviationPlan::new(trigger, [], Continuation::PersistentC);
    let mut a = apply_deviation(&contagious(owner), &plan);
    a = a.renamed("persistent-c-case5");
    Ok(a)
}

/// Looks up one of [`STRATEGY_NAMES`].
pub fn named(name: &str, owner: PlayerId) -> Result<StrategyAutomaton> {
    match name {
        "contagious" => Ok(contagious(owner)),
        "sigma" => Ok(sigma(owner)),
        "all-d" => Ok(all_d(owner)),
        "persistent-c-case5" => persistent_c_after_betrayal(owner),
        other => Err(Error::Invalid(format!(
            "unknown strategy `{other}` (expected one of {})",
            STRATEGY_NAMES.join(", ")
        ))),
    }
}

impl StrategyAutomaton {
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.set_name(name.into());
        self
    }
}

/// One automaton per player, indexed by [`PlayerId::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    players: [StrategyAutomaton; 3],
}

impl Profile {
    pub fn new(x1: StrategyAutomaton, x2: StrategyAutomaton, m: StrategyAutomaton) -> Result<Self> {
        for (a, want) in [(&x1, PlayerId::X1), (&x2, PlayerId::X2), (&m, PlayerId::M)] {
            if a.owner() != want {
                return Err(Error::OwnerMismatch {
                    expected: want.to_string(),
                    found: a.owner().to_string(),
                });
            }
        }
        Ok(Profile { players: [x1, x2, m] })
    }

    /// Every player uses the same named strategy.
    pub fn uniform(name: &str) -> Result<Self> {
        Self::new(
            named(name, PlayerId::X1)?,
            named(name, PlayerId::X2)?,
            named(name, PlayerId::M)?,
        )
    }

    /// Strategy names for `X1`, `X2`, `M` in that order.
    pub fn from_names(names: &[&str]) -> Result<Self> {
        match names {
            [a, b, c] => Self::new(named(a, PlayerId::X1)?, named(b, PlayerId::X2)?, named(c, PlayerId::M)?),
            _ => Err(Error::Invalid(format!(
                "a profile needs 3 strategies, got {}",
                names.len()
            ))),
        }
    }

    pub fn get(&self, who: PlayerId) -> &StrategyAutomaton {
        &self.players[who.index()]
    }

    /// Same profile with `who`'s strategy replaced.
    pub fn with(&self, who: PlayerId, strategy: StrategyAutomaton) -> Result<Self> {
        let mut players = self.players.clone();
        if strategy.owner() != who {
            return Err(Error::OwnerMismatch {
                expected: who.to_string(),
                found: strategy.owner().to_string(),
            });
        }
        players[who.index()] = strategy;
        Ok(Profile { players })
    }

    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.players.iter().map(|a| a.name()).collect();
        names.join(",")
    }
}

//! Expected discounted payoffs of a strategy profile: exactly from the joint
//! Markov chain, as certified truncation brackets, as named closed forms and
//! by Monte Carlo.
//!
//! Stage `t` of a value measured from stage `s` has weight `δ^(t-s)`; an
//! `X` player gets 0 at a stage it sits out.

mod chain;
mod closed_form;
mod simulate;
mod solve;
mod truncate;

use core::ops::Index;

pub use chain::{play_stage, JointChain, JointState, Transition, DEFAULT_STATE_CAP};
pub use closed_form::{closed_form, FORMULA_IDS};
pub use simulate::{simulate, simulate_runs, summarize, tail_bound, SimulationReport};
pub use solve::exact_values;
pub use truncate::{tail_bounds, truncated_from, truncated_value, BoundPair};

use crate::error::{Error, Result};
use crate::game::{Game, History, PlayerId, Seat};
use crate::rational::Rational;
use crate::strategy::Profile;

/// Exact value per player, indexed by [`PlayerId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueVector(pub [Rational; 3]);

impl ValueVector {
    pub fn get(&self, who: PlayerId) -> &Rational {
        &self.0[who.index()]
    }
}

impl Index<PlayerId> for ValueVector {
    type Output = Rational;

    fn index(&self, who: PlayerId) -> &Rational {
        self.get(who)
    }
}

/// Value of the chain from state `from`.
pub fn exact_value(chain: &JointChain, from: usize) -> ValueVector {
    exact_values(chain).swap_remove(from)
}

/// Values from the start of the game.
pub fn value_from_start(profile: &Profile, game: &Game) -> Result<ValueVector> {
    let chain = JointChain::build(profile, game)?;
    Ok(exact_value(&chain, 0))
}

/// Values after `history` has been played. With `selected` set, the value is
/// taken once the next match has been drawn, counting that match at weight 1.
pub fn value_at(profile: &Profile, game: &Game, history: &History, selected: Option<Seat>) -> Result<ValueVector> {
    let origin = JointState::replay(profile, history)?;
    let Some(seat) = selected else {
        let chain = JointChain::build_from(profile, game, &[origin], DEFAULT_STATE_CAP)?;
        return Ok(exact_value(&chain, 0));
    };
    if origin.opening {
        return Err(Error::Invalid("no selection happens at the opening".into()));
    }
    let (_, payoff, next) = play_stage(profile, game, &origin, Some(seat))?;
    let chain = JointChain::build_from(profile, game, &[next], DEFAULT_STATE_CAP)?;
    let cont = exact_value(&chain, 0);
    let delta = game.delta();
    Ok(ValueVector(
        PlayerId::ALL.map(|w| &payoff[w.index()] + delta * cont.get(w)),
    ))
}

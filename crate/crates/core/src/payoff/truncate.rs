use alloc::vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{Game, PlayerId};
use crate::rational::{pow, Rational};
use crate::strategy::Profile;

use super::chain::JointChain;

/// Certified interval around one player's value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundPair {
    pub lower: Rational,
    pub upper: Rational,
}

impl BoundPair {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lower <= q && q <= &self.upper
    }
}

/// Range of the discounted payoff `who` can collect from stage `horizon`
/// (0-based) on, when every one of those stages is a match stage.
pub fn tail_bounds(game: &Game, who: PlayerId, horizon: u32) -> BoundPair {
    let delta = game.delta();
    let scale = pow(delta, horizon) * game.params.play_rate(who) / (Rational::one() - delta);
    BoundPair {
        lower: &scale * game.payoffs.s(),
        upper: &scale * game.payoffs.t(),
    }
}

/// Exact expected payoff of the first `horizon` stages from state `from`,
/// plus the tail range, per player.
pub fn truncated_from(chain: &JointChain, game: &Game, from: usize, horizon: u32) -> Result<[BoundPair; 3]> {
    if horizon == 0 {
        return Err(Error::Invalid("truncation horizon must be at least 1".into()));
    }
    let delta = game.delta();
    let mut dist = vec![Rational::zero(); chain.len()];
    dist[from] = Rational::one();
    let mut partial = [Rational::zero(), Rational::zero(), Rational::zero()];
    let mut weight = Rational::one();
    for _ in 0..horizon {
        let mut next = vec![Rational::zero(); chain.len()];
        for (s, mass) in dist.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for t in chain.transitions(s) {
                let p = mass * &t.prob;
                for (k, v) in partial.iter_mut().enumerate() {
                    *v += &weight * &p * &t.payoff[k];
                }
                next[t.next] += p;
            }
        }
        dist = next;
        weight *= delta;
    }
    Ok(PlayerId::ALL.map(|who| {
        let tail = tail_bounds(game, who, horizon);
        BoundPair {
            lower: &partial[who.index()] + tail.lower,
            upper: &partial[who.index()] + tail.upper,
        }
    }))
}

/// Brackets on every player's value from the start of the game.
pub fn truncated_value(profile: &Profile, game: &Game, horizon: u32) -> Result<[BoundPair; 3]> {
    let chain = JointChain::build(profile, game)?;
    truncated_from(&chain, game, 0, horizon)
}

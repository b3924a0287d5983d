use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{Action, Observation, PlayerId, Seat};
use crate::rational::{format_rational, Rational};
use crate::strategy::Profile;

use super::interval::{eta, Interval};
use super::scheme::{TrembleClass, TrembleScheme};

/// Base profile in which every decision trembles: with weight `w` the
/// player mixes uniformly, so the other action has probability `w/2`.
#[derive(Debug, Clone)]
pub struct PerturbedProfile {
    pub base: Profile,
    pub eps: Rational,
    pub scheme: TrembleScheme,
    eta: Interval,
}

/// Probability of one action with its tremble bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionProb {
    pub prob: Interval,
    pub prescribed: Action,
    pub class: TrembleClass,
    pub trembled: bool,
}

pub fn perturb(base: &Profile, eps: &Rational, scheme: &TrembleScheme) -> Result<PerturbedProfile> {
    if *eps <= Rational::zero() || *eps >= Rational::one() {
        return Err(Error::InvalidEpsilon(format_rational(eps)));
    }
    Ok(PerturbedProfile {
        base: base.clone(),
        eps: eps.clone(),
        scheme: scheme.clone(),
        eta: eta(eps),
    })
}

impl PerturbedProfile {
    /// Tremble weight of a class: `ε` or `ε^(1/ε)`.
    pub fn weight(&self, class: TrembleClass) -> Interval {
        match class {
            TrembleClass::Fast => Interval::point(self.eps.clone()),
            TrembleClass::Slow => self.eta.clone(),
        }
    }

    /// Probability that `who` plays `action` after `record`.
    pub fn action_prob(
        &self,
        who: PlayerId,
        record: &[Observation],
        opponent: Option<Seat>,
        action: Action,
    ) -> Result<ActionProb> {
        let prescribed = self
            .base
            .get(who)
            .act_after(record, opponent)
            .ok_or_else(|| Error::Invalid("record is not a valid private history".into()))?;
        let class = self.scheme.class(who, record);
        let half = Rational::new(1.into(), 2.into());
        let off = self.weight(class).scale(&half);
        let trembled = action != prescribed;
        let prob = if trembled { off } else { off.complement() };
        Ok(ActionProb {
            prob,
            prescribed,
            class,
            trembled,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn opening_tremble_is_half_epsilon() {
        let pp = perturb(
            &Profile::uniform("contagious").unwrap(),
            &ratio(1, 10),
            &TrembleScheme::contagion(),
        )
        .unwrap();
        let d = pp.action_prob(PlayerId::X1, &[], None, Action::D).unwrap();
        assert_eq!(d.prob, Interval::point(ratio(1, 20)));
        let c = pp.action_prob(PlayerId::X1, &[], None, Action::C).unwrap();
        assert_eq!(&c.prob + &d.prob, Interval::point(Rational::one()));
    }

    #[test]
    fn cooperative_history_trembles_slowly() {
        let pp = perturb(
            &Profile::uniform("contagious").unwrap(),
            &ratio(1, 10),
            &TrembleScheme::contagion(),
        )
        .unwrap();
        let rec = [Observation::Opening {
            own: Action::C,
            other: Action::C,
        }];
        let d = pp.action_prob(PlayerId::X1, &rec, None, Action::D).unwrap();
        assert_eq!(d.prob, Interval::point(ratio(1, 20_000_000_000)));
    }

    #[test]
    fn epsilon_range() {
        let p = Profile::uniform("sigma").unwrap();
        assert!(perturb(&p, &Rational::one(), &TrembleScheme::enforcement()).is_err());
        assert!(perturb(&p, &Rational::zero(), &TrembleScheme::enforcement()).is_err());
    }
}

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{stage_payoffs, Game, History, PlayerId, Seat, StageOutcome};
use crate::rational::Rational;
use crate::strategy::{Profile, StateId};

pub const DEFAULT_STATE_CAP: usize = 100_000;

/// Automaton states of the three players plus whether the next stage is
/// the opening.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointState {
    pub opening: bool,
    pub x1: StateId,
    pub x2: StateId,
    pub m: StateId,
}

impl JointState {
    pub fn start(profile: &Profile) -> Self {
        JointState {
            opening: true,
            x1: profile.get(PlayerId::X1).initial(),
            x2: profile.get(PlayerId::X2).initial(),
            m: profile.get(PlayerId::M).initial(),
        }
    }

    fn get(&self, who: PlayerId) -> StateId {
        match who {
            PlayerId::X1 => self.x1,
            PlayerId::X2 => self.x2,
            PlayerId::M => self.m,
        }
    }

    fn set(&mut self, who: PlayerId, s: StateId) {
        match who {
            PlayerId::X1 => self.x1 = s,
            PlayerId::X2 => self.x2 = s,
            PlayerId::M => self.m = s,
        }
    }

    /// Every player updates on what it saw of `outcome`, whatever its
    /// strategy would have played.
    pub fn advance(&self, profile: &Profile, outcome: &StageOutcome) -> Result<JointState> {
        let mut next = *self;
        if outcome.is_opening() != self.opening {
            return Err(Error::Invalid("stage outcome does not fit the stage".into()));
        }
        next.opening = false;
        for who in PlayerId::ALL {
            if let Some(obs) = outcome.observe(who) {
                let s = profile
                    .get(who)
                    .step(self.get(who), &obs)
                    .ok_or_else(|| Error::Invalid("observation rejected by automaton".into()))?;
                next.set(who, s);
            }
        }
        Ok(next)
    }

    /// State reached after `history`, on or off the profile's path.
    pub fn replay(profile: &Profile, history: &History) -> Result<JointState> {
        history
            .stages()
            .iter()
            .try_fold(Self::start(profile), |s, o| s.advance(profile, o))
    }
}

/// Outcome, stage payoffs and successor of one stage played from `state`.
/// `selected` must be `None` exactly at the opening.
pub fn play_stage(
    profile: &Profile,
    game: &Game,
    state: &JointState,
    selected: Option<Seat>,
) -> Result<(StageOutcome, [Rational; 3], JointState)> {
    let u = |own, other| stage_payoffs(&game.payoffs, own, other);
    let (outcome, payoff) = match (state.opening, selected) {
        (true, None) => {
            let a1 = profile.get(PlayerId::X1).act(state.x1, None);
            let a2 = profile.get(PlayerId::X2).act(state.x2, None);
            (
                StageOutcome::Opening { x1: a1, x2: a2 },
                [u(a1, a2), u(a2, a1), Rational::zero()],
            )
        }
        (false, Some(seat)) => {
            let x = profile.get(seat.player()).act(state.get(seat.player()), None);
            let m = profile.get(PlayerId::M).act(state.m, Some(seat));
            let mut payoff = [Rational::zero(), Rational::zero(), u(m, x)];
            payoff[seat.index()] = u(x, m);
            (StageOutcome::Match { selected: seat, x, m }, payoff)
        }
        _ => return Err(Error::Invalid("selection given at the opening or missing later".into())),
    };
    let next = state.advance(profile, &outcome)?;
    Ok((outcome, payoff, next))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub prob: Rational,
    pub next: usize,
    /// Indexed by [`PlayerId::index`]; an unmatched player gets 0.
    pub payoff: [Rational; 3],
    pub outcome: StageOutcome,
}

/// Reachable product of the three automata under the matching process.
#[derive(Debug, Clone)]
pub struct JointChain {
    states: Vec<JointState>,
    index: BTreeMap<JointState, usize>,
    transitions: Vec<Vec<Transition>>,
    discount: Rational,
}

impl JointChain {
    /// Chain reachable from the start of the game.
    pub fn build(profile: &Profile, game: &Game) -> Result<Self> {
        Self::build_from(profile, game, &[JointState::start(profile)], DEFAULT_STATE_CAP)
    }

    /// Chain reachable from any of `roots`; `roots[i]` gets index `i` when the
    /// roots are distinct.
    pub fn build_from(profile: &Profile, game: &Game, roots: &[JointState], cap: usize) -> Result<Self> {
        let mut chain = JointChain {
            states: Vec::new(),
            index: BTreeMap::new(),
            transitions: Vec::new(),
            discount: game.delta().clone(),
        };
        let mut queue = VecDeque::new();
        for root in roots {
            chain.intern(*root, &mut queue, profile, cap)?;
        }
        let choices: Vec<(Seat, Rational)> = Seat::ALL
            .iter()
            .map(|&s| (s, game.params.seat_prob(s)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        while let Some(i) = queue.pop_front() {
            let state = chain.states[i];
            let mut out = Vec::new();
            if state.opening {
                let (outcome, payoff, next) = play_stage(profile, game, &state, None)?;
                let next = chain.intern(next, &mut queue, profile, cap)?;
                out.push(Transition {
                    prob: Rational::one(),
                    next,
                    payoff,
                    outcome,
                });
            } else {
                for (seat, prob) in &choices {
                    let (outcome, payoff, next) = play_stage(profile, game, &state, Some(*seat))?;
                    let next = chain.intern(next, &mut queue, profile, cap)?;
                    out.push(Transition {
                        prob: prob.clone(),
                        next,
                        payoff,
                        outcome,
                    });
                }
            }
            chain.transitions[i] = out;
        }
        Ok(chain)
    }

    fn intern(&mut self, s: JointState, queue: &mut VecDeque<usize>, profile: &Profile, cap: usize) -> Result<usize> {
        if let Some(&i) = self.index.get(&s) {
            return Ok(i);
        }
        if self.states.len() >= cap {
            return Err(Error::StateCapExceeded {
                profile: profile.describe(),
                cap,
            });
        }
        let i = self.states.len();
        self.states.push(s);
        self.index.insert(s, i);
        self.transitions.push(Vec::new());
        queue.push_back(i);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn discount(&self) -> &Rational {
        &self.discount
    }

    pub fn state(&self, i: usize) -> &JointState {
        &self.states[i]
    }

    pub fn index_of(&self, s: &JointState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn transitions(&self, i: usize) -> &[Transition] {
        &self.transitions[i]
    }

    /// Expected stage payoff at state `i`.
    pub fn expected_payoff(&self, i: usize) -> [Rational; 3] {
        let mut r = [Rational::zero(), Rational::zero(), Rational::zero()];
        for t in &self.transitions[i] {
            for (k, v) in r.iter_mut().enumerate() {
                *v += &t.prob * &t.payoff[k];
            }
        }
        r
    }

    /// States from which every path stays inside the set, i.e. the closed
    /// classes of the chain.
    pub fn closed_states(&self) -> Vec<usize> {
        let sccs = super::solve::sccs(self);
        let mut comp = alloc::vec![0usize; self.len()];
        for (c, members) in sccs.iter().enumerate() {
            for &s in members {
                comp[s] = c;
            }
        }
        let mut out = Vec::new();
        for members in &sccs {
            let closed = members
                .iter()
                .all(|&s| self.transitions[s].iter().all(|t| comp[t.next] == comp[s]));
            if closed {
                out.extend(members.iter().copied());
            }
        }
        out.sort_unstable();
        out
    }
}

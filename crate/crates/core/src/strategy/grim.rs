use core::fmt;

use crate::game::{Action, Observation, PlayerId, Seat};

use super::automaton::Behavior;

/// Per-relationship punishment flags. Flags are only ever added.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GrimState {
    bits: u8,
}

impl GrimState {
    pub fn new() -> Self {
        GrimState::default()
    }

    pub fn defects_against(&self, who: PlayerId) -> bool {
        self.bits & (1 << who.index()) != 0
    }

    pub fn insert(&mut self, who: PlayerId) {
        self.bits |= 1 << who.index();
    }

    /// True when every opponent of `owner` is flagged.
    pub fn is_full(&self, owner: PlayerId) -> bool {
        owner.opponents().iter().all(|o| self.defects_against(*o))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &GrimState) -> bool {
        self.bits & !other.bits == 0
    }

    /// One match against `opponent`: a `D` received flags every opponent of
    /// `owner`; otherwise a `D` played flags only that opponent.
    pub fn record(&mut self, owner: PlayerId, opponent: PlayerId, opp: Action, own: Action) {
        if opp == Action::D {
            for o in owner.opponents() {
                self.insert(o);
            }
        } else if own == Action::D {
            self.insert(opponent);
        }
    }

    /// Applies the contagion rules for one observation of `owner`.
    pub fn observe(&mut self, owner: PlayerId, obs: &Observation) {
        match *obs {
            Observation::Opening { own, other } => {
                let opponent = owner.opponents()[0];
                self.record(owner, opponent, other, own);
            }
            Observation::Played { own, m } => self.record(owner, PlayerId::M, m, own),
            Observation::Met { opponent, opp, own } => self.record(owner, opponent.player(), opp, own),
            Observation::Idle => {}
        }
    }

    /// Action against `opponent`.
    pub fn act(&self, opponent: PlayerId) -> Action {
        if self.defects_against(opponent) {
            Action::D
        } else {
            Action::C
        }
    }
}

impl fmt::Debug for GrimState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut set = f.debug_set();
        for p in PlayerId::ALL {
            if self.defects_against(p) {
                set.entry(&p);
            }
        }
        set.finish()
    }
}

/// Opponent the owner faces: the other `X` at stage 1, `M` afterwards, or
/// the seat `M` is matched with.
pub(crate) fn facing(owner: PlayerId, started: bool, opponent: Option<Seat>) -> PlayerId {
    match owner {
        PlayerId::M => opponent.expect("M always acts against a seat").player(),
        _ if started => PlayerId::M,
        _ => owner.opponents()[0],
    }
}

/// Contagious grim trigger.
#[derive(Debug, Clone, Copy)]
pub struct Contagious {
    pub owner: PlayerId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ContagiousState {
    started: bool,
    pub grim: GrimState,
}

impl Behavior for Contagious {
    type State = ContagiousState;

    fn owner(&self) -> PlayerId {
        self.owner
    }

    fn initial(&self) -> ContagiousState {
        ContagiousState {
            started: self.owner == PlayerId::M,
            grim: GrimState::new(),
        }
    }

    fn act(&self, s: &ContagiousState, opponent: Option<Seat>) -> Action {
        s.grim.act(facing(self.owner, s.started, opponent))
    }

    fn step(&self, s: &ContagiousState, obs: &Observation) -> ContagiousState {
        let mut next = *s;
        next.grim.observe(self.owner, obs);
        next.started = true;
        next
    }
}

/// Defects at every decision.
#[derive(Debug, Clone, Copy)]
pub struct AllD {
    pub owner: PlayerId,
}

impl Behavior for AllD {
    type State = ();

    fn owner(&self) -> PlayerId {
        self.owner
    }

    fn initial(&self) {}

    fn act(&self, _: &(), _: Option<Seat>) -> Action {
        Action::D
    }

    fn step(&self, _: &(), _: &Observation) {}
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::{C, D};

    #[test]
    fn received_defection_spreads() {
        let mut g = GrimState::new();
        g.record(PlayerId::M, PlayerId::X1, D, C);
        assert!(g.defects_against(PlayerId::X1));
        assert!(g.defects_against(PlayerId::X2));
        assert!(g.is_full(PlayerId::M));
    }

    #[test]
    fn own_defection_stays_local() {
        let mut g = GrimState::new();
        g.record(PlayerId::M, PlayerId::X1, C, D);
        assert_eq!(g.act(PlayerId::X1), D);
        assert_eq!(g.act(PlayerId::X2), C);
    }

    #[test]
    fn opening_flags_the_other_x() {
        let mut g = GrimState::new();
        g.observe(PlayerId::X1, &Observation::Opening { own: D, other: C });
        assert!(g.defects_against(PlayerId::X2));
        assert!(!g.defects_against(PlayerId::M));
        g.observe(PlayerId::X1, &Observation::Opening { own: C, other: D });
        assert!(g.defects_against(PlayerId::M));
    }
}

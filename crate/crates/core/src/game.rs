//! Stage game, matching process, global histories and private projections.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, ratio, Rational};

/// A stage-game action. `C < D` fixes the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    C,
    D,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::C, Action::D];

    pub fn other(self) -> Action {
        match self {
            Action::C => Action::D,
            Action::D => Action::C,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Action::C => 'C',
            Action::D => 'D',
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlayerId {
    X1,
    X2,
    M,
}

impl PlayerId {
    pub const ALL: [PlayerId; 3] = [PlayerId::X1, PlayerId::X2, PlayerId::M];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn seat(self) -> Option<Seat> {
        match self {
            PlayerId::X1 => Some(Seat::X1),
            PlayerId::X2 => Some(Seat::X2),
            PlayerId::M => None,
        }
    }

    /// The players this one can ever meet.
    pub fn opponents(self) -> [PlayerId; 2] {
        match self {
            PlayerId::X1 => [PlayerId::X2, PlayerId::M],
            PlayerId::X2 => [PlayerId::X1, PlayerId::M],
            PlayerId::M => [PlayerId::X1, PlayerId::X2],
        }
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayerId::X1 => "X1",
            PlayerId::X2 => "X2",
            PlayerId::M => "M",
        })
    }
}

/// One of the two players that `M` can be matched with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Seat {
    X1,
    X2,
}

impl Seat {
    pub const ALL: [Seat; 2] = [Seat::X1, Seat::X2];

    pub fn player(self) -> PlayerId {
        match self {
            Seat::X1 => PlayerId::X1,
            Seat::X2 => PlayerId::X2,
        }
    }

    pub fn other(self) -> Seat {
        match self {
            Seat::X1 => Seat::X2,
            Seat::X2 => Seat::X1,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.player().fmt(f)
    }
}

/// Row player's payoffs of the symmetric 2×2 stage game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffMatrix {
    t: Rational,
    r: Rational,
    p: Rational,
    s: Rational,
}

impl PayoffMatrix {
    /// Validates `T > R > P > S` and `2R > T + S`.
    pub fn new(t: Rational, r: Rational, p: Rational, s: Rational) -> Result<Self> {
        let m = Self::unchecked(t, r, p, s);
        m.validate()?;
        Ok(m)
    }

    /// Skips validation; only the discount-threshold analysis accepts such
    /// matrices.
    pub fn unchecked(t: Rational, r: Rational, p: Rational, s: Rational) -> Self {
        PayoffMatrix { t, r, p, s }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > self.r && self.r > self.p && self.p > self.s) {
            return Err(Error::InvalidPayoffs(format!(
                "need T > R > P > S, got T={} R={} P={} S={}",
                format_rational(&self.t),
                format_rational(&self.r),
                format_rational(&self.p),
                format_rational(&self.s)
            )));
        }
        if &self.r + &self.r <= &self.t + &self.s {
            return Err(Error::InvalidPayoffs("need 2R > T + S".into()));
        }
        Ok(())
    }

    /// T=100, R=75, P=45, S=10.
    pub fn standard() -> Self {
        Self::unchecked(int(100), int(75), int(45), int(10))
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }
    pub fn r(&self) -> &Rational {
        &self.r
    }
    pub fn p(&self) -> &Rational {
        &self.p
    }
    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn max_payoff(&self) -> &Rational {
        &self.t
    }

    pub fn min_payoff(&self) -> &Rational {
        &self.s
    }
}

/// Payoff of the player choosing `own` against `other`.
pub fn stage_payoffs(m: &PayoffMatrix, own: Action, other: Action) -> Rational {
    match (own, other) {
        (Action::C, Action::C) => m.r.clone(),
        (Action::C, Action::D) => m.s.clone(),
        (Action::D, Action::C) => m.t.clone(),
        (Action::D, Action::D) => m.p.clone(),
    }
}

/// Discount factor and the probability that `M` meets `X1` at a stage
/// `t >= 2` (it meets `X2` otherwise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameParams {
    delta: Rational,
    match_prob: Rational,
}

impl GameParams {
    /// `0 <= delta < 1` and `0 <= match_prob <= 1`. `delta = 0` evaluates the
    /// opening stage alone; the boundary matching probabilities make the
    /// matching deterministic.
    pub fn new(delta: Rational, match_prob: Rational) -> Result<Self> {
        if delta < Rational::zero() || delta >= Rational::one() {
            return Err(Error::InvalidParams(format!(
                "discount factor must lie in [0,1), got {}",
                format_rational(&delta)
            )));
        }
        if match_prob < Rational::zero() || match_prob > Rational::one() {
            return Err(Error::InvalidParams(format!(
                "matching probability must lie in [0,1], got {}",
                format_rational(&match_prob)
            )));
        }
        Ok(GameParams { delta, match_prob })
    }

    /// δ = 3/4 with symmetric matching.
    pub fn standard() -> Self {
        GameParams {
            delta: ratio(3, 4),
            match_prob: ratio(1, 2),
        }
    }

    pub fn with_delta(delta: Rational) -> Result<Self> {
        Self::new(delta, ratio(1, 2))
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn match_prob(&self) -> &Rational {
        &self.match_prob
    }

    /// Probability that `seat` is the one matched with `M` at a stage `t >= 2`.
    pub fn seat_prob(&self, seat: Seat) -> Rational {
        match seat {
            Seat::X1 => self.match_prob.clone(),
            Seat::X2 => Rational::one() - &self.match_prob,
        }
    }

    /// Per-stage matching rate of `who` from stage 2 on.
    pub fn play_rate(&self, who: PlayerId) -> Rational {
        match who.seat() {
            Some(seat) => self.seat_prob(seat),
            None => Rational::one(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.match_prob == ratio(1, 2)
    }
}

/// Stage game plus discounting and matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    pub payoffs: PayoffMatrix,
    pub params: GameParams,
}

impl Game {
    pub fn new(payoffs: PayoffMatrix, params: GameParams) -> Self {
        Game { payoffs, params }
    }

    /// Table values with δ = 3/4 and symmetric matching.
    pub fn standard() -> Self {
        Game::new(PayoffMatrix::standard(), GameParams::standard())
    }

    pub fn with_delta(&self, delta: Rational) -> Result<Self> {
        let params = GameParams::new(delta, self.params.match_prob().clone())?;
        Ok(Game::new(self.payoffs.clone(), params))
    }

    pub fn delta(&self) -> &Rational {
        self.params.delta()
    }

    pub fn payoff(&self, own: Action, other: Action) -> Rational {
        stage_payoffs(&self.payoffs, own, other)
    }
}

/// Outcome of one stage: the `X1`–`X2` opening at stage 1, a match between
/// `M` and the selected `X` afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageOutcome {
    Opening { x1: Action, x2: Action },
    Match { selected: Seat, x: Action, m: Action },
}

impl StageOutcome {
    pub fn is_opening(&self) -> bool {
        matches!(self, StageOutcome::Opening { .. })
    }

    /// All four openings, in canonical order.
    pub fn openings() -> impl Iterator<Item = StageOutcome> {
        Action::ALL
            .into_iter()
            .flat_map(|x1| Action::ALL.into_iter().map(move |x2| StageOutcome::Opening { x1, x2 }))
    }

    /// All eight matches, in canonical order.
    pub fn matches() -> impl Iterator<Item = StageOutcome> {
        Seat::ALL.into_iter().flat_map(|selected| {
            Action::ALL.into_iter().flat_map(move |x| {
                Action::ALL
                    .into_iter()
                    .map(move |m| StageOutcome::Match { selected, x, m })
            })
        })
    }

    /// What `who` observes of this outcome; `None` when `M` faces the opening.
    pub fn observe(&self, who: PlayerId) -> Option<Observation> {
        match (*self, who) {
            (StageOutcome::Opening { x1, x2 }, PlayerId::X1) => Some(Observation::Opening { own: x1, other: x2 }),
            (StageOutcome::Opening { x1, x2 }, PlayerId::X2) => Some(Observation::Opening { own: x2, other: x1 }),
            (StageOutcome::Opening { .. }, PlayerId::M) => None,
            (StageOutcome::Match { selected, x, m }, PlayerId::M) => Some(Observation::Met {
                opponent: selected,
                opp: x,
                own: m,
            }),
            (StageOutcome::Match { selected, x, m }, who) => {
                if selected.player() == who {
                    Some(Observation::Played { own: x, m })
                } else {
                    Some(Observation::Idle)
                }
            }
        }
    }
}

/// A global history: empty, or one opening followed by matches.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct History(Vec<StageOutcome>);

impl History {
    pub fn empty() -> Self {
        History(Vec::new())
    }

    pub fn new(stages: Vec<StageOutcome>) -> Result<Self> {
        for (i, stage) in stages.iter().enumerate() {
            if stage.is_opening() != (i == 0) {
                return Err(Error::Invalid(format!(
                    "stage {} of a history must be {}",
                    i + 1,
                    if i == 0 { "an opening" } else { "a match" }
                )));
            }
        }
        Ok(History(stages))
    }

    pub fn opening(x1: Action, x2: Action) -> Self {
        History(vec![StageOutcome::Opening { x1, x2 }])
    }

    /// Appends a match. Panics if the history has no opening yet.
    pub fn then(mut self, selected: Seat, x: Action, m: Action) -> Self {
        assert!(!self.0.is_empty(), "a match cannot precede the opening");
        self.0.push(StageOutcome::Match { selected, x, m });
        self
    }

    pub fn push(&mut self, outcome: StageOutcome) -> Result<()> {
        if outcome.is_opening() != self.0.is_empty() {
            return Err(Error::Invalid("misplaced stage outcome".into()));
        }
        self.0.push(outcome);
        Ok(())
    }

    pub fn stages(&self) -> &[StageOutcome] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, len: usize) -> History {
        History(self.0[..len].to_vec())
    }

    pub fn project(&self, who: PlayerId) -> PrivateHistory {
        private_projection(self, who)
    }

    /// Every history with exactly `stages` stages, in canonical order.
    pub fn all_with_len(stages: usize) -> Vec<History> {
        let mut out = vec![History::empty()];
        for i in 0..stages {
            let choices: Vec<StageOutcome> = if i == 0 {
                StageOutcome::openings().collect()
            } else {
                StageOutcome::matches().collect()
            };
            out = out
                .into_iter()
                .flat_map(|h| {
                    choices.iter().map(move |c| {
                        let mut next = h.clone();
                        next.0.push(*c);
                        next
                    })
                })
                .collect();
        }
        out
    }
}

/// One slot of a [`HistoryPattern`]: concrete, or the wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot<T> {
    Is(T),
    Any,
}

impl<T: Copy + PartialEq> Slot<T> {
    pub fn accepts(&self, value: T) -> bool {
        match self {
            Slot::Is(v) => *v == value,
            Slot::Any => true,
        }
    }

    fn expand(&self, all: &[T]) -> Vec<T> {
        match self {
            Slot::Is(v) => vec![*v],
            Slot::Any => all.to_vec(),
        }
    }

    fn is_wild(&self) -> bool {
        matches!(self, Slot::Any)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StagePattern {
    Opening(Slot<Action>, Slot<Action>),
    Match(Slot<Seat>, Slot<Action>, Slot<Action>),
}

impl StagePattern {
    pub fn accepts(&self, outcome: &StageOutcome) -> bool {
        match (self, outcome) {
            (StagePattern::Opening(a, b), StageOutcome::Opening { x1, x2 }) => a.accepts(*x1) && b.accepts(*x2),
            (StagePattern::Match(sel, x, m), StageOutcome::Match { selected, x: ax, m: am }) => {
                sel.accepts(*selected) && x.accepts(*ax) && m.accepts(*am)
            }
            _ => false,
        }
    }

    fn wildcards(&self) -> (u32, u32) {
        match self {
            StagePattern::Opening(a, b) => (0, a.is_wild() as u32 + b.is_wild() as u32),
            StagePattern::Match(sel, x, m) => (sel.is_wild() as u32, x.is_wild() as u32 + m.is_wild() as u32),
        }
    }

    fn expand(&self) -> Vec<StageOutcome> {
        match self {
            StagePattern::Opening(a, b) => {
                let mut out = Vec::new();
                for x1 in a.expand(&Action::ALL) {
                    for x2 in b.expand(&Action::ALL) {
                        out.push(StageOutcome::Opening { x1, x2 });
                    }
                }
                out
            }
            StagePattern::Match(sel, x, m) => {
                let mut out = Vec::new();
                for selected in sel.expand(&Seat::ALL) {
                    for ax in x.expand(&Action::ALL) {
                        for am in m.expand(&Action::ALL) {
                            out.push(StageOutcome::Match { selected, x: ax, m: am });
                        }
                    }
                }
                out
            }
        }
    }
}

impl From<StageOutcome> for StagePattern {
    fn from(o: StageOutcome) -> Self {
        match o {
            StageOutcome::Opening { x1, x2 } => StagePattern::Opening(Slot::Is(x1), Slot::Is(x2)),
            StageOutcome::Match { selected, x, m } => StagePattern::Match(Slot::Is(selected), Slot::Is(x), Slot::Is(m)),
        }
    }
}

/// A history in which the selected player may be `Xz` and any action `Z`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HistoryPattern(Vec<StagePattern>);

impl HistoryPattern {
    pub fn new(stages: Vec<StagePattern>) -> Result<Self> {
        for (i, stage) in stages.iter().enumerate() {
            if matches!(stage, StagePattern::Opening(..)) != (i == 0) {
                return Err(Error::Invalid(format!("misplaced stage pattern at stage {}", i + 1)));
            }
        }
        Ok(HistoryPattern(stages))
    }

    pub fn stages(&self) -> &[StagePattern] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matches(&self, h: &History) -> bool {
        self.0.len() == h.len() && self.0.iter().zip(h.stages()).all(|(p, o)| p.accepts(o))
    }

    /// `(player wildcards, action wildcards)`.
    pub fn wildcard_counts(&self) -> (u32, u32) {
        self.0.iter().fold((0, 0), |(z, a), s| {
            let (dz, da) = s.wildcards();
            (z + dz, a + da)
        })
    }

    pub fn is_concrete(&self) -> bool {
        self.wildcard_counts() == (0, 0)
    }

    /// The concrete history, when there are no wildcards.
    pub fn to_history(&self) -> Option<History> {
        let mut stages = Vec::with_capacity(self.0.len());
        for s in &self.0 {
            let mut ex = s.expand();
            if ex.len() != 1 {
                return None;
            }
            stages.push(ex.pop()?);
        }
        Some(History(stages))
    }
}

impl From<&History> for HistoryPattern {
    fn from(h: &History) -> Self {
        HistoryPattern(h.stages().iter().map(|o| StagePattern::from(*o)).collect())
    }
}

/// Cartesian expansion of every `z` over {X1, X2} and every `Z` over {C, D}.
pub fn expand_pattern(p: &HistoryPattern) -> BTreeSet<History> {
    let mut out = vec![History::empty()];
    for stage in p.stages() {
        let choices = stage.expand();
        out = out
            .into_iter()
            .flat_map(|h| {
                choices.iter().map(move |c| {
                    let mut next = h.clone();
                    next.0.push(*c);
                    next
                })
            })
            .collect();
    }
    out.into_iter().collect()
}

/// A single stage as seen by one player, always in the owner's frame (own
/// action first for `X` players).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observation {
    /// Stage 1, seen by an `X` player.
    Opening { own: Action, other: Action },
    /// An `X` player not selected this stage.
    Idle,
    /// An `X` player that met `M`.
    Played { own: Action, m: Action },
    /// `M`'s view of its match.
    Met { opponent: Seat, opp: Action, own: Action },
}

impl Observation {
    /// The owner's own action, if it acted this stage.
    pub fn own_action(&self) -> Option<Action> {
        match self {
            Observation::Opening { own, .. } | Observation::Played { own, .. } | Observation::Met { own, .. } => {
                Some(*own)
            }
            Observation::Idle => None,
        }
    }

    /// Every observation `owner` can receive at a stage; `opening` selects
    /// stage 1 for `X` players.
    pub fn alphabet(owner: PlayerId, opening: bool) -> Vec<Observation> {
        let mut out = Vec::new();
        match owner {
            PlayerId::M => {
                for opponent in Seat::ALL {
                    for opp in Action::ALL {
                        for own in Action::ALL {
                            out.push(Observation::Met { opponent, opp, own });
                        }
                    }
                }
            }
            _ if opening => {
                for own in Action::ALL {
                    for other in Action::ALL {
                        out.push(Observation::Opening { own, other });
                    }
                }
            }
            _ => {
                out.push(Observation::Idle);
                for own in Action::ALL {
                    for m in Action::ALL {
                        out.push(Observation::Played { own, m });
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observation::Opening { own, other } => write!(f, "{own}{other}"),
            Observation::Idle => f.write_str("-"),
            Observation::Played { own, m } => write!(f, "M{own}{m}"),
            Observation::Met { opponent, opp, own } => write!(f, "{opponent}{opp}{own}"),
        }
    }
}

/// The part of a history that one player observes. `M` has no entry for
/// stage 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrivateHistory {
    pub owner: PlayerId,
    pub entries: Vec<Observation>,
}

impl PrivateHistory {
    pub fn new(owner: PlayerId, entries: Vec<Observation>) -> Self {
        PrivateHistory { owner, entries }
    }

    /// Number of global stages this private history spans.
    pub fn stages(&self) -> usize {
        match self.owner {
            PlayerId::M => self.entries.len() + 1,
            _ => self.entries.len(),
        }
    }

    /// Checks that every entry is one the owner can receive at that stage.
    pub fn is_well_formed(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, e)| {
            let opening = self.owner != PlayerId::M && i == 0;
            Observation::alphabet(self.owner, opening).contains(e)
        })
    }
}

impl fmt::Display for PrivateHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.owner)?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// Deterministic projection of `h` onto what `who` observes.
pub fn private_projection(h: &History, who: PlayerId) -> PrivateHistory {
    PrivateHistory {
        owner: who,
        entries: h.stages().iter().filter_map(|o| o.observe(who)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::{C, D};

    #[test]
    fn stage_payoffs_follow_the_table() {
        let m = PayoffMatrix::standard();
        assert_eq!(stage_payoffs(&m, C, C), int(75));
        assert_eq!(stage_payoffs(&m, D, C), int(100));
        assert_eq!(stage_payoffs(&m, C, D), int(10));
        assert_eq!(stage_payoffs(&m, D, D), int(45));
    }

    #[test]
    fn matrix_validation() {
        assert!(PayoffMatrix::new(int(100), int(75), int(45), int(10)).is_ok());
        assert!(PayoffMatrix::new(int(75), int(100), int(45), int(10)).is_err());
        // T + S >= 2R
        assert!(PayoffMatrix::new(int(150), int(75), int(45), int(10)).is_err());
        assert!(PayoffMatrix::new(int(100), int(75), int(75), int(10)).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(GameParams::new(ratio(3, 4), ratio(1, 2)).is_ok());
        assert!(GameParams::new(int(1), ratio(1, 2)).is_err());
        assert!(GameParams::new(ratio(-1, 2), ratio(1, 2)).is_err());
        assert!(GameParams::new(ratio(1, 2), ratio(3, 2)).is_err());
        assert!(GameParams::new(int(0), int(1)).is_ok());
    }

    #[test]
    fn projection_for_x_players() {
        let h = History::opening(C, C).then(Seat::X1, C, C).then(Seat::X2, D, C);
        let p1 = private_projection(&h, PlayerId::X1);
        assert_eq!(
            p1.entries,
            vec![
                Observation::Opening { own: C, other: C },
                Observation::Played { own: C, m: C },
                Observation::Idle
            ]
        );
        let p2 = private_projection(&History::opening(D, C), PlayerId::X2);
        assert_eq!(p2.entries, vec![Observation::Opening { own: C, other: D }]);
    }

    #[test]
    fn projection_for_m_skips_the_opening() {
        let h = History::opening(C, C).then(Seat::X1, C, C).then(Seat::X2, D, C);
        let pm = private_projection(&h, PlayerId::M);
        assert_eq!(
            pm.entries,
            vec![
                Observation::Met {
                    opponent: Seat::X1,
                    opp: C,
                    own: C
                },
                Observation::Met {
                    opponent: Seat::X2,
                    opp: D,
                    own: C
                }
            ]
        );
        assert_eq!(pm.stages(), 3);
    }

    #[test]
    fn history_shape_is_enforced() {
        assert!(History::new(vec![StageOutcome::Match {
            selected: Seat::X1,
            x: C,
            m: C
        }])
        .is_err());
        assert!(History::new(vec![
            StageOutcome::Opening { x1: C, x2: C },
            StageOutcome::Opening { x1: C, x2: C }
        ])
        .is_err());
        assert_eq!(History::all_with_len(3).len(), 4 * 8 * 8);
    }
}

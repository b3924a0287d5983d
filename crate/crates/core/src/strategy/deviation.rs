use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::game::{expand_pattern, Action, HistoryPattern, Observation, PlayerId, PrivateHistory, Seat};

use super::automaton::{compile, Behavior, StateId, StrategyAutomaton};

/// What the deviator does after the trigger at stages without an override.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Continuation {
    /// Keep following the base strategy (which has seen the deviation).
    Conform,
    AllD,
    /// `C` until the first stage the deviator sits out, `D` from then on.
    PersistentC,
}

impl fmt::Display for Continuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Continuation::Conform => "conform",
            Continuation::AllD => "all-d",
            Continuation::PersistentC => "persistent-c",
        })
    }
}

/// The information set where a deviation starts: a set of private records
/// of the deviator, plus `M`'s current opponent when the deviator is `M`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Trigger {
    pub records: BTreeSet<Vec<Observation>>,
    pub opponent: Option<Seat>,
}

impl Trigger {
    /// The first decision of the game.
    pub fn root() -> Self {
        Trigger::at(Vec::new(), None)
    }

    pub fn never() -> Self {
        Trigger {
            records: BTreeSet::new(),
            opponent: None,
        }
    }

    pub fn at(record: Vec<Observation>, opponent: Option<Seat>) -> Self {
        let mut records = BTreeSet::new();
        records.insert(record);
        Trigger { records, opponent }
    }

    /// Every record `owner` could hold after a history matching `pattern`.
    pub fn from_pattern(pattern: &HistoryPattern, owner: PlayerId, opponent: Option<Seat>) -> Self {
        let records = expand_pattern(pattern)
            .iter()
            .map(|h| h.project(owner).entries)
            .collect();
        Trigger { records, opponent }
    }

    fn fires(&self, record: &[Observation], opponent: Option<Seat>) -> bool {
        self.records.contains(record)
            && match (self.opponent, opponent) {
                (Some(want), Some(got)) => want == got,
                _ => true,
            }
    }

    fn could_extend(&self, record: &[Observation]) -> bool {
        self.records.iter().any(|r| r.starts_with(record))
    }
}

/// Deviation from a base strategy starting at a trigger. `overrides` maps a
/// stage offset from the trigger (0 = trigger stage) to a forced action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeviationPlan {
    pub trigger: Trigger,
    pub overrides: BTreeMap<u32, Action>,
    pub continuation: Continuation,
}

impl DeviationPlan {
    pub fn new(
        trigger: Trigger,
        overrides: impl IntoIterator<Item = (u32, Action)>,
        continuation: Continuation,
    ) -> Self {
        DeviationPlan {
            trigger,
            overrides: overrides.into_iter().collect(),
            continuation,
        }
    }

    /// Forced actions at consecutive offsets starting at the trigger.
    pub fn sequence(trigger: Trigger, actions: &[Action], continuation: Continuation) -> Self {
        Self::new(
            trigger,
            actions.iter().enumerate().map(|(i, a)| (i as u32, *a)),
            continuation,
        )
    }

    /// Offset past which the plan only applies its continuation.
    fn horizon(&self) -> u32 {
        self.overrides.keys().next_back().map_or(0, |k| k + 1)
    }

    pub fn describe(&self) -> String {
        let ov: Vec<String> = self.overrides.iter().map(|(k, a)| format!("+{k}:{a}")).collect();
        format!("overrides [{}] then {}", ov.join(","), self.continuation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Phase {
    Watching(Vec<Observation>),
    Missed,
    Active { offset: u32, idle_seen: bool },
}

struct Deviating<'a> {
    base: &'a StrategyAutomaton,
    plan: &'a DeviationPlan,
    cap: u32,
}

impl Deviating<'_> {
    fn plan_action(&self, offset: u32, idle_seen: bool, base_action: Action) -> Action {
        if let Some(a) = self.plan.overrides.get(&offset) {
            return *a;
        }
        match self.plan.continuation {
            Continuation::Conform => base_action,
            Continuation::AllD => Action::D,
            Continuation::PersistentC if idle_seen => Action::D,
            Continuation::PersistentC => Action::C,
        }
    }
}

fn acted_against(obs: &Observation) -> Option<Option<Seat>> {
    match obs {
        Observation::Idle => None,
        Observation::Met { opponent, .. } => Some(Some(*opponent)),
        _ => Some(None),
    }
}

impl Behavior for Deviating<'_> {
    type State = (StateId, Phase);

    fn owner(&self) -> PlayerId {
        self.base.owner()
    }

    fn initial(&self) -> Self::State {
        let phase = if self.plan.trigger.could_extend(&[]) {
            Phase::Watching(Vec::new())
        } else {
            Phase::Missed
        };
        (self.base.initial(), phase)
    }

    fn act(&self, (base, phase): &Self::State, opponent: Option<Seat>) -> Action {
        let base_action = self.base.act(*base, opponent);
        match phase {
            Phase::Watching(rec) if self.plan.trigger.fires(rec, opponent) => self.plan_action(0, false, base_action),
            Phase::Active { offset, idle_seen } => self.plan_action(*offset, *idle_seen, base_action),
            _ => base_action,
        }
    }

    fn step(&self, (base, phase): &Self::State, obs: &Observation) -> Self::State {
        let next_base = self
            .base
            .step(*base, obs)
            .expect("observation valid for the base automaton");
        let next_phase = match phase {
            Phase::Watching(rec) => match acted_against(obs) {
                Some(opp) if self.plan.trigger.fires(rec, opp) => Phase::Active {
                    offset: 1.min(self.cap),
                    idle_seen: false,
                },
                _ => {
                    let mut rec = rec.clone();
                    rec.push(*obs);
                    if self.plan.trigger.could_extend(&rec) {
                        Phase::Watching(rec)
                    } else {
                        Phase::Missed
                    }
                }
            },
            Phase::Missed => Phase::Missed,
            Phase::Active { offset, idle_seen } => Phase::Active {
                offset: (offset + 1).min(self.cap),
                idle_seen: *idle_seen || *obs == Observation::Idle,
            },
        };
        (next_base, next_phase)
    }
}

/// Composite automaton: `base` until the trigger fires, then the plan. The
/// result carries a warning when no trigger record is a well-formed private
/// history of the owner.
pub fn apply_deviation(base: &StrategyAutomaton, plan: &DeviationPlan) -> StrategyAutomaton {
    let owner = base.owner();
    let reachable = plan
        .trigger
        .records
        .iter()
        .any(|r| PrivateHistory::new(owner, r.clone()).is_well_formed());
    let warning = (!reachable).then(|| format!("trigger for {owner} can never fire"));
    let behavior = Deviating {
        base,
        plan,
        cap: plan.horizon().max(1),
    };
    let name = format!("{}+dev({})", base.name(), plan.describe());
    compile(&behavior, name).with_warning(warning)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{contagious, sigma};
    use alloc::vec;
    use Action::{C, D};
    use Observation::{Idle, Opening, Played};

    #[test]
    fn never_firing_trigger_is_the_identity() {
        let base = sigma(PlayerId::X1);
        let plan = DeviationPlan::new(Trigger::never(), [(0, D)], Continuation::AllD);
        let dev = apply_deviation(&base, &plan);
        assert!(dev.warning().is_some());
        assert!(dev.behaves_like(&base));
    }

    #[test]
    fn all_d_from_the_root() {
        let base = sigma(PlayerId::X1);
        let dev = apply_deviation(&base, &DeviationPlan::new(Trigger::root(), [], Continuation::AllD));
        assert!(dev.warning().is_none());
        assert_eq!(dev.act_after(&[], None), Some(D));
        let rec = [Opening { own: D, other: C }, Played { own: D, m: C }, Idle];
        assert_eq!(dev.act_after(&rec, None), Some(D));
    }

    #[test]
    fn persistent_c_turns_after_sitting_out() {
        let base = contagious(PlayerId::X1);
        let start = vec![Opening { own: C, other: D }];
        let plan = DeviationPlan::new(Trigger::at(start.clone(), None), [], Continuation::PersistentC);
        let dev = apply_deviation(&base, &plan);
        assert_eq!(dev.act_after(&start, None), Some(C));
        let mut rec = start.clone();
        rec.push(Played { own: C, m: C });
        assert_eq!(dev.act_after(&rec, None), Some(C));
        rec.push(Idle);
        assert_eq!(dev.act_after(&rec, None), Some(D));
        // The base alone punishes M immediately after a received D.
        assert_eq!(base.act_after(&start, None), Some(D));
    }

    #[test]
    fn trigger_needs_the_owner_to_act() {
        let base = sigma(PlayerId::X1);
        let at = vec![Opening { own: C, other: C }];
        let plan = DeviationPlan::new(Trigger::at(at.clone(), None), [(0, D)], Continuation::Conform);
        let dev = apply_deviation(&base, &plan);
        assert_eq!(dev.act_after(&at, None), Some(D));
        // Sat out stage 2: the information set was never reached.
        let idle = [Opening { own: C, other: C }, Idle];
        assert_eq!(dev.act_after(&idle, None), base.act_after(&idle, None));
    }

    #[test]
    fn m_trigger_respects_the_opponent() {
        let base = sigma(PlayerId::M);
        let plan = DeviationPlan::new(Trigger::at(vec![], Some(Seat::X2)), [(0, D)], Continuation::Conform);
        let dev = apply_deviation(&base, &plan);
        assert_eq!(dev.act_after(&[], Some(Seat::X1)), Some(C));
        assert_eq!(dev.act_after(&[], Some(Seat::X2)), Some(D));
    }
}

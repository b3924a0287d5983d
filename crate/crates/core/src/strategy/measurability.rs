use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::game::{Action, History, Observation, PlayerId, Seat};

use super::automaton::StrategyAutomaton;

/// Two histories the owner cannot tell apart that receive different actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub first: History,
    pub second: History,
    pub opponent: Option<Seat>,
    pub actions: (Action, Action),
}

/// Checks that a strategy written over global histories depends only on
/// what `owner` observes, for every decision at stages `1..=horizon`.
/// Reports one offending pair per information set.
pub fn check_measurability<F>(owner: PlayerId, horizon: usize, full_map: F) -> Vec<Violation>
where
    F: Fn(&History, Option<Seat>) -> Action,
{
    let mut violations = Vec::new();
    for len in 0..horizon {
        // M sits out stage 1.
        if owner == PlayerId::M && len == 0 {
            continue;
        }
        let contexts: Vec<Option<Seat>> = match owner {
            PlayerId::M => vec![Some(Seat::X1), Some(Seat::X2)],
            _ => vec![None],
        };
        let mut first_seen: BTreeMap<(Vec<Observation>, Option<Seat>), (History, Action)> = BTreeMap::new();
        let mut flagged = BTreeMap::new();
        for h in History::all_with_len(len) {
            let record = h.project(owner).entries;
            for &ctx in &contexts {
                let action = full_map(&h, ctx);
                let key = (record.clone(), ctx);
                match first_seen.get(&key) {
                    None => {
                        first_seen.insert(key, (h.clone(), action));
                    }
                    Some((rep, rep_action)) if *rep_action != action => {
                        if flagged.insert(key, ()).is_none() {
                            violations.push(Violation {
                                first: rep.clone(),
                                second: h.clone(),
                                opponent: ctx,
                                actions: (*rep_action, action),
                            });
                        }
                    }
                    Some(_) => {}
                }
            }
        }
    }
    violations
}

/// A private-history automaton read as a map over global histories.
pub fn lift(automaton: &StrategyAutomaton) -> impl Fn(&History, Option<Seat>) -> Action + '_ {
    move |h, ctx| {
        automaton
            .act_after(&h.project(automaton.owner()).entries, ctx)
            .expect("projections are valid observation sequences")
    }
}

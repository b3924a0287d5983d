use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{Action, Game, History, Observation, PlayerId, PrivateHistory, Seat, StageOutcome};
use crate::payoff::{play_stage, value_at, JointState};
use crate::rational::Rational;
use crate::strategy::{apply_deviation, Continuation, DeviationPlan, Profile, Trigger};

pub const DEFAULT_PLAN_CAP: usize = 100_000;

/// A decision point of one player: its private record and, for `M`, the
/// opponent it currently faces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InfoSet {
    pub owner: PlayerId,
    pub record: Vec<Observation>,
    pub opponent: Option<Seat>,
}

impl InfoSet {
    pub fn trigger(&self) -> Trigger {
        Trigger::at(self.record.clone(), self.opponent)
    }

    pub fn describe(&self) -> String {
        let rec = PrivateHistory::new(self.owner, self.record.clone());
        match self.opponent {
            Some(o) => format!("{rec} vs {o}"),
            None => format!("{rec}"),
        }
    }
}

/// A global history and next-stage selection consistent with an
/// information set, with its probability under the base profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub history: History,
    pub selected: Option<Seat>,
    pub weight: Rational,
}

/// Information sets the deviator reaches with positive probability at
/// decision stages `1..=depth`, with the histories that lead there.
pub fn on_path_info_sets(
    base: &Profile,
    game: &Game,
    deviator: PlayerId,
    depth: usize,
) -> Result<BTreeMap<InfoSet, Vec<Node>>> {
    let mut out: BTreeMap<InfoSet, Vec<Node>> = BTreeMap::new();
    // (history, joint state, probability) before the next stage
    let mut frontier = vec![(History::empty(), JointState::start(base), Rational::one())];
    for stage in 1..=depth {
        let mut next = Vec::new();
        for (h, state, prob) in frontier {
            let branches: Vec<(Option<Seat>, Rational)> = if stage == 1 {
                vec![(None, Rational::one())]
            } else {
                Seat::ALL
                    .iter()
                    .map(|&s| (Some(s), game.params.seat_prob(s)))
                    .filter(|(_, p)| !p.is_zero())
                    .collect()
            };
            for (sel, p) in branches {
                let weight = &prob * &p;
                let acts = match (deviator.seat(), sel) {
                    (_, None) => deviator != PlayerId::M,
                    (Some(seat), Some(s)) => seat == s,
                    (None, Some(_)) => true,
                };
                if acts {
                    let info = InfoSet {
                        owner: deviator,
                        record: h.project(deviator).entries,
                        opponent: if deviator == PlayerId::M { sel } else { None },
                    };
                    out.entry(info).or_default().push(Node {
                        history: h.clone(),
                        selected: sel,
                        weight: weight.clone(),
                    });
                }
                let (outcome, _, succ): (StageOutcome, _, _) = play_stage(base, game, &state, sel)?;
                let mut h2 = h.clone();
                h2.push(outcome)?;
                next.push((h2, succ, weight));
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Belief-weighted gain of `plan` over the base profile at `info`, from the
/// deviator's point of view.
pub fn evaluate_plan(
    base: &Profile,
    game: &Game,
    info: &InfoSet,
    nodes: &[Node],
    plan: &DeviationPlan,
) -> Result<Rational> {
    let who = info.owner;
    let dev = apply_deviation(base.get(who), plan);
    let deviated = base.with(who, dev)?;
    let mut total = Rational::zero();
    let mut mass = Rational::zero();
    for n in nodes {
        let b = value_at(base, game, &n.history, n.selected)?;
        let d = value_at(&deviated, game, &n.history, n.selected)?;
        total += &n.weight * (d.get(who) - b.get(who));
        mass += &n.weight;
    }
    if mass.is_zero() {
        return Err(Error::Unreachable(info.describe()));
    }
    Ok(total / mass)
}

/// Gain of `plan` at `info` with beliefs recomputed from scratch.
pub fn reevaluate(base: &Profile, game: &Game, info: &InfoSet, plan: &DeviationPlan) -> Result<Rational> {
    let depth = info.record.len() + if info.owner == PlayerId::M { 2 } else { 1 };
    let sets = on_path_info_sets(base, game, info.owner, depth)?;
    let nodes = sets.get(info).ok_or_else(|| Error::Unreachable(info.describe()))?;
    evaluate_plan(base, game, info, nodes, plan)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub info_set: InfoSet,
    pub plan: DeviationPlan,
    pub gain: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub deviator: PlayerId,
    pub depth: usize,
    pub info_sets: usize,
    pub plans_tried: usize,
    /// 0 when nothing was tried.
    pub best_gain: Rational,
    pub witness: Option<Witness>,
    pub incomplete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub depth: usize,
    pub plan_cap: usize,
    /// Search only this information set.
    pub only: Option<InfoSet>,
    pub continuations: Vec<Continuation>,
}

impl SearchOptions {
    pub fn depth(depth: usize) -> Self {
        SearchOptions {
            depth,
            plan_cap: DEFAULT_PLAN_CAP,
            only: None,
            continuations: vec![Continuation::Conform, Continuation::AllD],
        }
    }
}

/// Forced action sequences of length `0..=depth` in lexicographic order.
fn sequences(depth: usize) -> Vec<Vec<Action>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &layer {
            for a in Action::ALL {
                let mut t: Vec<Action> = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Tries every plan with a trigger at an information set reached on path
/// within the first `depth` stages, forced actions for up to `depth` stages
/// and each continuation, and reports the largest gain.
pub fn bounded_deviation_search(
    deviator: PlayerId,
    base: &Profile,
    game: &Game,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    if opts.depth == 0 {
        return Err(Error::Invalid("search depth must be at least 1".into()));
    }
    let sets = on_path_info_sets(base, game, deviator, opts.depth)?;
    let mut report = SearchReport {
        deviator,
        depth: opts.depth,
        info_sets: 0,
        plans_tried: 0,
        best_gain: Rational::zero(),
        witness: None,
        incomplete: false,
    };
    let seqs = sequences(opts.depth);
    'sets: for (info, nodes) in &sets {
        if opts.only.as_ref().is_some_and(|o| o != info) {
            continue;
        }
        report.info_sets += 1;
        for seq in &seqs {
            for &cont in &opts.continuations {
                if seq.is_empty() && cont == Continuation::Conform {
                    continue;
                }
                if report.plans_tried >= opts.plan_cap {
                    report.incomplete = true;
                    break 'sets;
                }
                report.plans_tried += 1;
                let plan = DeviationPlan::sequence(info.trigger(), seq, cont);
                let gain = evaluate_plan(base, game, info, nodes, &plan)?;
                let better = match &report.witness {
                    None => true,
                    Some(w) => gain > w.gain,
                };
                if better {
                    report.witness = Some(Witness {
                        info_set: info.clone(),
                        plan,
                        gain,
                    });
                }
            }
        }
    }
    if let Some(w) = &report.witness {
        report.best_gain = w.gain.clone();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn sequence_count() {
        assert_eq!(sequences(3).len(), 1 + 2 + 4 + 8);
        assert_eq!(sequences(1), vec![vec![], vec![Action::C], vec![Action::D]]);
    }

    #[test]
    fn contagious_root_all_d_gains() {
        let base = Profile::uniform("contagious").unwrap();
        let game = Game::standard();
        let info = InfoSet {
            owner: PlayerId::X1,
            record: vec![],
            opponent: None,
        };
        let plan = DeviationPlan::new(info.trigger(), [], Continuation::AllD);
        assert_eq!(reevaluate(&base, &game, &info, &plan).unwrap(), ratio(5, 8));
    }

    #[test]
    fn unreachable_restriction_yields_nothing() {
        let base = Profile::uniform("sigma").unwrap();
        let mut opts = SearchOptions::depth(2);
        opts.only = Some(InfoSet {
            owner: PlayerId::X1,
            record: vec![Observation::Opening {
                own: Action::D,
                other: Action::D,
            }],
            opponent: None,
        });
        let r = bounded_deviation_search(PlayerId::X1, &base, &Game::standard(), &opts).unwrap();
        assert_eq!(r.best_gain, Rational::zero());
        assert!(r.witness.is_none());
        assert_eq!(r.plans_tried, 0);
    }
}

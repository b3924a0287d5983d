use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{GameParams, History, Observation, PlayerId, PrivateHistory, Seat, StageOutcome};
use crate::rational::{format_rational, Rational};
use crate::strategy::Profile;

use super::interval::Interval;
use super::perturb::{perturb, PerturbedProfile};
use super::scheme::{TrembleClass, TrembleScheme};

/// Leading power of an explanation's probability as `ε → 0`: `slow` factors
/// of `ε^(1/ε)` and `fast` factors of `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EpsOrder {
    pub slow: u32,
    pub fast: u32,
}

impl EpsOrder {
    /// `Less` when `self` vanishes more slowly, i.e. carries more mass in
    /// the limit. One slow factor outweighs any number of fast ones.
    pub fn dominance(&self, other: &EpsOrder) -> Ordering {
        (self.slow, self.fast).cmp(&(other.slow, other.fast))
    }
}

impl fmt::Display for EpsOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.slow, self.fast) {
            (0, k) => write!(f, "ε^{k}"),
            (s, 0) => write!(f, "(ε^(1/ε))^{s}"),
            (s, k) => write!(f, "ε^{k}·(ε^(1/ε))^{s}"),
        }
    }
}

/// Explanations grouped by the stage of their first tremble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DeviationClass {
    NoDeviation,
    FirstAt(usize),
}

impl fmt::Display for DeviationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeviationClass::NoDeviation => f.write_str("no deviation"),
            DeviationClass::FirstAt(t) => write!(f, "first deviation at stage {t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tremble {
    pub stage: usize,
    pub player: PlayerId,
    pub class: TrembleClass,
}

/// A global history consistent with the observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub history: History,
    /// Joint probability under the perturbed profile.
    pub prob: Interval,
    /// Posterior mass given the observation.
    pub mass: Interval,
    pub order: EpsOrder,
    pub class: DeviationClass,
    pub trembles: Vec<Tremble>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMass {
    pub class: DeviationClass,
    pub mass: Interval,
    pub order: EpsOrder,
    pub members: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorReport {
    pub observation: PrivateHistory,
    pub eps: Rational,
    pub scheme: String,
    /// Sorted by descending mass.
    pub explanations: Vec<Explanation>,
    /// Sorted by class.
    pub classes: Vec<ClassMass>,
    /// The class whose mass tends to 1, when one order strictly dominates.
    pub limit_class: Option<DeviationClass>,
}

struct Partial {
    history: History,
    records: [Vec<Observation>; 3],
    prob: Interval,
    order: EpsOrder,
    trembles: Vec<Tremble>,
}

/// Bayes posterior over the global histories consistent with what
/// `observation.owner` saw, under the perturbed profile. Stages past the
/// observation integrate to one, so `horizon` only has to cover it.
pub fn posterior(
    observation: &PrivateHistory,
    pp: &PerturbedProfile,
    params: &GameParams,
    horizon: usize,
) -> Result<PosteriorReport> {
    let owner = observation.owner;
    let stages = observation.stages();
    if horizon < stages {
        return Err(Error::HorizonTooShort { horizon, stages });
    }
    if !observation.is_well_formed() {
        return Err(Error::Invalid(alloc::format!(
            "{observation} is not a well-formed private history"
        )));
    }
    let mut frontier = vec![Partial {
        history: History::empty(),
        records: [Vec::new(), Vec::new(), Vec::new()],
        prob: Interval::point(Rational::one()),
        order: EpsOrder::default(),
        trembles: Vec::new(),
    }];
    for stage in 1..=stages {
        let outcomes: Vec<(StageOutcome, Rational)> = if stage == 1 {
            StageOutcome::openings().map(|o| (o, Rational::one())).collect()
        } else {
            StageOutcome::matches()
                .filter_map(|o| match o {
                    StageOutcome::Match { selected, .. } => {
                        let p = params.seat_prob(selected);
                        (!p.is_zero()).then_some((o, p))
                    }
                    StageOutcome::Opening { .. } => None,
                })
                .collect()
        };
        let mut next = Vec::new();
        for part in &frontier {
            for (outcome, sel_prob) in &outcomes {
                let seen = outcome.observe(owner);
                let expected = match owner {
                    PlayerId::M if stage == 1 => None,
                    PlayerId::M => observation.entries.get(stage - 2).copied(),
                    _ => observation.entries.get(stage - 1).copied(),
                };
                if seen != expected {
                    continue;
                }
                let mut prob = part.prob.scale(sel_prob);
                let mut order = part.order;
                let mut trembles = part.trembles.clone();
                let moves: Vec<(PlayerId, Option<Seat>, crate::game::Action)> = match *outcome {
                    StageOutcome::Opening { x1, x2 } => vec![(PlayerId::X1, None, x1), (PlayerId::X2, None, x2)],
                    StageOutcome::Match { selected, x, m } => {
                        vec![(selected.player(), None, x), (PlayerId::M, Some(selected), m)]
                    }
                };
                for (who, opp, action) in moves {
                    let ap = pp.action_prob(who, &part.records[who.index()], opp, action)?;
                    prob = &prob * &ap.prob;
                    if ap.trembled {
                        match ap.class {
                            TrembleClass::Fast => order.fast += 1,
                            TrembleClass::Slow => order.slow += 1,
                        }
                        trembles.push(Tremble {
                            stage,
                            player: who,
                            class: ap.class,
                        });
                    }
                }
                let mut history = part.history.clone();
                history.push(*outcome)?;
                let mut records = part.records.clone();
                for who in PlayerId::ALL {
                    if let Some(obs) = outcome.observe(who) {
                        records[who.index()].push(obs);
                    }
                }
                next.push(Partial {
                    history,
                    records,
                    prob,
                    order,
                    trembles,
                });
            }
        }
        frontier = next;
    }

    let total_lo: Rational = frontier.iter().map(|p| &p.prob.lo).sum();
    let total_hi: Rational = frontier.iter().map(|p| &p.prob.hi).sum();
    if frontier.is_empty() || total_lo.is_zero() {
        return Err(Error::Unreachable(alloc::format!("{observation}")));
    }
    let total = Interval::new(total_lo, total_hi);
    // Sum of every other explanation's probability.
    let rest_of = |p: &Interval| Interval::new(&total.lo - &p.lo, &total.hi - &p.hi);

    let mut explanations: Vec<Explanation> = frontier
        .into_iter()
        .map(|p| {
            let rest = rest_of(&p.prob);
            let class = p
                .trembles
                .first()
                .map_or(DeviationClass::NoDeviation, |t| DeviationClass::FirstAt(t.stage));
            Explanation {
                mass: p.prob.share_of(&rest),
                history: p.history,
                prob: p.prob,
                order: p.order,
                class,
                trembles: p.trembles,
            }
        })
        .collect();
    explanations.sort_by(|a, b| {
        b.mass
            .midpoint()
            .cmp(&a.mass.midpoint())
            .then_with(|| a.history.cmp(&b.history))
    });

    let mut grouped: BTreeMap<DeviationClass, (Interval, EpsOrder, usize)> = BTreeMap::new();
    for e in &explanations {
        grouped
            .entry(e.class)
            .and_modify(|(p, o, n)| {
                *p = &*p + &e.prob;
                if e.order.dominance(o) == Ordering::Less {
                    *o = e.order;
                }
                *n += 1;
            })
            .or_insert((e.prob.clone(), e.order, 1));
    }
    let classes: Vec<ClassMass> = grouped
        .into_iter()
        .map(|(class, (p, order, members))| ClassMass {
            class,
            mass: p.share_of(&rest_of(&p)),
            order,
            members,
        })
        .collect();
    let limit_class = unique_leader(&classes);

    Ok(PosteriorReport {
        observation: observation.clone(),
        eps: pp.eps.clone(),
        scheme: pp.scheme.name.clone(),
        explanations,
        classes,
        limit_class,
    })
}

fn unique_leader(classes: &[ClassMass]) -> Option<DeviationClass> {
    let best = classes.iter().min_by(|a, b| a.order.dominance(&b.order))?;
    let ties = classes
        .iter()
        .filter(|c| c.order.dominance(&best.order) == Ordering::Equal)
        .count();
    (ties == 1).then_some(best.class)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitClass {
    pub class: DeviationClass,
    pub order: EpsOrder,
    /// Posterior mass at each ε of the sequence.
    pub masses: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitReport {
    pub observation: PrivateHistory,
    pub scheme: String,
    pub eps: Vec<Rational>,
    pub classes: Vec<LimitClass>,
    /// Class with provably the largest mass at each ε, if any.
    pub dominant: Vec<Option<DeviationClass>>,
    /// Class predicted by the leading orders.
    pub limit_class: Option<DeviationClass>,
    /// The same class dominates at every ε and matches the prediction.
    pub stable: bool,
    /// The predicted class's mass strictly increases along the sequence.
    pub monotone: bool,
}

/// Posterior along a decreasing ε sequence, checking that the limiting
/// class is the one that dominates and that its mass grows.
pub fn limit_check(
    observation: &PrivateHistory,
    base: &Profile,
    scheme: &TrembleScheme,
    params: &GameParams,
    eps_seq: &[Rational],
) -> Result<LimitReport> {
    if eps_seq.is_empty() {
        return Err(Error::Invalid("epsilon sequence is empty".into()));
    }
    for e in eps_seq {
        if *e <= Rational::zero() || *e >= Rational::one() {
            return Err(Error::InvalidEpsilon(format_rational(e)));
        }
    }
    if eps_seq.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::EpsilonNotDecreasing);
    }
    let reports = eps_seq
        .iter()
        .map(|e| posterior(observation, &perturb(base, e, scheme)?, params, observation.stages()))
        .collect::<Result<Vec<_>>>()?;

    let mut classes: Vec<LimitClass> = reports[0]
        .classes
        .iter()
        .map(|c| LimitClass {
            class: c.class,
            order: c.order,
            masses: Vec::new(),
        })
        .collect();
    for r in &reports {
        for lc in classes.iter_mut() {
            let m = r
                .classes
                .iter()
                .find(|c| c.class == lc.class)
                .map_or_else(|| Interval::point(Rational::zero()), |c| c.mass.clone());
            lc.masses.push(m);
        }
    }
    let dominant: Vec<Option<DeviationClass>> = (0..eps_seq.len())
        .map(|i| {
            classes.iter().find_map(|c| {
                let m = &c.masses[i];
                classes
                    .iter()
                    .filter(|o| o.class != c.class)
                    .all(|o| o.masses[i].below(m))
                    .then_some(c.class)
            })
        })
        .collect();
    let limit_class = reports[0].limit_class;
    let stable = limit_class.is_some() && dominant.iter().all(|d| *d == limit_class);
    let monotone = limit_class
        .and_then(|lc| classes.iter().find(|c| c.class == lc))
        .is_some_and(|c| c.masses.windows(2).all(|w| w[0].below(&w[1])));
    Ok(LimitReport {
        observation: observation.clone(),
        scheme: scheme.name.clone(),
        eps: eps_seq.to_vec(),
        classes,
        dominant,
        limit_class,
        stable,
        monotone,
    })
}

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::game::{stage_payoffs, Action, Game, History, Observation, PlayerId, Seat};
use crate::payoff::{closed_form, value_at, JointState};
use crate::rational::Rational;
use crate::strategy::{
    all_d, apply_deviation, contagious, persistent_c_after_betrayal, Continuation, DeviationPlan, Profile, Trigger,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Chain value equals the closed form.
    Equal,
    /// Chain value does not exceed the stated bound.
    AtMost,
    /// A property of the automata rather than a number.
    Structural,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Equal => "equal",
            Relation::AtMost => "at-most",
            Relation::Structural => "structural",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub label: String,
    pub relation: Relation,
    pub closed_form: Option<Rational>,
    pub chain: Option<Rational>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedValue {
    pub label: String,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub case: u8,
    pub player: PlayerId,
    pub info_set: String,
    pub conform: NamedValue,
    pub deviations: Vec<NamedValue>,
    /// `conform >= every deviation value`.
    pub holds: bool,
    pub cross_checks: Vec<CrossCheck>,
}

impl CaseReport {
    fn new(
        case: u8,
        player: PlayerId,
        info_set: String,
        conform: NamedValue,
        deviations: Vec<NamedValue>,
        cross_checks: Vec<CrossCheck>,
    ) -> Self {
        let holds = deviations.iter().all(|d| conform.value >= d.value);
        CaseReport {
            case,
            player,
            info_set,
            conform,
            deviations,
            holds,
            cross_checks,
        }
    }

    pub fn consistent(&self) -> bool {
        self.cross_checks.iter().all(|c| c.ok)
    }
}

fn named(label: &str, value: Rational) -> NamedValue {
    NamedValue {
        label: label.to_string(),
        value,
    }
}

/// Closed form when matching is symmetric, else `None`.
fn formula(id: &str, game: &Game) -> Result<Option<Rational>> {
    match closed_form(id, &game.payoffs, &game.params) {
        Ok(v) => Ok(Some(v)),
        Err(Error::AsymmetricMatching(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn check(label: &str, relation: Relation, closed: Option<Rational>, chain: Rational) -> CrossCheck {
    let ok = match (&closed, relation) {
        (None, _) => true,
        (Some(c), Relation::Equal) => *c == chain,
        (Some(c), _) => chain <= *c,
    };
    CrossCheck {
        label: label.to_string(),
        relation,
        closed_form: closed,
        chain: Some(chain),
        ok,
    }
}

/// Value to `who` of replacing its strategy with `plan` at `history`.
fn plan_value(
    profile: &Profile,
    game: &Game,
    who: PlayerId,
    history: &History,
    selected: Option<Seat>,
    plan: &DeviationPlan,
) -> Result<Rational> {
    let dev = apply_deviation(profile.get(who), plan);
    let p = profile.with(who, dev)?;
    Ok(value_at(&p, game, history, selected)?.get(who).clone())
}

fn trigger_for(who: PlayerId, history: &History, selected: Option<Seat>) -> Trigger {
    let opp = if who == PlayerId::M { selected } else { None };
    Trigger::at(history.project(who).entries, opp)
}

/// Largest chain value over "deviate now, then conform" and "deviate now,
/// then defect forever".
fn best_defection(
    profile: &Profile,
    game: &Game,
    who: PlayerId,
    history: &History,
    selected: Option<Seat>,
) -> Result<Rational> {
    let trig = trigger_for(who, history, selected);
    let mut best: Option<Rational> = None;
    for cont in [Continuation::Conform, Continuation::AllD] {
        let plan = DeviationPlan::sequence(trig.clone(), &[Action::D], cont);
        let v = plan_value(profile, game, who, history, selected, &plan)?;
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    Ok(best.expect("two plans evaluated"))
}

fn sigma_profile() -> Profile {
    Profile::uniform("sigma").expect("built-in strategies")
}

fn hist(outcomes: &[(Seat, Action, Action)], opening: (Action, Action)) -> History {
    outcomes
        .iter()
        .fold(History::opening(opening.0, opening.1), |h, &(s, x, m)| h.then(s, x, m))
}

/// `X1` and `M` both prescribed `D`: only the current stage payoff depends
/// on `X1`'s action.
fn case1(game: &Game) -> Result<CaseReport> {
    use Action::{C, D};
    let profile = sigma_profile();
    let h = hist(&[(Seat::X1, D, C)], (C, D));
    let sel = Some(Seat::X1);
    let state = JointState::replay(&profile, &h)?;
    let x1 = profile.get(PlayerId::X1);
    let m = profile.get(PlayerId::M);
    let prescribed = (x1.act(state.x1, None), m.act(state.m, sel));

    let p = stage_payoffs(&game.payoffs, D, D);
    let s = stage_payoffs(&game.payoffs, C, D);
    // M's reaction can depend on X1's action only through what it observes.
    let after = |a: Action| {
        m.step(
            state.m,
            &Observation::Met {
                opponent: Seat::X1,
                opp: a,
                own: D,
            },
        )
    };
    let m_indifferent = match (after(C), after(D)) {
        (Some(a), Some(b)) => m.equivalent_states(a, b),
        _ => false,
    };
    let conform_chain = value_at(&profile, game, &h, sel)?.get(PlayerId::X1).clone();
    let trig = trigger_for(PlayerId::X1, &h, sel);
    let c_chain = plan_value(
        &profile,
        game,
        PlayerId::X1,
        &h,
        sel,
        &DeviationPlan::sequence(trig, &[C], Continuation::Conform),
    )?;

    let checks = vec![
        CrossCheck {
            label: "prescribed (X1DD)".into(),
            relation: Relation::Structural,
            closed_form: None,
            chain: None,
            ok: prescribed == (D, D),
        },
        CrossCheck {
            label: "M's continuation independent of X1's action".into(),
            relation: Relation::Structural,
            closed_form: None,
            chain: None,
            ok: m_indifferent,
        },
        check(
            "C then conform, at most conform",
            Relation::AtMost,
            Some(conform_chain),
            c_chain,
        ),
    ];
    Ok(CaseReport::new(
        1,
        PlayerId::X1,
        format!("X1 selected after {h}, stage payoffs"),
        named("D", p),
        vec![named("C", s)],
        checks,
    ))
}

/// `X1` met by `M` at stage 2 after `(CC)`.
fn case2(game: &Game) -> Result<CaseReport> {
    let profile = sigma_profile();
    let h = History::opening(Action::C, Action::C);
    let sel = Some(Seat::X1);
    let conform = value_at(&profile, game, &h, sel)?.get(PlayerId::X1).clone();
    let dev = best_defection(&profile, game, PlayerId::X1, &h, sel)?;
    let (cf_c, cf_d) = (formula("case2-C", game)?, formula("case2-D", game)?);
    let checks = vec![
        check("C: R + δR/(2(1-δ))", Relation::Equal, cf_c.clone(), conform.clone()),
        check("D: T + δP/(2(1-δ))", Relation::AtMost, cf_d.clone(), dev.clone()),
    ];
    Ok(CaseReport::new(
        2,
        PlayerId::X1,
        format!("X1 selected after {h}"),
        named("C", cf_c.unwrap_or(conform)),
        vec![named("D", cf_d.unwrap_or(dev))],
        checks,
    ))
}

/// `M` meets `X2` at stage 3 after `(CC;X1CC)`.
fn case3(game: &Game) -> Result<CaseReport> {
    use Action::C;
    let profile = sigma_profile();
    let h = hist(&[(Seat::X1, C, C)], (C, C));
    let sel = Some(Seat::X2);
    let conform = value_at(&profile, game, &h, sel)?.get(PlayerId::M).clone();
    let dev = best_defection(&profile, game, PlayerId::M, &h, sel)?;
    let x2 = profile.get(PlayerId::X2);
    let x2_plays = x2.act(JointState::replay(&profile, &h)?.x2, None);
    let (cf_c, cf_d) = (formula("case3-C", game)?, formula("case3-D", game)?);
    let checks = vec![
        CrossCheck {
            label: "X2 prescribed D".into(),
            relation: Relation::Structural,
            closed_form: None,
            chain: None,
            ok: x2_plays == Action::D,
        },
        check("C: S + δR/(1-δ)", Relation::Equal, cf_c.clone(), conform.clone()),
        check("D: P + δ(P+R)/(2(1-δ))", Relation::AtMost, cf_d.clone(), dev.clone()),
    ];
    Ok(CaseReport::new(
        3,
        PlayerId::M,
        format!("M facing X2 after {h}"),
        named("C", cf_c.unwrap_or(conform)),
        vec![named("D", cf_d.unwrap_or(dev))],
        checks,
    ))
}

/// `M`'s first decision, at stage 2.
fn case4(game: &Game) -> Result<CaseReport> {
    let profile = sigma_profile();
    let h = History::opening(Action::C, Action::C);
    let sel = Some(Seat::X1);
    let conform = value_at(&profile, game, &h, sel)?.get(PlayerId::M).clone();
    let dev = best_defection(&profile, game, PlayerId::M, &h, sel)?;
    let (cf_c, cf_d) = (formula("case4-C", game)?, formula("case4-D", game)?);
    let checks = vec![
        check(
            "C: R + δR/2 + δS/2 + δ²R/(1-δ)",
            Relation::Equal,
            cf_c.clone(),
            conform.clone(),
        ),
        check(
            "D: T + δ(S/2+P/2) + δ²P/(2(1-δ)) + δ²R/(2(1-δ))",
            Relation::AtMost,
            cf_d.clone(),
            dev.clone(),
        ),
    ];
    Ok(CaseReport::new(
        4,
        PlayerId::M,
        "M at stage 2 facing X1".into(),
        named("C", cf_c.unwrap_or(conform)),
        vec![named("D", cf_d.unwrap_or(dev))],
        checks,
    ))
}

/// `X1` met at stage 2 after `X2` defected at the opening, against a
/// contagious `M` and a defecting `X2`.
fn case5(game: &Game) -> Result<CaseReport> {
    use Action::{C, D};
    let profile = Profile::new(contagious(PlayerId::X1), all_d(PlayerId::X2), contagious(PlayerId::M))?;
    let h = History::opening(C, D);
    let sel = Some(Seat::X1);
    let conform = value_at(&profile, game, &h, sel)?.get(PlayerId::X1).clone();
    let trig = trigger_for(PlayerId::X1, &h, sel);
    let one_shot = plan_value(
        &profile,
        game,
        PlayerId::X1,
        &h,
        sel,
        &DeviationPlan::sequence(trig, &[C], Continuation::AllD),
    )?;
    let persistent = value_at(
        &profile.with(PlayerId::X1, persistent_c_after_betrayal(PlayerId::X1)?)?,
        game,
        &h,
        sel,
    )?
    .get(PlayerId::X1)
    .clone();
    let state = JointState::replay(&profile, &h)?;
    let prescribed = (
        profile.get(PlayerId::X1).act(state.x1, None),
        profile.get(PlayerId::M).act(state.m, sel),
    );
    let (cf_d, cf_1, cf_p) = (
        formula("case5-D", game)?,
        formula("case5-one-shot-C", game)?,
        formula("case5-persistent-C", game)?,
    );
    let checks = vec![
        CrossCheck {
            label: "prescribed (X1DC)".into(),
            relation: Relation::Structural,
            closed_form: None,
            chain: None,
            ok: prescribed == (D, C),
        },
        check("D: T + δP/(2(1-δ))", Relation::Equal, cf_d.clone(), conform.clone()),
        check(
            "one-shot C: R + δT/2 + δ²P/(2(1-δ))",
            Relation::Equal,
            cf_1.clone(),
            one_shot.clone(),
        ),
        check("persistent C", Relation::Equal, cf_p.clone(), persistent.clone()),
    ];
    Ok(CaseReport::new(
        5,
        PlayerId::X1,
        format!("X1 selected after {h}; M contagious from stage 2, X2 defecting"),
        named("D", cf_d.unwrap_or(conform)),
        vec![
            named("one-shot C", cf_1.unwrap_or(one_shot)),
            named("persistent C", cf_p.unwrap_or(persistent)),
        ],
        checks,
    ))
}

/// `X1` at the opening.
fn case6(game: &Game) -> Result<CaseReport> {
    let profile = sigma_profile();
    let h = History::empty();
    let conform = value_at(&profile, game, &h, None)?.get(PlayerId::X1).clone();
    let dev = best_defection(&profile, game, PlayerId::X1, &h, None)?;
    let (cf_c, cf_d) = (formula("case6-C", game)?, formula("case6-D", game)?);
    let checks = vec![
        check(
            "C: R + δR/2 + δ²(R+T)/4 + δ³R/(2(1-δ))",
            Relation::Equal,
            cf_c.clone(),
            conform.clone(),
        ),
        check(
            "D: T + δT/2 + δ²P/(2(1-δ))",
            Relation::AtMost,
            cf_d.clone(),
            dev.clone(),
        ),
    ];
    Ok(CaseReport::new(
        6,
        PlayerId::X1,
        "X1 at stage 1".into(),
        named("C", cf_c.unwrap_or(conform)),
        vec![named("D", cf_d.unwrap_or(dev))],
        checks,
    ))
}

/// Incentive check for one case of the enforcement profile.
pub fn check_case(case: u8, game: &Game) -> Result<CaseReport> {
    match case {
        1 => case1(game),
        2 => case2(game),
        3 => case3(game),
        4 => case4(game),
        5 => case5(game),
        6 => case6(game),
        _ => Err(Error::Invalid(format!("case id must be 1..=6, got {case}"))),
    }
}

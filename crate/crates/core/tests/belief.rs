use num_traits::{One, Zero};
use proptest::prelude::*;
use tpe_core::belief::{
    eta, limit_check, perturb, posterior, separation_check, DeviationClass, EpsOrder, Interval, TrembleClass,
    TrembleScheme,
};
use tpe_core::notation::parse_observation;
use tpe_core::rational::{int, pow, ratio, to_f64};
use tpe_core::strategy::{contagious, sigma, Profile};
use tpe_core::{Action, Error, GameParams, PlayerId, PrivateHistory, Rational, Seat};

fn m_obs(text: &str) -> PrivateHistory {
    parse_observation(text, PlayerId::M).unwrap()
}

fn seq() -> Vec<Rational> {
    vec![ratio(1, 10), ratio(1, 20), ratio(1, 40)]
}

fn contagion_setup() -> (Profile, TrembleScheme) {
    (Profile::uniform("contagious").unwrap(), TrembleScheme::contagion())
}

fn enforcement_setup() -> (Profile, TrembleScheme) {
    (Profile::uniform("sigma").unwrap(), TrembleScheme::enforcement())
}

fn sum(intervals: impl Iterator<Item = Interval>) -> Interval {
    intervals.fold(Interval::point(Rational::zero()), |a, b| &a + &b)
}

#[test]
fn first_stage_explanation_wins_under_contagion() {
    let (base, scheme) = contagion_setup();
    let obs = m_obs("(X1CC;X2DC)");
    let pp = perturb(&base, &ratio(1, 10), &scheme).unwrap();
    let r = posterior(&obs, &pp, &GameParams::standard(), obs.stages()).unwrap();
    assert_eq!(r.limit_class, Some(DeviationClass::FirstAt(1)));
    let first = r
        .classes
        .iter()
        .find(|c| c.class == DeviationClass::FirstAt(1))
        .unwrap();
    let third = r
        .classes
        .iter()
        .find(|c| c.class == DeviationClass::FirstAt(3))
        .unwrap();
    assert!(third.mass.below(&first.mass));
    assert_eq!(first.order, EpsOrder { slow: 0, fast: 1 });
    assert_eq!(third.order, EpsOrder { slow: 1, fast: 0 });
    assert_eq!(
        sum(r.explanations.iter().map(|e| e.mass.clone())),
        Interval::point(Rational::one())
    );
    assert_eq!(
        sum(r.classes.iter().map(|c| c.mass.clone())),
        Interval::point(Rational::one())
    );
}

#[test]
fn contagion_limit_is_stable_and_increasing() {
    let (base, scheme) = contagion_setup();
    let r = limit_check(&m_obs("(X1CC;X2DC)"), &base, &scheme, &GameParams::standard(), &seq()).unwrap();
    assert_eq!(r.limit_class, Some(DeviationClass::FirstAt(1)));
    assert!(r.stable && r.monotone);
    let first = r
        .classes
        .iter()
        .find(|c| c.class == DeviationClass::FirstAt(1))
        .unwrap();
    assert!(first.masses[2].lo > ratio(99, 100));
}

#[test]
fn stage_three_explanation_wins_under_enforcement() {
    let (base, scheme) = enforcement_setup();
    let obs = m_obs("(X1CC;X2CC)");
    let r = limit_check(&obs, &base, &scheme, &GameParams::standard(), &seq()).unwrap();
    assert_eq!(r.limit_class, Some(DeviationClass::FirstAt(3)));
    assert!(r.stable && r.monotone);
    let third = r
        .classes
        .iter()
        .find(|c| c.class == DeviationClass::FirstAt(3))
        .unwrap();
    let first = r
        .classes
        .iter()
        .find(|c| c.class == DeviationClass::FirstAt(1))
        .unwrap();
    assert_eq!(third.order, EpsOrder { slow: 0, fast: 1 });
    assert_eq!(first.order, EpsOrder { slow: 0, fast: 3 });
    assert!(third.masses[2].lo > ratio(99, 100));

    let pp = perturb(&base, &ratio(1, 10), &scheme).unwrap();
    let p = posterior(&obs, &pp, &GameParams::standard(), obs.stages()).unwrap();
    assert_eq!(
        sum(p.explanations.iter().map(|e| e.mass.clone())),
        Interval::point(Rational::one())
    );
}

#[test]
fn on_path_observations_need_no_deviation() {
    for (text, (base, scheme)) in [
        ("(X1CC;X2CC)", contagion_setup()),
        ("(X1CC;X1CC)", enforcement_setup()),
        ("(X1CC;X2DC)", enforcement_setup()),
    ] {
        let r = limit_check(&m_obs(text), &base, &scheme, &GameParams::standard(), &seq()).unwrap();
        assert_eq!(
            r.limit_class,
            Some(DeviationClass::NoDeviation),
            "{text} {}",
            scheme.name
        );
        assert!(r.stable && r.monotone, "{text}");
        let c = r
            .classes
            .iter()
            .find(|c| c.class == DeviationClass::NoDeviation)
            .unwrap();
        assert_eq!(c.order, EpsOrder::default());
    }
}

#[test]
fn x_player_observations_are_explained_too() {
    let (base, scheme) = contagion_setup();
    let obs = parse_observation("(CC;X2CD)", PlayerId::X1).unwrap();
    let pp = perturb(&base, &ratio(1, 10), &scheme).unwrap();
    let r = posterior(&obs, &pp, &GameParams::standard(), obs.stages()).unwrap();
    assert!(r.explanations.iter().all(|e| e.history.project(PlayerId::X1) == obs));
    assert_eq!(
        sum(r.explanations.iter().map(|e| e.mass.clone())),
        Interval::point(Rational::one())
    );
}

#[test]
fn beliefs_agree_with_the_prescriptions() {
    let contagious_m = contagious(PlayerId::M);
    let rec = m_obs("(X1CC;X2DC)").entries;
    assert_eq!(contagious_m.act_after(&rec, Some(Seat::X1)), Some(Action::D));
    assert_eq!(contagious_m.act_after(&rec, Some(Seat::X2)), Some(Action::D));

    let sigma_m = sigma(PlayerId::M);
    let rec = m_obs("(X1CC;X2CC)").entries;
    assert_eq!(sigma_m.act_after(&rec, Some(Seat::X1)), Some(Action::C));
    assert_eq!(sigma_m.act_after(&rec, Some(Seat::X2)), Some(Action::D));
}

#[test]
fn separation_up_to_ten() {
    let eps = ratio(1, 100);
    let tol = Rational::new(1.into(), num_bigint::BigInt::from(10).pow(100));
    for k in 0..=10 {
        let r = separation_check(k, &eps, &tol).unwrap();
        assert!(r.below, "k={k}");
    }
    let r = separation_check(5, &eps, &tol).unwrap();
    assert!(r.log10_ratio.contains(&int(-190)));
    let r0 = separation_check(0, &eps, &ratio(1, 100)).unwrap();
    assert!(r0.below);
}

#[test]
fn separation_log_ratio_decreases_with_epsilon() {
    let tol = ratio(1, 2);
    let mut prev: Option<Interval> = None;
    for d in [7, 10, 13, 20, 50] {
        let r = separation_check(3, &ratio(1, d), &tol).unwrap();
        if let Some(p) = &prev {
            assert!(r.log10_ratio.below(p), "1/{d}");
        }
        prev = Some(r.log10_ratio);
    }
}

#[test]
fn one_slow_tremble_outweighs_any_fast_ones() {
    let a = EpsOrder { slow: 1, fast: 0 };
    for k in 0..20 {
        assert_eq!(EpsOrder { slow: 0, fast: k }.dominance(&a), core::cmp::Ordering::Less);
    }
    for e in seq() {
        let slow = eta(&e);
        for k in 1..=5 {
            assert!(slow.hi < pow(&e, k), "ε={e} k={k}");
        }
    }
}

#[test]
fn epsilon_errors() {
    let (base, scheme) = contagion_setup();
    assert!(matches!(
        perturb(&base, &int(1), &scheme),
        Err(Error::InvalidEpsilon(_))
    ));
    assert!(matches!(
        perturb(&base, &int(0), &scheme),
        Err(Error::InvalidEpsilon(_))
    ));
    let obs = m_obs("(X1CC;X2DC)");
    let bad = [ratio(1, 20), ratio(1, 10)];
    assert!(matches!(
        limit_check(&obs, &base, &scheme, &GameParams::standard(), &bad),
        Err(Error::EpsilonNotDecreasing)
    ));
    let pp = perturb(&base, &ratio(1, 10), &scheme).unwrap();
    assert!(matches!(
        posterior(&obs, &pp, &GameParams::standard(), 1),
        Err(Error::HorizonTooShort { .. })
    ));
}

#[test]
fn scheme_classes() {
    let c = TrembleScheme::contagion();
    let x_cc = parse_observation("(CC)", PlayerId::X1).unwrap().entries;
    let x_cd = parse_observation("(CD)", PlayerId::X1).unwrap().entries;
    let x_dd = parse_observation("(DD)", PlayerId::X1).unwrap().entries;
    assert_eq!(c.class(PlayerId::X1, &[]), TrembleClass::Fast);
    assert_eq!(c.class(PlayerId::X1, &x_cc), TrembleClass::Slow);
    assert_eq!(c.class(PlayerId::X1, &x_cd), TrembleClass::Fast);
    assert_eq!(c.class(PlayerId::X1, &x_dd), TrembleClass::Fast);
    assert_eq!(c.class(PlayerId::M, &[]), TrembleClass::Fast);
    assert!(TrembleScheme::named("enforcement").is_ok());
    assert!(TrembleScheme::named("nope").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn posterior_masses_sum_to_one(
        den in 3i64..30,
        stages in prop::collection::vec((any::<bool>(), any::<bool>(), any::<bool>()), 1..3),
        enforcement in any::<bool>(),
    ) {
        let (base, scheme) = if enforcement { enforcement_setup() } else { contagion_setup() };
        let act = |b: bool| if b { 'C' } else { 'D' };
        let text: Vec<String> = stages
            .iter()
            .map(|&(s, x, m)| format!("{}{}{}", if s { "X1" } else { "X2" }, act(x), act(m)))
            .collect();
        let obs = m_obs(&format!("({})", text.join(";")));
        let pp = perturb(&base, &ratio(1, den), &scheme).unwrap();
        let r = posterior(&obs, &pp, &GameParams::standard(), obs.stages()).unwrap();
        for e in &r.explanations {
            prop_assert!(e.prob.lo > Rational::zero());
        }
        let total = sum(r.explanations.iter().map(|e| e.mass.clone()));
        prop_assert_eq!(total, Interval::point(Rational::one()));
        prop_assert!(to_f64(&r.classes.iter().map(|c| c.mass.midpoint()).sum::<Rational>()) > 0.999_999);
    }

    #[test]
    fn action_probabilities_sum_to_one(den in 3i64..60, owner in 0usize..3, c_first in any::<bool>()) {
        let who = PlayerId::ALL[owner];
        let (base, scheme) = enforcement_setup();
        let pp = perturb(&base, &ratio(2, den), &scheme).unwrap();
        let rec = if who == PlayerId::M {
            m_obs(if c_first { "(X1CC)" } else { "(X2DC)" }).entries
        } else {
            parse_observation(if c_first { "(CC)" } else { "(CD)" }, who).unwrap().entries
        };
        let opp = (who == PlayerId::M).then_some(Seat::X1);
        let c = pp.action_prob(who, &rec, opp, Action::C).unwrap();
        let d = pp.action_prob(who, &rec, opp, Action::D).unwrap();
        let s = &c.prob + &d.prob;
        prop_assert!(s.contains(&Rational::one()));
        prop_assert!(c.prob.lo > Rational::zero() && d.prob.lo > Rational::zero());
    }
}

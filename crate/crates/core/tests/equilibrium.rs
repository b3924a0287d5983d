use num_traits::{Signed, Zero};
use tpe_core::equilibrium::{
    bounded_deviation_search, check_case, contagious_gain, contagious_threshold, reevaluate, verify_theorem, InfoSet,
    Relation, SearchOptions,
};
use tpe_core::payoff::value_at;
use tpe_core::rational::{int, ratio};
use tpe_core::strategy::{apply_deviation, Continuation, DeviationPlan, Profile, Trigger};
use tpe_core::{Action, Error, Game, History, PayoffMatrix, PlayerId, Rational, Seat};

fn values(case: u8, game: &Game) -> (Rational, Vec<Rational>) {
    let r = check_case(case, game).unwrap();
    assert!(r.consistent(), "case {case}: {:?}", r.cross_checks);
    (r.conform.value, r.deviations.into_iter().map(|d| d.value).collect())
}

#[test]
fn quoted_case_values() {
    let g = Game::standard();
    assert_eq!(values(2, &g), (ratio(375, 2), vec![ratio(335, 2)]));
    assert_eq!(values(3, &g), (int(235), vec![int(225)]));
    assert_eq!(values(4, &g), (ratio(2205, 8), vec![ratio(2045, 8)]));
    assert_eq!(values(5, &g), (ratio(335, 2), vec![ratio(1305, 8), ratio(321, 2)]));
    assert_eq!(values(6, &g), (ratio(12225, 64), vec![ratio(1505, 8)]));
    for case in 1..=6 {
        assert!(check_case(case, &g).unwrap().holds, "case {case}");
    }
}

#[test]
fn full_profile_values_are_cross_checked_exactly() {
    let g = Game::standard();
    for case in [2, 5, 6] {
        let r = check_case(case, &g).unwrap();
        let equal: Vec<_> = r
            .cross_checks
            .iter()
            .filter(|c| c.relation == Relation::Equal)
            .collect();
        assert!(!equal.is_empty(), "case {case}");
        for c in equal {
            assert_eq!(c.closed_form, c.chain, "case {case}: {}", c.label);
        }
    }
}

#[test]
fn case_one_compares_stage_payoffs() {
    let r = check_case(1, &Game::standard()).unwrap();
    assert_eq!(r.conform.value, int(45));
    assert_eq!(r.deviations[0].value, int(10));
    assert!(r.holds && r.consistent());
    assert!(r.cross_checks.iter().any(|c| c.relation == Relation::Structural));
}

#[test]
fn unknown_case_is_rejected() {
    assert!(check_case(0, &Game::standard()).is_err());
    assert!(check_case(7, &Game::standard()).is_err());
}

#[test]
fn threshold_brackets_the_quadratic_root() {
    let t = contagious_threshold(&PayoffMatrix::standard()).unwrap();
    assert!(&t.upper - &t.lower <= ratio(1, 1_000_000_000));
    assert!(t.gain_lower.is_negative() || t.gain_lower.is_zero());
    assert!(t.gain_upper.is_positive() || t.gain_upper.is_zero());
    let root = (-1.0 + (1.0f64 + 17.6).sqrt()) / 4.4;
    assert!(t.quadratic_in_bracket);
    assert!((t.quadratic_root - root).abs() < 1e-12);
    assert_eq!(t.render(6), "0.752903");
    // 2.2δ² + δ - 2 at the endpoints, scaled by 5
    let q = |d: &Rational| int(11) * d * d + int(5) * d - int(10);
    assert!(!q(&t.lower).is_positive() && !q(&t.upper).is_negative());
}

#[test]
fn threshold_separates_gain_signs_on_a_grid() {
    let m = PayoffMatrix::standard();
    let t = contagious_threshold(&m).unwrap();
    for k in 1..200 {
        let d = ratio(k, 200);
        let g = contagious_gain(&m, &d);
        if d < t.lower {
            assert!(g.is_negative(), "δ={d}");
        } else if d > t.upper {
            assert!(g.is_positive(), "δ={d}");
        }
    }
    assert_eq!(contagious_gain(&m, &ratio(3, 4)), ratio(-5, 8));
}

#[test]
fn threshold_needs_an_interior_root() {
    let m = PayoffMatrix::unchecked(int(70), int(75), int(45), int(10));
    assert!(matches!(
        contagious_threshold(&m),
        Err(Error::NoInteriorThreshold { .. })
    ));
}

#[test]
fn theorem_holds_at_three_quarters() {
    let r = verify_theorem(&Game::standard(), 3).unwrap();
    assert!(r.verdict);
    assert!(r.cases.iter().all(|c| c.holds && c.consistent()));
    for s in &r.searches {
        assert!(!s.best_gain.is_positive(), "{:?}", s.deviator);
        assert!(s.plans_tried > 0 && !s.incomplete);
    }
}

#[test]
fn theorem_fails_at_seven_tenths() {
    let g = Game::standard().with_delta(ratio(7, 10)).unwrap();
    let r = verify_theorem(&g, 3).unwrap();
    assert!(!r.verdict);
    let failing: Vec<u8> = r.cases.iter().filter(|c| !c.holds).map(|c| c.case).collect();
    assert_eq!(failing, vec![6]);
    let c6 = &r.cases[5];
    assert_eq!(c6.conform.value, ratio(2649, 16));
    assert_eq!(c6.deviations[0].value, ratio(687, 4));
}

#[test]
fn theorem_fails_at_one_half() {
    let g = Game::standard().with_delta(ratio(1, 2)).unwrap();
    let r = verify_theorem(&g, 2).unwrap();
    assert!(!r.verdict);
    assert!(r.cases.iter().filter(|c| !c.holds).count() >= 2);
}

#[test]
fn contagious_profile_admits_the_all_d_deviation() {
    let base = Profile::uniform("contagious").unwrap();
    let r = bounded_deviation_search(PlayerId::X1, &base, &Game::standard(), &SearchOptions::depth(1)).unwrap();
    assert_eq!(r.best_gain, ratio(5, 8));
    let w = r.witness.unwrap();
    assert!(w.info_set.record.is_empty());
    let r3 = bounded_deviation_search(PlayerId::X1, &base, &Game::standard(), &SearchOptions::depth(3)).unwrap();
    assert!(r3.best_gain >= ratio(5, 8));
}

#[test]
fn witnesses_reproduce_their_gain() {
    let game = Game::standard();
    let delta_game = game.with_delta(ratio(7, 10)).unwrap();
    let contagious = Profile::uniform("contagious").unwrap();
    let sigma = Profile::uniform("sigma").unwrap();
    for (base, g) in [(&contagious, &game), (&sigma, &delta_game), (&sigma, &game)] {
        for who in [PlayerId::X1, PlayerId::M] {
            let r = bounded_deviation_search(who, base, g, &SearchOptions::depth(2)).unwrap();
            let w = r.witness.expect("something was tried");
            assert_eq!(reevaluate(base, g, &w.info_set, &w.plan).unwrap(), w.gain);
        }
    }
}

#[test]
fn plan_cap_marks_the_search_incomplete() {
    let mut opts = SearchOptions::depth(3);
    opts.plan_cap = 5;
    let r = bounded_deviation_search(
        PlayerId::X1,
        &Profile::uniform("sigma").unwrap(),
        &Game::standard(),
        &opts,
    )
    .unwrap();
    assert!(r.incomplete);
    assert_eq!(r.plans_tried, 5);
}

#[test]
fn depth_zero_is_rejected() {
    let r = bounded_deviation_search(
        PlayerId::X1,
        &Profile::uniform("sigma").unwrap(),
        &Game::standard(),
        &SearchOptions::depth(0),
    );
    assert!(r.is_err());
}

#[test]
fn search_restricted_to_one_information_set() {
    let mut opts = SearchOptions::depth(3);
    opts.only = Some(InfoSet {
        owner: PlayerId::X1,
        record: vec![],
        opponent: None,
    });
    let r = bounded_deviation_search(
        PlayerId::X1,
        &Profile::uniform("sigma").unwrap(),
        &Game::standard(),
        &opts,
    )
    .unwrap();
    assert_eq!(r.info_sets, 1);
    assert!(r.best_gain.is_zero());
}

// Under the enforcement profile taken literally, M keeps cooperating with X1
// after the opening (CD) while X1 does not know whether M has been told.
// Playing C at that point then defecting forever pays more than the
// prescribed D, so the case is evaluated against a contagious M.
#[test]
fn literal_profile_after_unilateral_opening_defection() {
    let g = Game::standard();
    let sigma = Profile::uniform("sigma").unwrap();
    let h = History::opening(Action::C, Action::D);
    let record = h.project(PlayerId::X1).entries;
    let run = |actions: &[Action], cont| {
        let plan = DeviationPlan::sequence(Trigger::at(record.clone(), None), actions, cont);
        let dev = sigma
            .with(PlayerId::X1, apply_deviation(sigma.get(PlayerId::X1), &plan))
            .unwrap();
        value_at(&dev, &g, &h, Some(Seat::X1)).unwrap()[PlayerId::X1].clone()
    };
    let conform = value_at(&sigma, &g, &h, Some(Seat::X1)).unwrap()[PlayerId::X1].clone();
    assert_eq!(conform, ratio(335, 2));
    assert_eq!(run(&[Action::C], Continuation::AllD), ratio(10935, 64));
    assert_eq!(run(&[Action::C], Continuation::Conform), ratio(10935, 64));
    assert!(run(&[Action::C], Continuation::AllD) > conform);
    assert_eq!(check_case(5, &g).unwrap().conform.value, conform);
    assert!(check_case(5, &g).unwrap().holds);
}

//! Incentive analysis: the contagious discount threshold, the six cases of
//! the enforcement profile and a bounded search over unilateral deviations.

mod cases;
mod search;
mod threshold;

use alloc::vec::Vec;

pub use cases::{check_case, CaseReport, CrossCheck, NamedValue, Relation};
pub use search::{
    bounded_deviation_search, evaluate_plan, on_path_info_sets, reevaluate, InfoSet, Node, SearchOptions, SearchReport,
    Witness, DEFAULT_PLAN_CAP,
};
pub use threshold::{contagious_gain, contagious_threshold, ThresholdResult};

use num_traits::Signed;

use crate::error::Result;
use crate::game::{Game, PlayerId};
use crate::strategy::Profile;

pub const DEFAULT_SEARCH_DEPTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumReport {
    pub game: Game,
    pub cases: Vec<CaseReport>,
    pub searches: Vec<SearchReport>,
    /// Every case holds and no searched deviation gains.
    pub verdict: bool,
}

/// Runs all six cases, then searches deviations by `X1` and `M` against the
/// enforcement profile.
pub fn verify_theorem(game: &Game, depth: usize) -> Result<EquilibriumReport> {
    let cases = (1..=6).map(|c| check_case(c, game)).collect::<Result<Vec<_>>>()?;
    let base = Profile::uniform("sigma")?;
    let opts = SearchOptions::depth(depth);
    let searches = [PlayerId::X1, PlayerId::M]
        .into_iter()
        .map(|who| bounded_deviation_search(who, &base, game, &opts))
        .collect::<Result<Vec<_>>>()?;
    let verdict = cases.iter().all(|c| c.holds) && searches.iter().all(|s| !s.best_gain.is_positive());
    Ok(EquilibriumReport {
        game: game.clone(),
        cases,
        searches,
        verdict,
    })
}

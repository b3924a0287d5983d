//! Serializable report shapes. Exact rationals are written as decimal
//! strings for numerator and denominator, plus a rounded rendering.

use serde::Serialize;
use tpe_core::belief::{ClassMass, EpsOrder, Explanation, Interval, LimitReport, PosteriorReport, TrembleClass};
use tpe_core::equilibrium::{CaseReport, EquilibriumReport, SearchReport, ThresholdResult};
use tpe_core::notation::format_history;
use tpe_core::payoff::{BoundPair, SimulationReport};
use tpe_core::rational::format_decimal;
use tpe_core::{Game, PlayerId, Rational};

pub const SCHEMA_VERSION: u32 = 1;

const DECIMAL_PLACES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

pub fn decimal(q: &Rational) -> String {
    let s = format_decimal(q, DECIMAL_PLACES);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
            decimal: decimal(q),
        }
    }
}

fn rat(q: &Rational) -> RationalJson {
    q.into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalJson {
    pub lo: RationalJson,
    pub hi: RationalJson,
    pub exact: bool,
}

impl From<&Interval> for IntervalJson {
    fn from(i: &Interval) -> Self {
        IntervalJson {
            lo: rat(&i.lo),
            hi: rat(&i.hi),
            exact: i.is_point(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameJson {
    #[serde(rename = "T")]
    pub t: RationalJson,
    #[serde(rename = "R")]
    pub r: RationalJson,
    #[serde(rename = "P")]
    pub p: RationalJson,
    #[serde(rename = "S")]
    pub s: RationalJson,
    pub delta: RationalJson,
    pub match_prob: RationalJson,
}

impl From<&Game> for GameJson {
    fn from(g: &Game) -> Self {
        GameJson {
            t: rat(g.payoffs.t()),
            r: rat(g.payoffs.r()),
            p: rat(g.payoffs.p()),
            s: rat(g.payoffs.s()),
            delta: rat(g.delta()),
            match_prob: rat(g.params.match_prob()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundJson {
    pub lower: RationalJson,
    pub upper: RationalJson,
}

impl From<&BoundPair> for BoundJson {
    fn from(b: &BoundPair) -> Self {
        BoundJson {
            lower: rat(&b.lower),
            upper: rat(&b.upper),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StartJson {
    pub history: String,
    pub selected: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlayerValueJson {
    pub player: String,
    pub exact: RationalJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationJson {
    pub runs: u64,
    pub horizon: u32,
    pub seed: u64,
    pub players: Vec<SimulatedPlayerJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulatedPlayerJson {
    pub player: String,
    pub mean: f64,
    pub std_error: f64,
    pub tail_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<RationalJson>,
    /// `|mean - exact| < 3 (std_error + tail_bound)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
}

impl SimulationJson {
    pub fn new(r: &SimulationReport, seed: u64, exact: Option<&[Rational; 3]>) -> Self {
        let players = PlayerId::ALL
            .iter()
            .map(|&who| {
                let k = who.index();
                let ex = exact.map(|e| &e[k]);
                SimulatedPlayerJson {
                    player: who.to_string(),
                    mean: r.mean[k],
                    std_error: r.std_error[k],
                    tail_bound: r.tail_bound[k],
                    exact: ex.map(rat),
                    agrees: ex.map(|e| {
                        (r.mean[k] - tpe_core::rational::to_f64(e)).abs() < 3.0 * (r.std_error[k] + r.tail_bound[k])
                    }),
                }
            })
            .collect();
        SimulationJson {
            runs: r.runs,
            horizon: r.horizon,
            seed,
            players,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffJson {
    pub game: GameJson,
    pub profile: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<StartJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u32>,
    pub values: Vec<PlayerValueJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateJson {
    pub game: GameJson,
    pub profile: String,
    pub simulation: SimulationJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedJson {
    pub label: String,
    pub value: RationalJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckJson {
    pub label: String,
    pub relation: String,
    pub closed_form: Option<RationalJson>,
    pub chain: Option<RationalJson>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseJson {
    pub case: u8,
    pub player: String,
    pub info_set: String,
    pub conform: NamedJson,
    pub deviations: Vec<NamedJson>,
    pub holds: bool,
    pub cross_checks: Vec<CrossCheckJson>,
}

impl From<&CaseReport> for CaseJson {
    fn from(c: &CaseReport) -> Self {
        let named = |label: &str, value: &Rational| NamedJson {
            label: label.into(),
            value: rat(value),
        };
        CaseJson {
            case: c.case,
            player: c.player.to_string(),
            info_set: c.info_set.clone(),
            conform: named(&c.conform.label, &c.conform.value),
            deviations: c.deviations.iter().map(|d| named(&d.label, &d.value)).collect(),
            holds: c.holds,
            cross_checks: c
                .cross_checks
                .iter()
                .map(|x| CrossCheckJson {
                    label: x.label.clone(),
                    relation: x.relation.to_string(),
                    closed_form: x.closed_form.as_ref().map(rat),
                    chain: x.chain.as_ref().map(rat),
                    ok: x.ok,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub info_set: String,
    pub plan: String,
    pub gain: RationalJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchJson {
    pub deviator: String,
    pub depth: usize,
    pub info_sets: usize,
    pub plans_tried: usize,
    pub best_gain: RationalJson,
    pub witness: Option<WitnessJson>,
    pub incomplete: bool,
}

impl From<&SearchReport> for SearchJson {
    fn from(s: &SearchReport) -> Self {
        SearchJson {
            deviator: s.deviator.to_string(),
            depth: s.depth,
            info_sets: s.info_sets,
            plans_tried: s.plans_tried,
            best_gain: rat(&s.best_gain),
            witness: s.witness.as_ref().map(|w| WitnessJson {
                info_set: w.info_set.describe(),
                plan: w.plan.describe(),
                gain: rat(&w.gain),
            }),
            incomplete: s.incomplete,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckJson {
    pub game: GameJson,
    pub cases: Vec<CaseJson>,
    pub searches: Vec<SearchJson>,
    pub verdict: bool,
}

impl From<&EquilibriumReport> for CheckJson {
    fn from(r: &EquilibriumReport) -> Self {
        CheckJson {
            game: (&r.game).into(),
            cases: r.cases.iter().map(Into::into).collect(),
            searches: r.searches.iter().map(Into::into).collect(),
            verdict: r.verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdJson {
    pub interior: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<RationalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<RationalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gain_lower: Option<RationalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gain_upper: Option<RationalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_star: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic_root: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic_in_bracket: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl From<&ThresholdResult> for ThresholdJson {
    fn from(t: &ThresholdResult) -> Self {
        ThresholdJson {
            interior: true,
            lower: Some(rat(&t.lower)),
            upper: Some(rat(&t.upper)),
            gain_lower: Some(rat(&t.gain_lower)),
            gain_upper: Some(rat(&t.gain_upper)),
            delta_star: Some(t.render(6)),
            quadratic_root: Some(t.quadratic_root),
            quadratic_in_bracket: Some(t.quadratic_in_bracket),
            message: None,
        }
    }
}

impl ThresholdJson {
    pub fn none(message: String) -> Self {
        ThresholdJson {
            interior: false,
            lower: None,
            upper: None,
            gain_lower: None,
            gain_upper: None,
            delta_star: None,
            quadratic_root: None,
            quadratic_in_bracket: None,
            message: Some(message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderJson {
    pub slow: u32,
    pub fast: u32,
    pub text: String,
}

impl From<&EpsOrder> for OrderJson {
    fn from(o: &EpsOrder) -> Self {
        OrderJson {
            slow: o.slow,
            fast: o.fast,
            text: o.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplanationJson {
    pub history: String,
    pub class: String,
    pub mass: IntervalJson,
    pub order: OrderJson,
    pub trembles: Vec<String>,
}

impl From<&Explanation> for ExplanationJson {
    fn from(e: &Explanation) -> Self {
        ExplanationJson {
            history: format_history(&e.history),
            class: e.class.to_string(),
            mass: (&e.mass).into(),
            order: (&e.order).into(),
            trembles: e
                .trembles
                .iter()
                .map(|t| {
                    let size = match t.class {
                        TrembleClass::Fast => "ε",
                        TrembleClass::Slow => "ε^(1/ε)",
                    };
                    format!("stage {} by {} ({size})", t.stage, t.player)
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassJson {
    pub class: String,
    pub mass: IntervalJson,
    pub order: OrderJson,
    pub members: usize,
}

impl From<&ClassMass> for ClassJson {
    fn from(c: &ClassMass) -> Self {
        ClassJson {
            class: c.class.to_string(),
            mass: (&c.mass).into(),
            order: (&c.order).into(),
            members: c.members,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosteriorJson {
    pub eps: RationalJson,
    pub explanations: Vec<ExplanationJson>,
    pub classes: Vec<ClassJson>,
    pub limit_class: Option<String>,
}

impl From<&PosteriorReport> for PosteriorJson {
    fn from(r: &PosteriorReport) -> Self {
        PosteriorJson {
            eps: rat(&r.eps),
            explanations: r.explanations.iter().map(Into::into).collect(),
            classes: r.classes.iter().map(Into::into).collect(),
            limit_class: r.limit_class.map(|c| c.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitClassJson {
    pub class: String,
    pub order: OrderJson,
    pub masses: Vec<IntervalJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitJson {
    pub classes: Vec<LimitClassJson>,
    pub dominant: Vec<Option<String>>,
    pub limit_class: Option<String>,
    pub stable: bool,
    pub monotone: bool,
}

impl From<&LimitReport> for LimitJson {
    fn from(r: &LimitReport) -> Self {
        LimitJson {
            classes: r
                .classes
                .iter()
                .map(|c| LimitClassJson {
                    class: c.class.to_string(),
                    order: (&c.order).into(),
                    masses: c.masses.iter().map(Into::into).collect(),
                })
                .collect(),
            dominant: r.dominant.iter().map(|d| d.map(|c| c.to_string())).collect(),
            limit_class: r.limit_class.map(|c| c.to_string()),
            stable: r.stable,
            monotone: r.monotone,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeliefsJson {
    pub observation: String,
    pub owner: String,
    pub scheme: String,
    pub profile: String,
    pub posteriors: Vec<PosteriorJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitJson>,
}

/// Everything a command can print.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Body {
    Payoff(PayoffJson),
    Simulate(SimulateJson),
    Check(CheckJson),
    Threshold(ThresholdJson),
    Beliefs(BeliefsJson),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub schema_version: u32,
    pub command: &'static str,
    #[serde(flatten)]
    pub body: Body,
}

impl Envelope {
    pub fn new(command: &'static str, body: Body) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            command,
            body,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tpe_core::rational::ratio;

    #[test]
    fn rational_shape() {
        let j = serde_json::to_string(&RationalJson::from(&ratio(12225, 64))).unwrap();
        assert_eq!(j, r#"{"num":"12225","den":"64","decimal":"191.015625"}"#);
        assert_eq!(decimal(&ratio(-5, 8)), "-0.625");
        assert_eq!(decimal(&ratio(1, 3)), "0.333333333333");
        assert_eq!(decimal(&ratio(0, 1)), "0");
    }
}

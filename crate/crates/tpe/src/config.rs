//! Run configuration: a JSON file, command-line flags on top of it, and
//! the validated values the engines consume.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tpe_core::belief::TrembleScheme;
use tpe_core::notation::{parse_concrete, parse_history, parse_observation};
use tpe_core::rational::{int, parse_rational, ratio};
use tpe_core::strategy::{apply_deviation, Continuation, DeviationPlan, Profile, Trigger};
use tpe_core::{Action, Game, GameParams, History, PayoffMatrix, PlayerId, PrivateHistory, Rational, Seat};

use crate::error::{config, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    #[default]
    Table,
}

/// A rational written as `"n/d"`, `"n"` or a JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    pub fn parse(&self, what: &str) -> Result<Rational> {
        match self {
            RationalText::Int(n) => Ok(int(*n)),
            RationalText::Text(t) => {
                parse_rational(t).ok_or_else(|| config(format!("{what}: `{t}` is not a rational of the form n/d")))
            }
        }
    }
}

impl From<String> for RationalText {
    fn from(s: String) -> Self {
        RationalText::Text(s)
    }
}

/// A unilateral deviation applied on top of the profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviationSpec {
    pub player: String,
    /// History pattern whose projections start the deviation.
    pub trigger: String,
    #[serde(default)]
    pub opponent: Option<String>,
    /// `(stage offset from the trigger, action)`.
    #[serde(default)]
    pub overrides: Vec<(u32, String)>,
    #[serde(default = "default_continuation")]
    pub continuation: String,
}

fn default_continuation() -> String {
    "conform".into()
}

/// Every setting, all optional. Missing values take defaults when resolved.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "T", default)]
    pub t: Option<RationalText>,
    #[serde(rename = "R", default)]
    pub r: Option<RationalText>,
    #[serde(rename = "P", default)]
    pub p: Option<RationalText>,
    #[serde(rename = "S", default)]
    pub s: Option<RationalText>,
    #[serde(default)]
    pub delta: Option<RationalText>,
    #[serde(default)]
    pub match_prob: Option<RationalText>,
    #[serde(default)]
    pub profile: Option<Vec<String>>,
    #[serde(default)]
    pub deviation: Option<DeviationSpec>,
    #[serde(default)]
    pub from: Option<String>,
    #[serde(default)]
    pub selected: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub horizon: Option<u32>,
    #[serde(default)]
    pub runs: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default)]
    pub observe: Option<String>,
    #[serde(default)]
    pub owner: Option<String>,
    #[serde(default)]
    pub scheme: Option<String>,
    #[serde(default)]
    pub eps: Option<Vec<RationalText>>,
    #[serde(default)]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.into(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::ConfigFile {
            path: path.into(),
            source,
        })
    }

    /// `top` wins wherever it sets a value.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(base, top; t, r, p, s, delta, match_prob, profile, deviation, from, selected, seed,
            horizon, runs, workers, depth, observe, owner, scheme, eps, format)
    }

    fn rational(v: &Option<RationalText>, what: &str, default: Rational) -> Result<Rational> {
        v.as_ref().map_or(Ok(default), |t| t.parse(what))
    }

    /// Payoff matrix, validated unless `check` is false.
    pub fn payoffs(&self, check: bool) -> Result<PayoffMatrix> {
        let std = PayoffMatrix::standard();
        let t = Self::rational(&self.t, "T", std.t().clone())?;
        let r = Self::rational(&self.r, "R", std.r().clone())?;
        let p = Self::rational(&self.p, "P", std.p().clone())?;
        let s = Self::rational(&self.s, "S", std.s().clone())?;
        if check {
            Ok(PayoffMatrix::new(t, r, p, s)?)
        } else {
            Ok(PayoffMatrix::unchecked(t, r, p, s))
        }
    }

    pub fn game(&self) -> Result<Game> {
        let delta = Self::rational(&self.delta, "delta", ratio(3, 4))?;
        let q = Self::rational(&self.match_prob, "match_prob", ratio(1, 2))?;
        Ok(Game::new(self.payoffs(true)?, GameParams::new(delta, q)?))
    }

    /// The named profile with the deviation, if any, applied.
    pub fn profile(&self, default: &str) -> Result<Profile> {
        let names: Vec<String> = match &self.profile {
            None => vec![default.to_string(); 3],
            Some(v) if v.len() == 1 => vec![v[0].clone(); 3],
            Some(v) => v.clone(),
        };
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let base = Profile::from_names(&refs)?;
        match &self.deviation {
            None => Ok(base),
            Some(d) => {
                let who = parse_player(&d.player)?;
                let plan = d.plan(who)?;
                Ok(base.with(who, apply_deviation(base.get(who), &plan))?)
            }
        }
    }

    /// Start history and forced selection for the first stage after it.
    pub fn start(&self) -> Result<Option<(History, Option<Seat>)>> {
        let Some(text) = &self.from else {
            if self.selected.is_some() {
                return Err(config("--selected needs --from"));
            }
            return Ok(None);
        };
        let history = parse_concrete(text).map_err(|e| config(format!("--from: {e}")))?;
        let selected = self.selected.as_deref().map(parse_seat).transpose()?;
        match (history.stages().is_empty(), selected) {
            (true, Some(_)) => Err(config("the opening has no selection; drop --selected")),
            (false, None) => Err(config("--from after the opening needs --selected X1 or X2")),
            _ => Ok(Some((history, selected))),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn horizon(&self, default: u32) -> Result<u32> {
        match self.horizon.unwrap_or(default) {
            0 => Err(config("horizon must be at least 1")),
            h => Ok(h),
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
    }

    pub fn scheme(&self) -> Result<TrembleScheme> {
        Ok(TrembleScheme::named(self.scheme.as_deref().unwrap_or("contagion"))?)
    }

    pub fn observation(&self) -> Result<PrivateHistory> {
        let text = self
            .observe
            .as_deref()
            .ok_or_else(|| config("beliefs needs --observe"))?;
        let owner = self.owner.as_deref().map_or(Ok(PlayerId::M), parse_player)?;
        parse_observation(text, owner).map_err(|e| config(format!("--observe: {e}")))
    }

    pub fn eps(&self) -> Result<Vec<Rational>> {
        match &self.eps {
            None => Ok(vec![ratio(1, 10), ratio(1, 20), ratio(1, 40)]),
            Some(v) if v.is_empty() => Err(config("--eps needs at least one value")),
            Some(v) => v.iter().map(|e| e.parse("eps")).collect(),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

impl DeviationSpec {
    pub fn plan(&self, who: PlayerId) -> Result<DeviationPlan> {
        let pattern = parse_history(&self.trigger)
            .map_err(|e| config(format!("deviation trigger: {e}")))?
            .into_pattern();
        let opponent = self.opponent.as_deref().map(parse_seat).transpose()?;
        let trigger = Trigger::from_pattern(&pattern, who, opponent);
        let overrides = self
            .overrides
            .iter()
            .map(|(k, a)| parse_action(a).map(|a| (*k, a)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DeviationPlan::new(
            trigger,
            overrides,
            parse_continuation(&self.continuation)?,
        ))
    }
}

pub fn parse_player(s: &str) -> Result<PlayerId> {
    match s {
        "X1" => Ok(PlayerId::X1),
        "X2" => Ok(PlayerId::X2),
        "M" => Ok(PlayerId::M),
        _ => Err(config(format!("unknown player `{s}` (expected X1, X2 or M)"))),
    }
}

pub fn parse_seat(s: &str) -> Result<Seat> {
    match s {
        "X1" => Ok(Seat::X1),
        "X2" => Ok(Seat::X2),
        _ => Err(config(format!("unknown seat `{s}` (expected X1 or X2)"))),
    }
}

fn parse_action(s: &str) -> Result<Action> {
    match s {
        "C" => Ok(Action::C),
        "D" => Ok(Action::D),
        _ => Err(config(format!("unknown action `{s}`"))),
    }
}

fn parse_continuation(s: &str) -> Result<Continuation> {
    match s {
        "conform" => Ok(Continuation::Conform),
        "all-d" => Ok(Continuation::AllD),
        "persistent-c" => Ok(Continuation::PersistentC),
        _ => Err(config(format!(
            "unknown continuation `{s}` (expected conform, all-d or persistent-c)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: RunConfig = serde_json::from_str(r#"{"delta": "7/10", "seed": 3, "T": 100}"#).unwrap();
        let flags = RunConfig {
            delta: Some("3/4".to_string().into()),
            ..Default::default()
        };
        let c = file.overlay(flags);
        assert_eq!(c.game().unwrap().delta(), &ratio(3, 4));
        assert_eq!(c.seed(), 3);
    }

    #[test]
    fn decimals_are_rejected() {
        let c = RunConfig {
            delta: Some("0.75".to_string().into()),
            ..Default::default()
        };
        assert!(matches!(c.game(), Err(Error::Config(_))));
        assert!(serde_json::from_str::<RunConfig>(r#"{"delta": 0.75}"#).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"dleta": "3/4"}"#).is_err());
    }

    #[test]
    fn deviation_from_file() {
        let c: RunConfig = serde_json::from_str(
            r#"{"profile": ["contagious"], "deviation": {"player": "X1", "trigger": "()", "continuation": "all-d"}}"#,
        )
        .unwrap();
        let p = c.profile("sigma").unwrap();
        let v = tpe_core::payoff::value_from_start(&p, &c.game().unwrap()).unwrap();
        assert_eq!(v[PlayerId::X1], ratio(1505, 8));
    }

    #[test]
    fn start_needs_a_selection() {
        let c = RunConfig {
            from: Some("(CC)".into()),
            ..Default::default()
        };
        assert!(c.start().is_err());
        let c = RunConfig {
            from: Some("(CC)".into()),
            selected: Some("X2".into()),
            ..Default::default()
        };
        assert_eq!(c.start().unwrap().unwrap().1, Some(Seat::X2));
    }
}

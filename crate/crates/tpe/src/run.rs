use std::thread;

use tpe_core::belief::{limit_check, perturb, posterior};
use tpe_core::equilibrium::{contagious_threshold, verify_theorem, DEFAULT_SEARCH_DEPTH};
use tpe_core::notation::format_history;
use tpe_core::payoff::{simulate_runs, summarize, truncated_value, value_at, value_from_start, SimulationReport};
use tpe_core::strategy::Profile;
use tpe_core::{Game, PlayerId};

use crate::config::RunConfig;
use crate::error::{config, Error, Result};
use crate::json::{
    BeliefsJson, Body, CheckJson, Envelope, PayoffJson, PlayerValueJson, PosteriorJson, SimulateJson, SimulationJson,
    StartJson, ThresholdJson,
};

/// A finished command: its report and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Envelope,
    pub code: u8,
}

impl Outcome {
    fn ok(command: &'static str, body: Body) -> Self {
        Outcome {
            report: Envelope::new(command, body),
            code: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Payoff,
    Check,
    Threshold,
    Beliefs,
    Simulate,
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Payoff => payoff(cfg),
        Command::Check => check(cfg),
        Command::Threshold => threshold(cfg),
        Command::Beliefs => beliefs(cfg),
        Command::Simulate => simulate(cfg),
    }
}

/// Monte Carlo over `runs` runs split across `workers` threads. Each run
/// draws from its own stream, so the result does not depend on `workers`.
pub fn simulate_parallel(
    profile: &Profile,
    game: &Game,
    seed: u64,
    horizon: u32,
    runs: u64,
    workers: usize,
) -> Result<SimulationReport> {
    if runs == 0 {
        return Err(config("simulation needs at least one run"));
    }
    let workers = (workers.max(1) as u64).min(runs);
    let chunk = runs.div_ceil(workers);
    let parts: Vec<Vec<[f64; 3]>> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let range = (w * chunk).min(runs)..((w + 1) * chunk).min(runs);
                s.spawn(move || simulate_runs(profile, game, seed, horizon, range))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation worker panicked"))
            .collect()
    });
    Ok(summarize(game, horizon, &parts.concat()))
}

fn payoff(cfg: &RunConfig) -> Result<Outcome> {
    let game = cfg.game()?;
    let profile = cfg.profile("sigma")?;
    let horizon = cfg.horizon(40)?;
    let start = cfg.start()?;
    let (exact, bounds) = match &start {
        None => (
            value_from_start(&profile, &game)?,
            Some(truncated_value(&profile, &game, horizon)?),
        ),
        Some((h, sel)) => (value_at(&profile, &game, h, *sel)?, None),
    };
    let values = PlayerId::ALL
        .iter()
        .map(|&who| PlayerValueJson {
            player: who.to_string(),
            exact: exact.get(who).into(),
            bounds: bounds.as_ref().map(|b| (&b[who.index()]).into()),
        })
        .collect();
    let runs = cfg.runs.unwrap_or(0);
    let simulation = if runs > 0 && start.is_none() {
        let r = simulate_parallel(&profile, &game, cfg.seed(), horizon, runs, cfg.workers())?;
        Some(SimulationJson::new(&r, cfg.seed(), Some(&exact.0)))
    } else {
        None
    };
    Ok(Outcome::ok(
        "payoff",
        Body::Payoff(PayoffJson {
            game: (&game).into(),
            profile: profile.describe(),
            start: start.map(|(h, sel)| StartJson {
                history: format_history(&h),
                selected: sel.map(|s| s.to_string()),
            }),
            horizon: bounds.is_some().then_some(horizon),
            values,
            simulation,
        }),
    ))
}

fn simulate(cfg: &RunConfig) -> Result<Outcome> {
    let game = cfg.game()?;
    let profile = cfg.profile("sigma")?;
    let horizon = cfg.horizon(60)?;
    let runs = cfg.runs.unwrap_or(100_000);
    let r = simulate_parallel(&profile, &game, cfg.seed(), horizon, runs, cfg.workers())?;
    let exact = value_from_start(&profile, &game)?;
    Ok(Outcome::ok(
        "simulate",
        Body::Simulate(SimulateJson {
            game: (&game).into(),
            profile: profile.describe(),
            simulation: SimulationJson::new(&r, cfg.seed(), Some(&exact.0)),
        }),
    ))
}

fn check(cfg: &RunConfig) -> Result<Outcome> {
    let game = cfg.game()?;
    let depth = cfg.depth.unwrap_or(DEFAULT_SEARCH_DEPTH);
    if depth == 0 {
        return Err(config("search depth must be at least 1"));
    }
    let report = verify_theorem(&game, depth)?;
    let code = if report.verdict { 0 } else { 1 };
    Ok(Outcome {
        report: Envelope::new("check", Body::Check(CheckJson::from(&report))),
        code,
    })
}

fn threshold(cfg: &RunConfig) -> Result<Outcome> {
    let body = match contagious_threshold(&cfg.payoffs(false)?) {
        Ok(t) => ThresholdJson::from(&t),
        Err(e @ tpe_core::Error::NoInteriorThreshold { .. }) => ThresholdJson::none(e.to_string()),
        Err(e) => return Err(Error::Core(e)),
    };
    Ok(Outcome::ok("threshold", Body::Threshold(body)))
}

fn beliefs(cfg: &RunConfig) -> Result<Outcome> {
    let game = cfg.game()?;
    let scheme = cfg.scheme()?;
    let default_base = if scheme.name == "enforcement" {
        "sigma"
    } else {
        "contagious"
    };
    let base = cfg.profile(default_base)?;
    let obs = cfg.observation()?;
    let eps = cfg.eps()?;
    let horizon = cfg.horizon.map_or(obs.stages(), |h| h as usize);
    let posteriors = eps
        .iter()
        .map(|e| {
            Ok(PosteriorJson::from(&posterior(
                &obs,
                &perturb(&base, e, &scheme)?,
                &game.params,
                horizon,
            )?))
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = if eps.len() > 1 {
        Some((&limit_check(&obs, &base, &scheme, &game.params, &eps)?).into())
    } else {
        None
    };
    Ok(Outcome::ok(
        "beliefs",
        Body::Beliefs(BeliefsJson {
            observation: obs.to_string(),
            owner: obs.owner.to_string(),
            scheme: scheme.name.clone(),
            profile: base.describe(),
            posteriors,
            limit,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tpe_core::payoff::simulate as serial;

    #[test]
    fn worker_count_does_not_change_results() {
        let p = Profile::uniform("sigma").unwrap();
        let g = Game::standard();
        let one = serial(&p, &g, 5, 30, 301).unwrap();
        for w in [1, 2, 7, 400] {
            assert_eq!(simulate_parallel(&p, &g, 5, 30, 301, w).unwrap(), one, "workers={w}");
        }
    }
}

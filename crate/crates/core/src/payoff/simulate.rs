use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigInt;
use num_traits::{Float, One, Signed, ToPrimitive};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::game::{stage_payoffs, Action, Game, PlayerId, Seat, StageOutcome};
use crate::rational::{to_f64, Rational};
use crate::strategy::{Profile, StateId};

use super::truncate::tail_bounds;

/// Per-player sample statistics of the discounted payoff of the first
/// `horizon` stages.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub runs: u64,
    pub horizon: u32,
    pub mean: [f64; 3],
    pub std_error: [f64; 3],
    /// Largest possible contribution of the stages past the horizon.
    pub tail_bound: [f64; 3],
}

/// Precomputed stage data for one simulation.
struct Sampler<'a> {
    profile: &'a Profile,
    payoff: [[f64; 2]; 2],
    delta: f64,
    /// `X1` is selected when a uniform `u64` falls below this.
    threshold: u128,
}

impl<'a> Sampler<'a> {
    fn new(profile: &'a Profile, game: &Game) -> Self {
        let mut payoff = [[0.0; 2]; 2];
        for own in Action::ALL {
            for other in Action::ALL {
                payoff[own as usize][other as usize] = to_f64(&stage_payoffs(&game.payoffs, own, other));
            }
        }
        let scaled = game.params.match_prob() * Rational::from_integer(BigInt::one() << 64u32);
        let threshold = scaled.floor().to_integer().to_u128().expect("probability at most 1");
        Sampler {
            profile,
            payoff,
            delta: to_f64(game.delta()),
            threshold,
        }
    }

    fn run(&self, seed: u64, run: u64, horizon: u32) -> [f64; 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(run);
        let p = self.profile;
        let mut states: [StateId; 3] = PlayerId::ALL.map(|w| p.get(w).initial());
        let mut total = [0.0f64; 3];
        let mut weight = 1.0f64;
        for stage in 0..horizon {
            let outcome = if stage == 0 {
                let x1 = p.get(PlayerId::X1).act(states[0], None);
                let x2 = p.get(PlayerId::X2).act(states[1], None);
                total[0] += weight * self.payoff[x1 as usize][x2 as usize];
                total[1] += weight * self.payoff[x2 as usize][x1 as usize];
                StageOutcome::Opening { x1, x2 }
            } else {
                let seat = if u128::from(rng.next_u64()) < self.threshold {
                    Seat::X1
                } else {
                    Seat::X2
                };
                let who = seat.player();
                let x = p.get(who).act(states[who.index()], None);
                let m = p.get(PlayerId::M).act(states[2], Some(seat));
                total[who.index()] += weight * self.payoff[x as usize][m as usize];
                total[2] += weight * self.payoff[m as usize][x as usize];
                StageOutcome::Match { selected: seat, x, m }
            };
            for who in PlayerId::ALL {
                if let Some(obs) = outcome.observe(who) {
                    states[who.index()] = p
                        .get(who)
                        .step(states[who.index()], &obs)
                        .expect("observations of a played stage are valid");
                }
            }
            weight *= self.delta;
        }
        total
    }
}

/// Discounted totals of the runs in `runs`. Run `i` draws its matching from
/// stream `i` of a ChaCha8 generator keyed by `seed`, so any split of the
/// run range across workers gives the same samples.
pub fn simulate_runs(profile: &Profile, game: &Game, seed: u64, horizon: u32, runs: Range<u64>) -> Vec<[f64; 3]> {
    let sampler = Sampler::new(profile, game);
    runs.map(|r| sampler.run(seed, r, horizon)).collect()
}

/// Mean, standard error and tail bound of samples listed in run order.
pub fn summarize(game: &Game, horizon: u32, samples: &[[f64; 3]]) -> SimulationReport {
    let n = samples.len() as f64;
    let mut mean = [0.0; 3];
    let mut std_error = [0.0; 3];
    for k in 0..3 {
        // Shifted by the first sample so identical runs give exactly zero.
        let shift = samples.first().map_or(0.0, |s| s[k]);
        let d = samples.iter().map(|s| s[k] - shift).sum::<f64>() / n;
        mean[k] = shift + d;
        if samples.len() > 1 {
            let var = samples
                .iter()
                .map(|s| (s[k] - shift - d) * (s[k] - shift - d))
                .sum::<f64>()
                / (n - 1.0);
            std_error[k] = Float::sqrt(var / n);
        }
    }
    let tail_bound = PlayerId::ALL.map(|who| to_f64(&tail_bound(game, who, horizon)));
    SimulationReport {
        runs: samples.len() as u64,
        horizon,
        mean,
        std_error,
        tail_bound,
    }
}

/// Seeded Monte Carlo estimate of every player's value from the start.
pub fn simulate(profile: &Profile, game: &Game, seed: u64, horizon: u32, runs: u64) -> Result<SimulationReport> {
    if horizon == 0 || runs == 0 {
        return Err(Error::Invalid(
            "simulation needs a horizon and a run count of at least 1".into(),
        ));
    }
    let samples = simulate_runs(profile, game, seed, horizon, 0..runs);
    Ok(summarize(game, horizon, &samples))
}

/// Upper bound on `|E[truncated payoff] - value|` for `who`.
pub fn tail_bound(game: &Game, who: PlayerId, horizon: u32) -> Rational {
    let t = tail_bounds(game, who, horizon);
    t.lower.abs().max(t.upper.abs())
}

//! Exact analysis of a three-player repeated prisoner's dilemma in which a
//! third player `M` meets `X1` and `X2` at random after their single
//! encounter, each player seeing only the matches it plays.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that decides a
//! result is exact rational arithmetic:
//!
//! * [`game`] and [`notation`]: stage game, histories, private projections
//!   and the textual history grammar.
//! * [`strategy`]: finite automata over private observations (contagious
//!   grim trigger, the third-person enforcement profile, deviation plans).
//! * [`payoff`]: joint Markov reward chains, exact values, truncated
//!   brackets, closed forms and a Monte Carlo oracle.
//! * [`equilibrium`]: discount threshold, per-case incentive checks and a
//!   bounded deviation search.
//! * [`belief`]: trembling perturbations, Bayes posteriors over hidden
//!   histories and their vanishing-tremble limits.
#![no_std]

extern crate alloc;

pub mod belief;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod notation;
pub mod payoff;
pub mod rational;
pub mod strategy;

pub use error::{Error, Result};
pub use game::{
    Action, Game, GameParams, History, HistoryPattern, Observation, PayoffMatrix, PlayerId, PrivateHistory, Seat,
    StageOutcome,
};
pub use rational::Rational;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Format, RunConfig};
use crate::run::Command;

#[derive(Debug, Parser)]
#[command(
    name = "tpe",
    version,
    about = "Third-person enforcement in a three-player repeated prisoner's dilemma"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Discount factor as n/d.
    #[arg(long, global = true)]
    pub delta: Option<String>,
    /// Probability that M meets X1 at each later stage, as n/d.
    #[arg(long, global = true)]
    pub match_prob: Option<String>,
    #[arg(long = "T", global = true)]
    pub t: Option<String>,
    #[arg(long = "R", global = true)]
    pub r: Option<String>,
    #[arg(long = "P", global = true)]
    pub p: Option<String>,
    #[arg(long = "S", global = true)]
    pub s: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub horizon: Option<u32>,
    #[arg(long, global = true)]
    pub runs: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON run configuration; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Exact values, truncation brackets and optional Monte Carlo.
    Payoff(ProfileArgs),
    /// Case analysis and bounded deviation search for the enforcement profile.
    Check {
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Smallest discount factor sustaining the contagious profile.
    Threshold,
    /// Posterior beliefs behind a private observation.
    Beliefs {
        /// Observed history, e.g. "(X1CC;X2DC)" for M.
        #[arg(long)]
        observe: Option<String>,
        /// Whose observation it is (default M).
        #[arg(long)]
        owner: Option<String>,
        /// contagion or enforcement.
        #[arg(long)]
        scheme: Option<String>,
        /// Decreasing tremble sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<String>>,
    },
    /// Monte Carlo estimate next to the exact value.
    Simulate {
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<String>>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Strategies of X1, X2 and M, or one name for all three.
    #[arg(long, value_delimiter = ',')]
    pub profile: Option<Vec<String>>,
    /// Start from this history instead of the beginning.
    #[arg(long)]
    pub from: Option<String>,
    /// Player M meets right after `--from`.
    #[arg(long)]
    pub selected: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
}

impl Cli {
    /// The subcommand and the settings given on the command line.
    pub fn flags(&self) -> (Command, RunConfig) {
        let g = &self.global;
        let mut c = RunConfig {
            t: g.t.clone().map(Into::into),
            r: g.r.clone().map(Into::into),
            p: g.p.clone().map(Into::into),
            s: g.s.clone().map(Into::into),
            delta: g.delta.clone().map(Into::into),
            match_prob: g.match_prob.clone().map(Into::into),
            seed: g.seed,
            horizon: g.horizon,
            runs: g.runs,
            format: g.format,
            ..Default::default()
        };
        let cmd = match &self.command {
            Sub::Payoff(a) => {
                c.profile = a.profile.clone();
                c.from = a.from.clone();
                c.selected = a.selected.clone();
                c.workers = a.workers;
                Command::Payoff
            }
            Sub::Check { depth } => {
                c.depth = *depth;
                Command::Check
            }
            Sub::Threshold => Command::Threshold,
            Sub::Beliefs {
                observe,
                owner,
                scheme,
                eps,
                profile,
            } => {
                c.observe = observe.clone();
                c.owner = owner.clone();
                c.scheme = scheme.clone();
                c.eps = eps.as_ref().map(|v| v.iter().cloned().map(Into::into).collect());
                c.profile = profile.clone();
                Command::Beliefs
            }
            Sub::Simulate { profile, workers } => {
                c.profile = profile.clone();
                c.workers = *workers;
                Command::Simulate
            }
        };
        (cmd, c)
    }
}

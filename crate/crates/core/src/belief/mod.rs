//! Trembling perturbations of a profile, Bayes posteriors over the global
//! histories behind a private observation, and their limits as the
//! trembles vanish.
//!
//! Two tremble sizes are used: `ε`, and `ε^(1/ε)`, which vanishes faster
//! than every power of `ε`. The latter is irrational for most rational `ε`,
//! so probabilities are carried as rational intervals that collapse to
//! points when `1/ε` is an integer.

mod interval;
mod perturb;
mod posterior;
mod scheme;
mod separation;

pub use interval::{eta, ln_bounds, nth_root_bounds, Interval};
pub use perturb::{perturb, ActionProb, PerturbedProfile};
pub use posterior::{
    limit_check, posterior, ClassMass, DeviationClass, EpsOrder, Explanation, LimitClass, LimitReport, PosteriorReport,
    Tremble,
};
pub use scheme::{OwnerSelector, RecordMatch, TrembleClass, TrembleRule, TrembleScheme, SCHEME_NAMES};
pub use separation::{separation_check, SeparationReport};

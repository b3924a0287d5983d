use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::game::{Action, Observation, PlayerId, Seat};

/// Rule-level description of a behavioral strategy. [`compile`] turns it
/// into a finite [`StrategyAutomaton`] by exploring every observation
/// sequence.
pub trait Behavior {
    type State: Clone + Ord + Debug;

    fn owner(&self) -> PlayerId;
    fn initial(&self) -> Self::State;
    /// `opponent` is `Some` exactly when the owner is `M`.
    fn act(&self, state: &Self::State, opponent: Option<Seat>) -> Action;
    fn step(&self, state: &Self::State, obs: &Observation) -> Self::State;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    pub const INITIAL: StateId = StateId(0);

    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    /// Indexed by opponent seat for `M`; both entries equal for `X` players.
    act: [Action; 2],
    /// Indexed by [`obs_code`].
    next: Vec<Option<StateId>>,
    opening: bool,
    label: String,
}

/// Deterministic finite-state behavioral strategy over private observations.
/// State 0 is the initial state (stage 1 for `X` players, stage 2 for `M`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyAutomaton {
    owner: PlayerId,
    name: String,
    nodes: Vec<Node>,
    warning: Option<String>,
}

fn obs_code(obs: &Observation) -> usize {
    match *obs {
        Observation::Opening { own, other } => own.index() * 2 + other.index(),
        Observation::Idle => 4,
        Observation::Played { own, m } => 5 + own.index() * 2 + m.index(),
        Observation::Met { opponent, opp, own } => opponent.index() * 4 + opp.index() * 2 + own.index(),
    }
}

fn code_space(owner: PlayerId) -> usize {
    match owner {
        PlayerId::M => 8,
        _ => 9,
    }
}

/// Explores every reachable `(state, observation)` pair of `behavior`.
pub fn compile<B: Behavior>(behavior: &B, name: impl Into<String>) -> StrategyAutomaton {
    let owner = behavior.owner();
    let opening_start = owner != PlayerId::M;
    let mut ids: BTreeMap<(B::State, bool), StateId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut nodes: Vec<Node> = Vec::new();

    let mut intern = |s: B::State, opening: bool, nodes: &mut Vec<Node>, queue: &mut VecDeque<_>| {
        if let Some(id) = ids.get(&(s.clone(), opening)) {
            return *id;
        }
        let id = StateId(nodes.len() as u32);
        let act = match owner {
            PlayerId::M => [behavior.act(&s, Some(Seat::X1)), behavior.act(&s, Some(Seat::X2))],
            _ => {
                let a = behavior.act(&s, None);
                [a, a]
            }
        };
        nodes.push(Node {
            act,
            next: vec![None; code_space(owner)],
            opening,
            label: format!("{s:?}"),
        });
        ids.insert((s.clone(), opening), id);
        queue.push_back((id, s, opening));
        id
    };

    intern(behavior.initial(), opening_start, &mut nodes, &mut queue);
    while let Some((id, state, opening)) = queue.pop_front() {
        for obs in Observation::alphabet(owner, opening) {
            let succ = behavior.step(&state, &obs);
            let nid = intern(succ, false, &mut nodes, &mut queue);
            nodes[id.index()].next[obs_code(&obs)] = Some(nid);
        }
    }

    StrategyAutomaton {
        owner,
        name: name.into(),
        nodes,
        warning: None,
    }
}

impl StrategyAutomaton {
    pub fn owner(&self) -> PlayerId {
        self.owner
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn initial(&self) -> StateId {
        StateId::INITIAL
    }

    /// Set when a deviation plan could never fire.
    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    pub(crate) fn set_name(&mut self, name: String) {
        self.name = name;
    }

    pub(crate) fn with_warning(mut self, warning: Option<String>) -> Self {
        self.warning = warning;
        self
    }

    pub fn label(&self, state: StateId) -> &str {
        &self.nodes[state.index()].label
    }

    pub fn act(&self, state: StateId, opponent: Option<Seat>) -> Action {
        let node = &self.nodes[state.index()];
        node.act[opponent.map_or(0, Seat::index)]
    }

    /// `None` when `obs` cannot occur in `state` (an opening after stage 1,
    /// or an `M` observation fed to an `X` player).
    pub fn step(&self, state: StateId, obs: &Observation) -> Option<StateId> {
        let node = &self.nodes[state.index()];
        let valid = match obs {
            Observation::Opening { .. } => node.opening,
            Observation::Idle | Observation::Played { .. } => !node.opening && self.owner != PlayerId::M,
            Observation::Met { .. } => self.owner == PlayerId::M,
        };
        if !valid {
            return None;
        }
        node.next[obs_code(obs)]
    }

    /// State after a whole private record.
    pub fn run(&self, record: &[Observation]) -> Option<StateId> {
        record.iter().try_fold(self.initial(), |s, obs| self.step(s, obs))
    }

    /// Action prescribed after `record`.
    pub fn act_after(&self, record: &[Observation], opponent: Option<Seat>) -> Option<Action> {
        self.run(record).map(|s| self.act(s, opponent))
    }

    /// True when the two states prescribe the same actions after every
    /// future observation sequence.
    pub fn equivalent_states(&self, a: StateId, b: StateId) -> bool {
        self.bisimilar(a, self, b)
    }

    /// True when both automata prescribe the same action after every
    /// private history.
    pub fn behaves_like(&self, other: &StrategyAutomaton) -> bool {
        self.owner == other.owner && self.bisimilar(self.initial(), other, other.initial())
    }

    fn bisimilar(&self, a: StateId, other: &StrategyAutomaton, b: StateId) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![(a, b)];
        while let Some((x, y)) = stack.pop() {
            if !seen.insert((x, y)) {
                continue;
            }
            let nx = &self.nodes[x.index()];
            let ny = &other.nodes[y.index()];
            if nx.act != ny.act {
                return false;
            }
            for (cx, cy) in nx.next.iter().zip(&ny.next) {
                match (cx, cy) {
                    (Some(cx), Some(cy)) => stack.push((*cx, *cy)),
                    (None, None) => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

//! The third-person enforcement profile.
//!
//! Through stage 4 the prescription is an explicit table over private
//! records (anything not listed is `D`). From stage 5 on the player follows
//! the contagious grim trigger, seeded from the stage 1–4 record: a `D`
//! received from an opponent flags every opponent, a `D` played flags that
//! opponent, and the consumed allowed defection (the player idle at stage 2
//! defecting against `M` at stage 3) flags nothing on either side.

use alloc::string::String;
use alloc::vec::Vec;

use crate::game::{Action, History, HistoryPattern, Observation, PlayerId, Seat, Slot};
use crate::notation::parse_history;

use super::automaton::Behavior;
use super::grim::{facing, GrimState};

use Action::{C, D};

#[derive(Debug, Clone, Copy)]
pub struct Sigma {
    pub owner: PlayerId,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SigmaState {
    /// Private record through stage 4.
    Record(Vec<Observation>),
    /// Contagious phase from stage 5.
    Grim(GrimState),
}

impl Sigma {
    /// Record length at which the table phase ends (start of stage 5).
    fn table_len(&self) -> usize {
        match self.owner {
            PlayerId::M => 3,
            _ => 4,
        }
    }
}

fn x_table(record: &[Observation]) -> Action {
    use Observation::{Idle, Opening, Played};
    const CC: Observation = Opening { own: C, other: C };
    const PCC: Observation = Played { own: C, m: C };
    match record {
        [] => C,
        [CC] => C,
        [CC, PCC] => C,
        [CC, PCC, PCC] => C,
        [CC, PCC, Idle] => C,
        [CC, Idle, Played { own: D, m: C }] => C,
        [CC, Idle, Idle] => C,
        _ => D,
    }
}

fn m_table(record: &[Observation], vs: Seat) -> Action {
    use Observation::Met;
    match *record {
        [] => C,
        [Met { opp: C, own: C, .. }] => C,
        [Met {
            opponent: i,
            opp: C,
            own: D,
        }] if vs != i => C,
        [Met {
            opponent: i,
            opp: C,
            own: C,
        }, Met {
            opponent: i2,
            opp: C,
            own: C,
        }] if i2 == i && vs == i => C,
        [Met {
            opponent: i, opp: C, ..
        }, Met {
            opponent: i2, opp: C, ..
        }] if i2 == i && vs != i => C,
        [Met {
            opponent: i,
            opp: C,
            own: C,
        }, Met { opponent: j, .. }]
            if j != i && vs == i =>
        {
            C
        }
        [Met {
            opponent: i, opp: C, ..
        }, Met {
            opponent: j,
            opp: D,
            own: C,
        }] if j != i && vs == j => C,
        _ => D,
    }
}

/// Index of the allowed defection inside a complete stage 1–4 record, if any.
fn allowed_defection(owner: PlayerId, record: &[Observation]) -> Option<usize> {
    match owner {
        PlayerId::M => match record {
            [Observation::Met { opponent: i, .. }, Observation::Met {
                opponent: j, opp: D, ..
            }, ..]
                if i != j =>
            {
                Some(1)
            }
            _ => None,
        },
        _ => match record {
            [Observation::Opening { own: C, other: C }, Observation::Idle, Observation::Played { own: D, .. }, ..] => {
                Some(2)
            }
            _ => None,
        },
    }
}

/// Punishment flags carried into stage 5.
pub fn seed_from_record(owner: PlayerId, record: &[Observation]) -> GrimState {
    let allowed = allowed_defection(owner, record);
    let mut grim = GrimState::new();
    for (i, obs) in record.iter().enumerate() {
        if Some(i) != allowed {
            grim.observe(owner, obs);
            continue;
        }
        // Only the partner's side of the allowed match can still trigger.
        match *obs {
            Observation::Played { m, .. } => grim.record(owner, PlayerId::M, m, C),
            Observation::Met { opponent, own, .. } => grim.record(owner, opponent.player(), C, own),
            _ => unreachable!("allowed defection is always a match"),
        }
    }
    grim
}

impl Behavior for Sigma {
    type State = SigmaState;

    fn owner(&self) -> PlayerId {
        self.owner
    }

    fn initial(&self) -> SigmaState {
        SigmaState::Record(Vec::new())
    }

    fn act(&self, s: &SigmaState, opponent: Option<Seat>) -> Action {
        match s {
            SigmaState::Record(record) => match self.owner {
                PlayerId::M => m_table(record, opponent.expect("M acts against a seat")),
                _ => x_table(record),
            },
            SigmaState::Grim(g) => g.act(facing(self.owner, true, opponent)),
        }
    }

    fn step(&self, s: &SigmaState, obs: &Observation) -> SigmaState {
        match s {
            SigmaState::Record(record) => {
                let mut record = record.clone();
                record.push(*obs);
                if record.len() == self.table_len() {
                    SigmaState::Grim(seed_from_record(self.owner, &record))
                } else {
                    SigmaState::Record(record)
                }
            }
            SigmaState::Grim(g) => {
                let mut g = *g;
                g.observe(self.owner, obs);
                SigmaState::Grim(g)
            }
        }
    }
}

/// One prescription of the profile written over global histories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionLine {
    pub owner: PlayerId,
    /// Stage at which the prescription applies.
    pub stage: usize,
    /// Pattern over the history before that stage.
    pub pattern: HistoryPattern,
    /// `M`'s opponent; `Slot::Any` for `X` lines.
    pub opponent: Slot<Seat>,
    pub action: Action,
    pub text: String,
}

/// `(stage, history template, M's opponent template, action)`; `Xi`/`Xj`
/// are the two distinct seats.
const X_LINES: &[(usize, &str, Action)] = &[
    (1, "()", C),
    (2, "(CC)", C),
    (3, "(CC;XiCC)", C),
    (3, "(CC;XjCC)", D),
    (4, "(CC;XiCC;XiCC)", C),
    (4, "(CC;XiCC;XjZZ)", C),
    (4, "(CC;XjZZ;XiDC)", C),
    (4, "(CC;XjZZ;XjZZ)", C),
];

const M_LINES: &[(usize, &str, &str)] = &[
    (2, "(ZZ)", "Xz"),
    (3, "(ZZ;XzCC)", "Xz"),
    (3, "(ZZ;XiCD)", "Xj"),
    (4, "(ZZ;XiCC;XiCC)", "Xi"),
    (4, "(ZZ;XiCZ;XiCZ)", "Xj"),
    (4, "(ZZ;XiCC;XjZZ)", "Xi"),
    (4, "(ZZ;XiCZ;XjDC)", "Xj"),
];

fn substitute(template: &str, i: Seat) -> String {
    let name = |s: Seat| if s == Seat::X1 { "X1" } else { "X2" };
    template.replace("Xi", name(i)).replace("Xj", name(i.other()))
}

fn pattern(text: &str) -> HistoryPattern {
    parse_history(text)
        .expect("definition table is well-formed")
        .into_pattern()
}

/// The stage 1–4 prescriptions as listed over global histories, with `i`
/// and `j` instantiated to both seat assignments. Unlisted histories get `D`.
pub fn definition_lines() -> Vec<DefinitionLine> {
    let mut out = Vec::new();
    for owner_seat in Seat::ALL {
        for &(stage, template, action) in X_LINES {
            let text = substitute(template, owner_seat);
            out.push(DefinitionLine {
                owner: owner_seat.player(),
                stage,
                pattern: pattern(&text),
                opponent: Slot::Any,
                action,
                text,
            });
        }
    }
    for i in Seat::ALL {
        for &(stage, template, vs) in M_LINES {
            let text = substitute(template, i);
            let opponent = match substitute(vs, i).as_str() {
                "X1" => Slot::Is(Seat::X1),
                "X2" => Slot::Is(Seat::X2),
                _ => Slot::Any,
            };
            let line = DefinitionLine {
                owner: PlayerId::M,
                stage,
                pattern: pattern(&text),
                opponent,
                action: C,
                text,
            };
            if !out.contains(&line) {
                out.push(line);
            }
        }
    }
    out
}

/// Prescription for `owner` after global history `h` (and, for `M`, against
/// `opponent`) read directly off the listed lines. `None` from stage 5 on,
/// where the table no longer applies.
pub fn definition_action(
    lines: &[DefinitionLine],
    owner: PlayerId,
    h: &History,
    opponent: Option<Seat>,
) -> Option<Action> {
    if h.len() >= 4 {
        return None;
    }
    let hit = lines.iter().find(|l| {
        l.owner == owner
            && l.stage == h.len() + 1
            && l.pattern.matches(h)
            && opponent.is_none_or(|o| l.opponent.accepts(o))
    });
    Some(hit.map_or(D, |l| l.action))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::automaton::compile;
    use alloc::vec;
    use Observation::{Idle, Met, Opening, Played};

    const OCC: Observation = Opening { own: C, other: C };

    #[test]
    fn idle_player_takes_the_allowed_defection() {
        let a = compile(&Sigma { owner: PlayerId::X2 }, "sigma");
        assert_eq!(a.act_after(&[OCC, Idle], None), Some(D));
    }

    #[test]
    fn twice_selected_player_cooperates() {
        let a = compile(&Sigma { owner: PlayerId::X1 }, "sigma");
        assert_eq!(a.act_after(&[OCC, Played { own: C, m: C }], None), Some(C));
    }

    #[test]
    fn m_forgives_the_other_after_own_deviation() {
        let a = compile(&Sigma { owner: PlayerId::M }, "sigma");
        let rec = [Met {
            opponent: Seat::X1,
            opp: C,
            own: D,
        }];
        assert_eq!(a.act_after(&rec, Some(Seat::X2)), Some(C));
        assert_eq!(a.act_after(&rec, Some(Seat::X1)), Some(D));
    }

    #[test]
    fn declining_the_allowed_defection_is_unlisted() {
        let a = compile(&Sigma { owner: PlayerId::X2 }, "sigma");
        assert_eq!(a.act_after(&[OCC, Idle, Played { own: C, m: C }], None), Some(D));
    }

    #[test]
    fn seeds() {
        let allowed = [OCC, Idle, Played { own: D, m: C }, Played { own: C, m: C }];
        assert_eq!(seed_from_record(PlayerId::X2, &allowed), GrimState::new());
        let m_rec = [
            Met {
                opponent: Seat::X1,
                opp: C,
                own: C,
            },
            Met {
                opponent: Seat::X2,
                opp: D,
                own: C,
            },
            Met {
                opponent: Seat::X2,
                opp: C,
                own: C,
            },
        ];
        assert_eq!(seed_from_record(PlayerId::M, &m_rec), GrimState::new());
        let m_rec = [
            Met {
                opponent: Seat::X1,
                opp: C,
                own: C,
            },
            Met {
                opponent: Seat::X1,
                opp: D,
                own: C,
            },
            Met {
                opponent: Seat::X2,
                opp: C,
                own: C,
            },
        ];
        assert!(seed_from_record(PlayerId::M, &m_rec).is_full(PlayerId::M));
    }

    #[test]
    fn table_lines_never_conflict() {
        let lines = definition_lines();
        for h in (0..4).flat_map(History::all_with_len) {
            for owner in PlayerId::ALL {
                let ctxs: Vec<Option<Seat>> = match owner {
                    PlayerId::M if h.is_empty() => vec![],
                    PlayerId::M => vec![Some(Seat::X1), Some(Seat::X2)],
                    _ => vec![None],
                };
                for ctx in ctxs {
                    let hits: Vec<_> = lines
                        .iter()
                        .filter(|l| {
                            l.owner == owner
                                && l.stage == h.len() + 1
                                && l.pattern.matches(&h)
                                && ctx.is_none_or(|o| l.opponent.accepts(o))
                        })
                        .map(|l| l.action)
                        .collect();
                    assert!(hits.windows(2).all(|w| w[0] == w[1]), "{owner} {h}");
                }
            }
        }
    }
}

//! Text form of histories.
//!
//! ```text
//! history = "(" [ opening { ";" match } ] ")" ;
//! opening = act act ;
//! match   = sel act act ;
//! sel     = "X1" | "X2" | "Xz" ;
//! act     = "C" | "D" | "Z" ;
//! ```
//!
//! Whitespace between tokens is ignored. `"()"` is the empty history. `M`'s
//! observations are written as a list of matches without an opening, e.g.
//! `"(X1CC;X2DC)"`, and read with [`parse_outcomes`].

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::game::{
    Action, History, HistoryPattern, Observation, PlayerId, PrivateHistory, Seat, Slot, StageOutcome, StagePattern,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Expected(&'static str),
    UnexpectedEnd,
    TrailingInput,
    OpeningNotFirst,
    MatchFirst,
    MissingOpening,
    Wildcard,
}

/// Syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::TrailingInput => f.write_str("trailing input after ')'"),
            ParseErrorKind::OpeningNotFirst => f.write_str("an opening may only appear at stage 1"),
            ParseErrorKind::MatchFirst => f.write_str("stage 1 must be an opening"),
            ParseErrorKind::MissingOpening => f.write_str("expected matches only, found an opening"),
            ParseErrorKind::Wildcard => f.write_str("wildcards are not allowed here"),
        }
    }
}

/// Result of [`parse_history`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedHistory {
    Concrete(History),
    Pattern(HistoryPattern),
}

impl ParsedHistory {
    pub fn into_pattern(self) -> HistoryPattern {
        match self {
            ParsedHistory::Concrete(h) => HistoryPattern::from(&h),
            ParsedHistory::Pattern(p) => p,
        }
    }
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { pos: self.pos, kind }
    }

    fn expect(&mut self, byte: u8, what: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.err(ParseErrorKind::Expected(what))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn act(&mut self) -> Result<Slot<Action>, ParseError> {
        let slot = match self.peek() {
            Some(b'C') => Slot::Is(Action::C),
            Some(b'D') => Slot::Is(Action::D),
            Some(b'Z') => Slot::Any,
            Some(_) => return Err(self.err(ParseErrorKind::Expected("C, D or Z"))),
            None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
        };
        self.pos += 1;
        Ok(slot)
    }

    fn element(&mut self) -> Result<(usize, StagePattern), ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        if self.peek() == Some(b'X') {
            self.pos += 1;
            let sel = match self.peek() {
                Some(b'1') => Slot::Is(Seat::X1),
                Some(b'2') => Slot::Is(Seat::X2),
                Some(b'z') => Slot::Any,
                Some(_) => return Err(self.err(ParseErrorKind::Expected("1, 2 or z after X"))),
                None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
            };
            self.pos += 1;
            let x = self.act()?;
            let m = self.act()?;
            Ok((start, StagePattern::Match(sel, x, m)))
        } else {
            let a = self.act()?;
            let b = self.act()?;
            Ok((start, StagePattern::Opening(a, b)))
        }
    }

    fn list(&mut self) -> Result<Vec<(usize, StagePattern)>, ParseError> {
        self.expect(b'(', "'('")?;
        let mut out = Vec::new();
        if self.peek() == Some(b')') {
            self.pos += 1;
        } else {
            loop {
                out.push(self.element()?);
                match self.peek() {
                    Some(b';') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(_) => return Err(self.err(ParseErrorKind::Expected("';' or ')'"))),
                    None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
                }
            }
        }
        if self.peek().is_some() {
            return Err(self.err(ParseErrorKind::TrailingInput));
        }
        Ok(out)
    }
}

/// Parses a global history; wildcards produce a [`HistoryPattern`].
pub fn parse_history(text: &str) -> Result<ParsedHistory, ParseError> {
    let elements = Lexer::new(text).list()?;
    let mut stages = Vec::with_capacity(elements.len());
    for (i, (pos, el)) in elements.into_iter().enumerate() {
        match (i, &el) {
            (0, StagePattern::Match(..)) => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::MatchFirst,
                })
            }
            (i, StagePattern::Opening(..)) if i > 0 => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::OpeningNotFirst,
                })
            }
            _ => stages.push(el),
        }
    }
    let pattern = HistoryPattern::new(stages).expect("placement checked above");
    Ok(match pattern.to_history() {
        Some(h) => ParsedHistory::Concrete(h),
        None => ParsedHistory::Pattern(pattern),
    })
}

/// Parses a concrete history, rejecting wildcards.
pub fn parse_concrete(text: &str) -> Result<History, ParseError> {
    match parse_history(text)? {
        ParsedHistory::Concrete(h) => Ok(h),
        ParsedHistory::Pattern(_) => Err(ParseError {
            pos: 0,
            kind: ParseErrorKind::Wildcard,
        }),
    }
}

/// Parses a list of concrete matches with no opening, such as a single stage
/// outcome `"(X1CD)"` or `M`'s record `"(X1CC;X2DC)"`.
pub fn parse_outcomes(text: &str) -> Result<Vec<StageOutcome>, ParseError> {
    let elements = Lexer::new(text).list()?;
    let mut out = Vec::with_capacity(elements.len());
    for (pos, el) in elements {
        match el {
            StagePattern::Opening(..) => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::MissingOpening,
                })
            }
            StagePattern::Match(Slot::Is(selected), Slot::Is(x), Slot::Is(m)) => {
                out.push(StageOutcome::Match { selected, x, m })
            }
            StagePattern::Match(..) => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::Wildcard,
                })
            }
        }
    }
    Ok(out)
}

/// Reads what `owner` observed. For `M` the text may omit the opening; a
/// full history is projected onto `owner` either way.
pub fn parse_observation(text: &str, owner: PlayerId) -> Result<PrivateHistory, ParseError> {
    if owner == PlayerId::M {
        if let Ok(matches) = parse_outcomes(text) {
            let entries = matches.iter().filter_map(|o| o.observe(PlayerId::M)).collect();
            return Ok(PrivateHistory::new(owner, entries));
        }
    }
    Ok(parse_concrete(text)?.project(owner))
}

fn push_act(out: &mut String, slot: Slot<Action>) {
    out.push(match slot {
        Slot::Is(a) => a.as_char(),
        Slot::Any => 'Z',
    });
}

fn push_stage(out: &mut String, stage: &StagePattern) {
    match *stage {
        StagePattern::Opening(a, b) => {
            push_act(out, a);
            push_act(out, b);
        }
        StagePattern::Match(sel, x, m) => {
            out.push_str(match sel {
                Slot::Is(Seat::X1) => "X1",
                Slot::Is(Seat::X2) => "X2",
                Slot::Any => "Xz",
            });
            push_act(out, x);
            push_act(out, m);
        }
    }
}

pub fn format_pattern(p: &HistoryPattern) -> String {
    let mut out = String::from("(");
    for (i, stage) in p.stages().iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        push_stage(&mut out, stage);
    }
    out.push(')');
    out
}

/// Canonical text of a history, e.g. `"(CC;X1CD)"`.
pub fn format_history(h: &History) -> String {
    format_pattern(&HistoryPattern::from(h))
}

/// Text of a list of matches (no opening), e.g. `"(X1CC;X2DC)"`.
pub fn format_outcomes(outcomes: &[StageOutcome]) -> String {
    let mut out = String::from("(");
    for (i, o) in outcomes.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        push_stage(&mut out, &StagePattern::from(*o));
    }
    out.push(')');
    out
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_history(self))
    }
}

impl fmt::Display for HistoryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_pattern(self))
    }
}

/// `M`'s record written in the global notation, e.g. `"(X1CC;X2DC)"`.
pub fn format_m_record(entries: &[Observation]) -> String {
    let outcomes: Vec<StageOutcome> = entries
        .iter()
        .filter_map(|e| match *e {
            Observation::Met { opponent, opp, own } => Some(StageOutcome::Match {
                selected: opponent,
                x: opp,
                m: own,
            }),
            _ => None,
        })
        .collect();
    format_outcomes(&outcomes)
}

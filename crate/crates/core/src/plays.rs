//! Justified plays over an arena: legality (alternation, justification,
//! answer uniqueness, visibility), Player/Opponent views, well-bracketing,
//! and a line-oriented textual trace format.
//!
//! A play is a sequence of events, each a move plus an optional pointer to
//! an earlier event (its justifier). Index 0 is the Opponent's opening
//! question; polarities then alternate strictly. A non-initial move must be
//! justified by an event that enables it in the arena, an answer may answer
//! each question at most once, and every pointer must be *visible*: a
//! Player move points into the Player view at that moment, an Opponent move
//! into the Opponent view. Visibility is enforced for both sides alike.

use crate::arena::{Arena, Move, MoveKind, Path, Payload, Polarity};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// One step of a play: a move and the index of its justifier.
#[derive(
    Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Event {
    pub mv: Move,
    pub justifier: Option<usize>,
}

impl Event {
    pub fn new(mv: Move, justifier: Option<usize>) -> Event {
        Event { mv, justifier }
    }
}

/// A justified sequence of events.
#[derive(
    Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Play(pub Vec<Event>);

impl Play {
    pub fn empty() -> Play {
        Play(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The first `n` events as a new play.
    pub fn prefix(&self, n: usize) -> Play {
        Play(self.0[..n].to_vec())
    }

    /// This play extended by one event.
    pub fn snoc(&self, ev: Event) -> Play {
        let mut v = self.0.clone();
        v.push(ev);
        Play(v)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Event> {
        self.0.iter()
    }
}

/// Why a play is illegal, attached to the first offending index.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("move does not belong to the arena")]
    UnknownMove,
    #[error("alternation violated: expected {expected}, found {found}")]
    AlternationViolated { expected: Polarity, found: Polarity },
    #[error("non-initial move lacks a justifier")]
    MissingJustifier,
    #[error("justifier index is not an earlier event")]
    JustifierOutOfRange,
    #[error("justifier does not enable this move")]
    BadEnabling,
    #[error("question was already answered")]
    QuestionAlreadyAnswered,
    #[error("justifier is not visible from here")]
    VisibilityViolated,
}

/// Verdict of [`check_legal`]: legal, or the first violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LegalityReport {
    Legal,
    Illegal { index: usize, violation: Violation },
}

impl LegalityReport {
    pub fn is_legal(&self) -> bool {
        matches!(self, LegalityReport::Legal)
    }
}

impl fmt::Display for LegalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LegalityReport::Legal => write!(f, "legal"),
            LegalityReport::Illegal { index, violation } => {
                write!(f, "illegal at index {index}: {violation}")
            }
        }
    }
}

/// View positions of an already-validated slice of events, computed from the
/// right: a move of the focused polarity steps to its predecessor, a move of
/// the other polarity jumps to its justifier (stopping on an unjustified
/// one). `focus = P` gives the Player view, `focus = O` the Opponent view.
fn view_positions(arena: &Arena, events: &[Event], focus: Polarity) -> Vec<usize> {
    let mut pos = Vec::new();
    if events.is_empty() {
        return pos;
    }
    let mut cur = Some(events.len() - 1);
    while let Some(k) = cur {
        pos.push(k);
        let ev = &events[k];
        let pol = arena
            .polarity_of(&ev.mv)
            .expect("view of a validated play");
        cur = if pol == focus {
            if k == 0 {
                None
            } else {
                Some(k - 1)
            }
        } else {
            ev.justifier
        };
    }
    pos.reverse();
    pos
}

/// A view: the positions (into the original play) it keeps, plus the same
/// events re-indexed so the view stands alone as a play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct View {
    pub positions: Vec<usize>,
    pub play: Play,
}

fn assemble_view(play: &Play, positions: Vec<usize>) -> View {
    let events = positions
        .iter()
        .map(|&p| {
            let ev = &play.0[p];
            let justifier = ev
                .justifier
                .map(|j| {
                    positions
                        .iter()
                        .position(|&q| q == j)
                        .expect("justifier visible inside the view")
                });
            Event { mv: ev.mv.clone(), justifier }
        })
        .collect();
    View { positions, play: Play(events) }
}

/// Full legality check; reports the first violation.
pub fn check_legal(arena: &Arena, play: &Play) -> LegalityReport {
    for i in 0..play.len() {
        if let Some(violation) = step_violation(arena, &play.0[..=i]) {
            return LegalityReport::Illegal { index: i, violation };
        }
    }
    LegalityReport::Legal
}

/// Checks only the last event of `events`, assuming the strict prefix is
/// already legal.
fn step_violation(arena: &Arena, events: &[Event]) -> Option<Violation> {
    let i = events.len() - 1;
    let ev = &events[i];
    if !arena.contains(&ev.mv) {
        return Some(Violation::UnknownMove);
    }
    let pol = arena.polarity_of(&ev.mv).expect("contained move");
    let expected = if i % 2 == 0 { Polarity::O } else { Polarity::P };
    if pol != expected {
        return Some(Violation::AlternationViolated { expected, found: pol });
    }
    match ev.justifier {
        None => {
            if !(ev.mv.is_question() && arena.is_initial(&ev.mv.path)) {
                return Some(Violation::MissingJustifier);
            }
        }
        Some(j) => {
            if j >= i {
                return Some(Violation::JustifierOutOfRange);
            }
            let jm = &events[j].mv;
            let ok = match ev.mv.kind {
                MoveKind::Question => {
                    jm.is_question()
                        && arena
                            .occurrence(&ev.mv.path)
                            .map(|occ| occ.enablers.contains(&jm.path))
                            .unwrap_or(false)
                }
                MoveKind::Answer => jm.is_question() && jm.path == ev.mv.path,
            };
            if !ok {
                return Some(Violation::BadEnabling);
            }
            if ev.mv.is_answer() {
                let reused = events[..i]
                    .iter()
                    .any(|e| e.mv.is_answer() && e.justifier == Some(j));
                if reused {
                    return Some(Violation::QuestionAlreadyAnswered);
                }
            }
            // the justifier must lie in this player's view of the preceding
            // prefix
            let visible = view_positions(arena, &events[..i], pol);
            if !visible.contains(&j) {
                return Some(Violation::VisibilityViolated);
            }
        }
    }
    None
}

/// Whether extending a legal `play` with `ev` stays legal.
pub fn extension_is_legal(arena: &Arena, play: &Play, ev: &Event) -> bool {
    let mut events = play.0.clone();
    events.push(ev.clone());
    step_violation(arena, &events).is_none()
}

/// Every single-event extension of a legal `play` that is again legal.
/// Natural-number answers draw their payloads from `nat_payloads`.
pub fn legal_extensions(arena: &Arena, play: &Play, nat_payloads: &[u64]) -> Vec<Event> {
    let mut out = Vec::new();
    for (path, occ) in &arena.occs {
        let mut moves = vec![Move::question(path.clone())];
        match occ.base {
            crate::syntax::Type::Bool => {
                moves.push(Move::answer(path.clone(), Payload::Bool(true)));
                moves.push(Move::answer(path.clone(), Payload::Bool(false)));
            }
            _ => {
                for &n in nat_payloads {
                    moves.push(Move::answer(path.clone(), Payload::Num(n)));
                }
            }
        }
        for mv in moves {
            let mut justifiers: Vec<Option<usize>> = vec![None];
            justifiers.extend((0..play.len()).map(Some));
            for j in justifiers {
                let ev = Event::new(mv.clone(), j);
                if extension_is_legal(arena, play, &ev) {
                    out.push(ev);
                }
            }
        }
    }
    out
}

/// The Player view of a legal play.
pub fn pview(arena: &Arena, play: &Play) -> Result<View, LegalityReport> {
    view(arena, play, Polarity::P)
}

/// The Opponent view of a legal play.
pub fn oview(arena: &Arena, play: &Play) -> Result<View, LegalityReport> {
    view(arena, play, Polarity::O)
}

fn view(arena: &Arena, play: &Play, focus: Polarity) -> Result<View, LegalityReport> {
    let report = check_legal(arena, play);
    if !report.is_legal() {
        return Err(report);
    }
    Ok(assemble_view(play, view_positions(arena, &play.0, focus)))
}

/// Index of the first answer that does not answer the most recently asked,
/// still-unanswered question; `None` when the play is well-bracketed.
/// Assumes alternation and justification already hold.
pub fn well_bracketing_violation(play: &Play) -> Option<usize> {
    let mut pending: Vec<usize> = Vec::new();
    for (i, ev) in play.0.iter().enumerate() {
        match ev.mv.kind {
            MoveKind::Question => pending.push(i),
            MoveKind::Answer => match ev.justifier {
                Some(j) if pending.last() == Some(&j) => {
                    pending.pop();
                }
                _ => return Some(i),
            },
        }
    }
    None
}

pub fn is_well_bracketed(play: &Play) -> bool {
    well_bracketing_violation(play).is_none()
}

/// Renders one event per line: `<idx> <O|P> <Q|A[payload]> @<path>
/// ^<justifier-idx|->`.
pub fn render_trace(arena: &Arena, play: &Play) -> String {
    let mut out = String::new();
    for (i, ev) in play.0.iter().enumerate() {
        let pol = arena
            .polarity_of(&ev.mv)
            .map(|p| p.to_string())
            .unwrap_or_else(|| "?".to_string());
        let kind = match (&ev.mv.kind, &ev.mv.payload) {
            (MoveKind::Question, _) => "Q".to_string(),
            (MoveKind::Answer, Some(p)) => format!("A[{p}]"),
            (MoveKind::Answer, None) => "A[?]".to_string(),
        };
        let j = ev
            .justifier
            .map(|j| j.to_string())
            .unwrap_or_else(|| "-".to_string());
        out.push_str(&format!("{i} {pol} {kind} @{} ^{j}\n", ev.mv.path));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace line {line}: {msg}")]
pub struct TraceError {
    pub line: usize,
    pub msg: String,
}

/// Parses the [`render_trace`] format back into a play, validating indices
/// and the polarity column against the arena.
pub fn parse_trace(arena: &Arena, text: &str) -> Result<Play, TraceError> {
    let mut events = Vec::new();
    let mut expect_idx = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| TraceError { line: lineno + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(format!("expected 5 fields, got {}", fields.len())));
        }
        let idx: usize = fields[0]
            .parse()
            .map_err(|_| err(format!("bad index {:?}", fields[0])))?;
        if idx != expect_idx {
            return Err(err(format!("expected index {expect_idx}, got {idx}")));
        }
        expect_idx += 1;
        let pol = match fields[1] {
            "O" => Polarity::O,
            "P" => Polarity::P,
            other => return Err(err(format!("bad polarity {other:?}"))),
        };
        let path_field = fields[3]
            .strip_prefix('@')
            .ok_or_else(|| err("path field must start with '@'".to_string()))?;
        let path = Path::parse(path_field)
            .ok_or_else(|| err(format!("bad path {path_field:?}")))?;
        let mv = if fields[2] == "Q" {
            Move::question(path)
        } else if let Some(inner) = fields[2].strip_prefix("A[").and_then(|s| s.strip_suffix(']')) {
            let payload = match inner {
                "tt" => Payload::Bool(true),
                "ff" => Payload::Bool(false),
                n => Payload::Num(
                    n.parse()
                        .map_err(|_| err(format!("bad payload {inner:?}")))?,
                ),
            };
            Move::answer(path, payload)
        } else {
            return Err(err(format!("bad move field {:?}", fields[2])));
        };
        match arena.polarity_of(&mv) {
            Some(p) if p == pol => {}
            Some(p) => return Err(err(format!("polarity column says {pol}, arena says {p}"))),
            None => return Err(err("move not in the arena".to_string())),
        }
        let justifier = match fields[4]
            .strip_prefix('^')
            .ok_or_else(|| err("justifier field must start with '^'".to_string()))?
        {
            "-" => None,
            j => Some(
                j.parse::<usize>()
                    .map_err(|_| err(format!("bad justifier {j:?}")))?,
            ),
        };
        events.push(Event::new(mv, justifier));
    }
    Ok(Play(events))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Step;
    use crate::syntax::parse_type;
    use proptest::prelude::*;

    fn ev(mv: Move, j: Option<usize>) -> Event {
        Event::new(mv, j)
    }

    fn q(steps: &[Step]) -> Move {
        Move::question(Path::of(steps))
    }

    fn a(steps: &[Step], n: u64) -> Move {
        Move::answer(Path::of(steps), Payload::Num(n))
    }

    fn board(src: &str) -> Arena {
        Arena::of_type(&parse_type(src).unwrap())
    }

    /// The eight-event dialogue of the second-order application strategy:
    /// O asks the result, P asks the function argument's result, O asks the
    /// function argument's input, P forwards that question to the second
    /// argument, and the answers n, n, m, m+2 travel back.
    fn second_order_play(n: u64, m: u64) -> Play {
        use Step::*;
        Play(vec![
            ev(q(&[Cod, Cod]), None),
            ev(q(&[Dom, Cod]), Some(0)),
            ev(q(&[Dom, Dom]), Some(1)),
            ev(q(&[Cod, Dom]), Some(0)),
            ev(a(&[Cod, Dom], n), Some(3)),
            ev(a(&[Dom, Dom], n), Some(2)),
            ev(a(&[Dom, Cod], m), Some(1)),
            ev(a(&[Cod, Cod], m + 2), Some(0)),
        ])
    }

    #[test]
    fn second_order_play_is_legal() {
        let arena = board("(N -> N) -> N -> N");
        let play = second_order_play(3, 9);
        assert_eq!(check_legal(&arena, &play), LegalityReport::Legal);
        assert!(is_well_bracketed(&play));
    }

    #[test]
    fn two_opponent_moves_in_a_row_are_illegal() {
        let arena = board("(N -> N) -> N -> N");
        use Step::*;
        let play = Play(vec![
            ev(q(&[Cod, Cod]), None),
            ev(q(&[Cod, Cod]), None),
        ]);
        assert_eq!(
            check_legal(&arena, &play),
            LegalityReport::Illegal {
                index: 1,
                violation: Violation::AlternationViolated {
                    expected: Polarity::P,
                    found: Polarity::O
                }
            }
        );
    }

    #[test]
    fn double_answer_is_illegal() {
        let arena = board("N");
        let play = Play(vec![
            ev(q(&[]), None),
            ev(a(&[], 5), Some(0)),
            ev(q(&[]), None),
            ev(a(&[], 6), Some(0)),
        ]);
        assert_eq!(
            check_legal(&arena, &play),
            LegalityReport::Illegal {
                index: 3,
                violation: Violation::QuestionAlreadyAnswered
            }
        );
    }

    #[test]
    fn unjustified_non_initial_move_is_illegal() {
        let arena = board("N -> N");
        use Step::*;
        let play = Play(vec![
            ev(q(&[Cod]), None),
            ev(q(&[Dom]), None),
        ]);
        assert_eq!(
            check_legal(&arena, &play),
            LegalityReport::Illegal { index: 1, violation: Violation::MissingJustifier }
        );
    }

    #[test]
    fn answering_the_outer_question_early_breaks_bracketing_only() {
        // Legal but not well-bracketed: P answers the opening question while
        // the inner call is still pending.
        let arena = board("(N -> N) -> N -> N");
        use Step::*;
        let play = Play(vec![
            ev(q(&[Cod, Cod]), None),
            ev(q(&[Dom, Cod]), Some(0)),
            ev(q(&[Dom, Dom]), Some(1)),
            ev(a(&[Cod, Cod], 0), Some(0)),
        ]);
        assert_eq!(check_legal(&arena, &play), LegalityReport::Legal);
        assert_eq!(well_bracketing_violation(&play), Some(3));
    }

    #[test]
    fn pview_keeps_the_whole_call_chain_mid_dialogue() {
        // After the fifth event (O answers the second argument) every event
        // so far lies on the view path.
        let arena = board("(N -> N) -> N -> N");
        let play = second_order_play(3, 9).prefix(5);
        let v = pview(&arena, &play).unwrap();
        assert_eq!(v.positions, vec![0, 1, 2, 3, 4]);
        assert_eq!(v.play.0[4].justifier, Some(3));
    }

    #[test]
    fn pview_of_the_full_dialogue_drops_the_inner_exchange() {
        let arena = board("(N -> N) -> N -> N");
        let play = second_order_play(3, 9);
        let v = pview(&arena, &play).unwrap();
        assert_eq!(v.positions, vec![0, 1, 6, 7]);
        // Re-indexed pointers: the answer to the function call points at the
        // call, the final answer at the opening question.
        assert_eq!(v.play.0[2].justifier, Some(1));
        assert_eq!(v.play.0[3].justifier, Some(0));
    }

    #[test]
    fn oview_of_the_full_dialogue_is_the_outer_exchange() {
        let arena = board("(N -> N) -> N -> N");
        let play = second_order_play(3, 9);
        let v = oview(&arena, &play).unwrap();
        assert_eq!(v.positions, vec![0, 7]);
    }

    #[test]
    fn views_of_illegal_plays_are_refused() {
        let arena = board("N");
        let play = Play(vec![ev(a(&[], 1), None)]);
        assert!(pview(&arena, &play).is_err());
    }

    #[test]
    fn trace_round_trip_and_exact_format() {
        let arena = board("(N -> N) -> N -> N");
        let play = second_order_play(3, 9);
        let text = render_trace(&arena, &play);
        assert_eq!(
            text,
            "0 O Q @cod.cod ^-\n\
             1 P Q @dom.cod ^0\n\
             2 O Q @dom.dom ^1\n\
             3 P Q @cod.dom ^0\n\
             4 O A[3] @cod.dom ^3\n\
             5 P A[3] @dom.dom ^2\n\
             6 O A[9] @dom.cod ^1\n\
             7 P A[11] @cod.cod ^0\n"
        );
        assert_eq!(parse_trace(&arena, &text).unwrap(), play);
    }

    #[test]
    fn trace_parse_rejects_wrong_polarity_column() {
        let arena = board("N");
        let text = "0 P Q @ε ^-\n";
        let e = parse_trace(&arena, text).unwrap_err();
        assert!(e.msg.contains("polarity"));
    }

    #[test]
    fn boolean_payloads_in_traces() {
        let arena = board("B");
        let play = Play(vec![
            ev(Move::question(Path::empty()), None),
            ev(Move::answer(Path::empty(), Payload::Bool(true)), Some(0)),
        ]);
        let text = render_trace(&arena, &play);
        assert_eq!(text, "0 O Q @ε ^-\n1 P A[tt] @ε ^0\n");
        assert_eq!(parse_trace(&arena, &text).unwrap(), play);
    }

    // ---- randomized structural properties ----

    fn arb_board() -> impl Strategy<Value = Arena> {
        prop_oneof![
            Just(board("N")),
            Just(board("B")),
            Just(board("N -> N")),
            Just(board("B -> B")),
            Just(board("N -> N -> N")),
            Just(board("(N -> N) -> N -> N")),
            Just(board("(B -> B) -> B")),
            Just(board("((N -> N) -> N) -> N")),
            Just(board("N * N")),
            Just(board("((N -> N) * N) -> N")),
        ]
    }

    /// Drives a random legal play by consuming `choices`.
    fn walk(arena: &Arena, choices: &[u8]) -> Play {
        let mut play = Play::empty();
        for &c in choices {
            let exts = legal_extensions(arena, &play, &[0, 1, 2]);
            if exts.is_empty() {
                break;
            }
            play = play.snoc(exts[c as usize % exts.len()].clone());
        }
        play
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_walks_are_legal_and_prefix_closed(
            arena in arb_board(),
            choices in proptest::collection::vec(any::<u8>(), 0..10),
        ) {
            let play = walk(&arena, &choices);
            prop_assert!(check_legal(&arena, &play).is_legal());
            for n in 0..=play.len() {
                prop_assert!(check_legal(&arena, &play.prefix(n)).is_legal());
            }
        }

        #[test]
        fn views_are_monotone_subsequences_and_idempotent(
            arena in arb_board(),
            choices in proptest::collection::vec(any::<u8>(), 1..10),
        ) {
            let play = walk(&arena, &choices);
            prop_assume!(!play.is_empty());
            for (focus, get) in [
                (Polarity::P, pview as fn(&Arena, &Play) -> Result<View, LegalityReport>),
                (Polarity::O, oview as fn(&Arena, &Play) -> Result<View, LegalityReport>),
            ] {
                let v = get(&arena, &play).unwrap();
                // strictly increasing positions ending at the last event
                prop_assert!(v.positions.windows(2).all(|w| w[0] < w[1]));
                prop_assert_eq!(*v.positions.last().unwrap(), play.len() - 1);
                // events match the original at those positions
                for (k, &p) in v.positions.iter().enumerate() {
                    prop_assert_eq!(&v.play.0[k].mv, &play.0[p].mv);
                }
                // the view, as a play, is its own view
                prop_assert!(check_legal(&arena, &v.play).is_legal());
                let vv = get(&arena, &v.play).unwrap();
                prop_assert_eq!(&vv.play, &v.play);
                let n = v.play.len();
                prop_assert_eq!(vv.positions, (0..n).collect::<Vec<_>>());
                let _ = focus;
            }
        }

        #[test]
        fn odd_prefix_pview_ends_with_opponent_move(
            arena in arb_board(),
            choices in proptest::collection::vec(any::<u8>(), 1..10),
        ) {
            let play = walk(&arena, &choices);
            for n in (1..=play.len()).filter(|n| n % 2 == 1) {
                let v = pview(&arena, &play.prefix(n)).unwrap();
                let last = v.play.0.last().unwrap();
                prop_assert_eq!(arena.polarity_of(&last.mv), Some(Polarity::O));
            }
        }

        #[test]
        fn bracketing_is_prefix_closed(
            arena in arb_board(),
            choices in proptest::collection::vec(any::<u8>(), 0..10),
        ) {
            let play = walk(&arena, &choices);
            if well_bracketing_violation(&play).is_none() {
                for n in 0..=play.len() {
                    prop_assert!(well_bracketing_violation(&play.prefix(n)).is_none());
                }
            }
        }
    }
}

//! Plugging strategies together: parallel interaction on a shared middle
//! board, then hiding the middle.
//!
//! A [`Pipeline`] holds two strategies that agree on a middle component M.
//! In the *plain* flavour σ plays on M itself and τ on `M ⇒ B`; the visible
//! result lives on `B`. In the *arrow* flavour σ plays on `D ⇒ M` and τ on
//! `M ⇒ B`; the result lives on `D ⇒ B`. Either way the two strategies hold
//! complementary views of M — a Player move there for one is an Opponent
//! move for the other — so they can be run against each other with no extra
//! machinery: feed an external Opponent move in, then let whichever strategy
//! has the pending move answer, bouncing through M until control returns to
//! the environment.
//!
//! [`Pipeline::interact`] saturates that dialogue over all external choices
//! and returns the maximal interaction traces; [`Pipeline::hide`] deletes
//! the middle events (re-hanging justification pointers through the deleted
//! part) to leave the visible play set; [`Pipeline::compose`] chains the
//! two. [`Pipeline::compose_lazy`] instead wraps the replay in a strategy
//! whose view function runs the hidden dialogue on demand.

use std::collections::BTreeSet;
use std::rc::Rc;

use thiserror::Error;

use crate::arena::{Arena, Move, MoveKind, Path, Payload, Step};
use crate::plays::{
    extension_is_legal, is_well_bracketed, legal_extensions, Event, Play,
};
use crate::strategy::{PlaySet, Strategy, StrategyError, ViewResponse};
use crate::syntax::Type;

/// Which component of the three-part board an interaction event lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Part {
    /// The visible input component D (absent in the plain flavour).
    Left,
    /// The shared middle component M, hidden by composition.
    Mid,
    /// The visible output component B.
    Right,
}

impl std::fmt::Display for Part {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Part::Left => write!(f, "left"),
            Part::Mid => write!(f, "mid"),
            Part::Right => write!(f, "right"),
        }
    }
}

/// One event of an interaction: a move on one of the three components, with
/// a justification pointer into the interaction sequence and a flag telling
/// whether the environment (rather than one of the two strategies) made it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IEvent {
    pub part: Part,
    /// The move, with its path relative to the component it lives on.
    pub mv: Move,
    pub justifier: Option<usize>,
    pub by_env: bool,
}

/// How an interaction ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum InteractionStatus {
    /// Control is back with the environment; both strategies are content.
    Quiescent,
    /// A strategy was due to move and had no response (divergence by
    /// silence, as with the everywhere-undefined strategy).
    Resting,
    /// The hidden dialogue was still going when fuel ran out — livelock
    /// through the middle board cannot be ruled out.
    FuelExhausted,
}

/// A maximal run of the interaction, with its ending status.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InteractionTrace {
    pub events: Vec<IEvent>,
    pub status: InteractionStatus,
}

/// The saturated family of maximal interaction traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionSet {
    pub traces: Vec<InteractionTrace>,
    /// True when a visible response was cut off by the depth bound, or any
    /// trace ran out of fuel: the family is a truncation, not the whole
    /// behaviour.
    pub frontier_open: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("boards do not plug together: {0} against {1}")]
    ShapeMismatch(Type, Type),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("script move {0} is not a legal visible extension")]
    BadScript(usize),
}

/// Two strategies agreeing on a middle board, ready to interact.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub sigma: Strategy,
    pub tau: Strategy,
    /// The visible input component, when σ itself plays on an arrow board.
    pub left: Option<Type>,
    pub mid: Type,
    pub right: Type,
    pub composite: Rc<Arena>,
}

impl Pipeline {
    /// σ on M against τ on `M ⇒ B`; the composite plays on `B`.
    pub fn plain(sigma: Strategy, tau: Strategy) -> Result<Pipeline, CompositionError> {
        match &tau.arena.shape {
            Type::Arrow(m, b) if **m == sigma.arena.shape => Ok(Pipeline {
                composite: Rc::new(Arena::of_type(b)),
                left: None,
                mid: (**m).clone(),
                right: (**b).clone(),
                sigma,
                tau,
            }),
            _ => Err(CompositionError::ShapeMismatch(
                sigma.arena.shape.clone(),
                tau.arena.shape.clone(),
            )),
        }
    }

    /// σ on `D ⇒ M` against τ on `M ⇒ B`; the composite plays on `D ⇒ B`.
    pub fn arrow(sigma: Strategy, tau: Strategy) -> Result<Pipeline, CompositionError> {
        match (&sigma.arena.shape, &tau.arena.shape) {
            (Type::Arrow(d, m1), Type::Arrow(m2, b)) if m1 == m2 => Ok(Pipeline {
                composite: Rc::new(Arena::of_type(&Type::arrow(
                    (**d).clone(),
                    (**b).clone(),
                ))),
                left: Some((**d).clone()),
                mid: (**m1).clone(),
                right: (**b).clone(),
                sigma,
                tau,
            }),
            _ => Err(CompositionError::ShapeMismatch(
                sigma.arena.shape.clone(),
                tau.arena.shape.clone(),
            )),
        }
    }

    fn is_arrow(&self) -> bool {
        self.left.is_some()
    }

    /// σ's board path for an interaction event.
    fn dress_sigma(&self, part: Part, p: &Path) -> Path {
        if self.is_arrow() {
            match part {
                Part::Left => p.prefixed(Step::Dom),
                Part::Mid => p.prefixed(Step::Cod),
                Part::Right => unreachable!("right events never reach the first strategy"),
            }
        } else {
            p.clone()
        }
    }

    /// τ's board path for an interaction event.
    fn dress_tau(&self, part: Part, p: &Path) -> Path {
        match part {
            Part::Mid => p.prefixed(Step::Dom),
            Part::Right => p.prefixed(Step::Cod),
            Part::Left => unreachable!("left events never reach the second strategy"),
        }
    }

    /// Composite board path for a visible interaction event.
    fn dress_ext(&self, part: Part, p: &Path) -> Path {
        if self.is_arrow() {
            match part {
                Part::Left => p.prefixed(Step::Dom),
                Part::Right => p.prefixed(Step::Cod),
                Part::Mid => unreachable!("middle events are not visible"),
            }
        } else {
            p.clone()
        }
    }

    /// Splits a move of σ's board into its component and relative path.
    fn split_sigma(&self, p: &Path) -> (Part, Path) {
        if self.is_arrow() {
            if let Some(rest) = p.strip(Step::Dom) {
                (Part::Left, rest)
            } else {
                (Part::Mid, p.strip(Step::Cod).expect("arrow board path"))
            }
        } else {
            (Part::Mid, p.clone())
        }
    }

    fn split_tau(&self, p: &Path) -> (Part, Path) {
        if let Some(rest) = p.strip(Step::Dom) {
            (Part::Mid, rest)
        } else {
            (Part::Right, p.strip(Step::Cod).expect("arrow board path"))
        }
    }

    fn split_ext(&self, p: &Path) -> (Part, Path) {
        if self.is_arrow() {
            if let Some(rest) = p.strip(Step::Dom) {
                (Part::Left, rest)
            } else {
                (Part::Right, p.strip(Step::Cod).expect("arrow board path"))
            }
        } else {
            (Part::Right, p.clone())
        }
    }

    /// The three restrictions of an interaction prefix: σ's play, τ's play,
    /// and the visible play, with pointers re-hung into each.
    pub fn restrictions(&self, events: &[IEvent]) -> (Play, Play, Play) {
        let w = Weave::replay(self, events);
        (w.sigma_play, w.tau_play, w.external_play)
    }

    /// The visible restriction alone (the middle component deleted, with
    /// justification chains composed through the deleted events).
    pub fn external_restriction(&self, events: &[IEvent]) -> Play {
        self.restrictions(events).2
    }

    /// Saturates the interaction over all external Opponent choices, up to
    /// `depth` visible rounds per trace and `fuel` events in total per
    /// trace. Returns the maximal traces together with a truncation flag.
    pub fn interact(
        &self,
        depth: usize,
        fuel: u64,
        extra_seeds: &[u64],
    ) -> Result<InteractionSet, CompositionError> {
        let mut traces = Vec::new();
        let mut frontier_open = false;
        let mut queue = vec![Weave::new(self, fuel)];
        while let Some(w) = queue.pop() {
            let p = &w.external_play;
            let at_cutoff = p.len() >= 2 * depth;
            let mut alphabet: BTreeSet<u64> = self.sigma.numeric_hints.clone();
            alphabet.extend(self.tau.numeric_hints.iter().copied());
            alphabet.extend(extra_seeds.iter().copied());
            for ev in p.iter() {
                if let Some(Payload::Num(n)) = ev.mv.payload {
                    alphabet.insert(n);
                }
            }
            let witness = alphabet.iter().max().map(|m| m + 1).unwrap_or(0);
            alphabet.insert(witness);
            let alphabet: Vec<u64> = alphabet.into_iter().collect();
            let mut any_child = false;
            for o_ev in legal_extensions(&self.composite, p, &alphabet) {
                if !p.is_empty() && o_ev.justifier.is_none() {
                    continue; // one opening per trace
                }
                if !is_well_bracketed(&p.snoc(o_ev.clone())) {
                    continue;
                }
                let mut child = w.clone();
                child.feed_external(&o_ev)?;
                match child.run_internal()? {
                    InteractionStatus::Quiescent => {
                        if at_cutoff {
                            frontier_open = true;
                        } else {
                            any_child = true;
                            queue.push(child);
                        }
                    }
                    InteractionStatus::Resting => {
                        any_child = true;
                        traces.push(child.into_trace(InteractionStatus::Resting));
                    }
                    InteractionStatus::FuelExhausted => {
                        any_child = true;
                        frontier_open = true;
                        traces.push(child.into_trace(InteractionStatus::FuelExhausted));
                    }
                }
            }
            if !any_child {
                traces.push(w.into_trace(InteractionStatus::Quiescent));
            }
        }
        traces.sort();
        Ok(InteractionSet { traces, frontier_open })
    }

    /// Runs a single interaction driven by the given external Opponent
    /// moves (justifiers indexing the visible play), filling in everything
    /// the two strategies do between them.
    pub fn run_script(
        &self,
        script: &[Event],
        fuel: u64,
    ) -> Result<InteractionTrace, CompositionError> {
        let mut w = Weave::new(self, fuel);
        let mut status = InteractionStatus::Quiescent;
        for (i, o_ev) in script.iter().enumerate() {
            if status != InteractionStatus::Quiescent
                || !extension_is_legal(&self.composite, &w.external_play, o_ev)
                || !is_well_bracketed(&w.external_play.snoc(o_ev.clone()))
            {
                return Err(CompositionError::BadScript(i));
            }
            w.feed_external(o_ev)?;
            status = w.run_internal()?;
        }
        Ok(w.into_trace(status))
    }

    /// Deletes the middle component from every trace and prefix-closes the
    /// visible remainders into a play set on the composite board.
    pub fn hide(&self, set: &InteractionSet) -> PlaySet {
        let mut plays = BTreeSet::new();
        plays.insert(Play::empty());
        for tr in &set.traces {
            let ext = self.external_restriction(&tr.events);
            let n = ext.len() - ext.len() % 2;
            for k in (2..=n).step_by(2) {
                plays.insert(ext.prefix(k));
            }
        }
        PlaySet {
            arena: self.composite.clone(),
            plays,
            frontier_open: set.frontier_open,
        }
    }

    /// Parallel interaction followed by hiding: the visible play set of the
    /// plugged-together strategies.
    pub fn compose(
        &self,
        depth: usize,
        fuel: u64,
        extra_seeds: &[u64],
    ) -> Result<PlaySet, CompositionError> {
        Ok(self.hide(&self.interact(depth, fuel, extra_seeds)?))
    }

    /// The composite as a strategy: its view function replays the visible
    /// history through the interaction, running the hidden dialogue on
    /// demand. Running out of fuel mid-dialogue is an error (the visible
    /// answer is undetermined), while inner silence is plain no-response.
    pub fn compose_lazy(&self, fuel: u64) -> Strategy {
        let label = format!("{};{}", self.sigma.label, self.tau.label);
        let mut hints = self.sigma.numeric_hints.clone();
        hints.extend(self.tau.numeric_hints.iter().copied());
        let pipe = self.clone();
        let fail = {
            let label = label.clone();
            move || StrategyError::BadResponse { label: label.clone() }
        };
        let rule_label = label.clone();
        Strategy::from_rule(
            self.composite.clone(),
            label,
            hints,
            move |view: &Play| {
                let mut w = Weave::new(&pipe, fuel);
                for i in (0..view.len()).step_by(2) {
                    let ev = &view.0[i];
                    w.feed_external(ev).map_err(|e| match e {
                        CompositionError::Strategy(s) => s,
                        _ => fail(),
                    })?;
                    let status = w.run_internal().map_err(|e| match e {
                        CompositionError::Strategy(s) => s,
                        _ => fail(),
                    })?;
                    let done = i == view.len() - 1;
                    match status {
                        InteractionStatus::Quiescent => {
                            let got = w.external_play.0.get(i + 1).ok_or_else(|| fail())?;
                            if done {
                                return Ok(Some(ViewResponse {
                                    mv: got.mv.clone(),
                                    justifier: got.justifier.ok_or_else(|| fail())?,
                                }));
                            }
                            if *got != view.0[i + 1] {
                                return Err(fail());
                            }
                        }
                        InteractionStatus::Resting => {
                            if done {
                                return Ok(None);
                            }
                            return Err(fail());
                        }
                        InteractionStatus::FuelExhausted => {
                            return Err(StrategyError::FuelExhausted {
                                label: rule_label.clone(),
                            });
                        }
                    }
                }
                Err(fail())
            },
        )
    }
}

/// The incremental interaction state: the event list plus all three
/// restrictions and the index maps between them.
#[derive(Clone)]
struct Weave<'p> {
    pipe: &'p Pipeline,
    events: Vec<IEvent>,
    fuel_left: u64,
    sigma_play: Play,
    tau_play: Play,
    external_play: Play,
    /// Interaction index of each restriction position.
    sigma_idx: Vec<usize>,
    tau_idx: Vec<usize>,
    ext_idx: Vec<usize>,
    /// Restriction position of each interaction event, if it appears there.
    pos_in_sigma: Vec<Option<usize>>,
    pos_in_tau: Vec<Option<usize>>,
    pos_in_ext: Vec<Option<usize>>,
}

impl<'p> Weave<'p> {
    fn new(pipe: &'p Pipeline, fuel: u64) -> Weave<'p> {
        Weave {
            pipe,
            events: Vec::new(),
            fuel_left: fuel,
            sigma_play: Play::empty(),
            tau_play: Play::empty(),
            external_play: Play::empty(),
            sigma_idx: Vec::new(),
            tau_idx: Vec::new(),
            ext_idx: Vec::new(),
            pos_in_sigma: Vec::new(),
            pos_in_tau: Vec::new(),
            pos_in_ext: Vec::new(),
        }
    }

    fn replay(pipe: &'p Pipeline, events: &[IEvent]) -> Weave<'p> {
        let mut w = Weave::new(pipe, 0);
        for e in events {
            w.append(e.part, e.mv.clone(), e.justifier, e.by_env);
        }
        w
    }

    fn append(&mut self, part: Part, mv: Move, ijust: Option<usize>, by_env: bool) {
        let idx = self.events.len();
        let mut in_sigma = None;
        let mut in_tau = None;
        let mut in_ext = None;
        if part != Part::Right {
            let dressed = Move {
                path: self.pipe.dress_sigma(part, &mv.path),
                ..mv.clone()
            };
            let j = ijust.and_then(|j| self.pos_in_sigma[j]);
            in_sigma = Some(self.sigma_play.len());
            self.sigma_idx.push(idx);
            self.sigma_play = self.sigma_play.snoc(Event::new(dressed, j));
        }
        if part != Part::Left {
            let dressed = Move {
                path: self.pipe.dress_tau(part, &mv.path),
                ..mv.clone()
            };
            let j = ijust.and_then(|j| self.pos_in_tau[j]);
            in_tau = Some(self.tau_play.len());
            self.tau_idx.push(idx);
            self.tau_play = self.tau_play.snoc(Event::new(dressed, j));
        }
        if part != Part::Mid {
            let dressed = Move {
                path: self.pipe.dress_ext(part, &mv.path),
                ..mv.clone()
            };
            // Re-hang the pointer through the hidden part: follow the chain
            // of justifiers until it leaves the middle component.
            let mut j = ijust;
            while let Some(k) = j {
                if self.events[k].part == Part::Mid {
                    j = self.events[k].justifier;
                } else {
                    break;
                }
            }
            let j = j.and_then(|j| self.pos_in_ext[j]);
            in_ext = Some(self.external_play.len());
            self.ext_idx.push(idx);
            self.external_play = self.external_play.snoc(Event::new(dressed, j));
        }
        self.pos_in_sigma.push(in_sigma);
        self.pos_in_tau.push(in_tau);
        self.pos_in_ext.push(in_ext);
        self.events.push(IEvent { part, mv, justifier: ijust, by_env });
    }

    /// Feeds one environment move, given with visible-play justifiers.
    fn feed_external(&mut self, o_ev: &Event) -> Result<(), CompositionError> {
        let (part, rel) = self.pipe.split_ext(&o_ev.mv.path);
        let mv = Move { path: rel, ..o_ev.mv.clone() };
        let ijust = o_ev.justifier.map(|j| self.ext_idx[j]);
        if self.fuel_left == 0 {
            return Err(StrategyError::FuelExhausted {
                label: "interaction".into(),
            }
            .into());
        }
        self.fuel_left -= 1;
        self.append(part, mv, ijust, true);
        Ok(())
    }

    /// Bounces the dialogue between the two strategies until control comes
    /// back to the environment, a strategy goes silent, or fuel runs out.
    fn run_internal(&mut self) -> Result<InteractionStatus, CompositionError> {
        loop {
            let sigma_due = self.sigma_play.len() % 2 == 1;
            let tau_due = self.tau_play.len() % 2 == 1;
            debug_assert!(!(sigma_due && tau_due), "both strategies due to move");
            if !sigma_due && !tau_due {
                return Ok(InteractionStatus::Quiescent);
            }
            if self.fuel_left == 0 {
                return Ok(InteractionStatus::FuelExhausted);
            }
            let (resp, part, rel, ijust) = if sigma_due {
                match self.pipe.sigma.respond(&self.sigma_play)? {
                    None => return Ok(InteractionStatus::Resting),
                    Some(ev) => {
                        let (part, rel) = self.pipe.split_sigma(&ev.mv.path);
                        let ijust = ev.justifier.map(|j| self.sigma_idx[j]);
                        (ev.mv, part, rel, ijust)
                    }
                }
            } else {
                match self.pipe.tau.respond(&self.tau_play)? {
                    None => return Ok(InteractionStatus::Resting),
                    Some(ev) => {
                        let (part, rel) = self.pipe.split_tau(&ev.mv.path);
                        let ijust = ev.justifier.map(|j| self.tau_idx[j]);
                        (ev.mv, part, rel, ijust)
                    }
                }
            };
            let mv = Move { path: rel, ..resp };
            self.fuel_left -= 1;
            self.append(part, mv, ijust, false);
        }
    }

    fn into_trace(self, status: InteractionStatus) -> InteractionTrace {
        InteractionTrace { events: self.events, status }
    }
}

/// Renders an interaction in the trace line format, every event on its own
/// line with its component named:
/// `<idx> <O|P> <Q|A[payload]> @<part>:<path> ^<justifier|->`.
/// Environment moves show as `O`; everything either strategy plays —
/// including the whole hidden dialogue — shows as `P`.
pub fn render_interaction(trace: &InteractionTrace) -> String {
    let mut out = String::new();
    for (i, e) in trace.events.iter().enumerate() {
        let pol = if e.by_env { "O" } else { "P" };
        let kind = match (&e.mv.kind, &e.mv.payload) {
            (MoveKind::Question, _) => "Q".to_string(),
            (MoveKind::Answer, Some(p)) => format!("A[{p}]"),
            (MoveKind::Answer, None) => "A[?]".to_string(),
        };
        let just = match e.justifier {
            None => "-".to_string(),
            Some(j) => j.to_string(),
        };
        out.push_str(&format!(
            "{i} {pol} {kind} @{}:{} ^{just}\n",
            e.part, e.mv.path
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plays::{check_legal, render_trace};
    use crate::syntax::parse_type;

    fn board(src: &str) -> Rc<Arena> {
        Rc::new(Arena::of_type(&parse_type(src).unwrap()))
    }

    fn ev(mv: Move, j: Option<usize>) -> Event {
        Event::new(mv, j)
    }

    fn q(steps: &[Step]) -> Move {
        Move::question(Path::of(steps))
    }

    fn an(steps: &[Step], n: u64) -> Move {
        Move::answer(Path::of(steps), Payload::Num(n))
    }

    /// The strategy that calls its function argument on its second argument
    /// and answers two more than the result, at the instance 3 ↦ 9 ↦ 11.
    fn add_two_after_call() -> Strategy {
        use Step::*;
        let arena = board("(N -> N) -> N -> N");
        let entries = vec![
            (
                Play(vec![ev(q(&[Cod, Cod]), None)]),
                ViewResponse { mv: q(&[Dom, Cod]), justifier: 0 },
            ),
            (
                Play(vec![
                    ev(q(&[Cod, Cod]), None),
                    ev(q(&[Dom, Cod]), Some(0)),
                    ev(q(&[Dom, Dom]), Some(1)),
                ]),
                ViewResponse { mv: q(&[Cod, Dom]), justifier: 0 },
            ),
            (
                Play(vec![
                    ev(q(&[Cod, Cod]), None),
                    ev(q(&[Dom, Cod]), Some(0)),
                    ev(q(&[Dom, Dom]), Some(1)),
                    ev(q(&[Cod, Dom]), Some(0)),
                    ev(an(&[Cod, Dom], 3), Some(3)),
                ]),
                ViewResponse { mv: an(&[Dom, Dom], 3), justifier: 2 },
            ),
            (
                Play(vec![
                    ev(q(&[Cod, Cod]), None),
                    ev(q(&[Dom, Cod]), Some(0)),
                    ev(an(&[Dom, Cod], 9), Some(1)),
                ]),
                ViewResponse { mv: an(&[Cod, Cod], 11), justifier: 0 },
            ),
        ];
        Strategy::from_table(arena, "add-two-after-call", entries).unwrap()
    }

    /// Squaring at the instance 3 ↦ 9.
    fn squaring() -> Strategy {
        use Step::*;
        let arena = board("N -> N");
        let entries = vec![
            (
                Play(vec![ev(q(&[Cod]), None)]),
                ViewResponse { mv: q(&[Dom]), justifier: 0 },
            ),
            (
                Play(vec![
                    ev(q(&[Cod]), None),
                    ev(q(&[Dom]), Some(0)),
                    ev(an(&[Dom], 3), Some(1)),
                ]),
                ViewResponse { mv: an(&[Cod], 9), justifier: 0 },
            ),
        ];
        Strategy::from_table(arena, "squaring", entries).unwrap()
    }

    /// `add_two_after_call` transported onto the pairing board
    /// ((N → N) × N) → N.
    fn add_two_uncurried() -> Strategy {
        use Step::*;
        add_two_after_call().relabel(
            board("((N -> N) * N) -> N"),
            "add-two-uncurried",
            |p| match p.0.as_slice() {
                [Cod] => Path::of(&[Cod, Cod]),
                [Dom, R] => Path::of(&[Cod, Dom]),
                [Dom, L, rest @ ..] => {
                    let mut v = vec![Dom];
                    v.extend_from_slice(rest);
                    Path(v)
                }
                other => Path(other.to_vec()),
            },
            |p| match p.0.as_slice() {
                [Cod, Cod] => Path::of(&[Cod]),
                [Cod, Dom] => Path::of(&[Dom, R]),
                [Dom, rest @ ..] => {
                    let mut v = vec![Dom, L];
                    v.extend_from_slice(rest);
                    Path(v)
                }
                other => Path(other.to_vec()),
            },
        )
    }

    /// The pair ⟨squaring weakened over an unused input, the identity⟩ on
    /// the board N → ((N → N) × N).
    fn square_paired_with_input() -> Strategy {
        use Step::*;
        let lifted = squaring().relabel(
            board("N -> (N -> N)"),
            "squaring-lifted",
            |p| p.strip(Cod).unwrap_or_else(|| p.clone()),
            |p| p.prefixed(Cod),
        );
        let pass = Strategy::copycat(&Arena::flat(crate::syntax::Type::Nat));
        Strategy::pair_arrow(&lifted, &pass)
    }

    #[test]
    fn pairing_form_application_is_the_ten_event_interaction() {
        use Step::*;
        let pipe =
            Pipeline::arrow(square_paired_with_input(), add_two_uncurried()).unwrap();
        assert_eq!(pipe.composite.shape, parse_type("N -> N").unwrap());
        let script = vec![
            ev(q(&[Cod]), None),
            ev(an(&[Dom], 3), Some(1)),
        ];
        let tr = pipe.run_script(&script, 64).unwrap();
        assert_eq!(tr.status, InteractionStatus::Quiescent);
        assert_eq!(tr.events.len(), 10);
        let parts: Vec<Part> = tr.events.iter().map(|e| e.part).collect();
        use Part::*;
        assert_eq!(
            parts,
            [Right, Mid, Mid, Mid, Left, Left, Mid, Mid, Mid, Right]
        );
        let answers: Vec<u64> = tr
            .events
            .iter()
            .filter_map(|e| match e.mv.payload {
                Some(Payload::Num(n)) => Some(n),
                _ => None,
            })
            .collect();
        assert_eq!(answers, [3, 3, 3, 9, 11]);
        let by_env: Vec<bool> = tr.events.iter().map(|e| e.by_env).collect();
        assert_eq!(
            by_env,
            [true, false, false, false, false, true, false, false, false, false]
        );
        // Hiding the middle leaves the residual squared-plus-two dialogue.
        let hidden = pipe.external_restriction(&tr.events);
        assert_eq!(
            render_trace(&pipe.composite, &hidden),
            "0 O Q @cod ^-\n\
             1 P Q @dom ^0\n\
             2 O A[3] @dom ^1\n\
             3 P A[11] @cod ^0\n"
        );
    }

    #[test]
    fn curried_application_interaction_and_hiding() {
        use Step::*;
        let pipe = Pipeline::plain(squaring(), add_two_after_call()).unwrap();
        let set = pipe.interact(2, 64, &[]).unwrap();
        assert!(!set.frontier_open);
        // One completed dialogue (the scripted payload 3) and one stalled
        // dialogue per unscripted payload choice: 9, 11, and the fresh
        // witness 12.
        let complete: Vec<_> = set
            .traces
            .iter()
            .filter(|t| t.status == InteractionStatus::Quiescent)
            .collect();
        let stalled: Vec<_> = set
            .traces
            .iter()
            .filter(|t| t.status == InteractionStatus::Resting)
            .collect();
        assert_eq!((complete.len(), stalled.len()), (1, 3));
        let tr = complete[0];
        assert_eq!(tr.events.len(), 8);
        let parts: Vec<Part> = tr.events.iter().map(|e| e.part).collect();
        use Part::*;
        assert_eq!(parts, [Right, Mid, Mid, Right, Right, Mid, Mid, Right]);
        let hidden = pipe.hide(&set);
        let full = Play(vec![
            ev(q(&[Cod]), None),
            ev(q(&[Dom]), Some(0)),
            ev(an(&[Dom], 3), Some(1)),
            ev(an(&[Cod], 11), Some(0)),
        ]);
        assert_eq!(hidden.plays.len(), 3);
        assert!(hidden.plays.contains(&full));
        assert!(hidden.validate().is_ok());
        assert!(hidden.is_innocent());
        assert!(hidden.is_well_bracketed());
        assert!(hidden.determinism_counterexample().is_none());
    }

    #[test]
    fn every_restriction_of_a_trace_is_legal() {
        let pipes = [
            Pipeline::plain(squaring(), add_two_after_call()).unwrap(),
            Pipeline::arrow(square_paired_with_input(), add_two_uncurried()).unwrap(),
        ];
        for pipe in &pipes {
            let set = pipe.interact(2, 64, &[]).unwrap();
            assert!(!set.traces.is_empty());
            for tr in &set.traces {
                let (s, t, e) = pipe.restrictions(&tr.events);
                assert!(check_legal(&pipe.sigma.arena, &s).is_legal());
                assert!(check_legal(&pipe.tau.arena, &t).is_legal());
                assert!(check_legal(&pipe.composite, &e).is_legal());
                // Middle moves carry complementary polarity on the two
                // boards.
                for ie in tr.events.iter().filter(|ie| ie.part == Part::Mid) {
                    let for_sigma = Move {
                        path: pipe.dress_sigma(Part::Mid, &ie.mv.path),
                        ..ie.mv.clone()
                    };
                    let for_tau = Move {
                        path: pipe.dress_tau(Part::Mid, &ie.mv.path),
                        ..ie.mv.clone()
                    };
                    let ps = pipe.sigma.arena.polarity_of(&for_sigma).unwrap();
                    let pt = pipe.tau.arena.polarity_of(&for_tau).unwrap();
                    assert_eq!(ps, pt.flip());
                }
            }
        }
    }

    #[test]
    fn copycat_is_the_identity_for_plugging() {
        // On the right: σ against the mirror of its own board.
        let sq = squaring();
        let cc = Strategy::copycat(&sq.arena);
        let right = Pipeline::plain(sq.clone(), cc).unwrap();
        assert_eq!(
            right.compose(2, 99, &[]).unwrap().plays,
            sq.plays_of(2, &[]).unwrap().plays
        );
        // On the left: the mirror of the input board against τ.
        let add2 = add_two_after_call();
        let cc_fun = Strategy::copycat(&board("N -> N"));
        let left = Pipeline::arrow(cc_fun.clone(), add2.clone()).unwrap();
        assert_eq!(
            left.compose(4, 999, &[]).unwrap().plays,
            add2.plays_of(4, &[]).unwrap().plays
        );
        // And on the right of an arrow-shaped strategy.
        let right_arrow = Pipeline::arrow(add2.clone(), cc_fun).unwrap();
        assert_eq!(
            right_arrow.compose(4, 999, &[]).unwrap().plays,
            add2.plays_of(4, &[]).unwrap().plays
        );
    }

    #[test]
    fn silent_argument_rests_rather_than_burning_fuel() {
        let silent = Strategy::empty(board("N"));
        let cc = Strategy::copycat(&Arena::flat(crate::syntax::Type::Nat));
        let pipe = Pipeline::plain(silent, cc).unwrap();
        let set = pipe.interact(2, 64, &[]).unwrap();
        assert_eq!(set.traces.len(), 1);
        let tr = &set.traces[0];
        assert_eq!(tr.status, InteractionStatus::Resting);
        assert_eq!(tr.events.len(), 2);
        assert_eq!(tr.events[1].part, Part::Mid);
        assert!(!set.frontier_open);
        let hidden = pipe.hide(&set);
        assert_eq!(hidden.plays.len(), 1);
        assert!(!hidden.frontier_open);
    }

    #[test]
    fn unbounded_chatter_is_reported_as_fuel_exhaustion() {
        use Step::*;
        // The unfolding strategy applied to the identity: each request for
        // the result re-opens the functional, and the two strategies talk
        // through the middle board forever.
        let ident = Strategy::copycat(&Arena::flat(crate::syntax::Type::Nat));
        let unfold = Strategy::linked(
            board("(N -> N) -> N"),
            vec![
                (Path::of(&[Cod]), Path::of(&[Dom, Cod])),
                (Path::of(&[Dom, Dom]), Path::of(&[Dom, Cod])),
            ],
            "unfold",
        );
        let pipe = Pipeline::plain(ident, unfold).unwrap();
        let set = pipe.interact(1, 40, &[]).unwrap();
        assert_eq!(set.traces.len(), 1);
        assert_eq!(set.traces[0].status, InteractionStatus::FuelExhausted);
        assert!(set.frontier_open);
        // The visible play set records no completed answer: divergence is
        // never passed off as a finished dialogue.
        let hidden = pipe.hide(&set);
        assert_eq!(hidden.plays.len(), 1);
        assert!(hidden.frontier_open);
        // The lazy composite reports the same exhaustion as an error.
        let lazy = pipe.compose_lazy(40);
        let opening = Play(vec![ev(q(&[]), None)]);
        assert!(matches!(
            lazy.respond(&opening),
            Err(StrategyError::FuelExhausted { .. })
        ));
    }

    #[test]
    fn hiding_without_middle_events_is_the_identity() {
        use Step::*;
        let konst = Strategy::from_table(
            board("N -> N"),
            "seven",
            vec![(
                Play(vec![ev(q(&[Cod]), None)]),
                ViewResponse { mv: an(&[Cod], 7), justifier: 0 },
            )],
        )
        .unwrap();
        let silent = Strategy::empty(board("N"));
        let pipe = Pipeline::plain(silent, konst).unwrap();
        let set = pipe.interact(1, 16, &[]).unwrap();
        assert_eq!(set.traces.len(), 1);
        let tr = &set.traces[0];
        assert_eq!(tr.status, InteractionStatus::Quiescent);
        assert!(tr.events.iter().all(|e| e.part == Part::Right));
        let visible = pipe.external_restriction(&tr.events);
        assert_eq!(visible.len(), tr.events.len());
        let hidden = pipe.hide(&set);
        assert!(hidden.plays.contains(&visible));
    }

    #[test]
    fn saturated_composite_matches_the_lazy_strategy() {
        let cases = vec![
            (Pipeline::plain(squaring(), add_two_after_call()).unwrap(), 2usize),
            (
                Pipeline::arrow(square_paired_with_input(), add_two_uncurried())
                    .unwrap(),
                2,
            ),
            (
                Pipeline::arrow(
                    add_two_after_call(),
                    Strategy::copycat(&board("N -> N")),
                )
                .unwrap(),
                3,
            ),
        ];
        for (pipe, depth) in cases {
            let direct = pipe.compose(depth, 999, &[]).unwrap();
            let lazy = pipe.compose_lazy(999).plays_of(depth, &[]).unwrap();
            assert_eq!(direct.plays, lazy.plays);
            assert_eq!(direct.frontier_open, lazy.frontier_open);
        }
    }

    #[test]
    fn plugging_is_associative() {
        use Step::*;
        let three = Strategy::from_table(
            board("N"),
            "three",
            vec![(
                Play(vec![ev(q(&[]), None)]),
                ViewResponse { mv: an(&[], 3), justifier: 0 },
            )],
        )
        .unwrap();
        let add_two = Strategy::from_table(
            board("N -> N"),
            "add-two",
            vec![
                (
                    Play(vec![ev(q(&[Cod]), None)]),
                    ViewResponse { mv: q(&[Dom]), justifier: 0 },
                ),
                (
                    Play(vec![
                        ev(q(&[Cod]), None),
                        ev(q(&[Dom]), Some(0)),
                        ev(an(&[Dom], 9), Some(1)),
                    ]),
                    ViewResponse { mv: an(&[Cod], 11), justifier: 0 },
                ),
            ],
        )
        .unwrap();
        let first = Pipeline::plain(three.clone(), squaring()).unwrap();
        let lhs = Pipeline::plain(first.compose_lazy(99), add_two.clone())
            .unwrap()
            .compose(1, 99, &[])
            .unwrap();
        let second = Pipeline::arrow(squaring(), add_two).unwrap();
        let rhs = Pipeline::plain(three, second.compose_lazy(99))
            .unwrap()
            .compose(1, 99, &[])
            .unwrap();
        assert_eq!(lhs.plays, rhs.plays);
        let eleven = Play(vec![ev(q(&[]), None), ev(an(&[], 11), Some(0))]);
        assert!(lhs.plays.contains(&eleven));
    }

    #[test]
    fn mismatched_boards_are_rejected() {
        let e = Pipeline::plain(squaring(), squaring());
        assert!(matches!(e, Err(CompositionError::ShapeMismatch(_, _))));
        let e = Pipeline::arrow(squaring(), add_two_uncurried());
        assert!(matches!(e, Err(CompositionError::ShapeMismatch(_, _))));
    }

    #[test]
    fn interaction_render_names_the_components() {
        let pipe = Pipeline::plain(squaring(), add_two_after_call()).unwrap();
        let set = pipe.interact(2, 64, &[3]).unwrap();
        let tr = set
            .traces
            .iter()
            .find(|t| t.status == InteractionStatus::Quiescent)
            .unwrap();
        let text = render_interaction(tr);
        assert_eq!(
            text,
            "0 O Q @right:cod ^-\n\
             1 P Q @mid:cod ^0\n\
             2 P Q @mid:dom ^1\n\
             3 P Q @right:dom ^0\n\
             4 O A[3] @right:dom ^3\n\
             5 P A[3] @mid:dom ^2\n\
             6 P A[9] @mid:cod ^1\n\
             7 P A[11] @right:cod ^0\n"
        );
    }
}

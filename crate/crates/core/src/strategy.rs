//! Strategies in two presentations.
//!
//! A [`Strategy`] is the *view function* presentation: a deterministic
//! (possibly lazily materialized) partial map from Player views to responses.
//! Consulted on a legal odd-length play, it computes the play's Player view,
//! looks up (or computes) the response, and re-bases the response's pointer
//! from view coordinates back to play coordinates. Absence of a response is
//! how divergence is represented.
//!
//! A [`PlaySet`] is the extensional presentation: the even-prefix-closed set
//! of plays the strategy accepts. [`Strategy::plays_of`] saturates a view
//! function against every legal Opponent behaviour (with numeric payloads
//! restricted to a finite alphabet of seeds plus one fresh witness) and
//! [`Strategy::from_playset`] recovers a view table from an innocent set.
//!
//! The workhorse constructor is [`Strategy::linked`]: a copying discipline
//! between *linked* components of the board. Identity, variable projection,
//! pair projection, application and fixpoint unfolding are all instances.

use crate::arena::{Arena, Move, Path, Payload};
use crate::plays::{
    check_legal, extension_is_legal, is_well_bracketed, legal_extensions, parse_trace, pview,
    render_trace, Event, LegalityReport, Play,
};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;
use thiserror::Error;

/// A response in view coordinates: the move to play and the view index of
/// its justifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ViewResponse {
    pub mv: Move,
    pub justifier: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("strategy consulted on an illegal play: {0}")]
    IllegalInput(LegalityReport),
    #[error("strategy consulted on an even-length play")]
    EvenLengthInput,
    #[error("strategy {label} produced an illegal or unbracketed response")]
    BadResponse { label: String },
    #[error("fuel exhausted while {label} was replaying an interaction")]
    FuelExhausted { label: String },
    #[error("view table rejected: {0}")]
    BadTable(String),
    #[error("play set is not innocent: two histories with one view disagree")]
    NotInnocent,
}

type Rule = dyn Fn(&Play) -> Result<Option<ViewResponse>, StrategyError>;

/// The view-function presentation of a deterministic innocent strategy.
#[derive(Clone)]
pub struct Strategy {
    pub arena: Rc<Arena>,
    pub label: String,
    /// Numerals this strategy's behaviour can mention; saturation seeds.
    pub numeric_hints: BTreeSet<u64>,
    rule: Rc<Rule>,
    cache: Rc<RefCell<HashMap<Play, Option<ViewResponse>>>>,
}

impl std::fmt::Debug for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Strategy")
            .field("label", &self.label)
            .field("arena", &self.arena.shape)
            .finish()
    }
}

impl Strategy {
    pub fn from_rule(
        arena: Rc<Arena>,
        label: impl Into<String>,
        numeric_hints: BTreeSet<u64>,
        rule: impl Fn(&Play) -> Result<Option<ViewResponse>, StrategyError> + 'static,
    ) -> Strategy {
        Strategy {
            arena,
            label: label.into(),
            numeric_hints,
            rule: Rc::new(rule),
            cache: Rc::new(RefCell::new(HashMap::new())),
        }
    }

    /// The strategy with no responses at all (the denotation of divergence).
    pub fn empty(arena: Rc<Arena>) -> Strategy {
        Strategy::from_rule(arena, "diverge", BTreeSet::new(), |_| Ok(None))
    }

    /// Builds a strategy from an explicit finite view table. Every key must
    /// be an odd-length legal play that is its own Player view, and every
    /// response must extend it legally and with bracketing intact.
    pub fn from_table(
        arena: Rc<Arena>,
        label: impl Into<String>,
        entries: Vec<(Play, ViewResponse)>,
    ) -> Result<Strategy, StrategyError> {
        let mut table: HashMap<Play, ViewResponse> = HashMap::new();
        let mut hints = BTreeSet::new();
        for (view, resp) in entries {
            if view.len() % 2 == 0 {
                return Err(StrategyError::BadTable(format!(
                    "view key has even length {}",
                    view.len()
                )));
            }
            let report = check_legal(&arena, &view);
            if !report.is_legal() {
                return Err(StrategyError::BadTable(format!("view key {report}")));
            }
            let v = pview(&arena, &view).expect("legality just checked");
            if v.play != view {
                return Err(StrategyError::BadTable(
                    "view key is not its own Player view".to_string(),
                ));
            }
            if resp.justifier >= view.len() {
                return Err(StrategyError::BadTable(
                    "response justifier outside the view".to_string(),
                ));
            }
            let ev = Event::new(resp.mv.clone(), Some(resp.justifier));
            let extended = view.snoc(ev);
            if !check_legal(&arena, &extended).is_legal()
                || !is_well_bracketed(&extended)
            {
                return Err(StrategyError::BadTable(format!(
                    "response to view of length {} is illegal or unbracketed",
                    view.len()
                )));
            }
            for event in view.iter().chain(std::iter::once(&extended.0[view.len()])) {
                if let Some(Payload::Num(n)) = event.mv.payload {
                    hints.insert(n);
                }
            }
            match table.get(&view) {
                Some(prev) if *prev != resp => {
                    return Err(StrategyError::BadTable(
                        "two different responses for one view".to_string(),
                    ))
                }
                _ => {
                    table.insert(view, resp);
                }
            }
        }
        Ok(Strategy::from_rule(arena, label, hints, move |v| {
            Ok(table.get(v).cloned())
        }))
    }

    /// Cached invocation of the underlying view function.
    pub fn consult(&self, view: &Play) -> Result<Option<ViewResponse>, StrategyError> {
        if let Some(hit) = self.cache.borrow().get(view) {
            return Ok(hit.clone());
        }
        let out = (self.rule)(view)?;
        self.cache
            .borrow_mut()
            .insert(view.clone(), out.clone());
        Ok(out)
    }

    /// The strategy's move after the legal odd-length play `s`, re-based to
    /// play coordinates, or `None` when the strategy stays silent.
    pub fn respond(&self, s: &Play) -> Result<Option<Event>, StrategyError> {
        if s.len() % 2 == 0 {
            return Err(StrategyError::EvenLengthInput);
        }
        let v = pview(&self.arena, s).map_err(StrategyError::IllegalInput)?;
        let resp = match self.consult(&v.play)? {
            None => return Ok(None),
            Some(r) => r,
        };
        if resp.justifier >= v.positions.len() {
            return Err(StrategyError::BadResponse { label: self.label.clone() });
        }
        let ev = Event::new(resp.mv, Some(v.positions[resp.justifier]));
        let ok = extension_is_legal(&self.arena, s, &ev)
            && is_well_bracketed(&s.snoc(ev.clone()));
        if !ok {
            return Err(StrategyError::BadResponse { label: self.label.clone() });
        }
        Ok(Some(ev))
    }

    /// Transports this strategy along a path bijection onto another board.
    /// `to_old` maps new-board paths to this board's, `to_new` the reverse.
    pub fn relabel(
        &self,
        arena: Rc<Arena>,
        label: impl Into<String>,
        to_old: impl Fn(&Path) -> Path + 'static,
        to_new: impl Fn(&Path) -> Path + 'static,
    ) -> Strategy {
        let inner = self.clone();
        Strategy::from_rule(
            arena,
            label,
            self.numeric_hints.clone(),
            move |view: &Play| {
                let old_view = Play(
                    view.iter()
                        .map(|e| Event {
                            mv: Move { path: to_old(&e.mv.path), ..e.mv.clone() },
                            justifier: e.justifier,
                        })
                        .collect(),
                );
                Ok(inner.consult(&old_view)?.map(|r| ViewResponse {
                    mv: Move { path: to_new(&r.mv.path), ..r.mv },
                    justifier: r.justifier,
                }))
            },
        )
    }

    /// A copying discipline between linked components of the board.
    ///
    /// Each link `(from, to)` declares the occurrences under path prefix
    /// `from` and those under `to` to be mirror images (the prefixes of all
    /// links must be prefix-free). The rule, consulted on a view ending with
    /// the Opponent move `o`:
    ///
    /// * `o` opens the board (no justifier): replay it across its own link,
    ///   justified by `o` itself.
    /// * `o` opens a linked component from outside (a fresh request): replay
    ///   it across that component's link, justified by the view's opening
    ///   move — re-entering a component always hangs off the root.
    /// * otherwise `o` continues an existing exchange: its justifier `j` is
    ///   one of our earlier mirror images, so the move it mirrors sits at
    ///   `j - 1`; replay `o` into that move's component, justified there.
    pub fn linked(
        arena: Rc<Arena>,
        links: Vec<(Path, Path)>,
        label: impl Into<String>,
    ) -> Strategy {
        let board = arena.clone();
        Strategy::from_rule(arena, label, BTreeSet::new(), move |view: &Play| {
            // Which link, which side of it, and the remainder of the path.
            let class_of = |p: &Path| -> Option<(usize, bool, Path)> {
                for (i, (f, t)) in links.iter().enumerate() {
                    if p.0.starts_with(&f.0) {
                        return Some((i, true, Path(p.0[f.0.len()..].to_vec())));
                    }
                    if p.0.starts_with(&t.0) {
                        return Some((i, false, Path(p.0[t.0.len()..].to_vec())));
                    }
                }
                None
            };
            let endpoint = |i: usize, from_side: bool| -> &Path {
                if from_side {
                    &links[i].0
                } else {
                    &links[i].1
                }
            };

            let m = view.len() - 1;
            let o = &view.0[m];
            let (li, is_from, rest) = match class_of(&o.mv.path) {
                Some(c) => c,
                None => return Ok(None),
            };
            let mirror = |target: &Path, justifier: usize| {
                let mut path = target.0.clone();
                path.extend_from_slice(&rest.0);
                Some(ViewResponse {
                    mv: Move {
                        path: Path(path),
                        kind: o.mv.kind,
                        payload: o.mv.payload,
                    },
                    justifier,
                })
            };
            match o.justifier {
                // Board-opening move: replay it across its own link,
                // justified by itself.
                None => Ok(mirror(endpoint(li, !is_from), m)),
                Some(j) => {
                    // A question whose enablers live in another component is
                    // a fresh request entering this component from outside.
                    let fresh = o.mv.is_question()
                        && match board.occurrence(&o.mv.path) {
                            Some(occ) if !occ.enablers.is_empty() => {
                                match class_of(&occ.enablers[0]) {
                                    Some((ei, ef, _)) => (ei, ef) != (li, is_from),
                                    None => true,
                                }
                            }
                            _ => false,
                        };
                    if fresh {
                        // Forward the request across the link; the target
                        // component re-opens from the view's root move.
                        Ok(mirror(endpoint(li, !is_from), 0))
                    } else if j == 0 {
                        Ok(None)
                    } else {
                        // Continuation of an exchange: our justifier at `j`
                        // was itself the mirror image of the move at `j - 1`,
                        // so the reply belongs in that move's component.
                        let prev = &view.0[j - 1];
                        match class_of(&prev.mv.path) {
                            Some((pi, pf, _)) => Ok(mirror(endpoint(pi, pf), j - 1)),
                            None => Ok(None),
                        }
                    }
                }
            }
        })
    }

    /// Identity strategy: the board of `arrow(a, a)`, copying every Opponent
    /// move to the other side.
    pub fn copycat(a: &Arena) -> Strategy {
        use crate::arena::Step;
        let board = Rc::new(Arena::arrow(a.clone(), a.clone()));
        Strategy::linked(
            board,
            vec![(Path::of(&[Step::Cod]), Path::of(&[Step::Dom]))],
            format!("copycat({})", a.shape),
        )
    }

    /// Pairing of strategies sharing a domain: from `dom(D) => E1` and
    /// `dom(D) => E2`, the strategy on `D => E1 * E2`. Views are
    /// single-threaded, so each view is delegated whole to the component its
    /// opening move belongs to.
    pub fn pair_arrow(s1: &Strategy, s2: &Strategy) -> Strategy {
        let (d1, e1) = match &s1.arena.shape {
            crate::syntax::Type::Arrow(d, e) => (d.as_ref().clone(), e.as_ref().clone()),
            other => panic!("pair_arrow on a non-arrow board {other}"),
        };
        let e2 = match &s2.arena.shape {
            crate::syntax::Type::Arrow(_, e) => e.as_ref().clone(),
            other => panic!("pair_arrow on a non-arrow board {other}"),
        };
        let board = Rc::new(Arena::of_type(&crate::syntax::Type::arrow(
            d1,
            crate::syntax::Type::product(e1, e2),
        )));
        let left = s1.clone();
        let right = s2.clone();
        let mut hints = s1.numeric_hints.clone();
        hints.extend(&s2.numeric_hints);
        let label = format!("<{}, {}>", s1.label, s2.label);
        Strategy::from_rule(board, label, hints, move |view: &Play| {
            use crate::arena::Step;
            // cod.l.* / cod.r.* pick the component; dom.* is shared verbatim.
            let side = match view.0[0].mv.path.0.as_slice() {
                [Step::Cod, Step::L, ..] => Step::L,
                [Step::Cod, Step::R, ..] => Step::R,
                _ => return Ok(None),
            };
            let delegate = if side == Step::L { &left } else { &right };
            let strip = |p: &Path| -> Path {
                match p.0.as_slice() {
                    [Step::Cod, s, tail @ ..] if *s == side => {
                        let mut v = vec![Step::Cod];
                        v.extend_from_slice(tail);
                        Path(v)
                    }
                    _ => p.clone(),
                }
            };
            let dress = |p: &Path| -> Path {
                match p.0.as_slice() {
                    [Step::Cod, tail @ ..] => {
                        let mut v = vec![Step::Cod, side];
                        v.extend_from_slice(tail);
                        Path(v)
                    }
                    _ => p.clone(),
                }
            };
            let inner_view = Play(
                view.iter()
                    .map(|e| Event {
                        mv: Move { path: strip(&e.mv.path), ..e.mv.clone() },
                        justifier: e.justifier,
                    })
                    .collect(),
            );
            Ok(delegate.consult(&inner_view)?.map(|r| ViewResponse {
                mv: Move { path: dress(&r.mv.path), ..r.mv },
                justifier: r.justifier,
            }))
        })
    }

    /// Pairing of closed strategies: from boards `E1` and `E2`, the strategy
    /// on the product board `E1 * E2`, each thread delegated whole.
    pub fn pair_product(s1: &Strategy, s2: &Strategy) -> Strategy {
        use crate::arena::Step;
        let board = Rc::new(Arena::product(
            s1.arena.as_ref().clone(),
            s2.arena.as_ref().clone(),
        ));
        let left = s1.clone();
        let right = s2.clone();
        let mut hints = s1.numeric_hints.clone();
        hints.extend(&s2.numeric_hints);
        let label = format!("<{}, {}>", s1.label, s2.label);
        Strategy::from_rule(board, label, hints, move |view: &Play| {
            let side = match view.0[0].mv.path.0.first() {
                Some(&s @ (Step::L | Step::R)) => s,
                _ => return Ok(None),
            };
            let delegate = if side == Step::L { &left } else { &right };
            let inner_view = Play(
                view.iter()
                    .map(|e| Event {
                        mv: Move {
                            path: e.mv.path.strip(side).expect("single-threaded view"),
                            ..e.mv.clone()
                        },
                        justifier: e.justifier,
                    })
                    .collect(),
            );
            Ok(delegate.consult(&inner_view)?.map(|r| ViewResponse {
                mv: Move { path: r.mv.path.prefixed(side), ..r.mv },
                justifier: r.justifier,
            }))
        })
    }

    /// Saturates the view function against every legal, bracketing-preserving,
    /// single-opening Opponent behaviour, to plays of at most `2 * depth`
    /// events. Numeric answer payloads range over the strategy's hints, the
    /// extra seeds, the payloads already in the play, and one fresh witness.
    pub fn plays_of(&self, depth: usize, extra_seeds: &[u64]) -> Result<PlaySet, StrategyError> {
        let mut plays = BTreeSet::new();
        plays.insert(Play::empty());
        let mut frontier_open = false;
        let mut queue: Vec<Play> = vec![Play::empty()];
        while let Some(p) = queue.pop() {
            let at_cutoff = p.len() >= 2 * depth;
            let mut alphabet: BTreeSet<u64> = self.numeric_hints.clone();
            alphabet.extend(extra_seeds.iter().copied());
            for ev in p.iter() {
                if let Some(Payload::Num(n)) = ev.mv.payload {
                    alphabet.insert(n);
                }
            }
            let witness = alphabet.iter().max().map(|m| m + 1).unwrap_or(0);
            alphabet.insert(witness);
            let alphabet: Vec<u64> = alphabet.into_iter().collect();
            for o_ev in legal_extensions(&self.arena, &p, &alphabet) {
                if !p.is_empty() && o_ev.justifier.is_none() {
                    continue; // one opening per play
                }
                let podd = p.snoc(o_ev);
                if !is_well_bracketed(&podd) {
                    continue;
                }
                if let Some(resp) = self.respond(&podd)? {
                    if at_cutoff {
                        frontier_open = true;
                        continue;
                    }
                    let peven = podd.snoc(resp);
                    if plays.insert(peven.clone()) {
                        queue.push(peven);
                    }
                }
            }
        }
        Ok(PlaySet { arena: self.arena.clone(), plays, frontier_open })
    }

    /// Recovers a view-function strategy from an innocent play set.
    pub fn from_playset(ps: &PlaySet) -> Result<Strategy, StrategyError> {
        let mut entries: BTreeMap<Play, ViewResponse> = BTreeMap::new();
        for p in &ps.plays {
            for i in (1..p.len()).step_by(2) {
                let prefix = p.prefix(i);
                let v = pview(&ps.arena, &prefix)
                    .map_err(StrategyError::IllegalInput)?;
                let resp_ev = &p.0[i];
                let j = resp_ev
                    .justifier
                    .and_then(|j| v.positions.iter().position(|&q| q == j))
                    .ok_or(StrategyError::NotInnocent)?;
                let resp = ViewResponse { mv: resp_ev.mv.clone(), justifier: j };
                match entries.get(&v.play) {
                    Some(prev) if *prev != resp => return Err(StrategyError::NotInnocent),
                    _ => {
                        entries.insert(v.play, resp);
                    }
                }
            }
        }
        Strategy::from_table(
            ps.arena.clone(),
            "from-plays",
            entries.into_iter().collect(),
        )
    }

    /// The materialized view table reachable within `depth` rounds, as JSON:
    /// a list of `{view, response}` objects, the view in trace format and the
    /// response as an unindexed trace line with a view-relative pointer.
    pub fn table_json(&self, depth: usize, extra_seeds: &[u64]) -> Result<serde_json::Value, StrategyError> {
        let ps = self.plays_of(depth, extra_seeds)?;
        let mut entries: BTreeMap<Play, ViewResponse> = BTreeMap::new();
        for p in &ps.plays {
            for i in (1..p.len()).step_by(2) {
                let prefix = p.prefix(i);
                let v = pview(&ps.arena, &prefix).expect("saturated plays are legal");
                let resp_ev = &p.0[i];
                let j = resp_ev
                    .justifier
                    .and_then(|j| v.positions.iter().position(|&q| q == j))
                    .expect("response pointer is visible");
                entries.insert(v.play, ViewResponse { mv: resp_ev.mv.clone(), justifier: j });
            }
        }
        let list: Vec<serde_json::Value> = entries
            .iter()
            .map(|(view, resp)| {
                serde_json::json!({
                    "view": render_trace(&self.arena, view),
                    "response": render_response(&self.arena, resp),
                })
            })
            .collect();
        Ok(serde_json::Value::Array(list))
    }
}

/// Renders a view response as `<O|P> <Q|A[payload]> @<path> ^<view-index>`.
pub fn render_response(arena: &Arena, resp: &ViewResponse) -> String {
    let pol = arena
        .polarity_of(&resp.mv)
        .map(|p| p.to_string())
        .unwrap_or_else(|| "?".to_string());
    let kind = match (&resp.mv.kind, &resp.mv.payload) {
        (crate::arena::MoveKind::Question, _) => "Q".to_string(),
        (crate::arena::MoveKind::Answer, Some(p)) => format!("A[{p}]"),
        (crate::arena::MoveKind::Answer, None) => "A[?]".to_string(),
    };
    format!("{pol} {kind} @{} ^{}", resp.mv.path, resp.justifier)
}

/// Parses the [`render_response`] format.
pub fn parse_response(arena: &Arena, s: &str) -> Result<ViewResponse, String> {
    let fields: Vec<&str> = s.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 fields in response, got {}", fields.len()));
    }
    // reuse the trace parser by prefixing a synthetic index
    let line = format!("0 {} {} {} ^-\n", fields[0], fields[1], fields[2]);
    let _ = line;
    let path = fields[2]
        .strip_prefix('@')
        .and_then(Path::parse)
        .ok_or_else(|| format!("bad path {:?}", fields[2]))?;
    let mv = if fields[1] == "Q" {
        Move::question(path)
    } else if let Some(inner) = fields[1].strip_prefix("A[").and_then(|s| s.strip_suffix(']')) {
        let payload = match inner {
            "tt" => Payload::Bool(true),
            "ff" => Payload::Bool(false),
            n => Payload::Num(n.parse().map_err(|_| format!("bad payload {inner:?}"))?),
        };
        Move::answer(path, payload)
    } else {
        return Err(format!("bad move field {:?}", fields[1]));
    };
    if !arena.contains(&mv) {
        return Err("response move not in the arena".to_string());
    }
    let justifier: usize = fields[3]
        .strip_prefix('^')
        .and_then(|j| j.parse().ok())
        .ok_or_else(|| format!("bad justifier {:?}", fields[3]))?;
    Ok(ViewResponse { mv, justifier })
}

/// Parses a JSON view table (the [`Strategy::table_json`] format) into a
/// strategy.
pub fn table_from_json(arena: Rc<Arena>, json: &str) -> Result<Strategy, String> {
    let v: serde_json::Value = serde_json::from_str(json).map_err(|e| e.to_string())?;
    let arr = v.as_array().ok_or("expected a JSON array of table entries")?;
    let mut entries = Vec::new();
    for item in arr {
        let view_s = item
            .get("view")
            .and_then(|x| x.as_str())
            .ok_or("entry missing string field 'view'")?;
        let resp_s = item
            .get("response")
            .and_then(|x| x.as_str())
            .ok_or("entry missing string field 'response'")?;
        let view = parse_trace(&arena, view_s).map_err(|e| e.to_string())?;
        let resp = parse_response(&arena, resp_s)?;
        entries.push((view, resp));
    }
    Strategy::from_table(arena, "imported", entries).map_err(|e| e.to_string())
}

/// The extensional presentation: an even-prefix-closed set of legal plays.
#[derive(Debug, Clone)]
pub struct PlaySet {
    pub arena: Rc<Arena>,
    pub plays: BTreeSet<Play>,
    /// True when saturation stopped because of the depth cutoff while the
    /// strategy still had responses: the set is a strict under-approximation.
    pub frontier_open: bool,
}

impl PlaySet {
    /// Structural well-formedness: every play legal, even-length, and the
    /// set closed under even prefixes (so it contains the empty play).
    pub fn validate(&self) -> Result<(), String> {
        if !self.plays.contains(&Play::empty()) {
            return Err("missing the empty play".to_string());
        }
        for p in &self.plays {
            if p.len() % 2 != 0 {
                return Err(format!("odd-length play of {} events", p.len()));
            }
            let rep = check_legal(&self.arena, p);
            if !rep.is_legal() {
                return Err(format!("{rep}"));
            }
            for k in (0..p.len()).step_by(2) {
                if !self.plays.contains(&p.prefix(k)) {
                    return Err(format!("even prefix of length {k} missing"));
                }
            }
        }
        Ok(())
    }

    /// Two plays that agree on an odd prefix but continue differently, if any.
    pub fn determinism_counterexample(&self) -> Option<(Play, Play)> {
        let mut seen: HashMap<Play, Play> = HashMap::new();
        for p in &self.plays {
            for i in (1..p.len()).step_by(2) {
                let key = p.prefix(i);
                let wit = p.prefix(i + 1);
                match seen.get(&key) {
                    None => {
                        seen.insert(key, wit);
                    }
                    Some(prev) if *prev != wit => return Some((prev.clone(), wit)),
                    _ => {}
                }
            }
        }
        None
    }

    /// Two plays whose odd prefixes have the same Player view but different
    /// responses (move or view-relative pointer), if any.
    pub fn innocence_counterexample(&self) -> Option<(Play, Play)> {
        let mut seen: HashMap<Play, (Move, usize, Play)> = HashMap::new();
        for p in &self.plays {
            for i in (1..p.len()).step_by(2) {
                let prefix = p.prefix(i);
                let v = match pview(&self.arena, &prefix) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let resp = &p.0[i];
                let vj = match resp
                    .justifier
                    .and_then(|j| v.positions.iter().position(|&q| q == j))
                {
                    Some(vj) => vj,
                    None => continue,
                };
                match seen.get(&v.play) {
                    None => {
                        seen.insert(v.play, (resp.mv.clone(), vj, p.prefix(i + 1)));
                    }
                    Some((m0, j0, w)) => {
                        if *m0 != resp.mv || *j0 != vj {
                            return Some((w.clone(), p.prefix(i + 1)));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_innocent(&self) -> bool {
        self.innocence_counterexample().is_none()
    }

    /// Whether every play in the set is well-bracketed.
    pub fn is_well_bracketed(&self) -> bool {
        self.plays.iter().all(is_well_bracketed)
    }

    /// The plays in which every question has been answered.
    pub fn complete_plays(&self) -> Vec<&Play> {
        self.plays
            .iter()
            .filter(|p| {
                let questions = p.iter().filter(|e| e.mv.is_question()).count();
                let answers = p.iter().filter(|e| e.mv.is_answer()).count();
                questions == answers
            })
            .collect()
    }
}

//! Saturated play sets as regular languages: deterministic automata over
//! rendered move symbols, two independent minimizers that cross-check each
//! other, language equivalence with shortest counterexamples, and a
//! play-level equivalence test for programs.
//!
//! Pointers are folded into the symbols only when they carry information:
//! at low order with no repeated questions they are reconstructible and
//! omitted, otherwise each symbol records how far back in the current view
//! its justifier sits.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::rc::Rc;

use serde_json::json;
use thiserror::Error;

use crate::arena::{Arena, MoveKind};
use crate::interpreter::{denote, InterpError};
use crate::plays::{oview, pview, Play};
use crate::strategy::{PlaySet, StrategyError};
use crate::syntax::{typecheck_closed, Term, Type};

#[derive(Debug, Error)]
pub enum AutomataError {
    #[error("the play set was cut off before saturating; increase the depth bound")]
    Unsaturated,
    #[error("event {index} points outside its view; the play set is not visible")]
    PointerOutsideView { index: usize },
    #[error("cannot compare terms of different types: {0} vs {1}")]
    TypeMismatch(Type, Type),
    #[error("play languages are finite only at boolean types; {0} mentions numbers")]
    NotFinitary(Type),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

// ---------------------------------------------------------------------------
// The automaton.
// ---------------------------------------------------------------------------

/// A deterministic finite automaton over rendered move symbols.  The
/// transition table is total: every state has an outgoing edge for every
/// symbol, with a rejecting sink absorbing the dead ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Vec<String>,
    /// `transitions[state][symbol]` — total.
    pub transitions: Vec<Vec<usize>>,
    pub initial: usize,
    pub accepting: BTreeSet<usize>,
}

impl Dfa {
    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut state = self.initial;
        for &sym in word {
            state = self.transitions[state][sym];
        }
        self.accepting.contains(&state)
    }

    pub fn accepts_symbols(&self, word: &[&str]) -> bool {
        let mut state = self.initial;
        for sym in word {
            let Some(s) = self.alphabet.iter().position(|a| a == sym) else {
                return false;
            };
            state = self.transitions[state][s];
        }
        self.accepting.contains(&state)
    }

    /// GraphViz rendering; accepting states are double circles and the
    /// initial state is marked by an entry arrow.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  start [shape=point];\n");
        for s in 0..self.states() {
            let shape = if self.accepting.contains(&s) {
                "doublecircle"
            } else {
                "circle"
            };
            out.push_str(&format!("  q{s} [shape={shape}];\n"));
        }
        out.push_str(&format!("  start -> q{};\n", self.initial));
        for (s, row) in self.transitions.iter().enumerate() {
            // Group parallel edges into one label for readability.
            let mut grouped: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
            for (sym, &t) in row.iter().enumerate() {
                grouped.entry(t).or_default().push(&self.alphabet[sym]);
            }
            for (t, syms) in grouped {
                let label = syms.join(", ").replace('"', "\\\"");
                out.push_str(&format!("  q{s} -> q{t} [label=\"{label}\"];\n"));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "states": self.states(),
            "initial": self.initial,
            "alphabet": self.alphabet,
            "accepting": self.accepting.iter().collect::<Vec<_>>(),
            "transitions": self.transitions,
        })
    }

    /// Restriction to the states reachable from the initial one, renumbered
    /// in breadth-first order.  Language-preserving, and a canonical form:
    /// two automata are isomorphic exactly when their reachable parts agree
    /// literally after this.
    pub fn reachable_canonical(&self) -> Dfa {
        let mut order: Vec<usize> = Vec::new();
        let mut number: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([self.initial]);
        number.insert(self.initial, 0);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &t in &self.transitions[s] {
                if !number.contains_key(&t) {
                    number.insert(t, number.len());
                    queue.push_back(t);
                }
            }
        }
        let transitions = order
            .iter()
            .map(|&s| self.transitions[s].iter().map(|t| number[t]).collect())
            .collect();
        let accepting = order
            .iter()
            .filter(|s| self.accepting.contains(s))
            .map(|s| number[s])
            .collect();
        Dfa { alphabet: self.alphabet.clone(), transitions, initial: 0, accepting }
    }
}

/// Same alphabet, same shape after breadth-first renumbering.
pub fn isomorphic(d1: &Dfa, d2: &Dfa) -> bool {
    d1.alphabet == d2.alphabet && d1.reachable_canonical() == d2.reachable_canonical()
}

// ---------------------------------------------------------------------------
// Building automata from play sets.
// ---------------------------------------------------------------------------

fn finitary(ty: &Type) -> bool {
    match ty {
        Type::Nat => false,
        Type::Bool => true,
        Type::Arrow(a, b) | Type::Product(a, b) => finitary(a) && finitary(b),
    }
}

/// How far back in the mover's own view the justifier sits (0 would be the
/// move itself, 1 the view event just before it, …).
fn view_distance(arena: &Arena, play: &Play, index: usize) -> Result<usize, AutomataError> {
    let j = play.0[index]
        .justifier
        .expect("only justified moves get distances");
    let here = play.prefix(index + 1);
    let view = if index % 2 == 0 {
        oview(arena, &here)
    } else {
        pview(arena, &here)
    }
    .map_err(|_| AutomataError::PointerOutsideView { index })?;
    let at = view
        .positions
        .iter()
        .position(|&p| p == j)
        .ok_or(AutomataError::PointerOutsideView { index })?;
    Ok(view.positions.len() - 1 - at)
}

fn base_symbol(ev: &crate::plays::Event) -> String {
    match (&ev.mv.kind, &ev.mv.payload) {
        (MoveKind::Question, _) => format!("Q@{}", ev.mv.path),
        (MoveKind::Answer, Some(p)) => format!("A[{p}]@{}", ev.mv.path),
        (MoveKind::Answer, None) => format!("A[?]@{}", ev.mv.path),
    }
}

/// Whether the symbols must carry pointer information: needed beyond
/// second-order boards, and whenever some play interrogates the same
/// occurrence twice.
fn needs_pointers(ps: &PlaySet) -> bool {
    if ps.arena.shape.order() > 2 {
        return true;
    }
    ps.plays.iter().any(|p| {
        let mut seen = BTreeSet::new();
        p.iter()
            .filter(|e| e.mv.kind == MoveKind::Question)
            .any(|e| !seen.insert(e.mv.path.clone()))
    })
}

/// Renders the chosen play language as words, keeping the source play of
/// each word.  `complete_only` selects the fully-answered plays (minus the
/// empty one); otherwise every play in the set becomes a word.
pub fn language(
    ps: &PlaySet,
    complete_only: bool,
) -> Result<BTreeMap<Vec<String>, Play>, AutomataError> {
    if ps.frontier_open {
        return Err(AutomataError::Unsaturated);
    }
    let pointered = needs_pointers(ps);
    let mut out = BTreeMap::new();
    let chosen: Vec<&Play> = if complete_only {
        ps.complete_plays().into_iter().filter(|p| !p.is_empty()).collect()
    } else {
        ps.plays.iter().collect()
    };
    for play in chosen {
        let mut word = Vec::with_capacity(play.len());
        for (i, ev) in play.iter().enumerate() {
            let mut sym = base_symbol(ev);
            if pointered && ev.justifier.is_some() {
                sym.push_str(&format!("^{}", view_distance(&ps.arena, play, i)?));
            }
            word.push(sym);
        }
        out.insert(word, play.clone());
    }
    Ok(out)
}

/// Builds the minimal automaton accepting the rendered play language:
/// a trie of the words, completed with a sink, then minimized.
pub fn from_playset(ps: &PlaySet, complete_only: bool) -> Result<Dfa, AutomataError> {
    let words = language(ps, complete_only)?;
    let alphabet: Vec<String> = {
        let syms: BTreeSet<&String> = words.keys().flatten().collect();
        syms.into_iter().cloned().collect()
    };
    let index: HashMap<&str, usize> = alphabet
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    // Trie states; entry 0 is the root, the sink comes last.
    let mut transitions: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet.len()]];
    let mut accepting = BTreeSet::new();
    for word in words.keys() {
        let mut state = 0usize;
        for sym in word {
            let s = index[sym.as_str()];
            state = match transitions[state][s] {
                Some(next) => next,
                None => {
                    transitions.push(vec![None; alphabet.len()]);
                    let next = transitions.len() - 1;
                    transitions[state][s] = Some(next);
                    next
                }
            };
        }
        accepting.insert(state);
    }
    let sink = transitions.len();
    let transitions: Vec<Vec<usize>> = transitions
        .iter()
        .map(|row| row.iter().map(|t| t.unwrap_or(sink)).collect())
        .chain(std::iter::once(vec![sink; alphabet.len()]))
        .collect();
    let trie = Dfa { alphabet, transitions, initial: 0, accepting };
    Ok(hopcroft_minimize(&trie))
}

// ---------------------------------------------------------------------------
// Minimization, twice.
// ---------------------------------------------------------------------------

/// Minimization straight from the residual-language characterization:
/// two reachable states are merged exactly when no word distinguishes
/// them, decided by the classic pair-marking table.
pub fn nerode_minimize(d: &Dfa) -> Dfa {
    let d = d.reachable_canonical();
    let n = d.states();
    let mut marked = vec![vec![false; n]; n];
    for p in 0..n {
        for q in 0..n {
            if d.accepting.contains(&p) != d.accepting.contains(&q) {
                marked[p][q] = true;
            }
        }
    }
    loop {
        let mut changed = false;
        for p in 0..n {
            for q in 0..n {
                if marked[p][q] {
                    continue;
                }
                for s in 0..d.alphabet.len() {
                    if marked[d.transitions[p][s]][d.transitions[q][s]] {
                        marked[p][q] = true;
                        changed = true;
                        break;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Unmarked pairs are Nerode-equivalent; pick the least representative.
    let mut rep = vec![0usize; n];
    for p in 0..n {
        rep[p] = (0..n).find(|&q| !marked[p][q]).expect("p is unmarked with itself");
    }
    let classes: Vec<usize> = {
        let mut seen = Vec::new();
        for p in 0..n {
            if rep[p] == p {
                seen.push(p);
            }
        }
        seen
    };
    let class_index: HashMap<usize, usize> =
        classes.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let transitions = classes
        .iter()
        .map(|&p| {
            d.transitions[p]
                .iter()
                .map(|&t| class_index[&rep[t]])
                .collect()
        })
        .collect();
    let accepting = classes
        .iter()
        .filter(|p| d.accepting.contains(p))
        .map(|p| class_index[p])
        .collect();
    let quotient = Dfa {
        alphabet: d.alphabet.clone(),
        transitions,
        initial: class_index[&rep[d.initial]],
        accepting,
    };
    quotient.reachable_canonical()
}

/// Partition-refinement minimization with a splitter worklist —
/// independent of [`nerode_minimize`] so the two can audit each other.
pub fn hopcroft_minimize(d: &Dfa) -> Dfa {
    let d = d.reachable_canonical();
    let n = d.states();
    let k = d.alphabet.len();
    if n == 0 {
        return d;
    }
    // Inverse transition relation.
    let mut preimage: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); k]; n];
    for (s, row) in d.transitions.iter().enumerate() {
        for (sym, &t) in row.iter().enumerate() {
            preimage[t][sym].push(s);
        }
    }
    let accepting: BTreeSet<usize> = d.accepting.clone();
    let rejecting: BTreeSet<usize> = (0..n).filter(|s| !accepting.contains(s)).collect();
    let mut partition: Vec<BTreeSet<usize>> = Vec::new();
    if !accepting.is_empty() {
        partition.push(accepting.clone());
    }
    if !rejecting.is_empty() {
        partition.push(rejecting);
    }
    let mut work: VecDeque<BTreeSet<usize>> = partition.iter().cloned().collect();
    while let Some(splitter) = work.pop_front() {
        for sym in 0..k {
            let movers: BTreeSet<usize> = splitter
                .iter()
                .flat_map(|&t| preimage[t][sym].iter().copied())
                .collect();
            if movers.is_empty() {
                continue;
            }
            let mut next = Vec::with_capacity(partition.len());
            for block in partition.drain(..) {
                let inside: BTreeSet<usize> =
                    block.intersection(&movers).copied().collect();
                if inside.is_empty() || inside.len() == block.len() {
                    next.push(block);
                    continue;
                }
                let outside: BTreeSet<usize> =
                    block.difference(&movers).copied().collect();
                // Keep the worklist honest: replace the pending copy of the
                // split block, or enqueue the smaller half.
                if let Some(pos) = work.iter().position(|w| *w == block) {
                    work.remove(pos);
                    work.push_back(inside.clone());
                    work.push_back(outside.clone());
                } else if inside.len() <= outside.len() {
                    work.push_back(inside.clone());
                } else {
                    work.push_back(outside.clone());
                }
                next.push(inside);
                next.push(outside);
            }
            partition = next;
        }
    }
    let mut block_of = vec![0usize; n];
    for (b, block) in partition.iter().enumerate() {
        for &s in block {
            block_of[s] = b;
        }
    }
    let transitions = partition
        .iter()
        .map(|block| {
            let s = *block.iter().next().expect("blocks are nonempty");
            d.transitions[s].iter().map(|&t| block_of[t]).collect()
        })
        .collect();
    let accepting = partition
        .iter()
        .enumerate()
        .filter(|(_, block)| block.iter().any(|s| d.accepting.contains(s)))
        .map(|(b, _)| b)
        .collect();
    let quotient = Dfa {
        alphabet: d.alphabet.clone(),
        transitions,
        initial: block_of[d.initial],
        accepting,
    };
    quotient.reachable_canonical()
}

// ---------------------------------------------------------------------------
// Language equivalence.
// ---------------------------------------------------------------------------

/// Outcome of a language comparison: equal, or a shortest word accepted by
/// exactly one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    Distinct { word: Vec<String>, in_first: bool },
}

impl Equivalence {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equivalence::Equal)
    }
}

/// Extends the transition table onto a larger alphabet, sending the new
/// symbols to a (possibly fresh) sink.
fn on_alphabet(d: &Dfa, alphabet: &[String]) -> (Vec<Vec<usize>>, usize, BTreeSet<usize>) {
    let index: HashMap<&str, usize> = d
        .alphabet
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let fresh = alphabet.iter().any(|s| !index.contains_key(s.as_str()));
    let sink = d.states();
    let mut transitions: Vec<Vec<usize>> = d
        .transitions
        .iter()
        .map(|row| {
            alphabet
                .iter()
                .map(|s| index.get(s.as_str()).map_or(sink, |&i| row[i]))
                .collect()
        })
        .collect();
    if fresh {
        transitions.push(vec![sink; alphabet.len()]);
    }
    (transitions, d.initial, d.accepting.clone())
}

/// Breadth-first product search for a difference between the two accepted
/// languages; the first mismatch found is a shortest one, with ties broken
/// by alphabet order.
pub fn equivalent(d1: &Dfa, d2: &Dfa) -> Equivalence {
    let alphabet: Vec<String> = {
        let union: BTreeSet<&String> = d1.alphabet.iter().chain(&d2.alphabet).collect();
        union.into_iter().cloned().collect()
    };
    let (t1, i1, acc1) = on_alphabet(d1, &alphabet);
    let (t2, i2, acc2) = on_alphabet(d2, &alphabet);
    let mut seen: HashMap<(usize, usize), Option<((usize, usize), usize)>> = HashMap::new();
    let mut queue = VecDeque::from([(i1, i2)]);
    seen.insert((i1, i2), None);
    while let Some((s1, s2)) = queue.pop_front() {
        let a1 = acc1.contains(&s1);
        let a2 = acc2.contains(&s2);
        if a1 != a2 {
            // Walk the breadth-first tree back to the start.
            let mut word = Vec::new();
            let mut at = (s1, s2);
            while let Some(Some((prev, sym))) = seen.get(&at) {
                word.push(alphabet[*sym].clone());
                at = *prev;
            }
            word.reverse();
            return Equivalence::Distinct { word, in_first: a1 };
        }
        for sym in 0..alphabet.len() {
            let next = (t1[s1][sym], t2[s2][sym]);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(next) {
                e.insert(Some(((s1, s2), sym)));
                queue.push_back(next);
            }
        }
    }
    Equivalence::Equal
}

// ---------------------------------------------------------------------------
// Equivalence of programs, play for play.
// ---------------------------------------------------------------------------

/// Verdict of the play-level comparison of two programs.  `Distinct`
/// carries a shortest play belonging to exactly one of the two play sets;
/// extensionally equal programs can still be told apart this way.
#[derive(Debug, Clone)]
pub enum TermEquiv {
    IntensionallyEqual,
    Distinct { board: Rc<Arena>, witness: Play, in_first: bool },
}

impl TermEquiv {
    pub fn is_equal(&self) -> bool {
        matches!(self, TermEquiv::IntensionallyEqual)
    }
}

/// Compares the saturated play languages of two closed programs of the
/// same boolean type.  `complete_only` restricts to fully-answered plays
/// (the default elsewhere); passing `false` compares all plays instead.
pub fn term_equiv(
    t1: &Term,
    t2: &Term,
    depth: usize,
    fuel: u64,
    complete_only: bool,
) -> Result<TermEquiv, AutomataError> {
    let ty1 = typecheck_closed(t1).map_err(InterpError::from)?;
    let ty2 = typecheck_closed(t2).map_err(InterpError::from)?;
    if ty1 != ty2 {
        return Err(AutomataError::TypeMismatch(ty1, ty2));
    }
    if !finitary(&ty1) {
        return Err(AutomataError::NotFinitary(ty1));
    }
    let d1 = denote(t1, fuel)?;
    let d2 = denote(t2, fuel)?;
    let ps1 = d1.strategy.plays_of(depth, &[])?;
    let ps2 = d2.strategy.plays_of(depth, &[])?;
    let l1 = language(&ps1, complete_only)?;
    let l2 = language(&ps2, complete_only)?;
    let a1 = from_playset(&ps1, complete_only)?;
    let a2 = from_playset(&ps2, complete_only)?;
    if equivalent(&a1, &a2).is_equal() {
        return Ok(TermEquiv::IntensionallyEqual);
    }
    // A shortest play owned by exactly one side witnesses the difference.
    let witness = l1
        .iter()
        .filter(|(w, _)| !l2.contains_key(*w))
        .map(|(_, p)| (p, true))
        .chain(
            l2.iter()
                .filter(|(w, _)| !l1.contains_key(*w))
                .map(|(_, p)| (p, false)),
        )
        .min_by_key(|(p, in_first)| (p.len(), !in_first))
        .map(|(p, in_first)| (p.clone(), in_first))
        .expect("unequal languages differ somewhere");
    Ok(TermEquiv::Distinct {
        board: ps1.arena.clone(),
        witness: witness.0,
        in_first: witness.1,
    })
}

// ---------------------------------------------------------------------------
// Random automata for cross-checking the minimizers.
// ---------------------------------------------------------------------------

/// Deterministic pseudo-random automaton over single-letter symbols.
/// A fixed in-crate generator keeps results identical across platforms
/// and versions, which golden outputs rely on.
pub fn random_dfa(states: usize, symbols: usize, seed: u64) -> Dfa {
    let mut state = seed;
    let mut next = move || -> u64 {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    let alphabet: Vec<String> = (0..symbols)
        .map(|i| {
            char::from_u32('a' as u32 + i as u32)
                .expect("small alphabets")
                .to_string()
        })
        .collect();
    let transitions = (0..states)
        .map(|_| (0..symbols).map(|_| (next() % states as u64) as usize).collect())
        .collect();
    let accepting = (0..states).filter(|_| next() % 2 == 0).collect();
    Dfa { alphabet, transitions, initial: 0, accepting }
}

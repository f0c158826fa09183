//! Named showcase computations, rendered as plain text.  Each one
//! recomputes its content from the live machinery on every call — the
//! text is assembled, never pre-rendered — so these double as end-to-end
//! checks and as stable reference output.

use std::collections::BTreeSet;
use std::rc::Rc;

use crate::arena::{Arena, Move, Path, Payload, Step};
use crate::automata::{equivalent, hopcroft_minimize, isomorphic, nerode_minimize, random_dfa, Dfa};
use crate::composition::{render_interaction, InteractionStatus, InteractionTrace, Pipeline};
use crate::domains::{
    census, check_chain_continuity, check_monotone, definable_extensions, factorial_step,
    flat_tuple_poset, lfp_iterate, lsor_table, por_table, rsor_table, stream_examples,
    ContinuityVerdict, FinitePoset, MonotoneVerdict,
};
use crate::interpreter::{denote, evaluate, lift_ctx, uncurry_ctx, Value};
use crate::plays::{render_trace, Event, Play};
use crate::strategy::{Strategy, ViewResponse};
use crate::syntax::{parse_term, Type};

/// The demos, in presentation order.
pub const NAMES: [&str; 6] = ["fig1", "fig2", "por", "fixpoint", "continuity", "nerode"];

const FUEL: u64 = 10_000;

/// Renders one demo by name.
pub fn render(name: &str) -> Option<String> {
    match name {
        "fig1" => Some(fig1_text()),
        "fig2" => Some(fig2_text()),
        "por" => Some(por_text()),
        "fixpoint" => Some(fixpoint_text()),
        "continuity" => Some(continuity_text()),
        "nerode" => Some(nerode_text()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// fig1: one dialogue of the curried functional.
// ---------------------------------------------------------------------------

/// Alternates scripted environment moves with the strategy's own answers.
fn drive(strategy: &Strategy, script: &[Event]) -> Play {
    let mut play = Play::empty();
    for ev in script {
        play = play.snoc(ev.clone());
        if let Ok(Some(resp)) = strategy.respond(&play) {
            play = play.snoc(resp);
        }
    }
    play
}

const FIG1_SRC: &str = "\\f:N -> N. \\x:N. add (f x) 2";

/// The eight-event dialogue in which the functional calls `f` on `x`,
/// learns f(3) = 9, and answers 11.
pub fn fig1_play() -> (Rc<Arena>, Play) {
    let d = denote(&parse_term(FIG1_SRC).expect("fixed source"), FUEL).expect("closed term");
    use Step::*;
    let script = [
        Event::new(Move::question(Path::of(&[Cod, Cod])), None),
        Event::new(Move::question(Path::of(&[Dom, Dom])), Some(1)),
        Event::new(Move::answer(Path::of(&[Cod, Dom]), Payload::Num(3)), Some(3)),
        Event::new(Move::answer(Path::of(&[Dom, Cod]), Payload::Num(9)), Some(1)),
    ];
    let play = drive(&d.strategy, &script);
    (d.strategy.arena.clone(), play)
}

pub fn fig1_text() -> String {
    let (board, play) = fig1_play();
    let ps = denote(&parse_term(FIG1_SRC).expect("fixed source"), FUEL)
        .expect("closed term")
        .strategy
        .plays_of(4, &[3, 9])
        .expect("finite saturation");
    let mut out = String::new();
    out.push_str("the curried functional\n");
    out.push_str(&format!("term: {FIG1_SRC}\n"));
    out.push_str(&format!("board: {}\n", board.shape));
    out.push_str("one dialogue (the environment plays f = square, x = 3):\n");
    out.push_str(&render_trace(&board, &play));
    out.push_str(&format!(
        "innocent: {}   well-bracketed: {}\n",
        if ps.is_innocent() { "yes" } else { "NO" },
        if ps.is_well_bracketed() { "yes" } else { "NO" },
    ));
    out
}

// ---------------------------------------------------------------------------
// fig2: the full interaction against a squaring oracle, then hiding.
// ---------------------------------------------------------------------------

/// The squaring oracle as a one-question process on `N -> N`: ask the
/// argument, answer its square.
fn square_oracle() -> Strategy {
    let arena = Rc::new(Arena::of_type(&Type::arrow(Type::Nat, Type::Nat)));
    Strategy::from_rule(arena, "square", BTreeSet::new(), |view| {
        Ok(match view.len() {
            1 => Some(ViewResponse { mv: Move::question(Path::of(&[Step::Dom])), justifier: 0 }),
            3 => {
                let Some(Payload::Num(n)) = view.0[2].mv.payload else {
                    return Ok(None);
                };
                Some(ViewResponse {
                    mv: Move::answer(Path::of(&[Step::Cod]), Payload::Num(n * n)),
                    justifier: 0,
                })
            }
            _ => None,
        })
    })
}

/// The composed application: functional against oracle, input 3 supplied
/// by the environment.
pub struct Fig2 {
    pub board: Rc<Arena>,
    pub trace: InteractionTrace,
    pub residual: Play,
}

pub fn fig2_interaction() -> Fig2 {
    let d = denote(&parse_term(FIG1_SRC).expect("fixed source"), FUEL).expect("closed term");
    let params = [Type::arrow(Type::Nat, Type::Nat), Type::Nat];
    let tau = uncurry_ctx(&d.strategy, &params, &Type::Nat);
    let input = Arena::of_type(&Type::Nat);
    let sigma = Strategy::pair_arrow(
        &lift_ctx(&square_oracle(), &[Type::Nat]),
        &Strategy::copycat(&input),
    );
    let pipe = Pipeline::arrow(sigma, tau).expect("boards agree");
    let opening = pipe.composite.initials[0].clone();
    let mut script = vec![Event::new(Move::question(opening), None)];
    let trace = loop {
        let trace = pipe.run_script(&script, FUEL).expect("scripted moves are legal");
        if trace.status != InteractionStatus::Quiescent {
            break trace;
        }
        let ext = pipe.external_restriction(&trace.events);
        let done = ext.0.iter().any(|e| e.mv.is_answer() && e.justifier == Some(0));
        let Some(last) = ext.0.last() else { break trace };
        if !done && last.mv.is_question() && last.mv.path.0.first() == Some(&Step::Dom) {
            script.push(Event::new(
                Move::answer(last.mv.path.clone(), Payload::Num(3)),
                Some(ext.len() - 1),
            ));
            continue;
        }
        break trace;
    };
    let residual = pipe.external_restriction(&trace.events);
    Fig2 { board: pipe.composite.clone(), trace, residual }
}

pub fn fig2_text() -> String {
    let fig = fig2_interaction();
    let mut out = String::new();
    out.push_str("the curried functional applied to a squaring oracle at 3\n");
    out.push_str("full interaction (left: the input 3, mid: oracle and argument, right: result):\n");
    out.push_str(&render_interaction(&fig.trace));
    out.push_str("after hiding the middle:\n");
    out.push_str(&render_trace(&fig.board, &fig.residual));
    out
}

// ---------------------------------------------------------------------------
// por: the definability census.
// ---------------------------------------------------------------------------

pub fn por_text() -> String {
    let ty = Type::arrow(Type::Bool, Type::arrow(Type::Bool, Type::Bool));
    let bound = 8;
    let tables = definable_extensions(&ty, bound, FUEL).expect("finitary census");
    let summary = census(&ty, bound, FUEL).expect("finitary census");
    let monotone = check_monotone(
        &por_table().as_index_table(),
        &flat_tuple_poset(2),
        &FinitePoset::flat_bool(),
    )
    .expect("table is total");
    let mut out = String::new();
    out.push_str(&format!(
        "input-output tables definable at {} by programs of size <= {bound}\n",
        summary.type_name
    ));
    out.push_str(&format!("distinct tables: {}\n", summary.count));
    out.push_str(&format!(
        "contains left-sequential or:  {}\n",
        if tables.contains(&lsor_table()) { "yes" } else { "no" }
    ));
    out.push_str(&format!(
        "contains right-sequential or: {}\n",
        if tables.contains(&rsor_table()) { "yes" } else { "no" }
    ));
    out.push_str(&format!(
        "contains parallel or:         {}\n",
        if summary.contains_por { "yes" } else { "no" }
    ));
    out.push_str(&format!(
        "parallel or is monotone:      {}\n",
        if monotone.holds() { "yes" } else { "no" }
    ));
    out.push_str("parallel or, row by row:\n");
    out.push_str(&por_table().to_csv());
    out
}

// ---------------------------------------------------------------------------
// fixpoint: factorial grows one input per iterate.
// ---------------------------------------------------------------------------

pub fn fixpoint_text() -> String {
    let it = lfp_iterate(crate::domains::PartialFnGraph::empty(), factorial_step(6), 64)
        .expect("factorial stabilizes");
    let mut out = String::new();
    out.push_str("factorial as a least fixpoint over inputs 0..6\n");
    for (k, g) in it.iterates.iter().enumerate() {
        out.push_str(&format!("iterate {k}: {g}\n"));
        if k == it.stabilized_at {
            break;
        }
    }
    out.push_str(&format!("stabilized at iterate {}\n", it.stabilized_at));
    let fixed = it.value();
    out.push_str(&format!(
        "fixpoint(5) = {}\n",
        fixed.get(5).expect("5 is in the stabilized graph")
    ));
    let fact = "fix[N -> N] (\\f:N -> N. \\n:N. ifz n 1 (mul n (f (sub n 1))))";
    let mut played = Vec::new();
    let mut agree = true;
    for n in 0..=5u64 {
        let term = parse_term(&format!("({fact}) {n}")).expect("fixed source");
        let v = evaluate(&term, FUEL).expect("terminating program");
        if let Value::Num(k) = v {
            agree &= fixed.get(n) == Some(k);
            played.push(k.to_string());
        } else {
            agree = false;
        }
    }
    out.push_str(&format!("interpreter on 0..5: {}\n", played.join(" ")));
    out.push_str(&format!(
        "agreement with the fixpoint table: {}\n",
        if agree { "yes" } else { "NO" }
    ));
    out
}

// ---------------------------------------------------------------------------
// continuity: three stream observers.
// ---------------------------------------------------------------------------

pub fn continuity_text() -> String {
    let (domain, tables, chain) = stream_examples(4);
    let codomain = FinitePoset::flat_bool();
    let describe = [
        "(1) tt on any 1, silent otherwise      ",
        "(2) tt on any 1, ff only at the limit  ",
        "(3) tt on any 1, ff otherwise          ",
    ];
    let mut out = String::new();
    out.push_str(&format!(
        "stream observers on binary words up to length 4 plus the all-zero limit ({} points)\n",
        domain.len()
    ));
    for (i, label) in describe.iter().enumerate() {
        let mono = check_monotone(&tables[i], &domain, &codomain).expect("total table");
        match mono {
            MonotoneVerdict::Monotone => {
                let cont = check_chain_continuity(&tables[i], &domain, &codomain, &chain)
                    .expect("the all-zero chain is ascending");
                match cont {
                    ContinuityVerdict::Continuous => {
                        out.push_str(&format!("{label} monotone: yes; continuous along 0,00,000,...: yes\n"));
                    }
                    ContinuityVerdict::Break { image_lub, at_lub } => {
                        out.push_str(&format!(
                            "{label} monotone: yes; continuous along 0,00,000,...: no — images settle at {} but the limit answers {}\n",
                            codomain.label(image_lub),
                            codomain.label(at_lub),
                        ));
                    }
                }
            }
            MonotoneVerdict::Violation { .. } => {
                // Pin the canonical witness on the two-point restriction.
                let zero = domain.index_of("0").expect("word 0");
                let zero_one = domain.index_of("01").expect("word 01");
                let small = domain.restriction(&[zero, zero_one]).expect("valid indices");
                let small_table = vec![tables[i][zero], tables[i][zero_one]];
                let v = check_monotone(&small_table, &small, &codomain).expect("total table");
                let MonotoneVerdict::Violation { x, y } = v else {
                    unreachable!("the restriction still violates monotonicity");
                };
                out.push_str(&format!(
                    "{label} monotone: no — witness {} below {} with answers {} and {}\n",
                    small.label(x),
                    small.label(y),
                    codomain.label(small_table[x]),
                    codomain.label(small_table[y]),
                ));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// nerode: the two minimizers audit each other.
// ---------------------------------------------------------------------------

/// Ends-in-`a` with two redundant states, for minimizing down to two.
fn sloppy_ends_in_a() -> Dfa {
    Dfa {
        alphabet: vec!["a".into(), "b".into()],
        transitions: vec![vec![1, 2], vec![3, 2], vec![1, 0], vec![3, 0]],
        initial: 0,
        accepting: BTreeSet::from([1, 3]),
    }
}

pub fn nerode_text() -> String {
    let mut disagreements = 0usize;
    let mut language_changes = 0usize;
    for seed in 0..100u64 {
        let d = random_dfa(1 + (seed as usize % 8), 3, seed);
        let n = nerode_minimize(&d);
        let h = hopcroft_minimize(&d);
        if !isomorphic(&n, &h) {
            disagreements += 1;
        }
        if !equivalent(&d, &n).is_equal() || !equivalent(&d, &h).is_equal() {
            language_changes += 1;
        }
    }
    let sloppy = sloppy_ends_in_a();
    let minimal = nerode_minimize(&sloppy);
    let mut out = String::new();
    out.push_str("minimization cross-check on 100 pseudo-random automata (up to 8 states, 3 symbols)\n");
    out.push_str(&format!(
        "residual-class vs partition-refinement disagreements: {disagreements}\n"
    ));
    out.push_str(&format!("language changes introduced: {language_changes}\n"));
    out.push_str(&format!(
        "the ends-in-a recognizer minimizes from {} to {} states\n",
        sloppy.states(),
        minimal.states(),
    ));
    out.push_str("minimal automaton:\n");
    out.push_str(&minimal.to_dot());
    out
}

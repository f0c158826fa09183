//! Game-semantic workbench core.
//!
//! The crate models a small typed functional language (natural numbers,
//! booleans, products, functions, general recursion) and its dialogue-game
//! semantics: every type denotes an *arena* of moves, every program denotes an
//! *innocent strategy* telling the Proponent how to answer the Opponent's
//! questions, and program composition is strategy composition — run the two
//! dialogues against each other, then hide the moves they exchanged privately.
//!
//! Module map:
//!
//! * [`syntax`] — terms, types, parser, printer, typechecker, term enumeration.
//! * [`arena`] — arenas: move occurrences, polarity, enabling, combinators.
//! * [`plays`] — justified sequences, legality, views, bracketing, traces.
//! * [`strategy`] — innocent strategies as view functions; copycat family.
//! * [`composition`] — interaction traces, saturation, hiding, composition.
//! * [`interpreter`] — denotation of terms as strategies; evaluation; traces.
//! * [`domains`] — finite posets, monotone maps, fixpoint iteration, an
//!   extensional evaluator used as an independent oracle.
//! * [`automata`] — strategies-as-DFAs, minimization, language equivalence.
//! * [`demo`] — canned walkthroughs shared by the CLI and the test suite.

pub mod arena;
pub mod automata;
pub mod composition;
pub mod demo;
pub mod domains;
pub mod interpreter;
pub mod plays;
pub mod strategy;
pub mod syntax;

pub use arena::{Arena, Move, Path, Payload};
pub use automata::{term_equiv, Dfa, TermEquiv};
pub use composition::Pipeline;
pub use interpreter::{denote, evaluate, extract_term, trace_application, Denotation, Value};
pub use plays::{parse_trace, render_trace, Event, Play};
pub use strategy::{PlaySet, Strategy};
pub use syntax::{parse_term, parse_type, Term, Type};

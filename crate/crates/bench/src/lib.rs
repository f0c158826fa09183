//! Fixture builders shared by the benchmark targets.

use gamesem_core::automata::{random_dfa, Dfa};
use gamesem_core::composition::Pipeline;
use gamesem_core::strategy::Strategy;
use gamesem_core::{denote, parse_term, Arena, Type};

/// A spread of dense little machines for the minimizers to chew on.
pub fn random_machines(count: u64, states: usize) -> Vec<Dfa> {
    (0..count).map(|seed| random_dfa(states, 3, seed)).collect()
}

/// The double-interrogation strategy plugged into copycat: a composition
/// whose hidden dialogue does real work before every visible answer.
pub fn double_interrogation_pipeline() -> Pipeline {
    let term = parse_term("\\x:B. cond x (cond x tt ff) (cond x tt ff)").expect("fixed source");
    let d = denote(&term, 10_000).expect("closed term");
    let cc = Strategy::copycat(&Arena::of_type(&Type::Bool));
    Pipeline::arrow(cc, d.strategy).expect("boards fit")
}

/// Factorial applied to a literal, for the evaluator benchmark.
pub fn factorial_application(n: u64) -> gamesem_core::Term {
    parse_term(&format!(
        "fix[N -> N] (\\f:N -> N. \\n:N. ifz n 1 (mul n (f (sub n 1)))) {n}"
    ))
    .expect("fixed source")
}

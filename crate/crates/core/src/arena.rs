//! Game boards for types.
//!
//! Every occurrence of a base type inside a type determines one *question*
//! move and a schema of *answer* moves (one per value of the base type); the
//! occurrence is addressed by the path of steps (`dom`/`cod` through arrows,
//! `l`/`r` through products) from the root of the type to it. An arena
//! records, for each occurrence, who asks the question (polarity), and which
//! questions *enable* it — the justification structure plays must respect.
//!
//! Arrow reverses the roles on its domain side and lets the codomain's
//! opening questions justify the domain's; product is a side-by-side union
//! with no cross enabling.

use crate::syntax::Type;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// One step into a type: through an arrow's domain or codomain, or a
/// product's left or right component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Step {
    Dom,
    Cod,
    L,
    R,
}

impl Step {
    fn label(self) -> &'static str {
        match self {
            Step::Dom => "dom",
            Step::Cod => "cod",
            Step::L => "l",
            Step::R => "r",
        }
    }
}

/// Address of a base-type occurrence: the steps from the root of the type.
/// Rendered dot-joined, with `ε` for the empty path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Path(pub Vec<Step>);

impl Path {
    pub fn empty() -> Path {
        Path(Vec::new())
    }

    pub fn of(steps: &[Step]) -> Path {
        Path(steps.to_vec())
    }

    /// The path with `step` prepended.
    pub fn prefixed(&self, step: Step) -> Path {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(step);
        v.extend_from_slice(&self.0);
        Path(v)
    }

    /// Strips a leading `step`, if present.
    pub fn strip(&self, step: Step) -> Option<Path> {
        match self.0.split_first() {
            Some((s, rest)) if *s == step => Some(Path(rest.to_vec())),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Option<Path> {
        if s == "ε" || s.is_empty() {
            return Some(Path::empty());
        }
        let mut steps = Vec::new();
        for part in s.split('.') {
            steps.push(match part {
                "dom" => Step::Dom,
                "cod" => Step::Cod,
                "l" => Step::L,
                "r" => Step::R,
                _ => return None,
            });
        }
        Some(Path(steps))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<&str> = self.0.iter().map(|s| s.label()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Who moves: the Opponent (environment) or the Proponent (program).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    O,
    P,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::O => Polarity::P,
            Polarity::P => Polarity::O,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::O => write!(f, "O"),
            Polarity::P => write!(f, "P"),
        }
    }
}

/// Value carried by an answer move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Payload {
    Num(u64),
    Bool(bool),
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Num(n) => write!(f, "{n}"),
            Payload::Bool(true) => write!(f, "tt"),
            Payload::Bool(false) => write!(f, "ff"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    Question,
    Answer,
}

/// A concrete move: which occurrence it belongs to, whether it asks or
/// answers, and the value if it answers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Move {
    pub path: Path,
    pub kind: MoveKind,
    pub payload: Option<Payload>,
}

impl Move {
    pub fn question(path: Path) -> Move {
        Move { path, kind: MoveKind::Question, payload: None }
    }

    pub fn answer(path: Path, payload: Payload) -> Move {
        Move { path, kind: MoveKind::Answer, payload: Some(payload) }
    }

    pub fn is_question(&self) -> bool {
        self.kind == MoveKind::Question
    }

    pub fn is_answer(&self) -> bool {
        self.kind == MoveKind::Answer
    }
}

/// One base-type occurrence of an arena.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    /// `Type::Nat` or `Type::Bool`: the payload alphabet of the answers.
    pub base: Type,
    /// Polarity of the question here; its answers have the flipped polarity.
    pub question_polarity: Polarity,
    /// Question occurrences whose questions justify this one. Empty iff the
    /// question is initial.
    pub enablers: Vec<Path>,
}

/// The game board of a type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arena {
    pub shape: Type,
    pub occs: BTreeMap<Path, Occurrence>,
    /// Paths of the initial (unjustified) questions, in path order.
    pub initials: Vec<Path>,
}

impl Arena {
    /// Board of a single base type: one opening question by O, answered by P
    /// with a value of that type.
    pub fn flat(base: Type) -> Arena {
        assert!(base.is_ground(), "flat arena needs a ground type");
        let mut occs = BTreeMap::new();
        occs.insert(
            Path::empty(),
            Occurrence {
                base: base.clone(),
                question_polarity: Polarity::O,
                enablers: Vec::new(),
            },
        );
        Arena { shape: base, occs, initials: vec![Path::empty()] }
    }

    /// Function board: domain with roles reversed, codomain as-is, and the
    /// codomain's initial questions justify the domain's.
    pub fn arrow(dom: Arena, cod: Arena) -> Arena {
        let mut occs = BTreeMap::new();
        let cod_initials: Vec<Path> =
            cod.initials.iter().map(|p| p.prefixed(Step::Cod)).collect();
        for (p, occ) in &dom.occs {
            let was_initial = occ.enablers.is_empty();
            occs.insert(
                p.prefixed(Step::Dom),
                Occurrence {
                    base: occ.base.clone(),
                    question_polarity: occ.question_polarity.flip(),
                    enablers: if was_initial {
                        cod_initials.clone()
                    } else {
                        occ.enablers.iter().map(|e| e.prefixed(Step::Dom)).collect()
                    },
                },
            );
        }
        for (p, occ) in &cod.occs {
            occs.insert(
                p.prefixed(Step::Cod),
                Occurrence {
                    base: occ.base.clone(),
                    question_polarity: occ.question_polarity,
                    enablers: occ.enablers.iter().map(|e| e.prefixed(Step::Cod)).collect(),
                },
            );
        }
        Arena {
            shape: Type::arrow(dom.shape, cod.shape),
            occs,
            initials: cod_initials,
        }
    }

    /// Side-by-side board: both components playable independently.
    pub fn product(left: Arena, right: Arena) -> Arena {
        let mut occs = BTreeMap::new();
        for (p, occ) in &left.occs {
            occs.insert(
                p.prefixed(Step::L),
                Occurrence {
                    base: occ.base.clone(),
                    question_polarity: occ.question_polarity,
                    enablers: occ.enablers.iter().map(|e| e.prefixed(Step::L)).collect(),
                },
            );
        }
        for (p, occ) in &right.occs {
            occs.insert(
                p.prefixed(Step::R),
                Occurrence {
                    base: occ.base.clone(),
                    question_polarity: occ.question_polarity,
                    enablers: occ.enablers.iter().map(|e| e.prefixed(Step::R)).collect(),
                },
            );
        }
        let mut initials: Vec<Path> = left
            .initials
            .iter()
            .map(|p| p.prefixed(Step::L))
            .chain(right.initials.iter().map(|p| p.prefixed(Step::R)))
            .collect();
        initials.sort();
        Arena {
            shape: Type::product(left.shape, right.shape),
            occs,
            initials,
        }
    }

    /// The board of a type, by structural recursion.
    pub fn of_type(t: &Type) -> Arena {
        match t {
            Type::Nat | Type::Bool => Arena::flat(t.clone()),
            Type::Arrow(a, b) => Arena::arrow(Arena::of_type(a), Arena::of_type(b)),
            Type::Product(a, b) => Arena::product(Arena::of_type(a), Arena::of_type(b)),
        }
    }

    pub fn occurrence(&self, p: &Path) -> Option<&Occurrence> {
        self.occs.get(p)
    }

    pub fn is_initial(&self, p: &Path) -> bool {
        self.occs.get(p).map(|o| o.enablers.is_empty()).unwrap_or(false)
    }

    /// Polarity of a concrete move (answers flip their question's polarity).
    pub fn polarity_of(&self, m: &Move) -> Option<Polarity> {
        let occ = self.occs.get(&m.path)?;
        Some(match m.kind {
            MoveKind::Question => occ.question_polarity,
            MoveKind::Answer => occ.question_polarity.flip(),
        })
    }

    /// Whether the move is well-formed here: known occurrence, and answers
    /// carry a payload of the occurrence's base type.
    pub fn contains(&self, m: &Move) -> bool {
        match self.occs.get(&m.path) {
            None => false,
            Some(occ) => match (m.kind, &m.payload) {
                (MoveKind::Question, None) => true,
                (MoveKind::Answer, Some(Payload::Num(_))) => occ.base == Type::Nat,
                (MoveKind::Answer, Some(Payload::Bool(_))) => occ.base == Type::Bool,
                _ => false,
            },
        }
    }

    /// The question occurrences this occurrence's question justifies.
    pub fn enabled_questions(&self, p: &Path) -> Vec<Path> {
        self.occs
            .iter()
            .filter(|(_, occ)| occ.enablers.contains(p))
            .map(|(q, _)| q.clone())
            .collect()
    }

    /// DOT rendering of the enabling graph: one node per question and per
    /// answer schema, an edge from each question to the moves it enables.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph arena {\n  rankdir=TB;\n");
        for (p, occ) in &self.occs {
            let q_id = format!("q_{}", node_id(p));
            let a_id = format!("a_{}", node_id(p));
            let a_schema = match occ.base {
                Type::Nat => "a(n)",
                _ => "a(tt|ff)",
            };
            out.push_str(&format!(
                "  {q_id} [label=\"q @{p} ({})\" shape=box];\n",
                occ.question_polarity
            ));
            out.push_str(&format!(
                "  {a_id} [label=\"{a_schema} @{p} ({})\" shape=ellipse];\n",
                occ.question_polarity.flip()
            ));
            out.push_str(&format!("  {q_id} -> {a_id} [style=dashed];\n"));
        }
        for (p, occ) in &self.occs {
            for e in &occ.enablers {
                out.push_str(&format!("  q_{} -> q_{};\n", node_id(e), node_id(p)));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn node_id(p: &Path) -> String {
    if p.0.is_empty() {
        "root".to_string()
    } else {
        p.0.iter().map(|s| s.label()).collect::<Vec<_>>().join("_")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;
    use proptest::prelude::*;

    fn arena_of(src: &str) -> Arena {
        Arena::of_type(&parse_type(src).unwrap())
    }

    #[test]
    fn flat_bool_board() {
        let a = Arena::flat(Type::Bool);
        assert_eq!(a.initials, vec![Path::empty()]);
        let occ = a.occurrence(&Path::empty()).unwrap();
        assert_eq!(occ.question_polarity, Polarity::O);
        assert!(a.contains(&Move::question(Path::empty())));
        assert!(a.contains(&Move::answer(Path::empty(), Payload::Bool(true))));
        assert!(a.contains(&Move::answer(Path::empty(), Payload::Bool(false))));
        assert!(!a.contains(&Move::answer(Path::empty(), Payload::Num(0))));
    }

    #[test]
    fn flat_nat_answers_range_lazily() {
        let a = Arena::flat(Type::Nat);
        for n in [0, 1, 7, 1_000_000] {
            assert!(a.contains(&Move::answer(Path::empty(), Payload::Num(n))));
        }
        assert!(!a.contains(&Move::answer(Path::empty(), Payload::Bool(true))));
    }

    #[test]
    fn first_order_arrow_enabling() {
        let a = arena_of("N -> N");
        let cod = Path::of(&[Step::Cod]);
        let dom = Path::of(&[Step::Dom]);
        assert_eq!(a.initials, vec![cod.clone()]);
        assert_eq!(a.occurrence(&cod).unwrap().question_polarity, Polarity::O);
        let dom_occ = a.occurrence(&dom).unwrap();
        assert_eq!(dom_occ.question_polarity, Polarity::P);
        assert_eq!(dom_occ.enablers, vec![cod]);
    }

    #[test]
    fn second_order_board_has_four_columns() {
        let a = arena_of("(N -> N) -> N -> N");
        let cc = Path::of(&[Step::Cod, Step::Cod]);
        let cd = Path::of(&[Step::Cod, Step::Dom]);
        let dc = Path::of(&[Step::Dom, Step::Cod]);
        let dd = Path::of(&[Step::Dom, Step::Dom]);
        assert_eq!(a.occs.len(), 4);
        assert_eq!(a.initials, vec![cc.clone()]);
        assert_eq!(a.occurrence(&cc).unwrap().question_polarity, Polarity::O);
        assert_eq!(a.occurrence(&cd).unwrap().question_polarity, Polarity::P);
        assert_eq!(a.occurrence(&dc).unwrap().question_polarity, Polarity::P);
        // Double role reversal: the innermost occurrence is O's again.
        assert_eq!(a.occurrence(&dd).unwrap().question_polarity, Polarity::O);
        assert_eq!(a.occurrence(&cd).unwrap().enablers, vec![cc.clone()]);
        assert_eq!(a.occurrence(&dc).unwrap().enablers, vec![cc]);
        assert_eq!(a.occurrence(&dd).unwrap().enablers, vec![dc]);
    }

    #[test]
    fn product_sides_are_independent() {
        let a = arena_of("B * B");
        assert_eq!(
            a.initials,
            vec![Path::of(&[Step::L]), Path::of(&[Step::R])]
        );
        for p in &a.initials {
            assert!(a.occurrence(p).unwrap().enablers.is_empty());
            assert_eq!(a.occurrence(p).unwrap().question_polarity, Polarity::O);
        }
    }

    #[test]
    fn pair_argument_board() {
        // The board for ((N -> N) * N) -> N: an opening question, two
        // proponent questions into the two components of the pair, and an
        // opponent question inside the function component.
        let a = arena_of("((N -> N) * N) -> N");
        let root = Path::of(&[Step::Cod]);
        let f_q = Path::of(&[Step::Dom, Step::L, Step::Cod]);
        let f_arg = Path::of(&[Step::Dom, Step::L, Step::Dom]);
        let x_q = Path::of(&[Step::Dom, Step::R]);
        assert_eq!(a.occs.len(), 4);
        assert_eq!(a.initials, vec![root.clone()]);
        assert_eq!(a.occurrence(&f_q).unwrap().question_polarity, Polarity::P);
        assert_eq!(a.occurrence(&f_q).unwrap().enablers, vec![root.clone()]);
        assert_eq!(a.occurrence(&f_arg).unwrap().question_polarity, Polarity::O);
        assert_eq!(a.occurrence(&f_arg).unwrap().enablers, vec![f_q]);
        assert_eq!(a.occurrence(&x_q).unwrap().question_polarity, Polarity::P);
        assert_eq!(a.occurrence(&x_q).unwrap().enablers, vec![root]);
    }

    #[test]
    fn of_type_is_stable() {
        let t = parse_type("(N -> N) -> N * B").unwrap();
        assert_eq!(Arena::of_type(&t), Arena::of_type(&t.clone()));
    }

    #[test]
    fn dot_export_lists_every_occurrence() {
        let a = arena_of("N -> N");
        let dot = a.to_dot();
        assert!(dot.starts_with("digraph arena {"));
        assert!(dot.contains("q @cod (O)"));
        assert!(dot.contains("q @dom (P)"));
        assert!(dot.contains("a(n) @cod (P)"));
        assert!(dot.contains("q_cod -> q_dom;"));
    }

    #[test]
    fn path_display_and_parse() {
        let p = Path::of(&[Step::Dom, Step::L, Step::Cod]);
        assert_eq!(p.to_string(), "dom.l.cod");
        assert_eq!(Path::parse("dom.l.cod").unwrap(), p);
        assert_eq!(Path::parse("ε").unwrap(), Path::empty());
        assert_eq!(Path::empty().to_string(), "ε");
        assert!(Path::parse("dom.x").is_none());
    }

    fn arb_type(depth: u32) -> BoxedStrategy<Type> {
        if depth == 0 {
            prop_oneof![Just(Type::Nat), Just(Type::Bool)].boxed()
        } else {
            prop_oneof![
                1 => prop_oneof![Just(Type::Nat), Just(Type::Bool)],
                2 => (arb_type(depth - 1), arb_type(depth - 1))
                    .prop_map(|(a, b)| Type::arrow(a, b)),
                1 => (arb_type(depth - 1), arb_type(depth - 1))
                    .prop_map(|(a, b)| Type::product(a, b)),
            ]
            .boxed()
        }
    }

    proptest! {
        #[test]
        fn boards_are_well_formed(t in arb_type(4)) {
            let a = Arena::of_type(&t);
            // initial moves are O-questions
            for p in &a.initials {
                let occ = a.occurrence(p).unwrap();
                prop_assert!(occ.enablers.is_empty());
                prop_assert_eq!(occ.question_polarity, Polarity::O);
            }
            // enabling alternates polarity and never leaves the board
            for (p, occ) in &a.occs {
                for e in &occ.enablers {
                    let eocc = a.occurrence(e);
                    prop_assert!(eocc.is_some(), "enabler {} missing", e);
                    prop_assert_ne!(
                        eocc.unwrap().question_polarity,
                        occ.question_polarity,
                        "no polarity flip {} -> {}", e, p
                    );
                }
            }
            // the enabling graph is acyclic
            fn acyclic(a: &Arena) -> bool {
                // colors: 0 unvisited, 1 on stack, 2 done
                let mut color: std::collections::BTreeMap<&Path, u8> =
                    a.occs.keys().map(|p| (p, 0u8)).collect();
                fn visit<'a>(
                    a: &'a Arena,
                    p: &'a Path,
                    color: &mut std::collections::BTreeMap<&'a Path, u8>,
                ) -> bool {
                    match color.get(p) {
                        Some(1) => return false,
                        Some(2) => return true,
                        _ => {}
                    }
                    color.insert(p, 1);
                    for e in &a.occs[p].enablers {
                        if !visit(a, e, color) {
                            return false;
                        }
                    }
                    color.insert(p, 2);
                    true
                }
                let paths: Vec<&Path> = a.occs.keys().collect();
                paths.into_iter().all(|p| visit(a, p, &mut color))
            }
            prop_assert!(acyclic(&a));
        }
    }
}

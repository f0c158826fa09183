//! The extensional companion to the dialogue model: finite partial orders,
//! monotone maps with violation witnesses, chain continuity checks, least
//! fixpoints by iteration from bottom, and input-output tables for
//! first-order boolean programs.
//!
//! Everything here deliberately ignores *how* a program interrogates its
//! arguments and records only *what* it returns; comparing this coarse view
//! with the dialogue semantics is the point of the module.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::interpreter::{evaluate, InterpError, Value};
use crate::syntax::{enumerate_terms, typecheck_closed, Term, Type};

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("element index {0} is out of range for a poset with {1} elements")]
    BadIndex(usize, usize),
    #[error("the order is not antisymmetric: elements {0} and {1} sit below each other")]
    NotAntisymmetric(usize, usize),
    #[error("a table over this domain needs {expected} entries, got {actual}")]
    TableSize { expected: usize, actual: usize },
    #[error("the chain is empty")]
    EmptyChain,
    #[error("the chain is not ascending at position {0}")]
    ChainNotAscending(usize),
    #[error("chain point {0} does not sit below the stated least upper bound")]
    ChainAboveLub(usize),
    #[error("the image of the chain is not ascending; check monotonicity first")]
    ImageNotAscending(usize),
    #[error("the poset has no least element")]
    NotPointed,
    #[error("iteration did not stabilize within {0} steps")]
    NoStabilization(u64),
    #[error("input {0} appears twice in a function graph")]
    NotFunctional(u64),
    #[error("expected a first-order boolean type, got {0}")]
    NotFirstOrderBool(Type),
    #[error("the finitary boolean fragment excludes {0}")]
    NotFinitary(String),
    #[error("the table is not monotone: elements {x} and {y} witness the failure")]
    NotMonotone { x: usize, y: usize },
    #[error(transparent)]
    Interp(#[from] InterpError),
}

// ---------------------------------------------------------------------------
// Finite posets.
// ---------------------------------------------------------------------------

/// A finite partial order, stored as a full ≤ matrix over indexed, labelled
/// elements.  Construction closes the given pairs reflexively and
/// transitively and rejects relations that collapse distinct elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn from_pairs<S: Into<String>>(
        labels: Vec<S>,
        below: &[(usize, usize)],
    ) -> Result<Self, DomainError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in below {
            let m = a.max(b);
            if m >= n {
                return Err(DomainError::BadIndex(m, n));
            }
            leq[a][b] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(DomainError::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(FinitePoset { labels, leq })
    }

    /// The flat booleans: a least element below `ff` and `tt`, which are
    /// incomparable with each other.  Element order matches [`Flat`].
    pub fn flat_bool() -> Self {
        FinitePoset::from_pairs(vec!["bot", "ff", "tt"], &[(0, 1), (0, 2)])
            .expect("flat booleans form a poset")
    }

    /// The single-point order.
    pub fn singleton(label: &str) -> Self {
        FinitePoset::from_pairs(vec![label], &[]).expect("one point is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The least element, when there is one.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq[i][j]))
    }

    /// Componentwise order on pairs; the pair (i, j) gets index
    /// `i * other.len() + j` and the label "(a,b)".
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        let mut below = Vec::new();
        for i in 0..self.len() {
            for j in 0..other.len() {
                labels.push(format!("({},{})", self.labels[i], other.labels[j]));
            }
        }
        let idx = |i: usize, j: usize| i * other.len() + j;
        for a in 0..self.len() {
            for b in 0..other.len() {
                for c in 0..self.len() {
                    for d in 0..other.len() {
                        if self.leq(a, c) && other.leq(b, d) {
                            below.push((idx(a, b), idx(c, d)));
                        }
                    }
                }
            }
        }
        FinitePoset::from_pairs(labels, &below).expect("products of posets are posets")
    }

    /// The sub-order on a chosen list of elements, in the given order.
    pub fn restriction(&self, keep: &[usize]) -> Result<FinitePoset, DomainError> {
        let labels: Vec<String> = keep
            .iter()
            .map(|&i| {
                self.labels
                    .get(i)
                    .cloned()
                    .ok_or(DomainError::BadIndex(i, self.len()))
            })
            .collect::<Result<_, _>>()?;
        let mut below = Vec::new();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if self.leq(i, j) {
                    below.push((a, b));
                }
            }
        }
        FinitePoset::from_pairs(labels, &below)
    }
}

// ---------------------------------------------------------------------------
// Monotonicity and chain continuity.
// ---------------------------------------------------------------------------

/// Outcome of the monotonicity check: either every comparable pair is
/// preserved, or a concrete pair witnesses the failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneVerdict {
    Monotone,
    Violation { x: usize, y: usize },
}

impl MonotoneVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, MonotoneVerdict::Monotone)
    }
}

fn check_table(table: &[usize], domain: &FinitePoset, codomain: &FinitePoset) -> Result<(), DomainError> {
    if table.len() != domain.len() {
        return Err(DomainError::TableSize {
            expected: domain.len(),
            actual: table.len(),
        });
    }
    for &v in table {
        if v >= codomain.len() {
            return Err(DomainError::BadIndex(v, codomain.len()));
        }
    }
    Ok(())
}

/// Exhaustively checks `x ⊑ y ⟹ f(x) ⊑ f(y)` over the whole domain,
/// returning the first offending pair in index order when it fails.
pub fn check_monotone(
    table: &[usize],
    domain: &FinitePoset,
    codomain: &FinitePoset,
) -> Result<MonotoneVerdict, DomainError> {
    check_table(table, domain, codomain)?;
    for x in 0..domain.len() {
        for y in 0..domain.len() {
            if domain.leq(x, y) && !codomain.leq(table[x], table[y]) {
                return Ok(MonotoneVerdict::Violation { x, y });
            }
        }
    }
    Ok(MonotoneVerdict::Monotone)
}

/// Every monotone total map from `domain` to `codomain`, as tables, by
/// filtering the full function space.
pub fn enumerate_monotone(domain: &FinitePoset, codomain: &FinitePoset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = domain.len();
    let m = codomain.len();
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut table = vec![0usize; n];
    loop {
        if check_monotone(&table, domain, codomain)
            .expect("generated tables are total")
            .holds()
        {
            out.push(table.clone());
        }
        // Odometer step through the m^n tables.
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            table[i] += 1;
            if table[i] < m {
                break;
            }
            table[i] = 0;
            i += 1;
        }
    }
}

/// An ascending sequence together with its designated least upper bound;
/// stands in for an ω-chain when the interesting limit point is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub points: Vec<usize>,
    pub lub: usize,
}

/// Outcome of the continuity check along one chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuityVerdict {
    Continuous,
    /// The limit of the images differs from the image of the limit.
    Break { image_lub: usize, at_lub: usize },
}

impl ContinuityVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ContinuityVerdict::Continuous)
    }
}

/// Compares `⊔ f(xₙ)` with `f(⊔ xₙ)` along the supplied chain.  The image
/// of an ascending chain under a map that is monotone on it is again
/// ascending, so its lub is the last point; a non-ascending image is
/// reported as an error rather than silently ordered.  The monotone half
/// `⊔f(xₙ) ⊑ f(⊔xₙ)` is verified unconditionally.
pub fn check_chain_continuity(
    table: &[usize],
    domain: &FinitePoset,
    codomain: &FinitePoset,
    chain: &Chain,
) -> Result<ContinuityVerdict, DomainError> {
    check_table(table, domain, codomain)?;
    if chain.points.is_empty() {
        return Err(DomainError::EmptyChain);
    }
    for (i, w) in chain.points.windows(2).enumerate() {
        if !domain.leq(w[0], w[1]) {
            return Err(DomainError::ChainNotAscending(i + 1));
        }
    }
    for (i, &p) in chain.points.iter().enumerate() {
        if p >= domain.len() {
            return Err(DomainError::BadIndex(p, domain.len()));
        }
        if !domain.leq(p, chain.lub) {
            return Err(DomainError::ChainAboveLub(i));
        }
    }
    let image: Vec<usize> = chain.points.iter().map(|&p| table[p]).collect();
    for (i, w) in image.windows(2).enumerate() {
        if !codomain.leq(w[0], w[1]) {
            return Err(DomainError::ImageNotAscending(i + 1));
        }
    }
    let image_lub = *image.last().expect("chain is nonempty");
    let at_lub = table[chain.lub];
    if !codomain.leq(image_lub, at_lub) {
        // Monotonicity would force this inequality; a chain that breaks it
        // cannot come from a monotone map.
        return Err(DomainError::ImageNotAscending(image.len()));
    }
    if image_lub == at_lub {
        Ok(ContinuityVerdict::Continuous)
    } else {
        Ok(ContinuityVerdict::Break { image_lub, at_lub })
    }
}

/// A total order-preserving map between finite posets, checked on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    pub domain: FinitePoset,
    pub codomain: FinitePoset,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(
        domain: FinitePoset,
        codomain: FinitePoset,
        table: Vec<usize>,
    ) -> Result<Self, DomainError> {
        match check_monotone(&table, &domain, &codomain)? {
            MonotoneVerdict::Monotone => Ok(MonotoneMap { domain, codomain, table }),
            MonotoneVerdict::Violation { x, y } => Err(DomainError::NotMonotone { x, y }),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Least fixpoint of an endo-map on a pointed poset, by iterating from
    /// the least element until the sequence repeats.
    pub fn lfp(&self, fuel: u64) -> Result<Iteration<usize>, DomainError> {
        if self.domain != self.codomain {
            return Err(DomainError::TableSize {
                expected: self.domain.len(),
                actual: self.codomain.len(),
            });
        }
        let bottom = self.domain.bottom().ok_or(DomainError::NotPointed)?;
        lfp_iterate(bottom, |&x| self.table[x], fuel)
    }
}

// ---------------------------------------------------------------------------
// Least fixpoints by iteration.
// ---------------------------------------------------------------------------

/// The iteration ⊥, F(⊥), F²(⊥), … with its stabilization point: the
/// final entry equals its predecessor, and earlier entries are all
/// distinct from their successors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iteration<T> {
    pub iterates: Vec<T>,
    pub stabilized_at: usize,
}

impl<T> Iteration<T> {
    pub fn value(&self) -> &T {
        self.iterates.last().expect("iteration is nonempty")
    }
}

/// Iterates `step` from `bottom` until two successive values agree, keeping
/// the whole ascent.  `fuel` bounds the number of steps so that maps
/// presented lazily over infinite carriers cannot loop forever.
pub fn lfp_iterate<T: Clone + PartialEq>(
    bottom: T,
    step: impl Fn(&T) -> T,
    fuel: u64,
) -> Result<Iteration<T>, DomainError> {
    let mut iterates = vec![bottom];
    for _ in 0..fuel {
        let next = step(iterates.last().expect("nonempty"));
        let done = *iterates.last().expect("nonempty") == next;
        iterates.push(next);
        if done {
            return Ok(Iteration { stabilized_at: iterates.len() - 1, iterates });
        }
    }
    Err(DomainError::NoStabilization(fuel))
}

// ---------------------------------------------------------------------------
// Partial function graphs.
// ---------------------------------------------------------------------------

/// A finite partial function on numbers as its graph, ordered by graph
/// inclusion.  The map representation makes functionality structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct PartialFnGraph {
    pairs: BTreeMap<u64, u64>,
}

impl PartialFnGraph {
    pub fn empty() -> Self {
        PartialFnGraph::default()
    }

    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self, DomainError> {
        let mut g = PartialFnGraph::empty();
        for (x, y) in pairs {
            g.insert(x, y)?;
        }
        Ok(g)
    }

    /// Adds one correspondence; a second output for the same input is
    /// rejected, a repeat of an existing pair is harmless.
    pub fn insert(&mut self, x: u64, y: u64) -> Result<(), DomainError> {
        match self.pairs.get(&x) {
            Some(&old) if old != y => Err(DomainError::NotFunctional(x)),
            _ => {
                self.pairs.insert(x, y);
                Ok(())
            }
        }
    }

    pub fn get(&self, x: u64) -> Option<u64> {
        self.pairs.get(&x).copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn inputs(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.keys().copied()
    }

    /// Graph inclusion: the order on partial functions.
    pub fn below(&self, other: &PartialFnGraph) -> bool {
        self.pairs
            .iter()
            .all(|(x, y)| other.pairs.get(x) == Some(y))
    }
}

impl fmt::Display for PartialFnGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, y)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}\u{21a6}{y}")?;
        }
        write!(f, "}}")
    }
}

/// One unfolding of the recursive factorial: defined at 0 outright and at
/// `n ≤ max` wherever the approximant already covers `n − 1`.
pub fn factorial_step(max: u64) -> impl Fn(&PartialFnGraph) -> PartialFnGraph {
    move |g: &PartialFnGraph| {
        let mut next = PartialFnGraph::empty();
        next.insert(0, 1).expect("fresh graph");
        for n in 1..=max {
            if let Some(prev) = g.get(n - 1) {
                next.insert(n, n.wrapping_mul(prev)).expect("fresh graph");
            }
        }
        next
    }
}

// ---------------------------------------------------------------------------
// Extensions of first-order boolean programs.
// ---------------------------------------------------------------------------

/// A point of the flat booleans.  The derived order (`Bot < Ff < Tt`) is
/// only used for indexing and table keys; the information order is the one
/// carried by [`FinitePoset::flat_bool`], whose element order this matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Flat {
    Bot,
    Ff,
    Tt,
}

impl Flat {
    pub const ALL: [Flat; 3] = [Flat::Bot, Flat::Ff, Flat::Tt];

    pub fn of_value(v: Value) -> Option<Flat> {
        match v {
            Value::Boolean(true) => Some(Flat::Tt),
            Value::Boolean(false) => Some(Flat::Ff),
            Value::Undefined => Some(Flat::Bot),
            Value::Num(_) => None,
        }
    }

    /// The closed term denoting this point, with divergence for ⊥.
    pub fn as_term(self) -> Term {
        match self {
            Flat::Bot => Term::Omega(Type::Bool),
            Flat::Ff => Term::BoolLit(false),
            Flat::Tt => Term::BoolLit(true),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flat::Bot => "bot",
            Flat::Ff => "ff",
            Flat::Tt => "tt",
        })
    }
}

/// The input-output table of a first-order boolean program: one row per
/// argument tuple over the flat booleans.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExtensionTable {
    pub arity: usize,
    pub rows: BTreeMap<Vec<Flat>, Flat>,
}

impl ExtensionTable {
    pub fn get(&self, args: &[Flat]) -> Option<Flat> {
        self.rows.get(args).copied()
    }

    /// One CSV line per argument tuple, headed `x0,…,x{n−1},out`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.arity {
            s.push_str(&format!("x{i},"));
        }
        s.push_str("out\n");
        for (args, out) in &self.rows {
            for a in args {
                s.push_str(&format!("{a},"));
            }
            s.push_str(&format!("{out}\n"));
        }
        s
    }

    /// The same table as an index table over the n-fold product of the flat
    /// booleans, in the element order of [`flat_tuple_poset`].
    pub fn as_index_table(&self) -> Vec<usize> {
        self.rows.values().map(|f| f.index()).collect()
    }
}

fn all_tuples(n: usize) -> Vec<Vec<Flat>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * 3);
        for t in &out {
            for f in Flat::ALL {
                let mut t = t.clone();
                t.push(f);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// The n-fold product of the flat booleans, with tuple (a₁,…,aₙ) at the
/// mixed-radix index matching the row order of [`ExtensionTable`].
pub fn flat_tuple_poset(n: usize) -> FinitePoset {
    let mut p = FinitePoset::singleton("()");
    for _ in 0..n {
        p = p.product(&FinitePoset::flat_bool());
    }
    p
}

/// Splits a first-order boolean type into its arity: `B -> … -> B` with
/// `n` arguments.  Anything else is rejected.
fn bool_arity(ty: &Type) -> Result<usize, DomainError> {
    let (params, ground) = ty.uncurry();
    if *ground != Type::Bool || params.iter().any(|p| **p != Type::Bool) {
        return Err(DomainError::NotFirstOrderBool(ty.clone()));
    }
    Ok(params.len())
}

/// Tabulates a closed first-order boolean program by running it on every
/// tuple of flat-boolean arguments, with ⊥ supplied as a diverging term.
pub fn extension_of(t: &Term, fuel: u64) -> Result<ExtensionTable, DomainError> {
    let ty = typecheck_closed(t).map_err(InterpError::from)?;
    let arity = bool_arity(&ty)?;
    let mut rows = BTreeMap::new();
    for tuple in all_tuples(arity) {
        let mut applied = t.clone();
        for arg in &tuple {
            applied = Term::App(Box::new(applied), Box::new(arg.as_term()));
        }
        let out = Flat::of_value(evaluate(&applied, fuel)?)
            .expect("a boolean program cannot return a number");
        rows.insert(tuple, out);
    }
    Ok(ExtensionTable { arity, rows })
}

fn table_of(arity: usize, f: impl Fn(&[Flat]) -> Flat) -> ExtensionTable {
    let rows = all_tuples(arity).into_iter().map(|t| {
        let out = f(&t);
        (t, out)
    });
    ExtensionTable { arity, rows: rows.collect() }
}

/// Parallel or: true as soon as either argument is true, false only when
/// both are false.  Monotone, yet no program text computes it.
pub fn por_table() -> ExtensionTable {
    table_of(2, |args| match (args[0], args[1]) {
        (Flat::Tt, _) | (_, Flat::Tt) => Flat::Tt,
        (Flat::Ff, Flat::Ff) => Flat::Ff,
        _ => Flat::Bot,
    })
}

/// Left-sequential or: interrogates its first argument, so (⊥, tt) ↦ ⊥.
pub fn lsor_table() -> ExtensionTable {
    table_of(2, |args| match args[0] {
        Flat::Bot => Flat::Bot,
        Flat::Tt => Flat::Tt,
        Flat::Ff => args[1],
    })
}

/// Right-sequential or: interrogates its second argument, so (tt, ⊥) ↦ ⊥.
pub fn rsor_table() -> ExtensionTable {
    table_of(2, |args| match args[1] {
        Flat::Bot => Flat::Bot,
        Flat::Tt => Flat::Tt,
        Flat::Ff => args[0],
    })
}

/// All input-output tables reachable by program text of the given size:
/// the enumerated programs at `ty`, tabulated and deduplicated.
pub fn definable_extensions(
    ty: &Type,
    size_bound: usize,
    fuel: u64,
) -> Result<BTreeSet<ExtensionTable>, DomainError> {
    bool_arity(ty)?;
    let mut out = BTreeSet::new();
    for term in enumerate_terms(ty, size_bound)
        .map_err(|e| DomainError::NotFinitary(e.to_string()))?
    {
        out.insert(extension_of(&term, fuel)?);
    }
    Ok(out)
}

/// Summary of a definability census at one type and size bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    #[serde(rename = "type")]
    pub type_name: String,
    pub bound: usize,
    pub count: usize,
    pub contains_por: bool,
}

/// Runs [`definable_extensions`] and reports the headline numbers: how many
/// distinct tables exist at this size, and whether parallel or is among
/// them.
pub fn census(ty: &Type, size_bound: usize, fuel: u64) -> Result<Census, DomainError> {
    let tables = definable_extensions(ty, size_bound, fuel)?;
    Ok(Census {
        type_name: ty.to_string(),
        bound: size_bound,
        count: tables.len(),
        contains_por: tables.contains(&por_table()),
    })
}

// ---------------------------------------------------------------------------
// A direct evaluator for the finitary boolean fragment.
// ---------------------------------------------------------------------------

/// Capture-free substitution of a closed term; adequate because reduction
/// below only ever substitutes closed arguments.
fn subst_closed(term: &Term, x: &str, v: &Term) -> Term {
    let go = |s: &Term| Box::new(subst_closed(s, x, v));
    match term {
        Term::Var(y) if y == x => v.clone(),
        Term::Var(_) | Term::NumLit(_) | Term::BoolLit(_) | Term::Add | Term::Mul
        | Term::Sub | Term::Fix(_) | Term::Omega(_) => term.clone(),
        Term::Lam(y, _, _) if y == x => term.clone(),
        Term::Lam(y, ty, b) => Term::Lam(y.clone(), ty.clone(), go(b)),
        Term::App(f, a) => Term::App(go(f), go(a)),
        Term::Pair(a, b) => Term::Pair(go(a), go(b)),
        Term::Fst(p) => Term::Fst(go(p)),
        Term::Snd(p) => Term::Snd(go(p)),
        Term::IfZ(c, a, b) => Term::IfZ(go(c), go(a), go(b)),
        Term::Cond(c, a, b) => Term::Cond(go(c), go(a), go(b)),
    }
}

fn whnf(t: Term, budget: &mut u64) -> Result<Term, DomainError> {
    if *budget == 0 {
        return Err(DomainError::NoStabilization(0));
    }
    *budget -= 1;
    match t {
        Term::App(f, a) => match whnf(*f, budget)? {
            Term::Lam(x, _, body) => whnf(subst_closed(&body, &x, &a), budget),
            Term::Omega(ty) => match ty {
                // An application of a diverging function diverges at the
                // result type.
                Type::Arrow(_, cod) => Ok(Term::Omega(*cod)),
                other => Err(DomainError::NotFinitary(format!(
                    "application of a diverging term of ground type {other}"
                ))),
            },
            other => Err(DomainError::NotFinitary(format!(
                "application of a non-function: {other}"
            ))),
        },
        Term::Cond(c, a, b) => match whnf(*c, budget)? {
            Term::BoolLit(true) => whnf(*a, budget),
            Term::BoolLit(false) => whnf(*b, budget),
            Term::Omega(_) => Ok(Term::Omega(Type::Bool)),
            other => Err(DomainError::NotFinitary(format!(
                "conditional on a non-boolean: {other}"
            ))),
        },
        Term::Lam(..) | Term::BoolLit(_) | Term::Omega(_) => Ok(t),
        other => Err(DomainError::NotFinitary(other.to_string())),
    }
}

/// Evaluates a closed boolean term of the finitary fragment (abstraction,
/// application, conditionals, boolean literals, divergence) directly by
/// call-by-name reduction, with no reference to the dialogue semantics.
/// Serves as an independent cross-check on the interpreter.
pub fn eval_extensional(t: &Term) -> Result<Flat, DomainError> {
    let ty = typecheck_closed(t).map_err(InterpError::from)?;
    if ty != Type::Bool {
        return Err(DomainError::NotFirstOrderBool(ty));
    }
    let mut budget = 1_000_000u64;
    match whnf(t.clone(), &mut budget)? {
        Term::BoolLit(true) => Ok(Flat::Tt),
        Term::BoolLit(false) => Ok(Flat::Ff),
        Term::Omega(_) => Ok(Flat::Bot),
        other => Err(DomainError::NotFinitary(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// The stream domain and its three test functions.
// ---------------------------------------------------------------------------

/// Binary words up to the given length plus the single limit point of the
/// all-zero chain, ordered by prefix (with every all-zero word below the
/// limit point).  Index 0 is the empty word; the limit point is last.
pub fn stream_poset(max_len: usize) -> FinitePoset {
    let mut words: Vec<String> = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for c in ['0', '1'] {
                let mut w = w.clone();
                w.push(c);
                words.push(w.clone());
                next.push(w);
            }
        }
        frontier = next;
    }
    let limit = words.len();
    let mut labels: Vec<String> = words
        .iter()
        .map(|w| if w.is_empty() { "eps".to_string() } else { w.clone() })
        .collect();
    labels.push("0^w".to_string());
    let mut below = Vec::new();
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if b.starts_with(a.as_str()) {
                below.push((i, j));
            }
        }
        if a.chars().all(|c| c == '0') {
            below.push((i, limit));
        }
    }
    FinitePoset::from_pairs(labels, &below).expect("prefix order is a poset")
}

/// The three candidate stream observers, as tables on [`stream_poset`]:
/// answers `tt` on any word containing a 1, and on the all-zero inputs
/// answers ⊥ / ⊥-except-`ff`-at-the-limit / `ff` respectively.  The first
/// is continuous, the second monotone but not continuous along the
/// all-zero chain, the third not monotone at all.
pub fn stream_examples(max_len: usize) -> (FinitePoset, [Vec<usize>; 3], Chain) {
    let domain = stream_poset(max_len);
    let codomain = FinitePoset::flat_bool();
    let bot = codomain.index_of("bot").expect("flat booleans");
    let ff = codomain.index_of("ff").expect("flat booleans");
    let tt = codomain.index_of("tt").expect("flat booleans");
    let limit = domain.len() - 1;
    let has_one = |i: usize| domain.label(i).contains('1');
    let mut tables = [vec![0; domain.len()], vec![0; domain.len()], vec![0; domain.len()]];
    for i in 0..domain.len() {
        let one = has_one(i);
        tables[0][i] = if one { tt } else { bot };
        tables[1][i] = if one {
            tt
        } else if i == limit {
            ff
        } else {
            bot
        };
        tables[2][i] = if one { tt } else { ff };
    }
    let mut points = vec![domain.index_of("eps").expect("empty word")];
    let mut zeros = String::new();
    for _ in 0..max_len {
        zeros.push('0');
        points.push(domain.index_of(&zeros).expect("all-zero word"));
    }
    (domain, tables, Chain { points, lub: limit })
}

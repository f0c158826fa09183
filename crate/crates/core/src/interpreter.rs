//! Denotations: every term becomes an innocent strategy on the board of its
//! type, by structural recursion.
//!
//! The scheme for a term in context `x1:T1, …, xn:Tn ⊢ t : T` is to play on
//! the curried board `T1 ⇒ (T2 ⇒ … (Tn ⇒ T))`. That choice makes binding
//! invisible: abstracting `xn` changes the typing judgement but not the
//! board, so `λ` contributes no moves. Variables are mirror links from the
//! result component to their own component, constants answer the opening
//! question outright, the arithmetic and branching primitives are small
//! question-then-answer view functions, and application plugs the pair
//! ⟨function, argument⟩ into an evaluation copycat via the interaction
//! pipeline. Recursion is the link discipline that re-opens its functional
//! on demand, so unbounded unfolding costs fuel only when actually explored.
//!
//! The reverse direction, [`extract_term`], reads a compact innocent
//! strategy back off as a term: the response to the opening view names a
//! head variable (or a constant), the head's arguments are recovered from
//! the sub-dialogues that interrogate them, and a case split over the
//! head's possible answers produces the branches.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use thiserror::Error;

use crate::arena::{Arena, Move, MoveKind, Path, Payload, Step};
use crate::composition::{CompositionError, InteractionStatus, InteractionTrace, Pipeline};
use crate::plays::{Event, Play};
use crate::strategy::{Strategy, StrategyError, ViewResponse};
use crate::syntax::{infer_type, typecheck_closed, Term, Type, TypeError};

/// What a closed ground evaluation can observe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Num(u64),
    Boolean(bool),
    /// The strategy stayed silent: the bottom of the flat domain.
    Undefined,
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Num(n) => write!(f, "{n}"),
            Value::Boolean(true) => write!(f, "tt"),
            Value::Boolean(false) => write!(f, "ff"),
            Value::Undefined => write!(f, "undefined"),
        }
    }
}

#[derive(Debug, Error)]
pub enum InterpError {
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    /// Distinct from a genuine non-answer: the run was cut short, so the
    /// verdict would be a lie either way.
    #[error("evaluation ran out of fuel")]
    FuelExhausted,
    #[error("evaluation needs a ground type, got {0}")]
    NotGround(Type),
    #[error("cannot trace this application: {0}")]
    TraceShape(String),
    #[error("internal plumbing failure: {0}")]
    Internal(String),
}

impl From<StrategyError> for InterpError {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::FuelExhausted { .. } => InterpError::FuelExhausted,
            other => InterpError::Internal(other.to_string()),
        }
    }
}

impl From<CompositionError> for InterpError {
    fn from(e: CompositionError) -> Self {
        match e {
            CompositionError::Strategy(s) => s.into(),
            other => InterpError::Internal(other.to_string()),
        }
    }
}

/// A typechecked term together with the strategy it denotes. The strategy is
/// innocent, well-bracketed and deterministic by construction.
#[derive(Debug, Clone)]
pub struct Denotation {
    pub term: Term,
    pub ty: Type,
    pub strategy: Strategy,
}

/// Denotes a closed term. `fuel` bounds every internal interaction replayed
/// by the composites inside the strategy; it is consumed per run, not once.
pub fn denote(t: &Term, fuel: u64) -> Result<Denotation, InterpError> {
    let ty = typecheck_closed(t)?;
    let mut strategy = denote_in(&[], t, fuel)?;
    strategy.label = t.to_string();
    Ok(Denotation { term: t.clone(), ty, strategy })
}

// ---------------------------------------------------------------------------
// Boards for terms in context, and the path surgery between their two
// presentations: curried `T1 ⇒ (… ⇒ (Tn ⇒ R))` (used by the recursion, so
// that λ is a no-op) and uncurried `(T1 × (… × Tn)) ⇒ R` (used while
// plugging, so the context is a single shared component).
// ---------------------------------------------------------------------------

fn curried_board(ctx: &[Type], result: &Type) -> Rc<Arena> {
    let mut t = result.clone();
    for ty in ctx.iter().rev() {
        t = Type::arrow(ty.clone(), t);
    }
    Rc::new(Arena::of_type(&t))
}

fn context_product(ctx: &[Type]) -> Type {
    let mut it = ctx.iter().rev();
    let mut t = it.next().expect("nonempty context").clone();
    for ty in it {
        t = Type::product(ty.clone(), t);
    }
    t
}

/// Curried-board path for an uncurried-board path, with `n` context slots.
fn curried_of_uncurried(n: usize, p: &Path) -> Path {
    match p.0.split_first() {
        Some((Step::Cod, rest)) => {
            let mut v = vec![Step::Cod; n];
            v.extend_from_slice(rest);
            Path(v)
        }
        Some((Step::Dom, rest)) => {
            // `R`-steps select a context slot, capped so that a product type
            // in the final slot keeps its own leading `R`s.
            let mut k = 0;
            while k < n - 1 && rest.get(k) == Some(&Step::R) {
                k += 1;
            }
            let (slot, inner) = if k == n - 1 { (k, &rest[k..]) } else { (k, &rest[k + 1..]) };
            let mut v = vec![Step::Cod; slot];
            v.push(Step::Dom);
            v.extend_from_slice(inner);
            Path(v)
        }
        _ => p.clone(),
    }
}

/// Uncurried-board path for a curried-board path, with `n` context slots.
fn uncurried_of_curried(n: usize, p: &Path) -> Path {
    let mut k = 0;
    while k < n && p.0.get(k) == Some(&Step::Cod) {
        k += 1;
    }
    if k == n {
        let mut v = vec![Step::Cod];
        v.extend_from_slice(&p.0[n..]);
        return Path(v);
    }
    if p.0.get(k) != Some(&Step::Dom) {
        return p.clone();
    }
    let mut v = vec![Step::Dom];
    v.extend(std::iter::repeat(Step::R).take(k));
    if k < n - 1 {
        v.push(Step::L);
    }
    v.extend_from_slice(&p.0[k + 1..]);
    Path(v)
}

/// Transports a strategy from the curried context board onto the uncurried
/// one. A single-slot context is already both.
pub(crate) fn uncurry_ctx(s: &Strategy, ctx: &[Type], result: &Type) -> Strategy {
    let n = ctx.len();
    if n <= 1 {
        return s.clone();
    }
    let board = Rc::new(Arena::of_type(&Type::arrow(context_product(ctx), result.clone())));
    s.relabel(
        board,
        s.label.clone(),
        move |p| curried_of_uncurried(n, p),
        move |p| uncurried_of_curried(n, p),
    )
}

fn recurry_ctx(s: &Strategy, ctx: &[Type], result: &Type) -> Strategy {
    let n = ctx.len();
    if n <= 1 {
        return s.clone();
    }
    let board = curried_board(ctx, result);
    s.relabel(
        board,
        s.label.clone(),
        move |p| uncurried_of_curried(n, p),
        move |p| curried_of_uncurried(n, p),
    )
}

/// Lifts a closed strategy to a context board it never consults. The lifted
/// player stays inside the result component, so the context components are
/// never opened and the path maps only ever see result-side paths.
pub(crate) fn lift_ctx(s: &Strategy, ctx: &[Type]) -> Strategy {
    let n = ctx.len();
    if n == 0 {
        return s.clone();
    }
    let board = curried_board(ctx, &s.arena.shape);
    s.relabel(
        board,
        s.label.clone(),
        move |p| {
            if p.0.len() >= n && p.0[..n].iter().all(|st| *st == Step::Cod) {
                Path(p.0[n..].to_vec())
            } else {
                p.clone()
            }
        },
        move |p| {
            let mut v = vec![Step::Cod; n];
            v.extend_from_slice(&p.0);
            Path(v)
        },
    )
}

/// Plugs an uncurried strategy (context product ⇒ M, or plain M for an
/// empty context) into a primitive on `M ⇒ R`, and re-curries the result.
fn compose_uncurried(
    ctx: &[Type],
    u: Strategy,
    prim: Strategy,
    result: &Type,
    fuel: u64,
) -> Result<Strategy, InterpError> {
    if ctx.is_empty() {
        Ok(Pipeline::plain(u, prim)?.compose_lazy(fuel))
    } else {
        let c = Pipeline::arrow(u, prim)?.compose_lazy(fuel);
        Ok(recurry_ctx(&c, ctx, result))
    }
}

// ---------------------------------------------------------------------------
// The primitive strategies that interpret the constants.
// ---------------------------------------------------------------------------

/// Evaluation on `((A ⇒ B) × A) ⇒ B`: the result mirrors the function's
/// result, and the function's requests mirror the argument.
fn ev_prim(a: &Type, b: &Type) -> Strategy {
    let shape = Type::arrow(
        Type::product(Type::arrow(a.clone(), b.clone()), a.clone()),
        b.clone(),
    );
    Strategy::linked(
        Rc::new(Arena::of_type(&shape)),
        vec![
            (Path::of(&[Step::Cod]), Path::of(&[Step::Dom, Step::L, Step::Cod])),
            (Path::of(&[Step::Dom, Step::L, Step::Dom]), Path::of(&[Step::Dom, Step::R])),
        ],
        "apply",
    )
}

/// Recursion on `(T ⇒ T) ⇒ T`: the result mirrors the functional's result,
/// and each self-application request re-opens the functional afresh.
fn y_prim(t: &Type) -> Strategy {
    let shape = Type::arrow(Type::arrow(t.clone(), t.clone()), t.clone());
    Strategy::linked(
        Rc::new(Arena::of_type(&shape)),
        vec![
            (Path::of(&[Step::Cod]), Path::of(&[Step::Dom, Step::Cod])),
            (Path::of(&[Step::Dom, Step::Dom]), Path::of(&[Step::Dom, Step::Cod])),
        ],
        "fix",
    )
}

fn proj_prim(a: &Type, b: &Type, side: Step, name: &str) -> Strategy {
    let kept = if side == Step::L { a } else { b };
    let shape = Type::arrow(Type::product(a.clone(), b.clone()), kept.clone());
    Strategy::linked(
        Rc::new(Arena::of_type(&shape)),
        vec![(Path::of(&[Step::Cod]), Path::of(&[Step::Dom, side]))],
        name,
    )
}

/// A ground constant on the curried context board: answers the opening
/// question and nothing else.
fn ground_const(ctx: &[Type], payload: Payload, ground: Type, label: String) -> Strategy {
    let board = curried_board(ctx, &ground);
    let root = Path(vec![Step::Cod; ctx.len()]);
    let mut hints = BTreeSet::new();
    if let Payload::Num(k) = payload {
        hints.insert(k);
    }
    Strategy::from_rule(board, label, hints, move |view: &Play| {
        if view.len() == 1
            && view.0[0].mv.kind == MoveKind::Question
            && view.0[0].mv.path == root
        {
            Ok(Some(ViewResponse {
                mv: Move::answer(root.clone(), payload.clone()),
                justifier: 0,
            }))
        } else {
            Ok(None)
        }
    })
}

/// The shared shape of `add`, `mul` and `sub` on `N ⇒ (N ⇒ N)`: ask the
/// first argument, then the second, then answer.
fn arith_prim(name: &'static str, op: fn(u64, u64) -> u64) -> Strategy {
    let shape = Type::arrow(Type::Nat, Type::arrow(Type::Nat, Type::Nat));
    let board = Rc::new(Arena::of_type(&shape));
    let root = Path::of(&[Step::Cod, Step::Cod]);
    let first = Path::of(&[Step::Dom]);
    let second = Path::of(&[Step::Cod, Step::Dom]);
    Strategy::from_rule(board, name, BTreeSet::new(), move |view: &Play| {
        let num_at = |i: usize| -> Option<u64> {
            match view.0.get(i)?.mv.payload {
                Some(Payload::Num(k)) => Some(k),
                _ => None,
            }
        };
        let q = |path: &Path| ViewResponse { mv: Move::question(path.clone()), justifier: 0 };
        match view.len() {
            1 if view.0[0].mv.path == root => Ok(Some(q(&first))),
            3 if view.0[2].mv.path == first => Ok(Some(q(&second))),
            5 if view.0[4].mv.path == second => match (num_at(2), num_at(4)) {
                (Some(m), Some(n)) => Ok(Some(ViewResponse {
                    mv: Move::answer(root.clone(), Payload::Num(op(m, n))),
                    justifier: 0,
                })),
                _ => Ok(None),
            },
            _ => Ok(None),
        }
    })
}

/// The branching primitive on `S ⇒ (G ⇒ (G ⇒ G))`: ask the scrutinee, pick
/// a branch from its answer, ask that branch, and relay its answer. `pick`
/// maps the scrutinee's payload to "first branch?".
fn branch_prim(
    name: &'static str,
    scrutinee: Type,
    ground: &Type,
    pick: fn(&Payload) -> Option<bool>,
) -> Strategy {
    let shape = Type::arrow(
        scrutinee,
        Type::arrow(ground.clone(), Type::arrow(ground.clone(), ground.clone())),
    );
    let board = Rc::new(Arena::of_type(&shape));
    let root = Path::of(&[Step::Cod, Step::Cod, Step::Cod]);
    let scrut = Path::of(&[Step::Dom]);
    let then_at = Path::of(&[Step::Cod, Step::Dom]);
    let else_at = Path::of(&[Step::Cod, Step::Cod, Step::Dom]);
    Strategy::from_rule(board, name, BTreeSet::new(), move |view: &Play| {
        let q = |path: &Path| ViewResponse { mv: Move::question(path.clone()), justifier: 0 };
        match view.len() {
            1 if view.0[0].mv.path == root => Ok(Some(q(&scrut))),
            3 if view.0[2].mv.path == scrut => match view.0[2].mv.payload.as_ref().and_then(pick)
            {
                Some(true) => Ok(Some(q(&then_at))),
                Some(false) => Ok(Some(q(&else_at))),
                None => Ok(None),
            },
            5 if view.0[4].mv.path == then_at || view.0[4].mv.path == else_at => {
                match &view.0[4].mv.payload {
                    Some(p) => Ok(Some(ViewResponse {
                        mv: Move::answer(root.clone(), p.clone()),
                        justifier: 0,
                    })),
                    None => Ok(None),
                }
            }
            _ => Ok(None),
        }
    })
}

// ---------------------------------------------------------------------------
// The recursion itself.
// ---------------------------------------------------------------------------

/// Application at the strategy level: pair the function with its argument
/// and plug the pair into the evaluation primitive.
fn app_strat(
    ctx: &[Type],
    f: Strategy,
    x: Strategy,
    a: &Type,
    b: &Type,
    fuel: u64,
) -> Result<Strategy, InterpError> {
    let prim = ev_prim(a, b);
    let u = if ctx.is_empty() {
        Strategy::pair_product(&f, &x)
    } else {
        let fa = Type::arrow(a.clone(), b.clone());
        Strategy::pair_arrow(&uncurry_ctx(&f, ctx, &fa), &uncurry_ctx(&x, ctx, a))
    };
    compose_uncurried(ctx, u, prim, b, fuel)
}

fn denote_in(ctx: &[(String, Type)], t: &Term, fuel: u64) -> Result<Strategy, InterpError> {
    let tys: Vec<Type> = ctx.iter().map(|(_, ty)| ty.clone()).collect();
    match t {
        Term::Var(x) => {
            let i = ctx
                .iter()
                .rposition(|(name, _)| name == x)
                .ok_or_else(|| TypeError::Unbound(x.clone()))?;
            let board = curried_board(&tys, &ctx[i].1);
            let result = Path(vec![Step::Cod; ctx.len()]);
            let mut slot = vec![Step::Cod; i];
            slot.push(Step::Dom);
            Ok(Strategy::linked(board, vec![(result, Path(slot))], x.clone()))
        }
        Term::Lam(x, ty, body) => {
            // Same board, one more name in scope: binding moves nothing.
            let mut ctx2 = ctx.to_vec();
            ctx2.push((x.clone(), ty.clone()));
            denote_in(&ctx2, body, fuel)
        }
        Term::App(f, x) => {
            let (a, b) = match infer_type(ctx, f)? {
                Type::Arrow(a, b) => (*a, *b),
                other => return Err(TypeError::NotAFunction(other).into()),
            };
            let _ = infer_type(ctx, t)?;
            let sf = denote_in(ctx, f, fuel)?;
            let sx = denote_in(ctx, x, fuel)?;
            app_strat(&tys, sf, sx, &a, &b, fuel)
        }
        Term::Pair(s, u) => {
            let ta = infer_type(ctx, s)?;
            let tb = infer_type(ctx, u)?;
            let sa = denote_in(ctx, s, fuel)?;
            let sb = denote_in(ctx, u, fuel)?;
            if ctx.is_empty() {
                Ok(Strategy::pair_product(&sa, &sb))
            } else {
                let paired = Strategy::pair_arrow(
                    &uncurry_ctx(&sa, &tys, &ta),
                    &uncurry_ctx(&sb, &tys, &tb),
                );
                Ok(recurry_ctx(&paired, &tys, &Type::product(ta, tb)))
            }
        }
        Term::Fst(p) | Term::Snd(p) => {
            let (a, b) = match infer_type(ctx, p)? {
                Type::Product(a, b) => (*a, *b),
                other => return Err(TypeError::NotAProduct(other).into()),
            };
            let (side, name, kept) = if matches!(t, Term::Fst(_)) {
                (Step::L, "fst", a.clone())
            } else {
                (Step::R, "snd", b.clone())
            };
            let sp = denote_in(ctx, p, fuel)?;
            let u = if ctx.is_empty() {
                sp
            } else {
                uncurry_ctx(&sp, &tys, &Type::product(a.clone(), b.clone()))
            };
            compose_uncurried(&tys, u, proj_prim(&a, &b, side, name), &kept, fuel)
        }
        Term::NumLit(k) => Ok(ground_const(&tys, Payload::Num(*k), Type::Nat, k.to_string())),
        Term::BoolLit(b) => Ok(ground_const(
            &tys,
            Payload::Bool(*b),
            Type::Bool,
            if *b { "tt" } else { "ff" }.to_string(),
        )),
        Term::Add => Ok(lift_ctx(&arith_prim("add", |m, n| m.wrapping_add(n)), &tys)),
        Term::Mul => Ok(lift_ctx(&arith_prim("mul", |m, n| m.wrapping_mul(n)), &tys)),
        Term::Sub => Ok(lift_ctx(&arith_prim("sub", u64::saturating_sub), &tys)),
        Term::IfZ(c, th, el) | Term::Cond(c, th, el) => {
            let g = infer_type(ctx, th)?;
            let _ = infer_type(ctx, t)?;
            let (prim, scrutinee) = if matches!(t, Term::IfZ(..)) {
                let pick: fn(&Payload) -> Option<bool> = |p| match p {
                    Payload::Num(k) => Some(*k == 0),
                    _ => None,
                };
                (branch_prim("ifz", Type::Nat, &g, pick), Type::Nat)
            } else {
                let pick: fn(&Payload) -> Option<bool> = |p| match p {
                    Payload::Bool(b) => Some(*b),
                    _ => None,
                };
                (branch_prim("cond", Type::Bool, &g, pick), Type::Bool)
            };
            let sc = denote_in(ctx, c, fuel)?;
            let st = denote_in(ctx, th, fuel)?;
            let se = denote_in(ctx, el, fuel)?;
            let after_scrut = Type::arrow(g.clone(), Type::arrow(g.clone(), g.clone()));
            let after_then = Type::arrow(g.clone(), g.clone());
            let s1 = app_strat(&tys, lift_ctx(&prim, &tys), sc, &scrutinee, &after_scrut, fuel)?;
            let s2 = app_strat(&tys, s1, st, &g, &after_then, fuel)?;
            app_strat(&tys, s2, se, &g, &g, fuel)
        }
        Term::Fix(ty) => Ok(lift_ctx(&y_prim(ty), &tys)),
        Term::Omega(ty) => Ok(Strategy::empty(curried_board(&tys, ty))),
    }
}

// ---------------------------------------------------------------------------
// Evaluation and application tracing.
// ---------------------------------------------------------------------------

/// Evaluates a closed ground term by opening its board and reading the
/// strategy's answer. Silence is `Undefined`; running dry is an error.
pub fn evaluate(t: &Term, fuel: u64) -> Result<Value, InterpError> {
    let d = denote(t, fuel)?;
    if !matches!(d.ty, Type::Nat | Type::Bool) {
        return Err(InterpError::NotGround(d.ty));
    }
    let opening = Play(vec![Event::new(Move::question(Path::empty()), None)]);
    match d.strategy.respond(&opening) {
        Ok(Some(ev)) => match ev.mv.payload {
            Some(Payload::Num(n)) => Ok(Value::Num(n)),
            Some(Payload::Bool(b)) => Ok(Value::Boolean(b)),
            None => Err(InterpError::Internal("answer without a payload".into())),
        },
        Ok(None) => Ok(Value::Undefined),
        Err(e) => Err(e.into()),
    }
}

/// The transcript of one application, kept together with the composite
/// board so callers can render both the full interaction and the visible
/// residual play.
#[derive(Debug)]
pub struct ApplicationTrace {
    pub trace: InteractionTrace,
    /// The external restriction of the trace: what remains after hiding.
    pub residual: Play,
    pub board: Rc<Arena>,
}

/// Runs `f a1 … ak` as one interaction and returns the un-hidden
/// transcript. `f` must be closed; `args` are closed terms for the leading
/// parameters; `inputs` are ground answers fed to at most one trailing
/// parameter when the composite asks for it.
pub fn trace_application(
    f: &Term,
    args: &[Term],
    inputs: &[Value],
    fuel: u64,
) -> Result<ApplicationTrace, InterpError> {
    let fty = typecheck_closed(f)?;
    let (params, ground) = fty.uncurry();
    let params: Vec<Type> = params.into_iter().cloned().collect();
    let ground = ground.clone();
    let m = params.len();
    let k = args.len();
    if m == 0 {
        return Err(InterpError::TraceShape(format!(
            "the head has type {fty}, which takes no arguments"
        )));
    }
    if k > m || m - k > 1 {
        return Err(InterpError::TraceShape(format!(
            "{k} argument(s) against {m} parameter(s): at most one may be left for inputs"
        )));
    }
    if inputs.len() != m - k {
        return Err(InterpError::TraceShape(format!(
            "{} input value(s) for {} open parameter(s)",
            inputs.len(),
            m - k
        )));
    }

    let fd = denote(f, fuel)?;
    let tau = uncurry_ctx(&fd.strategy, &params, &ground);
    let mut comps = Vec::new();
    for (i, a) in args.iter().enumerate() {
        let ad = denote(a, fuel)?;
        if ad.ty != params[i] {
            return Err(InterpError::TraceShape(format!(
                "argument {i} has type {}, parameter wants {}",
                ad.ty, params[i]
            )));
        }
        comps.push(ad.strategy);
    }

    let pipe = if m - k == 1 {
        let input_ty = params[m - 1].clone();
        if !matches!(input_ty, Type::Nat | Type::Bool) {
            return Err(InterpError::TraceShape(format!(
                "the open parameter has type {input_ty}; only ground inputs can be fed"
            )));
        }
        let slot = [input_ty.clone()];
        let mut threads: Vec<Strategy> =
            comps.iter().map(|s| lift_ctx(s, &slot)).collect();
        threads.push(Strategy::copycat(&Arena::of_type(&input_ty)));
        let sigma = fold_right(threads, |a, b| Strategy::pair_arrow(&a, &b));
        Pipeline::arrow(sigma, tau)?
    } else {
        let sigma = fold_right(comps, |a, b| Strategy::pair_product(&a, &b));
        Pipeline::plain(sigma, tau)?
    };

    let opening = pipe
        .composite
        .initials
        .first()
        .cloned()
        .ok_or_else(|| InterpError::Internal("composite board has no opening".into()))?;
    let mut script = vec![Event::new(Move::question(opening), None)];
    let mut feeds: u64 = 0;
    let trace = loop {
        let trace = pipe.run_script(&script, fuel)?;
        if trace.status != InteractionStatus::Quiescent {
            break trace;
        }
        let ext = pipe.external_restriction(&trace.events);
        let answered_root = ext
            .0
            .iter()
            .any(|e| e.mv.kind == MoveKind::Answer && e.justifier == Some(0));
        if answered_root {
            break trace;
        }
        let Some(last) = ext.0.last() else { break trace };
        // The composite interrogates the open input slot; the supplied value
        // answers every such request, however often the slot is consulted.
        if last.mv.kind == MoveKind::Question && last.mv.path.0.first() == Some(&Step::Dom) {
            if let Some(v) = inputs.first() {
                if feeds >= fuel {
                    return Err(InterpError::FuelExhausted);
                }
                feeds += 1;
                let payload = match v {
                    Value::Num(n) => Payload::Num(*n),
                    Value::Boolean(b) => Payload::Bool(*b),
                    Value::Undefined => {
                        return Err(InterpError::TraceShape(
                            "an input value must be defined".into(),
                        ))
                    }
                };
                script.push(Event::new(
                    Move::answer(last.mv.path.clone(), payload),
                    Some(ext.len() - 1),
                ));
                continue;
            }
        }
        break trace;
    };
    let residual = pipe.external_restriction(&trace.events);
    Ok(ApplicationTrace { trace, residual, board: pipe.composite.clone() })
}

fn fold_right<T>(mut items: Vec<T>, f: impl Fn(T, T) -> T) -> T {
    let mut acc = items.pop().expect("nonempty");
    while let Some(x) = items.pop() {
        acc = f(x, acc);
    }
    acc
}

// ---------------------------------------------------------------------------
// Definability: reading a term back off a compact strategy.
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("extraction handles boolean-and-arrow types only; got {0}")]
    Unsupported(Type),
    #[error("the strategy plays on {0}, not on {1}")]
    BoardMismatch(Type, Type),
    #[error("not innocent: these histories share a view but continue differently\n{0}\n{1}")]
    NotInnocent(String, String),
    #[error("bracketing violated in\n{0}")]
    NotBracketed(String),
    #[error("exploration exceeded {0} question levels; the strategy may not be compact")]
    NotCompact(usize),
    #[error("the strategy left the board discipline: {0}")]
    BadResponse(String),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// The subtype of `t` rooted at `p`.
fn subtype_at<'t>(t: &'t Type, p: &Path) -> &'t Type {
    let mut cur = t;
    for step in &p.0 {
        cur = match (cur, step) {
            (Type::Arrow(a, _), Step::Dom) => a,
            (Type::Arrow(_, b), Step::Cod) => b,
            (Type::Product(a, _), Step::L) => a,
            (Type::Product(_, b), Step::R) => b,
            _ => return cur,
        };
    }
    cur
}

/// The λ-bound components a question at `leaf` brings into scope: one per
/// parameter of the call it performs, in parameter order, each given by the
/// path of its own opening question and its type.
fn components_under(board: &Type, leaf: &Path) -> Vec<(Path, Type)> {
    let mut base = leaf.0.clone();
    let mut layers = 0;
    while base.last() == Some(&Step::Cod) {
        base.pop();
        layers += 1;
    }
    (0..layers)
        .map(|j| {
            let mut root = base.clone();
            root.extend(std::iter::repeat(Step::Cod).take(j));
            root.push(Step::Dom);
            let ty = subtype_at(board, &Path(root.clone())).clone();
            let mut leaf = root;
            leaf.extend(std::iter::repeat(Step::Cod).take(ty.uncurry().0.len()));
            (Path(leaf), ty)
        })
        .collect()
}

struct Extractor<'a> {
    sigma: &'a Strategy,
    board: &'a Type,
    bound: usize,
    next_var: usize,
}

type Scope = HashMap<(usize, Path), String>;

impl Extractor<'_> {
    fn fresh(&mut self) -> String {
        let name = format!("x{}", self.next_var);
        self.next_var += 1;
        name
    }

    /// The ground subterm the strategy plays at this view. The view always
    /// ends with an Opponent move demanding a boolean.
    fn subterm(&mut self, view: &Play, scope: &Scope) -> Result<Term, ExtractError> {
        if view.len() > self.bound {
            return Err(ExtractError::NotCompact(self.bound));
        }
        let Some(resp) = self.sigma.consult(view)? else {
            return Ok(Term::Omega(Type::Bool));
        };
        match (&resp.mv.kind, &resp.mv.payload) {
            (MoveKind::Answer, Some(Payload::Bool(b))) => Ok(Term::BoolLit(*b)),
            (MoveKind::Answer, _) => {
                Err(ExtractError::BadResponse("a non-boolean answer".into()))
            }
            (MoveKind::Question, _) => {
                let head = scope
                    .get(&(resp.justifier, resp.mv.path.clone()))
                    .cloned()
                    .ok_or_else(|| {
                        ExtractError::BadResponse(format!(
                            "question at {} hangs off no bound component",
                            resp.mv.path
                        ))
                    })?;
                let head_q = Event::new(resp.mv.clone(), Some(resp.justifier));
                let head_pos = view.len();

                // The head's arguments, from the sub-dialogues that ask them.
                let mut spine = Term::var(&head);
                for (arg_leaf, _) in components_under(self.board, &resp.mv.path) {
                    let ask = Event::new(Move::question(arg_leaf.clone()), Some(head_pos));
                    let mut inner = scope.clone();
                    let mut binders = Vec::new();
                    for (param_leaf, param_ty) in components_under(self.board, &arg_leaf) {
                        let name = self.fresh();
                        inner.insert((head_pos + 1, param_leaf), name.clone());
                        binders.push((name, param_ty));
                    }
                    let deeper = view.snoc(head_q.clone()).snoc(ask);
                    let mut body = self.subterm(&deeper, &inner)?;
                    for (name, ty) in binders.into_iter().rev() {
                        body = Term::lam(&name, ty, body);
                    }
                    spine = Term::App(Box::new(spine), Box::new(body));
                }

                // Case split on the head's answer.
                let branch = |b: bool, ex: &mut Self| {
                    let ans = Event::new(
                        Move::answer(resp.mv.path.clone(), Payload::Bool(b)),
                        Some(head_pos),
                    );
                    ex.subterm(&view.snoc(head_q.clone()).snoc(ans), scope)
                };
                let on_tt = branch(true, self)?;
                let on_ff = branch(false, self)?;
                if on_tt == Term::BoolLit(true) && on_ff == Term::BoolLit(false) {
                    Ok(spine)
                } else {
                    Ok(Term::Cond(Box::new(spine), Box::new(on_tt), Box::new(on_ff)))
                }
            }
        }
    }
}

/// Reads a term back off a compact innocent strategy over a boolean-and-
/// arrow type. `depth` bounds both the validation saturation and how many
/// nested question levels the decomposition will follow.
pub fn extract_term(sigma: &Strategy, ty: &Type, depth: usize) -> Result<Term, ExtractError> {
    fn finitary(t: &Type) -> bool {
        match t {
            Type::Bool => true,
            Type::Arrow(a, b) => finitary(a) && finitary(b),
            _ => false,
        }
    }
    if !finitary(ty) {
        return Err(ExtractError::Unsupported(ty.clone()));
    }
    if sigma.arena.shape != *ty {
        return Err(ExtractError::BoardMismatch(sigma.arena.shape.clone(), ty.clone()));
    }

    let plays = sigma.plays_of(depth, &[])?;
    if let Some((a, b)) = plays.innocence_counterexample() {
        let arena = &sigma.arena;
        return Err(ExtractError::NotInnocent(
            crate::plays::render_trace(arena, &a),
            crate::plays::render_trace(arena, &b),
        ));
    }
    if let Some(bad) = plays
        .plays
        .iter()
        .find(|p| !crate::plays::is_well_bracketed(p))
    {
        return Err(ExtractError::NotBracketed(crate::plays::render_trace(
            &sigma.arena,
            bad,
        )));
    }

    let n = ty.uncurry().0.len();
    let root = Path(vec![Step::Cod; n]);
    let mut ex = Extractor { sigma, board: ty, bound: 2 * depth + 1, next_var: 0 };
    let mut scope = Scope::new();
    let mut lams = Vec::new();
    for (leaf, param_ty) in components_under(ty, &root) {
        let name = ex.fresh();
        scope.insert((0usize, leaf), name.clone());
        lams.push((name, param_ty));
    }
    let opening = Play(vec![Event::new(Move::question(root), None)]);
    let mut body = ex.subterm(&opening, &scope)?;
    for (name, param_ty) in lams.into_iter().rev() {
        body = Term::lam(&name, param_ty, body);
    }
    Ok(body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::Part;
    use crate::plays::render_trace;
    use crate::syntax::{enumerate_terms, parse_term, parse_type};
    use proptest::prelude::{prop_assert_eq, prop_oneof, proptest, ProptestConfig};
    use proptest::strategy::{BoxedStrategy, Strategy as PropStrategy};

    const FUEL: u64 = 10_000;

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn ty(src: &str) -> Type {
        parse_type(src).unwrap()
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

    fn run(src: &str) -> Value {
        evaluate(&t(src), FUEL).unwrap()
    }

    /// Capture-free substitution of a closed term for a free variable —
    /// enough to state β-soundness for the enumerated corpora.
    fn subst(term: &Term, x: &str, v: &Term) -> Term {
        let go = |s: &Term| Box::new(subst(s, x, v));
        match term {
            Term::Var(y) if y == x => v.clone(),
            Term::Var(_)
            | Term::NumLit(_)
            | Term::BoolLit(_)
            | Term::Add
            | Term::Mul
            | Term::Sub
            | Term::Fix(_)
            | Term::Omega(_) => term.clone(),
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

    #[test]
    fn constants_answer_the_opening_question() {
        let d = denote(&t("tt"), FUEL).unwrap();
        let ps = d.strategy.plays_of(2, &[]).unwrap();
        let complete: Vec<_> = ps
            .complete_plays()
            .into_iter()
            .filter(|p| !p.is_empty())
            .collect();
        assert_eq!(complete.len(), 1);
        assert_eq!(
            *complete[0],
            Play(vec![
                ev(q(&[]), None),
                ev(Move::answer(Path::empty(), Payload::Bool(true)), Some(0)),
            ])
        );
        assert_eq!(run("tt"), Value::Boolean(true));
        assert_eq!(run("7"), Value::Num(7));
    }

    #[test]
    fn identity_on_booleans_denotes_copycat() {
        let d = denote(&t("\\x:B. x"), FUEL).unwrap();
        let mirror = Strategy::copycat(&Arena::of_type(&Type::Bool));
        let got = d.strategy.plays_of(3, &[]).unwrap();
        let want = mirror.plays_of(3, &[]).unwrap();
        assert_eq!(got.plays, want.plays);
        assert!(got.is_innocent() && got.is_well_bracketed());
    }

    #[test]
    fn the_curried_functional_relays_its_call_and_adds_two() {
        use Step::*;
        let d = denote(&t("\\f:N -> N. \\x:N. add (f x) 2"), FUEL).unwrap();
        assert_eq!(d.ty, ty("(N -> N) -> N -> N"));
        let ps = d.strategy.plays_of(4, &[3, 9]).unwrap();
        let dialogue = Play(vec![
            ev(q(&[Cod, Cod]), None),
            ev(q(&[Dom, Cod]), Some(0)),
            ev(q(&[Dom, Dom]), Some(1)),
            ev(q(&[Cod, Dom]), Some(0)),
            ev(an(&[Cod, Dom], 3), Some(3)),
            ev(an(&[Dom, Dom], 3), Some(2)),
            ev(an(&[Dom, Cod], 9), Some(1)),
            ev(an(&[Cod, Cod], 11), Some(0)),
        ]);
        assert!(
            ps.plays.contains(&dialogue),
            "denotation misses the dialogue that calls f, relays x, and adds 2"
        );
        assert!(ps.is_innocent() && ps.is_well_bracketed());
    }

    #[test]
    fn application_evaluates_by_interaction() {
        assert_eq!(
            run("(\\f:N -> N. \\x:N. add (f x) 2) (\\x:N. mul x x) 3"),
            Value::Num(11)
        );
    }

    #[test]
    fn divergence_is_undefined_not_an_error() {
        assert_eq!(run("omega[B]"), Value::Undefined);
        assert_eq!(run("omega[N]"), Value::Undefined);
        // A diverging scrutinee silences the whole conditional.
        assert_eq!(run("cond omega[B] tt ff"), Value::Undefined);
    }

    #[test]
    fn livelocked_recursion_reports_fuel_exhaustion() {
        let looping = t("fix[N] (\\x:N. x) ");
        let r = evaluate(&looping, 200);
        assert!(
            matches!(r, Err(InterpError::FuelExhausted)),
            "expected fuel exhaustion, got {r:?}"
        );
    }

    #[test]
    fn factorial_by_recursion_computes_the_table() {
        let fact = "fix[N -> N] (\\f:N -> N. \\n:N. ifz n 1 (mul n (f (sub n 1))))";
        for (n, expect) in [(0, 1), (1, 1), (2, 2), (3, 6), (4, 24), (5, 120)] {
            assert_eq!(run(&format!("({fact}) {n}")), Value::Num(expect), "at {n}");
        }
    }

    #[test]
    fn arithmetic_and_branching_primitives_evaluate() {
        assert_eq!(run("add 2 3"), Value::Num(5));
        assert_eq!(run("mul 4 6"), Value::Num(24));
        assert_eq!(run("sub 5 3"), Value::Num(2));
        assert_eq!(run("sub 3 5"), Value::Num(0)); // truncated at zero
        assert_eq!(run("ifz 0 10 20"), Value::Num(10));
        assert_eq!(run("ifz 7 10 20"), Value::Num(20));
        assert_eq!(run("cond ff 1 2"), Value::Num(2));
        assert_eq!(run("fst (3, tt)"), Value::Num(3));
        assert_eq!(run("snd (3, tt)"), Value::Boolean(true));
        assert_eq!(run("(\\p:N * N. add (fst p) (snd p)) (20, 22)"), Value::Num(42));
    }

    #[test]
    fn partial_application_leaves_a_function_strategy() {
        use Step::*;
        let d = denote(&t("add 2"), FUEL).unwrap();
        assert_eq!(d.ty, ty("N -> N"));
        let ps = d.strategy.plays_of(3, &[5]).unwrap();
        let dialogue = Play(vec![
            ev(q(&[Cod]), None),
            ev(q(&[Dom]), Some(0)),
            ev(an(&[Dom], 5), Some(1)),
            ev(an(&[Cod], 7), Some(0)),
        ]);
        assert!(ps.plays.contains(&dialogue));
    }

    #[test]
    fn variables_interrogate_only_their_own_slot() {
        use Step::*;
        let second = denote(&t("\\x:B. \\y:B. y"), FUEL).unwrap();
        let ps = second.strategy.plays_of(3, &[]).unwrap();
        assert!(ps.plays.iter().all(|p| {
            p.iter().all(|e| e.mv.path.0.as_slice() != [Dom])
        }));
        let first = denote(&t("\\x:B. \\y:B. x"), FUEL).unwrap();
        let ps = first.strategy.plays_of(3, &[]).unwrap();
        assert!(ps.plays.iter().all(|p| {
            p.iter().all(|e| e.mv.path.0.as_slice() != [Cod, Dom])
        }));
        assert_eq!(run("(\\x:B. \\y:B. y) omega[B] tt"), Value::Boolean(true));
        assert_eq!(run("(\\x:B. \\y:B. x) ff omega[B]"), Value::Boolean(false));
    }

    #[test]
    fn two_interrogations_refine_one() {
        let once = denote(&t("\\x:B. x"), FUEL).unwrap();
        let twice =
            denote(&t("\\x:B. cond x (cond x tt ff) (cond x tt ff)"), FUEL).unwrap();
        // Extensionally equal…
        for v in ["tt", "ff"] {
            assert_eq!(
                run(&format!("(\\x:B. x) {v}")),
                run(&format!("(\\x:B. cond x (cond x tt ff) (cond x tt ff)) {v}"))
            );
        }
        // …but the dialogues differ: the second asks again.
        let p1 = once.strategy.plays_of(4, &[]).unwrap();
        let p2 = twice.strategy.plays_of(4, &[]).unwrap();
        assert_ne!(p1.plays, p2.plays);
        let longest1 = p1.plays.iter().map(Play::len).max().unwrap();
        let longest2 = p2.plays.iter().map(Play::len).max().unwrap();
        assert_eq!(longest1, 4);
        assert_eq!(longest2, 6);
    }

    #[test]
    fn conditional_collapse_is_play_faithful() {
        // `cond x tt ff` interrogates x once and relays: identical dialogues
        // to the bare variable, which is why extraction may collapse it.
        let plain = denote(&t("\\x:B. x"), FUEL).unwrap();
        let dressed = denote(&t("\\x:B. cond x tt ff"), FUEL).unwrap();
        assert_eq!(
            plain.strategy.plays_of(4, &[]).unwrap().plays,
            dressed.strategy.plays_of(4, &[]).unwrap().plays
        );
    }

    #[test]
    fn beta_reduction_is_invisible_to_evaluation() {
        let args = [t("tt"), t("ff"), t("omega[B]")];
        for lam in enumerate_terms(&ty("B -> B"), 4).unwrap() {
            let Term::Lam(x, _, body) = &lam else { continue };
            for a in &args {
                let direct = evaluate(&Term::App(Box::new(lam.clone()), Box::new(a.clone())), FUEL)
                    .unwrap();
                let reduced = evaluate(&subst(body, x, a), FUEL).unwrap();
                assert_eq!(direct, reduced, "β mismatch at {lam} applied to {a}");
            }
        }
        for lam in enumerate_terms(&ty("B -> B -> B"), 6).unwrap() {
            let Term::Lam(x, _, body) = &lam else { continue };
            for a in &args {
                for b in &args {
                    let app = Term::App(
                        Box::new(Term::App(Box::new(lam.clone()), Box::new(a.clone()))),
                        Box::new(b.clone()),
                    );
                    let direct = evaluate(&app, FUEL).unwrap();
                    let inner = subst(body, x, a);
                    let reduced = match &inner {
                        Term::Lam(y, _, body2) => evaluate(&subst(body2, y, b), FUEL).unwrap(),
                        other => {
                            evaluate(&Term::App(Box::new(other.clone()), Box::new(b.clone())), FUEL)
                                .unwrap()
                        }
                    };
                    assert_eq!(direct, reduced, "β mismatch at {lam} on {a}, {b}");
                }
            }
        }
    }

    #[test]
    fn denotations_satisfy_the_strategy_constraints() {
        for (want, bound) in [("B -> B", 4), ("B -> B -> B", 6), ("(B -> B) -> B", 6)] {
            let corpus = enumerate_terms(&ty(want), bound).unwrap();
            assert!(!corpus.is_empty());
            for term in corpus {
                let d = denote(&term, FUEL).unwrap();
                let ps = d.strategy.plays_of(5, &[]).unwrap();
                ps.validate().unwrap();
                assert!(ps.is_innocent(), "history-sensitive denotation of {term}");
                assert!(ps.is_well_bracketed(), "unbracketed denotation of {term}");
            }
        }
    }

    #[test]
    fn tracing_the_squaring_application_interrogates_twice() {
        use Part::*;
        // `mul x x` consults its argument once per factor, so the full
        // dialogue fetches the input twice before the final answer.
        let f = t("\\f:N -> N. \\x:N. add (f x) 2");
        let square = t("\\x:N. mul x x");
        let at = trace_application(&f, std::slice::from_ref(&square), &[Value::Num(3)], FUEL)
            .unwrap();
        assert_eq!(at.trace.status, InteractionStatus::Quiescent);
        let parts: Vec<Part> = at.trace.events.iter().map(|e| e.part).collect();
        assert_eq!(
            parts,
            vec![
                Right, Mid, Mid, Mid, Left, Left, Mid, Mid, Mid, Mid, Left, Left, Mid,
                Mid, Mid, Right
            ]
        );
        let answers: Vec<u64> = at
            .trace
            .events
            .iter()
            .filter_map(|e| match e.mv.payload {
                Some(Payload::Num(n)) => Some(n),
                _ => None,
            })
            .collect();
        assert_eq!(answers, vec![3, 3, 3, 3, 3, 3, 9, 11]);
        assert_eq!(
            render_trace(&at.board, &at.residual),
            "0 O Q @cod ^-\n1 P Q @dom ^0\n2 O A[3] @dom ^1\n3 P Q @dom ^0\n\
             4 O A[3] @dom ^3\n5 P A[11] @cod ^0\n"
        );
    }

    #[test]
    fn tracing_the_identity_is_a_pure_echo() {
        use Part::*;
        let at = trace_application(&t("\\x:N. x"), &[], &[Value::Num(5)], FUEL).unwrap();
        let parts: Vec<Part> = at.trace.events.iter().map(|e| e.part).collect();
        assert_eq!(parts, vec![Right, Mid, Left, Left, Mid, Right]);
        assert_eq!(
            render_trace(&at.board, &at.residual),
            "0 O Q @cod ^-\n1 P Q @dom ^0\n2 O A[5] @dom ^1\n3 P A[5] @cod ^0\n"
        );
    }

    #[test]
    fn tracing_left_or_skips_the_silent_argument() {
        use Part::*;
        let lsor = t("\\x:B. \\y:B. cond x tt y");
        let at = trace_application(&lsor, &[t("tt"), t("omega[B]")], &[], FUEL).unwrap();
        assert_eq!(at.trace.status, InteractionStatus::Quiescent);
        let parts: Vec<Part> = at.trace.events.iter().map(|e| e.part).collect();
        assert_eq!(parts, vec![Right, Mid, Mid, Right]);
        // The middle events stay in the first component: ⊥ is never consulted.
        assert!(at
            .trace
            .events
            .iter()
            .filter(|e| e.part == Mid)
            .all(|e| e.mv.path.0.first() == Some(&Step::L)));
        assert_eq!(run("(\\x:B. \\y:B. cond x tt y) tt omega[B]"), Value::Boolean(true));
    }

    #[test]
    fn copycat_extracts_to_the_identity() {
        let d = denote(&t("\\x:B. x"), FUEL).unwrap();
        let back = extract_term(&d.strategy, &ty("B -> B"), 4).unwrap();
        assert_eq!(back, t("\\x0:B. x0"));
    }

    #[test]
    fn silence_extracts_to_divergence() {
        let at_ground = Strategy::empty(Rc::new(Arena::of_type(&Type::Bool)));
        assert_eq!(extract_term(&at_ground, &Type::Bool, 4).unwrap(), t("omega[B]"));
        let higher = Strategy::empty(Rc::new(Arena::of_type(&ty("B -> B"))));
        assert_eq!(
            extract_term(&higher, &ty("B -> B"), 4).unwrap(),
            t("\\x0:B. omega[B]")
        );
    }

    #[test]
    fn second_order_heads_extract_with_their_arguments() {
        let d = denote(&t("\\f:B -> B. f tt"), FUEL).unwrap();
        let back = extract_term(&d.strategy, &ty("(B -> B) -> B"), 5).unwrap();
        assert_eq!(back, t("\\x0:B -> B. x0 tt"));
        let again = denote(&back, FUEL).unwrap();
        assert_eq!(
            d.strategy.plays_of(5, &[]).unwrap().plays,
            again.strategy.plays_of(5, &[]).unwrap().plays
        );
    }

    #[test]
    fn extraction_round_trips_the_size_six_corpus() {
        let want = ty("B -> B -> B");
        let corpus = enumerate_terms(&want, 6).unwrap();
        assert_eq!(corpus.len(), 132);
        for term in corpus {
            let d = denote(&term, FUEL).unwrap();
            let original = d.strategy.plays_of(6, &[]).unwrap();
            let back = extract_term(&d.strategy, &want, 6).unwrap();
            let redone = denote(&back, FUEL).unwrap();
            let extracted = redone.strategy.plays_of(6, &[]).unwrap();
            assert_eq!(
                original.plays, extracted.plays,
                "{term} came back as {back} with different dialogues"
            );
            assert_eq!(original.frontier_open, extracted.frontier_open);
        }
    }

    #[test]
    fn extraction_rejects_numeric_boards() {
        let d = denote(&t("7"), FUEL).unwrap();
        assert!(matches!(
            extract_term(&d.strategy, &Type::Nat, 4),
            Err(ExtractError::Unsupported(_))
        ));
        let id_nat = denote(&t("\\x:N. x"), FUEL).unwrap();
        assert!(matches!(
            extract_term(&id_nat.strategy, &ty("N -> N"), 4),
            Err(ExtractError::Unsupported(_))
        ));
    }

    /// An independent arithmetic oracle for randomized ground terms.
    fn arith_oracle(t: &Term) -> u64 {
        match t {
            Term::NumLit(n) => *n,
            Term::App(f, b) => match f.as_ref() {
                Term::App(op, a) => {
                    let (a, b) = (arith_oracle(a), arith_oracle(b));
                    match op.as_ref() {
                        Term::Add => a.wrapping_add(b),
                        Term::Mul => a.wrapping_mul(b),
                        Term::Sub => a.saturating_sub(b),
                        _ => unreachable!(),
                    }
                }
                _ => unreachable!(),
            },
            Term::IfZ(c, a, b) => {
                if arith_oracle(c) == 0 {
                    arith_oracle(a)
                } else {
                    arith_oracle(b)
                }
            }
            _ => unreachable!(),
        }
    }

    fn arb_arith(depth: u32) -> BoxedStrategy<Term> {
        let leaf = (0u64..7).prop_map(Term::NumLit).boxed();
        if depth == 0 {
            return leaf;
        }
        let sub = arb_arith(depth - 1);
        let binop = |op: Term| {
            let sub = arb_arith(depth - 1);
            let sub2 = arb_arith(depth - 1);
            (sub, sub2).prop_map(move |(a, b)| {
                Term::App(
                    Box::new(Term::App(Box::new(op.clone()), Box::new(a))),
                    Box::new(b),
                )
            })
        };
        prop_oneof![
            leaf,
            binop(Term::Add),
            binop(Term::Mul),
            binop(Term::Sub),
            (sub, arb_arith(depth - 1), arb_arith(depth - 1))
                .prop_map(|(c, a, b)| Term::IfZ(Box::new(c), Box::new(a), Box::new(b))),
        ]
        .boxed()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn random_arithmetic_agrees_with_direct_computation(term in arb_arith(2)) {
            prop_assert_eq!(evaluate(&term, FUEL).unwrap(), Value::Num(arith_oracle(&term)));
        }
    }
}

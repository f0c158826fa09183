//! Bounded enumeration of closed normal forms at boolean-based types.
//!
//! The enumerated fragment is the boolean sublanguage: `tt`, `ff`,
//! `omega[...]`, variables, lambdas, applications and `cond`. Terms are
//! β-normal and η-reduced, so every application spine is headed by a
//! variable; this keeps the set of terms of a fixed type and bounded size
//! finite (a divergent-constant head `omega[A -> ...] M` would admit
//! arbitrarily large annotation types `A` at the same node count).
//!
//! Two independent implementations live here: [`enumerate_terms`] generates
//! the terms, and [`count_terms`] counts them arithmetically by convolving
//! per-size counts, never building an AST. The test suite holds them equal.

use super::{Term, Type};
use std::collections::HashMap;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("enumeration needs a type built from B and -> only, got {0}")]
    NonFinitary(Type),
}

fn check_finitary(t: &Type) -> Result<(), EnumError> {
    match t {
        Type::Bool => Ok(()),
        Type::Arrow(a, b) => {
            check_finitary(a)?;
            check_finitary(b)
        }
        _ => Err(EnumError::NonFinitary(t.clone())),
    }
}

/// Canonical binder name for lexical depth `d`.
fn var_name(d: usize) -> String {
    format!("x{d}")
}

/// All ways to write `total` as `parts` positive summands, in lexicographic
/// order.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if total < parts {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 1..=(total - (parts - 1)) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The chain of argument types and suffix types of a (finitary) type:
/// for `B -> (B -> B) -> B` returns the suffixes
/// `[B -> (B -> B) -> B, (B -> B) -> B, B]` paired with the argument list
/// `[B, B -> B]`.
fn suffixes(ty: &Type) -> (Vec<&Type>, Vec<Type>) {
    let mut args = Vec::new();
    let mut sufs = vec![ty];
    let mut cur = ty;
    while let Type::Arrow(a, b) = cur {
        args.push(a.as_ref().clone());
        sufs.push(b.as_ref());
        cur = b;
    }
    (sufs, args)
}

type Ctx = Vec<Type>;

struct Gen {
    normals: HashMap<(Ctx, Type, usize), Rc<Vec<Term>>>,
}

impl Gen {
    fn new() -> Self {
        Gen { normals: HashMap::new() }
    }

    /// Normal forms of type `want` and exactly `size` nodes, in context
    /// `ctx` (entry `d` is the variable `x{d}`).
    fn normal(&mut self, ctx: &Ctx, want: &Type, size: usize) -> Rc<Vec<Term>> {
        let key = (ctx.clone(), want.clone(), size);
        if let Some(v) = self.normals.get(&key) {
            return v.clone();
        }
        let mut out: Vec<Term> = Vec::new();
        if size >= 1 {
            match want {
                Type::Bool => {
                    if size == 1 {
                        out.push(Term::BoolLit(true));
                        out.push(Term::BoolLit(false));
                        out.push(Term::Omega(Type::Bool));
                    }
                    // cond s a b: one node plus three subterms of ground type
                    if size >= 4 {
                        for split in compositions(size - 1, 3) {
                            let ss = self.normal(ctx, &Type::Bool, split[0]);
                            let aa = self.normal(ctx, &Type::Bool, split[1]);
                            let bb = self.normal(ctx, &Type::Bool, split[2]);
                            for s in ss.iter() {
                                for a in aa.iter() {
                                    for b in bb.iter() {
                                        out.push(Term::cond(s.clone(), a.clone(), b.clone()));
                                    }
                                }
                            }
                        }
                    }
                }
                Type::Arrow(dom, cod) => {
                    if size == 1 {
                        out.push(Term::Omega(want.clone()));
                    }
                    if size >= 2 {
                        let name = var_name(ctx.len());
                        let mut ctx2 = ctx.clone();
                        ctx2.push(dom.as_ref().clone());
                        let bodies = self.normal(&ctx2, cod, size - 1);
                        for b in bodies.iter() {
                            if is_eta_expansion(b, &name) {
                                continue;
                            }
                            out.push(Term::Lam(name.clone(), dom.as_ref().clone(), Box::new(b.clone())));
                        }
                    }
                }
                _ => unreachable!("finitary types only"),
            }
            out.extend(self.spines(ctx, want, size));
        }
        let rc = Rc::new(out);
        self.normals.insert(key, rc.clone());
        rc
    }

    /// Variable-headed application spines `x M1 .. Mk` of type `want` and
    /// exactly `size` nodes (`k` may be 0, and may stop short of the
    /// variable's full arity).
    fn spines(&mut self, ctx: &Ctx, want: &Type, size: usize) -> Vec<Term> {
        let mut out = Vec::new();
        for (d, vty) in ctx.iter().enumerate() {
            let vty = vty.clone();
            let (sufs, args) = suffixes(&vty);
            let sufs: Vec<Type> = sufs.into_iter().cloned().collect();
            for (k, suf) in sufs.iter().enumerate() {
                if suf != want {
                    continue;
                }
                // size = 1 (head) + k application nodes + argument sizes
                if k == 0 {
                    if size == 1 {
                        out.push(Term::Var(var_name(d)));
                    }
                    continue;
                }
                if size < 1 + 2 * k {
                    continue;
                }
                for split in compositions(size - 1 - k, k) {
                    let arg_sets: Vec<Rc<Vec<Term>>> = (0..k)
                        .map(|i| self.normal(ctx, &args[i], split[i]))
                        .collect();
                    let mut stack: Vec<(Term, usize)> = vec![(Term::Var(var_name(d)), 0)];
                    while let Some((spine, i)) = stack.pop() {
                        if i == k {
                            out.push(spine);
                            continue;
                        }
                        for arg in arg_sets[i].iter() {
                            stack.push((Term::app(spine.clone(), arg.clone()), i + 1));
                        }
                    }
                }
            }
        }
        out
    }
}

/// True when `body` is `M x` with `x` not free in `M`, i.e. when
/// `\x:A. body` would η-reduce to `M`.
fn is_eta_expansion(body: &Term, x: &str) -> bool {
    if let Term::App(m, arg) = body {
        if **arg == Term::Var(x.to_string()) {
            return !m.free_vars().iter().any(|v| v == x);
        }
    }
    false
}

/// Enumerates every closed β-normal, η-reduced boolean-fragment term of type
/// `want` with at most `size_bound` AST nodes, in nondecreasing size order,
/// each exactly once.
pub fn enumerate_terms(want: &Type, size_bound: usize) -> Result<Vec<Term>, EnumError> {
    check_finitary(want)?;
    let mut g = Gen::new();
    let mut out = Vec::new();
    for s in 1..=size_bound {
        out.extend(g.normal(&Vec::new(), want, s).iter().cloned());
    }
    Ok(out)
}

// ---- the independent counter ----

struct Counter {
    normals: HashMap<(Ctx, Type, usize), u64>,
    neutrals: HashMap<(Ctx, Type, usize), u64>,
}

impl Counter {
    fn new() -> Self {
        Counter { normals: HashMap::new(), neutrals: HashMap::new() }
    }

    fn normal(&mut self, ctx: &Ctx, want: &Type, size: usize) -> u64 {
        if size == 0 {
            return 0;
        }
        let key = (ctx.clone(), want.clone(), size);
        if let Some(&n) = self.normals.get(&key) {
            return n;
        }
        let mut n: u64 = 0;
        match want {
            Type::Bool => {
                if size == 1 {
                    n += 3; // tt, ff, omega[B]
                }
                if size >= 4 {
                    for s1 in 1..=(size - 3) {
                        for s2 in 1..=(size - 2 - s1) {
                            let s3 = size - 1 - s1 - s2;
                            n += self.normal(ctx, &Type::Bool, s1)
                                * self.normal(ctx, &Type::Bool, s2)
                                * self.normal(ctx, &Type::Bool, s3);
                        }
                    }
                }
            }
            Type::Arrow(dom, cod) => {
                if size == 1 {
                    n += 1; // omega at the arrow type
                }
                if size >= 2 {
                    let mut ctx2 = ctx.clone();
                    ctx2.push(dom.as_ref().clone());
                    let bodies = self.normal(&ctx2, cod, size - 1);
                    // η-expansions `m x` have two more nodes than `m`, and
                    // their `m` never mentions the new variable, so they are
                    // in bijection with the neutrals of the arrow type over
                    // the unextended context.
                    let eta = if size >= 4 { self.neutral(ctx, want, size - 3) } else { 0 };
                    n += bodies - eta;
                }
            }
            _ => unreachable!("finitary types only"),
        }
        n += self.neutral(ctx, want, size);
        self.normals.insert(key, n);
        n
    }

    fn neutral(&mut self, ctx: &Ctx, want: &Type, size: usize) -> u64 {
        if size == 0 {
            return 0;
        }
        let key = (ctx.clone(), want.clone(), size);
        if let Some(&n) = self.neutrals.get(&key) {
            return n;
        }
        let mut n: u64 = 0;
        for vty in ctx.clone() {
            let (sufs, args) = suffixes(&vty);
            let sufs: Vec<Type> = sufs.into_iter().cloned().collect();
            for (k, suf) in sufs.iter().enumerate() {
                if suf != want {
                    continue;
                }
                if k == 0 {
                    if size == 1 {
                        n += 1;
                    }
                    continue;
                }
                if size < 1 + 2 * k {
                    continue;
                }
                // distribute the remaining nodes across the k arguments
                n += self.spine_args(ctx, &args, 0, k, size - 1 - k);
            }
        }
        self.neutrals.insert(key, n);
        n
    }

    fn spine_args(&mut self, ctx: &Ctx, args: &[Type], i: usize, k: usize, budget: usize) -> u64 {
        if i == k {
            return if budget == 0 { 1 } else { 0 };
        }
        let remaining = k - i - 1;
        let mut n = 0;
        for s in 1..=budget.saturating_sub(remaining) {
            let here = self.normal(ctx, &args[i], s);
            if here > 0 {
                n += here * self.spine_args(ctx, args, i + 1, k, budget - s);
            }
        }
        n
    }
}

/// Counts the terms [`enumerate_terms`] would produce, without building any.
pub fn count_terms(want: &Type, size_bound: usize) -> Result<u64, EnumError> {
    check_finitary(want)?;
    let mut c = Counter::new();
    Ok((1..=size_bound).map(|s| c.normal(&Vec::new(), want, s)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{infer_type, parse_term};
    use std::collections::HashSet;

    fn bb() -> Type {
        Type::arrow(Type::Bool, Type::Bool)
    }

    #[test]
    fn ground_size_one_is_the_three_leaves() {
        let ts = enumerate_terms(&Type::Bool, 1).unwrap();
        let shown: HashSet<String> = ts.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            shown,
            ["tt", "ff", "omega[B]"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn identity_appears_at_bound_four() {
        let ts = enumerate_terms(&bb(), 4).unwrap();
        assert!(ts.contains(&parse_term("\\x0:B. x0").unwrap()));
        // At node-count sizing the single-variable conditional body needs
        // five nodes, so it shows up one bound later.
        assert!(!ts.contains(&parse_term("\\x0:B. cond x0 tt ff").unwrap()));
        assert_eq!(ts.len(), 5);
        let t6 = enumerate_terms(&bb(), 6).unwrap();
        assert!(t6.contains(&parse_term("\\x0:B. cond x0 tt ff").unwrap()));
        assert_eq!(t6.len(), 69);
    }

    #[test]
    fn sequential_ors_appear_by_bound_six() {
        let t = Type::arrow(Type::Bool, bb());
        let ts = enumerate_terms(&t, 6).unwrap();
        assert!(ts.contains(&parse_term("\\x0:B. \\x1:B. cond x0 tt x1").unwrap()));
        assert!(ts.contains(&parse_term("\\x0:B. \\x1:B. cond x1 tt x0").unwrap()));
    }

    #[test]
    fn generator_matches_counter() {
        let types = [
            Type::Bool,
            bb(),
            Type::arrow(Type::Bool, bb()),
            Type::arrow(bb(), Type::Bool),
            Type::arrow(bb(), bb()),
            Type::arrow(Type::arrow(bb(), Type::Bool), Type::Bool),
        ];
        for t in &types {
            for bound in 1..=7 {
                let gen = enumerate_terms(t, bound).unwrap().len() as u64;
                let cnt = count_terms(t, bound).unwrap();
                assert_eq!(gen, cnt, "type {t}, bound {bound}");
            }
        }
    }

    #[test]
    fn all_enumerated_typecheck_dedupe_and_grow() {
        let t = Type::arrow(bb(), Type::Bool);
        let ts = enumerate_terms(&t, 7).unwrap();
        let mut seen = HashSet::new();
        let mut last = 0usize;
        for term in &ts {
            assert_eq!(infer_type(&[], term).unwrap(), t, "term {term}");
            assert!(seen.insert(term.clone()), "duplicate {term}");
            assert!(term.size() >= last, "size order violated at {term}");
            last = term.size();
        }
    }

    #[test]
    fn print_parse_round_trip_up_to_six() {
        let t = Type::arrow(Type::Bool, bb());
        for term in enumerate_terms(&t, 6).unwrap() {
            assert_eq!(parse_term(&term.to_string()).unwrap(), term);
        }
    }

    #[test]
    fn eta_expansions_are_absent() {
        // \x0:B->B. \x1:B. x0 x1 is the η-expansion of \x0:B->B. x0.
        let ts = enumerate_terms(&Type::arrow(bb(), bb()), 6).unwrap();
        assert!(ts.contains(&parse_term("\\x0:B -> B. x0").unwrap()));
        assert!(!ts.contains(&parse_term("\\x0:B -> B. \\x1:B. x0 x1").unwrap()));
    }

    #[test]
    fn nat_mentioning_types_are_rejected() {
        assert!(enumerate_terms(&Type::arrow(Type::Nat, Type::Bool), 3).is_err());
        assert!(count_terms(&Type::Nat, 3).is_err());
    }
}

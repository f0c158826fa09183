//! Terms and types of the object language, plus parsing, printing,
//! typechecking and bounded enumeration of normal forms.
//!
//! The language is a simply typed lambda calculus over two ground types —
//! natural numbers `N` and booleans `B` — with binary products, arithmetic
//! constants, ground-type conditionals, a typed fixpoint constant and a typed
//! divergent constant. Concrete syntax examples:
//!
//! ```text
//! \f:N->N. \x:N. add (f x) 2
//! fix[(N->N)->N->N] (\f:N->N.\n:N. ifz n 1 (mul n (f (sub n 1))))
//! cond b tt ff
//! ```

mod enumerate;
mod parser;
mod printer;
mod typecheck;

pub use enumerate::{count_terms, enumerate_terms, EnumError};
pub use parser::{parse_term, parse_type, ParseError};
pub use typecheck::{infer_type, typecheck_closed, TypeError};

use serde::{Deserialize, Serialize};
use std::fmt;

/// Types: ground naturals and booleans, functions, binary products.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Type {
    Nat,
    Bool,
    Arrow(Box<Type>, Box<Type>),
    Product(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn product(a: Type, b: Type) -> Type {
        Type::Product(Box::new(a), Box::new(b))
    }

    /// True for `N` and `B`.
    pub fn is_ground(&self) -> bool {
        matches!(self, Type::Nat | Type::Bool)
    }

    /// Splits a (curried) type into argument list and final result:
    /// `N -> (N -> B) -> B` yields `([N, N -> B], B)`.
    pub fn uncurry(&self) -> (Vec<&Type>, &Type) {
        let mut args = Vec::new();
        let mut t = self;
        while let Type::Arrow(a, b) = t {
            args.push(a.as_ref());
            t = b;
        }
        (args, t)
    }

    /// Order of the type: ground types are order 0, and an arrow bumps the
    /// order of its domain by one. Products take the max of the sides.
    pub fn order(&self) -> usize {
        match self {
            Type::Nat | Type::Bool => 0,
            Type::Arrow(a, b) => (a.order() + 1).max(b.order()),
            Type::Product(a, b) => a.order().max(b.order()),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Precedence: arrow binds loosest and associates right; product binds
        // tighter than arrow; atoms need no parens.
        fn go(t: &Type, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
            match t {
                Type::Nat => write!(f, "N"),
                Type::Bool => write!(f, "B"),
                Type::Arrow(a, b) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    go(a, f, 1)?;
                    write!(f, " -> ")?;
                    go(b, f, 0)?;
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Type::Product(a, b) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(a, f, 2)?;
                    write!(f, " * ")?;
                    go(b, f, 1)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, 0)
    }
}

/// Terms. Arithmetic is provided as curried constants (`Add`, `Mul`, `Sub`,
/// all of type `N -> N -> N`; `Sub` is truncated subtraction). `IfZ` tests a
/// natural against zero, `Cond` branches on a boolean; both are primitive
/// ternary nodes whose branches must share a ground type. `Fix` and `Omega`
/// carry their type explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Lam(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    NumLit(u64),
    BoolLit(bool),
    Add,
    Mul,
    Sub,
    IfZ(Box<Term>, Box<Term>, Box<Term>),
    Cond(Box<Term>, Box<Term>, Box<Term>),
    Fix(Type),
    Omega(Type),
}

impl Term {
    pub fn var(s: &str) -> Term {
        Term::Var(s.to_string())
    }

    pub fn lam(x: &str, ty: Type, body: Term) -> Term {
        Term::Lam(x.to_string(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// Left-nested application of `f` to every term in `args`.
    pub fn apps(f: Term, args: Vec<Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn ifz(s: Term, z: Term, nz: Term) -> Term {
        Term::IfZ(Box::new(s), Box::new(z), Box::new(nz))
    }

    pub fn cond(s: Term, t: Term, e: Term) -> Term {
        Term::Cond(Box::new(s), Box::new(t), Box::new(e))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_)
            | Term::NumLit(_)
            | Term::BoolLit(_)
            | Term::Add
            | Term::Mul
            | Term::Sub
            | Term::Fix(_)
            | Term::Omega(_) => 1,
            Term::Lam(_, _, b) | Term::Fst(b) | Term::Snd(b) => 1 + b.size(),
            Term::App(a, b) | Term::Pair(a, b) => 1 + a.size() + b.size(),
            Term::IfZ(a, b, c) | Term::Cond(a, b, c) => 1 + a.size() + b.size() + c.size(),
        }
    }

    /// Free variables, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        fn go(t: &Term, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match t {
                Term::Var(x) => {
                    if !bound.iter().any(|b| b == x) && !out.iter().any(|o| o == x) {
                        out.push(x.clone());
                    }
                }
                Term::Lam(x, _, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                Term::App(a, b) | Term::Pair(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Term::Fst(a) | Term::Snd(a) => go(a, bound, out),
                Term::IfZ(a, b, c) | Term::Cond(a, b, c) => {
                    go(a, bound, out);
                    go(b, bound, out);
                    go(c, bound, out);
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Capture-avoiding substitution of `repl` for free `x`.
    pub fn subst(&self, x: &str, repl: &Term) -> Term {
        match self {
            Term::Var(y) => {
                if y == x {
                    repl.clone()
                } else {
                    self.clone()
                }
            }
            Term::Lam(y, ty, b) => {
                if y == x {
                    self.clone()
                } else if repl.free_vars().iter().any(|v| v == y) {
                    // Rename the binder away from the capture.
                    let mut fresh = format!("{y}'");
                    let avoid: Vec<String> = repl
                        .free_vars()
                        .into_iter()
                        .chain(b.free_vars())
                        .collect();
                    while avoid.iter().any(|v| *v == fresh) {
                        fresh.push('\'');
                    }
                    let renamed = b.subst(y, &Term::Var(fresh.clone()));
                    Term::Lam(fresh, ty.clone(), Box::new(renamed.subst(x, repl)))
                } else {
                    Term::Lam(y.clone(), ty.clone(), Box::new(b.subst(x, repl)))
                }
            }
            Term::App(a, b) => Term::app(a.subst(x, repl), b.subst(x, repl)),
            Term::Pair(a, b) => Term::pair(a.subst(x, repl), b.subst(x, repl)),
            Term::Fst(a) => Term::Fst(Box::new(a.subst(x, repl))),
            Term::Snd(a) => Term::Snd(Box::new(a.subst(x, repl))),
            Term::IfZ(a, b, c) => {
                Term::ifz(a.subst(x, repl), b.subst(x, repl), c.subst(x, repl))
            }
            Term::Cond(a, b, c) => {
                Term::cond(a.subst(x, repl), b.subst(x, repl), c.subst(x, repl))
            }
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer::print_term(self, f)
    }
}

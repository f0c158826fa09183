//! Type inference for the simply typed rules, with ground-type side
//! conditions on the conditionals and explicit annotations on `fix`/`omega`:
//!
//! * `fix[T] : (T -> T) -> T`
//! * `omega[T] : T`
//! * `ifz : N -> T -> T -> T` and `cond : B -> T -> T -> T` for ground `T`.

use super::{Term, Type};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable: {0}")]
    Unbound(String),
    #[error("applied a non-function of type {0}")]
    NotAFunction(Type),
    #[error("argument type mismatch: function wants {expected}, argument has {actual}")]
    ArgMismatch { expected: Type, actual: Type },
    #[error("projection from a non-product of type {0}")]
    NotAProduct(Type),
    #[error("scrutinee of {form} has type {actual}, wanted {expected}")]
    BadScrutinee {
        form: &'static str,
        expected: Type,
        actual: Type,
    },
    #[error("branches disagree: {0} vs {1}")]
    BranchMismatch(Type, Type),
    #[error("conditional branches must have ground type, got {0}")]
    NonGroundBranch(Type),
}

/// Infers the type of `t` in a lexical context (later bindings shadow).
pub fn infer_type(ctx: &[(String, Type)], t: &Term) -> Result<Type, TypeError> {
    match t {
        Term::Var(x) => ctx
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, ty)| ty.clone())
            .ok_or_else(|| TypeError::Unbound(x.clone())),
        Term::Lam(x, ty, b) => {
            let mut ctx2 = ctx.to_vec();
            ctx2.push((x.clone(), ty.clone()));
            let u = infer_type(&ctx2, b)?;
            Ok(Type::arrow(ty.clone(), u))
        }
        Term::App(a, b) => {
            let fa = infer_type(ctx, a)?;
            let ba = infer_type(ctx, b)?;
            match fa {
                Type::Arrow(dom, cod) => {
                    if *dom == ba {
                        Ok(*cod)
                    } else {
                        Err(TypeError::ArgMismatch { expected: *dom, actual: ba })
                    }
                }
                other => Err(TypeError::NotAFunction(other)),
            }
        }
        Term::Pair(a, b) => Ok(Type::product(infer_type(ctx, a)?, infer_type(ctx, b)?)),
        Term::Fst(a) => match infer_type(ctx, a)? {
            Type::Product(l, _) => Ok(*l),
            other => Err(TypeError::NotAProduct(other)),
        },
        Term::Snd(a) => match infer_type(ctx, a)? {
            Type::Product(_, r) => Ok(*r),
            other => Err(TypeError::NotAProduct(other)),
        },
        Term::NumLit(_) => Ok(Type::Nat),
        Term::BoolLit(_) => Ok(Type::Bool),
        Term::Add | Term::Mul | Term::Sub => Ok(Type::arrow(
            Type::Nat,
            Type::arrow(Type::Nat, Type::Nat),
        )),
        Term::IfZ(s, z, nz) => {
            let st = infer_type(ctx, s)?;
            if st != Type::Nat {
                return Err(TypeError::BadScrutinee {
                    form: "ifz",
                    expected: Type::Nat,
                    actual: st,
                });
            }
            let zt = infer_type(ctx, z)?;
            let nt = infer_type(ctx, nz)?;
            if zt != nt {
                return Err(TypeError::BranchMismatch(zt, nt));
            }
            if !zt.is_ground() {
                return Err(TypeError::NonGroundBranch(zt));
            }
            Ok(zt)
        }
        Term::Cond(s, a, b) => {
            let st = infer_type(ctx, s)?;
            if st != Type::Bool {
                return Err(TypeError::BadScrutinee {
                    form: "cond",
                    expected: Type::Bool,
                    actual: st,
                });
            }
            let at = infer_type(ctx, a)?;
            let bt = infer_type(ctx, b)?;
            if at != bt {
                return Err(TypeError::BranchMismatch(at, bt));
            }
            if !at.is_ground() {
                return Err(TypeError::NonGroundBranch(at));
            }
            Ok(at)
        }
        Term::Fix(ty) => Ok(Type::arrow(Type::arrow(ty.clone(), ty.clone()), ty.clone())),
        Term::Omega(ty) => Ok(ty.clone()),
    }
}

/// Infers the type of a closed term.
pub fn typecheck_closed(t: &Term) -> Result<Type, TypeError> {
    infer_type(&[], t)
}

//! Precedence-aware pretty printer. `parse_term(t.to_string())` returns `t`
//! for every well-formed term (checked by a property test).

use super::Term;
use std::fmt;

// Precedence contexts: 0 = anywhere (top level, lambda body, pair component,
// inside parens); 1 = application head; 2 = juxtaposition argument.
pub(super) fn print_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    go(t, f, 0)
}

fn go(t: &Term, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    match t {
        Term::Var(x) => write!(f, "{x}"),
        Term::NumLit(n) => write!(f, "{n}"),
        Term::BoolLit(true) => write!(f, "tt"),
        Term::BoolLit(false) => write!(f, "ff"),
        Term::Add => write!(f, "add"),
        Term::Mul => write!(f, "mul"),
        Term::Sub => write!(f, "sub"),
        Term::Fix(ty) => write!(f, "fix[{ty}]"),
        Term::Omega(ty) => write!(f, "omega[{ty}]"),
        Term::Lam(x, ty, b) => {
            // A lambda must be parenthesized whenever anything follows or
            // surrounds it at application level, since its body is greedy.
            if prec >= 1 {
                write!(f, "(")?;
            }
            write!(f, "\\{x}:{ty}. ")?;
            go(b, f, 0)?;
            if prec >= 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Term::App(a, b) => {
            if prec >= 2 {
                write!(f, "(")?;
            }
            go(a, f, 1)?;
            write!(f, " ")?;
            go(b, f, 2)?;
            if prec >= 2 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Term::Pair(a, b) => {
            write!(f, "(")?;
            go(a, f, 0)?;
            write!(f, ", ")?;
            go(b, f, 0)?;
            write!(f, ")")
        }
        // The keyword forms take a fixed number of argument-level items, so
        // they delimit themselves and never need outer parentheses.
        Term::Fst(a) => {
            write!(f, "fst ")?;
            go(a, f, 2)
        }
        Term::Snd(a) => {
            write!(f, "snd ")?;
            go(a, f, 2)
        }
        Term::IfZ(a, b, c) => {
            write!(f, "ifz ")?;
            go(a, f, 2)?;
            write!(f, " ")?;
            go(b, f, 2)?;
            write!(f, " ")?;
            go(c, f, 2)
        }
        Term::Cond(a, b, c) => {
            write!(f, "cond ")?;
            go(a, f, 2)?;
            write!(f, " ")?;
            go(b, f, 2)?;
            write!(f, " ")?;
            go(c, f, 2)
        }
    }
}

//! Hand-rolled lexer and recursive-descent parser for terms and types.
//!
//! Application is juxtaposition and associates left. Lambda bodies extend as
//! far right as possible. `ifz`/`cond` take three juxtaposition-level
//! arguments, `fst`/`snd` take one. `--` starts a line comment. Pairs are
//! written `(a, b)`.

use super::{Term, Type};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Lambda,
    Dot,
    Colon,
    Comma,
    Star,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();

    macro_rules! bump {
        () => {{
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '-' => {
                bump!();
                match chars.peek() {
                    Some('-') => {
                        // Line comment: skip to newline.
                        while let Some(&c2) = chars.peek() {
                            if c2 == '\n' {
                                break;
                            }
                            bump!();
                        }
                    }
                    Some('>') => {
                        bump!();
                        toks.push(Spanned { tok: Tok::Arrow, line: tl, col: tc });
                    }
                    _ => {
                        return Err(ParseError {
                            line: tl,
                            col: tc,
                            msg: "expected '->' or '--'".into(),
                        })
                    }
                }
            }
            '\\' => {
                bump!();
                toks.push(Spanned { tok: Tok::Lambda, line: tl, col: tc });
            }
            '.' => {
                bump!();
                toks.push(Spanned { tok: Tok::Dot, line: tl, col: tc });
            }
            ':' => {
                bump!();
                toks.push(Spanned { tok: Tok::Colon, line: tl, col: tc });
            }
            ',' => {
                bump!();
                toks.push(Spanned { tok: Tok::Comma, line: tl, col: tc });
            }
            '*' => {
                bump!();
                toks.push(Spanned { tok: Tok::Star, line: tl, col: tc });
            }
            '(' => {
                bump!();
                toks.push(Spanned { tok: Tok::LParen, line: tl, col: tc });
            }
            ')' => {
                bump!();
                toks.push(Spanned { tok: Tok::RParen, line: tl, col: tc });
            }
            '[' => {
                bump!();
                toks.push(Spanned { tok: Tok::LBracket, line: tl, col: tc });
            }
            ']' => {
                bump!();
                toks.push(Spanned { tok: Tok::RBracket, line: tl, col: tc });
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&c2) = chars.peek() {
                    if c2.is_ascii_digit() {
                        s.push(bump!());
                    } else {
                        break;
                    }
                }
                let n: u64 = s.parse().map_err(|_| ParseError {
                    line: tl,
                    col: tc,
                    msg: format!("numeral out of range: {s}"),
                })?;
                toks.push(Spanned { tok: Tok::Num(n), line: tl, col: tc });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c2) = chars.peek() {
                    if c2.is_ascii_alphanumeric() || c2 == '_' || c2 == '\'' {
                        s.push(bump!());
                    } else {
                        break;
                    }
                }
                toks.push(Spanned { tok: Tok::Ident(s), line: tl, col: tc });
            }
            other => {
                return Err(ParseError {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => self
                .toks
                .last()
                .map(|s| (s.line, s.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    // ---- types ----

    fn ty(&mut self) -> Result<Type, ParseError> {
        // arrow level, right-assoc
        let lhs = self.ty_product()?;
        if let Some(Tok::Arrow) = self.peek() {
            self.pos += 1;
            let rhs = self.ty()?;
            Ok(Type::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_product(&mut self) -> Result<Type, ParseError> {
        let lhs = self.ty_atom()?;
        if let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let rhs = self.ty_product()?;
            Ok(Type::product(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> Result<Type, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "N" => {
                self.pos += 1;
                Ok(Type::Nat)
            }
            Some(Tok::Ident(s)) if s == "B" => {
                self.pos += 1;
                Ok(Type::Bool)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => self.err("expected a type (N, B, or parenthesized)"),
        }
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term, ParseError> {
        if let Some(Tok::Lambda) = self.peek() {
            self.pos += 1;
            let x = match self.next() {
                Some(Tok::Ident(s)) if !is_keyword(&s) => s,
                _ => return self.err("expected a variable name after '\\'"),
            };
            self.expect(Tok::Colon, "':' after the binder")?;
            let ty = self.ty()?;
            self.expect(Tok::Dot, "'.' after the binder type")?;
            let body = self.term()?;
            Ok(Term::Lam(x, ty, Box::new(body)))
        } else {
            self.appseq()
        }
    }

    fn appseq(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unit()?;
        while self.starts_unit() {
            let arg = self.unit()?;
            t = Term::app(t, arg);
        }
        Ok(t)
    }

    fn starts_unit(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::LParen)
        )
    }

    /// One juxtaposition-level item: an atom, or a keyword form with its
    /// fixed number of item arguments (`fst`/`snd` one, `ifz`/`cond` three).
    fn unit(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => match s.as_str() {
                "fst" => {
                    self.pos += 1;
                    Ok(Term::Fst(Box::new(self.unit()?)))
                }
                "snd" => {
                    self.pos += 1;
                    Ok(Term::Snd(Box::new(self.unit()?)))
                }
                "ifz" => {
                    self.pos += 1;
                    let a = self.unit()?;
                    let b = self.unit()?;
                    let c = self.unit()?;
                    Ok(Term::ifz(a, b, c))
                }
                "cond" => {
                    self.pos += 1;
                    let a = self.unit()?;
                    let b = self.unit()?;
                    let c = self.unit()?;
                    Ok(Term::cond(a, b, c))
                }
                "fix" => {
                    self.pos += 1;
                    let ty = self.bracketed_type("fix")?;
                    Ok(Term::Fix(ty))
                }
                "omega" => {
                    self.pos += 1;
                    let ty = self.bracketed_type("omega")?;
                    Ok(Term::Omega(ty))
                }
                "tt" => {
                    self.pos += 1;
                    Ok(Term::BoolLit(true))
                }
                "ff" => {
                    self.pos += 1;
                    Ok(Term::BoolLit(false))
                }
                "add" => {
                    self.pos += 1;
                    Ok(Term::Add)
                }
                "mul" => {
                    self.pos += 1;
                    Ok(Term::Mul)
                }
                "sub" => {
                    self.pos += 1;
                    Ok(Term::Sub)
                }
                "N" | "B" => self.err(format!("'{s}' is a type, not a term")),
                _ => {
                    self.pos += 1;
                    Ok(Term::Var(s))
                }
            },
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Term::NumLit(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let a = self.term()?;
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.pos += 1;
                        let b = self.term()?;
                        self.expect(Tok::RParen, "')' closing the pair")?;
                        Ok(Term::pair(a, b))
                    }
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(a)
                    }
                    _ => self.err("expected ',' or ')'"),
                }
            }
            _ => self.err("expected a term"),
        }
    }

    fn bracketed_type(&mut self, kw: &str) -> Result<Type, ParseError> {
        self.expect(Tok::LBracket, &format!("'[' after '{kw}'"))?;
        let ty = self.ty()?;
        self.expect(Tok::RBracket, "']'")?;
        Ok(ty)
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "fst" | "snd" | "ifz" | "cond" | "fix" | "omega" | "tt" | "ff" | "add" | "mul" | "sub"
            | "N" | "B"
    )
}

/// Parses a complete term; trailing input is an error.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.term()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

/// Parses a complete type; trailing input is an error.
pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.ty()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

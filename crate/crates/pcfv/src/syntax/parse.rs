//! Recursive-descent parser for the concrete grammar.
//!
//! Beyond the core grammar this accepts parenthesised values and types for
//! grouping, `[.]` as the context hole, and `#` line comments.

use super::ast::{Computation, Term, Ty, Value};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u32),
    KwStar,
    KwInl,
    KwInr,
    KwSuc,
    KwZero,
    KwFn,
    KwRec,
    KwReturn,
    KwCase,
    KwOf,
    KwFst,
    KwSnd,
    KwLet,
    KwIn,
    KwAbsurd,
    KwNat,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Bar,
    FatArrow,
    Arrow,
    Plus,
    Star,
    Eq,
    Hole,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(x) => return write!(f, "identifier `{x}`"),
            Tok::Num(k) => return write!(f, "numeral `{k}`"),
            Tok::KwStar => "`star`",
            Tok::KwInl => "`inl`",
            Tok::KwInr => "`inr`",
            Tok::KwSuc => "`suc`",
            Tok::KwZero => "`zero`",
            Tok::KwFn => "`fn`",
            Tok::KwRec => "`rec`",
            Tok::KwReturn => "`return`",
            Tok::KwCase => "`case`",
            Tok::KwOf => "`of`",
            Tok::KwFst => "`fst`",
            Tok::KwSnd => "`snd`",
            Tok::KwLet => "`let`",
            Tok::KwIn => "`in`",
            Tok::KwAbsurd => "`absurd`",
            Tok::KwNat => "`nat`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::Bar => "`|`",
            Tok::FatArrow => "`=>`",
            Tok::Arrow => "`->`",
            Tok::Plus => "`+`",
            Tok::Star => "`*`",
            Tok::Eq => "`=`",
            Tok::Hole => "`[.]`",
        };
        f.write_str(s)
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut lx = Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(tok) = lx.next_token()? {
        out.push(tok);
    }
    Ok(out)
}

impl<'a> Lexer<'a> {
    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, col: self.col, msg: msg.into() })
    }

    fn next_token(&mut self) -> Result<Option<Spanned>, ParseError> {
        loop {
            match self.peek() {
                Some(c) if (c as char).is_whitespace() => {
                    self.bump();
                }
                Some(b'#') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let c = match self.peek() {
            None => return Ok(None),
            Some(c) => c,
        };
        let tok = match c {
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'{' => {
                self.bump();
                Tok::LBrace
            }
            b'}' => {
                self.bump();
                Tok::RBrace
            }
            b',' => {
                self.bump();
                Tok::Comma
            }
            b':' => {
                self.bump();
                Tok::Colon
            }
            b'|' => {
                self.bump();
                Tok::Bar
            }
            b'+' => {
                self.bump();
                Tok::Plus
            }
            b'*' => {
                self.bump();
                Tok::Star
            }
            b'=' => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    Tok::FatArrow
                } else {
                    Tok::Eq
                }
            }
            b'-' => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    Tok::Arrow
                } else {
                    return self.err("expected `->`");
                }
            }
            b'[' => {
                self.bump();
                if self.peek() == Some(b'.') {
                    self.bump();
                    if self.peek() == Some(b']') {
                        self.bump();
                        Tok::Hole
                    } else {
                        return self.err("expected `]` to close the hole `[.]`");
                    }
                } else {
                    return self.err("expected `.` in hole `[.]`");
                }
            }
            b'0'..=b'9' => {
                let mut n: u32 = 0;
                while let Some(d @ b'0'..=b'9') = self.peek() {
                    self.bump();
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add((d - b'0') as u32))
                        .ok_or(ParseError { line, col, msg: "numeral too large".into() })?;
                }
                Tok::Num(n)
            }
            c if (c as char).is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if (c as char).is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                        self.bump();
                    } else {
                        break;
                    }
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match word {
                    "star" => Tok::KwStar,
                    "inl" => Tok::KwInl,
                    "inr" => Tok::KwInr,
                    "suc" => Tok::KwSuc,
                    "zero" => Tok::KwZero,
                    "fn" => Tok::KwFn,
                    "rec" => Tok::KwRec,
                    "return" => Tok::KwReturn,
                    "case" => Tok::KwCase,
                    "of" => Tok::KwOf,
                    "fst" => Tok::KwFst,
                    "snd" => Tok::KwSnd,
                    "let" => Tok::KwLet,
                    "in" => Tok::KwIn,
                    "absurd" => Tok::KwAbsurd,
                    "nat" => Tok::KwNat,
                    _ => Tok::Ident(word.to_string()),
                }
            }
            c => return self.err(format!("unexpected character `{}`", c as char)),
        };
        Ok(Some((tok, line, col)))
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some((_, l, c)) => (*l, *c),
            None => match self.toks.last() {
                Some((_, l, c)) => (*l, *c + 1),
                None => (1, 1),
            },
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let msg = format!("expected {want}, found {t}");
                self.err(msg)
            }
            None => self.err(format!("expected {want}, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(x)) => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            Some(t) => {
                let msg = format!("expected identifier, found {t}");
                self.err(msg)
            }
            None => self.err("expected identifier, found end of input"),
        }
    }

    // ty ::= prod ("+" ty)?   with "+" right-assoc, lower than "*"
    fn ty(&mut self) -> Result<Ty, ParseError> {
        let lhs = self.ty_sum()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.ty()?;
            Ok(Ty::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_sum(&mut self) -> Result<Ty, ParseError> {
        let lhs = self.ty_prod()?;
        if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            let rhs = self.ty_sum()?;
            Ok(Ty::sum(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_prod(&mut self) -> Result<Ty, ParseError> {
        let lhs = self.ty_atom()?;
        if self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.ty_prod()?;
            Ok(Ty::prod(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> Result<Ty, ParseError> {
        match self.peek() {
            Some(Tok::Num(0)) => {
                self.pos += 1;
                Ok(Ty::Zero)
            }
            Some(Tok::Num(1)) => {
                self.pos += 1;
                Ok(Ty::One)
            }
            Some(Tok::Num(_)) => self.err("only `0` and `1` are types"),
            Some(Tok::KwNat) => {
                self.pos += 1;
                Ok(Ty::Nat)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(t) => {
                let msg = format!("expected a type, found {t}");
                self.err(msg)
            }
            None => self.err("expected a type, found end of input"),
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Value::Var(self.ident()?)),
            Some(Tok::KwStar) => {
                self.pos += 1;
                Ok(Value::Star)
            }
            Some(Tok::KwZero) => {
                self.pos += 1;
                Ok(Value::Zero)
            }
            Some(Tok::Num(k)) => {
                let k = *k;
                self.pos += 1;
                Ok(Value::numeral(k))
            }
            Some(Tok::KwInl) => {
                self.pos += 1;
                Ok(Value::Inl(Box::new(self.value()?)))
            }
            Some(Tok::KwInr) => {
                self.pos += 1;
                Ok(Value::Inr(Box::new(self.value()?)))
            }
            Some(Tok::KwSuc) => {
                self.pos += 1;
                Ok(Value::Suc(Box::new(self.value()?)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let first = self.value()?;
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.pos += 1;
                        let second = self.value()?;
                        self.expect(Tok::RParen)?;
                        Ok(Value::Pair(Box::new(first), Box::new(second)))
                    }
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(first)
                    }
                    _ => self.err("expected `,` or `)`"),
                }
            }
            Some(Tok::KwFn) => {
                self.pos += 1;
                let param = self.ident()?;
                self.expect(Tok::Colon)?;
                let param_ty = self.ty()?;
                self.expect(Tok::FatArrow)?;
                let body = self.computation()?;
                Ok(Value::Lam { param, param_ty, body: Box::new(body) })
            }
            Some(Tok::KwRec) => {
                self.pos += 1;
                let fname = self.ident()?;
                self.expect(Tok::LParen)?;
                let param = self.ident()?;
                self.expect(Tok::Colon)?;
                let param_ty = self.ty()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Colon)?;
                let ret_ty = self.ty()?;
                self.expect(Tok::FatArrow)?;
                let body = self.computation()?;
                Ok(Value::Rec { fname, param, param_ty, ret_ty, body: Box::new(body) })
            }
            Some(t) => {
                let msg = format!("expected a value, found {t}");
                self.err(msg)
            }
            None => self.err("expected a value, found end of input"),
        }
    }

    fn starts_value(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Tok::Ident(_)
                    | Tok::KwStar
                    | Tok::KwZero
                    | Tok::Num(_)
                    | Tok::KwInl
                    | Tok::KwInr
                    | Tok::KwSuc
                    | Tok::LParen
                    | Tok::KwFn
                    | Tok::KwRec
            )
        )
    }

    fn computation(&mut self) -> Result<Computation, ParseError> {
        match self.peek() {
            Some(Tok::KwReturn) => {
                self.pos += 1;
                Ok(Computation::Ret(self.value()?))
            }
            Some(Tok::KwFst) => {
                self.pos += 1;
                Ok(Computation::Proj1(self.value()?))
            }
            Some(Tok::KwSnd) => {
                self.pos += 1;
                Ok(Computation::Proj2(self.value()?))
            }
            Some(Tok::KwAbsurd) => {
                self.pos += 1;
                Ok(Computation::Absurd(self.value()?))
            }
            Some(Tok::Hole) => {
                self.pos += 1;
                Ok(Computation::Hole)
            }
            Some(Tok::KwLet) => {
                self.pos += 1;
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let bound = self.computation()?;
                self.expect(Tok::KwIn)?;
                let body = self.computation()?;
                Ok(Computation::Let { name, bound: Box::new(bound), body: Box::new(body) })
            }
            Some(Tok::KwCase) => {
                self.pos += 1;
                let scrutinee = self.value()?;
                self.expect(Tok::KwOf)?;
                self.expect(Tok::LBrace)?;
                match self.peek() {
                    Some(Tok::KwInl) => {
                        self.pos += 1;
                        let left_name = self.ident()?;
                        self.expect(Tok::FatArrow)?;
                        let left = self.computation()?;
                        self.expect(Tok::Bar)?;
                        self.expect(Tok::KwInr)?;
                        let right_name = self.ident()?;
                        self.expect(Tok::FatArrow)?;
                        let right = self.computation()?;
                        self.expect(Tok::RBrace)?;
                        Ok(Computation::CaseSum {
                            scrutinee,
                            left_name,
                            left: Box::new(left),
                            right_name,
                            right: Box::new(right),
                        })
                    }
                    Some(Tok::KwZero) => {
                        self.pos += 1;
                        self.expect(Tok::FatArrow)?;
                        let zero = self.computation()?;
                        self.expect(Tok::Bar)?;
                        self.expect(Tok::KwSuc)?;
                        let succ_name = self.ident()?;
                        self.expect(Tok::FatArrow)?;
                        let succ = self.computation()?;
                        self.expect(Tok::RBrace)?;
                        Ok(Computation::CaseNat {
                            scrutinee,
                            zero: Box::new(zero),
                            succ_name,
                            succ: Box::new(succ),
                        })
                    }
                    _ => self.err("expected `inl` or `zero` branch"),
                }
            }
            _ if self.starts_value() => {
                let f = self.value()?;
                if !self.starts_value() {
                    return self.err("expected an argument value (a bare value is not a computation)");
                }
                let a = self.value()?;
                Ok(Computation::App(f, a))
            }
            Some(t) => {
                let msg = format!("expected a computation, found {t}");
                self.err(msg)
            }
            None => self.err("expected a computation, found end of input"),
        }
    }

    fn finish<T>(&self, t: T) -> Result<T, ParseError> {
        if self.pos == self.toks.len() {
            Ok(t)
        } else {
            self.err("trailing input after term")
        }
    }
}

/// Parse a computation from source text.
pub fn parse_computation(src: &str) -> Result<Computation, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.computation()?;
    p.finish(t)
}

/// Parse a value from source text.
pub fn parse_value(src: &str) -> Result<Value, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let v = p.value()?;
    p.finish(v)
}

/// Parse a type from source text.
pub fn parse_ty(src: &str) -> Result<Ty, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.ty()?;
    p.finish(t)
}

/// Parse either a computation or a value: computations are tried first since
/// every keyword-led form is unambiguous, and a bare value is a value term.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    match p.computation() {
        Ok(t) => p.finish(Term::Computation(t)),
        Err(e1) => {
            let mut p = Parser { toks: lex(src)?, pos: 0 };
            match p.value().and_then(|v| p.finish(v)) {
                Ok(v) => Ok(Term::Value(v)),
                Err(_) => Err(e1),
            }
        }
    }
}

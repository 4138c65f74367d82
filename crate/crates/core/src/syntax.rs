//! Concrete syntax for terms and Boolean-algebra terms.
//!
//! Term grammar (ASCII, shell-friendly):
//!
//! ```text
//! expr    := binary (';' binary)*            sequential composition, left-assoc
//! binary  := cond (BINOP cond)?              one connective per level, no chaining
//! cond    := unary ('<|' unary '|>' unary)?  conditional composition, non-assoc
//! unary   := '~' unary | primary
//! primary := 'T' | 'F' | ident | '(' expr ')'
//! BINOP   := '&>' | '<&' | 'or>' | '<or' | '->' | '<-' | '<->' | '>-<'
//! ```
//!
//! Lowercase identifiers are atoms, uppercase-initial identifiers are
//! variables. Conditional composition has no associativity law, so nesting a
//! conditional inside another requires parentheses; the same rule applies to
//! the binary connectives. All sugar desugars on the way in; the printer
//! only ever emits the fully parenthesized `<| |>` form.
//!
//! Boolean-algebra grammar: `!` binds tighter than `&`, which binds tighter
//! than `|`; `&` and `|` are left-associative.

use std::fmt;

use crate::ba::BATerm;
use crate::error::{Error, Result, SourceSpan};
use crate::term::{apply_connective, negate, seq_compose, Alphabet, Connective, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    CondOpen,  // <|
    CondClose, // |>
    LParen,
    RParen,
    Tilde,
    Semi,
    Binop(Connective),
    Bang,
    Amp,
    Pipe,
    ConstT,
    ConstF,
    Atom(String),
    Var(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    span: SourceSpan,
}

fn parse_err<T>(message: impl Into<String>, span: SourceSpan) -> Result<T> {
    Err(Error::Parse {
        message: message.into(),
        span,
    })
}

/// `ba` selects the Boolean-algebra operator set (`! & |`) instead of the
/// conditional-composition one.
fn lex(input: &str, ba: bool) -> Result<Vec<Spanned>> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let mut push = |tok: Tok, end: usize| {
            toks.push(Spanned {
                tok,
                span: SourceSpan::new(start, end),
            });
        };
        match c {
            '(' => {
                push(Tok::LParen, i + 1);
                i += 1;
            }
            ')' => {
                push(Tok::RParen, i + 1);
                i += 1;
            }
            '~' if !ba => {
                push(Tok::Tilde, i + 1);
                i += 1;
            }
            ';' if !ba => {
                push(Tok::Semi, i + 1);
                i += 1;
            }
            '!' if ba => {
                push(Tok::Bang, i + 1);
                i += 1;
            }
            '&' if ba => {
                push(Tok::Amp, i + 1);
                i += 1;
            }
            '|' if ba => {
                push(Tok::Pipe, i + 1);
                i += 1;
            }
            '&' if !ba => {
                if bytes.get(i + 1) == Some(&b'>') {
                    push(Tok::Binop(Connective::LeftAnd), i + 2);
                    i += 2;
                } else {
                    return parse_err("expected `&>`", SourceSpan::new(i, i + 1));
                }
            }
            '|' if !ba => {
                if bytes.get(i + 1) == Some(&b'>') {
                    push(Tok::CondClose, i + 2);
                    i += 2;
                } else {
                    return parse_err("expected `|>`", SourceSpan::new(i, i + 1));
                }
            }
            '<' if !ba => match bytes.get(i + 1) {
                Some(b'|') => {
                    push(Tok::CondOpen, i + 2);
                    i += 2;
                }
                Some(b'&') => {
                    push(Tok::Binop(Connective::RightAnd), i + 2);
                    i += 2;
                }
                Some(b'-') => {
                    if bytes.get(i + 2) == Some(&b'>') {
                        push(Tok::Binop(Connective::LeftBiimp), i + 3);
                        i += 3;
                    } else {
                        push(Tok::Binop(Connective::RightImp), i + 2);
                        i += 2;
                    }
                }
                Some(b'o') if bytes.get(i + 2) == Some(&b'r') => {
                    push(Tok::Binop(Connective::RightOr), i + 3);
                    i += 3;
                }
                _ => return parse_err("unrecognized operator after `<`", SourceSpan::new(i, i + 1)),
            },
            '-' if !ba => {
                if bytes.get(i + 1) == Some(&b'>') {
                    push(Tok::Binop(Connective::LeftImp), i + 2);
                    i += 2;
                } else {
                    return parse_err("expected `->`", SourceSpan::new(i, i + 1));
                }
            }
            '>' if !ba => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'<') {
                    push(Tok::Binop(Connective::RightBiimp), i + 3);
                    i += 3;
                } else {
                    return parse_err("expected `>-<`", SourceSpan::new(i, i + 1));
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < bytes.len() {
                    let d = bytes[j] as char;
                    if d.is_ascii_alphanumeric() || d == '_' {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let word = &input[i..j];
                // `or>` is an operator, not an identifier.
                if !ba && word == "or" && bytes.get(j) == Some(&b'>') {
                    push(Tok::Binop(Connective::LeftOr), j + 1);
                    i = j + 1;
                    continue;
                }
                let tok = match word {
                    "T" => Tok::ConstT,
                    "F" => Tok::ConstF,
                    _ if c.is_ascii_lowercase() => {
                        if word
                            .chars()
                            .all(|d| d.is_ascii_lowercase() || d.is_ascii_digit() || d == '_')
                        {
                            Tok::Atom(word.to_string())
                        } else {
                            return parse_err(
                                format!("atom `{word}` must be all lowercase"),
                                SourceSpan::new(i, j),
                            );
                        }
                    }
                    _ => Tok::Var(word.to_string()),
                };
                push(tok, j);
                i = j;
            }
            _ => {
                return parse_err(format!("unexpected character `{c}`"), SourceSpan::new(i, i + 1))
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|s| s.span)
            .unwrap_or_else(|| SourceSpan::new(self.input_len, self.input_len))
    }

    fn bump(&mut self) -> Option<&Spanned> {
        let s = self.toks.get(self.pos);
        if s.is_some() {
            self.pos += 1;
        }
        s
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => parse_err(format!("expected {what}"), self.here()),
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let mut acc = self.binary()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            let rhs = self.binary()?;
            acc = seq_compose(acc, rhs);
        }
        Ok(acc)
    }

    fn binary(&mut self) -> Result<Term> {
        let lhs = self.cond()?;
        if let Some(Tok::Binop(op)) = self.peek() {
            let op = *op;
            self.pos += 1;
            let rhs = self.cond()?;
            if let Some(Tok::Binop(_)) = self.peek() {
                return parse_err(
                    "connectives do not chain; parenthesize one side",
                    self.here(),
                );
            }
            return Ok(apply_connective(op, lhs, rhs));
        }
        Ok(lhs)
    }

    fn cond(&mut self) -> Result<Term> {
        let left = self.unary()?;
        if self.peek() == Some(&Tok::CondOpen) {
            self.pos += 1;
            let ante = self.unary()?;
            self.expect(&Tok::CondClose, "`|>`")?;
            let right = self.unary()?;
            if self.peek() == Some(&Tok::CondOpen) {
                return parse_err(
                    "conditional composition is non-associative; parenthesize the nested conditional",
                    self.here(),
                );
            }
            return Ok(Term::cond(left, ante, right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Term> {
        if self.peek() == Some(&Tok::Tilde) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(negate(inner));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term> {
        let span = self.here();
        match self.bump().map(|s| s.tok.clone()) {
            Some(Tok::ConstT) => Ok(Term::True),
            Some(Tok::ConstF) => Ok(Term::False),
            Some(Tok::Atom(a)) => Ok(Term::Atom(a)),
            Some(Tok::Var(v)) => Ok(Term::Var(v)),
            Some(Tok::LParen) => {
                let t = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(other) => parse_err(format!("unexpected token {other:?}"), span),
            None => parse_err("unexpected end of input", span),
        }
    }

    fn ba_or(&mut self) -> Result<BATerm> {
        let mut acc = self.ba_and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let rhs = self.ba_and()?;
            acc = BATerm::or(acc, rhs);
        }
        Ok(acc)
    }

    fn ba_and(&mut self) -> Result<BATerm> {
        let mut acc = self.ba_unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.ba_unary()?;
            acc = BATerm::and(acc, rhs);
        }
        Ok(acc)
    }

    fn ba_unary(&mut self) -> Result<BATerm> {
        if self.peek() == Some(&Tok::Bang) {
            self.pos += 1;
            return Ok(BATerm::not(self.ba_unary()?));
        }
        let span = self.here();
        match self.bump().map(|s| s.tok.clone()) {
            Some(Tok::ConstT) => Ok(BATerm::True),
            Some(Tok::ConstF) => Ok(BATerm::False),
            Some(Tok::Atom(a)) => Ok(BATerm::Atom(a)),
            Some(Tok::Var(v)) => Ok(BATerm::Var(v)),
            Some(Tok::LParen) => {
                let t = self.ba_or()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(other) => parse_err(format!("unexpected token {other:?}"), span),
            None => parse_err("unexpected end of input", span),
        }
    }
}

/// Parses a term; when an alphabet is supplied, atoms outside it are
/// rejected.
///
/// ```
/// use seqprop::syntax::{parse_term, print_term};
///
/// let t = parse_term("~a ; X", None).unwrap();
/// assert_eq!(print_term(&t), "X <| (F <| a |> T) |> X");
/// ```
pub fn parse_term(input: &str, alphabet: Option<&Alphabet>) -> Result<Term> {
    let toks = lex(input, false)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        input_len: input.len(),
    };
    let t = p.expr()?;
    if p.pos != toks.len() {
        return parse_err("trailing input", p.here());
    }
    if let Some(al) = alphabet {
        al.check_term(&t)?;
    }
    Ok(t)
}

/// Canonical fully parenthesized form: leaves bare, every nested
/// conditional wrapped, single spaces, no sugar.
pub fn print_term(t: &Term) -> String {
    fn child(t: &Term, out: &mut String) {
        match t {
            Term::Cond(..) => {
                out.push('(');
                top(t, out);
                out.push(')');
            }
            _ => top(t, out),
        }
    }
    fn top(t: &Term, out: &mut String) {
        match t {
            Term::True => out.push('T'),
            Term::False => out.push('F'),
            Term::Atom(a) => out.push_str(a),
            Term::Var(v) => out.push_str(v),
            Term::Cond(l, c, r) => {
                child(l, out);
                out.push_str(" <| ");
                child(c, out);
                out.push_str(" |> ");
                child(r, out);
            }
        }
    }
    let mut out = String::new();
    top(t, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

pub fn parse_ba(input: &str) -> Result<BATerm> {
    let toks = lex(input, true)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        input_len: input.len(),
    };
    let t = p.ba_or()?;
    if p.pos != toks.len() {
        return parse_err("trailing input", p.here());
    }
    Ok(t)
}

/// Minimal-parentheses printer honoring `!` > `&` > `|` and left
/// associativity. Right-nested chains keep their parentheses so the output
/// reparses to the same tree.
pub fn print_ba(t: &BATerm) -> String {
    fn prec(t: &BATerm) -> u8 {
        match t {
            BATerm::Or(..) => 0,
            BATerm::And(..) => 1,
            BATerm::Not(..) => 2,
            _ => 3,
        }
    }
    fn go(t: &BATerm, min: u8, out: &mut String) {
        let p = prec(t);
        let paren = p < min;
        if paren {
            out.push('(');
        }
        match t {
            BATerm::True => out.push('T'),
            BATerm::False => out.push('F'),
            BATerm::Atom(a) => out.push_str(a),
            BATerm::Var(v) => out.push_str(v),
            BATerm::Not(x) => {
                out.push('!');
                go(x, 2, out);
            }
            BATerm::And(l, r) => {
                go(l, 1, out);
                out.push_str(" & ");
                go(r, 2, out);
            }
            BATerm::Or(l, r) => {
                go(l, 0, out);
                out.push_str(" | ");
                go(r, 1, out);
            }
        }
        if paren {
            out.push(')');
        }
    }
    let mut out = String::new();
    go(t, 0, &mut out);
    out
}

impl fmt::Display for BATerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_ba(self))
    }
}

//! ASCII concrete syntax and a pretty-printer that round-trips.
//!
//! ```text
//! formula := imp ('<->' imp)?
//! imp     := ior ('->' imp)?                    right associative
//! ior     := or ('ior' or)*                     left associative
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '~' unary | '?' unary | 'lam' term
//!          | ('forall' | 'exists' | 'iexists') var '.' unary
//!          | '[' var ']' unary
//!          | atom
//! atom    := 'bot' | '(' formula ')' | 'dep' '(' terms? ';' term ')'
//!          | Pred ('(' terms ')')? | term '=' term | term '!=' term
//! term    := var | fun ('(' terms ')')?
//! ```
//!
//! Quantifier prefixes bind as tightly as `~`, so `iexists z. z != y -> R`
//! reads as `(iexists z. z != y) -> R`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::syntax::{desugar_avoiding, Formula, Signature, Sugar, Term, Var, KEYWORDS};

/// Byte offsets into the input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    /// One-based line and column of `start`.
    pub fn line_col(&self, text: &str) -> (usize, usize) {
        let prefix = &text[..self.start.min(text.len())];
        let line = prefix.matches('\n').count() + 1;
        let col = prefix.len() - prefix.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSymbol(String),
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {}", describe(.kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub line: usize,
    pub column: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(m) => m.clone(),
        ParseErrorKind::UnknownSymbol(s) => format!("unknown symbol `{s}`"),
        ParseErrorKind::ArityMismatch {
            symbol,
            expected,
            found,
        } => format!("`{symbol}` expects {expected} arguments, found {found}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    Eq,
    Neq,
    Arrow,
    Iff,
    Amp,
    Pipe,
    Tilde,
    Question,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, (String, SourceSpan)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = |t: Tok| (t, 1);
        let (tok, len) = match c {
            b'(' => single(Tok::LParen),
            b')' => single(Tok::RParen),
            b'[' => single(Tok::LBracket),
            b']' => single(Tok::RBracket),
            b',' => single(Tok::Comma),
            b';' => single(Tok::Semi),
            b'.' => single(Tok::Dot),
            b'=' => single(Tok::Eq),
            b'&' => single(Tok::Amp),
            b'|' => single(Tok::Pipe),
            b'~' => single(Tok::Tilde),
            b'?' => single(Tok::Question),
            b'!' if bytes.get(i + 1) == Some(&b'=') => (Tok::Neq, 2),
            b'-' if bytes.get(i + 1) == Some(&b'>') => (Tok::Arrow, 2),
            b'<' if text[i..].starts_with("<->") => (Tok::Iff, 3),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                (Tok::Ident(text[i..j].to_string()), j - i)
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err((
                    format!("unexpected character `{ch}`"),
                    SourceSpan {
                        start,
                        end: start + ch.len_utf8(),
                    },
                ));
            }
        };
        i += len;
        out.push((tok, SourceSpan { start, end: i }));
    }
    out.push((
        Tok::Eof,
        SourceSpan {
            start: text.len(),
            end: text.len(),
        },
    ));
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    sig: &'a Signature,
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn err(&self, kind: ParseErrorKind, span: SourceSpan) -> ParseError {
        let (line, column) = span.line_col(self.text);
        ParseError {
            kind,
            span,
            line,
            column,
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<SourceSpan> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let found = match self.peek() {
            Tok::Eof => "end of input".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            _ => format!("`{}`", &self.text[self.span().start..self.span().end]),
        };
        self.err(
            ParseErrorKind::Syntax(format!("expected {what}, found {found}")),
            self.span(),
        )
    }

    fn formula(&mut self) -> PResult<Sugar> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Sugar::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Sugar> {
        let lhs = self.inquisitive_disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Sugar::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn inquisitive_disjunction(&mut self) -> PResult<Sugar> {
        let mut lhs = self.classical_disjunction()?;
        while self.is_keyword("ior") {
            self.bump();
            let rhs = self.classical_disjunction()?;
            lhs = Sugar::IDisj(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn classical_disjunction(&mut self) -> PResult<Sugar> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Sugar::COr(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Sugar> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Sugar::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn variable(&mut self) -> PResult<Var> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                if self.sig.is_symbol(&name) {
                    return Err(self.err(
                        ParseErrorKind::Syntax(format!("`{name}` is a symbol, not a variable")),
                        self.span(),
                    ));
                }
                self.bump();
                Ok(Var::new(&name))
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn unary(&mut self) -> PResult<Sugar> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Sugar::Not(Box::new(self.unary()?)))
            }
            Tok::Question => {
                self.bump();
                Ok(Sugar::QuestionMark(Box::new(self.unary()?)))
            }
            Tok::LBracket => {
                self.bump();
                let v = self.variable()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Sugar::RangeAll(v, Box::new(self.unary()?)))
            }
            Tok::Ident(kw) if matches!(kw.as_str(), "forall" | "exists" | "iexists") => {
                self.bump();
                let v = self.variable()?;
                self.expect(Tok::Dot, "`.` after the quantified variable")?;
                let body = Box::new(self.unary()?);
                Ok(match kw.as_str() {
                    "forall" => Sugar::ForAll(v, body),
                    "exists" => Sugar::CExists(v, body),
                    _ => Sugar::IExists(v, body),
                })
            }
            Tok::Ident(kw) if kw == "lam" => {
                self.bump();
                Ok(Sugar::ValueQuestion(self.term()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Sugar> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "bot" => {
                self.bump();
                Ok(Sugar::Core(Formula::Bot))
            }
            Tok::Ident(kw) if kw == "dep" => {
                self.bump();
                self.expect(Tok::LParen, "`(` after `dep`")?;
                let mut xs = Vec::new();
                if *self.peek() != Tok::Semi {
                    xs.push(self.term()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        xs.push(self.term()?);
                    }
                }
                self.expect(Tok::Semi, "`;` in dep(...)")?;
                let y = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Sugar::DepAtom(xs, y))
            }
            Tok::Ident(name) if self.sig.predicate_arity(&name).is_some() => {
                let span = self.bump().1;
                let args = if *self.peek() == Tok::LParen {
                    self.bump();
                    let args = self.term_list()?;
                    self.expect(Tok::RParen, "`)`")?;
                    args
                } else {
                    Vec::new()
                };
                let expected = self.sig.predicate_arity(&name).expect("checked");
                if expected != args.len() {
                    return Err(self.err(
                        ParseErrorKind::ArityMismatch {
                            symbol: name,
                            expected,
                            found: args.len(),
                        },
                        span,
                    ));
                }
                Ok(Sugar::Core(Formula::Atom(name, args)))
            }
            Tok::Ident(name)
                if !self.sig.is_symbol(&name)
                    && self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Tok::LParen) =>
            {
                Err(self.err(ParseErrorKind::UnknownSymbol(name), self.span()))
            }
            Tok::Ident(_) => {
                let lhs = self.term()?;
                match self.peek() {
                    Tok::Eq => {
                        self.bump();
                        let rhs = self.term()?;
                        Ok(Sugar::Core(Formula::Eq(lhs, rhs)))
                    }
                    Tok::Neq => {
                        self.bump();
                        let rhs = self.term()?;
                        Ok(Sugar::Not(Box::new(Sugar::Core(Formula::Eq(lhs, rhs)))))
                    }
                    _ => Err(self.unexpected("`=` or `!=`")),
                }
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn term_list(&mut self) -> PResult<Vec<Term>> {
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        Ok(args)
    }

    fn term(&mut self) -> PResult<Term> {
        let (tok, span) = (self.peek().clone(), self.span());
        let name = match tok {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => name,
            _ => return Err(self.unexpected("a term")),
        };
        if let Some(expected) = self.sig.function_arity(&name) {
            self.bump();
            let args = if *self.peek() == Tok::LParen {
                self.bump();
                let args = self.term_list()?;
                self.expect(Tok::RParen, "`)`")?;
                args
            } else {
                Vec::new()
            };
            if expected != args.len() {
                return Err(self.err(
                    ParseErrorKind::ArityMismatch {
                        symbol: name,
                        expected,
                        found: args.len(),
                    },
                    span,
                ));
            }
            return Ok(Term::App(name, args));
        }
        if self.sig.predicate_arity(&name).is_some() {
            return Err(self.err(
                ParseErrorKind::Syntax(format!("predicate `{name}` used as a term")),
                span,
            ));
        }
        if self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Tok::LParen) {
            return Err(self.err(ParseErrorKind::UnknownSymbol(name), span));
        }
        self.bump();
        Ok(Term::Var(Var::new(&name)))
    }
}

/// Parses the surface syntax without expanding derived operators.
pub fn parse_sugar(text: &str, sig: &Signature) -> Result<Sugar, ParseError> {
    let toks = lex(text).map_err(|(msg, span)| {
        let (line, column) = span.line_col(text);
        ParseError {
            kind: ParseErrorKind::Syntax(msg),
            span,
            line,
            column,
        }
    })?;
    let mut p = Parser {
        text,
        sig,
        toks,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

/// Parses `text` into a core formula, expanding derived operators.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let sugar = parse_sugar(text, sig)?;
    let avoid: BTreeSet<String> = sig.functions().map(|(f, _)| f.to_string()).collect();
    Ok(desugar_avoiding(&sugar, &avoid))
}

pub fn render_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(v.name()),
        Term::App(f, args) => {
            out.push_str(f);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_term(out, a);
                }
                out.push(')');
            }
        }
    }
}

// Binding strength of the top-level constructor; higher binds tighter.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::IDisj(..) => 2,
        Formula::And(..) => 4,
        Formula::ForAll(..) | Formula::IExists(..) | Formula::RangeAll(..) => 5,
        Formula::Atom(..) | Formula::Eq(..) | Formula::Bot => 6,
    }
}

/// Canonical text of a core formula; `parse(render(phi))` reproduces `phi`.
pub fn render(phi: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, phi);
    s
}

fn write_child(out: &mut String, f: &Formula, parens: bool) {
    if parens {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_formula(out: &mut String, phi: &Formula) {
    match phi {
        Formula::Atom(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_term(out, a);
                }
                out.push(')');
            }
        }
        Formula::Eq(a, b) => {
            write_term(out, a);
            out.push_str(" = ");
            write_term(out, b);
        }
        Formula::Bot => out.push_str("bot"),
        Formula::And(a, b) | Formula::IDisj(a, b) => {
            let lv = level(phi);
            write_child(out, a, level(a) < lv);
            out.push_str(if lv == 4 { " & " } else { " ior " });
            write_child(out, b, level(b) <= lv);
        }
        Formula::Implies(a, b) => {
            write_child(out, a, level(a) <= 1);
            out.push_str(" -> ");
            write_child(out, b, level(b) < 1);
        }
        Formula::ForAll(x, body) | Formula::IExists(x, body) => {
            let kw = if matches!(phi, Formula::ForAll(..)) {
                "forall"
            } else {
                "iexists"
            };
            let _ = write!(out, "{kw} {x}. ");
            write_child(out, body, level(body) < 5);
        }
        Formula::RangeAll(x, body) => {
            let _ = write!(out, "[{x}]");
            let parens = level(body) < 5;
            if !parens && !matches!(**body, Formula::RangeAll(..)) {
                out.push(' ');
            }
            write_child(out, body, parens);
        }
    }
}

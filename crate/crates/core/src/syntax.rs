//! Concrete syntax for terms, equation systems, truncations, atom sets and
//! permutations.
//!
//! ```text
//! program ::= "rec" "{" (name "=" expr) ";" ... "}" "in" expr  |  expr
//! expr    ::= ident | "_" | op | op "(" arg "," ... ")" | "(" expr ")"
//! arg     ::= [ident ... "."] expr
//! ```
//!
//! When the signature is one of the λ-calculus signatures the sugar
//! `\x. e` for `λ(x. e)` and juxtaposition `e1 e2` for `@(e1, e2)` is also
//! accepted, and the printer uses it.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::nominal::{Atom, Permutation, SupportSet};
use crate::signature::{Signature, APP, LAMBDA};
use crate::term::{check_arity, Expr, FiniteTerm, Op, TermEnv, TermError};

/// Bidirectional map between identifiers and atoms. Atoms are numbered in
/// order of first mention; atoms without a name (such as fresh atoms made by
/// substitution) print as `v<id>`, primed if that name is taken.
#[derive(Debug, Clone, Default)]
pub struct Symbols {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl Symbols {
    pub fn new() -> Symbols {
        Symbols::default()
    }

    pub fn intern(&mut self, name: &str) -> Atom {
        if let Some(a) = self.index.get(name) {
            return *a;
        }
        let a = Atom::new(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), a);
        a
    }

    pub fn lookup(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, a: Atom) -> String {
        if let Some(n) = self.names.get(a.id() as usize) {
            return n.clone();
        }
        let mut name = format!("v{}", a.id());
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        name
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// An error with the source position it refers to.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    fn new(pos: Pos, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Semi,
    Eq,
    Backslash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Backslash => f.write_str("`\\`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const PUNCT: &str = "(){},.;=\\";

fn lex(src: &str) -> Vec<(Tok, Pos)> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            // comment to end of line
            while chars.peek().is_some_and(|c| *c != '\n') {
                chars.next();
            }
            continue;
        }
        if let Some(i) = PUNCT.find(c) {
            chars.next();
            col += 1;
            let tok = [
                Tok::LParen,
                Tok::RParen,
                Tok::LBrace,
                Tok::RBrace,
                Tok::Comma,
                Tok::Dot,
                Tok::Semi,
                Tok::Eq,
                Tok::Backslash,
            ][PUNCT[..i].chars().count()]
            .clone();
            out.push((tok, pos));
            continue;
        }
        let mut ident = String::new();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() || PUNCT.contains(c) || c == '#' {
                break;
            }
            ident.push(c);
            chars.next();
            col += 1;
        }
        out.push((Tok::Ident(ident), pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    out
}

/// Positions of the equation names of a parsed program.
pub type SourceMap = HashMap<String, Pos>;

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    sig: &'a Signature,
    symbols: &'a mut Symbols,
    names: HashSet<String>,
    sugar: bool,
}

fn reserved(s: &str) -> bool {
    matches!(s, "rec" | "in" | "_")
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, Diagnostic> {
        let (t, pos) = self.next();
        if t == tok {
            Ok(pos)
        } else {
            Err(Diagnostic::new(pos, format!("expected {tok}, found {t}")))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), Diagnostic> {
        match self.next() {
            (Tok::Ident(s), pos) => Ok((s, pos)),
            (t, pos) => Err(Diagnostic::new(pos, format!("expected an identifier, found {t}"))),
        }
    }

    fn binder(&mut self) -> Result<Atom, Diagnostic> {
        let (name, pos) = self.ident()?;
        if reserved(&name) || self.sig.constructor(&name).is_some() || self.names.contains(&name) {
            return Err(Diagnostic::new(pos, format!("`{name}` cannot be used as a binder")));
        }
        Ok(self.symbols.intern(&name))
    }

    fn program(&mut self) -> Result<(TermEnv, SourceMap), Diagnostic> {
        let mut equations = Vec::new();
        let mut map = SourceMap::new();
        if self.peek() == &Tok::Ident("rec".into()) {
            self.next();
            self.expect(Tok::LBrace)?;
            // Names are collected first so that equations may refer forward.
            let mut i = self.at;
            let mut depth = 0usize;
            loop {
                match &self.toks[i].0 {
                    Tok::LBrace | Tok::LParen => depth += 1,
                    Tok::RParen => depth = depth.saturating_sub(1),
                    Tok::RBrace if depth == 0 => break,
                    Tok::RBrace => depth -= 1,
                    Tok::Ident(s) if depth == 0 && self.toks[i + 1].0 == Tok::Eq => {
                        self.names.insert(s.clone());
                    }
                    Tok::Eof => break,
                    _ => {}
                }
                i += 1;
            }
            while self.peek() != &Tok::RBrace {
                let (name, pos) = self.ident()?;
                if reserved(&name) || self.sig.constructor(&name).is_some() {
                    return Err(Diagnostic::new(pos, format!("`{name}` cannot name an equation")));
                }
                if map.insert(name.clone(), pos).is_some() {
                    return Err(Diagnostic::new(pos, format!("name `{name}` is defined twice")));
                }
                self.expect(Tok::Eq)?;
                let body = self.expr()?;
                equations.push((name, body));
                if self.peek() == &Tok::Semi {
                    self.next();
                } else if self.peek() != &Tok::RBrace {
                    let (t, pos) = self.next();
                    return Err(Diagnostic::new(pos, format!("expected `;` or `}}`, found {t}")));
                }
            }
            self.expect(Tok::RBrace)?;
            let (kw, pos) = self.ident()?;
            if kw != "in" {
                return Err(Diagnostic::new(pos, format!("expected `in`, found `{kw}`")));
            }
        }
        let root = self.expr()?;
        match self.next() {
            (Tok::Eof, _) => Ok((TermEnv::new(equations, root), map)),
            (t, pos) => Err(Diagnostic::new(pos, format!("unexpected {t}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        if !self.sugar {
            return self.atom();
        }
        if self.peek() == &Tok::Backslash {
            return self.lambda();
        }
        let mut head = self.atom()?;
        loop {
            match self.peek() {
                Tok::Backslash => {
                    let arg = self.lambda()?;
                    return Ok(app(head, arg));
                }
                Tok::Ident(s) if s != "in" => {}
                Tok::LParen => {}
                _ => return Ok(head),
            }
            let arg = self.atom()?;
            head = app(head, arg);
        }
    }

    fn lambda(&mut self) -> Result<Expr, Diagnostic> {
        self.expect(Tok::Backslash)?;
        let mut binders = vec![self.binder()?];
        while self.peek() != &Tok::Dot {
            binders.push(self.binder()?);
        }
        self.expect(Tok::Dot)?;
        let body = self.expr()?;
        Ok(binders
            .into_iter()
            .rev()
            .fold(body, |b, x| Expr::cons(LAMBDA, vec![(vec![x], b)])))
    }

    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let (tok, pos) = self.next();
        match tok {
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => self.named(name, pos),
            t => Err(Diagnostic::new(pos, format!("expected a term, found {t}"))),
        }
    }

    fn named(&mut self, name: String, pos: Pos) -> Result<Expr, Diagnostic> {
        if name == "_" {
            return Ok(Expr::Hole);
        }
        if reserved(&name) {
            return Err(Diagnostic::new(pos, format!("unexpected keyword `{name}`")));
        }
        if self.names.contains(&name) {
            return Ok(Expr::Ref(name));
        }
        let Some(c) = self.sig.constructor(&name) else {
            return Ok(Expr::Var(self.symbols.intern(&name)));
        };
        let specs = c.args.clone();
        let mut args = Vec::new();
        if self.peek() == &Tok::LParen {
            self.next();
            if self.peek() != &Tok::RParen {
                loop {
                    args.push(self.arg()?);
                    if self.peek() == &Tok::Comma {
                        self.next();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen)?;
        }
        let err = |e: TermError| Diagnostic::new(pos, e.to_string());
        check_arity(&name, specs.iter().map(|a| a.binders), args.iter().map(|(b, _)| b.len())).map_err(err)?;
        Ok(Expr::Cons(Op::from(name.as_str()), args))
    }

    fn arg(&mut self) -> Result<(Vec<Atom>, Expr), Diagnostic> {
        let mut i = self.at;
        while matches!(self.toks[i].0, Tok::Ident(_)) {
            i += 1;
        }
        let mut binders = Vec::new();
        if i > self.at && self.toks[i].0 == Tok::Dot {
            while self.peek() != &Tok::Dot {
                binders.push(self.binder()?);
            }
            self.next();
        }
        Ok((binders, self.expr()?))
    }
}

fn app(f: Expr, a: Expr) -> Expr {
    Expr::cons(APP, vec![(vec![], f), (vec![], a)])
}

/// Parses a program, checking constructor names and arities. Guardedness is
/// not checked here; see [`load`].
pub fn parse(src: &str, sig: &Signature, symbols: &mut Symbols) -> Result<(TermEnv, SourceMap), Diagnostic> {
    let mut p = Parser {
        toks: lex(src),
        at: 0,
        sig,
        symbols,
        names: HashSet::new(),
        sugar: sig.lambda_modes().is_some(),
    };
    p.program()
}

/// Parses a program and checks that it denotes a term: no holes, every name
/// defined, and every recursive cycle guarded.
pub fn load(src: &str, sig: &Signature, symbols: &mut Symbols) -> Result<TermEnv, Diagnostic> {
    let (env, map) = parse(src, sig, symbols)?;
    env.check(sig).map_err(|e| {
        let pos = match &e {
            TermError::Unguarded(cycle) => map.get(&cycle[0]).copied(),
            TermError::DuplicateName(n) | TermError::UndefinedName(n) => map.get(n).copied(),
            _ => None,
        };
        Diagnostic::new(pos.unwrap_or(Pos { line: 1, col: 1 }), e.to_string())
    })?;
    Ok(env)
}

/// Parses a finite term or truncation (holes allowed, no equations).
pub fn parse_finite(src: &str, sig: &Signature, symbols: &mut Symbols) -> Result<FiniteTerm, Diagnostic> {
    let (env, _) = parse(src, sig, symbols)?;
    if !env.equations.is_empty() {
        return Err(Diagnostic::new(Pos { line: 1, col: 1 }, "expected a finite term"));
    }
    Ok(env.root.to_finite().expect("no equations, so no names"))
}

/// Parses a product of cycles such as `(x y)(u v w)`; the rightmost cycle
/// acts first.
pub fn parse_permutation(src: &str, symbols: &mut Symbols) -> Result<Permutation, Diagnostic> {
    let toks = lex(src);
    let mut i = 0;
    let mut perm = Permutation::identity();
    let mut cycles = Vec::new();
    while toks[i].0 != Tok::Eof {
        if toks[i].0 != Tok::LParen {
            return Err(Diagnostic::new(toks[i].1, format!("expected `(`, found {}", toks[i].0)));
        }
        i += 1;
        let mut cycle = Vec::new();
        while let Tok::Ident(name) = &toks[i].0 {
            let a = symbols.intern(name);
            if cycle.contains(&a) {
                return Err(Diagnostic::new(toks[i].1, format!("`{name}` repeated in a cycle")));
            }
            cycle.push(a);
            i += 1;
        }
        if toks[i].0 != Tok::RParen {
            return Err(Diagnostic::new(toks[i].1, format!("expected `)`, found {}", toks[i].0)));
        }
        i += 1;
        cycles.push(cycle);
    }
    for cycle in cycles {
        perm = perm.compose(&cycle_perm(&cycle));
    }
    Ok(perm)
}

fn cycle_perm(cycle: &[Atom]) -> Permutation {
    let n = cycle.len();
    Permutation::from_pairs((0..n).map(|i| (cycle[i], cycle[(i + 1) % n])))
        .expect("a cycle of distinct atoms is a bijection")
}

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    Fun,
    Arg,
}

/// Renders terms in the concrete syntax; holes print as `_`.
pub struct Printer<'a> {
    symbols: &'a Symbols,
    sugar: bool,
}

impl<'a> Printer<'a> {
    pub fn new(symbols: &'a Symbols, sig: &Signature) -> Printer<'a> {
        Printer {
            symbols,
            sugar: sig.lambda_modes().is_some(),
        }
    }

    pub fn atom(&self, a: Atom) -> String {
        self.symbols.name(a)
    }

    /// Atom names in sorted order, as `{a, b}`.
    pub fn atoms(&self, s: &SupportSet) -> String {
        let mut names: Vec<String> = s.iter().map(|a| self.atom(a)).collect();
        names.sort();
        format!("{{{}}}", names.join(", "))
    }

    pub fn term(&self, t: &FiniteTerm) -> String {
        self.expr(&Expr::from(t))
    }

    pub fn expr(&self, e: &Expr) -> String {
        let mut out = String::new();
        self.write(e, Ctx::Top, &mut out);
        out
    }

    pub fn env(&self, env: &TermEnv) -> String {
        if env.equations.is_empty() {
            return self.expr(&env.root);
        }
        let eqs: Vec<String> = env
            .equations
            .iter()
            .map(|(n, e)| format!("{n} = {}", self.expr(e)))
            .collect();
        format!("rec {{ {} }} in {}", eqs.join("; "), self.expr(&env.root))
    }

    fn write(&self, e: &Expr, ctx: Ctx, out: &mut String) {
        match e {
            Expr::Var(a) => out.push_str(&self.atom(*a)),
            Expr::Ref(n) => out.push_str(n),
            Expr::Hole => out.push('_'),
            Expr::Cons(op, args) if self.sugar && &**op == LAMBDA && args.len() == 1 && args[0].0.len() == 1 => {
                let paren = ctx != Ctx::Top;
                if paren {
                    out.push('(');
                }
                out.push('\\');
                out.push_str(&self.atom(args[0].0[0]));
                out.push_str(". ");
                self.write(&args[0].1, Ctx::Top, out);
                if paren {
                    out.push(')');
                }
            }
            Expr::Cons(op, args)
                if self.sugar && &**op == APP && args.len() == 2 && args.iter().all(|(b, _)| b.is_empty()) =>
            {
                let paren = ctx == Ctx::Arg;
                if paren {
                    out.push('(');
                }
                self.write(&args[0].1, Ctx::Fun, out);
                out.push(' ');
                self.write(&args[1].1, Ctx::Arg, out);
                if paren {
                    out.push(')');
                }
            }
            Expr::Cons(op, args) => {
                out.push_str(op);
                if args.is_empty() {
                    return;
                }
                out.push('(');
                for (i, (bs, body)) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    if !bs.is_empty() {
                        let names: Vec<String> = bs.iter().map(|b| self.atom(*b)).collect();
                        out.push_str(&names.join(" "));
                        out.push_str(". ");
                    }
                    self.write(body, Ctx::Top, out);
                }
                out.push(')');
            }
        }
    }
}

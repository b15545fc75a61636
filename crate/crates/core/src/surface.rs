//! Concrete syntax: lexer, parser, numeral desugaring and name resolution.
//!
//! ```text
//! file    ::= item*                          -- an item starts at column 1
//! item    ::= IDENT ':' expr ('=' expr)?     -- signature, optionally with a body
//!           | IDENT '=' expr
//! expr    ::= lam | arrow ('::' expr)?
//! lam     ::= ('\' | 'λ' | 'fun') binder+ ('.' | '=>') expr
//! binder  ::= IDENT | '_'
//! arrow   ::= ('(' IDENT+ ':' expr ')')+ ('->' | '→') rhs
//!           | plus (('->' | '→') rhs)?
//! rhs     ::= lam | arrow
//! plus    ::= app ('+' NUMBER)*
//! app     ::= atom+
//! atom    ::= IDENT | NUMBER | '?' | 'Type' NUMBER | '(' expr ')'
//! ```
//!
//! `--` starts a comment. Builtins (`Nat`, `Zero`, `Succ`, `Vec`, `Nil`, `Cons`, `Eq`,
//! `Refl`, `natElim`, `vecElim`, `eqElim`) are reserved words. A signature line followed
//! by a definition of the same name is also accepted. Declarations are inlined at use
//! sites; an annotated declaration `x : T = t` inlines as `(t :: T)`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Builtin, Hint, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A parse diagnostic; line and column start at 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: u32,
    pub column: u32,
}

impl Diagnostic {
    fn error(pos: Pos, message: impl Into<String>) -> Diagnostic {
        Diagnostic { severity: Severity::Error, message: message.into(), line: pos.line, column: pos.col }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.column, sev, self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Lambda,
    Fun,
    Dot,
    FatArrow,
    Arrow,
    DColon,
    Colon,
    Equals,
    Question,
    Plus,
    TypeKw,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Lambda => "`\\`".into(),
            Tok::Fun => "`fun`".into(),
            Tok::Dot => "`.`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DColon => "`::`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Question => "`?`".into(),
            Tok::Plus => "`+`".into(),
            Tok::TypeKw => "`Type`".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, Diagnostic> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let mut adv = 1;
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '-' if chars.get(i + 1) == Some(&'-') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
                continue;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, pos));
                adv = 2;
            }
            '→' => out.push((Tok::Arrow, pos)),
            '=' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::FatArrow, pos));
                adv = 2;
            }
            '=' => out.push((Tok::Equals, pos)),
            ':' if chars.get(i + 1) == Some(&':') => {
                out.push((Tok::DColon, pos));
                adv = 2;
            }
            ':' => out.push((Tok::Colon, pos)),
            '(' => out.push((Tok::LParen, pos)),
            ')' => out.push((Tok::RParen, pos)),
            '\\' | 'λ' => out.push((Tok::Lambda, pos)),
            '.' => out.push((Tok::Dot, pos)),
            '?' => out.push((Tok::Question, pos)),
            '+' => out.push((Tok::Plus, pos)),
            c if c.is_ascii_digit() => {
                let mut j = i;
                let mut n: u64 = 0;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(chars[j] as u64 - '0' as u64))
                        .ok_or_else(|| Diagnostic::error(pos, "numeral too large"))?;
                    j += 1;
                }
                out.push((Tok::Num(n), pos));
                adv = j - i;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "fun" => Tok::Fun,
                    "Type" => Tok::TypeKw,
                    _ => Tok::Ident(word),
                };
                out.push((tok, pos));
                adv = j - i;
            }
            c => return Err(Diagnostic::error(pos, format!("unexpected character `{c}`"))),
        }
        i += adv;
        col += adv as u32;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Named syntax tree

/// Parsed expression with names still attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String, Pos),
    Num(u64),
    Lam(Vec<String>, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    /// Dependent arrow with one binder.
    Pi(String, Box<Expr>, Box<Expr>),
    /// Non-dependent arrow.
    Arrow(Box<Expr>, Box<Expr>),
    Type(u32),
    Unknown,
    Ascribe(Box<Expr>, Box<Expr>),
    Builtin(Builtin),
    /// `e + k` for a literal `k`.
    Plus(Box<Expr>, u64),
}

/// Replaces numerals and `+ k` by `Succ` chains ending in `Zero`.
pub fn desugar_numerals(e: Expr) -> Expr {
    fn succs(mut e: Expr, k: u64) -> Expr {
        for _ in 0..k {
            e = Expr::App(Box::new(Expr::Builtin(Builtin::Succ)), Box::new(e));
        }
        e
    }
    match e {
        Expr::Num(n) => succs(Expr::Builtin(Builtin::Zero), n),
        Expr::Plus(e, k) => succs(desugar_numerals(*e), k),
        Expr::Lam(xs, b) => Expr::Lam(xs, Box::new(desugar_numerals(*b))),
        Expr::App(f, a) => Expr::App(Box::new(desugar_numerals(*f)), Box::new(desugar_numerals(*a))),
        Expr::Pi(x, a, b) => Expr::Pi(x, Box::new(desugar_numerals(*a)), Box::new(desugar_numerals(*b))),
        Expr::Arrow(a, b) => Expr::Arrow(Box::new(desugar_numerals(*a)), Box::new(desugar_numerals(*b))),
        Expr::Ascribe(t, ty) => {
            Expr::Ascribe(Box::new(desugar_numerals(*t)), Box::new(desugar_numerals(*ty)))
        }
        e @ (Expr::Var(..) | Expr::Type(_) | Expr::Unknown | Expr::Builtin(_)) => e,
    }
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    /// Index of the first token of the current item; later column-1 tokens end it.
    item_start: usize,
    end: Pos,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn new(toks: Vec<(Tok, Pos)>) -> Parser {
        let end = toks.last().map_or(Pos { line: 1, col: 1 }, |t| t.1);
        Parser { toks, i: 0, item_start: 0, end }
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        let j = self.i + k;
        let (t, p) = self.toks.get(j)?;
        if j > self.item_start && p.col == 1 {
            None
        } else {
            Some(t)
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.peek_at(0)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.1)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        self.i += 1;
        t
    }

    fn unexpected<T>(&self, what: &str) -> PResult<T> {
        match self.peek() {
            Some(t) => Err(Diagnostic::error(self.pos(), format!("expected {what}, found {}", t.describe()))),
            None => Err(Diagnostic::error(self.pos(), format!("expected {what}, found end of item"))),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(what)
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                if Builtin::from_name(&s).is_some() {
                    return Err(Diagnostic::error(self.pos(), format!("`{s}` is a reserved word")));
                }
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("a name"),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        if matches!(self.peek(), Some(Tok::Lambda | Tok::Fun)) {
            return self.lam();
        }
        let t = self.arrow()?;
        if self.peek() == Some(&Tok::DColon) {
            self.bump();
            let ty = self.expr()?;
            return Ok(Expr::Ascribe(Box::new(t), Box::new(ty)));
        }
        Ok(t)
    }

    fn lam(&mut self) -> PResult<Expr> {
        self.bump();
        let mut xs = vec![self.ident()?];
        while let Some(Tok::Ident(_)) = self.peek() {
            xs.push(self.ident()?);
        }
        match self.peek() {
            Some(Tok::Dot | Tok::FatArrow) => {
                self.bump();
            }
            _ => return self.unexpected("`.` or `=>` after lambda binders"),
        }
        let body = self.expr()?;
        Ok(Expr::Lam(xs, Box::new(body)))
    }

    fn rhs(&mut self) -> PResult<Expr> {
        if matches!(self.peek(), Some(Tok::Lambda | Tok::Fun)) {
            self.lam()
        } else {
            self.arrow()
        }
    }

    /// Length of a `(x y : ` prefix at offset `k`, if there is one.
    fn binder_group_at(&self, k: usize) -> Option<usize> {
        if self.peek_at(k) != Some(&Tok::LParen) {
            return None;
        }
        let mut j = k + 1;
        while let Some(Tok::Ident(_)) = self.peek_at(j) {
            j += 1;
        }
        (j > k + 1 && self.peek_at(j) == Some(&Tok::Colon)).then_some(j - k)
    }

    fn arrow(&mut self) -> PResult<Expr> {
        if self.binder_group_at(0).is_some() {
            let mut groups = Vec::new();
            while self.binder_group_at(0).is_some() {
                let open = self.pos();
                self.bump();
                let mut xs = Vec::new();
                while let Some(Tok::Ident(_)) = self.peek() {
                    xs.push(self.ident()?);
                }
                self.bump(); // ':'
                let dom = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Diagnostic::error(open, "unbalanced `(` in binder"));
                }
                self.bump();
                groups.push((xs, dom));
            }
            self.expect(Tok::Arrow, "`->` after binder")?;
            let mut body = self.rhs()?;
            for (xs, dom) in groups.into_iter().rev() {
                for x in xs.into_iter().rev() {
                    body = Expr::Pi(x, Box::new(dom.clone()), Box::new(body));
                }
            }
            return Ok(body);
        }
        let lhs = self.plus()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.rhs()?;
            return Ok(Expr::Arrow(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn plus(&mut self) -> PResult<Expr> {
        let mut e = self.app()?;
        while self.peek() == Some(&Tok::Plus) {
            self.bump();
            match self.peek() {
                Some(Tok::Num(k)) => {
                    let k = *k;
                    self.bump();
                    e = Expr::Plus(Box::new(e), k);
                }
                _ => return self.unexpected("a numeral after `+`"),
            }
        }
        Ok(e)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(_) | Tok::Num(_) | Tok::Question | Tok::TypeKw) => true,
            Some(Tok::LParen) => self.binder_group_at(0).is_none(),
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Expr> {
        let mut e = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            e = Expr::App(Box::new(e), Box::new(a));
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.bump();
                Ok(match Builtin::from_name(&s) {
                    Some(b) => Expr::Builtin(b),
                    None => Expr::Var(s, pos),
                })
            }
            Some(Tok::Num(n)) => {
                let n = *n;
                self.bump();
                Ok(Expr::Num(n))
            }
            Some(Tok::Question) => {
                self.bump();
                Ok(Expr::Unknown)
            }
            Some(Tok::TypeKw) => {
                self.bump();
                match self.peek() {
                    Some(Tok::Num(0)) => Err(Diagnostic::error(self.pos(), "universe levels start at 1")),
                    Some(Tok::Num(n)) => {
                        let n = *n;
                        let lvl = u32::try_from(n)
                            .map_err(|_| Diagnostic::error(self.pos(), "universe level too large"))?;
                        self.bump();
                        Ok(Expr::Type(lvl))
                    }
                    _ => self.unexpected("a level after `Type`"),
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return match self.peek() {
                        Some(t) => Err(Diagnostic::error(
                            self.pos(),
                            format!("expected `)` to close `(` at {}:{}, found {}", pos.line, pos.col, t.describe()),
                        )),
                        None => Err(Diagnostic::error(pos, "unbalanced `(`")),
                    };
                }
                self.bump();
                Ok(e)
            }
            Some(Tok::RParen) => Err(Diagnostic::error(pos, "unbalanced `)`")),
            _ => self.unexpected("an expression"),
        }
    }

    fn at_end_of_item(&self) -> bool {
        self.peek().is_none()
    }

    fn trailing(&self) -> PResult<()> {
        if self.at_end_of_item() {
            Ok(())
        } else if self.peek() == Some(&Tok::RParen) {
            Err(Diagnostic::error(self.pos(), "unbalanced `)`"))
        } else {
            self.unexpected("end of item")
        }
    }
}

// ---------------------------------------------------------------------------
// Files

/// A top-level declaration after inlining earlier declarations.
#[derive(Clone, Debug)]
pub struct Decl {
    pub name: String,
    pub ty: Option<Term>,
    pub body: Term,
    pub line: u32,
    pub column: u32,
}

impl Decl {
    /// The closed term substituted at use sites.
    pub fn inlined(&self) -> Term {
        match &self.ty {
            Some(ty) => Term::ascribe(self.body.clone(), ty.clone()),
            None => self.body.clone(),
        }
    }
}

/// A parsed program.
#[derive(Clone, Debug)]
pub struct SourceFile {
    pub path: String,
    pub decls: Vec<Decl>,
    /// The `main` declaration, if any (also present in `decls`).
    pub main: Option<Decl>,
}

struct Resolver<'a> {
    decls: &'a BTreeMap<String, Term>,
}

impl Resolver<'_> {
    fn resolve(&self, e: &Expr, scope: &mut Vec<String>) -> PResult<Term> {
        match e {
            Expr::Var(x, pos) => {
                if x == "_" {
                    return Err(Diagnostic::error(*pos, "`_` cannot be referenced"));
                }
                if let Some(k) = scope.iter().rev().position(|y| y == x) {
                    return Ok(Term::Var(k));
                }
                match self.decls.get(x) {
                    Some(t) => Ok(t.clone()),
                    None => Err(Diagnostic::error(*pos, format!("unbound variable `{x}`"))),
                }
            }
            Expr::Num(n) => Ok(Term::numeral(*n)),
            Expr::Plus(e, k) => {
                let mut t = self.resolve(e, scope)?;
                for _ in 0..*k {
                    t = Term::Prim(Builtin::Succ, vec![t]);
                }
                Ok(t)
            }
            Expr::Lam(xs, b) => {
                for x in xs {
                    scope.push(x.clone());
                }
                let r = self.resolve(b, scope);
                scope.truncate(scope.len() - xs.len());
                let mut t = r?;
                for x in xs.iter().rev() {
                    t = Term::Lam(Hint::new(x), Box::new(t));
                }
                Ok(t)
            }
            Expr::Pi(x, a, b) => {
                let a = self.resolve(a, scope)?;
                scope.push(x.clone());
                let b = self.resolve(b, scope);
                scope.pop();
                Ok(Term::Pi(Hint::new(x), Box::new(a), Box::new(b?)))
            }
            Expr::Arrow(a, b) => {
                let a = self.resolve(a, scope)?;
                scope.push(String::from("_"));
                let b = self.resolve(b, scope);
                scope.pop();
                Ok(Term::Pi(Hint::new("_"), Box::new(a), Box::new(b?)))
            }
            Expr::Type(i) => Ok(Term::Type(*i)),
            Expr::Unknown => Ok(Term::Unknown),
            Expr::Ascribe(t, ty) => Ok(Term::ascribe(self.resolve(t, scope)?, self.resolve(ty, scope)?)),
            Expr::Builtin(b) => Ok(Term::Prim(*b, Vec::new())),
            Expr::App(..) => {
                let mut args = Vec::new();
                let mut head = e;
                while let Expr::App(f, a) = head {
                    args.push(a.as_ref());
                    head = f;
                }
                args.reverse();
                let mut rest = args.into_iter();
                let mut t = match head {
                    Expr::Builtin(b) => {
                        let mut xs = Vec::new();
                        for a in rest.by_ref().take(b.arity()) {
                            xs.push(self.resolve(a, scope)?);
                        }
                        Term::Prim(*b, xs)
                    }
                    h => self.resolve(h, scope)?,
                };
                for a in rest {
                    t = Term::app(t, self.resolve(a, scope)?);
                }
                Ok(t)
            }
        }
    }
}

/// Parses one expression whose free variables are `scope` (outermost first).
pub fn parse_term(src: &str, scope: &[&str]) -> Result<Term, Vec<Diagnostic>> {
    let e = parse_expr(src)?;
    let decls = BTreeMap::new();
    let mut sc: Vec<String> = scope.iter().map(|s| s.to_string()).collect();
    Resolver { decls: &decls }.resolve(&desugar_numerals(e), &mut sc).map_err(|d| vec![d])
}

/// Parses one expression without resolving names.
pub fn parse_expr(src: &str) -> Result<Expr, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser::new(toks);
    // A lone expression is one item regardless of layout.
    p.item_start = usize::MAX;
    let run = |p: &mut Parser| -> PResult<Expr> {
        let e = p.expr()?;
        if p.i < p.toks.len() {
            return if p.peek() == Some(&Tok::RParen) {
                Err(Diagnostic::error(p.pos(), "unbalanced `)`"))
            } else {
                p.unexpected("end of input")
            };
        }
        Ok(e)
    };
    let r = run(&mut p);
    r.map_err(|d| vec![d])
}

/// Parses a whole program.
pub fn parse_file(path: &str, src: &str) -> Result<SourceFile, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser::new(toks);
    let mut decls: Vec<Decl> = Vec::new();
    let mut env: BTreeMap<String, Term> = BTreeMap::new();
    let mut pending_sig: Option<(String, Expr, Pos)> = None;
    let mut diags = Vec::new();

    while p.i < p.toks.len() {
        p.item_start = p.i;
        let item_pos = p.pos();
        let r = (|| -> PResult<Option<(String, Option<Expr>, Expr, Pos)>> {
            if item_pos.col != 1 {
                return Err(Diagnostic::error(item_pos, "declarations must start at column 1"));
            }
            let name = p.ident()?;
            match p.peek() {
                Some(Tok::Colon) => {
                    p.bump();
                    let ty = p.expr()?;
                    if p.peek() == Some(&Tok::Equals) {
                        p.bump();
                        let body = p.expr()?;
                        p.trailing()?;
                        Ok(Some((name, Some(ty), body, item_pos)))
                    } else {
                        p.trailing()?;
                        if let Some((prev, _, pos)) = &pending_sig {
                            return Err(Diagnostic::error(*pos, format!("signature for `{prev}` has no definition")));
                        }
                        pending_sig = Some((name, ty, item_pos));
                        Ok(None)
                    }
                }
                Some(Tok::Equals) => {
                    p.bump();
                    let body = p.expr()?;
                    p.trailing()?;
                    let ty = match pending_sig.take() {
                        Some((sig_name, ty, _)) if sig_name == name => Some(ty),
                        Some((sig_name, _, pos)) => {
                            return Err(Diagnostic::error(
                                pos,
                                format!("signature for `{sig_name}` is not followed by its definition"),
                            ))
                        }
                        None => None,
                    };
                    Ok(Some((name, ty, body, item_pos)))
                }
                _ => p.unexpected("`:` or `=` after declaration name"),
            }
        })();
        match r {
            Ok(None) => {}
            Ok(Some((name, ty, body, pos))) => {
                if env.contains_key(&name) {
                    diags.push(Diagnostic::error(pos, format!("duplicate declaration `{name}`")));
                    continue;
                }
                let res = Resolver { decls: &env };
                let ty = match ty.map(|t| res.resolve(&desugar_numerals(t), &mut Vec::new())).transpose() {
                    Ok(t) => t,
                    Err(d) => {
                        diags.push(d);
                        continue;
                    }
                };
                let body = match res.resolve(&desugar_numerals(body), &mut Vec::new()) {
                    Ok(t) => t,
                    Err(d) => {
                        diags.push(d);
                        continue;
                    }
                };
                let decl = Decl { name: name.clone(), ty, body, line: pos.line, column: pos.col };
                env.insert(name, decl.inlined());
                decls.push(decl);
            }
            Err(d) => {
                diags.push(d);
                // Skip to the next item.
                p.i += 1;
                while p.i < p.toks.len() && p.toks[p.i].1.col != 1 {
                    p.i += 1;
                }
            }
        }
    }
    if let Some((name, _, pos)) = pending_sig {
        diags.push(Diagnostic::error(pos, format!("signature for `{name}` has no definition")));
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let main = decls.iter().find(|d| d.name == "main").cloned();
    Ok(SourceFile { path: path.to_string(), decls, main })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(src: &str) -> Term {
        parse_term(src, &[]).unwrap()
    }

    #[test]
    fn lambda_forms() {
        let a = t("\\x. x x");
        assert_eq!(a, Term::lam("x", Term::app(Term::var(0), Term::var(0))));
        assert_eq!(t("fun x => x x"), a);
        assert_eq!(t("λx. x x"), a);
    }

    #[test]
    fn head_of_nil_shape() {
        let r = parse_term("head Nat 0 ((Nil Nat) :: Vec Nat ?)", &["head"]).unwrap();
        let expected = Term::apps(
            Term::var(0),
            [
                Term::nat(),
                Term::numeral(0),
                Term::ascribe(
                    Term::prim(Builtin::Nil, vec![Term::nat()]),
                    Term::prim(Builtin::Vec, vec![Term::nat(), Term::Unknown]),
                ),
            ],
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn type_zero_is_rejected() {
        let d = parse_term("Type 0", &[]).unwrap_err();
        assert_eq!((d[0].line, d[0].column), (1, 6));
    }

    #[test]
    fn numerals_desugar() {
        assert_eq!(t("2"), Term::numeral(2));
        assert_eq!(t("0"), Term::numeral(0));
        assert_eq!(t("Succ 1"), Term::numeral(2));
        assert_eq!(desugar_numerals(Expr::Num(1)), Expr::App(
            Box::new(Expr::Builtin(Builtin::Succ)),
            Box::new(Expr::Builtin(Builtin::Zero))
        ));
    }

    #[test]
    fn plus_is_succ_sugar() {
        assert_eq!(parse_term("n + 2", &["n"]).unwrap(), Term::prim(Builtin::Succ, vec![Term::prim(Builtin::Succ, vec![Term::var(0)])]));
    }

    #[test]
    fn arrows_and_ascription_precedence() {
        // `::` binds loosest and `->` associates to the right.
        let r = t("Nat -> Nat -> Nat :: Type 1");
        let arrow = Term::arrow(Term::nat(), Term::arrow(Term::nat(), Term::nat()));
        assert_eq!(r, Term::ascribe(arrow, Term::Type(1)));
        let dep = t("(A : Type 1) (x : A) -> A");
        assert_eq!(dep, Term::pi("A", Term::Type(1), Term::pi("x", Term::var(0), Term::var(1))));
        assert_eq!(t("(A B : Type 1) -> A"), Term::pi("A", Term::Type(1), Term::pi("B", Term::Type(1), Term::var(1))));
    }

    #[test]
    fn builtins_saturate_then_apply() {
        let r = parse_term("Succ n m", &["n", "m"]).unwrap();
        assert_eq!(r, Term::app(Term::prim(Builtin::Succ, vec![Term::var(1)]), Term::var(0)));
        assert_eq!(t("Cons Nat"), Term::prim(Builtin::Cons, vec![Term::nat()]));
    }

    #[test]
    fn diagnostics_for_bad_input() {
        assert!(parse_term("(x", &["x"]).is_err());
        assert!(parse_term("x)", &["x"]).is_err());
        assert!(parse_term("y", &["x"]).is_err());
        assert!(parse_term("x # y", &["x", "y"]).is_err());
        assert!(parse_term("Type", &[]).is_err());
    }

    #[test]
    fn file_items_and_inlining() {
        let src = "-- identity\nid : (A : Type 1) -> A -> A\nid = \\A x. x\n\nmain = id Nat\n  3\n";
        let f = parse_file("t.gdtl", src).unwrap();
        assert_eq!(f.decls.len(), 2);
        let main = f.main.unwrap();
        assert_eq!((main.line, main.column), (5, 1));
        let id = f.decls[0].inlined();
        assert_eq!(main.body, Term::apps(id, [Term::nat(), Term::numeral(3)]));
    }

    #[test]
    fn file_errors_carry_positions() {
        let e = parse_file("t.gdtl", "a = 1\nb = c\n").unwrap_err();
        assert_eq!((e[0].line, e[0].column), (2, 5));
        let e = parse_file("t.gdtl", "a = 1\na = 2\n").unwrap_err();
        assert!(e[0].message.contains("duplicate"));
        let e = parse_file("t.gdtl", "a : Nat\n").unwrap_err();
        assert!(e[0].message.contains("no definition"));
    }
}

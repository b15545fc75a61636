//! Pretty-printing in the surface syntax.
//!
//! Terms print in a form the parser reads back alpha-equal. Canonical forms print the
//! same way, optionally with arrow levels (`->[1]`, `->[ω]`). Evidence terms print
//! evidence as `⟨U⟩ e` and the error term as `err`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::syntax::{Builtin, Canonical, Elim, EvTerm, Hint, Level, Term};

/// Words that can never be binder names.
pub const KEYWORDS: &[&str] = &[
    "fun", "Type", "Nat", "Zero", "Succ", "Vec", "Nil", "Cons", "Eq", "Refl", "natElim", "vecElim",
    "eqElim",
];

enum Doc {
    Var(usize),
    Lam(Hint, Box<Doc>),
    App(Box<Doc>, Box<Doc>),
    /// binder, domain, level (printed only in verbose mode), codomain, codomain uses binder
    Pi(Hint, Box<Doc>, Option<Level>, Box<Doc>, bool),
    Type(u32),
    Unknown,
    Ascribe(Box<Doc>, Box<Doc>),
    Prim(Builtin, Vec<Doc>),
    Num(u64),
    Ev(Box<Doc>, Box<Doc>),
    Err,
}

fn prim_doc(b: Builtin, args: Vec<Doc>) -> Doc {
    match (b, args.as_slice()) {
        (Builtin::Zero, []) => Doc::Num(0),
        (Builtin::Succ, [Doc::Num(n)]) => Doc::Num(n + 1),
        _ => Doc::Prim(b, args),
    }
}

fn term_doc(t: &Term) -> Doc {
    match t {
        Term::Var(i) => Doc::Var(*i),
        Term::Lam(h, b) => Doc::Lam(h.clone(), Box::new(term_doc(b))),
        Term::App(f, a) => Doc::App(Box::new(term_doc(f)), Box::new(term_doc(a))),
        Term::Pi(h, a, b) => {
            Doc::Pi(h.clone(), Box::new(term_doc(a)), None, Box::new(term_doc(b)), b.mentions(0))
        }
        Term::Type(i) => Doc::Type(*i),
        Term::Unknown => Doc::Unknown,
        Term::Ascribe(t, ty) => Doc::Ascribe(Box::new(term_doc(t)), Box::new(term_doc(ty))),
        Term::Prim(b, args) => prim_doc(*b, args.iter().map(term_doc).collect()),
    }
}

fn canonical_doc(c: &Canonical, verbose: bool) -> Doc {
    match c {
        Canonical::Lam(h, b) => Doc::Lam(h.clone(), Box::new(canonical_doc(b, verbose))),
        Canonical::Pi(h, a, l, b) => Doc::Pi(
            h.clone(),
            Box::new(canonical_doc(a, verbose)),
            if verbose { Some(*l) } else { None },
            Box::new(canonical_doc(b, verbose)),
            b.mentions(0),
        ),
        Canonical::Type(i) => Doc::Type(*i),
        Canonical::Unknown => Doc::Unknown,
        Canonical::Neutral(h, sp) => sp.iter().fold(Doc::Var(*h), |acc, e| match e {
            Elim::App(a) => Doc::App(Box::new(acc), Box::new(canonical_doc(a, verbose))),
            Elim::Frame(k, args) => {
                let mut all: Vec<Doc> = args.iter().map(|a| canonical_doc(a, verbose)).collect();
                all.push(acc);
                Doc::Prim(*k, all)
            }
        }),
        Canonical::Con(b, args) => prim_doc(*b, args.iter().map(|a| canonical_doc(a, verbose)).collect()),
    }
}

fn ev_doc(e: &EvTerm) -> Doc {
    match e {
        EvTerm::Var(i) => Doc::Var(*i),
        EvTerm::Lam(h, b) => Doc::Lam(h.clone(), Box::new(ev_doc(b))),
        EvTerm::App(f, a) => Doc::App(Box::new(ev_doc(f)), Box::new(ev_doc(a))),
        EvTerm::Pi(h, a, b) => {
            Doc::Pi(h.clone(), Box::new(ev_doc(a)), None, Box::new(ev_doc(b)), b.mentions(0))
        }
        EvTerm::Type(i) => Doc::Type(*i),
        EvTerm::Unknown => Doc::Unknown,
        EvTerm::Prim(b, args) => prim_doc(*b, args.iter().map(ev_doc).collect()),
        EvTerm::Ev(w, e) => Doc::Ev(Box::new(canonical_doc(&w.0, false)), Box::new(ev_doc(e))),
        EvTerm::Err(_) => Doc::Err,
    }
}

fn doc_mentions(d: &Doc, ix: usize) -> bool {
    match d {
        Doc::Var(i) => *i == ix,
        Doc::Lam(_, b) => doc_mentions(b, ix + 1),
        Doc::App(f, a) | Doc::Ascribe(f, a) | Doc::Ev(f, a) => doc_mentions(f, ix) || doc_mentions(a, ix),
        Doc::Pi(_, a, _, b, _) => doc_mentions(a, ix) || doc_mentions(b, ix + 1),
        Doc::Prim(_, args) => args.iter().any(|a| doc_mentions(a, ix)),
        Doc::Type(_) | Doc::Unknown | Doc::Num(_) | Doc::Err => false,
    }
}

// Precedence: 0 any, 1 no lambda/ascription, 2 application, 3 atom.
struct Printer {
    names: Vec<String>,
    out: String,
}

impl Printer {
    fn bind(&mut self, hint: &Hint, used: bool) -> String {
        let base = match hint.as_str() {
            "_" if used => "x",
            "_" => return String::from("_"),
            "" => "x",
            s => s,
        };
        let mut avoid: Vec<&str> = self.names.iter().map(String::as_str).collect();
        avoid.extend_from_slice(KEYWORDS);
        crate::syntax::fresh_name(base, &avoid)
    }

    fn name(&self, i: usize) -> String {
        if i < self.names.len() {
            self.names[self.names.len() - 1 - i].clone()
        } else {
            format!("#{}", i - self.names.len())
        }
    }

    fn open(&mut self, need: bool) {
        if need {
            self.out.push('(');
        }
    }

    fn close(&mut self, need: bool) {
        if need {
            self.out.push(')');
        }
    }

    fn print(&mut self, d: &Doc, prec: u8) {
        match d {
            Doc::Var(i) => {
                let n = self.name(*i);
                self.out.push_str(&n);
            }
            Doc::Num(n) => {
                let _ = write!(self.out, "{n}");
            }
            Doc::Unknown => self.out.push('?'),
            Doc::Err => self.out.push_str("err"),
            Doc::Type(i) => {
                self.open(prec > 2);
                let _ = write!(self.out, "Type {i}");
                self.close(prec > 2);
            }
            Doc::Lam(..) => {
                self.open(prec > 0);
                self.out.push('\\');
                let mut cur = d;
                let mut pushed = 0;
                let mut first = true;
                while let Doc::Lam(h, b) = cur {
                    let name = self.bind(h, doc_mentions(b, 0));
                    if !first {
                        self.out.push(' ');
                    }
                    first = false;
                    self.out.push_str(&name);
                    self.names.push(name);
                    pushed += 1;
                    cur = b;
                }
                self.out.push_str(". ");
                self.print(cur, 0);
                self.names.truncate(self.names.len() - pushed);
                self.close(prec > 0);
            }
            Doc::Pi(h, a, l, b, dep) => {
                self.open(prec > 1);
                let arrow = match l {
                    None => String::from("->"),
                    Some(l) => format!("->[{l}]"),
                };
                if *dep {
                    let name = self.bind(h, true);
                    let _ = write!(self.out, "({name} : ");
                    self.print(a, 0);
                    let _ = write!(self.out, ") {arrow} ");
                    self.names.push(name);
                } else {
                    self.print(a, 2);
                    let _ = write!(self.out, " {arrow} ");
                    self.names.push(String::from("_"));
                }
                self.print(b, 1);
                self.names.pop();
                self.close(prec > 1);
            }
            Doc::App(f, a) => {
                self.open(prec > 2);
                self.print(f, 2);
                self.out.push(' ');
                self.print(a, 3);
                self.close(prec > 2);
            }
            Doc::Prim(b, args) => {
                if args.is_empty() {
                    self.out.push_str(b.name());
                } else {
                    self.open(prec > 2);
                    self.out.push_str(b.name());
                    for a in args {
                        self.out.push(' ');
                        self.print(a, 3);
                    }
                    self.close(prec > 2);
                }
            }
            Doc::Ascribe(t, ty) => {
                self.open(prec > 0);
                self.print(t, 1);
                self.out.push_str(" :: ");
                self.print(ty, 0);
                self.close(prec > 0);
            }
            Doc::Ev(w, e) => {
                self.open(prec > 2);
                self.out.push('⟨');
                self.print(w, 0);
                self.out.push_str("⟩ ");
                self.print(e, 3);
                self.close(prec > 2);
            }
        }
    }
}

fn render(d: &Doc, names: &[String]) -> String {
    let mut p = Printer { names: names.to_vec(), out: String::new() };
    p.print(d, 0);
    p.out
}

/// Prints a term; `names` lists the free variables outermost first.
pub fn term(t: &Term, names: &[String]) -> String {
    render(&term_doc(t), names)
}

/// Prints a canonical form without level annotations.
pub fn canonical(c: &Canonical, names: &[String]) -> String {
    render(&canonical_doc(c, false), names)
}

/// Prints a canonical form with every arrow's level annotation.
pub fn canonical_verbose(c: &Canonical, names: &[String]) -> String {
    render(&canonical_doc(c, true), names)
}

/// Prints an evidence term.
pub fn evterm(e: &EvTerm, names: &[String]) -> String {
    render(&ev_doc(e), names)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term(self, &[]))
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.alternate() {
            f.write_str(&canonical_verbose(self, &[]))
        } else {
            f.write_str(&canonical(self, &[]))
        }
    }
}

impl fmt::Display for EvTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&evterm(self, &[]))
    }
}

impl fmt::Display for crate::syntax::Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.0)
    }
}

/// Names helper for tests and callers holding `&str`s.
pub fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

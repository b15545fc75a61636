//! Syntax trees: surface terms, canonical forms, evidence terms and typing contexts.
//!
//! All binders are nameless (de Bruijn indices, 0 = innermost). Binder names survive
//! only as [`Hint`]s for printing, and hints never take part in equality, so the
//! derived `PartialEq` on every tree is alpha-equivalence.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Printing hint for a binder. Compares equal to every other hint.
#[derive(Clone)]
pub struct Hint(Arc<str>);

impl Hint {
    pub fn new(name: &str) -> Hint {
        Hint(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Hint {
    fn from(s: &str) -> Hint {
        Hint::new(s)
    }
}

/// Universe level annotation on arrows. `Omega` sits above every integer level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Int(u32),
    Omega,
}

impl Level {
    pub fn max(self, other: Level) -> Level {
        core::cmp::max(self, other)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Int(i) => write!(f, "{i}"),
            Level::Omega => f.write_str("ω"),
        }
    }
}

/// Builtin inductive constructors and eliminators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Nat,
    Zero,
    Succ,
    Vec,
    Nil,
    Cons,
    Eq,
    Refl,
    NatElim,
    VecElim,
    EqElim,
}

impl Builtin {
    pub const ALL: [Builtin; 11] = [
        Builtin::Nat,
        Builtin::Zero,
        Builtin::Succ,
        Builtin::Vec,
        Builtin::Nil,
        Builtin::Cons,
        Builtin::Eq,
        Builtin::Refl,
        Builtin::NatElim,
        Builtin::VecElim,
        Builtin::EqElim,
    ];

    pub fn arity(self) -> usize {
        match self {
            Builtin::Nat | Builtin::Zero => 0,
            Builtin::Succ | Builtin::Nil => 1,
            Builtin::Vec | Builtin::Refl => 2,
            Builtin::Eq => 3,
            Builtin::Cons | Builtin::NatElim => 4,
            Builtin::VecElim | Builtin::EqElim => 6,
        }
    }

    pub fn is_elim(self) -> bool {
        matches!(self, Builtin::NatElim | Builtin::VecElim | Builtin::EqElim)
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Nat => "Nat",
            Builtin::Zero => "Zero",
            Builtin::Succ => "Succ",
            Builtin::Vec => "Vec",
            Builtin::Nil => "Nil",
            Builtin::Cons => "Cons",
            Builtin::Eq => "Eq",
            Builtin::Refl => "Refl",
            Builtin::NatElim => "natElim",
            Builtin::VecElim => "vecElim",
            Builtin::EqElim => "eqElim",
        }
    }

    pub fn from_name(s: &str) -> Option<Builtin> {
        Builtin::ALL.iter().copied().find(|b| b.name() == s)
    }
}

/// Surface term after name resolution.
///
/// `Prim(b, args)` is a builtin applied to at most `b.arity()` arguments; fewer than the
/// arity is an under-applied builtin, which the typechecker rejects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Lam(Hint, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pi(Hint, Box<Term>, Box<Term>),
    Type(u32),
    Unknown,
    Ascribe(Box<Term>, Box<Term>),
    Prim(Builtin, Vec<Term>),
}

/// Canonical (beta-normal, eta-long) forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canonical {
    Lam(Hint, Box<Canonical>),
    Pi(Hint, Box<Canonical>, Level, Box<Canonical>),
    Type(u32),
    Unknown,
    /// A variable head applied to a spine of eliminations.
    Neutral(usize, Vec<Elim>),
    /// A fully applied constructor (never an eliminator).
    Con(Builtin, Vec<Canonical>),
}

/// One entry of a spine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elim {
    App(Canonical),
    /// An eliminator missing its scrutinee, which is the spine so far.
    Frame(Builtin, Vec<Canonical>),
}

/// A canonical type witnessing a consistency judgment at runtime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence(pub Canonical);

/// The pair of evidence types whose meet failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeetFailure {
    pub left: Canonical,
    pub right: Canonical,
}

/// Runtime terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvTerm {
    Var(usize),
    Lam(Hint, Box<EvTerm>),
    App(Box<EvTerm>, Box<EvTerm>),
    Pi(Hint, Box<EvTerm>, Box<EvTerm>),
    Type(u32),
    Unknown,
    Prim(Builtin, Vec<EvTerm>),
    Ev(Evidence, Box<EvTerm>),
    Err(Box<MeetFailure>),
}

// ---------------------------------------------------------------------------
// Constructors

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn lam(h: &str, body: Term) -> Term {
        Term::Lam(Hint::new(h), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn pi(h: &str, a: Term, b: Term) -> Term {
        Term::Pi(Hint::new(h), Box::new(a), Box::new(b))
    }

    /// Non-dependent arrow; shifts the codomain under the new binder.
    pub fn arrow(a: Term, b: Term) -> Term {
        Term::pi("_", a, b.shift(1, 0))
    }

    pub fn ascribe(t: Term, ty: Term) -> Term {
        Term::Ascribe(Box::new(t), Box::new(ty))
    }

    pub fn nat() -> Term {
        Term::Prim(Builtin::Nat, Vec::new())
    }

    pub fn numeral(n: u64) -> Term {
        let mut t = Term::Prim(Builtin::Zero, Vec::new());
        for _ in 0..n {
            t = Term::Prim(Builtin::Succ, alloc::vec![t]);
        }
        t
    }

    pub fn prim(b: Builtin, args: Vec<Term>) -> Term {
        Term::Prim(b, args)
    }
}

impl Canonical {
    pub fn lam(h: &str, body: Canonical) -> Canonical {
        Canonical::Lam(Hint::new(h), Box::new(body))
    }

    pub fn pi(h: &str, a: Canonical, l: Level, b: Canonical) -> Canonical {
        Canonical::Pi(Hint::new(h), Box::new(a), l, Box::new(b))
    }

    /// Non-dependent arrow at level `l`; shifts the codomain under the new binder.
    pub fn arrow(a: Canonical, l: Level, b: Canonical) -> Canonical {
        Canonical::pi("_", a, l, b.shift(1, 0))
    }

    pub fn var(i: usize) -> Canonical {
        Canonical::Neutral(i, Vec::new())
    }

    pub fn nat() -> Canonical {
        Canonical::Con(Builtin::Nat, Vec::new())
    }

    pub fn zero() -> Canonical {
        Canonical::Con(Builtin::Zero, Vec::new())
    }

    pub fn succ(n: Canonical) -> Canonical {
        Canonical::Con(Builtin::Succ, alloc::vec![n])
    }

    pub fn numeral(n: u64) -> Canonical {
        let mut c = Canonical::zero();
        for _ in 0..n {
            c = Canonical::succ(c);
        }
        c
    }

    pub fn vec(a: Canonical, n: Canonical) -> Canonical {
        Canonical::Con(Builtin::Vec, alloc::vec![a, n])
    }

    pub fn nil(a: Canonical) -> Canonical {
        Canonical::Con(Builtin::Nil, alloc::vec![a])
    }

    pub fn cons(a: Canonical, n: Canonical, h: Canonical, t: Canonical) -> Canonical {
        Canonical::Con(Builtin::Cons, alloc::vec![a, n, h, t])
    }

    pub fn eq(a: Canonical, x: Canonical, y: Canonical) -> Canonical {
        Canonical::Con(Builtin::Eq, alloc::vec![a, x, y])
    }

    pub fn refl(a: Canonical, x: Canonical) -> Canonical {
        Canonical::Con(Builtin::Refl, alloc::vec![a, x])
    }

    /// `Type i`, or `?` for the unknown level.
    pub fn universe(l: Level) -> Canonical {
        match l {
            Level::Int(i) => Canonical::Type(i),
            Level::Omega => Canonical::Unknown,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Canonical::Unknown)
    }

    pub fn is_pi(&self) -> bool {
        matches!(self, Canonical::Pi(..))
    }

    /// Reads a natural-number literal, if this is one.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut cur = self;
        loop {
            match cur {
                Canonical::Con(Builtin::Zero, _) => return Some(n),
                Canonical::Con(Builtin::Succ, a) => {
                    n += 1;
                    cur = &a[0];
                }
                _ => return None,
            }
        }
    }
}

impl EvTerm {
    pub fn ev(w: Canonical, e: EvTerm) -> EvTerm {
        EvTerm::Ev(Evidence(w), Box::new(e))
    }

    pub fn app(f: EvTerm, a: EvTerm) -> EvTerm {
        EvTerm::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: EvTerm, args: impl IntoIterator<Item = EvTerm>) -> EvTerm {
        args.into_iter().fold(f, EvTerm::app)
    }

    pub fn lam(h: Hint, body: EvTerm) -> EvTerm {
        EvTerm::Lam(h, Box::new(body))
    }

    /// The term under at most one layer of evidence.
    pub fn strip_ev(&self) -> &EvTerm {
        match self {
            EvTerm::Ev(_, e) => e,
            e => e,
        }
    }
}

// ---------------------------------------------------------------------------
// Shifting, substitution, occurrence

fn shift_ix(i: usize, by: isize, cutoff: usize) -> usize {
    if i >= cutoff {
        let j = i as isize + by;
        debug_assert!(j >= 0, "negative de Bruijn index after shift");
        j as usize
    } else {
        i
    }
}

impl Term {
    /// Adds `by` to every free index `>= cutoff`.
    pub fn shift(&self, by: isize, cutoff: usize) -> Term {
        if by == 0 {
            return self.clone();
        }
        match self {
            Term::Var(i) => Term::Var(shift_ix(*i, by, cutoff)),
            Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.shift(by, cutoff + 1))),
            Term::App(f, a) => Term::app(f.shift(by, cutoff), a.shift(by, cutoff)),
            Term::Pi(h, a, b) => Term::Pi(
                h.clone(),
                Box::new(a.shift(by, cutoff)),
                Box::new(b.shift(by, cutoff + 1)),
            ),
            Term::Type(i) => Term::Type(*i),
            Term::Unknown => Term::Unknown,
            Term::Ascribe(t, ty) => Term::ascribe(t.shift(by, cutoff), ty.shift(by, cutoff)),
            Term::Prim(b, args) => Term::Prim(*b, args.iter().map(|a| a.shift(by, cutoff)).collect()),
        }
    }

    /// Replaces index `depth` by `v` (given relative to depth 0) and lowers higher indices.
    pub fn subst(&self, depth: usize, v: &Term) -> Term {
        match self {
            Term::Var(i) => {
                if *i == depth {
                    v.shift(depth as isize, 0)
                } else if *i > depth {
                    Term::Var(i - 1)
                } else {
                    Term::Var(*i)
                }
            }
            Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.subst(depth + 1, v))),
            Term::App(f, a) => Term::app(f.subst(depth, v), a.subst(depth, v)),
            Term::Pi(h, a, b) => Term::Pi(
                h.clone(),
                Box::new(a.subst(depth, v)),
                Box::new(b.subst(depth + 1, v)),
            ),
            Term::Type(i) => Term::Type(*i),
            Term::Unknown => Term::Unknown,
            Term::Ascribe(t, ty) => Term::ascribe(t.subst(depth, v), ty.subst(depth, v)),
            Term::Prim(b, args) => Term::Prim(*b, args.iter().map(|a| a.subst(depth, v)).collect()),
        }
    }

    pub fn mentions(&self, ix: usize) -> bool {
        match self {
            Term::Var(i) => *i == ix,
            Term::Lam(_, b) => b.mentions(ix + 1),
            Term::App(f, a) => f.mentions(ix) || a.mentions(ix),
            Term::Pi(_, a, b) => a.mentions(ix) || b.mentions(ix + 1),
            Term::Type(_) | Term::Unknown => false,
            Term::Ascribe(t, ty) => t.mentions(ix) || ty.mentions(ix),
            Term::Prim(_, args) => args.iter().any(|a| a.mentions(ix)),
        }
    }

    /// True when the term contains no `?`.
    pub fn is_static(&self) -> bool {
        match self {
            Term::Unknown => false,
            Term::Var(_) | Term::Type(_) => true,
            Term::Lam(_, b) => b.is_static(),
            Term::App(f, a) | Term::Pi(_, f, a) | Term::Ascribe(f, a) => f.is_static() && a.is_static(),
            Term::Prim(_, args) => args.iter().all(Term::is_static),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Term::Var(_) | Term::Type(_) | Term::Unknown => 0,
            Term::Lam(_, b) => b.size(),
            Term::App(f, a) | Term::Pi(_, f, a) | Term::Ascribe(f, a) => f.size() + a.size(),
            Term::Prim(_, args) => args.iter().map(Term::size).sum(),
        }
    }
}

impl Canonical {
    /// Adds `by` to every free index `>= cutoff`.
    pub fn shift(&self, by: isize, cutoff: usize) -> Canonical {
        if by == 0 {
            return self.clone();
        }
        match self {
            Canonical::Lam(h, b) => Canonical::Lam(h.clone(), Box::new(b.shift(by, cutoff + 1))),
            Canonical::Pi(h, a, l, b) => Canonical::Pi(
                h.clone(),
                Box::new(a.shift(by, cutoff)),
                *l,
                Box::new(b.shift(by, cutoff + 1)),
            ),
            Canonical::Type(i) => Canonical::Type(*i),
            Canonical::Unknown => Canonical::Unknown,
            Canonical::Neutral(h, sp) => Canonical::Neutral(
                shift_ix(*h, by, cutoff),
                sp.iter().map(|e| e.shift(by, cutoff)).collect(),
            ),
            Canonical::Con(b, args) => {
                Canonical::Con(*b, args.iter().map(|a| a.shift(by, cutoff)).collect())
            }
        }
    }

    pub fn mentions(&self, ix: usize) -> bool {
        match self {
            Canonical::Lam(_, b) => b.mentions(ix + 1),
            Canonical::Pi(_, a, _, b) => a.mentions(ix) || b.mentions(ix + 1),
            Canonical::Type(_) | Canonical::Unknown => false,
            Canonical::Neutral(h, sp) => *h == ix || sp.iter().any(|e| e.mentions(ix)),
            Canonical::Con(_, args) => args.iter().any(|a| a.mentions(ix)),
        }
    }

    /// True when the form contains no `?`.
    pub fn is_static(&self) -> bool {
        match self {
            Canonical::Unknown => false,
            Canonical::Type(_) => true,
            Canonical::Lam(_, b) => b.is_static(),
            Canonical::Pi(_, a, _, b) => a.is_static() && b.is_static(),
            Canonical::Neutral(_, sp) => sp.iter().all(|e| match e {
                Elim::App(a) => a.is_static(),
                Elim::Frame(_, args) => args.iter().all(Canonical::is_static),
            }),
            Canonical::Con(_, args) => args.iter().all(Canonical::is_static),
        }
    }

    /// Syntactic depth: leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Canonical::Type(_) | Canonical::Unknown => 0,
            Canonical::Lam(_, b) => 1 + b.depth(),
            Canonical::Pi(_, a, _, b) => 1 + a.depth().max(b.depth()),
            Canonical::Neutral(_, sp) => sp
                .iter()
                .map(|e| match e {
                    Elim::App(a) => 1 + a.depth(),
                    Elim::Frame(_, args) => 1 + args.iter().map(Canonical::depth).max().unwrap_or(0),
                })
                .max()
                .unwrap_or(0),
            Canonical::Con(_, args) if args.is_empty() => 0,
            Canonical::Con(_, args) => 1 + args.iter().map(Canonical::depth).max().unwrap_or(0),
        }
    }

    /// Replaces every arrow annotation by `l`.
    pub fn with_levels(&self, l: Level) -> Canonical {
        match self {
            Canonical::Lam(h, b) => Canonical::Lam(h.clone(), Box::new(b.with_levels(l))),
            Canonical::Pi(h, a, _, b) => {
                Canonical::Pi(h.clone(), Box::new(a.with_levels(l)), l, Box::new(b.with_levels(l)))
            }
            Canonical::Type(i) => Canonical::Type(*i),
            Canonical::Unknown => Canonical::Unknown,
            Canonical::Neutral(h, sp) => Canonical::Neutral(
                *h,
                sp.iter()
                    .map(|e| match e {
                        Elim::App(a) => Elim::App(a.with_levels(l)),
                        Elim::Frame(k, args) => {
                            Elim::Frame(*k, args.iter().map(|a| a.with_levels(l)).collect())
                        }
                    })
                    .collect(),
            ),
            Canonical::Con(b, args) => Canonical::Con(*b, args.iter().map(|a| a.with_levels(l)).collect()),
        }
    }

    /// Converts back to a surface term (dropping level annotations).
    pub fn to_term(&self) -> Term {
        match self {
            Canonical::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.to_term())),
            Canonical::Pi(h, a, _, b) => Term::Pi(h.clone(), Box::new(a.to_term()), Box::new(b.to_term())),
            Canonical::Type(i) => Term::Type(*i),
            Canonical::Unknown => Term::Unknown,
            Canonical::Neutral(h, sp) => sp.iter().fold(Term::Var(*h), |acc, e| match e {
                Elim::App(a) => Term::app(acc, a.to_term()),
                Elim::Frame(k, args) => {
                    let mut all: Vec<Term> = args.iter().map(Canonical::to_term).collect();
                    all.push(acc);
                    Term::Prim(*k, all)
                }
            }),
            Canonical::Con(b, args) => Term::Prim(*b, args.iter().map(Canonical::to_term).collect()),
        }
    }

    /// Checks that no spine is headed by a lambda; always true by construction of the type,
    /// kept as the structural validator for frames and constructor arities.
    pub fn validate(&self) -> bool {
        match self {
            Canonical::Lam(_, b) => b.validate(),
            Canonical::Pi(_, a, _, b) => a.validate() && b.validate(),
            Canonical::Type(i) => *i >= 1,
            Canonical::Unknown => true,
            Canonical::Neutral(_, sp) => sp.iter().all(|e| match e {
                Elim::App(a) => a.validate(),
                Elim::Frame(k, args) => {
                    k.is_elim() && args.len() + 1 == k.arity() && args.iter().all(Canonical::validate)
                }
            }),
            Canonical::Con(b, args) => {
                !b.is_elim() && args.len() == b.arity() && args.iter().all(Canonical::validate)
            }
        }
    }
}

impl Elim {
    pub fn shift(&self, by: isize, cutoff: usize) -> Elim {
        match self {
            Elim::App(a) => Elim::App(a.shift(by, cutoff)),
            Elim::Frame(k, args) => Elim::Frame(*k, args.iter().map(|a| a.shift(by, cutoff)).collect()),
        }
    }

    pub fn mentions(&self, ix: usize) -> bool {
        match self {
            Elim::App(a) => a.mentions(ix),
            Elim::Frame(_, args) => args.iter().any(|a| a.mentions(ix)),
        }
    }
}

impl EvTerm {
    pub fn shift(&self, by: isize, cutoff: usize) -> EvTerm {
        if by == 0 {
            return self.clone();
        }
        match self {
            EvTerm::Var(i) => EvTerm::Var(shift_ix(*i, by, cutoff)),
            EvTerm::Lam(h, b) => EvTerm::Lam(h.clone(), Box::new(b.shift(by, cutoff + 1))),
            EvTerm::App(f, a) => EvTerm::app(f.shift(by, cutoff), a.shift(by, cutoff)),
            EvTerm::Pi(h, a, b) => EvTerm::Pi(
                h.clone(),
                Box::new(a.shift(by, cutoff)),
                Box::new(b.shift(by, cutoff + 1)),
            ),
            EvTerm::Type(i) => EvTerm::Type(*i),
            EvTerm::Unknown => EvTerm::Unknown,
            EvTerm::Prim(b, args) => EvTerm::Prim(*b, args.iter().map(|a| a.shift(by, cutoff)).collect()),
            EvTerm::Ev(w, e) => EvTerm::Ev(Evidence(w.0.shift(by, cutoff)), Box::new(e.shift(by, cutoff))),
            EvTerm::Err(m) => EvTerm::Err(m.clone()),
        }
    }

    /// Whether index `ix` occurs free, in term position or inside evidence.
    pub fn mentions(&self, ix: usize) -> bool {
        match self {
            EvTerm::Var(i) => *i == ix,
            EvTerm::Lam(_, b) => b.mentions(ix + 1),
            EvTerm::App(f, a) => f.mentions(ix) || a.mentions(ix),
            EvTerm::Pi(_, a, b) => a.mentions(ix) || b.mentions(ix + 1),
            EvTerm::Type(_) | EvTerm::Unknown | EvTerm::Err(_) => false,
            EvTerm::Prim(_, args) => args.iter().any(|a| a.mentions(ix)),
            EvTerm::Ev(w, e) => w.0.mentions(ix) || e.mentions(ix),
        }
    }

    /// Whether index `ix` occurs free inside some evidence witness.
    pub fn evidence_mentions(&self, ix: usize) -> bool {
        match self {
            EvTerm::Var(_) | EvTerm::Type(_) | EvTerm::Unknown | EvTerm::Err(_) => false,
            EvTerm::Lam(_, b) => b.evidence_mentions(ix + 1),
            EvTerm::App(f, a) => f.evidence_mentions(ix) || a.evidence_mentions(ix),
            EvTerm::Pi(_, a, b) => a.evidence_mentions(ix) || b.evidence_mentions(ix + 1),
            EvTerm::Prim(_, args) => args.iter().any(|a| a.evidence_mentions(ix)),
            EvTerm::Ev(w, e) => w.0.mentions(ix) || e.evidence_mentions(ix),
        }
    }

    /// Removes all evidence, mapping `Err` to `?`.
    pub fn erase(&self) -> Term {
        match self {
            EvTerm::Var(i) => Term::Var(*i),
            EvTerm::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.erase())),
            EvTerm::App(f, a) => Term::app(f.erase(), a.erase()),
            EvTerm::Pi(h, a, b) => Term::Pi(h.clone(), Box::new(a.erase()), Box::new(b.erase())),
            EvTerm::Type(i) => Term::Type(*i),
            EvTerm::Unknown | EvTerm::Err(_) => Term::Unknown,
            EvTerm::Prim(b, args) => Term::Prim(*b, args.iter().map(EvTerm::erase).collect()),
            EvTerm::Ev(_, e) => e.erase(),
        }
    }

    /// Reads evidence back as ascriptions, so the normalizer can process runtime terms.
    pub fn to_term(&self) -> Term {
        match self {
            EvTerm::Var(i) => Term::Var(*i),
            EvTerm::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.to_term())),
            EvTerm::App(f, a) => Term::app(f.to_term(), a.to_term()),
            EvTerm::Pi(h, a, b) => Term::Pi(h.clone(), Box::new(a.to_term()), Box::new(b.to_term())),
            EvTerm::Type(i) => Term::Type(*i),
            EvTerm::Unknown | EvTerm::Err(_) => Term::Unknown,
            EvTerm::Prim(b, args) => Term::Prim(*b, args.iter().map(EvTerm::to_term).collect()),
            EvTerm::Ev(w, e) => Term::ascribe(e.to_term(), w.0.to_term()),
        }
    }

    pub fn size(&self) -> usize {
        1 + match self {
            EvTerm::Var(_) | EvTerm::Type(_) | EvTerm::Unknown | EvTerm::Err(_) => 0,
            EvTerm::Lam(_, b) | EvTerm::Ev(_, b) => b.size(),
            EvTerm::App(f, a) | EvTerm::Pi(_, f, a) => f.size() + a.size(),
            EvTerm::Prim(_, args) => args.iter().map(EvTerm::size).sum(),
        }
    }
}

/// Alpha-equivalence of canonical forms (structural equality on nameless syntax).
pub fn alpha_eq(a: &Canonical, b: &Canonical) -> bool {
    a == b
}

/// Primes `hint` until it avoids every name in `avoid`.
pub fn fresh_name(hint: &str, avoid: &[&str]) -> String {
    let mut name = String::from(hint);
    while avoid.contains(&name.as_str()) {
        name.push('\'');
    }
    name
}

// ---------------------------------------------------------------------------
// Contexts

struct Node {
    hint: Hint,
    ty: Canonical,
    len: usize,
    next: Option<Arc<Node>>,
}

/// Typing context; index 0 is the most recent binding. Cheap to clone and extend.
#[derive(Clone, Default)]
pub struct Context {
    head: Option<Arc<Node>>,
}

impl Context {
    pub fn new() -> Context {
        Context { head: None }
    }

    pub fn len(&self) -> usize {
        self.head.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_none()
    }

    /// Extends the context; `ty` is interpreted in the current context.
    pub fn push(&self, hint: Hint, ty: Canonical) -> Context {
        let len = self.len() + 1;
        Context { head: Some(Arc::new(Node { hint, ty, len, next: self.head.clone() })) }
    }

    /// Type of index `ix`, shifted into the current context.
    pub fn lookup(&self, ix: usize) -> Option<Canonical> {
        self.entry(ix).map(|(_, ty)| ty.shift(ix as isize + 1, 0))
    }

    /// Raw entry at index `ix`, with its type relative to the bindings before it.
    pub fn entry(&self, ix: usize) -> Option<(&Hint, &Canonical)> {
        let mut cur = self.head.as_deref();
        for _ in 0..ix {
            cur = cur?.next.as_deref();
        }
        cur.map(|n| (&n.hint, &n.ty))
    }

    /// Binder names, outermost first.
    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.head.as_deref();
        while let Some(n) = cur {
            out.push(String::from(n.hint.as_str()));
            cur = n.next.as_deref();
        }
        out.reverse();
        out
    }

    /// Bindings outermost first, each type relative to its own prefix.
    pub fn entries(&self) -> Vec<(Hint, Canonical)> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.head.as_deref();
        while let Some(n) = cur {
            out.push((n.hint.clone(), n.ty.clone()));
            cur = n.next.as_deref();
        }
        out.reverse();
        out
    }

    /// Builds a context from bindings given outermost first.
    pub fn from_entries(entries: impl IntoIterator<Item = (Hint, Canonical)>) -> Context {
        entries.into_iter().fold(Context::new(), |ctx, (h, ty)| ctx.push(h, ty))
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn alpha_eq_ignores_binder_names() {
        let a = Canonical::lam("x", Canonical::var(0));
        let b = Canonical::lam("y", Canonical::var(0));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&Canonical::Type(1), &Canonical::Type(2)));
        let p = Canonical::pi("x", Canonical::nat(), Level::Int(1), Canonical::nat());
        let q = Canonical::pi("y", Canonical::nat(), Level::Int(1), Canonical::nat());
        assert!(alpha_eq(&p, &q));
    }

    #[test]
    fn fresh_name_primes() {
        assert_eq!(fresh_name("x", &["x"]), "x'");
        assert_eq!(fresh_name("x", &[]), "x");
        assert_eq!(fresh_name("x", &["x", "x'"]), "x''");
    }

    #[test]
    fn context_lookup_shifts() {
        // (A : Type 1) (x : A): x has type A, which is index 1 seen from the top.
        let ctx = Context::new()
            .push(Hint::new("A"), Canonical::Type(1))
            .push(Hint::new("x"), Canonical::var(0));
        assert_eq!(ctx.lookup(0), Some(Canonical::var(1)));
        assert_eq!(ctx.lookup(1), Some(Canonical::Type(1)));
        assert_eq!(ctx.lookup(2), None);
        assert_eq!(ctx.names(), vec!["A", "x"]);
    }

    #[test]
    fn term_subst_lowers_outer_indices() {
        // (\y. x y z)[x := w] with z free at index 1 below x.
        let t = Term::lam("y", Term::apps(Term::var(1), [Term::var(0), Term::var(2)]));
        let r = t.subst(0, &Term::var(5));
        assert_eq!(r, Term::lam("y", Term::apps(Term::var(6), [Term::var(0), Term::var(1)])));
    }

    #[test]
    fn numerals_roundtrip() {
        assert_eq!(Canonical::numeral(3).as_numeral(), Some(3));
        assert_eq!(Canonical::nat().as_numeral(), None);
    }

    #[test]
    fn levels_order_omega_on_top() {
        assert!(Level::Int(1000) < Level::Omega);
        assert!(Level::Int(1) < Level::Int(2));
        assert_eq!(Level::Int(3).max(Level::Omega), Level::Omega);
    }
}

//! The static language: a dependently typed λ-calculus with universes and the data
//! constructors of the gradual language, but no `?` and no eliminators.
//!
//! Everything here is written without reference to the gradual engines so that it can
//! serve as the other side of differential tests: a bidirectional checker using plain
//! equality, a normalizer built on static hereditary substitution, and a small-step
//! evaluator that drops ascriptions. The untyped embedding and an independent untyped
//! evaluator over named terms live at the bottom.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::syntax::{Builtin, Canonical, Context, Elim, Hint, Level, Term};

/// Failure of the static checker, carrying a short description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticError(pub String);

type R<T> = Result<T, StaticError>;

fn fail<T>(msg: impl Into<String>) -> R<T> {
    Err(StaticError(msg.into()))
}

/// Budget for hereditary substitution; well-typed inputs never come close.
const SHSUB_BUDGET: u64 = 1_000_000;

// ---------------------------------------------------------------------------
// Static hereditary substitution

struct Shsub {
    budget: u64,
}

impl Shsub {
    fn tick(&mut self) -> R<()> {
        if self.budget == 0 {
            return fail("hereditary substitution did not terminate");
        }
        self.budget -= 1;
        Ok(())
    }

    /// Replaces index `d` of `target` by `v` (given at depth 0).
    fn go(&mut self, v: &Canonical, d: usize, target: &Canonical) -> R<Canonical> {
        self.tick()?;
        Ok(match target {
            Canonical::Lam(h, b) => Canonical::Lam(h.clone(), Box::new(self.go(v, d + 1, b)?)),
            Canonical::Pi(h, a, l, b) => {
                Canonical::Pi(h.clone(), Box::new(self.go(v, d, a)?), *l, Box::new(self.go(v, d + 1, b)?))
            }
            Canonical::Type(i) => Canonical::Type(*i),
            Canonical::Unknown => return fail("`?` in a static term"),
            Canonical::Con(b, args) => {
                Canonical::Con(*b, args.iter().map(|a| self.go(v, d, a)).collect::<R<_>>()?)
            }
            Canonical::Neutral(i, spine) => {
                let mut args = Vec::with_capacity(spine.len());
                for e in spine {
                    match e {
                        Elim::App(a) => args.push(self.go(v, d, a)?),
                        Elim::Frame(..) => return fail("eliminator in a static term"),
                    }
                }
                if *i == d {
                    let mut head = v.shift(d as isize, 0);
                    for a in args {
                        head = self.apply(head, a)?;
                    }
                    head
                } else {
                    let j = if *i > d { i - 1 } else { *i };
                    Canonical::Neutral(j, args.into_iter().map(Elim::App).collect())
                }
            }
        })
    }

    fn apply(&mut self, f: Canonical, a: Canonical) -> R<Canonical> {
        match f {
            Canonical::Lam(_, body) => self.go(&a, 0, &body),
            Canonical::Neutral(h, mut spine) => {
                spine.push(Elim::App(a));
                Ok(Canonical::Neutral(h, spine))
            }
            _ => fail("applying a non-function"),
        }
    }
}

/// Substitutes the canonical `v` for index 0 of `target`, contracting every redex this
/// creates. Index arithmetic matches ordinary substitution: free indices above 0 drop by one.
pub fn shsub(v: &Canonical, target: &Canonical) -> R<Canonical> {
    Shsub { budget: SHSUB_BUDGET }.go(v, 0, target)
}

fn sapp(f: &Canonical, a: &Canonical) -> R<Canonical> {
    Shsub { budget: SHSUB_BUDGET }.apply(f.clone(), a.clone())
}

/// η-long form of variable `x` applied to `spine` at type `ty`.
fn seta(x: usize, spine: Vec<Elim>, ty: &Canonical) -> Canonical {
    match ty {
        Canonical::Pi(h, a, _, b) => {
            let mut spine: Vec<Elim> = spine.iter().map(|e| e.shift(1, 0)).collect();
            spine.push(Elim::App(seta(0, Vec::new(), &a.shift(1, 0))));
            Canonical::Lam(h.clone(), Box::new(seta(x + 1, spine, b)))
        }
        _ => Canonical::Neutral(x, spine),
    }
}

// ---------------------------------------------------------------------------
// Checking and normalization

/// Types are compared without their level annotations.
fn same_type(a: &Canonical, b: &Canonical) -> bool {
    a.with_levels(Level::Omega) == b.with_levels(Level::Omega)
}

fn subsumes(actual: &Canonical, expected: &Canonical) -> bool {
    match (actual, expected) {
        (Canonical::Type(i), Canonical::Type(j)) => i <= j,
        _ => same_type(actual, expected),
    }
}

/// Synthesizes the type of `t` and computes its normal form.
pub fn snorm_synth(ctx: &Context, t: &Term) -> R<(Canonical, Canonical)> {
    match t {
        Term::Var(i) => {
            let ty = ctx.lookup(*i).ok_or_else(|| StaticError("unbound variable".to_string()))?;
            Ok((seta(*i, Vec::new(), &ty), ty))
        }
        Term::Type(i) => Ok((Canonical::Type(*i), Canonical::Type(i + 1))),
        Term::Unknown => fail("`?` in a static term"),
        Term::Lam(..) => fail("cannot infer the type of a function"),
        Term::Ascribe(e, ty) => {
            let (u, _) = stype(ctx, ty)?;
            let v = snorm_check(ctx, e, &u)?;
            Ok((v, u))
        }
        Term::Pi(..) => {
            let (u, l) = stype(ctx, t)?;
            Ok((u, universe(l)))
        }
        Term::App(f, a) => {
            let (vf, tf) = snorm_synth(ctx, f)?;
            let Canonical::Pi(_, dom, _, cod) = &tf else { return fail("applying a non-function") };
            let va = snorm_check(ctx, a, dom)?;
            Ok((sapp(&vf, &va)?, shsub(&va, cod)?))
        }
        Term::Prim(b, args) => sprim(ctx, *b, args),
    }
}

fn universe(l: Level) -> Canonical {
    match l {
        Level::Int(i) => Canonical::Type(i),
        Level::Omega => Canonical::Unknown,
    }
}

fn sprim(ctx: &Context, b: Builtin, args: &[Term]) -> R<(Canonical, Canonical)> {
    use Canonical as C;
    if args.len() != b.arity() {
        return fail("wrong number of arguments to a builtin");
    }
    let nat = C::Con(Builtin::Nat, Vec::new());
    let (vals, ty) = match b {
        Builtin::Nat => (vec![], C::Type(1)),
        Builtin::Zero => (vec![], nat),
        Builtin::Succ => (vec![snorm_check(ctx, &args[0], &nat)?], nat),
        Builtin::Vec => {
            let (a, l) = stype(ctx, &args[0])?;
            let n = snorm_check(ctx, &args[1], &nat)?;
            (vec![a, n], universe(l))
        }
        Builtin::Nil => {
            let (a, _) = stype(ctx, &args[0])?;
            let ty = C::Con(Builtin::Vec, vec![a.clone(), C::Con(Builtin::Zero, vec![])]);
            (vec![a], ty)
        }
        Builtin::Cons => {
            let (a, _) = stype(ctx, &args[0])?;
            let n = snorm_check(ctx, &args[1], &nat)?;
            let h = snorm_check(ctx, &args[2], &a)?;
            let t = snorm_check(ctx, &args[3], &C::Con(Builtin::Vec, vec![a.clone(), n.clone()]))?;
            let ty = C::Con(Builtin::Vec, vec![a.clone(), C::Con(Builtin::Succ, vec![n.clone()])]);
            (vec![a, n, h, t], ty)
        }
        Builtin::Eq => {
            let (a, l) = stype(ctx, &args[0])?;
            let x = snorm_check(ctx, &args[1], &a)?;
            let y = snorm_check(ctx, &args[2], &a)?;
            (vec![a, x, y], universe(l))
        }
        Builtin::Refl => {
            let (a, _) = stype(ctx, &args[0])?;
            let x = snorm_check(ctx, &args[1], &a)?;
            let ty = C::Con(Builtin::Eq, vec![a.clone(), x.clone(), x.clone()]);
            (vec![a, x], ty)
        }
        Builtin::NatElim | Builtin::VecElim | Builtin::EqElim => {
            return fail("eliminators are not part of the static language")
        }
    };
    Ok((C::Con(b, vals), ty))
}

/// Checks `t` against `expected` and returns its normal form.
pub fn snorm_check(ctx: &Context, t: &Term, expected: &Canonical) -> R<Canonical> {
    match (t, expected) {
        (Term::Lam(h, body), Canonical::Pi(_, a, _, b)) => {
            let v = snorm_check(&ctx.push(h.clone(), (**a).clone()), body, b)?;
            Ok(Canonical::Lam(h.clone(), Box::new(v)))
        }
        (Term::Lam(..), _) => fail("a function checked against a non-function type"),
        _ => {
            let (v, ty) = snorm_synth(ctx, t)?;
            if subsumes(&ty, expected) {
                Ok(v)
            } else {
                fail("type mismatch")
            }
        }
    }
}

/// Normal form and level of a type.
pub fn stype(ctx: &Context, t: &Term) -> R<(Canonical, Level)> {
    match t {
        Term::Pi(h, a, b) => {
            let (ua, la) = stype(ctx, a)?;
            let (ub, lb) = stype(&ctx.push(h.clone(), ua.clone()), b)?;
            let l = la.max(lb);
            Ok((Canonical::Pi(h.clone(), Box::new(ua), l, Box::new(ub)), l))
        }
        _ => {
            let (v, ty) = snorm_synth(ctx, t)?;
            match ty {
                Canonical::Type(i) => Ok((v, Level::Int(i))),
                _ => fail("expected a type"),
            }
        }
    }
}

pub fn ssynth(ctx: &Context, t: &Term) -> R<Canonical> {
    snorm_synth(ctx, t).map(|r| r.1)
}

pub fn scheck(ctx: &Context, t: &Term, expected: &Canonical) -> R<()> {
    snorm_check(ctx, t, expected).map(|_| ())
}

// ---------------------------------------------------------------------------
// Evaluation

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SStep {
    Stepped(Term),
    Value,
    Stuck,
}

pub fn is_svalue(t: &Term) -> bool {
    match t {
        Term::Lam(..) | Term::Pi(..) | Term::Type(_) => true,
        Term::Prim(b, args) => !b.is_elim() && args.len() == b.arity() && args.iter().all(is_svalue),
        _ => false,
    }
}

/// One call-by-value step. Ascriptions are dropped once their body is a value.
pub fn sstep(t: &Term) -> SStep {
    if is_svalue(t) {
        return SStep::Value;
    }
    let inside = |sub: &Term, rebuild: &dyn Fn(Term) -> Term| match sstep(sub) {
        SStep::Stepped(s) => SStep::Stepped(rebuild(s)),
        _ => SStep::Stuck,
    };
    match t {
        Term::Ascribe(e, ty) => {
            if is_svalue(e) {
                SStep::Stepped((**e).clone())
            } else {
                inside(e, &|s| Term::ascribe(s, (**ty).clone()))
            }
        }
        Term::App(f, a) => {
            if !is_svalue(f) {
                inside(f, &|s| Term::app(s, (**a).clone()))
            } else if !is_svalue(a) {
                inside(a, &|s| Term::app((**f).clone(), s))
            } else if let Term::Lam(_, body) = &**f {
                SStep::Stepped(body.subst(0, a))
            } else {
                SStep::Stuck
            }
        }
        Term::Prim(b, args) if !b.is_elim() => match args.iter().position(|a| !is_svalue(a)) {
            Some(i) => inside(&args[i], &|s| {
                let mut args = args.clone();
                args[i] = s;
                Term::Prim(*b, args)
            }),
            None => SStep::Stuck,
        },
        _ => SStep::Stuck,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SRun {
    Value(Term),
    Stuck(Term),
    OutOfFuel,
}

pub fn srun(t: &Term, fuel: u64) -> SRun {
    let mut cur = t.clone();
    for _ in 0..=fuel {
        match sstep(&cur) {
            SStep::Value => return SRun::Value(cur),
            SStep::Stuck => return SRun::Stuck(cur),
            SStep::Stepped(next) => cur = next,
        }
    }
    SRun::OutOfFuel
}

// ---------------------------------------------------------------------------
// Embeddings

/// Static programs are gradual programs as they stand.
pub fn embed_static(t: &Term) -> Term {
    debug_assert!(t.is_static());
    t.clone()
}

/// Untyped λ-terms with named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Untyped {
    Var(String),
    Lam(String, Box<Untyped>),
    App(Box<Untyped>, Box<Untyped>),
}

impl Untyped {
    pub fn var(x: &str) -> Untyped {
        Untyped::Var(x.to_string())
    }

    pub fn lam(x: &str, b: Untyped) -> Untyped {
        Untyped::Lam(x.to_string(), Box::new(b))
    }

    pub fn app(f: Untyped, a: Untyped) -> Untyped {
        Untyped::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Untyped, args: impl IntoIterator<Item = Untyped>) -> Untyped {
        args.into_iter().fold(f, Untyped::app)
    }

    /// Nameless form without ascriptions; free variables are resolved against `scope`
    /// (innermost last).
    pub fn to_term(&self, scope: &mut Vec<String>) -> Option<Term> {
        self.translate(scope, false)
    }

    fn translate(&self, scope: &mut Vec<String>, ascribe: bool) -> Option<Term> {
        Some(match self {
            Untyped::Var(x) => Term::Var(scope.iter().rev().position(|y| y == x)?),
            Untyped::Lam(x, b) => {
                scope.push(x.clone());
                let body = b.translate(scope, ascribe);
                scope.pop();
                let lam = Term::Lam(Hint::new(x), Box::new(body?));
                if ascribe {
                    Term::ascribe(lam, Term::Unknown)
                } else {
                    lam
                }
            }
            Untyped::App(f, a) => Term::app(f.translate(scope, ascribe)?, a.translate(scope, ascribe)?),
        })
    }
}

/// Every λ gets the ascription `:: ?`; variables and applications embed structurally.
/// Free variables are resolved against `scope` (innermost last).
pub fn untyped_embed(t: &Untyped, scope: &[&str]) -> Option<Term> {
    let mut scope: Vec<String> = scope.iter().map(|s| s.to_string()).collect();
    t.translate(&mut scope, true)
}

/// Call-by-value evaluation of closed untyped terms by substitution. `None` when the
/// step budget runs out or the term is stuck on a free variable.
pub fn untyped_eval(t: &Untyped, fuel: &mut u64) -> Option<Untyped> {
    let mut cur = t.clone();
    loop {
        match cur {
            Untyped::Lam(..) => return Some(cur),
            Untyped::Var(_) => return None,
            Untyped::App(f, a) => {
                let f = untyped_eval(&f, fuel)?;
                let a = untyped_eval(&a, fuel)?;
                if *fuel == 0 {
                    return None;
                }
                *fuel -= 1;
                let Untyped::Lam(x, body) = f else { return None };
                cur = replace(&body, &x, &a);
            }
        }
    }
}

/// Substitutes a closed term; closedness rules out capture.
fn replace(t: &Untyped, x: &str, v: &Untyped) -> Untyped {
    match t {
        Untyped::Var(y) if y == x => v.clone(),
        Untyped::Var(_) => t.clone(),
        Untyped::Lam(y, _) if y == x => t.clone(),
        Untyped::Lam(y, b) => Untyped::Lam(y.clone(), Box::new(replace(b, x, v))),
        Untyped::App(f, a) => Untyped::app(replace(f, x, v), replace(a, x, v)),
    }
}

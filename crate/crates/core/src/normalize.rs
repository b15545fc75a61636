//! Approximate hereditary substitution and approximate normalization.
//!
//! Substitution works directly on canonical forms and contracts every redex it creates.
//! A redex whose function domain is not strictly below the substituted variable's type
//! in the level-multiset order is not contracted; it becomes `?` instead. Applying `?`
//! or a function of type `?` also yields `?`. Eliminator recursion is bounded by
//! [`Fuel`], so the whole evaluator always terminates.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{NormError, TypeError, TypeErrorKind};
use crate::gradops::{consistent, dom, precision};
use crate::sig::{self, frame_motive_ty, level_succ, motive_ty, prim_plan, ArgSort};
use crate::syntax::{Builtin, Canonical, Context, Elim, Hint, Level, Term};

/// Default budget of eliminator unfoldings per top-level normalization.
pub const DEFAULT_NORM_FUEL: u64 = 10_000;

/// Budget for one top-level normalization. `elim` counts eliminator unfoldings;
/// `steps` bounds substitution work as a backstop.
#[derive(Clone, Debug)]
pub struct Fuel {
    elim: u64,
    steps: u64,
}

impl Fuel {
    pub fn new(elim: u64) -> Fuel {
        Fuel { elim, steps: elim.saturating_mul(100).max(100_000) }
    }

    pub fn tick_elim(&mut self) -> Result<(), NormError> {
        if self.elim == 0 {
            return Err(NormError::FuelExhausted);
        }
        self.elim -= 1;
        Ok(())
    }

    pub fn tick_step(&mut self) -> Result<(), NormError> {
        if self.steps == 0 {
            return Err(NormError::FuelExhausted);
        }
        self.steps -= 1;
        Ok(())
    }

    pub fn elim_left(&self) -> u64 {
        self.elim
    }
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel::new(DEFAULT_NORM_FUEL)
    }
}

fn defect(msg: &str) -> NormError {
    NormError::Defect(alloc::string::String::from(msg))
}

// ---------------------------------------------------------------------------
// Termination measure

/// Levels of every arrow in `u`, sorted in descending order.
pub fn level_measure(u: &Canonical) -> Vec<Level> {
    fn go(u: &Canonical, out: &mut Vec<Level>) {
        match u {
            Canonical::Pi(_, a, l, b) => {
                out.push(*l);
                go(a, out);
                go(b, out);
            }
            Canonical::Lam(_, b) => go(b, out),
            Canonical::Neutral(_, sp) => {
                for e in sp {
                    match e {
                        Elim::App(a) => go(a, out),
                        Elim::Frame(_, args) => args.iter().for_each(|a| go(a, out)),
                    }
                }
            }
            Canonical::Con(_, args) => args.iter().for_each(|a| go(a, out)),
            Canonical::Type(_) | Canonical::Unknown => {}
        }
    }
    let mut out = Vec::new();
    go(u, &mut out);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Strict multiset order on descending-sorted level lists.
pub fn measure_less(m1: &[Level], m2: &[Level]) -> bool {
    for i in 0.. {
        match (m1.get(i), m2.get(i)) {
            (None, None) => return false,
            (None, Some(_)) => return true,
            (Some(_), None) => return false,
            (Some(a), Some(b)) if a != b => return a < b,
            _ => {}
        }
    }
    unreachable!()
}

// ---------------------------------------------------------------------------
// Eta expansion

/// The eta-long form of variable `x` at type `ty`.
pub fn eta_expand(x: usize, ty: &Canonical) -> Canonical {
    eta_neutral(x, Vec::new(), ty)
}

/// The eta-long form of the neutral `head spine` at type `ty`.
pub fn eta_neutral(head: usize, spine: Vec<Elim>, ty: &Canonical) -> Canonical {
    match ty {
        Canonical::Pi(h, a, _, b) => {
            let arg = eta_expand(0, &a.shift(1, 0));
            let mut sp: Vec<Elim> = spine.iter().map(|e| e.shift(1, 0)).collect();
            sp.push(Elim::App(arg));
            Canonical::Lam(h.clone(), Box::new(eta_neutral(head + 1, sp, b)))
        }
        _ => Canonical::Neutral(head, spine),
    }
}

/// Eta-expands `u` if it is a neutral at a function type.
pub fn eta_long(u: Canonical, ty: &Canonical) -> Canonical {
    match u {
        Canonical::Neutral(h, sp) if ty.is_pi() => eta_neutral(h, sp, ty),
        u => u,
    }
}

// ---------------------------------------------------------------------------
// Hereditary substitution

/// `[v/0]target` where index 0 has type `x_ty`; `v` and `x_ty` live in the context
/// without index 0.
pub fn hsub(v: &Canonical, x_ty: &Canonical, target: &Canonical, fuel: &mut Fuel) -> Result<Canonical, NormError> {
    hsub_at(v, x_ty, target, 0, fuel)
}

/// Substitutes for index `depth` of `target`; `v` and `x_ty` live outside those binders.
pub fn hsub_at(
    v: &Canonical,
    x_ty: &Canonical,
    target: &Canonical,
    depth: usize,
    fuel: &mut Fuel,
) -> Result<Canonical, NormError> {
    let mut h = Hsub { v, x_ty, measure: level_measure(x_ty), fuel };
    h.go(target, depth)
}

/// Substitution into a spine headed by the substituted variable: returns the result
/// and its type. `depth` is the number of binders between the variable and the spine.
pub fn hsub_atomic(
    v: &Canonical,
    x_ty: &Canonical,
    spine: &[Elim],
    depth: usize,
    fuel: &mut Fuel,
) -> Result<(Canonical, Canonical), NormError> {
    let mut h = Hsub { v, x_ty, measure: level_measure(x_ty), fuel };
    h.spine(spine, depth)
}

struct Hsub<'a> {
    v: &'a Canonical,
    x_ty: &'a Canonical,
    measure: Vec<Level>,
    fuel: &'a mut Fuel,
}

impl Hsub<'_> {
    fn go(&mut self, t: &Canonical, d: usize) -> Result<Canonical, NormError> {
        Ok(match t {
            Canonical::Lam(h, b) => Canonical::Lam(h.clone(), Box::new(self.go(b, d + 1)?)),
            Canonical::Pi(h, a, l, b) => {
                Canonical::Pi(h.clone(), Box::new(self.go(a, d)?), *l, Box::new(self.go(b, d + 1)?))
            }
            Canonical::Type(i) => Canonical::Type(*i),
            Canonical::Unknown => Canonical::Unknown,
            Canonical::Con(b, args) => {
                Canonical::Con(*b, args.iter().map(|a| self.go(a, d)).collect::<Result<_, _>>()?)
            }
            Canonical::Neutral(h, sp) if *h == d => self.spine(sp, d)?.0,
            Canonical::Neutral(h, sp) => {
                let h2 = if *h > d { h - 1 } else { *h };
                let sp2 = sp.iter().map(|e| self.go_elim(e, d)).collect::<Result<_, _>>()?;
                Canonical::Neutral(h2, sp2)
            }
        })
    }

    fn go_elim(&mut self, e: &Elim, d: usize) -> Result<Elim, NormError> {
        Ok(match e {
            Elim::App(a) => Elim::App(self.go(a, d)?),
            Elim::Frame(k, args) => Elim::Frame(*k, args.iter().map(|a| self.go(a, d)).collect::<Result<_, _>>()?),
        })
    }

    fn spine(&mut self, sp: &[Elim], d: usize) -> Result<(Canonical, Canonical), NormError> {
        let mut cur = self.v.shift(d as isize, 0);
        let mut ty = self.x_ty.shift(d as isize, 0);
        for e in sp {
            match e {
                Elim::App(a) => {
                    let a2 = self.go(a, d)?;
                    let (c, t) = self.apply(cur, &ty, &a2)?;
                    cur = c;
                    ty = t;
                }
                Elim::Frame(k, args) => {
                    let args2: Vec<Canonical> = args.iter().map(|a| self.go(a, d)).collect::<Result<_, _>>()?;
                    let t = elim_type(*k, &args2, &cur, self.fuel)?;
                    cur = reduce_elim(*k, &args2, &cur, self.fuel)?;
                    ty = t;
                }
            }
        }
        Ok((cur, ty))
    }

    fn apply(&mut self, cur: Canonical, ty: &Canonical, arg: &Canonical) -> Result<(Canonical, Canonical), NormError> {
        self.fuel.tick_step()?;
        match ty {
            Canonical::Unknown => Ok((Canonical::Unknown, Canonical::Unknown)),
            Canonical::Pi(_, a, _, b) => {
                let cod = hsub(arg, a, b, self.fuel)?;
                let r = match cur {
                    Canonical::Lam(_, body) => {
                        if measure_less(&level_measure(a), &self.measure) {
                            hsub(arg, a, &body, self.fuel)?
                        } else {
                            Canonical::Unknown
                        }
                    }
                    Canonical::Unknown => Canonical::Unknown,
                    Canonical::Neutral(h, mut sp) => {
                        sp.push(Elim::App(arg.clone()));
                        eta_long(Canonical::Neutral(h, sp), &cod)
                    }
                    _ => return Err(defect("applying a non-function canonical form")),
                };
                Ok((r, cod))
            }
            _ => Err(defect("application at a non-function type")),
        }
    }
}

/// Applies a canonical function of type `fty` to `arg`: returns the result and its type.
/// Unlike substitution into a spine, no measure check is made.
pub fn happ(f: &Canonical, fty: &Canonical, arg: &Canonical, fuel: &mut Fuel) -> Result<(Canonical, Canonical), NormError> {
    fuel.tick_step()?;
    let d = dom(fty).ok_or_else(|| defect("application at a non-function type"))?;
    let cod = match fty {
        Canonical::Pi(_, a, _, b) => hsub(arg, a, b, fuel)?,
        _ => Canonical::Unknown,
    };
    let r = match f {
        Canonical::Lam(_, b) => hsub(arg, &d, b, fuel)?,
        Canonical::Unknown => Canonical::Unknown,
        Canonical::Neutral(h, sp) => {
            let mut sp = sp.clone();
            sp.push(Elim::App(arg.clone()));
            eta_long(Canonical::Neutral(*h, sp), &cod)
        }
        // Only a term of type `?` can be something other than a function here.
        _ if fty.is_unknown() => Canonical::Unknown,
        _ => return Err(defect("applying a non-function canonical form")),
    };
    Ok((r, cod))
}

/// Index of the motive within an eliminator frame.
pub fn frame_motive_index(k: Builtin) -> usize {
    match k {
        Builtin::NatElim => 0,
        Builtin::VecElim => 2,
        _ => 1,
    }
}

/// The type of `k frame scrut`.
pub fn elim_type(k: Builtin, frame: &[Canonical], scrut: &Canonical, fuel: &mut Fuel) -> Result<Canonical, NormError> {
    let m = &frame[frame_motive_index(k)];
    let mty = frame_motive_ty(k, frame);
    let args: Vec<Canonical> = match k {
        Builtin::NatElim => alloc::vec![scrut.clone()],
        Builtin::VecElim => alloc::vec![frame[1].clone(), scrut.clone()],
        Builtin::EqElim => alloc::vec![frame[3].clone(), frame[4].clone(), scrut.clone()],
        _ => return Err(defect("not an eliminator")),
    };
    sig::apply_motive(m, &mty, &args, fuel)
}

/// Reduces an eliminator frame applied to a canonical scrutinee.
pub fn reduce_elim(k: Builtin, frame: &[Canonical], scrut: &Canonical, fuel: &mut Fuel) -> Result<Canonical, NormError> {
    let w = Level::Omega;
    let stuck = |frame: Vec<Canonical>, h: usize, sp: &[Elim], fuel: &mut Fuel| -> Result<Canonical, NormError> {
        let mut sp = sp.to_vec();
        let base = Canonical::Neutral(h, sp.clone());
        let ty = elim_type(k, &frame, &base, fuel)?;
        sp.push(Elim::Frame(k, frame));
        Ok(eta_long(Canonical::Neutral(h, sp), &ty))
    };
    match k {
        Builtin::NatElim => {
            let (m, z, s) = (&frame[0], &frame[1], &frame[2]);
            let mut preds = Vec::new();
            let mut cur = scrut;
            while let Canonical::Con(Builtin::Succ, a) = cur {
                preds.push(&a[0]);
                cur = &a[0];
            }
            let mut acc = match cur {
                Canonical::Con(Builtin::Zero, _) => z.clone(),
                Canonical::Unknown => Canonical::Unknown,
                Canonical::Neutral(h, sp) => stuck(frame.to_vec(), *h, sp, fuel)?,
                _ => return Err(defect("natElim on a non-number")),
            };
            if !preds.is_empty() {
                let mty = frame_motive_ty(k, frame);
                let sty = sig::nat_step_ty(m, &mty, w, fuel)?;
                for p in preds.into_iter().rev() {
                    fuel.tick_elim()?;
                    acc = sig::apply_motive(s, &sty, &[p.clone(), acc], fuel)?;
                }
            }
            Ok(acc)
        }
        Builtin::VecElim => {
            let (a, m, z, s) = (&frame[0], &frame[2], &frame[3], &frame[4]);
            let mut cells = Vec::new();
            let mut cur = scrut;
            let mut index = &frame[1];
            while let Canonical::Con(Builtin::Cons, c) = cur {
                cells.push((&c[1], &c[2], &c[3]));
                index = &c[1];
                cur = &c[3];
            }
            let mut acc = match cur {
                Canonical::Con(Builtin::Nil, _) => z.clone(),
                Canonical::Unknown => Canonical::Unknown,
                Canonical::Neutral(h, sp) => {
                    let mut fr = frame.to_vec();
                    fr[1] = index.clone();
                    stuck(fr, *h, sp, fuel)?
                }
                _ => return Err(defect("vecElim on a non-vector")),
            };
            if !cells.is_empty() {
                let mty = frame_motive_ty(k, frame);
                let sty = sig::vec_step_ty(a, m, &mty, w, fuel)?;
                for (kk, hh, tt) in cells.into_iter().rev() {
                    fuel.tick_elim()?;
                    acc = sig::apply_motive(s, &sty, &[kk.clone(), hh.clone(), tt.clone(), acc], fuel)?;
                }
            }
            Ok(acc)
        }
        Builtin::EqElim => {
            let (a, m, mth) = (&frame[0], &frame[1], &frame[2]);
            let arg = match scrut {
                Canonical::Con(Builtin::Refl, r) => r[1].clone(),
                Canonical::Unknown => Canonical::Unknown,
                Canonical::Neutral(h, sp) => return stuck(frame.to_vec(), *h, sp, fuel),
                _ => return Err(defect("eqElim on a non-proof")),
            };
            fuel.tick_elim()?;
            let mty = frame_motive_ty(k, frame);
            let mth_ty = sig::eq_method_ty(a, m, &mty, w, fuel)?;
            sig::apply_motive(mth, &mth_ty, &[arg], fuel)
        }
        _ => Err(defect("not an eliminator")),
    }
}

// ---------------------------------------------------------------------------
// Approximate normalization

fn err(kind: TypeErrorKind, ctx: &Context) -> TypeError {
    TypeError::new(kind, ctx)
}

fn lift(ctx: &Context) -> impl Fn(NormError) -> TypeError + '_ {
    move |e| err(TypeErrorKind::Norm(e), ctx)
}

/// `Type i` checked against `Type j` for `i <= j`.
pub fn cumulative(synth: &Canonical, expected: &Canonical) -> bool {
    matches!((synth, expected), (Canonical::Type(i), Canonical::Type(j)) if i <= j)
}

/// Normal form and synthesized type.
pub fn norm_synth(ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<(Canonical, Canonical), TypeError> {
    match t {
        Term::Var(i) => {
            let ty = ctx.lookup(*i).ok_or_else(|| err(TypeErrorKind::Unbound(*i), ctx))?;
            Ok((eta_expand(*i, &ty), ty))
        }
        Term::Type(i) => Ok((Canonical::Type(*i), Canonical::Type(i + 1))),
        Term::Unknown => Ok((Canonical::Unknown, Canonical::Unknown)),
        Term::Ascribe(e, ty) => {
            let (u_ty, _) = norm_type_synth_level(ctx, ty, fuel)?;
            let u = norm_check(ctx, e, &u_ty, fuel)?;
            Ok((u, u_ty))
        }
        Term::App(f, a) => {
            let (uf, tf) = norm_synth(ctx, f, fuel)?;
            let d = dom(&tf).ok_or_else(|| err(TypeErrorKind::NotAFunction(tf.clone()), ctx))?;
            let ua = norm_check(ctx, a, &d, fuel)?;
            let (r, cod) = happ(&uf, &tf, &ua, fuel).map_err(lift(ctx))?;
            Ok((eta_long(r, &cod), cod))
        }
        Term::Pi(..) => {
            let (u, l) = norm_type_synth_level(ctx, t, fuel)?;
            Ok((u, Canonical::universe(l)))
        }
        Term::Lam(..) => Err(err(TypeErrorKind::CannotSynthesize("a function without annotation"), ctx)),
        Term::Prim(b, args) => norm_prim(ctx, *b, args, fuel),
    }
}

fn arity_check(ctx: &Context, b: Builtin, n: usize) -> Result<(), TypeError> {
    if n == b.arity() {
        Ok(())
    } else {
        Err(err(TypeErrorKind::Arity { builtin: b, expected: b.arity(), got: n }, ctx))
    }
}

fn norm_prim(ctx: &Context, b: Builtin, args: &[Term], fuel: &mut Fuel) -> Result<(Canonical, Canonical), TypeError> {
    arity_check(ctx, b, args.len())?;
    let pt = prim_plan(b, fuel, |i, sort, fuel| match sort {
        ArgSort::Check(u) => norm_check(ctx, &args[i], &u, fuel).map(|x| (x, Level::Omega)),
        ArgSort::Type => norm_type_synth_level(ctx, &args[i], fuel),
        ArgSort::Motive { tele, tele_level } => norm_motive(ctx, &args[i], &tele, tele_level, fuel),
    })?;
    if b.is_elim() {
        let (frame, scrut) = pt.args.split_at(pt.args.len() - 1);
        let r = reduce_elim(b, frame, &scrut[0], fuel).map_err(lift(ctx))?;
        Ok((eta_long(r, &pt.ty), pt.ty))
    } else {
        Ok((Canonical::Con(b, pt.args), pt.ty))
    }
}

/// Strips up to `n` leading lambdas, returning their hints and the body, if there are `n`.
pub fn peel_lams(t: &Term, n: usize) -> Option<(Vec<Hint>, &Term)> {
    let mut hints = Vec::new();
    let mut cur = t;
    while hints.len() < n {
        match cur {
            Term::Lam(h, b) => {
                hints.push(h.clone());
                cur = b;
            }
            _ => return None,
        }
    }
    Some((hints, cur))
}

/// The universe level a motive type ends in, after `n` arrows.
pub fn final_level(u: &Canonical, n: usize) -> Option<Level> {
    let mut cur = u;
    for _ in 0..n {
        match cur {
            Canonical::Pi(_, _, _, b) => cur = b,
            Canonical::Unknown => return Some(Level::Omega),
            _ => return None,
        }
    }
    match cur {
        Canonical::Type(i) => Some(Level::Int(*i)),
        Canonical::Unknown => Some(Level::Omega),
        _ => None,
    }
}

/// Level of a motive that is not a full λ-chain: binders that are present are peeled and
/// the type of what remains must end in a universe.
fn motive_level_by_synth(
    ctx: &Context,
    m: &Term,
    tele: &[(Hint, Canonical)],
    fuel: &mut Fuel,
) -> Result<Level, TypeError> {
    let mut c = ctx.clone();
    let mut cur = m;
    let mut k = 0;
    while k < tele.len() {
        match cur {
            Term::Lam(h, b) => {
                c = c.push(h.clone(), tele[k].1.clone());
                cur = b;
                k += 1;
            }
            _ => break,
        }
    }
    let (_, u) = norm_synth(&c, cur, fuel)?;
    final_level(&u, tele.len() - k).ok_or_else(|| err(TypeErrorKind::BadMotive(u.clone()), &c))
}

/// Normalizes an eliminator motive over `tele`, returning it with its universe level.
pub fn norm_motive(
    ctx: &Context,
    m: &Term,
    tele: &[(Hint, Canonical)],
    tele_level: Level,
    fuel: &mut Fuel,
) -> Result<(Canonical, Level), TypeError> {
    if let Some((hints, body)) = peel_lams(m, tele.len()) {
        let mut c = ctx.clone();
        for (h, (_, ty)) in hints.iter().zip(tele) {
            c = c.push(h.clone(), ty.clone());
        }
        let (b, l) = norm_type_synth_level(&c, body, fuel)?;
        let nf = hints.into_iter().rev().fold(b, |acc, h| Canonical::Lam(h, Box::new(acc)));
        return Ok((nf, l));
    }
    let l = motive_level_by_synth(ctx, m, tele, fuel)?;
    let mty = motive_ty(tele, l, tele_level.max(level_succ(l)));
    let nf = norm_check(ctx, m, &mty, fuel)?;
    Ok((nf, l))
}

/// Normal form of a type together with the smallest level it lives at (`ω` when it only
/// checks against `?`).
pub fn norm_type_synth_level(ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<(Canonical, Level), TypeError> {
    match t {
        Term::Pi(h, a, b) => {
            let (ua, la) = norm_type_synth_level(ctx, a, fuel)?;
            let (ub, lb) = norm_type_synth_level(&ctx.push(h.clone(), ua.clone()), b, fuel)?;
            let l = la.max(lb);
            Ok((Canonical::Pi(h.clone(), Box::new(ua), l, Box::new(ub)), l))
        }
        Term::Lam(..) => Err(err(TypeErrorKind::CannotSynthesize("a function used as a type"), ctx)),
        _ => {
            let (u, ty) = norm_synth(ctx, t, fuel)?;
            match ty {
                Canonical::Type(i) => Ok((u, Level::Int(i))),
                Canonical::Unknown => Ok((u, Level::Omega)),
                ty => Err(err(TypeErrorKind::NotAType(ty), ctx)),
            }
        }
    }
}

/// A type checked against `?`: every arrow at its spine is annotated `ω`.
fn norm_type_dyn(ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<Canonical, TypeError> {
    match t {
        Term::Pi(h, a, b) => {
            let ua = norm_type_dyn(ctx, a, fuel)?;
            let ub = norm_type_dyn(&ctx.push(h.clone(), ua.clone()), b, fuel)?;
            Ok(Canonical::Pi(h.clone(), Box::new(ua), Level::Omega, Box::new(ub)))
        }
        _ => norm_type_synth_level(ctx, t, fuel).map(|r| r.0),
    }
}

/// Normal form of `t` checked against `expected`.
pub fn norm_check(ctx: &Context, t: &Term, expected: &Canonical, fuel: &mut Fuel) -> Result<Canonical, TypeError> {
    match (t, expected) {
        (Term::Lam(h, b), Canonical::Pi(_, a, _, bty)) => {
            let body = norm_check(&ctx.push(h.clone(), (**a).clone()), b, bty, fuel)?;
            Ok(Canonical::Lam(h.clone(), Box::new(body)))
        }
        (Term::Lam(h, b), Canonical::Unknown) => {
            let body = norm_check(&ctx.push(h.clone(), Canonical::Unknown), b, &Canonical::Unknown, fuel)?;
            Ok(Canonical::Lam(h.clone(), Box::new(body)))
        }
        (Term::Lam(..), _) => Err(err(TypeErrorKind::LambdaAgainst(expected.clone()), ctx)),
        (Term::Pi(h, a, b), Canonical::Type(i)) => {
            let ua = norm_check(ctx, a, expected, fuel)?;
            let ub = norm_check(&ctx.push(h.clone(), ua.clone()), b, expected, fuel)?;
            Ok(Canonical::Pi(h.clone(), Box::new(ua), Level::Int(*i), Box::new(ub)))
        }
        (Term::Pi(..), Canonical::Unknown) => norm_type_dyn(ctx, t, fuel),
        _ => {
            let (u, synth) = norm_synth(ctx, t, fuel)?;
            if cumulative(&synth, expected) || precision(&synth, expected) {
                Ok(u)
            } else if consistent(&synth, expected) {
                Ok(Canonical::Unknown)
            } else {
                Err(err(TypeErrorKind::Inconsistent { expected: expected.clone(), actual: synth }, ctx))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_term;
    use crate::syntax::Canonical as C;
    use alloc::vec;

    fn l(i: u32) -> Level {
        Level::Int(i)
    }

    /// Dershowitz–Manna by definition: m1 < m2 iff they differ and every level where
    /// m1 has more copies is dominated by a larger level where m2 has more copies.
    fn dm_less(m1: &[Level], m2: &[Level]) -> bool {
        let count = |m: &[Level], x: Level| m.iter().filter(|&&y| y == x).count();
        let mut all: Vec<Level> = m1.iter().chain(m2).copied().collect();
        all.sort();
        all.dedup();
        let differ = all.iter().any(|&x| count(m1, x) != count(m2, x));
        differ
            && all.iter().all(|&y| {
                count(m1, y) <= count(m2, y) || all.iter().any(|&x| x > y && count(m2, x) > count(m1, x))
            })
    }

    #[test]
    fn measure_examples() {
        assert!(level_measure(&C::nat()).is_empty());
        assert_eq!(level_measure(&C::pi("x", C::nat(), l(1), C::nat())), vec![l(1)]);
        let inner = C::pi("x", C::nat(), l(1), C::nat());
        assert_eq!(level_measure(&C::pi("f", inner, l(2), C::nat())), vec![l(2), l(1)]);
        assert!(measure_less(&[], &[l(1)]));
        assert!(measure_less(&[l(1), l(1), l(1)], &[l(2)]));
        assert!(!measure_less(&[l(2)], &[l(1), l(1), l(1)]));
        assert!(measure_less(&[l(5)], &[Level::Omega]));
    }

    #[test]
    fn measure_agrees_with_definition() {
        let alphabet = [l(1), l(2), Level::Omega];
        let mut sets: Vec<Vec<Level>> = vec![vec![]];
        for _ in 0..3 {
            let mut next = sets.clone();
            for s in &sets {
                for &x in &alphabet {
                    let mut t = s.clone();
                    t.push(x);
                    t.sort_unstable_by(|a, b| b.cmp(a));
                    if !next.contains(&t) {
                        next.push(t);
                    }
                }
            }
            sets = next;
        }
        for a in &sets {
            for b in &sets {
                assert_eq!(measure_less(a, b), dm_less(a, b), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn eta_examples() {
        let f_ty = C::pi("x", C::nat(), l(1), C::nat());
        assert_eq!(eta_expand(0, &f_ty), C::lam("x", C::Neutral(1, vec![Elim::App(C::var(0))])));
        assert_eq!(eta_expand(0, &C::nat()), C::var(0));
        let g_ty = C::pi("g", f_ty.clone(), l(1), C::nat());
        let expanded = eta_expand(0, &g_ty);
        let names = crate::print::names(&["f"]);
        assert_eq!(crate::print::canonical(&expanded, &names), "\\g. f (\\x. g x)");
    }

    #[test]
    fn hsub_examples() {
        let mut fuel = Fuel::default();
        // [v/x] y = y, index shifts down past the substituted variable
        assert_eq!(hsub(&C::nat(), &C::Type(1), &C::var(1), &mut fuel).unwrap(), C::var(0));
        // [λy.y / x] (x Nat) at (y : Type 1) ->[2] Type 1
        let x_ty = C::pi("y", C::Type(1), l(2), C::Type(1));
        let target = C::Neutral(0, vec![Elim::App(C::nat())]);
        let id = C::lam("y", C::var(0));
        assert_eq!(hsub(&id, &x_ty, &target, &mut fuel).unwrap(), C::nat());
        // a function of type ? applied yields ?
        let f = C::lam("y", C::var(0));
        let t = C::Neutral(0, vec![Elim::App(C::zero())]);
        assert_eq!(hsub(&f, &C::Unknown, &t, &mut fuel).unwrap(), C::Unknown);
    }

    #[test]
    fn hsub_refuses_non_decreasing_redex() {
        let mut fuel = Fuel::default();
        // x : (A : ?) -> A, applied to a type with more arrows than x's own type; the
        // second redex has domain measure {ω}, not below x's measure {ω}.
        let x_ty = C::pi("A", C::Unknown, Level::Omega, C::var(0));
        let dyn_fun = C::pi("y", C::Unknown, Level::Omega, C::Unknown);
        let big = C::pi("f", dyn_fun, Level::Omega, C::Unknown);
        let v = C::lam("A", C::lam("f", C::Neutral(0, vec![Elim::App(C::zero())])));
        let target = C::Neutral(0, vec![Elim::App(big.clone()), Elim::App(C::lam("y", C::var(0)))]);
        assert_eq!(hsub(&v, &x_ty, &target, &mut fuel).unwrap(), C::Unknown);
        // with only the first argument the redex is below the measure and contracts
        let target = C::Neutral(0, vec![Elim::App(big)]);
        assert_eq!(
            hsub(&v, &x_ty, &target, &mut fuel).unwrap(),
            C::lam("f", C::Neutral(0, vec![Elim::App(C::zero())]))
        );
    }

    fn nat_elim_frame() -> Vec<Canonical> {
        // motive \_. Nat, base 0, step \k r. Succ r
        vec![C::lam("k", C::nat()), C::zero(), C::lam("k", C::lam("r", C::succ(C::var(0))))]
    }

    #[test]
    fn reduce_elim_examples() {
        let mut fuel = Fuel::default();
        let fr = nat_elim_frame();
        assert_eq!(reduce_elim(Builtin::NatElim, &fr, &C::zero(), &mut fuel).unwrap(), C::zero());
        assert_eq!(reduce_elim(Builtin::NatElim, &fr, &C::numeral(2), &mut fuel).unwrap(), C::numeral(2));
        assert_eq!(reduce_elim(Builtin::NatElim, &fr, &C::Unknown, &mut fuel).unwrap(), C::Unknown);
        let stuck = reduce_elim(Builtin::NatElim, &fr, &C::var(3), &mut fuel).unwrap();
        assert_eq!(stuck, C::Neutral(3, vec![Elim::Frame(Builtin::NatElim, fr.clone())]));
        // step that records predecessors: s k r = k, so natElim 2 = 1
        let fr2 = vec![C::lam("k", C::nat()), C::zero(), C::lam("k", C::lam("r", C::var(1)))];
        assert_eq!(reduce_elim(Builtin::NatElim, &fr2, &C::numeral(2), &mut fuel).unwrap(), C::numeral(1));
        // eqElim on ? applies the method to ?
        let fr3 = vec![
            C::nat(),
            C::lam("x", C::lam("y", C::lam("p", C::nat()))),
            C::lam("z", C::succ(C::var(0))),
            C::zero(),
            C::zero(),
        ];
        assert_eq!(reduce_elim(Builtin::EqElim, &fr3, &C::Unknown, &mut fuel).unwrap(), C::succ(C::Unknown));
    }

    #[test]
    fn fuel_exhaustion_is_reported() {
        let mut fuel = Fuel::new(3);
        let fr = nat_elim_frame();
        assert_eq!(
            reduce_elim(Builtin::NatElim, &fr, &C::numeral(10), &mut fuel),
            Err(NormError::FuelExhausted)
        );
    }

    fn nsynth(src: &str) -> (Canonical, Canonical) {
        let t = parse_term(src, &[]).unwrap();
        norm_synth(&Context::new(), &t, &mut Fuel::default()).unwrap()
    }

    #[test]
    fn norm_synth_examples() {
        assert_eq!(nsynth("Type 1"), (C::Type(1), C::Type(2)));
        assert_eq!(nsynth("?"), (C::Unknown, C::Unknown));
        let ctx = Context::new().push(Hint::new("f"), C::Unknown);
        let (u, ty) = norm_synth(&ctx, &Term::var(0), &mut Fuel::default()).unwrap();
        assert_eq!((u, ty), (C::var(0), C::Unknown));
        assert_eq!(nsynth("((\\x. Succ x) :: Nat -> Nat) 1").0, C::numeral(2));
    }

    #[test]
    fn norm_check_examples() {
        let ctx = Context::new().push(Hint::new("A"), C::Type(1));
        let t = parse_term("(0 :: ?) :: A", &["A"]).unwrap();
        let u = norm_check(&ctx, &t, &C::var(0), &mut Fuel::default()).unwrap();
        assert_eq!(u, C::Unknown);
        let t = parse_term("Nat -> Nat", &[]).unwrap();
        let u = norm_check(&Context::new(), &t, &C::Type(1), &mut Fuel::default()).unwrap();
        assert_eq!(u, C::arrow(C::nat(), l(1), C::nat()));
        let u = norm_check(&Context::new(), &t, &C::Unknown, &mut Fuel::default()).unwrap();
        assert_eq!(u, C::arrow(C::nat(), Level::Omega, C::nat()));
    }

    #[test]
    fn type_levels() {
        let f = |s: &str| {
            let t = parse_term(s, &[]).unwrap();
            norm_type_synth_level(&Context::new(), &t, &mut Fuel::default()).unwrap()
        };
        assert_eq!(f("Nat"), (C::nat(), l(1)));
        assert_eq!(f("Type 3"), (C::Type(3), l(4)));
        assert_eq!(f("?"), (C::Unknown, Level::Omega));
        assert_eq!(f("Type 1 -> Nat").1, l(2));
    }

    #[test]
    fn self_application_through_unknown_terminates() {
        // (\x. x x :: ?) (\x. x x :: ?), annotated so that normalization must approximate
        let src = "((\\x. x x) :: ? -> ?) ((\\x. x x) :: ? -> ?)";
        let (u, ty) = nsynth(src);
        assert_eq!((u, ty), (C::Unknown, C::Unknown));
    }
}

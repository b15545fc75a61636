//! Gradual bidirectional typechecking with elaboration to evidence terms, and the
//! well-typedness checker for canonical forms.
//!
//! Elaboration adds evidence at each place where a synthesized type meets an expected
//! one: the evidence is their meet. When the two types are identical (up to arrow
//! levels) the evidence carries no information and is left out. Lambdas checked against
//! a function type or `?` are wrapped once, at the outermost lambda of a chain.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{TypeError, TypeErrorKind};
use crate::gradops::{consistent, dom, meet, same_shape};
use crate::normalize::{
    cumulative, final_level, norm_check, norm_motive, norm_type_synth_level, peel_lams, Fuel,
};
use crate::sig::{level_succ, motive_ty, prim_plan, ArgSort};
use crate::syntax::{Builtin, Canonical, Context, Elim, EvTerm, Hint, Level, Term};

fn err(kind: TypeErrorKind, ctx: &Context) -> TypeError {
    TypeError::new(kind, ctx)
}

fn lift(ctx: &Context) -> impl Fn(crate::error::NormError) -> TypeError + '_ {
    move |e| err(TypeErrorKind::Norm(e), ctx)
}

/// Synthesized type of `t`.
pub fn synth(ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<Canonical, TypeError> {
    elab_synth(ctx, t, fuel).map(|r| r.1)
}

/// Checks `t` against `expected`.
pub fn check(ctx: &Context, t: &Term, expected: &Canonical, fuel: &mut Fuel) -> Result<(), TypeError> {
    elab_check(ctx, t, expected, fuel).map(|_| ())
}

/// Elaborates a synthesizing term, returning it with its type.
pub fn elab_synth(ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<(EvTerm, Canonical), TypeError> {
    match t {
        Term::Var(i) => {
            let ty = ctx.lookup(*i).ok_or_else(|| err(TypeErrorKind::Unbound(*i), ctx))?;
            Ok((EvTerm::Var(*i), ty))
        }
        Term::Type(i) => Ok((EvTerm::Type(*i), Canonical::Type(i + 1))),
        Term::Unknown => Ok((EvTerm::ev(Canonical::Unknown, EvTerm::Unknown), Canonical::Unknown)),
        Term::Ascribe(e, ty) => {
            let (u_ty, _) = norm_type_synth_level(ctx, ty, fuel)?;
            let ee = elab_check(ctx, e, &u_ty, fuel)?;
            Ok((ee, u_ty))
        }
        Term::App(f, a) => {
            let (ef, tf) = elab_synth(ctx, f, fuel)?;
            let d = dom(&tf).ok_or_else(|| err(TypeErrorKind::NotAFunction(tf.clone()), ctx))?;
            let ea = elab_check(ctx, a, &d, fuel)?;
            let ua = norm_check(ctx, a, &d, fuel)?;
            let cod = crate::gradops::cod_sub(&ua, &tf, fuel).map_err(lift(ctx))?.unwrap_or(Canonical::Unknown);
            // A function of type `?` is used at `? -> ?`.
            let ef = if tf.is_unknown() { EvTerm::ev(Canonical::arrow(Canonical::Unknown, Level::Omega, Canonical::Unknown), ef) } else { ef };
            Ok((EvTerm::app(ef, ea), cod))
        }
        Term::Pi(..) => {
            let (e, _, l) = elab_type(ctx, t, fuel)?;
            Ok((e, Canonical::universe(l)))
        }
        Term::Lam(..) => Err(err(TypeErrorKind::CannotSynthesize("a function without annotation"), ctx)),
        Term::Prim(b, args) => elab_prim(ctx, *b, args, fuel),
    }
}

fn elab_prim(ctx: &Context, b: Builtin, args: &[Term], fuel: &mut Fuel) -> Result<(EvTerm, Canonical), TypeError> {
    if args.len() != b.arity() {
        return Err(err(TypeErrorKind::Arity { builtin: b, expected: b.arity(), got: args.len() }, ctx));
    }
    let mut out: Vec<EvTerm> = Vec::with_capacity(args.len());
    let pt = prim_plan::<TypeError>(b, fuel, |i, sort, fuel| match sort {
        ArgSort::Check(u) => {
            out.push(elab_check(ctx, &args[i], &u, fuel)?);
            Ok((norm_check(ctx, &args[i], &u, fuel)?, Level::Omega))
        }
        ArgSort::Type => {
            let (e, nf, l) = elab_type(ctx, &args[i], fuel)?;
            out.push(e);
            Ok((nf, l))
        }
        ArgSort::Motive { tele, tele_level } => {
            let (e, nf, l) = elab_motive(ctx, &args[i], &tele, tele_level, fuel)?;
            out.push(e);
            Ok((nf, l))
        }
    })?;
    Ok((EvTerm::Prim(b, out), pt.ty))
}

/// Elaborates a term used as a type: the evidence term, its normal form and its level.
pub fn elab_type(ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<(EvTerm, Canonical, Level), TypeError> {
    match t {
        Term::Pi(h, a, b) => {
            let (ea, ua, la) = elab_type(ctx, a, fuel)?;
            let (eb, ub, lb) = elab_type(&ctx.push(h.clone(), ua.clone()), b, fuel)?;
            let l = la.max(lb);
            Ok((
                EvTerm::Pi(h.clone(), Box::new(ea), Box::new(eb)),
                Canonical::Pi(h.clone(), Box::new(ua), l, Box::new(ub)),
                l,
            ))
        }
        _ => {
            let (nf, l) = norm_type_synth_level(ctx, t, fuel)?;
            let (e, _) = elab_synth(ctx, t, fuel)?;
            Ok((e, nf, l))
        }
    }
}

fn elab_motive(
    ctx: &Context,
    m: &Term,
    tele: &[(Hint, Canonical)],
    tele_level: Level,
    fuel: &mut Fuel,
) -> Result<(EvTerm, Canonical, Level), TypeError> {
    let (nf, l) = norm_motive(ctx, m, tele, tele_level, fuel)?;
    let mty = motive_ty(tele, l, tele_level.max(level_succ(l)));
    let e = if let Some((hints, body)) = peel_lams(m, tele.len()) {
        let mut c = ctx.clone();
        for (h, (_, ty)) in hints.iter().zip(tele) {
            c = c.push(h.clone(), ty.clone());
        }
        let (eb, _, _) = elab_type(&c, body, fuel)?;
        let lam = hints.into_iter().rev().fold(eb, |acc, h| EvTerm::Lam(h, Box::new(acc)));
        EvTerm::ev(mty, lam)
    } else {
        elab_check(ctx, m, &mty, fuel)?
    };
    Ok((e, nf, l))
}

/// Elaborates `t` checked against `expected`.
pub fn elab_check(ctx: &Context, t: &Term, expected: &Canonical, fuel: &mut Fuel) -> Result<EvTerm, TypeError> {
    elab_check_in(ctx, t, expected, true, fuel)
}

fn elab_check_in(
    ctx: &Context,
    t: &Term,
    expected: &Canonical,
    wrap: bool,
    fuel: &mut Fuel,
) -> Result<EvTerm, TypeError> {
    match (t, expected) {
        (Term::Lam(h, b), Canonical::Pi(_, a, _, bty)) => {
            // Evidence on the outer λ covers inner λs unless they are checked against `?`.
            let body = elab_check_in(&ctx.push(h.clone(), (**a).clone()), b, bty, bty.is_unknown(), fuel)?;
            let lam = EvTerm::Lam(h.clone(), Box::new(body));
            Ok(if wrap { EvTerm::ev(expected.clone(), lam) } else { lam })
        }
        (Term::Lam(h, b), Canonical::Unknown) => {
            let body = elab_check_in(&ctx.push(h.clone(), Canonical::Unknown), b, expected, true, fuel)?;
            let lam = EvTerm::Lam(h.clone(), Box::new(body));
            let dyn_fun = Canonical::arrow(Canonical::Unknown, Level::Omega, Canonical::Unknown);
            Ok(if wrap { EvTerm::ev(dyn_fun, lam) } else { lam })
        }
        (Term::Lam(..), _) => Err(err(TypeErrorKind::LambdaAgainst(expected.clone()), ctx)),
        (Term::Pi(h, a, b), Canonical::Type(_)) => {
            let ea = elab_check(ctx, a, expected, fuel)?;
            let ua = norm_check(ctx, a, expected, fuel)?;
            let eb = elab_check(&ctx.push(h.clone(), ua), b, expected, fuel)?;
            Ok(EvTerm::Pi(h.clone(), Box::new(ea), Box::new(eb)))
        }
        (Term::Pi(..), Canonical::Unknown) => {
            let (e, _, l) = elab_type(ctx, t, fuel)?;
            Ok(EvTerm::ev(Canonical::universe(l), e))
        }
        _ => {
            let (e, synth) = elab_synth(ctx, t, fuel)?;
            if cumulative(&synth, expected) || same_shape(&synth, expected) {
                return Ok(e);
            }
            match meet(&synth, expected) {
                Some(w) => Ok(EvTerm::ev(w, e)),
                None => Err(err(TypeErrorKind::Inconsistent { expected: expected.clone(), actual: synth }, ctx)),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical forms

/// Checks that `u` is a well-typed, eta-long canonical form at `expected`.
pub fn check_canonical(ctx: &Context, u: &Canonical, expected: &Canonical, fuel: &mut Fuel) -> Result<(), TypeError> {
    match u {
        Canonical::Unknown => Ok(()),
        Canonical::Lam(h, b) => match expected {
            Canonical::Pi(_, a, _, bt) => check_canonical(&ctx.push(h.clone(), (**a).clone()), b, bt, fuel),
            Canonical::Unknown => check_canonical(&ctx.push(h.clone(), Canonical::Unknown), b, expected, fuel),
            _ => Err(err(TypeErrorKind::LambdaAgainst(expected.clone()), ctx)),
        },
        Canonical::Pi(..) => {
            let l = can_level(ctx, u, fuel)?;
            match (expected, l) {
                (Canonical::Unknown, _) => Ok(()),
                (Canonical::Type(j), Level::Int(i)) if i <= *j => Ok(()),
                (Canonical::Type(_), Level::Omega) => Ok(()),
                _ => Err(err(
                    TypeErrorKind::Inconsistent { expected: expected.clone(), actual: Canonical::universe(l) },
                    ctx,
                )),
            }
        }
        Canonical::Type(i) => match expected {
            Canonical::Unknown => Ok(()),
            Canonical::Type(j) if j > i => Ok(()),
            _ => Err(err(
                TypeErrorKind::Inconsistent { expected: expected.clone(), actual: Canonical::Type(i + 1) },
                ctx,
            )),
        },
        Canonical::Neutral(..) | Canonical::Con(..) => {
            if expected.is_pi() {
                return Err(err(TypeErrorKind::NotEtaLong, ctx));
            }
            let synth = can_synth(ctx, u, fuel)?;
            if synth.is_pi() {
                return Err(err(TypeErrorKind::NotEtaLong, ctx));
            }
            if cumulative(&synth, expected) || consistent(&synth, expected) {
                Ok(())
            } else {
                Err(err(TypeErrorKind::Inconsistent { expected: expected.clone(), actual: synth }, ctx))
            }
        }
    }
}

/// The level of a canonical type, checking that it is one.
pub fn can_level(ctx: &Context, u: &Canonical, fuel: &mut Fuel) -> Result<Level, TypeError> {
    match u {
        Canonical::Pi(h, a, _, b) => {
            let la = can_level(ctx, a, fuel)?;
            let lb = can_level(&ctx.push(h.clone(), (**a).clone()), b, fuel)?;
            Ok(la.max(lb))
        }
        Canonical::Type(i) => Ok(Level::Int(i + 1)),
        Canonical::Unknown => Ok(Level::Omega),
        Canonical::Lam(..) => Err(err(TypeErrorKind::Malformed("a function used as a type"), ctx)),
        _ => {
            let ty = can_synth(ctx, u, fuel)?;
            match ty {
                Canonical::Type(i) => Ok(Level::Int(i)),
                Canonical::Unknown => Ok(Level::Omega),
                ty => Err(err(TypeErrorKind::NotAType(ty), ctx)),
            }
        }
    }
}

fn can_motive(
    ctx: &Context,
    m: &Canonical,
    tele: &[(Hint, Canonical)],
    fuel: &mut Fuel,
) -> Result<Level, TypeError> {
    if m.is_unknown() {
        return Ok(Level::Omega);
    }
    let mut c = ctx.clone();
    let mut cur = m;
    for (_, ty) in tele {
        match cur {
            Canonical::Lam(h, b) => {
                c = c.push(h.clone(), ty.clone());
                cur = b;
            }
            Canonical::Unknown => return Ok(Level::Omega),
            _ => return Err(err(TypeErrorKind::BadMotive(m.clone()), ctx)),
        }
    }
    can_level(&c, cur, fuel)
}

/// Type of an atomic canonical form (a neutral or a constructor), or of a type.
pub fn can_synth(ctx: &Context, u: &Canonical, fuel: &mut Fuel) -> Result<Canonical, TypeError> {
    match u {
        Canonical::Type(i) => Ok(Canonical::Type(i + 1)),
        Canonical::Unknown => Ok(Canonical::Unknown),
        Canonical::Pi(..) => can_level(ctx, u, fuel).map(Canonical::universe),
        Canonical::Lam(..) => Err(err(TypeErrorKind::CannotSynthesize("a canonical function"), ctx)),
        Canonical::Con(b, args) => {
            if args.len() != b.arity() || b.is_elim() {
                return Err(err(TypeErrorKind::Malformed("constructor arity"), ctx));
            }
            let pt = prim_plan(*b, fuel, |i, sort, fuel| can_arg(ctx, &args[i], sort, fuel))?;
            Ok(pt.ty)
        }
        Canonical::Neutral(h, sp) => {
            let mut ty = ctx.lookup(*h).ok_or_else(|| err(TypeErrorKind::Unbound(*h), ctx))?;
            let mut prefix: Vec<Elim> = Vec::new();
            for e in sp {
                match e {
                    Elim::App(a) => {
                        let d = dom(&ty).ok_or_else(|| err(TypeErrorKind::NotAFunction(ty.clone()), ctx))?;
                        check_canonical(ctx, a, &d, fuel)?;
                        ty = crate::gradops::cod_sub(a, &ty, fuel)
                            .map_err(lift(ctx))?
                            .unwrap_or(Canonical::Unknown);
                    }
                    Elim::Frame(k, args) => {
                        if args.len() + 1 != k.arity() || !k.is_elim() {
                            return Err(err(TypeErrorKind::Malformed("eliminator frame arity"), ctx));
                        }
                        let scrut = Canonical::Neutral(*h, prefix.clone());
                        let scrut_ty = ty.clone();
                        let pt = prim_plan(*k, fuel, |i, sort, fuel| {
                            if i < args.len() {
                                return can_arg(ctx, &args[i], sort, fuel);
                            }
                            if let ArgSort::Check(want) = sort {
                                if !consistent(&scrut_ty, &want) {
                                    return Err(err(
                                        TypeErrorKind::Inconsistent { expected: want, actual: scrut_ty.clone() },
                                        ctx,
                                    ));
                                }
                            }
                            Ok((scrut.clone(), Level::Omega))
                        })?;
                        ty = pt.ty;
                    }
                }
                prefix.push(e.clone());
            }
            Ok(ty)
        }
    }
}

fn can_arg(ctx: &Context, a: &Canonical, sort: ArgSort, fuel: &mut Fuel) -> Result<(Canonical, Level), TypeError> {
    match sort {
        ArgSort::Check(want) => {
            check_canonical(ctx, a, &want, fuel)?;
            Ok((a.clone(), Level::Omega))
        }
        ArgSort::Type => Ok((a.clone(), can_level(ctx, a, fuel)?)),
        ArgSort::Motive { tele, .. } => Ok((a.clone(), can_motive(ctx, a, &tele, fuel)?)),
    }
}

/// Checks that every binding's type is a type under the bindings before it.
pub fn wf_context(ctx: &Context, fuel: &mut Fuel) -> Result<(), TypeError> {
    let mut prefix = Context::new();
    for (h, ty) in ctx.entries() {
        can_level(&prefix, &ty, fuel)?;
        prefix = prefix.push(h, ty);
    }
    Ok(())
}

/// The type a motive canonical form returns, used by callers that only have its type.
pub fn motive_level(ty: &Canonical, arity: usize) -> Option<Level> {
    final_level(ty, arity)
}

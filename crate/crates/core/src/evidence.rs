//! The evidence-based runtime: evidence composition, substitution into evidence, the
//! call-by-value small-step machine and the typing of machine states.
//!
//! Values are raw values (functions, arrow types, universes, `?`, fully evaluated
//! constructors) optionally under one layer of evidence. Two layers of evidence
//! collapse by composition; when the meet is undefined the machine steps to `err`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{NormError, TypeError, TypeErrorKind};
use crate::gradops::{consistent, dom, meet};
use crate::normalize::{cumulative, final_level, hsub, hsub_at, norm_check, norm_type_synth_level, Fuel};
use crate::sig::{level_succ, motive_ty, prim_plan, ArgSort};
use crate::syntax::{Builtin, Canonical, Context, EvTerm, Evidence, Hint, Level, MeetFailure};

pub use crate::typecheck::{elab_check, elab_synth};

/// Composes the evidence of an inner term with the evidence placed around it.
/// Universes compose cumulatively: `Type i` under `Type j` with `i <= j` stays `Type i`.
pub fn compose_evidence(inner: &Canonical, outer: &Canonical) -> Option<Canonical> {
    if let (Canonical::Type(i), Canonical::Type(j)) = (inner, outer) {
        if i <= j {
            return Some(Canonical::Type(*i));
        }
    }
    meet(inner, outer)
}

pub fn is_raw_value(e: &EvTerm) -> bool {
    match e {
        EvTerm::Lam(..) | EvTerm::Pi(..) | EvTerm::Type(_) | EvTerm::Unknown => true,
        EvTerm::Prim(b, args) => !b.is_elim() && args.len() == b.arity() && args.iter().all(is_value),
        _ => false,
    }
}

pub fn is_value(e: &EvTerm) -> bool {
    match e {
        EvTerm::Ev(_, r) => is_raw_value(r),
        r => is_raw_value(r),
    }
}

// ---------------------------------------------------------------------------
// Substitution

/// Substitutes `arg` for index 0 of `body`. Evidence mentioning the variable is rewritten
/// by hereditary substitution of `nf`, the normal form of `arg` at `ty`.
pub fn eval_subst(body: &EvTerm, arg: &EvTerm, nf: &Canonical, ty: &Canonical) -> EvTerm {
    let mut fuel = Fuel::default();
    subst_at(body, 0, arg, nf, ty, &mut fuel)
}

fn subst_at(e: &EvTerm, d: usize, arg: &EvTerm, nf: &Canonical, ty: &Canonical, fuel: &mut Fuel) -> EvTerm {
    let go = |t: &EvTerm, d: usize, fuel: &mut Fuel| subst_at(t, d, arg, nf, ty, fuel);
    match e {
        EvTerm::Var(i) if *i == d => arg.shift(d as isize, 0),
        EvTerm::Var(i) if *i > d => EvTerm::Var(i - 1),
        EvTerm::Var(i) => EvTerm::Var(*i),
        EvTerm::Lam(h, b) => EvTerm::Lam(h.clone(), Box::new(go(b, d + 1, fuel))),
        EvTerm::App(f, a) => EvTerm::app(go(f, d, fuel), go(a, d, fuel)),
        EvTerm::Pi(h, a, b) => EvTerm::Pi(h.clone(), Box::new(go(a, d, fuel)), Box::new(go(b, d + 1, fuel))),
        EvTerm::Type(i) => EvTerm::Type(*i),
        EvTerm::Unknown => EvTerm::Unknown,
        EvTerm::Prim(b, args) => EvTerm::Prim(*b, args.iter().map(|a| go(a, d, fuel)).collect()),
        EvTerm::Ev(w, inner) => {
            let w2 = if w.0.mentions(d) {
                hsub_at(nf, ty, &w.0, d, fuel).unwrap_or(Canonical::Unknown)
            } else {
                w.0.shift(-1, d)
            };
            EvTerm::ev(w2, go(inner, d, fuel))
        }
        EvTerm::Err(f) => EvTerm::Err(f.clone()),
    }
}

// ---------------------------------------------------------------------------
// Stepping

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    /// One step was taken by the named rule.
    Stepped(EvTerm, &'static str),
    Value,
    /// The term is `err`.
    Error(MeetFailure),
    /// No rule applies; only reachable from ill-typed or open terms.
    Stuck,
}

/// Normal form of a closed runtime term at `ty`, or `?` if it cannot be computed.
fn closed_nf(e: &EvTerm, ty: &Canonical) -> Canonical {
    norm_check(&Context::new(), &e.to_term(), ty, &mut Fuel::default()).unwrap_or(Canonical::Unknown)
}

/// Codomain of function evidence `w` at an argument; `nf` is forced only if needed.
fn evidence_cod(w: &Canonical, nf: &mut dyn FnMut() -> Canonical) -> Canonical {
    match w {
        Canonical::Pi(_, a, _, b) => {
            if b.mentions(0) {
                hsub(&nf(), a, b, &mut Fuel::default()).unwrap_or(Canonical::Unknown)
            } else {
                b.shift(-1, 0)
            }
        }
        _ => Canonical::Unknown,
    }
}

fn active_err(e: &EvTerm) -> Option<&MeetFailure> {
    match e {
        EvTerm::Err(f) => Some(f),
        EvTerm::Ev(_, inner) => active_err(inner),
        EvTerm::App(f, a) => {
            if !is_value(f) {
                active_err(f)
            } else {
                active_err(a)
            }
        }
        EvTerm::Prim(_, args) => args.iter().find(|a| !is_value(a)).and_then(active_err),
        _ => None,
    }
}

fn in_context(sub: &EvTerm, rebuild: impl FnOnce(EvTerm) -> EvTerm) -> StepResult {
    match step(sub) {
        StepResult::Stepped(s, rule) => StepResult::Stepped(rebuild(s), rule),
        StepResult::Error(f) => StepResult::Stepped(EvTerm::Err(Box::new(f)), "StepContextErr"),
        StepResult::Value | StepResult::Stuck => StepResult::Stuck,
    }
}

fn fail(left: &Canonical, right: &Canonical, rule: &'static str) -> StepResult {
    StepResult::Stepped(EvTerm::Err(Box::new(MeetFailure { left: left.clone(), right: right.clone() })), rule)
}

/// One step of call-by-value reduction.
pub fn step(e: &EvTerm) -> StepResult {
    if let EvTerm::Err(f) = e {
        return StepResult::Error((**f).clone());
    }
    if is_value(e) {
        return StepResult::Value;
    }
    if let Some(f) = active_err(e) {
        return StepResult::Stepped(EvTerm::Err(Box::new(f.clone())), "StepContextErr");
    }
    match e {
        EvTerm::Ev(w, inner) => match &**inner {
            EvTerm::Ev(w2, v) if is_raw_value(v) => match compose_evidence(&w2.0, &w.0) {
                Some(w3) => StepResult::Stepped(EvTerm::ev(w3, (**v).clone()), "StepAscr"),
                None => fail(&w2.0, &w.0, "StepAscrFail"),
            },
            // `⟨?⟩ (⟨?⟩ e)` would compose to `⟨?⟩ e` anyway; merging early keeps divergent
            // programs such as self-application from growing a frame per step.
            _ => in_context(inner, |s| match s {
                EvTerm::Ev(w2, s) if w.0.is_unknown() && w2.0.is_unknown() => EvTerm::Ev(w2, s),
                s => EvTerm::Ev(w.clone(), Box::new(s)),
            }),
        },
        EvTerm::App(f, a) => {
            if !is_value(f) {
                in_context(f, |s| EvTerm::app(s, (**a).clone()))
            } else if !is_value(a) {
                in_context(a, |s| EvTerm::app((**f).clone(), s))
            } else {
                apply(f, a)
            }
        }
        EvTerm::Prim(b, args) => {
            if let Some(i) = args.iter().position(|a| !is_value(a)) {
                in_context(&args[i], |s| {
                    let mut args2 = args.clone();
                    args2[i] = s;
                    EvTerm::Prim(*b, args2)
                })
            } else if b.is_elim() && args.len() == b.arity() {
                eliminate(*b, args)
            } else {
                StepResult::Stuck
            }
        }
        _ => StepResult::Stuck,
    }
}

fn apply(f: &EvTerm, a: &EvTerm) -> StepResult {
    match f {
        EvTerm::Ev(w, rf) => {
            let Some(d) = dom(&w.0) else { return StepResult::Stuck };
            match &**rf {
                EvTerm::Lam(_, body) => {
                    let a2 = match a {
                        EvTerm::Ev(wa, ra) => match compose_evidence(&wa.0, &d) {
                            Some(w2) => EvTerm::ev(w2, (**ra).clone()),
                            None => return fail(&wa.0, &d, "StepAppFailTrans"),
                        },
                        raw => raw.clone(),
                    };
                    let mut cached: Option<Canonical> = None;
                    let mut nf = || cached.get_or_insert_with(|| closed_nf(&a2, &d)).clone();
                    let cod = evidence_cod(&w.0, &mut nf);
                    let arg_nf = if body.evidence_mentions(0) { nf() } else { Canonical::Unknown };
                    let body2 = eval_subst(body, &a2, &arg_nf, &d);
                    StepResult::Stepped(EvTerm::ev(cod, body2), "StepAppEv")
                }
                EvTerm::Unknown => {
                    let mut nf = || closed_nf(a, &d);
                    let cod = evidence_cod(&w.0, &mut nf);
                    StepResult::Stepped(EvTerm::ev(cod, EvTerm::Unknown), "StepAppDyn")
                }
                _ => StepResult::Stuck,
            }
        }
        EvTerm::Lam(_, body) => {
            let arg_nf =
                if body.evidence_mentions(0) { closed_nf(a, &Canonical::Unknown) } else { Canonical::Unknown };
            StepResult::Stepped(eval_subst(body, a, &arg_nf, &Canonical::Unknown), "StepAppEvRaw")
        }
        _ => StepResult::Stuck,
    }
}

fn strip(e: &EvTerm) -> &EvTerm {
    match e {
        EvTerm::Ev(_, r) => r,
        r => r,
    }
}

fn motive_index(b: Builtin) -> usize {
    match b {
        Builtin::NatElim => 0,
        Builtin::VecElim => 2,
        _ => 1,
    }
}

fn tele_len(b: Builtin) -> usize {
    match b {
        Builtin::NatElim => 1,
        Builtin::VecElim => 2,
        _ => 3,
    }
}

/// Type of a fully evaluated elimination, computed from the normal forms of its arguments.
fn elim_result_type(b: Builtin, args: &[EvTerm]) -> Canonical {
    // Fast path: the motive ignores its arguments.
    let n = tele_len(b);
    let mut body = strip(&args[motive_index(b)]);
    let mut lams = 0;
    while lams < n {
        match body {
            EvTerm::Lam(_, inner) => {
                body = inner;
                lams += 1;
            }
            _ => break,
        }
    }
    if lams == n && (0..n).all(|i| !body.mentions(i)) {
        let t = body.shift(-(n as isize), 0).to_term();
        return norm_type_synth_level(&Context::new(), &t, &mut Fuel::default())
            .map(|r| r.0)
            .unwrap_or(Canonical::Unknown);
    }
    let ctx = Context::new();
    let mut fuel = Fuel::default();
    let r = prim_plan::<NormError>(b, &mut fuel, |i, sort, fuel| {
        let t = args[i].to_term();
        Ok(match sort {
            ArgSort::Check(u) => (norm_check(&ctx, &t, &u, fuel).unwrap_or(Canonical::Unknown), Level::Omega),
            ArgSort::Type => norm_type_synth_level(&ctx, &t, fuel).unwrap_or((Canonical::Unknown, Level::Omega)),
            ArgSort::Motive { tele, tele_level } => {
                crate::normalize::norm_motive(&ctx, &t, &tele, tele_level, fuel)
                    .unwrap_or((Canonical::Unknown, Level::Omega))
            }
        })
    });
    r.map(|pt| pt.ty).unwrap_or(Canonical::Unknown)
}

fn eliminate(b: Builtin, args: &[EvTerm]) -> StepResult {
    let scrut = strip(args.last().expect("eliminator without arguments"));
    let reduct = match (b, scrut) {
        (Builtin::NatElim, EvTerm::Prim(Builtin::Zero, _)) => args[1].clone(),
        (Builtin::NatElim, EvTerm::Prim(Builtin::Succ, k)) => {
            let mut rec = args.to_vec();
            rec[3] = k[0].clone();
            EvTerm::apps(args[2].clone(), [k[0].clone(), EvTerm::Prim(b, rec)])
        }
        (Builtin::VecElim, EvTerm::Prim(Builtin::Nil, _)) => args[3].clone(),
        (Builtin::VecElim, EvTerm::Prim(Builtin::Cons, c)) => {
            let mut rec = args.to_vec();
            rec[1] = c[1].clone();
            rec[5] = c[3].clone();
            EvTerm::apps(args[4].clone(), [c[1].clone(), c[2].clone(), c[3].clone(), EvTerm::Prim(b, rec)])
        }
        (Builtin::EqElim, EvTerm::Prim(Builtin::Refl, r)) => EvTerm::app(args[2].clone(), r[1].clone()),
        (Builtin::EqElim, EvTerm::Unknown) => {
            // `?` as a proof behaves as `Refl ? ?`, so the endpoints its evidence claims must meet.
            if let EvTerm::Ev(w, _) = args.last().expect("eliminator without arguments") {
                if let Canonical::Con(Builtin::Eq, ix) = &w.0 {
                    if meet(&ix[1], &ix[2]).is_none() {
                        return fail(&ix[1], &ix[2], "StepAscrFail");
                    }
                }
            }
            // The witness lives at the carrier type.
            let carrier = norm_type_synth_level(&Context::new(), &args[0].to_term(), &mut Fuel::default())
                .map(|r| r.0)
                .unwrap_or(Canonical::Unknown);
            EvTerm::app(args[2].clone(), EvTerm::ev(carrier, EvTerm::Unknown))
        }
        (Builtin::NatElim | Builtin::VecElim, EvTerm::Unknown) => EvTerm::Unknown,
        _ => return StepResult::Stuck,
    };
    let rule = match b {
        Builtin::NatElim => "StepElimNat",
        Builtin::VecElim => "StepElimVec",
        _ => "StepElimEq",
    };
    StepResult::Stepped(EvTerm::ev(elim_result_type(b, args), reduct), rule)
}

// ---------------------------------------------------------------------------
// Running

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Value(EvTerm),
    Err(MeetFailure),
    /// The step budget ran out; holds the last state.
    FuelExhausted(EvTerm),
    Stuck(EvTerm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub outcome: RunOutcome,
    pub steps: u64,
}

/// Runs to a value, `err`, a stuck state, or until `fuel` steps have been taken.
pub fn run(e: &EvTerm, fuel: u64) -> RunReport {
    run_traced(e, fuel, |_, _| {})
}

/// Like [`run`], calling `on_step(rule, new_state)` after every step.
pub fn run_traced(e: &EvTerm, fuel: u64, mut on_step: impl FnMut(&'static str, &EvTerm)) -> RunReport {
    let mut cur = e.clone();
    let mut steps = 0;
    loop {
        match step(&cur) {
            StepResult::Value => return RunReport { outcome: RunOutcome::Value(cur), steps },
            StepResult::Error(f) => return RunReport { outcome: RunOutcome::Err(f), steps },
            StepResult::Stuck => return RunReport { outcome: RunOutcome::Stuck(cur), steps },
            StepResult::Stepped(next, rule) => {
                if steps >= fuel {
                    return RunReport { outcome: RunOutcome::FuelExhausted(cur), steps };
                }
                steps += 1;
                on_step(rule, &next);
                cur = next;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Typing of runtime terms

fn err(kind: TypeErrorKind, ctx: &Context) -> TypeError {
    TypeError::new(kind, ctx)
}

/// Normal form of a runtime term at `ty`; `?` when the term does not normalize.
pub fn ev_nf(ctx: &Context, e: &EvTerm, ty: &Canonical) -> Canonical {
    norm_check(ctx, &e.to_term(), ty, &mut Fuel::default()).unwrap_or(Canonical::Unknown)
}

/// Synthesizes a type for a runtime term; evidence determines the type it is given.
pub fn ev_synth(ctx: &Context, e: &EvTerm) -> Result<Canonical, TypeError> {
    match e {
        EvTerm::Var(i) => ctx.lookup(*i).ok_or_else(|| err(TypeErrorKind::Unbound(*i), ctx)),
        EvTerm::Type(i) => Ok(Canonical::Type(i + 1)),
        EvTerm::Unknown | EvTerm::Err(_) => Ok(Canonical::Unknown),
        EvTerm::Lam(..) => Err(err(TypeErrorKind::CannotSynthesize("a function without evidence"), ctx)),
        EvTerm::Pi(..) => ev_type_level(ctx, e).map(|r| Canonical::universe(r.1)),
        EvTerm::App(f, a) => {
            let tf = ev_synth(ctx, f)?;
            let d = dom(&tf).ok_or_else(|| err(TypeErrorKind::NotAFunction(tf.clone()), ctx))?;
            ev_check(ctx, a, &d)?;
            let ua = ev_nf(ctx, a, &d);
            let cod = crate::gradops::cod_sub(&ua, &tf, &mut Fuel::default())
                .map_err(|e| err(TypeErrorKind::Norm(e), ctx))?;
            Ok(cod.unwrap_or(Canonical::Unknown))
        }
        EvTerm::Prim(b, args) => {
            if args.len() != b.arity() {
                return Err(err(TypeErrorKind::Arity { builtin: *b, expected: b.arity(), got: args.len() }, ctx));
            }
            let mut fuel = Fuel::default();
            let pt = prim_plan::<TypeError>(*b, &mut fuel, |i, sort, _| match sort {
                ArgSort::Check(u) => {
                    ev_check(ctx, &args[i], &u)?;
                    Ok((ev_nf(ctx, &args[i], &u), Level::Omega))
                }
                ArgSort::Type => ev_type_level(ctx, &args[i]),
                ArgSort::Motive { tele, tele_level } => ev_motive(ctx, &args[i], &tele, tele_level),
            })?;
            Ok(pt.ty)
        }
        EvTerm::Ev(w, inner) => {
            ev_inner(ctx, &w.0, inner)?;
            Ok(w.0.clone())
        }
    }
}

/// Checks that `inner` has a type consistent with the evidence `w`. Stepping refines
/// outer evidence past the types of inner terms, so precision is not preserved.
fn ev_inner(ctx: &Context, w: &Canonical, inner: &EvTerm) -> Result<(), TypeError> {
    match inner {
        // Nested evidence: the inner term is typed at `?`.
        EvTerm::Ev(..) => ev_synth(ctx, inner).map(|_| ()),
        EvTerm::Lam(..) => ev_lam_under(ctx, inner, w),
        EvTerm::Unknown | EvTerm::Err(_) => Ok(()),
        EvTerm::Pi(..) if may_be_dynamic_type(inner) => ev_type_level(ctx, inner).map(|_| ()),
        _ => {
            let ui = ev_synth(ctx, inner)?;
            if consistent(w, &ui) || cumulative(&ui, w) {
                Ok(())
            } else {
                Err(err(TypeErrorKind::Inconsistent { expected: w.clone(), actual: ui }, ctx))
            }
        }
    }
}

/// A function type with an evidence-carrying component can be typed at level ω, that is
/// at `?`.
fn may_be_dynamic_type(e: &EvTerm) -> bool {
    match e {
        EvTerm::Ev(..) => true,
        EvTerm::Pi(_, a, b) => may_be_dynamic_type(a) || may_be_dynamic_type(b),
        _ => false,
    }
}

/// A λ under evidence `w` may have any function type that `w` is more precise than, so
/// its parameter can be taken at `?` and a body carrying its own evidence at `?`.
fn ev_lam_under(ctx: &Context, lam: &EvTerm, w: &Canonical) -> Result<(), TypeError> {
    let (h, body, cod) = match (lam, w) {
        (EvTerm::Lam(h, b), Canonical::Pi(_, _, _, bt)) => (h, b, (**bt).clone()),
        (EvTerm::Lam(h, b), Canonical::Unknown) => (h, b, Canonical::Unknown),
        _ => return Err(err(TypeErrorKind::LambdaAgainst(w.clone()), ctx)),
    };
    let inner = ctx.push(h.clone(), Canonical::Unknown);
    match &**body {
        EvTerm::Ev(wb, e) => ev_inner(&inner, &wb.0, e),
        EvTerm::Lam(..) => ev_lam_under(&inner, body, &cod),
        _ => ev_check(&inner, body, &cod),
    }
}

/// Checks a runtime term against `expected`.
pub fn ev_check(ctx: &Context, e: &EvTerm, expected: &Canonical) -> Result<(), TypeError> {
    match (e, expected) {
        (EvTerm::Lam(h, b), Canonical::Pi(_, a, _, bt)) => ev_check(&ctx.push(h.clone(), (**a).clone()), b, bt),
        (EvTerm::Lam(h, b), Canonical::Unknown) => {
            ev_check(&ctx.push(h.clone(), Canonical::Unknown), b, &Canonical::Unknown)
        }
        (EvTerm::Lam(..), _) => Err(err(TypeErrorKind::LambdaAgainst(expected.clone()), ctx)),
        (EvTerm::Err(_), _) => Ok(()),
        (EvTerm::Pi(..), _) => {
            let (_, l) = ev_type_level(ctx, e)?;
            match (expected, l) {
                (Canonical::Unknown, _) | (Canonical::Type(_), Level::Omega) => Ok(()),
                (Canonical::Type(j), Level::Int(i)) if i <= *j => Ok(()),
                _ => Err(err(
                    TypeErrorKind::Inconsistent { expected: expected.clone(), actual: Canonical::universe(l) },
                    ctx,
                )),
            }
        }
        (EvTerm::Ev(w, inner), _) => {
            ev_inner(ctx, &w.0, inner)?;
            if consistent(&w.0, expected) || cumulative(&w.0, expected) {
                Ok(())
            } else {
                Err(err(TypeErrorKind::Inconsistent { expected: expected.clone(), actual: w.0.clone() }, ctx))
            }
        }
        _ => {
            let us = ev_synth(ctx, e)?;
            if cumulative(&us, expected) || consistent(&us, expected) {
                Ok(())
            } else {
                Err(err(TypeErrorKind::Inconsistent { expected: expected.clone(), actual: us }, ctx))
            }
        }
    }
}

/// Normal form and level of a runtime term used as a type.
pub fn ev_type_level(ctx: &Context, e: &EvTerm) -> Result<(Canonical, Level), TypeError> {
    match e {
        EvTerm::Pi(h, a, b) => {
            let (ua, la) = ev_type_level(ctx, a)?;
            let (ub, lb) = ev_type_level(&ctx.push(h.clone(), ua.clone()), b)?;
            let l = la.max(lb);
            Ok((Canonical::Pi(h.clone(), Box::new(ua), l, Box::new(ub)), l))
        }
        EvTerm::Lam(..) => Err(err(TypeErrorKind::CannotSynthesize("a function used as a type"), ctx)),
        _ => {
            let ty = ev_synth(ctx, e)?;
            let l = match ty {
                Canonical::Type(i) => Level::Int(i),
                Canonical::Unknown => Level::Omega,
                ty => return Err(err(TypeErrorKind::NotAType(ty), ctx)),
            };
            Ok((ev_nf(ctx, e, &Canonical::universe(l)), l))
        }
    }
}

fn ev_motive(
    ctx: &Context,
    m: &EvTerm,
    tele: &[(Hint, Canonical)],
    tele_level: Level,
) -> Result<(Canonical, Level), TypeError> {
    let mut c = ctx.clone();
    let mut cur = strip(m);
    let mut peeled = 0;
    for (h, ty) in tele {
        match cur {
            EvTerm::Lam(_, b) => {
                c = c.push(h.clone(), ty.clone());
                cur = b;
                peeled += 1;
            }
            _ => break,
        }
    }
    let l = if peeled == tele.len() {
        ev_type_level(&c, cur)?.1
    } else {
        let ty = ev_synth(ctx, m)?;
        final_level(&ty, tele.len()).ok_or_else(|| err(TypeErrorKind::BadMotive(ty.clone()), ctx))?
    };
    let mty = motive_ty(tele, l, tele_level.max(level_succ(l)));
    ev_check(ctx, m, &mty)?;
    Ok((ev_nf(ctx, m, &mty), l))
}

/// Evidence with the printing used in traces.
pub fn show_evidence(w: &Evidence) -> alloc::string::String {
    alloc::format!("{w}")
}

/// All evidence witnesses at the top of a term's spine, outermost first.
pub fn top_evidence(e: &EvTerm) -> Vec<&Canonical> {
    let mut out = Vec::new();
    let mut cur = e;
    while let EvTerm::Ev(w, inner) = cur {
        out.push(&w.0);
        cur = inner;
    }
    out
}

//! Signatures of the builtin inductives: motive, step and method types, and the
//! argument-by-argument typing plan shared by every checker.
//!
//! Builtins are fully applied n-ary forms. Each argument is checked left to right
//! against a type computed from the normal forms of the arguments before it.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::NormError;
use crate::normalize::{happ, Fuel};
use crate::syntax::{Builtin, Canonical, Hint, Level};

/// Successor on levels; `ω` stays `ω`.
pub fn level_succ(l: Level) -> Level {
    match l {
        Level::Int(i) => Level::Int(i + 1),
        Level::Omega => Level::Omega,
    }
}

/// `(x1 : T1) -> … -> (xn : Tn) -> Type l`, each `Ti` relative to the binders before it.
pub fn motive_ty(tele: &[(Hint, Canonical)], l: Level, ann: Level) -> Canonical {
    tele.iter().rev().fold(Canonical::universe(l), |acc, (h, t)| {
        Canonical::Pi(h.clone(), alloc::boxed::Box::new(t.clone()), ann, alloc::boxed::Box::new(acc))
    })
}

pub fn nat_motive_tele() -> Vec<(Hint, Canonical)> {
    vec![(Hint::new("k"), Canonical::nat())]
}

pub fn vec_motive_tele(a: &Canonical) -> Vec<(Hint, Canonical)> {
    vec![
        (Hint::new("k"), Canonical::nat()),
        (Hint::new("v"), Canonical::vec(a.shift(1, 0), Canonical::var(0))),
    ]
}

pub fn eq_motive_tele(a: &Canonical) -> Vec<(Hint, Canonical)> {
    vec![
        (Hint::new("x"), a.clone()),
        (Hint::new("y"), a.shift(1, 0)),
        (Hint::new("p"), Canonical::eq(a.shift(2, 0), Canonical::var(1), Canonical::var(0))),
    ]
}

/// Applies a motive (or any function) to arguments, given its type.
pub fn apply_motive(
    m: &Canonical,
    mty: &Canonical,
    args: &[Canonical],
    fuel: &mut Fuel,
) -> Result<Canonical, NormError> {
    let mut cur = m.clone();
    let mut ty = mty.clone();
    for a in args {
        let (r, t) = happ(&cur, &ty, a, fuel)?;
        cur = r;
        ty = t;
    }
    Ok(cur)
}

fn pi(h: &str, a: Canonical, ann: Level, b: Canonical) -> Canonical {
    Canonical::pi(h, a, ann, b)
}

/// `(k : Nat) -> (r : m k) -> m (Succ k)`.
pub fn nat_step_ty(m: &Canonical, mty: &Canonical, ann: Level, fuel: &mut Fuel) -> Result<Canonical, NormError> {
    let (m1, t1) = (m.shift(1, 0), mty.shift(1, 0));
    let mk = apply_motive(&m1, &t1, &[Canonical::var(0)], fuel)?;
    let (m2, t2) = (m.shift(2, 0), mty.shift(2, 0));
    let msk = apply_motive(&m2, &t2, &[Canonical::succ(Canonical::var(1))], fuel)?;
    Ok(pi("k", Canonical::nat(), ann, pi("r", mk, ann, msk)))
}

/// `(k : Nat) -> (h : A) -> (t : Vec A k) -> (r : m k t) -> m (Succ k) (Cons A k h t)`.
pub fn vec_step_ty(
    a: &Canonical,
    m: &Canonical,
    mty: &Canonical,
    ann: Level,
    fuel: &mut Fuel,
) -> Result<Canonical, NormError> {
    let v = Canonical::var;
    let r_ty = apply_motive(&m.shift(3, 0), &mty.shift(3, 0), &[v(2), v(0)], fuel)?;
    let out = apply_motive(
        &m.shift(4, 0),
        &mty.shift(4, 0),
        &[Canonical::succ(v(3)), Canonical::cons(a.shift(4, 0), v(3), v(2), v(1))],
        fuel,
    )?;
    Ok(pi(
        "k",
        Canonical::nat(),
        ann,
        pi(
            "h",
            a.shift(1, 0),
            ann,
            pi("t", Canonical::vec(a.shift(2, 0), v(1)), ann, pi("r", r_ty, ann, out)),
        ),
    ))
}

/// `(z : A) -> m z z (Refl A z)`.
pub fn eq_method_ty(
    a: &Canonical,
    m: &Canonical,
    mty: &Canonical,
    ann: Level,
    fuel: &mut Fuel,
) -> Result<Canonical, NormError> {
    let v = Canonical::var;
    let body = apply_motive(
        &m.shift(1, 0),
        &mty.shift(1, 0),
        &[v(0), v(0), Canonical::refl(a.shift(1, 0), v(0))],
        fuel,
    )?;
    Ok(pi("z", a.clone(), ann, body))
}

/// What a checker must establish about one builtin argument.
#[derive(Clone, Debug)]
pub enum ArgSort {
    /// Check against this type; report the normal form.
    Check(Canonical),
    /// The argument must be a type; report its normal form and level.
    Type,
    /// The argument must be a motive over this telescope; report its normal form and the
    /// level of the universe it returns.
    Motive { tele: Vec<(Hint, Canonical)>, tele_level: Level },
}

/// Normal forms of all arguments and the type of the whole application.
#[derive(Clone, Debug)]
pub struct PrimTyping {
    pub args: Vec<Canonical>,
    pub ty: Canonical,
    /// For eliminators, the motive's type; used to type reducts.
    pub motive_ty: Option<Canonical>,
}

/// Runs the typing plan of a fully applied builtin. `arg(i, sort, fuel)` checks the
/// `i`-th argument and returns its normal form (and level, for types and motives).
pub fn prim_plan<E: From<NormError>>(
    b: Builtin,
    fuel: &mut Fuel,
    mut arg: impl FnMut(usize, ArgSort, &mut Fuel) -> Result<(Canonical, Level), E>,
) -> Result<PrimTyping, E> {
    use Canonical as C;
    let one = Level::Int(1);
    let done = |args: Vec<C>, ty: C| PrimTyping { args, ty, motive_ty: None };
    Ok(match b {
        Builtin::Nat => done(vec![], C::Type(1)),
        Builtin::Zero => done(vec![], C::nat()),
        Builtin::Succ => {
            let n = arg(0, ArgSort::Check(C::nat()), fuel)?.0;
            done(vec![n], C::nat())
        }
        Builtin::Vec => {
            let (a, l) = arg(0, ArgSort::Type, fuel)?;
            let n = arg(1, ArgSort::Check(C::nat()), fuel)?.0;
            done(vec![a, n], C::universe(l))
        }
        Builtin::Nil => {
            let (a, _) = arg(0, ArgSort::Type, fuel)?;
            let ty = C::vec(a.clone(), C::zero());
            done(vec![a], ty)
        }
        Builtin::Cons => {
            let (a, _) = arg(0, ArgSort::Type, fuel)?;
            let n = arg(1, ArgSort::Check(C::nat()), fuel)?.0;
            let h = arg(2, ArgSort::Check(a.clone()), fuel)?.0;
            let t = arg(3, ArgSort::Check(C::vec(a.clone(), n.clone())), fuel)?.0;
            let ty = C::vec(a.clone(), C::succ(n.clone()));
            done(vec![a, n, h, t], ty)
        }
        Builtin::Eq => {
            let (a, l) = arg(0, ArgSort::Type, fuel)?;
            let x = arg(1, ArgSort::Check(a.clone()), fuel)?.0;
            let y = arg(2, ArgSort::Check(a.clone()), fuel)?.0;
            done(vec![a, x, y], C::universe(l))
        }
        Builtin::Refl => {
            let (a, _) = arg(0, ArgSort::Type, fuel)?;
            let x = arg(1, ArgSort::Check(a.clone()), fuel)?.0;
            let ty = C::eq(a.clone(), x.clone(), x.clone());
            done(vec![a, x], ty)
        }
        Builtin::NatElim => {
            let tele = nat_motive_tele();
            let (m, l) = arg(0, ArgSort::Motive { tele: tele.clone(), tele_level: one }, fuel)?;
            let mty = motive_ty(&tele, l, one.max(level_succ(l)));
            let ann = one.max(l);
            let z_ty = apply_motive(&m, &mty, &[C::zero()], fuel)?;
            let z = arg(1, ArgSort::Check(z_ty), fuel)?.0;
            let s_ty = nat_step_ty(&m, &mty, ann, fuel)?;
            let s = arg(2, ArgSort::Check(s_ty), fuel)?.0;
            let n = arg(3, ArgSort::Check(C::nat()), fuel)?.0;
            let ty = apply_motive(&m, &mty, core::slice::from_ref(&n), fuel)?;
            PrimTyping { args: vec![m, z, s, n], ty, motive_ty: Some(mty) }
        }
        Builtin::VecElim => {
            let (a, la) = arg(0, ArgSort::Type, fuel)?;
            let n = arg(1, ArgSort::Check(C::nat()), fuel)?.0;
            let tele = vec_motive_tele(&a);
            let tl = one.max(la);
            let (m, l) = arg(2, ArgSort::Motive { tele: tele.clone(), tele_level: tl }, fuel)?;
            let mty = motive_ty(&tele, l, tl.max(level_succ(l)));
            let ann = tl.max(l);
            let z_ty = apply_motive(&m, &mty, &[C::zero(), C::nil(a.clone())], fuel)?;
            let z = arg(3, ArgSort::Check(z_ty), fuel)?.0;
            let s_ty = vec_step_ty(&a, &m, &mty, ann, fuel)?;
            let s = arg(4, ArgSort::Check(s_ty), fuel)?.0;
            let v = arg(5, ArgSort::Check(C::vec(a.clone(), n.clone())), fuel)?.0;
            let ty = apply_motive(&m, &mty, &[n.clone(), v.clone()], fuel)?;
            PrimTyping { args: vec![a, n, m, z, s, v], ty, motive_ty: Some(mty) }
        }
        Builtin::EqElim => {
            let (a, la) = arg(0, ArgSort::Type, fuel)?;
            let tele = eq_motive_tele(&a);
            let (m, l) = arg(1, ArgSort::Motive { tele: tele.clone(), tele_level: la }, fuel)?;
            let mty = motive_ty(&tele, l, la.max(level_succ(l)));
            let ann = la.max(l);
            let mth_ty = eq_method_ty(&a, &m, &mty, ann, fuel)?;
            let mth = arg(2, ArgSort::Check(mth_ty), fuel)?.0;
            let x = arg(3, ArgSort::Check(a.clone()), fuel)?.0;
            let y = arg(4, ArgSort::Check(a.clone()), fuel)?.0;
            let p = arg(5, ArgSort::Check(C::eq(a.clone(), x.clone(), y.clone())), fuel)?.0;
            let ty = apply_motive(&m, &mty, &[x.clone(), y.clone(), p.clone()], fuel)?;
            PrimTyping { args: vec![a, m, mth, x, y, p], ty, motive_ty: Some(mty) }
        }
    })
}

/// The motive type stored for an eliminator frame, rebuilt from its arguments.
/// Reduction only needs it for applying the motive, so levels are `ω`.
pub fn frame_motive_ty(k: Builtin, frame: &[Canonical]) -> Canonical {
    let w = Level::Omega;
    match k {
        Builtin::NatElim => motive_ty(&nat_motive_tele(), w, w),
        Builtin::VecElim => motive_ty(&vec_motive_tele(&frame[0]), w, w),
        Builtin::EqElim => motive_ty(&eq_motive_tele(&frame[0]), w, w),
        _ => Canonical::Unknown,
    }
}

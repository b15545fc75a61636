//! Lattice operations on gradual canonical forms: consistency, precision, meet, and the
//! partial functions `dom`, `cod_sub`, `body_sub`.
//!
//! Arrow level annotations are inferred metadata, so consistency and precision ignore
//! them; meet keeps the more precise one (an integer beats `ω`, the smaller integer
//! beats the larger).

use alloc::vec::Vec;

use crate::error::NormError;
use crate::normalize::{hsub, Fuel};
use crate::syntax::{Canonical, Elim, Level};

pub mod oracle;

/// Deliberately broken variants of the lattice operations, used to check that the
/// property harness notices them.
#[cfg(feature = "mutation-hooks")]
pub mod mutation {
    use core::sync::atomic::{AtomicBool, Ordering};

    static ASYMMETRIC_MEET: AtomicBool = AtomicBool::new(false);

    /// When on, `meet(u, ?)` is undefined for every `u` other than `?`.
    pub fn set_asymmetric_meet(on: bool) {
        ASYMMETRIC_MEET.store(on, Ordering::SeqCst);
    }

    pub(crate) fn asymmetric_meet() -> bool {
        ASYMMETRIC_MEET.load(Ordering::Relaxed)
    }
}

/// `a ≅ b`.
pub fn consistent(a: &Canonical, b: &Canonical) -> bool {
    use Canonical::*;
    match (a, b) {
        (Unknown, _) | (_, Unknown) => true,
        (Lam(_, x), Lam(_, y)) => consistent(x, y),
        (Pi(_, a1, _, b1), Pi(_, a2, _, b2)) => consistent(a1, a2) && consistent(b1, b2),
        (Type(i), Type(j)) => i == j,
        (Neutral(h1, s1), Neutral(h2, s2)) => {
            h1 == h2 && s1.len() == s2.len() && s1.iter().zip(s2).all(|(x, y)| elim_consistent(x, y))
        }
        (Con(b1, x), Con(b2, y)) => b1 == b2 && x.iter().zip(y).all(|(p, q)| consistent(p, q)),
        _ => false,
    }
}

fn elim_consistent(a: &Elim, b: &Elim) -> bool {
    match (a, b) {
        (Elim::App(x), Elim::App(y)) => consistent(x, y),
        (Elim::Frame(k1, x), Elim::Frame(k2, y)) => k1 == k2 && x.iter().zip(y).all(|(p, q)| consistent(p, q)),
        _ => false,
    }
}

/// `a ⊑ b`: `a` is at least as precise as `b`.
pub fn precision(a: &Canonical, b: &Canonical) -> bool {
    use Canonical::*;
    match (a, b) {
        (_, Unknown) => true,
        (Unknown, _) => false,
        (Lam(_, x), Lam(_, y)) => precision(x, y),
        (Pi(_, a1, _, b1), Pi(_, a2, _, b2)) => precision(a1, a2) && precision(b1, b2),
        (Type(i), Type(j)) => i == j,
        (Neutral(h1, s1), Neutral(h2, s2)) => {
            h1 == h2 && s1.len() == s2.len() && s1.iter().zip(s2).all(|(x, y)| elim_precision(x, y))
        }
        (Con(b1, x), Con(b2, y)) => b1 == b2 && x.iter().zip(y).all(|(p, q)| precision(p, q)),
        _ => false,
    }
}

fn elim_precision(a: &Elim, b: &Elim) -> bool {
    match (a, b) {
        (Elim::App(x), Elim::App(y)) => precision(x, y),
        (Elim::Frame(k1, x), Elim::Frame(k2, y)) => k1 == k2 && x.iter().zip(y).all(|(p, q)| precision(p, q)),
        _ => false,
    }
}

/// Equality up to arrow level annotations.
pub fn same_shape(a: &Canonical, b: &Canonical) -> bool {
    precision(a, b) && precision(b, a)
}

/// Meet of two level annotations.
pub fn level_meet(a: Level, b: Level) -> Level {
    core::cmp::min(a, b)
}

/// `a ⊓ b`; `None` exactly when the arguments are inconsistent.
pub fn meet(a: &Canonical, b: &Canonical) -> Option<Canonical> {
    use Canonical::*;
    #[cfg(feature = "mutation-hooks")]
    if mutation::asymmetric_meet() && b.is_unknown() && !a.is_unknown() {
        return None;
    }
    Some(match (a, b) {
        (Unknown, x) | (x, Unknown) => x.clone(),
        (Lam(h, x), Lam(_, y)) => Lam(h.clone(), alloc::boxed::Box::new(meet(x, y)?)),
        (Pi(h, a1, l1, b1), Pi(_, a2, l2, b2)) => Pi(
            h.clone(),
            alloc::boxed::Box::new(meet(a1, a2)?),
            level_meet(*l1, *l2),
            alloc::boxed::Box::new(meet(b1, b2)?),
        ),
        (Type(i), Type(j)) if i == j => Type(*i),
        (Neutral(h1, s1), Neutral(h2, s2)) if h1 == h2 && s1.len() == s2.len() => {
            let sp = s1.iter().zip(s2).map(|(x, y)| elim_meet(x, y)).collect::<Option<Vec<_>>>()?;
            Neutral(*h1, sp)
        }
        (Con(b1, x), Con(b2, y)) if b1 == b2 => {
            Con(*b1, x.iter().zip(y).map(|(p, q)| meet(p, q)).collect::<Option<Vec<_>>>()?)
        }
        _ => return None,
    })
}

fn elim_meet(a: &Elim, b: &Elim) -> Option<Elim> {
    match (a, b) {
        (Elim::App(x), Elim::App(y)) => Some(Elim::App(meet(x, y)?)),
        (Elim::Frame(k1, x), Elim::Frame(k2, y)) if k1 == k2 => Some(Elim::Frame(
            *k1,
            x.iter().zip(y).map(|(p, q)| meet(p, q)).collect::<Option<Vec<_>>>()?,
        )),
        _ => None,
    }
}

/// Domain of a function type; `?` for `?`.
pub fn dom(u: &Canonical) -> Option<Canonical> {
    match u {
        Canonical::Pi(_, a, _, _) => Some((**a).clone()),
        Canonical::Unknown => Some(Canonical::Unknown),
        _ => None,
    }
}

/// Codomain of `u` with `arg` substituted for the bound variable.
pub fn cod_sub(arg: &Canonical, u: &Canonical, fuel: &mut Fuel) -> Result<Option<Canonical>, NormError> {
    match u {
        Canonical::Pi(_, a, _, b) => hsub(arg, a, b, fuel).map(Some),
        Canonical::Unknown => Ok(Some(Canonical::Unknown)),
        _ => Ok(None),
    }
}

/// Body of `f` with `arg : arg_ty` substituted for the bound variable.
pub fn body_sub(
    arg: &Canonical,
    arg_ty: &Canonical,
    f: &Canonical,
    fuel: &mut Fuel,
) -> Result<Option<Canonical>, NormError> {
    match f {
        Canonical::Lam(_, b) => hsub(arg, arg_ty, b, fuel).map(Some),
        Canonical::Unknown => Ok(Some(Canonical::Unknown)),
        _ => Ok(None),
    }
}

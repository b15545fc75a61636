//! Bounded concretization and abstraction, used only as a test oracle.
//!
//! The universe is finite. Leaves are `Type 1`, `Type 2`, `Nat`, `0`, `1`, `2` and one
//! free variable `x` (index 0 at top level, shifted under binders). Larger terms are
//! `Succ u`, `λ. u`, `Vec l l'` and `l -> l'`, where `l`, `l'` are leaves; leaves have
//! depth 0 and each constructor adds one. The gradual universe adds `?` as a leaf.
//!
//! Concretization of a `?`-free term is `{u}` when it fits the depth and empty
//! otherwise. The arguments of `Vec` and of arrows are concretized at leaf positions,
//! which keeps every concretization inside the static universe.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::syntax::{Builtin, Canonical, Hint, Level};

/// Depth used by the acceptance suite.
pub const ORACLE_DEPTH: usize = 3;

fn push_unique(out: &mut Vec<Canonical>, c: Canonical) {
    if !out.contains(&c) {
        out.push(c);
    }
}

/// Static leaves with `binders` enclosing binders.
pub fn leaves(binders: usize) -> Vec<Canonical> {
    vec![
        Canonical::Type(1),
        Canonical::Type(2),
        Canonical::nat(),
        Canonical::numeral(0),
        Canonical::numeral(1),
        Canonical::numeral(2),
        Canonical::var(binders),
    ]
}

fn is_leaf(c: &Canonical) -> bool {
    match c {
        Canonical::Type(_) | Canonical::Unknown => true,
        Canonical::Neutral(_, sp) => sp.is_empty(),
        Canonical::Con(Builtin::Nat, _) => true,
        c => matches!(c.as_numeral(), Some(n) if n <= 2),
    }
}

/// Depth in the oracle's sense: leaves (including numerals up to 2) have depth 0.
pub fn oracle_depth(c: &Canonical) -> usize {
    if is_leaf(c) {
        return 0;
    }
    match c {
        Canonical::Lam(_, b) => 1 + oracle_depth(b),
        Canonical::Pi(_, a, _, b) => 1 + oracle_depth(a).max(oracle_depth(b)),
        Canonical::Con(_, args) => 1 + args.iter().map(oracle_depth).max().unwrap_or(0),
        Canonical::Neutral(_, sp) => {
            1 + sp
                .iter()
                .map(|e| match e {
                    crate::syntax::Elim::App(a) => oracle_depth(a),
                    crate::syntax::Elim::Frame(_, args) => args.iter().map(oracle_depth).max().unwrap_or(0),
                })
                .max()
                .unwrap_or(0)
        }
        _ => 0,
    }
}

fn lam(b: Canonical) -> Canonical {
    Canonical::Lam(Hint::new("y"), Box::new(b))
}

fn arrow(a: Canonical, b: Canonical) -> Canonical {
    Canonical::Pi(Hint::new("_"), Box::new(a), Level::Omega, Box::new(b))
}

fn universe(depth: usize, binders: usize, gradual: bool) -> Vec<Canonical> {
    let mut ls = leaves(binders);
    let mut inner_ls = leaves(binders + 1);
    if gradual {
        ls.push(Canonical::Unknown);
        inner_ls.push(Canonical::Unknown);
    }
    let mut out = ls.clone();
    if depth == 0 {
        return out;
    }
    for s in universe(depth - 1, binders, gradual) {
        push_unique(&mut out, Canonical::succ(s));
    }
    for s in universe(depth - 1, binders + 1, gradual) {
        push_unique(&mut out, lam(s));
    }
    for a in &ls {
        for b in &ls {
            push_unique(&mut out, Canonical::vec(a.clone(), b.clone()));
        }
        for b in &inner_ls {
            push_unique(&mut out, arrow(a.clone(), b.clone()));
        }
    }
    out
}

/// Every static term of the universe up to `depth`.
pub fn static_universe(depth: usize) -> Vec<Canonical> {
    universe(depth, 0, false)
}

/// Every gradual term of the universe up to `depth`.
pub fn gradual_universe(depth: usize) -> Vec<Canonical> {
    universe(depth, 0, true)
}

fn gamma(u: &Canonical, depth: usize, binders: usize, leaf_only: bool) -> Vec<Canonical> {
    if u.is_static() {
        let fits = if leaf_only { is_leaf(u) } else { oracle_depth(u) <= depth };
        return if fits { vec![u.clone()] } else { Vec::new() };
    }
    if let Canonical::Unknown = u {
        return if leaf_only { leaves(binders) } else { universe(depth, binders, false) };
    }
    if leaf_only || depth == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    match u {
        Canonical::Con(Builtin::Succ, a) => {
            for s in gamma(&a[0], depth - 1, binders, false) {
                push_unique(&mut out, Canonical::succ(s));
            }
        }
        Canonical::Lam(_, b) => {
            for s in gamma(b, depth - 1, binders + 1, false) {
                push_unique(&mut out, lam(s));
            }
        }
        Canonical::Con(Builtin::Vec, a) => {
            let xs = gamma(&a[0], 0, binders, true);
            let ys = gamma(&a[1], 0, binders, true);
            for x in &xs {
                for y in &ys {
                    push_unique(&mut out, Canonical::vec(x.clone(), y.clone()));
                }
            }
        }
        Canonical::Pi(_, a, _, b) => {
            let xs = gamma(a, 0, binders, true);
            let ys = gamma(b, 0, binders + 1, true);
            for x in &xs {
                for y in &ys {
                    push_unique(&mut out, arrow(x.clone(), y.clone()));
                }
            }
        }
        _ => {}
    }
    out
}

/// The members of the concretization of `u` that lie in the universe up to `depth`.
pub fn concretize_bounded(u: &Canonical, depth: usize) -> Vec<Canonical> {
    gamma(u, depth, 0, false)
}

/// The abstraction of a non-empty set of static terms; `None` for the empty set.
pub fn abstract_set(s: &[Canonical]) -> Option<Canonical> {
    abstract_at(s, false)
}

/// Arguments of `Vec` and arrows range over leaves only, so a mixed column there is `?`.
fn abstract_at(s: &[Canonical], leaf_only: bool) -> Option<Canonical> {
    let first = s.first()?;
    if s.iter().all(|c| c == first) {
        return Some(first.clone());
    }
    if leaf_only {
        return Some(Canonical::Unknown);
    }
    let column = |f: &dyn Fn(&Canonical) -> Option<Canonical>| -> Option<Vec<Canonical>> {
        s.iter().map(f).collect()
    };
    let abs = match first {
        Canonical::Lam(h, _) => column(&|c| match c {
            Canonical::Lam(_, b) => Some((**b).clone()),
            _ => None,
        })
        .map(|bs| Canonical::Lam(h.clone(), Box::new(abstract_set(&bs).unwrap()))),
        Canonical::Pi(h, _, l, _) => {
            let doms = column(&|c| match c {
                Canonical::Pi(_, a, _, _) => Some((**a).clone()),
                _ => None,
            });
            let cods = column(&|c| match c {
                Canonical::Pi(_, _, _, b) => Some((**b).clone()),
                _ => None,
            });
            let same_level = s.iter().all(|c| matches!(c, Canonical::Pi(_, _, l2, _) if l2 == l));
            match (doms, cods) {
                (Some(d), Some(c)) => Some(Canonical::Pi(
                    h.clone(),
                    Box::new(abstract_at(&d, true).unwrap()),
                    if same_level { *l } else { Level::Omega },
                    Box::new(abstract_at(&c, true).unwrap()),
                )),
                _ => None,
            }
        }
        Canonical::Con(b, args) => {
            let same = s.iter().all(|c| matches!(c, Canonical::Con(b2, _) if b2 == b));
            if same {
                let cols: Vec<Canonical> = (0..args.len())
                    .map(|i| {
                        let col: Vec<Canonical> = s
                            .iter()
                            .map(|c| match c {
                                Canonical::Con(_, a) => a[i].clone(),
                                _ => unreachable!(),
                            })
                            .collect();
                        abstract_at(&col, *b == Builtin::Vec).unwrap()
                    })
                    .collect();
                Some(Canonical::Con(*b, cols))
            } else {
                None
            }
        }
        _ => None,
    };
    Some(abs.unwrap_or(Canonical::Unknown))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Canonical as C;

    #[test]
    fn precise_terms_concretize_to_themselves() {
        assert_eq!(concretize_bounded(&C::nat(), 3), vec![C::nat()]);
        assert_eq!(concretize_bounded(&C::vec(C::nat(), C::numeral(2)), 3).len(), 1);
    }

    #[test]
    fn unknown_at_depth_zero_is_the_alphabet() {
        assert_eq!(concretize_bounded(&C::Unknown, 0), leaves(0));
    }

    #[test]
    fn vec_with_unknown_index() {
        let g = concretize_bounded(&C::vec(C::nat(), C::Unknown), 2);
        for n in 0..=2 {
            assert!(g.contains(&C::vec(C::nat(), C::numeral(n))));
        }
        assert!(g.contains(&C::vec(C::nat(), C::nat())));
        assert_eq!(g.len(), leaves(0).len());
    }

    #[test]
    fn abstraction_examples() {
        assert_eq!(abstract_set(&[C::Type(1)]), Some(C::Type(1)));
        assert_eq!(abstract_set(&[C::nat(), C::Type(1)]), Some(C::Unknown));
        let l0 = C::lam("x", C::numeral(0));
        let l1 = C::lam("x", C::numeral(1));
        assert_eq!(abstract_set(&[l0, l1]), Some(C::lam("x", C::Unknown)));
        assert_eq!(abstract_set(&[]), None);
    }

    #[test]
    fn universe_sizes_are_stable() {
        // Frozen so changes to the alphabet are deliberate.
        assert_eq!(static_universe(0).len(), 7);
        assert_eq!(gradual_universe(0).len(), 8);
        assert!(static_universe(3).len() < 1000);
        assert!(gradual_universe(3).len() < 1500);
    }
}

//! Precision on source terms, evidence terms and normal forms, and the mutation that
//! lowers the precision of a program.

use gdtl_core::gradops::precision;
use gdtl_core::syntax::{Canonical, Elim, EvTerm, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn count_known(t: &Term) -> usize {
    match t {
        Term::Unknown => 0,
        Term::Var(_) | Term::Type(_) => 1,
        Term::Lam(_, b) => 1 + count_known(b),
        Term::App(f, a) | Term::Pi(_, f, a) | Term::Ascribe(f, a) => 1 + count_known(f) + count_known(a),
        Term::Prim(_, args) => 1 + args.iter().map(count_known).sum::<usize>(),
    }
}

/// Replaces the `k`-th non-`?` node (pre-order) by `?`.
fn replace_nth(t: &Term, k: &mut usize) -> Term {
    if !matches!(t, Term::Unknown) {
        if *k == 0 {
            *k = usize::MAX;
            return Term::Unknown;
        }
        *k -= 1;
    }
    match t {
        Term::Var(_) | Term::Type(_) | Term::Unknown => t.clone(),
        Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(replace_nth(b, k))),
        Term::App(f, a) => {
            let f = replace_nth(f, k);
            Term::app(f, replace_nth(a, k))
        }
        Term::Pi(h, a, b) => {
            let a = replace_nth(a, k);
            Term::Pi(h.clone(), Box::new(a), Box::new(replace_nth(b, k)))
        }
        Term::Ascribe(e, ty) => {
            let e = replace_nth(e, k);
            Term::ascribe(e, replace_nth(ty, k))
        }
        Term::Prim(b, args) => Term::Prim(*b, args.iter().map(|a| replace_nth(a, k)).collect()),
    }
}

/// Replaces one uniformly chosen non-`?` subterm (including subterms of ascribed types)
/// by `?`. The result is less precise than the input and differs from it unless the
/// input is `?`.
pub fn lower_precision(t: &Term, seed: u64) -> Term {
    let n = count_known(t);
    if n == 0 {
        return t.clone();
    }
    let mut k = ChaCha8Rng::seed_from_u64(seed).gen_range(0..n);
    replace_nth(t, &mut k)
}

/// `a ⊑ b` on source terms: `b` agrees with `a` except where it has `?`.
pub fn term_precision(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (_, Term::Unknown) => true,
        (Term::Var(i), Term::Var(j)) => i == j,
        (Term::Type(i), Term::Type(j)) => i == j,
        (Term::Lam(_, x), Term::Lam(_, y)) => term_precision(x, y),
        (Term::App(f1, a1), Term::App(f2, a2))
        | (Term::Pi(_, f1, a1), Term::Pi(_, f2, a2))
        | (Term::Ascribe(f1, a1), Term::Ascribe(f2, a2)) => term_precision(f1, f2) && term_precision(a1, a2),
        (Term::Prim(b1, x), Term::Prim(b2, y)) => {
            b1 == b2 && x.len() == y.len() && x.iter().zip(y).all(|(p, q)| term_precision(p, q))
        }
        _ => false,
    }
}

/// Precision of runtime terms after erasing evidence. An `err` on the more precise side
/// is related to anything, since that side is about to fail.
pub fn erased_precision(a: &EvTerm, b: &EvTerm) -> bool {
    match (a, b) {
        (EvTerm::Ev(_, x), _) => erased_precision(x, b),
        (_, EvTerm::Ev(_, y)) => erased_precision(a, y),
        (EvTerm::Err(_), _) | (_, EvTerm::Unknown) => true,
        (EvTerm::Var(i), EvTerm::Var(j)) => i == j,
        (EvTerm::Type(i), EvTerm::Type(j)) => i == j,
        (EvTerm::Lam(_, x), EvTerm::Lam(_, y)) => erased_precision(x, y),
        (EvTerm::App(f1, a1), EvTerm::App(f2, a2)) | (EvTerm::Pi(_, f1, a1), EvTerm::Pi(_, f2, a2)) => {
            erased_precision(f1, f2) && erased_precision(a1, a2)
        }
        (EvTerm::Prim(b1, x), EvTerm::Prim(b2, y)) => {
            b1 == b2 && x.len() == y.len() && x.iter().zip(y).all(|(p, q)| erased_precision(p, q))
        }
        _ => false,
    }
}

/// Precision of runtime terms, evidence included: evidence on the left must be at least
/// as precise as evidence on the right, and `err` is related only to itself.
pub fn ev_precision(a: &EvTerm, b: &EvTerm) -> bool {
    match (a, b) {
        (EvTerm::Ev(w1, x), EvTerm::Ev(w2, y)) => precision(&w1.0, &w2.0) && ev_precision(x, y),
        (_, EvTerm::Unknown) => true,
        (EvTerm::Err(_), EvTerm::Err(_)) => true,
        (EvTerm::Var(i), EvTerm::Var(j)) => i == j,
        (EvTerm::Type(i), EvTerm::Type(j)) => i == j,
        (EvTerm::Lam(_, x), EvTerm::Lam(_, y)) => ev_precision(x, y),
        (EvTerm::App(f1, a1), EvTerm::App(f2, a2)) | (EvTerm::Pi(_, f1, a1), EvTerm::Pi(_, f2, a2)) => {
            ev_precision(f1, f2) && ev_precision(a1, a2)
        }
        (EvTerm::Prim(b1, x), EvTerm::Prim(b2, y)) => {
            b1 == b2 && x.len() == y.len() && x.iter().zip(y).all(|(p, q)| ev_precision(p, q))
        }
        _ => false,
    }
}

/// Appends the innermost variable to a neutral term brought under one more binder.
fn eta_step(head: usize, spine: &[Elim]) -> Canonical {
    let mut spine: Vec<Elim> = spine.iter().map(|e| e.shift(1, 0)).collect();
    spine.push(Elim::App(Canonical::Neutral(0, Vec::new())));
    Canonical::Neutral(head + 1, spine)
}

fn prec_eta(a: &Canonical, b: &Canonical) -> bool {
    use Canonical as C;
    match (a, b) {
        (_, C::Unknown) => true,
        (C::Lam(_, x), C::Lam(_, y)) => prec_eta(x, y),
        (C::Lam(_, x), C::Neutral(h, sp)) => prec_eta(x, &eta_step(*h, sp)),
        (C::Neutral(h, sp), C::Lam(_, y)) => prec_eta(&eta_step(*h, sp), y),
        (C::Pi(_, a1, _, b1), C::Pi(_, a2, _, b2)) => prec_eta(a1, a2) && prec_eta(b1, b2),
        (C::Type(i), C::Type(j)) => i == j,
        (C::Con(k1, x), C::Con(k2, y)) => {
            k1 == k2 && x.len() == y.len() && x.iter().zip(y).all(|(p, q)| prec_eta(p, q))
        }
        (C::Neutral(h1, s1), C::Neutral(h2, s2)) => {
            h1 == h2
                && s1.len() == s2.len()
                && s1.iter().zip(s2).all(|(p, q)| match (p, q) {
                    (Elim::App(x), Elim::App(y)) => prec_eta(x, y),
                    (Elim::Frame(k1, x), Elim::Frame(k2, y)) => {
                        k1 == k2 && x.len() == y.len() && x.iter().zip(y).all(|(p, q)| prec_eta(p, q))
                    }
                    _ => false,
                })
        }
        _ => false,
    }
}

/// Precision of normal forms up to η: a neutral term facing a λ is η-expanded one step
/// at a time until both sides have the same shape. The types must be related by
/// precision as well.
pub fn precision_mod_eta(u1: &Canonical, ty1: &Canonical, u2: &Canonical, ty2: &Canonical) -> bool {
    precision(ty1, ty2) && prec_eta(u1, u2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gdtl_core::surface::parse_term;
    use gdtl_core::syntax::Level;

    fn p(s: &str) -> Term {
        parse_term(s, &[]).unwrap()
    }

    #[test]
    fn lowering_vec_type() {
        let t = p("Vec Nat 0");
        let allowed = [p("Vec Nat ?"), p("Vec ? 0"), Term::Unknown];
        for seed in 0..50 {
            let l = lower_precision(&t, seed);
            assert!(allowed.contains(&l), "{l}");
            assert!(term_precision(&t, &l));
        }
        assert_eq!(lower_precision(&Term::Unknown, 3), Term::Unknown);
    }

    #[test]
    fn lowering_always_changes_known_terms() {
        let t = p("((\\x. Succ x) :: Nat -> Nat) (natElim (\\k. Nat) 0 (\\k r. r) 2)");
        for seed in 0..100 {
            let l = lower_precision(&t, seed);
            assert_ne!(l, t);
            assert!(term_precision(&t, &l));
            assert!(!term_precision(&l, &t));
        }
    }

    #[test]
    fn eta_precision_examples() {
        let arrow = Canonical::arrow(Canonical::nat(), Level::Int(1), Canonical::nat());
        let dyn_arrow = Canonical::arrow(Canonical::Unknown, Level::Omega, Canonical::Unknown);
        // f at Nat -> Nat is λx. f x; f at ? is the bare variable.
        let long = Canonical::lam("x", Canonical::Neutral(1, vec![Elim::App(Canonical::var(0))]));
        let short = Canonical::Neutral(0, Vec::new());
        assert!(precision_mod_eta(&long, &arrow, &short, &Canonical::Unknown));
        assert!(precision_mod_eta(&long, &arrow, &long, &dyn_arrow));
        assert!(precision_mod_eta(&long, &arrow, &long, &arrow));
        assert!(!precision_mod_eta(&Canonical::Type(1), &Canonical::Type(2), &Canonical::nat(), &Canonical::Type(1)));
        let other = Canonical::Neutral(1, Vec::new());
        assert!(!precision_mod_eta(&long, &arrow, &other, &Canonical::Unknown));
    }

    #[test]
    fn evidence_precision() {
        let z = EvTerm::Prim(gdtl_core::syntax::Builtin::Zero, Vec::new());
        let a = EvTerm::ev(Canonical::nat(), z.clone());
        let b = EvTerm::ev(Canonical::Unknown, z);
        assert!(ev_precision(&a, &b));
        assert!(!ev_precision(&b, &a));
        assert!(erased_precision(&b, &a));
        let err = EvTerm::Err(Box::new(gdtl_core::syntax::MeetFailure { left: Canonical::nat(), right: Canonical::Type(1) }));
        assert!(erased_precision(&err, &a));
        assert!(!erased_precision(&a, &err));
    }
}

//! Type-directed generation of well-typed programs.
//!
//! A goal type is drawn from a small closed grammar and a term is built for it. About 30%
//! of choices go to `?` or ascriptions so that gradual paths are exercised. Every output
//! is re-checked; a candidate that fails is discarded and regenerated, and after a
//! bounded number of attempts the size shrinks. `?` always checks, so generation cannot
//! fail for sizes of at least one.

use gdtl_core::normalize::{norm_type_synth_level, Fuel};
use gdtl_core::syntax::{Builtin, Canonical, Context, Hint, Term};
use gdtl_core::typecheck::check;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Share of generation choices that produce `?` or an ascription.
pub const GRADUAL_WEIGHT: f64 = 0.3;

const ATTEMPTS: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    /// Sizes start at one.
    ZeroSize,
}

/// Closed goal types.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Goal {
    Nat,
    Vec(u64),
    Type1,
    EqNat(u64),
    Arrow(Box<Goal>, Box<Goal>),
    /// `(n : Nat) -> Vec Nat n`
    Replicate,
    /// `(A : Type 1) -> A -> A`
    PolyId,
    Dyn,
    /// Context entries whose type the grammar cannot express; never a goal.
    Opaque,
}

fn nat() -> Term {
    Term::nat()
}

fn vec_nat(n: Term) -> Term {
    Term::prim(Builtin::Vec, vec![nat(), n])
}

impl Goal {
    fn term(&self) -> Term {
        match self {
            Goal::Nat => nat(),
            Goal::Vec(k) => vec_nat(Term::numeral(*k)),
            Goal::Type1 => Term::Type(1),
            Goal::EqNat(k) => Term::prim(Builtin::Eq, vec![nat(), Term::numeral(*k), Term::numeral(*k)]),
            Goal::Arrow(a, b) => Term::arrow(a.term(), b.term()),
            Goal::Replicate => Term::pi("n", nat(), vec_nat(Term::var(0))),
            Goal::PolyId => Term::pi("A", Term::Type(1), Term::pi("x", Term::var(0), Term::var(1))),
            Goal::Dyn | Goal::Opaque => Term::Unknown,
        }
    }
}

struct Gen<'r> {
    rng: &'r mut ChaCha8Rng,
    /// Types of the variables in scope, innermost last.
    scope: Vec<Goal>,
}

impl Gen<'_> {
    fn small_goal(&mut self, depth: u32) -> Goal {
        let pick = self.rng.gen_range(0..if depth > 1 { 9 } else { 6 });
        match pick {
            0 | 1 => Goal::Nat,
            2 => Goal::Vec(self.rng.gen_range(0..3)),
            3 => Goal::Type1,
            4 => Goal::EqNat(self.rng.gen_range(0..2)),
            5 => Goal::Dyn,
            6 => Goal::Replicate,
            7 => Goal::PolyId,
            _ => {
                let a = self.small_goal(depth - 1);
                let b = self.small_goal(depth - 1);
                Goal::Arrow(Box::new(a), Box::new(b))
            }
        }
    }

    fn with<T>(&mut self, goals: &[Goal], f: impl FnOnce(&mut Self) -> T) -> T {
        let n = self.scope.len();
        self.scope.extend_from_slice(goals);
        let r = f(self);
        self.scope.truncate(n);
        r
    }

    fn var_for(&mut self, goal: &Goal) -> Option<Term> {
        let n = self.scope.len();
        let hits: Vec<usize> = (0..n)
            .filter(|&i| {
                let g = &self.scope[n - 1 - i];
                g == goal || (*g == Goal::Dyn && *goal != Goal::Opaque)
            })
            .collect();
        hits.choose(&mut *self.rng).map(|&i| Term::var(i))
    }

    /// Variables whose type is an arrow into `goal`, with the argument goal.
    fn callers_of(&self, goal: &Goal) -> Vec<(usize, Goal)> {
        let n = self.scope.len();
        (0..n)
            .filter_map(|i| match &self.scope[n - 1 - i] {
                Goal::Arrow(a, b) if **b == *goal => Some((i, (**a).clone())),
                _ => None,
            })
            .collect()
    }

    fn lower_type(&mut self, ty: Term) -> Term {
        if self.rng.gen_bool(0.5) {
            ty
        } else {
            super::precision::lower_precision(&ty, self.rng.gen())
        }
    }

    fn term(&mut self, goal: &Goal, depth: u32) -> Term {
        if *goal == Goal::Dyn {
            if self.rng.gen_bool(0.25) {
                return Term::Unknown;
            }
            let g = self.small_goal(depth);
            let t = self.term(&g, depth);
            return if self.rng.gen_bool(0.5) { t } else { Term::ascribe(t, Term::Unknown) };
        }
        if self.rng.gen_bool(GRADUAL_WEIGHT) {
            if depth == 0 || self.rng.gen_bool(1.0 / 3.0) {
                return Term::Unknown;
            }
            let inner = self.term(goal, depth - 1);
            let ty = self.lower_type(goal.term());
            return Term::ascribe(inner, ty);
        }
        if self.rng.gen_bool(0.2) {
            if let Some(v) = self.var_for(goal) {
                return v;
            }
        }
        if depth == 0 {
            return self.leaf(goal);
        }
        let d = depth - 1;
        let general = self.rng.gen_range(0..10);
        match general {
            0 => return self.redex(goal, d),
            1 => return self.nat_elim(goal, d),
            2 => return self.eq_elim(goal, d),
            3 => {
                let callers = self.callers_of(goal);
                if let Some((f, a)) = callers.choose(&mut *self.rng).cloned() {
                    let arg = self.term(&a, d);
                    return Term::app(Term::var(f), arg);
                }
            }
            _ => {}
        }
        self.specific(goal, d)
    }

    fn leaf(&mut self, goal: &Goal) -> Term {
        match goal {
            Goal::Nat => Term::numeral(self.rng.gen_range(0..3)),
            Goal::Vec(k) => {
                let mut t = Term::prim(Builtin::Nil, vec![nat()]);
                for i in 0..*k {
                    let h = Term::numeral(self.rng.gen_range(0..3));
                    t = Term::prim(Builtin::Cons, vec![nat(), Term::numeral(i), h, t]);
                }
                t
            }
            Goal::Type1 => nat(),
            Goal::EqNat(k) => Term::prim(Builtin::Refl, vec![nat(), Term::numeral(*k)]),
            Goal::Arrow(a, b) => {
                let body = self.with(&[(**a).clone()], |g| g.leaf(b));
                Term::lam("x", body)
            }
            Goal::Replicate => Term::lam("n", Term::Unknown),
            Goal::PolyId => Term::lam("A", Term::lam("x", Term::var(0))),
            Goal::Dyn | Goal::Opaque => Term::Unknown,
        }
    }

    /// `((\x. body) :: A -> G) arg`
    fn redex(&mut self, goal: &Goal, d: u32) -> Term {
        let a = self.small_goal(1);
        let body = self.with(std::slice::from_ref(&a), |g| g.term(goal, d));
        let arg = self.term(&a, d);
        let f = Term::ascribe(Term::lam("x", body), Term::arrow(a.term(), goal.term()));
        Term::app(f, arg)
    }

    /// `natElim (\k. G) z (\k r. s) n`
    fn nat_elim(&mut self, goal: &Goal, d: u32) -> Term {
        let motive = Term::lam("k", goal.term());
        let z = self.term(goal, d);
        let s = self.with(&[Goal::Nat, goal.clone()], |g| g.term(goal, d));
        let n = self.term(&Goal::Nat, d);
        Term::prim(Builtin::NatElim, vec![motive, z, Term::lam("k", Term::lam("r", s)), n])
    }

    /// `eqElim Nat (\x y p. G) (\z. m) k k proof`
    fn eq_elim(&mut self, goal: &Goal, d: u32) -> Term {
        let k = self.rng.gen_range(0..2);
        let motive = Term::lam("x", Term::lam("y", Term::lam("p", goal.term())));
        let method = self.with(&[Goal::Nat], |g| g.term(goal, d));
        let proof = self.term(&Goal::EqNat(k), d);
        Term::prim(
            Builtin::EqElim,
            vec![nat(), motive, Term::lam("z", method), Term::numeral(k), Term::numeral(k), proof],
        )
    }

    fn specific(&mut self, goal: &Goal, d: u32) -> Term {
        match goal {
            Goal::Nat => match self.rng.gen_range(0..4) {
                0 => Term::prim(Builtin::Succ, vec![self.term(&Goal::Nat, d)]),
                1 => {
                    let f = self.term(&Goal::PolyId, d);
                    let x = self.term(&Goal::Nat, d);
                    Term::apps(f, [nat(), x])
                }
                2 => {
                    // length of a vector
                    let k = self.rng.gen_range(0..3);
                    let v = self.term(&Goal::Vec(k), d);
                    let s = Term::lam("m", Term::lam("h", Term::lam("t", Term::lam("r", self.with(
                        &[Goal::Nat, Goal::Nat, Goal::Opaque, Goal::Nat],
                        |g| g.succ_of_last(d),
                    )))));
                    let motive = Term::lam("m", Term::lam("v", nat()));
                    let z = self.term(&Goal::Nat, d);
                    Term::prim(Builtin::VecElim, vec![nat(), Term::numeral(k), motive, z, s, v])
                }
                _ => self.leaf(goal),
            },
            Goal::Vec(0) => match self.rng.gen_range(0..2) {
                0 => Term::app(self.term(&Goal::Replicate, d), Term::numeral(0)),
                _ => self.leaf(goal),
            },
            Goal::Vec(k) => match self.rng.gen_range(0..2) {
                0 => Term::app(self.term(&Goal::Replicate, d), Term::numeral(*k)),
                _ => {
                    let h = self.term(&Goal::Nat, d);
                    let t = self.term(&Goal::Vec(k - 1), d);
                    Term::prim(Builtin::Cons, vec![nat(), Term::numeral(k - 1), h, t])
                }
            },
            Goal::Type1 => match self.rng.gen_range(0..4) {
                0 => vec_nat(self.term(&Goal::Nat, d)),
                1 => {
                    let x = self.term(&Goal::Nat, d);
                    let y = self.term(&Goal::Nat, d);
                    Term::prim(Builtin::Eq, vec![nat(), x, y])
                }
                2 => {
                    let a = [Goal::Nat, Goal::Vec(1)].choose(&mut *self.rng).cloned().unwrap();
                    let b = self.with(std::slice::from_ref(&a), |g| g.term(&Goal::Type1, d));
                    Term::pi("x", a.term(), b)
                }
                _ => nat(),
            },
            Goal::EqNat(k) => {
                let r = Term::prim(Builtin::Refl, vec![nat(), Term::numeral(*k)]);
                if self.rng.gen_bool(0.3) {
                    Term::ascribe(r, Term::prim(Builtin::Eq, vec![nat(), Term::Unknown, Term::numeral(*k)]))
                } else {
                    r
                }
            }
            Goal::Arrow(a, b) => {
                let body = self.with(&[(**a).clone()], |g| g.term(b, d));
                Term::lam("x", body)
            }
            Goal::Replicate => {
                // \n. natElim (\k. Vec Nat k) (Nil Nat) (\k r. Cons Nat k h r) n
                let h = self.with(&[Goal::Nat, Goal::Nat, Goal::Opaque], |g| g.term(&Goal::Nat, d));
                let step = Term::lam(
                    "k",
                    Term::lam("r", Term::prim(Builtin::Cons, vec![nat(), Term::var(1), h, Term::var(0)])),
                );
                let motive = Term::lam("k", vec_nat(Term::var(0)));
                let nil = Term::prim(Builtin::Nil, vec![nat()]);
                Term::lam("n", Term::prim(Builtin::NatElim, vec![motive, nil, step, Term::var(0)]))
            }
            Goal::PolyId => {
                let body = if self.rng.gen_bool(0.5) { Term::var(0) } else { Term::Unknown };
                Term::lam("A", Term::lam("x", body))
            }
            Goal::Dyn | Goal::Opaque => Term::Unknown,
        }
    }

    /// `Succ r` or some other natural, where `r` is the innermost variable.
    fn succ_of_last(&mut self, d: u32) -> Term {
        if self.rng.gen_bool(0.7) {
            Term::prim(Builtin::Succ, vec![Term::var(0)])
        } else {
            self.term(&Goal::Nat, d)
        }
    }
}

fn canonical_type(t: &Term) -> Canonical {
    norm_type_synth_level(&Context::new(), t, &mut Fuel::default())
        .map(|r| r.0)
        .expect("goal types are well formed")
}

/// A generated program: context, term and the type it checks against.
#[derive(Clone, Debug)]
pub struct Generated {
    pub ctx: Context,
    pub term: Term,
    pub ty: Canonical,
}

fn generate(seed: u64, size: u32, closed: bool) -> Result<Generated, GenError> {
    if size == 0 {
        return Err(GenError::ZeroSize);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut size = size;
    loop {
        for _ in 0..ATTEMPTS {
            let mut g = Gen { rng: &mut rng, scope: Vec::new() };
            let n_vars = if closed { 0 } else { g.rng.gen_range(0..3) };
            for _ in 0..n_vars {
                let goal = match g.rng.gen_range(0..5) {
                    0 => Goal::Nat,
                    1 => Goal::Vec(g.rng.gen_range(0..2)),
                    2 => Goal::Arrow(Box::new(Goal::Nat), Box::new(Goal::Nat)),
                    3 => Goal::Replicate,
                    _ => Goal::Dyn,
                };
                g.scope.push(goal);
            }
            let goal = g.small_goal(size.min(3));
            let term = g.term(&goal, size);
            let mut ctx = Context::new();
            for (goal, name) in g.scope.iter().zip(["x", "y", "z"]) {
                ctx = ctx.push(Hint::new(name), canonical_type(&goal.term()));
            }
            let ty = canonical_type(&goal.term());
            if check(&ctx, &term, &ty, &mut Fuel::default()).is_ok() {
                return Ok(Generated { ctx, term, ty });
            }
        }
        if size == 1 {
            return Ok(Generated { ctx: Context::new(), term: Term::Unknown, ty: Canonical::Unknown });
        }
        size -= 1;
    }
}

/// A well-typed program in a possibly non-empty context. Deterministic in `seed`.
pub fn gen_well_typed(seed: u64, size: u32) -> Result<Generated, GenError> {
    generate(seed, size, false)
}

/// A well-typed closed program, suitable for running.
pub fn gen_closed(seed: u64, size: u32) -> Result<Generated, GenError> {
    generate(seed, size, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_programs_check() {
        for seed in 0..300 {
            let g = gen_well_typed(seed, 1 + (seed % 4) as u32).unwrap();
            assert!(check(&g.ctx, &g.term, &g.ty, &mut Fuel::default()).is_ok(), "seed {seed}: {}", g.term);
        }
    }

    #[test]
    fn deterministic_and_size_checked() {
        let a = gen_well_typed(1, 3).unwrap();
        let b = gen_well_typed(1, 3).unwrap();
        assert_eq!((a.term, a.ty), (b.term, b.ty));
        assert_eq!(gen_well_typed(2, 0).unwrap_err(), GenError::ZeroSize);
        assert!(gen_closed(5, 3).unwrap().ctx.is_empty());
    }

    #[test]
    fn generation_is_not_degenerate() {
        let trivial = (0..200).filter(|&s| gen_closed(s, 3).unwrap().term == Term::Unknown).count();
        assert!(trivial < 40, "{trivial} of 200 programs are just `?`");
        let elims = (0..200)
            .filter(|&s| {
                let t = gen_closed(s, 3).unwrap().term.to_string();
                t.contains("Elim")
            })
            .count();
        assert!(elims > 20, "only {elims} programs use an eliminator");
    }
}

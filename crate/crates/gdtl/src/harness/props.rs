//! Executable metatheory: the three halves of the gradual guarantee and the stepper
//! audit for type safety.

use gdtl_core::evidence::{ev_check, run, step, RunOutcome, StepResult};
use gdtl_core::normalize::{norm_check, Fuel, DEFAULT_NORM_FUEL};
use gdtl_core::syntax::{Context, EvTerm, Term};
use gdtl_core::typecheck::{check, elab_check};
use serde::Serialize;

use super::gen::{gen_closed, gen_well_typed, Generated};
use super::precision::{erased_precision, lower_precision, precision_mod_eta};

/// Extra steps the less precise program may take to catch up with one step of the more
/// precise one.
pub const STUTTER: u64 = 3;

/// The less precise side of a comparison gets this multiple of the fuel.
const IMPRECISE_FUEL_FACTOR: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Static,
    Normalization,
    Dynamic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    /// The precondition of the property did not hold (for example, the more precise
    /// program ran out of fuel).
    Skip,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub original: String,
    pub mutated: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub detail: String,
    pub size: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub seed: u64,
    pub property: Property,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.verdict == Verdict::Fail)
    }

    pub fn count(&self, property: Property, verdict: Verdict) -> usize {
        self.entries.iter().filter(|e| e.property == property && e.verdict == verdict).count()
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("report entries serialize"));
            out.push('\n');
        }
        out
    }
}

/// Generation size for a case, between 2 and 4.
fn case_size(seed: u64) -> u32 {
    2 + (seed % 3) as u32
}

/// Seed of the `i`-th case of a run.
pub fn case_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i)
}

/// `Ok` when the property holds, `Err` with a description when it fails.
pub type Outcome = Result<(), String>;

fn static_case(g: &Generated, lowered: &Term, norm_fuel: u64) -> Option<Outcome> {
    let mut fuel = Fuel::new(norm_fuel * IMPRECISE_FUEL_FACTOR);
    Some(check(&g.ctx, lowered, &g.ty, &mut fuel).map_err(|e| format!("lowered program rejected: {}", e.message())))
}

fn normalization_case(g: &Generated, lowered: &Term, norm_fuel: u64) -> Option<Outcome> {
    let nf1 = norm_check(&g.ctx, &g.term, &g.ty, &mut Fuel::new(norm_fuel)).ok()?;
    let nf2 = match norm_check(&g.ctx, lowered, &g.ty, &mut Fuel::new(norm_fuel * IMPRECISE_FUEL_FACTOR)) {
        Ok(nf) => nf,
        Err(e) => return Some(Err(format!("lowered program did not normalize: {}", e.message()))),
    };
    Some(if precision_mod_eta(&nf1, &g.ty, &nf2, &g.ty) {
        Ok(())
    } else {
        Err(format!("normal forms unrelated: {nf1} vs {nf2}"))
    })
}

/// Lock-step comparison of two runs modulo stuttering. Only a precise run that reaches
/// a value carries an obligation: the less precise run must reach a value above it.
pub fn compare_runs(precise: &EvTerm, imprecise: &EvTerm, fuel: u64) -> Option<Outcome> {
    let mut s = precise.clone();
    let mut r = imprecise.clone();
    let mut r_budget = fuel * IMPRECISE_FUEL_FACTOR;
    let mut steps = 0u64;
    loop {
        let next = match step(&s) {
            StepResult::Value => break,
            StepResult::Error(_) | StepResult::Stuck => return None,
            StepResult::Stepped(next, _) => next,
        };
        // Steps that only rearrange evidence do not change the erased term; take them
        // eagerly so the less precise side does not fall behind unnoticed.
        while r_budget > 0 {
            match step(&r) {
                StepResult::Stepped(next, _) if next.erase() == r.erase() => {
                    r = next;
                    r_budget -= 1;
                }
                _ => break,
            }
        }
        if !erased_precision(&s, &r) {
            let mut caught_up = false;
            for _ in 0..=STUTTER {
                if r_budget == 0 {
                    break;
                }
                match step(&r) {
                    StepResult::Stepped(next, _) => {
                        r = next;
                        r_budget -= 1;
                    }
                    _ => break,
                }
                if erased_precision(&s, &r) {
                    caught_up = true;
                    break;
                }
            }
            if !caught_up {
                return Some(Err(format!("runs diverged after {steps} steps: {s} vs {r}")));
            }
        }
        steps += 1;
        if steps > fuel {
            return None;
        }
        s = next;
    }
    Some(match run(&r, r_budget).outcome {
        RunOutcome::Value(v) if erased_precision(&s, &v) => Ok(()),
        RunOutcome::Value(v) => Err(format!("values unrelated: {s} vs {v}")),
        RunOutcome::Err(f) => Err(format!("less precise run failed: {} vs {}", f.left, f.right)),
        RunOutcome::FuelExhausted(_) => Err(format!("less precise run did not finish; precise value {s}")),
        RunOutcome::Stuck(t) => Err(format!("less precise run stuck at {t}")),
    })
}

fn dynamic_case(g: &Generated, lowered: &Term, fuel: u64, norm_fuel: u64) -> Option<Outcome> {
    let e1 = elab_check(&g.ctx, &g.term, &g.ty, &mut Fuel::new(norm_fuel)).ok()?;
    let e2 = match elab_check(&g.ctx, lowered, &g.ty, &mut Fuel::new(norm_fuel * IMPRECISE_FUEL_FACTOR)) {
        Ok(e) => e,
        Err(e) => return Some(Err(format!("lowered program did not elaborate: {}", e.message()))),
    };
    compare_runs(&e1, &e2, fuel)
}

/// Evaluates one property on the program generated from `seed` at `size`; `None` when the
/// property's precondition does not hold.
pub fn evaluate(property: Property, seed: u64, size: u32, fuel: u64, norm_fuel: u64) -> (Generated, Term, Option<Outcome>) {
    let g = match property {
        Property::Dynamic => gen_closed(seed, size),
        _ => gen_well_typed(seed, size),
    }
    .expect("sizes are positive");
    let lowered = lower_precision(&g.term, seed);
    let outcome = match property {
        Property::Static => static_case(&g, &lowered, norm_fuel),
        Property::Normalization => normalization_case(&g, &lowered, norm_fuel),
        Property::Dynamic => dynamic_case(&g, &lowered, fuel, norm_fuel),
    };
    (g, lowered, outcome)
}

fn run_case(property: Property, seed: u64, fuel: u64, norm_fuel: u64) -> ReportEntry {
    let size = case_size(seed);
    let (g, lowered, outcome) = evaluate(property, seed, size, fuel, norm_fuel);
    let verdict = match &outcome {
        None => Verdict::Skip,
        Some(Ok(())) => Verdict::Pass,
        Some(Err(_)) => Verdict::Fail,
    };
    let mut entry = ReportEntry { seed, property, verdict, counterexample: None };
    if let Some(Err(detail)) = outcome {
        // Shrink: the smallest size at which the same seed still fails.
        let mut best = (g, lowered, detail, size);
        for smaller in 1..size {
            if let (g2, l2, Some(Err(d2))) = evaluate(property, seed, smaller, fuel, norm_fuel) {
                best = (g2, l2, d2, smaller);
                break;
            }
        }
        let (g, lowered, detail, size) = best;
        let names = g.ctx.names();
        entry.counterexample = Some(Counterexample {
            original: gdtl_core::print::term(&g.term, &names),
            mutated: gdtl_core::print::term(&lowered, &names),
            ty: gdtl_core::print::canonical(&g.ty, &names),
            detail,
            size,
        });
    }
    entry
}

/// Checks the static, normalization and dynamic halves of the gradual guarantee on
/// `count` generated programs each.
pub fn check_guarantees(seed: u64, count: u64, fuel: u64) -> Report {
    check_guarantees_with(seed, count, fuel, DEFAULT_NORM_FUEL)
}

pub fn check_guarantees_with(seed: u64, count: u64, fuel: u64, norm_fuel: u64) -> Report {
    let mut report = Report::default();
    for i in 0..count {
        let s = case_seed(seed, i);
        for property in [Property::Static, Property::Normalization, Property::Dynamic] {
            report.entries.push(run_case(property, s, fuel, norm_fuel));
        }
    }
    report
}

/// A state of an elaborated program that is stuck or not accepted by runtime typing.
#[derive(Clone, Debug)]
pub struct SafetyViolation {
    pub seed: u64,
    pub program: String,
    pub step: u64,
    pub state: String,
    pub problem: String,
}

#[derive(Clone, Debug, Default)]
pub struct SafetyAudit {
    pub programs: u64,
    pub states: u64,
    pub values: u64,
    pub errors: u64,
    pub out_of_fuel: u64,
    pub violations: Vec<SafetyViolation>,
}

/// Runs `count` generated closed programs for up to `fuel` steps, checking that every
/// state is a value, `err`, or can step, and that runtime typing accepts it at the
/// program's type.
pub fn audit_type_safety(seed: u64, count: u64, fuel: u64) -> SafetyAudit {
    let mut audit = SafetyAudit::default();
    for i in 0..count {
        let s = case_seed(seed, i);
        let g = gen_closed(s, case_size(s)).expect("sizes are positive");
        let Ok(mut e) = elab_check(&Context::new(), &g.term, &g.ty, &mut Fuel::default()) else {
            audit.violations.push(SafetyViolation {
                seed: s,
                program: g.term.to_string(),
                step: 0,
                state: String::new(),
                problem: "generated program does not elaborate".into(),
            });
            continue;
        };
        audit.programs += 1;
        let mut n = 0;
        loop {
            audit.states += 1;
            let mut violation = |problem: String, e: &EvTerm| {
                audit.violations.push(SafetyViolation {
                    seed: s,
                    program: g.term.to_string(),
                    step: n,
                    state: e.to_string(),
                    problem,
                })
            };
            if let Err(err) = ev_check(&Context::new(), &e, &g.ty) {
                violation(format!("state rejected: {}", err.message()), &e);
                break;
            }
            match step(&e) {
                StepResult::Value => {
                    audit.values += 1;
                    break;
                }
                StepResult::Error(_) => {
                    audit.errors += 1;
                    break;
                }
                StepResult::Stuck => {
                    violation("stuck".into(), &e);
                    break;
                }
                StepResult::Stepped(next, _) => {
                    n += 1;
                    if n > fuel {
                        audit.out_of_fuel += 1;
                        break;
                    }
                    e = next;
                }
            }
        }
    }
    audit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report() {
        assert!(check_guarantees(7, 0, 1000).entries.is_empty());
    }

    #[test]
    fn small_run_has_no_counterexamples() {
        let r = check_guarantees(42, 30, 1000);
        let fails: Vec<_> = r.failures().collect();
        assert!(fails.is_empty(), "{fails:#?}");
        assert_eq!(r.entries.len(), 90);
        assert!(r.count(Property::Dynamic, Verdict::Pass) > 15);
    }

    #[test]
    fn jsonl_lines() {
        let r = check_guarantees(1, 2, 100);
        let text = r.to_jsonl();
        assert_eq!(text.lines().count(), 6);
        let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(v["property"], "static");
        assert!(v.get("seed").is_some() && v.get("verdict").is_some());
    }

    #[test]
    fn small_audit() {
        let a = audit_type_safety(3, 30, 10_000);
        assert!(a.violations.is_empty(), "{:#?}", a.violations);
        assert_eq!(a.programs, 30);
    }
}

//! Random program generation, precision mutation and property checks.

pub mod gen;
pub mod precision;
pub mod props;

pub use gen::{gen_closed, gen_well_typed, GenError, Generated, GRADUAL_WEIGHT};
pub use precision::{erased_precision, ev_precision, lower_precision, precision_mod_eta, term_precision};
pub use props::{
    audit_type_safety, check_guarantees, check_guarantees_with, compare_runs, evaluate, Counterexample, Outcome,
    Property, Report, ReportEntry, SafetyAudit, Verdict,
};

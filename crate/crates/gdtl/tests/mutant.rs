//! The harness must catch a known-bad lattice: meet made asymmetric. The switch is
//! process-global, so everything lives in one test.

use gdtl::harness::{check_guarantees, evaluate, Property, Report};
use gdtl_core::gradops::mutation::set_asymmetric_meet;
use gdtl_core::normalize::DEFAULT_NORM_FUEL;

fn dynamic_failures(r: &Report) -> usize {
    r.failures().filter(|e| e.property == Property::Dynamic).count()
}

#[test]
fn asymmetric_meet_is_caught() {
    let sound = check_guarantees(42, 100, 1000);
    assert_eq!(dynamic_failures(&sound), 0);

    set_asymmetric_meet(true);
    let broken = check_guarantees(42, 100, 1000);
    // Shrinking must keep the failure: the reported size still fails.
    let shrunk_still_fail = broken.failures().all(|e| {
        let c = e.counterexample.as_ref().unwrap();
        matches!(evaluate(e.property, e.seed, c.size, 1000, DEFAULT_NORM_FUEL).2, Some(Err(_)))
    });
    set_asymmetric_meet(false);

    assert!(dynamic_failures(&broken) >= 1, "no counterexample for the asymmetric meet");
    assert!(shrunk_still_fail);
}

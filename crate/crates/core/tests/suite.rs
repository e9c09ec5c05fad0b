mod common;

use common::{sl2_session, window};
use toroidal_core::suite::{self, SuitePlan};

#[test]
fn default_suite_passes() {
    let s = sl2_session(1, 1);
    let plan = SuitePlan::new(window(&s, 2, 1, &["vac", "e", "f(-1,0)*vac", "h(-1,1)*e"]));
    let t = std::time::Instant::now();
    let report = suite::run_suite(&s, &plan);
    eprintln!("{} findings in {:?}", report.findings.len(), t.elapsed());
    for f in report.failures() {
        eprintln!("FAIL {} {} {:?}", f.identity, f.subject, f.witness);
    }
    assert!(report.passed());
}

#[test]
fn every_mutation_is_detected() {
    let s = sl2_session(1, 1);
    let plan = SuitePlan::new(window(&s, 2, 1, &["vac", "e", "f(-1,0)*vac", "h(-1,1)*e"]));
    let t = std::time::Instant::now();
    let out = suite::run_mutations(&s, &plan, &suite::all_mutations(s.lie()));
    eprintln!("{:?}", t.elapsed());
    for o in &out {
        eprintln!("{:40} lie={} va={}", o.description, o.lie_detected, o.va_finding.as_ref().map(|f| f.identity.as_str()).unwrap_or("-"));
    }
    assert!(out.iter().all(|o| o.detected()));
}

//! Mechanical verification of the Hopf, quasitriangular and integral axioms
//! on the full PBW basis.
//!
//! Run with: cargo run --release --example axiom_suites

use fourhb::report::VerificationReport;
use fourhb::uqsl2::verify::VerifyConfig;
use fourhb::uqsl2::UqContext;

fn show(report: &VerificationReport) {
    println!("suite {} at r = {}:", report.suite, report.r);
    for check in &report.checks {
        println!(
            "  [{}] {}{}",
            if check.passed { "pass" } else { "FAIL" },
            check.name,
            check.counterexample.as_deref().map(|w| format!(" ({w})")).unwrap_or_default()
        );
    }
}

fn main() {
    let cfg = VerifyConfig { sample: 200, ..Default::default() };
    for r in [3u64, 4] {
        let uq = UqContext::new(r).unwrap();
        show(&uq.verify_hopf_axioms(&cfg));
        show(&uq.verify_quasitriangular(&cfg));
        show(&uq.verify_integral_laws(&cfg));
        show(&uq.verify_closed_forms());
    }
}

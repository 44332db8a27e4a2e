//! The braided Hopf algebra on the adjoint representation: structure maps,
//! the pre-modular axiom ladder, and the modularity classification.
//!
//! Run with: cargo run --release --example transmutation

use fourhb::tensor::TensorElement;
use fourhb::transmute::{GenName, TransmuteContext};
use fourhb::uqsl2::verify::VerifyConfig;

fn main() {
    let t = TransmuteContext::new(3).unwrap();
    let uq = t.uq();
    let ctx = uq.cyclo();

    // adjoint action and the braiding
    let e = uq.generator_e();
    println!("K |> E = {}", uq.format_element(&t.adjoint_act(&uq.generator_k(), &e)));
    let pair = TensorElement::basis_vector(
        ctx,
        vec![fourhb::uqsl2::Monomial::new(1, 0, 0), fourhb::uqsl2::Monomial::new(0, 1, 0)],
    );
    println!("braid(E (x) F) has {} terms", t.apply_braid(&pair, 0, false).len());

    // the copairing and the stabilization scalar through generator maps
    let empty = TensorElement::unit(ctx, 0);
    let w = t.gen_apply(GenName::WPlus, &empty);
    println!("w+ has {} terms", w.len());
    let v = t.gen_apply(GenName::VPlus, &empty);
    let stab = t.gen_apply(GenName::Lambda, &v).scalar_value(ctx);
    println!("lambda(v+) at r=3 = {}", ctx.format(&stab));

    // the axiom ladder
    let cfg = VerifyConfig { sample: 120, ..Default::default() };
    for rep in [t.verify_braided_hopf(&cfg), t.verify_bp_ribbon(&cfg), t.verify_bp_unimodular(&cfg)]
    {
        println!(
            "suite {:<14} at r=3: {} ({} checks)",
            rep.suite,
            if rep.all_passed() { "all pass" } else { "FAILURES" },
            rep.checks.len()
        );
    }

    // modularity tracks the factorizability classification
    for r in [3u64, 4, 5, 6, 8] {
        let tr = TransmuteContext::new(r).unwrap();
        let rep = tr.verify_modular();
        let ok = rep.check("copairing_nondegenerate").unwrap();
        println!(
            "r = {r}: copairing {}{}",
            if ok.passed { "non-degenerate" } else { "degenerate" },
            ok.counterexample.as_deref().map(|w| format!(" ({w})")).unwrap_or_default()
        );
    }
    // anomaly-freeness fails at r = 3 since lambda(v+) = i
    let rep = t.verify_anomaly_free();
    println!("anomaly-free at r=3: {}", rep.all_passed());
}

//! Slice diagrams of closed Kirby tangles: the fixture library, invariant
//! values, handle-move invariance, and the JSON wire format.
//!
//! Run with: cargo run --release --example kirby_diagrams

use fourhb::kirby::{self, SignedDiagram};
use fourhb::uqsl2::UqContext;

fn main() {
    let uq = UqContext::new(3).unwrap();
    let ctx = uq.cyclo();

    println!("fixture values at r = 3:");
    for (name, diagram) in kirby::fixtures() {
        let census = diagram.validate().unwrap();
        let value = kirby::evaluate_closed(&uq, &diagram).unwrap();
        println!(
            "  {name:<12} ({} undotted, {} dotted): {}",
            census.undotted,
            census.dotted,
            ctx.format(&value)
        );
    }

    // handle moves preserve the invariant
    let hopf = kirby::evaluate_closed(&uq, &kirby::hopf()).unwrap();
    let slid = kirby::evaluate_closed(&uq, &kirby::slide_hopf()).unwrap();
    println!("hopf vs slid hopf: {} vs {}", ctx.format(&hopf), ctx.format(&slid));
    assert_eq!(hopf, slid);

    // signed moves trade a +-1-framed unknot against the signature defect
    let with = SignedDiagram { diagram: kirby::hopf().disjoint_union(&kirby::unknot_plus1()), n: 0 };
    let without = SignedDiagram { diagram: kirby::hopf(), n: -1 };
    assert_eq!(
        kirby::evaluate_signed_closed(&uq, &with).unwrap(),
        kirby::evaluate_signed_closed(&uq, &without).unwrap()
    );
    println!("(K+1) move verified");

    // diagrams serialize to a strict JSON schema
    let text = kirby::unknot_plus1().to_json();
    println!("unknot+1 as JSON:\n{text}");
}

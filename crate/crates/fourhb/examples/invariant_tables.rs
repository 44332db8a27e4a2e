//! The value tables: stabilization coefficients, Hopf link coefficients and
//! the factorizability classification, computed definitionally and compared
//! against their closed forms.
//!
//! Run with: cargo run --release --example invariant_tables

use fourhb::uqsl2::UqContext;

fn main() {
    println!("{:>3}  {:<34} {:<34} {:<6} {:>6}", "r", "lambda(v+) computed", "case formula", "match", "fact.");
    for r in 3..=10u64 {
        let uq = UqContext::new(r).unwrap();
        let ctx = uq.cyclo();
        let computed = uq.integral(&uq.ribbon());
        let closed = uq.stabilization_closed_form();
        println!(
            "{r:>3}  {:<34} {:<34} {:<6} {:>6}",
            ctx.format(&computed),
            ctx.format(&closed),
            computed == closed,
            uq.is_factorizable(),
        );
    }

    println!();
    println!("{:>3}  {:<12} {:<12} match", "r", "(l(x)l)(M)", "(-1)^(r'-1)");
    for r in 3..=8u64 {
        let uq = UqContext::new(r).unwrap();
        let ctx = uq.cyclo();
        let m = uq.m_matrix();
        let val = m.contract_integral(&uq, 0).contract_integral(&uq, 0).scalar_value(ctx);
        let rp = uq.rprime() as i64;
        let closed = ctx.from_int(if (rp - 1) % 2 == 0 { 1 } else { -1 });
        println!("{r:>3}  {:<12} {:<12} {}", ctx.format(&val), ctx.format(&closed), val == closed);
    }
}

//! The small quantum group's structural data: PBW products, R- and
//! M-matrices, ribbon and pivotal elements, integral and cointegral, and the
//! closed forms they must match.
//!
//! Run with: cargo run --example hopf_data

use fourhb::uqsl2::UqContext;

fn main() {
    let uq = UqContext::new(3).expect("r >= 3");
    let ctx = uq.cyclo();
    println!("u_q(sl2) at r = 3: dimension r'^3 = {}", uq.dim());

    // the defining relation, normal ordered
    let fe = uq.multiply(&uq.generator_f(), &uq.generator_e());
    println!("F E = {}", uq.format_element(&fe));

    println!("|R|  = {} terms", uq.r_matrix().len());
    println!("|M|  = {} terms", uq.m_matrix().len());

    let v = uq.ribbon();
    println!("v+   = {}", uq.format_element(&v));
    assert_eq!(v, uq.ribbon_closed_form(), "definitional ribbon = closed form");
    assert_eq!(*uq.m_matrix(), uq.m_matrix_closed_form(), "definitional M = closed form");
    println!("closed forms agree with the definitional constructions");

    let lam = uq.cointegral();
    println!("Lambda = {}", uq.format_element(&lam));
    println!("lambda(Lambda) = {}", ctx.format(&uq.integral(&lam)));
    println!("lambda(v+)     = {}", ctx.format(&uq.integral(&v)));
    println!("lambda(v+) numerically: {:?}", ctx.embed_numeric(&uq.integral(&v)));

    println!("factorizable at r=3: {}", uq.is_factorizable());
    println!("factorizable at r=4: {}", UqContext::new(4).unwrap().is_factorizable());
}

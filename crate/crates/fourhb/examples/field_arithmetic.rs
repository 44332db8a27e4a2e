//! Exact arithmetic in the cyclotomic field Q(zeta_{8r}): roots of unity,
//! quantum integers, Gauss sums, Jacobi symbols and square roots.
//!
//! Run with: cargo run --example field_arithmetic

use fourhb::cyclo::{jacobi, CycloContext};

fn main() {
    let ctx = CycloContext::new(5).expect("r >= 3");
    println!(
        "field Q(zeta_{}), degree {} over Q; r' = {}, r'' = {}",
        ctx.conductor(),
        ctx.degree(),
        ctx.rprime(),
        ctx.rsecond()
    );

    let q = ctx.q_pow(1);
    println!("q = zeta^8          = {}", ctx.format(&q));
    println!("q^r                 = {}", ctx.format(&ctx.q_pow(5)));
    println!("i^2                 = {}", ctx.format(&ctx.mul(&ctx.i_unit(), &ctx.i_unit())));

    // quantum integers vanish first at r'
    for k in 1..=5 {
        println!("[{k}]                 = {}", ctx.format(&ctx.q_int(k)));
    }

    // the Gauss sum identity behind the ribbon closed forms:
    // G(2, 2d, r) = i^{-(r-1)/2} sqrt(r) q^{-(r+1)/2 d^2} for odd r
    let g = ctx.gauss_sum(2, 2, 5).unwrap();
    let sqrt5 = ctx.sqrt_nat(5).unwrap();
    let rhs = ctx.mul(
        &ctx.mul(&ctx.root_of_unity(-2, 4).unwrap(), &sqrt5),
        &ctx.q_pow(-3),
    );
    println!("G(2,2,5)            = {}", ctx.format(&g));
    println!("closed form         = {}", ctx.format(&rhs));
    assert_eq!(g, rhs);

    println!("sqrt(5)^2           = {}", ctx.format(&ctx.mul(&sqrt5, &sqrt5)));
    println!("sqrt(5) numerically = {:.6}", ctx.embed_numeric(&sqrt5).re);

    for n in [5u64, 7, 15] {
        println!("jacobi(2/{n})        = {}", jacobi(2, n).unwrap());
    }
}

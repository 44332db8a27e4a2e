//! Parsing and evaluating morphism words: scalars of closed words, linear
//! maps of open words, and the signed renormalization.
//!
//! Run with: cargo run --example morphism_words

use fourhb::algdsl::{evaluate, evaluate_scalar, evaluate_signed, format, parse, SignedExpr};
use fourhb::tensor::TensorElement;
use fourhb::transmute::TransmuteContext;
use fourhb::uqsl2::Monomial;

fn main() {
    let t = TransmuteContext::new(3).unwrap();
    let ctx = t.uq().cyclo();

    for text in ["vplus ; lambda", "eta ; lambda", "wplus ; (lambda * lambda)"] {
        let e = parse(text).unwrap();
        let value = evaluate_scalar(&t, &e).unwrap();
        println!("{text:<28} = {}", ctx.format(&value));
    }

    // open words act on basis vectors of tensor powers of ad
    let word = parse("delta ; S * id_1 ; mu").unwrap();
    println!("word {:?} has arity {:?}", format(&word), word.arity());
    let x = TensorElement::basis_vector(ctx, vec![Monomial::new(1, 1, 0)]);
    let out = evaluate(&t, &word, &x).unwrap();
    println!("applied to E F: {} term(s)", out.len());

    // arity errors carry byte positions
    match parse("mu ; mu") {
        Err(err) => println!("rejected as expected: {err}"),
        Ok(_) => unreachable!(),
    }

    // the signed renormalization divides by lambda(v+) per unit of defect
    let signed = SignedExpr { expr: parse("vplus ; lambda").unwrap(), n: 1 };
    println!("signed value (n = 1): {}", ctx.format(&evaluate_signed(&t, &signed).unwrap()));
    let t8 = TransmuteContext::new(8).unwrap();
    match evaluate_signed(&t8, &SignedExpr { expr: parse("id_0").unwrap(), n: 1 }) {
        Err(err) => println!("at r = 8: {err}"),
        Ok(_) => unreachable!(),
    }
}

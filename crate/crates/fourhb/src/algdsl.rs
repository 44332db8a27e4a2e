//! Arity-checked term language for morphism words of the free braided
//! monoidal category on the Hopf generators, and the evaluator realizing
//! words as linear maps on tensor powers of the adjoint representation.
//!
//! Grammar (whitespace-insensitive, `#` starts a comment line):
//!
//! ```text
//!   expr   := tensor (';' tensor)*          composition, diagram order, left-assoc
//!   tensor := atom ('*' atom)*              tensor product, binds tighter
//!   atom   := generator | id_N | '(' expr ')'
//! ```
//!
//! Generators: mu, eta, delta, eps, S, Sinv, vplus, vminus, wplus, wminus,
//! lambda, cLambda, braid, braidinv. `f ; g` means f first, then g.

use crate::cyclo::CycloScalar;
use crate::tensor::TensorElement;
use crate::transmute::{GenName, TransmuteContext};
use crate::uqsl2::Monomial;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgdslError {
    #[error("lexical error at byte {pos}: {message}")]
    Lex { pos: usize, message: String },
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("arity mismatch at byte {pos}: cannot compose ({0},{1}) ; ({2},{3})", .left.0, .left.1, .right.0, .right.1)]
    Arity { pos: usize, left: (usize, usize), right: (usize, usize) },
    #[error("expression has arity ({0},{1}), expected a closed (0,0) word", .arity.0, .arity.1)]
    NotClosed { arity: (usize, usize) },
    #[error("input vector has rank {found}, expression expects {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("signed renormalization undefined: the signed invariant requires twist non-degeneracy (lambda(v+) = 0 at r = 0 mod 8)")]
    SignedUndefined,
}

/// Arity-checked morphism word. Arities are cached at construction; invalid
/// composites cannot be built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismExpr {
    Gen(GenName),
    Id(usize),
    Compose(Box<MorphismExpr>, Box<MorphismExpr>, (usize, usize)),
    Tensor(Box<MorphismExpr>, Box<MorphismExpr>, (usize, usize)),
}

impl MorphismExpr {
    pub fn arity(&self) -> (usize, usize) {
        match self {
            MorphismExpr::Gen(g) => g.arity(),
            MorphismExpr::Id(n) => (*n, *n),
            MorphismExpr::Compose(_, _, a) | MorphismExpr::Tensor(_, _, a) => *a,
        }
    }

    /// Diagram-order composition: self first, then g.
    pub fn compose(self, g: MorphismExpr) -> Result<MorphismExpr, AlgdslError> {
        let (m, mid) = self.arity();
        let (mid2, m2) = g.arity();
        if mid != mid2 {
            return Err(AlgdslError::Arity { pos: 0, left: self.arity(), right: g.arity() });
        }
        Ok(MorphismExpr::Compose(Box::new(self), Box::new(g), (m, m2)))
    }

    pub fn tensor(self, g: MorphismExpr) -> MorphismExpr {
        let (a, b) = self.arity();
        let (c, d) = g.arity();
        MorphismExpr::Tensor(Box::new(self), Box::new(g), (a + c, b + d))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Semi,
    Star,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, AlgdslError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            ';' => {
                out.push((Token::Semi, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
            }
            other => {
                return Err(AlgdslError::Lex {
                    pos: i,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.cursor)
    }

    fn pos(&self) -> usize {
        self.peek().map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.cursor).cloned();
        self.cursor += 1;
        t
    }

    fn atom(&mut self) -> Result<MorphismExpr, AlgdslError> {
        let pos = self.pos();
        match self.bump() {
            Some((Token::LParen, _)) => {
                let e = self.expr()?;
                match self.bump() {
                    Some((Token::RParen, _)) => Ok(e),
                    other => Err(AlgdslError::Parse {
                        pos: other.map(|(_, p)| p).unwrap_or(self.end),
                        message: "expected ')'".into(),
                    }),
                }
            }
            Some((Token::Ident(name), p)) => {
                if let Some(g) = GenName::from_token(&name) {
                    return Ok(MorphismExpr::Gen(g));
                }
                if let Some(num) = name.strip_prefix("id_") {
                    return num.parse::<usize>().map(MorphismExpr::Id).map_err(|_| {
                        AlgdslError::Parse {
                            pos: p,
                            message: format!("bad identity arity in {name:?}"),
                        }
                    });
                }
                Err(AlgdslError::Parse { pos: p, message: format!("unknown generator {name:?}") })
            }
            Some((tok, p)) => {
                Err(AlgdslError::Parse { pos: p, message: format!("unexpected token {tok:?}") })
            }
            None => Err(AlgdslError::Parse { pos, message: "unexpected end of input".into() }),
        }
    }

    fn tensor(&mut self) -> Result<MorphismExpr, AlgdslError> {
        let mut acc = self.atom()?;
        while matches!(self.peek(), Some((Token::Star, _))) {
            self.bump();
            let rhs = self.atom()?;
            acc = acc.tensor(rhs);
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<MorphismExpr, AlgdslError> {
        let mut acc = self.tensor()?;
        while matches!(self.peek(), Some((Token::Semi, _))) {
            let (_, p) = self.bump().unwrap();
            let rhs = self.tensor()?;
            acc = acc.compose(rhs).map_err(|e| match e {
                AlgdslError::Arity { left, right, .. } => {
                    AlgdslError::Arity { pos: p, left, right }
                }
                other => other,
            })?;
        }
        Ok(acc)
    }
}

/// Parse a morphism word; `#` begins a comment line.
pub fn parse(text: &str) -> Result<MorphismExpr, AlgdslError> {
    let tokens = lex(text)?;
    if tokens.is_empty() {
        return Err(AlgdslError::Parse { pos: 0, message: "empty expression".into() });
    }
    let mut parser = Parser { tokens, cursor: 0, end: text.len() };
    let e = parser.expr()?;
    if let Some((tok, p)) = parser.peek() {
        return Err(AlgdslError::Parse {
            pos: *p,
            message: format!("trailing input starting with {tok:?}"),
        });
    }
    Ok(e)
}

impl fmt::Display for MorphismExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format(self))
    }
}

/// Canonical text with minimal parentheses; parse(format(e)) == e.
pub fn format(e: &MorphismExpr) -> String {
    fn go(e: &MorphismExpr, out: &mut String) {
        match e {
            MorphismExpr::Gen(g) => out.push_str(g.token()),
            MorphismExpr::Id(n) => {
                out.push_str("id_");
                out.push_str(&n.to_string());
            }
            MorphismExpr::Compose(a, b, _) => {
                go(a, out);
                out.push_str(" ; ");
                // composition is left-associative: a right-nested compose
                // needs parentheses to survive the round trip
                if matches!(**b, MorphismExpr::Compose(..)) {
                    out.push('(');
                    go(b, out);
                    out.push(')');
                } else {
                    go(b, out);
                }
            }
            MorphismExpr::Tensor(a, b, _) => {
                if matches!(**a, MorphismExpr::Compose(..)) {
                    out.push('(');
                    go(a, out);
                    out.push(')');
                } else {
                    go(a, out);
                }
                out.push_str(" * ");
                if matches!(**b, MorphismExpr::Compose(..) | MorphismExpr::Tensor(..)) {
                    out.push('(');
                    go(b, out);
                    out.push(')');
                } else {
                    go(b, out);
                }
            }
        }
    }
    let mut s = String::new();
    go(e, &mut s);
    s
}

/// Evaluate a word on a vector of matching rank.
pub fn evaluate(
    ctx: &TransmuteContext,
    e: &MorphismExpr,
    v: &TensorElement,
) -> Result<TensorElement, AlgdslError> {
    if v.rank() != e.arity().0 {
        return Err(AlgdslError::RankMismatch { expected: e.arity().0, found: v.rank() });
    }
    Ok(eval_inner(ctx, e, v))
}

fn eval_inner(ctx: &TransmuteContext, e: &MorphismExpr, v: &TensorElement) -> TensorElement {
    match e {
        MorphismExpr::Id(_) => v.clone(),
        MorphismExpr::Gen(g) => ctx.gen_apply(*g, v),
        MorphismExpr::Compose(f, g, _) => {
            let mid = eval_inner(ctx, f, v);
            eval_inner(ctx, g, &mid)
        }
        MorphismExpr::Tensor(f, g, _) => {
            let cyclo = ctx.uq().cyclo();
            let split = f.arity().0;
            // group terms by the left block so each linear factor is applied
            // once per distinct basis key
            let mut groups: BTreeMap<Box<[Monomial]>, TensorElement> = BTreeMap::new();
            for (k, c) in v.terms() {
                let (l, r) = k.split_at(split);
                groups
                    .entry(l.to_vec().into_boxed_slice())
                    .or_insert_with(|| TensorElement::zero(k.len() - split))
                    .add_term(cyclo, r.to_vec(), c.clone());
            }
            let mut out = TensorElement::zero(e.arity().1);
            for (l, rtensor) in groups {
                let lv = TensorElement::basis_vector(cyclo, l.to_vec());
                let fl = eval_inner(ctx, f, &lv);
                if fl.is_zero() {
                    continue;
                }
                let gr = eval_inner(ctx, g, &rtensor);
                if gr.is_zero() {
                    continue;
                }
                out = out.add(cyclo, &fl.tensor(cyclo, &gr));
            }
            out
        }
    }
}

/// Evaluate a closed (0,0) word to its scalar.
pub fn evaluate_scalar(
    ctx: &TransmuteContext,
    e: &MorphismExpr,
) -> Result<CycloScalar, AlgdslError> {
    if e.arity() != (0, 0) {
        return Err(AlgdslError::NotClosed { arity: e.arity() });
    }
    let cyclo = ctx.uq().cyclo();
    let out = eval_inner(ctx, e, &TensorElement::unit(cyclo, 0));
    Ok(out.scalar_value(cyclo))
}

/// Closed word with a signature defect, evaluated as lambda(v+)^{-n} times
/// the scalar of the word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedExpr {
    pub expr: MorphismExpr,
    pub n: i64,
}

pub fn evaluate_signed(ctx: &TransmuteContext, s: &SignedExpr) -> Result<CycloScalar, AlgdslError> {
    let cyclo = ctx.uq().cyclo();
    let lam_v = ctx.uq().integral(&ctx.uq().ribbon());
    if cyclo.is_zero(&lam_v) {
        return Err(AlgdslError::SignedUndefined);
    }
    let base = evaluate_scalar(ctx, &s.expr)?;
    let factor = if s.n >= 0 {
        let inv = cyclo.inv(&lam_v).expect("nonzero");
        crate::uqsl2::pow_scalar(cyclo, &inv, s.n as u64)
    } else {
        crate::uqsl2::pow_scalar(cyclo, &lam_v, (-s.n) as u64)
    };
    Ok(cyclo.mul(&factor, &base))
}

/// A word presenting the identity through the Hopf axioms:
/// x -> x_(1) S(x_(2)) x_(3) = x. Used by the functor-identity checks.
pub const HOPF_IDENTITY_WORD: &str = "delta ; id_1 * delta ; id_1 * S * id_1 ; id_1 * mu ; mu";

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_arities() {
        assert_eq!(parse("id_2").unwrap(), MorphismExpr::Id(2));
        assert_eq!(parse("id_2").unwrap().arity(), (2, 2));
        assert_eq!(parse("vplus ; lambda").unwrap().arity(), (0, 0));
        assert_eq!(parse("mu ; delta").unwrap().arity(), (2, 2));
        assert_eq!(parse("wplus ; (lambda * lambda)").unwrap().arity(), (0, 0));
        assert_eq!(parse("# a comment\n mu").unwrap().arity(), (2, 1));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse("mu ; mu") {
            Err(AlgdslError::Arity { pos, left, right }) => {
                assert_eq!(pos, 3);
                assert_eq!(left, (2, 1));
                assert_eq!(right, (2, 1));
            }
            other => panic!("expected arity error, got {other:?}"),
        }
        assert!(matches!(parse("frobnicate"), Err(AlgdslError::Parse { pos: 0, .. })));
        assert!(matches!(parse("mu @"), Err(AlgdslError::Lex { pos: 3, .. })));
        assert!(matches!(parse("(mu"), Err(AlgdslError::Parse { .. })));
        assert!(matches!(parse("id_x"), Err(AlgdslError::Parse { .. })));
        assert!(matches!(parse(""), Err(AlgdslError::Parse { .. })));
    }

    #[test]
    fn format_round_trip_examples() {
        for text in ["vplus ; lambda", "id_0", "lambda * lambda", "mu ; delta"] {
            let e = parse(text).unwrap();
            assert_eq!(format(&e), text);
            assert_eq!(parse(&format(&e)).unwrap(), e);
        }
        // right-nested composition keeps its parentheses
        let inner = parse("S ; Sinv").unwrap();
        let e = MorphismExpr::Gen(GenName::S).compose(inner).unwrap();
        assert_eq!(format(&e), "S ; (S ; Sinv)");
        assert_eq!(parse(&format(&e)).unwrap(), e);
    }

    fn random_expr(rng: &mut ChaCha8Rng, depth: usize) -> MorphismExpr {
        // arity-aware random generation: compose only when arities match,
        // padding with identities otherwise
        if depth == 0 || rng.gen_bool(0.35) {
            if rng.gen_bool(0.3) {
                return MorphismExpr::Id(rng.gen_range(0..4));
            }
            let g = GenName::ALL[rng.gen_range(0..GenName::ALL.len())];
            return MorphismExpr::Gen(g);
        }
        let a = random_expr(rng, depth - 1);
        if rng.gen_bool(0.5) {
            let (_, out) = a.arity();
            let b = random_expr(rng, depth - 1);
            let (bin, _) = b.arity();
            if bin == out {
                return a.compose(b).unwrap();
            }
            if bin < out {
                let padded = b.tensor(MorphismExpr::Id(out - bin));
                return a.compose(padded).unwrap();
            }
            return a.tensor(b);
        }
        let b = random_expr(rng, depth - 1);
        a.tensor(b)
    }

    #[test]
    fn format_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA57);
        for _ in 0..200 {
            let e = random_expr(&mut rng, 4);
            let text = format(&e);
            let back = parse(&text).unwrap_or_else(|err| panic!("reparse {text:?}: {err}"));
            assert_eq!(back, e, "round trip of {text:?}");
        }
    }

    #[test]
    fn evaluate_basics() {
        let ctx = TransmuteContext::new(3).unwrap();
        let cyclo = ctx.uq().cyclo();
        let id1 = parse("id_1").unwrap();
        for m in ctx.uq().basis() {
            let v = TensorElement::basis_vector(cyclo, vec![m]);
            assert_eq!(evaluate(&ctx, &id1, &v).unwrap(), v);
        }
        // eta ; S = unit (S(1) = 1)
        let e = parse("eta ; S").unwrap();
        let out = evaluate(&ctx, &e, &TensorElement::unit(cyclo, 0)).unwrap();
        assert_eq!(out, TensorElement::from_element(&ctx.uq().one_element()));
        let v = TensorElement::unit(cyclo, 2);
        assert!(matches!(
            evaluate(&ctx, &id1, &v),
            Err(AlgdslError::RankMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn evaluate_matches_direct_composition() {
        let ctx = TransmuteContext::new(3).unwrap();
        let cyclo = ctx.uq().cyclo();
        let e = parse("delta ; mu").unwrap();
        for m in ctx.uq().basis() {
            let v = TensorElement::basis_vector(cyclo, vec![m]);
            let via_word = evaluate(&ctx, &e, &v).unwrap();
            let direct = ctx.apply_mu(&ctx.apply_delta(&v, 0), 0);
            assert_eq!(via_word, direct);
        }
    }

    #[test]
    fn scalar_examples() {
        let ctx3 = TransmuteContext::new(3).unwrap();
        let c3 = ctx3.uq().cyclo();
        let s = evaluate_scalar(&ctx3, &parse("vplus ; lambda").unwrap()).unwrap();
        assert_eq!(s, c3.i_unit());
        let z = evaluate_scalar(&ctx3, &parse("eta ; lambda").unwrap()).unwrap();
        assert!(c3.is_zero(&z));
        let ctx4 = TransmuteContext::new(4).unwrap();
        let c4 = ctx4.uq().cyclo();
        let h = evaluate_scalar(&ctx4, &parse("wplus ; (lambda * lambda)").unwrap()).unwrap();
        assert_eq!(h, c4.from_int(-1));
        assert!(matches!(
            evaluate_scalar(&ctx3, &parse("vplus").unwrap()),
            Err(AlgdslError::NotClosed { arity: (0, 1) })
        ));
    }

    #[test]
    fn copairing_definable_from_ribbon() {
        // w+ = Delta(v+) . (v- (x) v-) as a word, against the cached tensor
        let ctx = TransmuteContext::new(3).unwrap();
        let cyclo = ctx.uq().cyclo();
        let word =
            parse("vplus ; delta ; id_1 * vminus * id_1 ; id_3 * vminus ; mu * mu").unwrap();
        assert_eq!(word.arity(), (0, 2));
        let out = evaluate(&ctx, &word, &TensorElement::unit(cyclo, 0)).unwrap();
        assert_eq!(&out, ctx.w_plus());
    }

    #[test]
    fn signed_evaluation() {
        let ctx = TransmuteContext::new(3).unwrap();
        let c = ctx.uq().cyclo();
        let one =
            evaluate_signed(&ctx, &SignedExpr { expr: parse("id_0").unwrap(), n: 0 }).unwrap();
        assert_eq!(one, c.one());
        // removing a positive stabilization lowers the defect
        let s1 = evaluate_signed(
            &ctx,
            &SignedExpr { expr: parse("vplus ; lambda").unwrap(), n: 1 },
        )
        .unwrap();
        assert_eq!(s1, c.one());
        // twist-degenerate orders reject the signed renormalization
        let ctx8 = TransmuteContext::new(8).unwrap();
        assert!(matches!(
            evaluate_signed(&ctx8, &SignedExpr { expr: parse("id_0").unwrap(), n: 1 }),
            Err(AlgdslError::SignedUndefined)
        ));
    }

    #[test]
    fn hopf_identity_word_is_identity() {
        let ctx = TransmuteContext::new(3).unwrap();
        let cyclo = ctx.uq().cyclo();
        let e = parse(HOPF_IDENTITY_WORD).unwrap();
        assert_eq!(e.arity(), (1, 1));
        for m in ctx.uq().basis() {
            let v = TensorElement::basis_vector(cyclo, vec![m]);
            assert_eq!(evaluate(&ctx, &e, &v).unwrap(), v, "identity word at {m}");
        }
    }

    #[test]
    fn functoriality_and_interchange() {
        let ctx = TransmuteContext::new(3).unwrap();
        let cyclo = ctx.uq().cyclo();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let f = parse("delta").unwrap();
        let g = parse("braid").unwrap();
        let fp = parse("S").unwrap();
        let gp = parse("Sinv").unwrap();
        for _ in 0..20 {
            let m = crate::uqsl2::verify::random_monomial(ctx.uq(), &mut rng);
            let v = TensorElement::basis_vector(cyclo, vec![m]);
            let fg = f.clone().compose(g.clone()).unwrap();
            let lhs = evaluate(&ctx, &fg, &v).unwrap();
            let rhs = evaluate(&ctx, &g, &evaluate(&ctx, &f, &v).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            // interchange: (f (x) f') ; (g (x) g') = (f ; g) (x) (f' ; g')
            let m2 = crate::uqsl2::verify::random_monomial(ctx.uq(), &mut rng);
            let w = TensorElement::basis_vector(cyclo, vec![m, m2]);
            let left =
                f.clone().tensor(fp.clone()).compose(g.clone().tensor(gp.clone())).unwrap();
            let right = f
                .clone()
                .compose(g.clone())
                .unwrap()
                .tensor(fp.clone().compose(gp.clone()).unwrap());
            assert_eq!(
                evaluate(&ctx, &left, &w).unwrap(),
                evaluate(&ctx, &right, &w).unwrap()
            );
        }
    }
}

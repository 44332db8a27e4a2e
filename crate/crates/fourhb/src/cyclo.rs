//! Exact arithmetic in the cyclotomic field Q(zeta_L) with conductor L = 8r.
//!
//! A single conductor hosts every scalar the computation needs: the root of
//! unity q = zeta_L^8 of order r, the imaginary unit i = zeta_L^{L/4}, and the
//! square roots sqrt(2), sqrt(r'), sqrt(r'') (sqrt(m) lies in Q(zeta_{4m}) and
//! 4m divides 8r for all three). Elements are residues modulo the L-th
//! cyclotomic polynomial, stored as integer coefficient vectors over a common
//! positive denominator, so equality is coefficientwise and exact.
//!
//! Coefficients live in machine words with a checked promotion to big
//! integers; the axiom suites spend almost all of their time multiplying
//! these scalars, and the small representation keeps that path allocation
//! light. Canonical form (fully reduced, demoted to the small representation
//! whenever it fits) makes derived equality and hashing sound.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("root-of-unity order must satisfy r >= 3, got {0}")]
    OrderTooSmall(u64),
    #[error("division by zero scalar (degenerate normalization)")]
    DivisionByZero,
    #[error("{0} does not divide the conductor {1}")]
    NotDividingConductor(u64, u64),
    #[error("jacobi symbol requires an odd positive modulus, got {0}")]
    EvenModulus(u64),
    #[error("quantum binomial undefined: denominator [{0}]! [{1}]! vanishes at this order")]
    BinomUndefined(u64, u64),
    #[error("sqrt({0}) not representable: 4*{0} does not divide the conductor")]
    SqrtUnsupported(u64),
}

/// Element of Q(zeta_L): integer polynomial of degree < phi(L) over a common
/// positive denominator, fully reduced. Two elements are equal iff their
/// representations are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloScalar {
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: Vec<i64>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

impl CycloScalar {
    /// Numerator coefficients as big integers (constant term first).
    pub fn numerator(&self) -> Vec<BigInt> {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().map(|&c| BigInt::from(c)).collect(),
            Repr::Big { num, .. } => num.clone(),
        }
    }

    pub fn denominator(&self) -> BigInt {
        match &self.repr {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big { den, .. } => den.clone(),
        }
    }
}

/// Immutable arithmetic context for Q(zeta_L), L = 8r. All operations are
/// pure functions of the context; it can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct CycloContext {
    r: u64,
    l: u64,
    deg: usize,
    /// Monic integer coefficients of Phi_L, length deg + 1, constant term first.
    phi: Vec<BigInt>,
    /// Residue of x^e modulo Phi_L for every e in 0..max(L, 2*deg - 1).
    rows: Vec<Vec<BigInt>>,
    /// i64 mirror of `rows`; cyclotomic coefficients at these conductors are
    /// tiny, so the mirror always exists in practice.
    rows_small: Vec<Option<Vec<i64>>>,
    rprime: u64,
    rsecond: u64,
}

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map_or(false, Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Exact division of integer polynomials; panics if the division is inexact.
/// Only used on cyclotomic factors of x^n - 1, where exactness is guaranteed.
fn poly_divexact(num: &[BigInt], div: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    poly_trim(&mut rem);
    let mut div = div.to_vec();
    poly_trim(&mut div);
    let dlead = div.last().unwrap().clone();
    assert!(!dlead.is_zero());
    if rem.len() < div.len() {
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        return vec![BigInt::zero()];
    }
    let qdeg = rem.len() - div.len();
    let mut quot = vec![BigInt::zero(); qdeg + 1];
    for k in (0..=qdeg).rev() {
        let lead = rem[k + div.len() - 1].clone();
        let (c, residue) = lead.div_rem(&dlead);
        assert!(residue.is_zero(), "inexact polynomial division");
        if c.is_zero() {
            continue;
        }
        for (j, dj) in div.iter().enumerate() {
            let t = dj * &c;
            rem[k + j] -= t;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// n-th cyclotomic polynomial by iterated exact division of x^n - 1 by
/// Phi_d over all proper divisors d of n.
fn cyclotomic_poly(n: u64, cache: &mut std::collections::HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d, cache);
            p = poly_divexact(&p, &phi_d);
        }
    }
    poly_trim(&mut p);
    cache.insert(n, p.clone());
    p
}

fn content_big(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        if !c.is_zero() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn to_small(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|c| c.to_i64()).collect()
}

impl CycloContext {
    /// Builds the context for order r (conductor L = 8r). Rejects r < 3.
    pub fn new(r: u64) -> Result<Self, CycloError> {
        if r < 3 {
            return Err(CycloError::OrderTooSmall(r));
        }
        let l = 8 * r;
        let mut cache = std::collections::HashMap::new();
        let phi = cyclotomic_poly(l, &mut cache);
        let deg = phi.len() - 1;

        // x^e mod Phi_L for every exponent a product or root lookup can reach
        let nrows = std::cmp::max(l as usize + 1, 2 * deg);
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(nrows);
        for e in 0..nrows {
            if e < deg {
                let mut row = vec![BigInt::zero(); deg];
                row[e] = BigInt::one();
                rows.push(row);
            } else {
                // x^e = x * x^{e-1}: shift and fold the leading term against
                // the monic relation x^deg = -(phi[0..deg])
                let prev = &rows[e - 1];
                let mut row = vec![BigInt::zero(); deg];
                for k in 1..deg {
                    row[k] = prev[k - 1].clone();
                }
                let lead = prev[deg - 1].clone();
                if !lead.is_zero() {
                    for k in 0..deg {
                        let t = &phi[k] * &lead;
                        row[k] -= t;
                    }
                }
                rows.push(row);
            }
        }
        let rows_small = rows.iter().map(|r| to_small(r)).collect();
        let rprime = r / r.gcd(&2);
        let rsecond = r / r.gcd(&4);
        Ok(CycloContext { r, l, deg, phi, rows, rows_small, rprime, rsecond })
    }

    pub fn order(&self) -> u64 {
        self.r
    }

    pub fn conductor(&self) -> u64 {
        self.l
    }

    /// Degree phi(L) of the field over Q.
    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn rprime(&self) -> u64 {
        self.rprime
    }

    pub fn rsecond(&self) -> u64 {
        self.rsecond
    }

    pub fn phi_coeffs(&self) -> &[BigInt] {
        &self.phi
    }

    fn normalize_small(&self, mut num: Vec<i64>, mut den: i64) -> CycloScalar {
        assert!(den != 0);
        if den < 0 {
            den = -den;
            for c in &mut num {
                *c = -*c;
            }
        }
        let mut g = 0i64;
        for &c in &num {
            if c != 0 {
                g = gcd_i64(g, c);
                if g == 1 {
                    break;
                }
            }
        }
        if g == 0 {
            return CycloScalar { repr: Repr::Small { num, den: 1 } };
        }
        g = gcd_i64(g, den);
        if g > 1 {
            for c in &mut num {
                *c /= g;
            }
            den /= g;
        }
        CycloScalar { repr: Repr::Small { num, den } }
    }

    fn normalize_big(&self, mut num: Vec<BigInt>, mut den: BigInt) -> CycloScalar {
        assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = content_big(&num);
        if g.is_zero() {
            return CycloScalar { repr: Repr::Small { num: vec![0; num.len()], den: 1 } };
        }
        g = g.gcd(&den);
        if !g.is_one() {
            for c in &mut num {
                *c = &*c / &g;
            }
            den = den / g;
        }
        // demote to the small representation whenever everything fits
        if let (Some(small), Some(d)) = (to_small(&num), den.to_i64()) {
            return CycloScalar { repr: Repr::Small { num: small, den: d } };
        }
        CycloScalar { repr: Repr::Big { num, den } }
    }

    fn to_big_parts(&self, x: &CycloScalar) -> (Vec<BigInt>, BigInt) {
        match &x.repr {
            Repr::Small { num, den } => {
                (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den))
            }
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    pub fn zero(&self) -> CycloScalar {
        CycloScalar { repr: Repr::Small { num: vec![0; self.deg], den: 1 } }
    }

    pub fn one(&self) -> CycloScalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> CycloScalar {
        let mut num = vec![0i64; self.deg];
        num[0] = n;
        CycloScalar { repr: Repr::Small { num, den: 1 } }
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> CycloScalar {
        assert!(d != 0);
        let mut num = vec![0i64; self.deg];
        num[0] = n;
        self.normalize_small(num, d)
    }

    /// Rebuilds a scalar from raw wire data, reducing to canonical form.
    pub fn from_parts(&self, num: Vec<BigInt>, den: BigInt) -> CycloScalar {
        assert_eq!(num.len(), self.deg);
        self.normalize_big(num, den)
    }

    pub fn is_zero(&self, x: &CycloScalar) -> bool {
        match &x.repr {
            Repr::Small { num, .. } => num.iter().all(|&c| c == 0),
            Repr::Big { num, .. } => num.iter().all(Zero::is_zero),
        }
    }

    pub fn add(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        if let (Repr::Small { num: na, den: da }, Repr::Small { num: nb, den: db }) =
            (&a.repr, &b.repr)
        {
            // work over the product denominator in i128 and reduce once
            let da = *da as i128;
            let db = *db as i128;
            let g = gcd_i128(da, db);
            let (fa, fb) = (db / g, da / g);
            let den = da / g * db;
            let mut wide = Vec::with_capacity(na.len());
            let mut fits = true;
            for (x, y) in na.iter().zip(nb) {
                let v = *x as i128 * fa + *y as i128 * fb;
                if v.abs() > i64::MAX as i128 {
                    fits = false;
                }
                wide.push(v);
            }
            if fits && den.abs() <= i64::MAX as i128 {
                return self
                    .normalize_small(wide.into_iter().map(|v| v as i64).collect(), den as i64);
            }
            let num = wide.into_iter().map(BigInt::from).collect();
            return self.normalize_big(num, BigInt::from(den));
        }
        let (na, da) = self.to_big_parts(a);
        let (nb, db) = self.to_big_parts(b);
        let den = da.lcm(&db);
        let fa = &den / &da;
        let fb = &den / &db;
        let num = na.iter().zip(&nb).map(|(x, y)| x * &fa + y * &fb).collect();
        self.normalize_big(num, den)
    }

    pub fn neg(&self, a: &CycloScalar) -> CycloScalar {
        match &a.repr {
            Repr::Small { num, den } => CycloScalar {
                repr: Repr::Small { num: num.iter().map(|&c| -c).collect(), den: *den },
            },
            Repr::Big { num, den } => CycloScalar {
                repr: Repr::Big { num: num.iter().map(|c| -c).collect(), den: den.clone() },
            },
        }
    }

    pub fn sub(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        if self.is_zero(a) || self.is_zero(b) {
            return self.zero();
        }
        if let (Repr::Small { num: na, den: da }, Repr::Small { num: nb, den: db }) =
            (&a.repr, &b.repr)
        {
            if let Some(out) = self.mul_small(na, nb) {
                let den = *da as i128 * *db as i128;
                let mut fits = den.abs() <= i64::MAX as i128;
                if fits {
                    for &v in &out {
                        if v.abs() > i64::MAX as i128 {
                            fits = false;
                            break;
                        }
                    }
                }
                if fits {
                    return self.normalize_small(
                        out.into_iter().map(|v| v as i64).collect(),
                        den as i64,
                    );
                }
                return self.normalize_big(
                    out.into_iter().map(BigInt::from).collect(),
                    BigInt::from(den),
                );
            }
        }
        let (na, da) = self.to_big_parts(a);
        let (nb, db) = self.to_big_parts(b);
        let conv = poly_mul(&na, &nb);
        let num = self.reduce_conv_big(&conv);
        self.normalize_big(num, da * db)
    }

    /// i64 convolution fast path; returns None when intermediate values may
    /// not fit the i128 accumulators.
    fn mul_small(&self, na: &[i64], nb: &[i64]) -> Option<Vec<i128>> {
        let ma = na.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0) as u128;
        let mb = nb.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0) as u128;
        if ma == 0 || mb == 0 {
            return Some(vec![0i128; self.deg]);
        }
        let n = self.deg as u128;
        let bound = n.checked_mul(ma)?.checked_mul(mb)?;
        if bound > (1u128 << 80) {
            return None;
        }
        let mut conv = vec![0i128; 2 * self.deg - 1];
        for (i, &ai) in na.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in nb.iter().enumerate() {
                if bj != 0 {
                    conv[i + j] += ai as i128 * bj as i128;
                }
            }
        }
        let mut out = vec![0i128; self.deg];
        out[..self.deg].copy_from_slice(&conv[..self.deg]);
        for e in self.deg..conv.len() {
            let c = conv[e];
            if c == 0 {
                continue;
            }
            let row = self.rows_small[e].as_ref()?;
            for (k, &rk) in row.iter().enumerate() {
                if rk != 0 {
                    out[k] = out[k].checked_add(c.checked_mul(rk as i128)?)?;
                }
            }
        }
        Some(out)
    }

    fn reduce_conv_big(&self, conv: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.deg];
        for (k, c) in conv.iter().enumerate().take(self.deg) {
            out[k] = c.clone();
        }
        for (e, c) in conv.iter().enumerate().skip(self.deg) {
            if c.is_zero() {
                continue;
            }
            for (k, rk) in self.rows[e].iter().enumerate() {
                if !rk.is_zero() {
                    out[k] += c * rk;
                }
            }
        }
        out
    }

    pub fn mul_int(&self, a: &CycloScalar, n: i64) -> CycloScalar {
        if n == 0 {
            return self.zero();
        }
        if let Repr::Small { num, den } = &a.repr {
            let mut wide = Vec::with_capacity(num.len());
            let mut fits = true;
            for &c in num {
                let v = c as i128 * n as i128;
                if v.abs() > i64::MAX as i128 {
                    fits = false;
                }
                wide.push(v);
            }
            if fits {
                return self.normalize_small(wide.into_iter().map(|v| v as i64).collect(), *den);
            }
        }
        let (num, den) = self.to_big_parts(a);
        self.normalize_big(num.into_iter().map(|c| c * n).collect(), den)
    }

    /// Field inverse by the extended Euclidean algorithm against Phi_L.
    pub fn inv(&self, a: &CycloScalar) -> Result<CycloScalar, CycloError> {
        if self.is_zero(a) {
            return Err(CycloError::DivisionByZero);
        }
        // Q[x] arithmetic with (numerator, denominator) polynomials; this is
        // the cold path, big integers throughout
        #[derive(Clone)]
        struct QP {
            num: Vec<BigInt>,
            den: BigInt,
        }
        fn deg(p: &QP) -> Option<usize> {
            p.num.iter().rposition(|c| !c.is_zero())
        }
        fn simplify(mut p: QP) -> QP {
            let mut g = content_big(&p.num);
            if g.is_zero() {
                return QP { num: vec![BigInt::zero()], den: BigInt::one() };
            }
            g = g.gcd(&p.den);
            if !g.is_one() {
                for c in &mut p.num {
                    *c = &*c / &g;
                }
                p.den = &p.den / &g;
            }
            if p.den.is_negative() {
                p.den = -p.den;
                for c in &mut p.num {
                    *c = -std::mem::take(c);
                }
            }
            p
        }
        fn sub_mul(a: &QP, q: &QP, b: &QP) -> QP {
            // a - q*b over the common denominator a.den * q.den * b.den
            let qb = poly_mul(&q.num, &b.num);
            let den = &a.den * &q.den * &b.den;
            let scale_a = &q.den * &b.den;
            let mut num = vec![BigInt::zero(); std::cmp::max(a.num.len(), qb.len())];
            for (k, c) in a.num.iter().enumerate() {
                num[k] = c * &scale_a;
            }
            for (k, c) in qb.iter().enumerate() {
                num[k] -= c * &a.den;
            }
            simplify(QP { num, den })
        }

        let (anum, aden) = self.to_big_parts(a);
        let mut r0 = QP { num: self.phi.clone(), den: BigInt::one() };
        let mut r1 = QP { num: anum, den: aden };
        let mut t0 = QP { num: vec![BigInt::zero()], den: BigInt::one() };
        let mut t1 = QP { num: vec![BigInt::one()], den: BigInt::one() };
        while let Some(d1) = deg(&r1) {
            if d1 == 0 {
                break;
            }
            let d0 = deg(&r0).expect("gcd chain cannot hit zero before a constant");
            if d0 < d1 {
                std::mem::swap(&mut r0, &mut r1);
                std::mem::swap(&mut t0, &mut t1);
                continue;
            }
            let lead1 = r1.num[d1].clone();
            let mut qnum = vec![BigInt::zero(); d0 - d1 + 1];
            qnum[d0 - d1] = r0.num[d0].clone() * &r1.den;
            let q = simplify(QP { num: qnum, den: &r0.den * &lead1 });
            let r2 = sub_mul(&r0, &q, &r1);
            let t2 = sub_mul(&t0, &q, &t1);
            r0 = r1;
            r1 = r2;
            t0 = t1;
            t1 = t2;
        }
        let d = deg(&r1).ok_or(CycloError::DivisionByZero)?;
        assert_eq!(d, 0, "Phi_L must be coprime to any nonzero residue");
        // inverse = t1 / r1(constant)
        let c_num = r1.num[0].clone();
        let c_den = r1.den.clone();
        let mut num = vec![BigInt::zero(); self.deg];
        for (k, v) in t1.num.iter().enumerate().take(self.deg) {
            num[k] = v * &c_den;
        }
        Ok(self.normalize_big(num, &t1.den * c_num))
    }

    pub fn div(&self, a: &CycloScalar, b: &CycloScalar) -> Result<CycloScalar, CycloError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Ring automorphism zeta_L -> zeta_L^{-1} (complex conjugation).
    pub fn conj(&self, a: &CycloScalar) -> CycloScalar {
        let (num_in, den) = self.to_big_parts(a);
        let mut num = vec![BigInt::zero(); self.deg];
        for (k, c) in num_in.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((self.l as usize) - k) % self.l as usize;
            for (j, rj) in self.rows[e].iter().enumerate() {
                if !rj.is_zero() {
                    num[j] += c * rj;
                }
            }
        }
        self.normalize_big(num, den)
    }

    /// zeta_L^e for any integer exponent.
    pub fn zeta_pow(&self, e: i64) -> CycloScalar {
        let l = self.l as i64;
        let e = e.rem_euclid(l) as usize;
        match &self.rows_small[e] {
            Some(row) => CycloScalar { repr: Repr::Small { num: row.clone(), den: 1 } },
            None => self.normalize_big(self.rows[e].clone(), BigInt::one()),
        }
    }

    /// Primitive den-th root of unity to the num-th power: zeta_L^{(L/den) num}.
    pub fn root_of_unity(&self, num: i64, den: u64) -> Result<CycloScalar, CycloError> {
        if den == 0 || self.l % den != 0 {
            return Err(CycloError::NotDividingConductor(den, self.l));
        }
        let step = (self.l / den) as i128;
        let e = (step * num as i128).rem_euclid(self.l as i128) as i64;
        Ok(self.zeta_pow(e))
    }

    /// q^e where q = zeta_L^8 has order r; exponents reduced mod r.
    pub fn q_pow(&self, e: i128) -> CycloScalar {
        let e = e.rem_euclid(self.r as i128) as i64;
        self.zeta_pow(8 * e)
    }

    pub fn i_unit(&self) -> CycloScalar {
        self.zeta_pow(self.l as i64 / 4)
    }

    /// The quantum brace {k} = q^k - q^{-k}.
    pub fn brace(&self, k: i64) -> CycloScalar {
        self.sub(&self.q_pow(k as i128), &self.q_pow(-(k as i128)))
    }

    /// Quantum integer [k] = {k}/{1}.
    pub fn q_int(&self, k: i64) -> CycloScalar {
        let b1 = self.brace(1);
        self.mul(&self.brace(k), &self.inv(&b1).expect("{1} != 0 for r >= 3"))
    }

    /// Quantum factorial [k]! = [k][k-1]...[1].
    pub fn q_fact(&self, k: u64) -> CycloScalar {
        let mut acc = self.one();
        for j in 1..=k {
            acc = self.mul(&acc, &self.q_int(j as i64));
        }
        acc
    }

    /// Quantum binomial coefficient; fails when the denominator factorials
    /// vanish at the root of unity (k >= r' cases).
    pub fn q_binom(&self, k: u64, l: u64) -> Result<CycloScalar, CycloError> {
        assert!(l <= k, "q_binom requires 0 <= l <= k");
        let den = self.mul(&self.q_fact(l), &self.q_fact(k - l));
        if self.is_zero(&den) {
            return Err(CycloError::BinomUndefined(l, k - l));
        }
        Ok(self.mul(&self.q_fact(k), &self.inv(&den).unwrap()))
    }

    /// Generalized quadratic Gauss sum G(a, b, c) = sum_n zeta_c^{a n^2 + b n},
    /// summed directly in the field. Requires c | L.
    pub fn gauss_sum(&self, a: i64, b: i64, c: u64) -> Result<CycloScalar, CycloError> {
        if c == 0 || self.l % c != 0 {
            return Err(CycloError::NotDividingConductor(c, self.l));
        }
        let step = (self.l / c) as i128;
        let mut acc = self.zero();
        for n in 0..c as i128 {
            let e = (a as i128 * n * n + b as i128 * n).rem_euclid(c as i128);
            acc = self.add(&acc, &self.zeta_pow((step * e).rem_euclid(self.l as i128) as i64));
        }
        Ok(acc)
    }

    /// sqrt(m) as a field element with positive real embedding. Defined
    /// whenever 4t divides L for the squarefree part t of m; the spec
    /// precondition 4m | L (true for m in {2, r', r''}) is a special case.
    pub fn sqrt_nat(&self, m: u64) -> Result<CycloScalar, CycloError> {
        if m == 0 {
            return Err(CycloError::SqrtUnsupported(m));
        }
        // split m = square * t with t squarefree
        let mut t = m;
        let mut square_root = 1u64;
        let mut p = 2u64;
        while p * p <= t {
            while t % (p * p) == 0 {
                t /= p * p;
                square_root *= p;
            }
            p += 1;
        }
        if t > 1 && self.l % (4 * t) != 0 {
            return Err(CycloError::SqrtUnsupported(m));
        }
        let mut out = self.from_int(square_root as i64);
        if t % 2 == 0 {
            t /= 2;
            // sqrt(2) = zeta_8 + zeta_8^{-1}
            let z8 = self.root_of_unity(1, 8)?;
            out = self.mul(&out, &self.add(&z8, &self.conj(&z8)));
        }
        if t > 1 {
            // classical quadratic Gauss sum: sum_n zeta_t^{n^2} equals sqrt(t)
            // for t = 1 mod 4 and i*sqrt(t) for t = 3 mod 4
            let g = self.gauss_sum(1, 0, t)?;
            let root = if t % 4 == 1 { g } else { self.mul(&self.neg(&self.i_unit()), &g) };
            out = self.mul(&out, &root);
        }
        let sq = self.mul(&out, &out);
        assert_eq!(sq, self.from_int(m as i64), "sqrt_nat candidate fails to square to m");
        if self.embed_numeric(&out).re < 0.0 {
            out = self.neg(&out);
        }
        Ok(out)
    }

    /// Double-precision embedding at zeta_L = exp(2 pi i / L). Display and
    /// cross-checks only; never used for equality decisions.
    pub fn embed_numeric(&self, a: &CycloScalar) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let den: f64;
        match &a.repr {
            Repr::Small { num, den: d } => {
                for (k, &c) in num.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let theta = 2.0 * std::f64::consts::PI * (k as f64) / (self.l as f64);
                    acc += c as f64 * Complex64::new(theta.cos(), theta.sin());
                }
                den = *d as f64;
            }
            Repr::Big { num, den: d } => {
                for (k, c) in num.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let theta = 2.0 * std::f64::consts::PI * (k as f64) / (self.l as f64);
                    acc += c.to_f64().unwrap_or(f64::NAN) * Complex64::new(theta.cos(), theta.sin());
                }
                den = d.to_f64().unwrap_or(f64::NAN);
            }
        }
        acc / den
    }

    /// Integer-coefficient polynomial string in z = zeta_L over a common
    /// denominator, e.g. "(2 - z^3 + 5*z^7)/3".
    pub fn format(&self, a: &CycloScalar) -> String {
        if self.is_zero(a) {
            return "0".to_string();
        }
        let (num, den) = self.to_big_parts(a);
        let mut body = String::new();
        let mut first = true;
        let mut nonzero = 0usize;
        for (k, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            nonzero += 1;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    body.push('-');
                }
                first = false;
            } else if c.is_negative() {
                body.push_str(" - ");
            } else {
                body.push_str(" + ");
            }
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                let _ = write!(body, "{}", mag);
            }
            if k > 0 {
                if show_coeff {
                    body.push('*');
                }
                if k == 1 {
                    body.push('z');
                } else {
                    let _ = write!(body, "z^{}", k);
                }
            }
        }
        if den.is_one() {
            body
        } else if nonzero == 1 {
            format!("{}/{}", body, den)
        } else {
            format!("({})/{}", body, den)
        }
    }
}

/// Jacobi symbol (a/n) for odd positive n, by the binary reciprocity algorithm.
pub fn jacobi(a: i64, n: u64) -> Result<i32, CycloError> {
    if n == 0 || n % 2 == 0 {
        return Err(CycloError::EvenModulus(n));
    }
    let mut a = (a.rem_euclid(n as i64)) as u64;
    let mut n = n;
    let mut t = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// Euler totient, used by tests and degree reporting.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(r: u64) -> CycloContext {
        CycloContext::new(r).unwrap()
    }

    #[test]
    fn context_degrees_match_totient() {
        assert_eq!(ctx(3).degree() as u64, totient(24));
        assert_eq!(ctx(3).degree(), 8);
        assert_eq!(ctx(4).degree() as u64, totient(32));
        assert_eq!(ctx(4).degree(), 16);
        for r in 3..=16 {
            assert_eq!(ctx(r).degree() as u64, totient(8 * r));
        }
    }

    #[test]
    fn case_table_for_rprime_rsecond() {
        let c5 = ctx(5);
        assert_eq!((c5.rprime(), c5.rsecond()), (5, 5));
        let c6 = ctx(6);
        assert_eq!((c6.rprime(), c6.rsecond()), (3, 3));
        let c8 = ctx(8);
        assert_eq!((c8.rprime(), c8.rsecond()), (4, 2));
        let c12 = ctx(12);
        assert_eq!((c12.rprime(), c12.rsecond()), (6, 3));
    }

    #[test]
    fn rejects_small_order() {
        assert!(matches!(CycloContext::new(2), Err(CycloError::OrderTooSmall(2))));
    }

    #[test]
    fn root_of_unity_relations() {
        let c = ctx(3);
        // full turn
        assert_eq!(c.root_of_unity(3, 3).unwrap(), c.one());
        // i^2 = -1
        let i = c.root_of_unity(1, 4).unwrap();
        assert_eq!(c.mul(&i, &i), c.from_int(-1));
        // zeta * zeta^{L-1} = 1
        let z = c.zeta_pow(1);
        let zl1 = c.zeta_pow(c.conductor() as i64 - 1);
        assert_eq!(c.mul(&z, &zl1), c.one());
        assert_eq!(c.root_of_unity(1, 3).unwrap(), c.q_pow(1));
        assert!(c.root_of_unity(1, 5).is_err());
    }

    #[test]
    fn zeta_satisfies_cyclotomic_relations() {
        for r in [3u64, 4, 5, 8] {
            let c = ctx(r);
            let l = c.conductor() as i64;
            assert_eq!(c.zeta_pow(l), c.one(), "zeta^L = 1 at r={r}");
            // Phi_L(zeta) = 0
            let mut acc = c.zero();
            for (k, coeff) in c.phi_coeffs().iter().enumerate() {
                let t = c.mul_int(&c.zeta_pow(k as i64), coeff.to_i64().unwrap());
                acc = c.add(&acc, &t);
            }
            assert!(c.is_zero(&acc), "Phi_L(zeta) = 0 at r={r}");
        }
    }

    #[test]
    fn rational_embedding_and_inverse() {
        let c = ctx(3);
        let two = c.from_int(2);
        assert_eq!(c.inv(&two).unwrap(), c.from_ratio(1, 2));
        assert!(matches!(c.inv(&c.zero()), Err(CycloError::DivisionByZero)));
    }

    #[test]
    fn conj_is_involutive_automorphism() {
        let c = ctx(4);
        let i = c.i_unit();
        assert_eq!(c.conj(&i), c.neg(&i));
        assert_eq!(c.conj(&c.q_pow(1)), c.inv(&c.q_pow(1)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let a = random_scalar(&c, &mut rng);
            let b = random_scalar(&c, &mut rng);
            assert_eq!(c.conj(&c.conj(&a)), a);
            assert_eq!(c.conj(&c.mul(&a, &b)), c.mul(&c.conj(&a), &c.conj(&b)));
            assert_eq!(c.conj(&c.add(&a, &b)), c.add(&c.conj(&a), &c.conj(&b)));
        }
    }

    fn random_scalar(c: &CycloContext, rng: &mut ChaCha8Rng) -> CycloScalar {
        let num = (0..c.degree()).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
        let den = BigInt::from(rng.gen_range(1i64..=9));
        c.from_parts(num, den)
    }

    #[test]
    fn field_axioms_on_random_scalars() {
        let c = ctx(5);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let a = random_scalar(&c, &mut rng);
            if c.is_zero(&a) {
                continue;
            }
            let inv = c.inv(&a).unwrap();
            assert_eq!(c.mul(&a, &inv), c.one());
        }
        for _ in 0..60 {
            let a = random_scalar(&c, &mut rng);
            let b = random_scalar(&c, &mut rng);
            let d = random_scalar(&c, &mut rng);
            let left = c.mul(&a, &c.add(&b, &d));
            let right = c.add(&c.mul(&a, &b), &c.mul(&a, &d));
            assert_eq!(left, right);
        }
    }

    #[test]
    fn big_small_promotion_round_trip() {
        let c = ctx(3);
        // force a promotion with huge coefficients and return below i64
        let huge: BigInt = BigInt::from(i64::MAX) * 4 + 1;
        let mut num = vec![BigInt::zero(); c.degree()];
        num[0] = huge.clone();
        let a = c.from_parts(num, BigInt::one());
        let b = c.from_ratio(1, 7);
        let prod = c.mul(&a, &b);
        assert_eq!(prod.numerator()[0], huge);
        assert_eq!(prod.denominator(), BigInt::from(7));
        // multiply back down to a small value
        let back = c.mul(&prod, &c.zero());
        assert!(c.is_zero(&back));
        let one = c.mul(&a, &c.inv(&a).unwrap());
        assert_eq!(one, c.one());
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let c = ctx(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a = random_scalar(&c, &mut rng);
            let b = random_scalar(&c, &mut rng);
            let lhs = c.embed_numeric(&c.mul(&a, &b));
            let rhs = c.embed_numeric(&a) * c.embed_numeric(&b);
            assert!((lhs - rhs).norm() < 1e-9, "embedding multiplicativity");
        }
        assert!((c.embed_numeric(&c.one()) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((c.embed_numeric(&c.i_unit()) - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let c4 = ctx(4);
        assert!((c4.embed_numeric(&c4.q_pow(1)) - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn quantum_numbers() {
        for r in 3..=8u64 {
            let c = ctx(r);
            assert_eq!(c.q_int(1), c.one());
            assert_eq!(c.q_fact(0), c.one());
            // {r'} = 0 since q^{r'} = +-1
            assert!(c.is_zero(&c.q_int(c.rprime() as i64)), "[r'] = 0 at r={r}");
            for k in 1..c.rprime() {
                assert!(!c.is_zero(&c.q_int(k as i64)), "[k] != 0 for k < r' at r={r}");
            }
            // vanishing-denominator cases are rejected
            assert!(c.q_binom(c.rprime(), c.rprime()).is_err());
            // vanishing numerator over a sound denominator is plain zero
            assert!(c.is_zero(&c.q_binom(c.rprime(), 1).unwrap()));
            if c.rprime() >= 3 {
                let b = c.q_binom(c.rprime() - 1, 1).unwrap();
                assert_eq!(b, c.q_int(c.rprime() as i64 - 1));
            }
        }
    }

    /// Independent oracle: Euler's criterion for odd primes.
    fn legendre_oracle(a: i64, p: u64) -> i32 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        let mut acc = 1u64;
        let mut base = a % p;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        if acc == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn jacobi_symbol() {
        assert_eq!(jacobi(2, 7).unwrap(), 1);
        assert_eq!(jacobi(2, 3).unwrap(), -1);
        assert_eq!(jacobi(1, 5).unwrap(), 1);
        assert!(jacobi(3, 4).is_err());
        for p in [3u64, 5, 7, 11, 13, 17] {
            for a in -20i64..20 {
                assert_eq!(jacobi(a, p).unwrap(), legendre_oracle(a, p), "({a}/{p})");
            }
        }
        // multiplicativity over composite odd moduli
        for a in 1i64..15 {
            assert_eq!(jacobi(a, 15).unwrap(), jacobi(a, 3).unwrap() * jacobi(a, 5).unwrap());
        }
        // (2/r) table: 1 for r = 1,7 mod 8 and -1 for r = 3,5 mod 8
        for r in [7u64, 9, 15, 17] {
            assert_eq!(jacobi(2, r).unwrap(), if r % 8 == 1 || r % 8 == 7 { 1 } else { -1 });
        }
        for r in [3u64, 5, 11, 13] {
            assert_eq!(jacobi(2, r).unwrap(), -1);
        }
    }

    #[test]
    fn gauss_sums() {
        let c = ctx(4);
        assert_eq!(c.gauss_sum(0, 0, 8).unwrap(), c.from_int(8));
        // direct 4-term summation: 1 + i + 1 + i = 2(1 + i)
        let g = c.gauss_sum(1, 0, 4).unwrap();
        let expect = c.mul_int(&c.add(&c.one(), &c.i_unit()), 2);
        assert_eq!(g, expect);
        assert!(c.gauss_sum(1, 0, 3).is_err());
        // G(1, a+l, 2) vanishes when l = -a mod 2
        for a in 0..4i64 {
            let l = (-a).rem_euclid(2);
            let gz = c.gauss_sum(1, a + l, 2).unwrap();
            assert!(c.is_zero(&gz), "G(1, a+l, 2) = 0 for l = -a mod 2, a={a}");
        }
    }

    #[test]
    fn gauss_sum_closed_form_identity_for_odd_r() {
        // G(2, 2d, r) = i^{-(r-1)/2} sqrt(r) q^{-(r+1)/2 d^2}, odd r
        for r in [3u64, 5, 7] {
            let c = ctx(r);
            let sqrt_r = c.sqrt_nat(r).unwrap();
            let i_pow = c.root_of_unity(-((r as i64 - 1) / 2), 4).unwrap();
            for d in 0..r as i64 {
                let lhs = c.gauss_sum(2, 2 * d, r).unwrap();
                let e = -((r as i128 + 1) / 2) * (d as i128) * (d as i128);
                let rhs = c.mul(&c.mul(&i_pow, &sqrt_r), &c.q_pow(e));
                assert_eq!(lhs, rhs, "Gauss identity at r={r}, d={d}");
            }
        }
    }

    #[test]
    fn sqrt_nat_values() {
        let c3 = ctx(3);
        assert_eq!(c3.sqrt_nat(1).unwrap(), c3.one());
        assert_eq!(c3.sqrt_nat(4).unwrap(), c3.from_int(2));
        let s3 = c3.sqrt_nat(3).unwrap();
        assert_eq!(c3.mul(&s3, &s3), c3.from_int(3));
        assert!(c3.embed_numeric(&s3).re > 0.0);
        assert!((c3.embed_numeric(&s3).re - 3f64.sqrt()).abs() < 1e-12);
        let c8 = ctx(8);
        let s2 = c8.sqrt_nat(2).unwrap();
        assert_eq!(c8.mul(&s2, &s2), c8.from_int(2));
        assert!((c8.embed_numeric(&s2).re - 2f64.sqrt()).abs() < 1e-12);
        assert!(c3.sqrt_nat(5).is_err());
    }

    #[test]
    fn display_formatting() {
        let c = ctx(3);
        assert_eq!(c.format(&c.zero()), "0");
        assert_eq!(c.format(&c.from_int(-3)), "-3");
        assert_eq!(c.format(&c.from_ratio(1, 2)), "1/2");
        let x = c.add(&c.from_int(2), &c.mul_int(&c.zeta_pow(3), -1));
        assert_eq!(c.format(&x), "2 - z^3");
    }
}

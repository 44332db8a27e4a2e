//! Sparse tensors over u_q(sl2): rank-n linear combinations of tuples of PBW
//! monomials. These carry the R- and M-matrices, coproducts, and vectors of
//! tensor powers of the adjoint representation.

use crate::cyclo::{CycloContext, CycloScalar};
use crate::uqsl2::{AlgebraElement, Monomial, UqContext};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    rank: usize,
    terms: BTreeMap<Box<[Monomial]>, CycloScalar>,
}

impl TensorElement {
    pub fn zero(rank: usize) -> Self {
        TensorElement { rank, terms: BTreeMap::new() }
    }

    /// 1 (x) ... (x) 1.
    pub fn unit(ctx: &CycloContext, rank: usize) -> Self {
        let mut t = TensorElement::zero(rank);
        t.add_term(ctx, vec![Monomial::ONE; rank], ctx.one());
        t
    }

    /// Rank-0 tensor holding a scalar.
    pub fn scalar(ctx: &CycloContext, value: CycloScalar) -> Self {
        let mut t = TensorElement::zero(0);
        t.add_term(ctx, vec![], value);
        t
    }

    pub fn from_element(x: &AlgebraElement) -> Self {
        TensorElement {
            rank: 1,
            terms: x.terms.iter().map(|(m, c)| (vec![*m].into_boxed_slice(), c.clone())).collect(),
        }
    }

    /// Basis vector of ad^{(x) n}.
    pub fn basis_vector(ctx: &CycloContext, key: Vec<Monomial>) -> Self {
        let mut t = TensorElement::zero(key.len());
        t.add_term(ctx, key, ctx.one());
        t
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Monomial], &CycloScalar)> {
        self.terms.iter().map(|(k, v)| (k.as_ref(), v))
    }

    pub fn add_term(&mut self, ctx: &CycloContext, key: Vec<Monomial>, coeff: CycloScalar) {
        debug_assert_eq!(key.len(), self.rank);
        if ctx.is_zero(&coeff) {
            return;
        }
        match self.terms.entry(key.into_boxed_slice()) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = ctx.add(o.get(), &coeff);
                if ctx.is_zero(&sum) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, ctx: &CycloContext, other: &TensorElement) -> TensorElement {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(ctx, k.to_vec(), c.clone());
        }
        out
    }

    pub fn add_scaled(&mut self, ctx: &CycloContext, other: &TensorElement, s: &CycloScalar) {
        assert_eq!(self.rank, other.rank);
        for (k, c) in other.terms() {
            self.add_term(ctx, k.to_vec(), ctx.mul(c, s));
        }
    }

    pub fn scale(&self, ctx: &CycloContext, s: &CycloScalar) -> TensorElement {
        let mut out = TensorElement::zero(self.rank);
        for (k, c) in self.terms() {
            out.add_term(ctx, k.to_vec(), ctx.mul(c, s));
        }
        out
    }

    pub fn neg(&self, ctx: &CycloContext) -> TensorElement {
        TensorElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), ctx.neg(c))).collect(),
        }
    }

    pub fn sub(&self, ctx: &CycloContext, other: &TensorElement) -> TensorElement {
        self.add(ctx, &other.neg(ctx))
    }

    /// Slotwise algebra product: (x1 (x) ... (x) xn)(y1 (x) ... (x) yn)
    /// = x1 y1 (x) ... (x) xn yn, distributed over all normal-ordered terms.
    /// Accumulates through packed integer keys; the boxed tree keys are only
    /// built once per distinct result term.
    pub fn mul(&self, uq: &UqContext, other: &TensorElement) -> TensorElement {
        assert_eq!(self.rank, other.rank);
        let ctx = uq.cyclo();
        let rank = self.rank;
        let dim = uq.dim() as u64;
        let bits = 64 - (dim - 1).leading_zeros() as usize;
        if rank == 0 || rank * bits > 64 {
            return self.mul_generic(uq, other);
        }
        let rp = uq.rprime();
        let mut acc: std::collections::HashMap<u64, CycloScalar> = std::collections::HashMap::new();
        let mut slot_buf: Vec<Vec<(Monomial, CycloScalar)>> = vec![Vec::new(); rank];
        let mut idx = vec![0usize; rank];
        for (k1, c1) in self.terms() {
            for (k2, c2) in other.terms() {
                let base = ctx.mul(c1, c2);
                if ctx.is_zero(&base) {
                    continue;
                }
                let mut ok = true;
                for (s, buf) in slot_buf.iter_mut().enumerate() {
                    buf.clear();
                    uq.multiply_monomials_each(&k1[s], &k2[s], |m, c| buf.push((m, c.clone())));
                    if buf.is_empty() {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                for v in idx.iter_mut() {
                    *v = 0;
                }
                loop {
                    let mut key = 0u64;
                    let mut coeff = base.clone();
                    for (s, buf) in slot_buf.iter().enumerate() {
                        let (m, c) = &buf[idx[s]];
                        key = (key << bits) | m.index(rp) as u64;
                        coeff = ctx.mul(&coeff, c);
                    }
                    match acc.entry(key) {
                        std::collections::hash_map::Entry::Vacant(v) => {
                            v.insert(coeff);
                        }
                        std::collections::hash_map::Entry::Occupied(mut o) => {
                            let sum = ctx.add(o.get(), &coeff);
                            *o.get_mut() = sum;
                        }
                    }
                    // advance the per-slot cartesian cursor
                    let mut done = true;
                    for s in (0..rank).rev() {
                        idx[s] += 1;
                        if idx[s] < slot_buf[s].len() {
                            done = false;
                            break;
                        }
                        idx[s] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
        }
        let mut terms = BTreeMap::new();
        for (packed, coeff) in acc {
            if ctx.is_zero(&coeff) {
                continue;
            }
            let mut key = vec![Monomial::ONE; rank];
            let mut rest = packed;
            let mask = (1u64 << bits) - 1;
            for s in (0..rank).rev() {
                key[s] = Monomial::from_index((rest & mask) as usize, rp);
                rest >>= bits;
            }
            terms.insert(key.into_boxed_slice(), coeff);
        }
        TensorElement { rank, terms }
    }

    fn mul_generic(&self, uq: &UqContext, other: &TensorElement) -> TensorElement {
        let ctx = uq.cyclo();
        let mut out = TensorElement::zero(self.rank);
        for (k1, c1) in self.terms() {
            for (k2, c2) in other.terms() {
                let base = ctx.mul(c1, c2);
                let slots: Vec<AlgebraElement> =
                    (0..self.rank).map(|s| uq.multiply_monomials(&k1[s], &k2[s])).collect();
                if slots.iter().any(AlgebraElement::is_zero) {
                    continue;
                }
                let mut stack: Vec<(Vec<Monomial>, CycloScalar)> = vec![(Vec::new(), base)];
                for slot in &slots {
                    let mut next = Vec::with_capacity(stack.len() * slot.terms.len());
                    for (prefix, coeff) in &stack {
                        for (m, c) in &slot.terms {
                            let mut key = prefix.clone();
                            key.push(*m);
                            next.push((key, ctx.mul(coeff, c)));
                        }
                    }
                    stack = next;
                }
                for (key, coeff) in stack {
                    out.add_term(ctx, key, coeff);
                }
            }
        }
        out
    }

    /// Outer tensor product; ranks add.
    pub fn tensor(&self, ctx: &CycloContext, other: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(self.rank + other.rank);
        for (k1, c1) in self.terms() {
            for (k2, c2) in other.terms() {
                let mut key = k1.to_vec();
                key.extend_from_slice(k2);
                out.add_term(ctx, key, ctx.mul(c1, c2));
            }
        }
        out
    }

    /// Swap the two slots of a rank-2 tensor.
    pub fn flip(&self) -> TensorElement {
        assert_eq!(self.rank, 2);
        TensorElement {
            rank: 2,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (vec![k[1], k[0]].into_boxed_slice(), c.clone()))
                .collect(),
        }
    }

    /// Reindex slots: output slot s holds input slot perm[s].
    pub fn permute(&self, perm: &[usize]) -> TensorElement {
        assert_eq!(perm.len(), self.rank);
        TensorElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let key: Vec<Monomial> = perm.iter().map(|&p| k[p]).collect();
                    (key.into_boxed_slice(), c.clone())
                })
                .collect(),
        }
    }

    /// Place this tensor's slots at `positions` inside a rank-n identity
    /// pattern (remaining slots filled with 1), e.g. R_13 from R.
    pub fn promote(&self, ctx: &CycloContext, rank: usize, positions: &[usize]) -> TensorElement {
        assert_eq!(positions.len(), self.rank);
        let mut out = TensorElement::zero(rank);
        for (k, c) in self.terms() {
            let mut key = vec![Monomial::ONE; rank];
            for (s, &p) in positions.iter().enumerate() {
                key[p] = k[s];
            }
            out.add_term(ctx, key, c.clone());
        }
        out
    }

    pub fn map_keys(&self, f: impl Fn(&[Monomial]) -> Vec<Monomial>) -> TensorElement {
        TensorElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, c)| (f(k).into_boxed_slice(), c.clone())).collect(),
        }
    }

    /// Substitute an element for one slot, distributing linearly. The
    /// replacement must be given per monomial and may change that slot's
    /// content but not the rank.
    pub fn map_slot(
        &self,
        ctx: &CycloContext,
        slot: usize,
        f: impl Fn(&Monomial) -> AlgebraElement,
    ) -> TensorElement {
        let mut out = TensorElement::zero(self.rank);
        for (k, c) in self.terms() {
            for (m, cm) in f(&k[slot]).terms {
                let mut key = k.to_vec();
                key[slot] = m;
                out.add_term(ctx, key, ctx.mul(c, &cm));
            }
        }
        out
    }

    /// Apply the coproduct to one slot; rank grows by one.
    pub fn expand_slot_coproduct(&self, uq: &UqContext, slot: usize) -> TensorElement {
        let ctx = uq.cyclo();
        let mut out = TensorElement::zero(self.rank + 1);
        for (k, c) in self.terms() {
            let dm = uq.coproduct(&AlgebraElement::monomial(ctx, k[slot]));
            for (dk, dc) in dm.terms() {
                let mut key = Vec::with_capacity(self.rank + 1);
                key.extend_from_slice(&k[..slot]);
                key.push(dk[0]);
                key.push(dk[1]);
                key.extend_from_slice(&k[slot + 1..]);
                out.add_term(ctx, key, ctx.mul(c, dc));
            }
        }
        out
    }

    /// Contract one slot with the counit; rank drops by one.
    pub fn contract_counit(&self, ctx: &CycloContext, slot: usize) -> TensorElement {
        let mut out = TensorElement::zero(self.rank - 1);
        for (k, c) in self.terms() {
            if k[slot].e == 0 && k[slot].f == 0 {
                let mut key = k.to_vec();
                key.remove(slot);
                out.add_term(ctx, key, c.clone());
            }
        }
        out
    }

    /// Contract one slot with the integral; rank drops by one.
    pub fn contract_integral(&self, uq: &UqContext, slot: usize) -> TensorElement {
        let ctx = uq.cyclo();
        let mut out = TensorElement::zero(self.rank - 1);
        for (k, c) in self.terms() {
            let lam = uq.integral(&AlgebraElement::monomial(ctx, k[slot]));
            if ctx.is_zero(&lam) {
                continue;
            }
            let mut key = k.to_vec();
            key.remove(slot);
            out.add_term(ctx, key, ctx.mul(c, &lam));
        }
        out
    }

    pub fn to_element(&self) -> AlgebraElement {
        assert_eq!(self.rank, 1);
        AlgebraElement { terms: self.terms.iter().map(|(k, c)| (k[0], c.clone())).collect() }
    }

    /// The unique scalar of a rank-0 tensor.
    pub fn scalar_value(&self, ctx: &CycloContext) -> CycloScalar {
        assert_eq!(self.rank, 0);
        self.terms.values().next().cloned().unwrap_or_else(|| ctx.zero())
    }
}

//! Exact rank computation over Q(zeta_L).
//!
//! The maps whose invertibility decides factorizability and modularity
//! respect the Z-grading of the PBW basis by E-degree minus F-degree, so the
//! matrix splits into small blocks indexed by the grade of the input
//! monomial. Each block is eliminated by exact Gaussian elimination in the
//! field; no numeric rank decision anywhere.

use crate::cyclo::{CycloContext, CycloScalar};
use rayon::prelude::*;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct SparseMatrix {
    dim: usize,
    entries: HashMap<(usize, usize), CycloScalar>,
}

impl SparseMatrix {
    pub fn new(dim: usize) -> Self {
        SparseMatrix { dim, entries: HashMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&mut self, row: usize, col: usize, value: CycloScalar, ctx: &CycloContext) {
        if ctx.is_zero(&value) {
            return;
        }
        match self.entries.entry((row, col)) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(value);
            }
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let sum = ctx.add(o.get(), &value);
                if ctx.is_zero(&sum) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&CycloScalar> {
        self.entries.get(&(row, col))
    }

    /// Exact rank, splitting columns into groups by `grade` of the column
    /// index. Groups with disjoint row support are eliminated independently;
    /// if supports overlap (they never do for the graded maps handled here),
    /// everything collapses into one block and the result is still exact.
    pub fn rank_graded(&self, ctx: &CycloContext, grade: &dyn Fn(usize) -> i32) -> usize {
        let mut groups: HashMap<i32, Vec<usize>> = HashMap::new();
        for col in 0..self.dim {
            groups.entry(grade(col)).or_default().push(col);
        }
        // verify disjoint row supports; otherwise merge into one block
        let mut row_owner: HashMap<usize, i32> = HashMap::new();
        let mut disjoint = true;
        'outer: for (&(row, col), _) in &self.entries {
            let g = grade(col);
            match row_owner.get(&row) {
                Some(&other) if other != g => {
                    disjoint = false;
                    break 'outer;
                }
                _ => {
                    row_owner.insert(row, g);
                }
            }
        }
        let blocks: Vec<Vec<usize>> = if disjoint {
            let mut v: Vec<(i32, Vec<usize>)> = groups.into_iter().collect();
            v.sort_by_key(|(g, _)| *g);
            v.into_iter().map(|(_, cols)| cols).collect()
        } else {
            vec![(0..self.dim).collect()]
        };
        blocks
            .par_iter()
            .map(|cols| self.block_rank(ctx, cols))
            .sum()
    }

    pub fn rank(&self, ctx: &CycloContext) -> usize {
        self.block_rank(ctx, &(0..self.dim).collect::<Vec<_>>())
    }

    fn block_rank(&self, ctx: &CycloContext, cols: &[usize]) -> usize {
        // gather the rows touched by this column set
        let mut rows: Vec<usize> = Vec::new();
        {
            let mut seen = std::collections::HashSet::new();
            let colset: std::collections::HashSet<usize> = cols.iter().copied().collect();
            for &(row, col) in self.entries.keys() {
                if colset.contains(&col) && seen.insert(row) {
                    rows.push(row);
                }
            }
        }
        rows.sort_unstable();
        if rows.is_empty() {
            return 0;
        }
        let mut dense: Vec<Vec<CycloScalar>> = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| self.entries.get(&(r, c)).cloned().unwrap_or_else(|| ctx.zero()))
                    .collect()
            })
            .collect();
        gaussian_rank(ctx, &mut dense)
    }
}

/// In-place Gaussian elimination over the field; returns the rank.
pub fn gaussian_rank(ctx: &CycloContext, mat: &mut [Vec<CycloScalar>]) -> usize {
    let nrows = mat.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = mat[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&r| !ctx.is_zero(&mat[r][col]));
        let Some(p) = pivot else { continue };
        mat.swap(rank, p);
        let inv = ctx.inv(&mat[rank][col]).expect("pivot is nonzero");
        let pivot_row: Vec<CycloScalar> =
            mat[rank].iter().map(|v| ctx.mul(v, &inv)).collect();
        mat[rank] = pivot_row;
        let pivot_row = mat[rank].clone();
        mat.par_iter_mut().enumerate().for_each(|(r, row)| {
            if r == rank || ctx.is_zero(&row[col]) {
                return;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !ctx.is_zero(pv) {
                    *v = ctx.sub(v, &ctx.mul(&f, pv));
                }
            }
        });
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloContext;

    #[test]
    fn rank_of_small_matrices() {
        let ctx = CycloContext::new(3).unwrap();
        let mut m = SparseMatrix::new(3);
        m.add(0, 0, ctx.one(), &ctx);
        m.add(1, 1, ctx.from_int(2), &ctx);
        assert_eq!(m.rank(&ctx), 2);
        // add a row dependent on row 0
        m.add(2, 0, ctx.from_int(5), &ctx);
        assert_eq!(m.rank(&ctx), 2);
        m.add(2, 2, ctx.i_unit(), &ctx);
        assert_eq!(m.rank(&ctx), 3);
    }

    #[test]
    fn graded_rank_matches_plain_rank() {
        let ctx = CycloContext::new(3).unwrap();
        let mut m = SparseMatrix::new(4);
        // columns 0,1 feed rows 0,1 and columns 2,3 feed rows 2,3
        m.add(0, 0, ctx.one(), &ctx);
        m.add(1, 0, ctx.one(), &ctx);
        m.add(1, 1, ctx.from_int(3), &ctx);
        m.add(2, 2, ctx.q_pow(1), &ctx);
        m.add(3, 3, ctx.zero(), &ctx);
        let grade = |c: usize| if c < 2 { 0 } else { 1 };
        assert_eq!(m.rank_graded(&ctx, &grade), m.rank(&ctx));
        assert_eq!(m.rank(&ctx), 3);
    }
}

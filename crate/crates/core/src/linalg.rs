//! Exact linear algebra over `GF(p)`: sparse rank and dense row reduction.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::arith::PrimeField;

/// A sparse row: `(column, value)` pairs with nonzero values.
pub type SparseRow = Vec<(u32, u32)>;

/// Incremental sparse Gaussian elimination; rows are reduced against the
/// pivots found so far using a dense accumulator.
pub struct SparseEliminator {
    field: PrimeField,
    pivot_of: Vec<Option<u32>>,
    pivots: Vec<SparseRow>,
    acc: Vec<u32>,
    seen: Vec<bool>,
}

impl SparseEliminator {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        SparseEliminator {
            field,
            pivot_of: vec![None; ncols],
            pivots: Vec::new(),
            acc: vec![0; ncols],
            seen: vec![false; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row`; returns true when it was independent of earlier rows.
    pub fn add_row(&mut self, row: &[(u32, u32)]) -> bool {
        let f = self.field;
        let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::with_capacity(row.len());
        let mut touched: Vec<u32> = Vec::with_capacity(row.len());
        for &(c, v) in row {
            if v == 0 {
                continue;
            }
            let ci = c as usize;
            self.acc[ci] = f.add(self.acc[ci], v);
            if !self.seen[ci] {
                self.seen[ci] = true;
                touched.push(c);
                heap.push(Reverse(c));
            }
        }
        let mut new_pivot = false;
        while let Some(Reverse(c)) = heap.pop() {
            let ci = c as usize;
            let a = self.acc[ci];
            if a == 0 {
                continue;
            }
            match self.pivot_of[ci] {
                Some(pi) => {
                    let k = f.neg(a);
                    self.acc[ci] = 0;
                    for &(c2, v) in &self.pivots[pi as usize] {
                        let c2i = c2 as usize;
                        self.acc[c2i] = f.mul_add(self.acc[c2i], k, v);
                        if !self.seen[c2i] {
                            self.seen[c2i] = true;
                            touched.push(c2);
                            heap.push(Reverse(c2));
                        }
                    }
                }
                None => {
                    let inv = f.inv(a).expect("nonzero");
                    let mut prow: SparseRow = Vec::new();
                    while let Some(Reverse(c2)) = heap.pop() {
                        let v = self.acc[c2 as usize];
                        if v != 0 {
                            prow.push((c2, f.mul(v, inv)));
                        }
                    }
                    self.pivot_of[ci] = Some(self.pivots.len() as u32);
                    self.pivots.push(prow);
                    new_pivot = true;
                    break;
                }
            }
        }
        for c in touched {
            self.acc[c as usize] = 0;
            self.seen[c as usize] = false;
        }
        new_pivot
    }
}

pub fn sparse_rank(field: PrimeField, ncols: usize, rows: &[SparseRow]) -> usize {
    let mut e = SparseEliminator::new(field, ncols);
    for r in rows {
        e.add_row(r);
    }
    e.rank()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(field: PrimeField, m: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let f = field;
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, pr);
        let inv = f.inv(m[row][col]).unwrap();
        for x in m[row].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let k = f.neg(m[r][col]);
                for c in 0..ncols {
                    let v = m[row][c];
                    if v != 0 {
                        m[r][c] = f.mul_add(m[r][c], k, v);
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn dense_rank(field: PrimeField, m: &[Vec<u32>]) -> usize {
    let mut c = m.to_vec();
    rref(field, &mut c).len()
}

/// Basis of `{x : M x = 0}` for an `nrows x ncols` matrix.
pub fn kernel(field: PrimeField, m: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let mut a = m.to_vec();
    if a.is_empty() {
        return (0..ncols).map(|i| (0..ncols).map(|j| (i == j) as u32).collect()).collect();
    }
    let pivots = rref(field, &mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &fc in &free {
        let mut v = vec![0u32; ncols];
        v[fc] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(a[r][fc]);
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn sparse_and_dense_rank_agree(m in prop::collection::vec(prop::collection::vec(0u32..5, 6), 1..7)) {
            let f = PrimeField::new(5).unwrap();
            let rows: Vec<SparseRow> = m.iter().map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, v)| (c as u32, *v)).collect()).collect();
            let r = dense_rank(f, &m);
            prop_assert_eq!(sparse_rank(f, 6, &rows), r);
            let k = kernel(f, &m, 6);
            prop_assert_eq!(k.len(), 6 - r);
            for v in &k {
                for row in &m {
                    let s = row.iter().zip(v).fold(0, |acc, (a, b)| f.mul_add(acc, *a, *b));
                    prop_assert_eq!(s, 0);
                }
            }
        }
    }
}

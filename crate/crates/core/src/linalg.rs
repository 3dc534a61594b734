//! Exact Gaussian elimination over any field with exact arithmetic.
//!
//! Rows are sparse (`BTreeMap` from column to entry) because the integral
//! element systems have a couple of hundred columns and only a handful of
//! nonzeros per row.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num::rational::BigRational;
use num::{One, Zero};

use crate::scalar::GaussianRational;

pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    /// Complex conjugation; the identity on real fields.
    fn conj(&self) -> Self;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Field for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        GaussianRational::inv(self)
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
}

pub type SparseRow<F> = BTreeMap<usize, F>;

/// Reduced row echelon form: each stored row has a leading 1 at its pivot
/// column and zeros in every other pivot column.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub rows: Vec<(usize, SparseRow<F>)>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }
}

fn axpy<F: Field>(target: &mut SparseRow<F>, factor: &F, source: &SparseRow<F>) {
    for (c, v) in source {
        let delta = factor.mul(v);
        let entry = target.entry(*c).or_insert_with(F::zero);
        *entry = entry.sub(&delta);
        if entry.is_zero() {
            target.remove(c);
        }
    }
}

/// Incremental row reduction. Rows are reduced against the current basis as
/// they arrive, so memory stays bounded by the rank.
pub fn rref<F: Field>(rows: impl IntoIterator<Item = SparseRow<F>>) -> Rref<F> {
    let mut basis: Vec<(usize, SparseRow<F>)> = Vec::new();
    for mut row in rows {
        row.retain(|_, v| !v.is_zero());
        for (pc, b) in &basis {
            if let Some(f) = row.get(pc).cloned() {
                axpy(&mut row, &f, b);
            }
        }
        let Some((&pc, lead)) = row.iter().next() else {
            continue;
        };
        let inv = lead.inv().expect("nonzero leading entry");
        let normalized: SparseRow<F> = row.iter().map(|(c, v)| (*c, v.mul(&inv))).collect();
        for (_, b) in basis.iter_mut() {
            if let Some(f) = b.get(&pc).cloned() {
                axpy(b, &f, &normalized);
            }
        }
        basis.push((pc, normalized));
    }
    basis.sort_by_key(|(p, _)| *p);
    Rref { rows: basis }
}

pub fn rank<F: Field>(rows: impl IntoIterator<Item = SparseRow<F>>) -> usize {
    rref(rows).rank()
}

pub fn dense_to_sparse<F: Field>(row: &[F]) -> SparseRow<F> {
    row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect()
}

pub fn rank_dense<F: Field>(rows: &[Vec<F>]) -> usize {
    rank(rows.iter().map(|r| dense_to_sparse(r)))
}

/// Solves `A x = b` where each row of `A` is given sparse over `ncols`
/// unknowns. Returns the particular solution with all free variables set to
/// zero, or `None` when the system is inconsistent.
pub fn solve<F: Field>(rows: impl IntoIterator<Item = (SparseRow<F>, F)>, ncols: usize) -> Option<Vec<F>> {
    let augmented = rows.into_iter().map(|(mut r, b)| {
        debug_assert!(r.keys().all(|&c| c < ncols));
        if !b.is_zero() {
            r.insert(ncols, b);
        }
        r
    });
    let reduced = rref(augmented);
    let mut x = vec![F::zero(); ncols];
    for (pc, row) in &reduced.rows {
        if *pc == ncols {
            return None;
        }
        if let Some(v) = row.get(&ncols) {
            x[*pc] = v.clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank_dense(&q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_dense(&q(&[&[1, 2], &[2, 5]])), 2);
        assert_eq!(rank_dense::<BigRational>(&[]), 0);
        assert_eq!(rank_dense(&q(&[&[0, 0, 0]])), 0);
    }

    #[test]
    fn gaussian_rank_differs_from_real_pairing() {
        // (1, i) and (i, -1) are proportional over C.
        let rows = vec![
            vec![GaussianRational::one(), GaussianRational::i()],
            vec![GaussianRational::i(), GaussianRational::from_int(-1)],
        ];
        assert_eq!(rank_dense(&rows), 1);
    }

    #[test]
    fn solve_particular_solution() {
        // x + y = 3, x - y = 1
        let rows = vec![(dense_to_sparse(&[int(1), int(1)]), int(3)), (dense_to_sparse(&[int(1), int(-1)]), int(1))];
        assert_eq!(solve(rows, 2), Some(vec![int(2), int(1)]));
        // underdetermined: free variable set to zero
        let rows = vec![(dense_to_sparse(&[int(2), int(4)]), int(1))];
        assert_eq!(solve(rows, 2), Some(vec![rat(1, 2), int(0)]));
        // inconsistent
        let rows = vec![(dense_to_sparse(&[int(1), int(1)]), int(1)), (dense_to_sparse(&[int(2), int(2)]), int(3))];
        assert_eq!(solve(rows, 2), None);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
    }

    proptest! {
        #[test]
        fn rank_bounded_and_invariant(m in small_matrix(), k in 1i64..5) {
            let rows: Vec<Vec<BigRational>> =
                m.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
            let r = rank_dense(&rows);
            prop_assert!(r <= rows.len().min(rows[0].len()));
            let mut permuted = rows.clone();
            permuted.reverse();
            prop_assert_eq!(rank_dense(&permuted), r);
            let scaled: Vec<Vec<BigRational>> =
                rows.iter().map(|row| row.iter().map(|v| v * int(k)).collect()).collect();
            prop_assert_eq!(rank_dense(&scaled), r);
        }

        #[test]
        fn rank_matches_transpose(m in small_matrix()) {
            let rows: Vec<Vec<BigRational>> =
                m.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
            let t: Vec<Vec<BigRational>> = (0..rows[0].len())
                .map(|j| rows.iter().map(|r| r[j].clone()).collect())
                .collect();
            prop_assert_eq!(rank_dense(&rows), rank_dense(&t));
        }

        #[test]
        fn solve_returns_a_solution(m in small_matrix(), x in prop::collection::vec(-4i64..=4, 5)) {
            let ncols = m[0].len();
            let xs: Vec<BigRational> = x.iter().take(ncols).map(|&v| int(v)).collect();
            let rows: Vec<(SparseRow<BigRational>, BigRational)> = m
                .iter()
                .map(|r| {
                    let row: Vec<BigRational> = r.iter().map(|&v| int(v)).collect();
                    let b = row.iter().zip(&xs).map(|(a, b)| a * b).sum();
                    (dense_to_sparse(&row), b)
                })
                .collect();
            let sol = solve(rows.clone(), ncols).expect("consistent by construction");
            for (row, b) in rows {
                let lhs: BigRational = row.iter().map(|(c, v)| v * &sol[*c]).sum();
                prop_assert_eq!(lhs, b);
            }
        }
    }
}

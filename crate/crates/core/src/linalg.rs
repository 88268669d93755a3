//! Sparse vectors, low-pivot column reduction and small dense helpers.
//!
//! Reduction follows the boundary-matrix convention: the pivot of a
//! column is its largest nonzero row index (its "low"), and a column is
//! reduced against earlier columns until its low is unclaimed or it
//! vanishes.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::field::Field;

/// Sparse vector with strictly increasing indices and nonzero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<F: Field> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        SparseVec { entries: Vec::new() }
    }
}

impl<F: Field> SparseVec<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, F::one())] }
    }

    /// Builds a vector from unsorted pairs, summing repeated indices.
    pub fn from_pairs<I: IntoIterator<Item = (usize, F)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (i, c) in pairs {
            let slot = acc.entry(i).or_insert_with(F::zero);
            *slot = slot.add(&c);
        }
        SparseVec {
            entries: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn from_dense(v: &[F]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn low(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> F {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, a)| (*i, a.mul(c))).collect(),
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &F, other: &Self) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0);
            let ib = other.entries.get(b).map(|e| e.0);
            match (ia, ib) {
                (Some(x), Some(y)) if x == y => {
                    let v = self.entries[a].1.add(&c.mul(&other.entries[b].1));
                    if !v.is_zero() {
                        out.push((x, v));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (_, Some(y)) => {
                    out.push((y, c.mul(&other.entries[b].1)));
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.entries = out;
    }

    /// Reindexes entries through `f`; entries mapped to `None` are dropped.
    pub fn remap<G: Fn(usize) -> Option<usize>>(&self, f: G) -> Self {
        Self::from_pairs(
            self.entries
                .iter()
                .filter_map(|(i, c)| f(*i).map(|j| (j, c.clone()))),
        )
    }
}

/// A set of vectors in echelon form with respect to their lows.
///
/// Rows keep their insertion order, which makes reduction by lows
/// terminate with unique coefficients for vectors in the span.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    rows: Vec<SparseVec<F>>,
    pivot_row: BTreeMap<usize, usize>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), pivot_row: BTreeMap::new() }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    /// Reduces `v` by lows. Returns the residual and the coefficients
    /// `c_r` such that `v = residual + sum c_r * row_r`.
    pub fn reduce(&self, v: &SparseVec<F>) -> (SparseVec<F>, Vec<(usize, F)>) {
        let mut r = v.clone();
        let mut coeffs = Vec::new();
        while let Some(low) = r.low() {
            let Some(&row) = self.pivot_row.get(&low) else { break };
            let pivot = &self.rows[row];
            let c = r.get(low).div(&pivot.get(low));
            r.axpy(&c.neg(), pivot);
            coeffs.push((row, c));
        }
        (r, coeffs)
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v`, returning the new row index if `v` was independent.
    pub fn insert(&mut self, v: &SparseVec<F>) -> Option<usize> {
        let (r, _) = self.reduce(v);
        let low = r.low()?;
        let id = self.rows.len();
        self.pivot_row.insert(low, id);
        self.rows.push(r);
        Some(id)
    }
}

/// Result of reducing the columns of a matrix.
#[derive(Clone, Debug)]
pub struct ColumnReduction<F: Field> {
    /// Echelon basis of the column space.
    pub image: Echelon<F>,
    /// Basis of the null space, in source coordinates.
    pub kernel: Vec<SparseVec<F>>,
    /// Column that produced each image row.
    pub image_cols: Vec<usize>,
    /// Column that produced each kernel vector; kernel vectors only
    /// involve columns up to this one.
    pub kernel_cols: Vec<usize>,
}

/// Low-pivot reduction of `columns`, tracking the source combinations so
/// that vanishing columns yield a kernel basis.
pub fn reduce_columns<F: Field>(columns: &[SparseVec<F>]) -> ColumnReduction<F> {
    let mut image = Echelon::new();
    let mut sources: Vec<SparseVec<F>> = Vec::new();
    let mut kernel = Vec::new();
    let mut image_cols = Vec::new();
    let mut kernel_cols = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut r = col.clone();
        let mut v = SparseVec::unit(j);
        while let Some(low) = r.low() {
            let Some(&row) = image.pivot_row.get(&low) else { break };
            let pivot: &SparseVec<F> = &image.rows[row];
            let c = r.get(low).div(&pivot.get(low)).neg();
            r.axpy(&c, pivot);
            v.axpy(&c, &sources[row]);
        }
        match r.low() {
            None => {
                kernel.push(v);
                kernel_cols.push(j);
            }
            Some(low) => {
                image.pivot_row.insert(low, image.rows.len());
                image.rows.push(r);
                sources.push(v);
                image_cols.push(j);
            }
        }
    }
    ColumnReduction { image, kernel, image_cols, kernel_cols }
}

/// Rank of a list of dense vectors of equal length.
pub fn dense_rank<F: Field>(vectors: &[Vec<F>]) -> usize {
    let mut e = Echelon::new();
    vectors
        .iter()
        .filter(|v| e.insert(&SparseVec::from_dense(v)).is_some())
        .count()
}

/// An echelon basis of the span of dense vectors.
pub fn dense_span<F: Field>(vectors: &[Vec<F>]) -> Echelon<F> {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(&SparseVec::from_dense(v));
    }
    e
}

/// Dense matrix stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    pub rows: usize,
    pub columns: Vec<Vec<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, columns: vec![vec![F::zero(); rows]; cols] }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<F>>) -> Self {
        debug_assert!(columns.iter().all(|c| c.len() == rows));
        Matrix { rows, columns }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.rows];
        for (c, col) in v.iter().zip(&self.columns) {
            if c.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(col) {
                *o = o.add(&c.mul(a));
            }
        }
        out
    }

    pub fn compose(&self, inner: &Matrix<F>) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            columns: inner.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        dense_rank(&self.columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(|x| x.is_zero()))
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let cols: Vec<SparseVec<F>> = self.columns.iter().map(|c| SparseVec::from_dense(c)).collect();
        reduce_columns(&cols)
            .kernel
            .into_iter()
            .map(|v| v.to_dense(self.cols()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F2;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn axpy_cancels() {
        let mut a = SparseVec::from_pairs([(0, q(1)), (3, q(2))]);
        let b = SparseVec::from_pairs([(3, q(1)), (5, q(1))]);
        a.axpy(&q(-2), &b);
        assert_eq!(a.entries(), &[(0, q(1)), (5, q(-2))]);
    }

    #[test]
    fn column_reduction_rank_nullity() {
        // Columns e0+e1, e1+e2, e0+e2 over F2 are dependent.
        let one = F2(true);
        let cols = [
            SparseVec::from_pairs([(0, one), (1, one)]),
            SparseVec::from_pairs([(1, one), (2, one)]),
            SparseVec::from_pairs([(0, one), (2, one)]),
        ];
        let red = reduce_columns(&cols);
        assert_eq!(red.image.rank(), 2);
        assert_eq!(red.kernel.len(), 1);
        assert_eq!(red.kernel[0], SparseVec::from_pairs([(0, one), (1, one), (2, one)]));
    }

    #[test]
    fn reduction_coefficients_reconstruct() {
        let mut e = Echelon::new();
        let r0 = SparseVec::from_pairs([(0, q(1)), (2, q(3))]);
        let r1 = SparseVec::from_pairs([(1, q(2))]);
        e.insert(&r0);
        e.insert(&r1);
        let mut target = r0.scale(&q(5));
        target.axpy(&q(-1), &r1);
        let (res, coeffs) = e.reduce(&target);
        assert!(res.is_zero());
        let mut rebuilt = SparseVec::new();
        for (row, c) in coeffs {
            rebuilt.axpy(&c, &e.rows()[row]);
        }
        assert_eq!(rebuilt, target);
    }

    #[test]
    fn dense_kernel() {
        let m = Matrix::from_columns(2, vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(|x| x.is_zero()));
    }
}

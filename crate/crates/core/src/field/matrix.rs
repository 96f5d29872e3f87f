use std::fmt;
use std::ops::{Index, IndexMut};

use super::{FieldCtx, FieldElem, FieldError};

/// Dense row-major matrix over a [`FieldCtx`]. Empty shapes are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn zeros(field: &FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![FieldElem::ZERO; rows * cols] }
    }

    pub fn identity(field: &FieldCtx, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = FieldElem::ONE;
        }
        m
    }

    pub fn from_rows(field: &FieldCtx, rows: Vec<Vec<FieldElem>>, cols: usize) -> Result<Self, FieldError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(FieldError::DimensionMismatch { expected: cols, found: row.len() });
            }
            if let Some(&bad) = row.iter().find(|&&a| !field.contains(a)) {
                return Err(FieldError::ElementOutOfRange { index: bad.index() as u64, order: field.order() });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    /// Builds a matrix from canonical element indices.
    pub fn from_indices(field: &FieldCtx, rows: &[Vec<u64>], cols: usize) -> Result<Self, FieldError> {
        let rows = rows
            .iter()
            .map(|r| field.vector_from_indices(r))
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_rows(field, rows, cols)
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &FieldCtx, rows: usize, columns: &[Vec<FieldElem>]) -> Result<Self, FieldError> {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(FieldError::DimensionMismatch { expected: rows, found: col.len() });
            }
            for (i, &a) in col.iter().enumerate() {
                if !field.contains(a) {
                    return Err(FieldError::ElementOutOfRange { index: a.index() as u64, order: field.order() });
                }
                m[(i, j)] = a;
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_indices(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|a| a.index()).collect()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)];
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Matrix { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    /// Gauss-Jordan elimination. Pivots are the leftmost nonzero entries of
    /// each nonzero row; the result is the unique reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m[(r, c)]).expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = f.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                let factor = m[(i, c)];
                if i == r || factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let delta = f.mul(factor, m[(r, j)]);
                    m[(i, j)] = f.sub(m[(i, j)], delta);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vector(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>, FieldError> {
        if v.len() != self.cols {
            return Err(FieldError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElem;

    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|a| a.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Rank of a set of equal-length vectors.
pub fn vectors_rank(field: &FieldCtx, vectors: &[&[FieldElem]]) -> Result<usize, FieldError> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let cols: Vec<Vec<FieldElem>> = vectors.iter().map(|v| v.to_vec()).collect();
    Ok(Matrix::from_columns(field, first.len(), &cols)?.rank())
}

/// Decides whether `v` lies in the span of `basis`.
///
/// Returns the coefficients of one linear combination of `basis` equal to
/// `v` when it does. Free variables of the system are set to zero.
pub fn in_span(
    field: &FieldCtx,
    v: &[FieldElem],
    basis: &[&[FieldElem]],
) -> Result<Option<Vec<FieldElem>>, FieldError> {
    let n = v.len();
    if let Some(bad) = basis.iter().find(|b| b.len() != n) {
        return Err(FieldError::DimensionMismatch { expected: n, found: bad.len() });
    }
    let k = basis.len();
    let mut aug = Matrix::zeros(field, n, k + 1);
    for (j, b) in basis.iter().enumerate() {
        for i in 0..n {
            aug[(i, j)] = b[i];
        }
    }
    for i in 0..n {
        aug[(i, k)] = v[i];
    }
    let rref = aug.rref();
    if rref.pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut coeffs = vec![FieldElem::ZERO; k];
    for (row, &c) in rref.pivots.iter().enumerate() {
        coeffs[c] = rref.matrix[(row, k)];
    }
    Ok(Some(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u32, l: u32) -> FieldCtx {
        FieldCtx::new(p, l).unwrap()
    }

    /// Independent check: a column set is dependent iff some nontrivial
    /// combination of its columns vanishes. Enumerates all coefficient tuples.
    fn brute_independent(m: &Matrix, cols: &[usize]) -> bool {
        let f = m.field();
        let q = f.order() as u64;
        let total = q.pow(cols.len() as u32);
        for idx in 1..total {
            let coeffs = f.vector_at(cols.len(), idx);
            let vanishes = (0..m.rows()).all(|i| {
                cols.iter().zip(&coeffs).fold(FieldElem::ZERO, |acc, (&j, &c)| f.add(acc, f.mul(c, m[(i, j)]))).is_zero()
            });
            if vanishes {
                return false;
            }
        }
        true
    }

    fn brute_rank(m: &Matrix) -> usize {
        (0u32..1 << m.cols())
            .filter(|mask| {
                let cols: Vec<usize> = (0..m.cols()).filter(|j| mask >> j & 1 == 1).collect();
                brute_independent(m, &cols)
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn arb_matrix(p: u32, max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
            prop::collection::vec(0..p as u64, r * c).prop_map(move |raw| {
                let f = FieldCtx::prime(p).unwrap();
                let rows: Vec<Vec<u64>> = raw.chunks(c).map(|ch| ch.to_vec()).collect();
                Matrix::from_indices(&f, &rows, c).unwrap()
            })
        })
    }

    #[test]
    fn identity_is_reduced() {
        let f = gf(2, 1);
        let id = Matrix::identity(&f, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank(), 3);
    }

    #[test]
    fn equal_rows_have_rank_one() {
        let f = gf(2, 1);
        let m = Matrix::from_indices(&f, &[vec![1, 1], vec![1, 1]], 2).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let f = gf(3, 1);
        assert_eq!(Matrix::zeros(&f, 0, 4).rank(), 0);
        assert_eq!(Matrix::zeros(&f, 3, 0).rank(), 0);
    }

    #[test]
    fn ragged_rows_rejected() {
        let f = gf(2, 1);
        assert!(Matrix::from_indices(&f, &[vec![1, 0], vec![1]], 2).is_err());
        assert!(Matrix::from_indices(&f, &[vec![2]], 1).is_err());
    }

    #[test]
    fn span_membership_examples() {
        let f = gf(2, 1);
        let e1 = f.vector_from_indices(&[1, 0, 0]).unwrap();
        let e2 = f.vector_from_indices(&[0, 1, 0]).unwrap();
        let zero = vec![FieldElem::ZERO; 3];
        assert_eq!(in_span(&f, &zero, &[&e2]).unwrap(), Some(vec![FieldElem::ZERO]));
        assert_eq!(in_span(&f, &zero, &[]).unwrap(), Some(vec![]));
        assert_eq!(in_span(&f, &e1, &[&e2]).unwrap(), None);
        let v = f.vector_from_indices(&[1, 1, 0]).unwrap();
        assert_eq!(in_span(&f, &v, &[&e1, &e2]).unwrap(), Some(vec![FieldElem::ONE, FieldElem::ONE]));
        assert!(in_span(&f, &v, &[&[FieldElem::ONE]]).is_err());
    }

    #[test]
    fn rank_matches_brute_force_gf3_4x6() {
        // Deterministic pseudo-random 4x6 matrices over GF(3).
        let f = gf(3, 1);
        let mut state = 0x2545f491u64;
        for _ in 0..40 {
            let rows: Vec<Vec<u64>> = (0..4)
                .map(|_| {
                    (0..6)
                        .map(|_| {
                            state ^= state << 13;
                            state ^= state >> 7;
                            state ^= state << 17;
                            state % 3
                        })
                        .collect()
                })
                .collect();
            let m = Matrix::from_indices(&f, &rows, 6).unwrap();
            assert_eq!(m.rank(), brute_rank(&m), "{m:?}");
        }
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix(3, 4, 6)) {
            let once = m.rref();
            let twice = once.matrix.rref();
            prop_assert_eq!(&once.matrix, &twice.matrix);
            prop_assert_eq!(once.pivots, twice.pivots);
        }

        #[test]
        fn rank_matches_brute_force_gf2(m in arb_matrix(2, 4, 6)) {
            prop_assert_eq!(m.rank(), brute_rank(&m));
        }

        #[test]
        fn rref_preserves_column_independence(m in arb_matrix(3, 3, 5)) {
            let r = m.rref().matrix;
            for mask in 0u32..1 << m.cols() {
                let cols: Vec<usize> = (0..m.cols()).filter(|j| mask >> j & 1 == 1).collect();
                prop_assert_eq!(m.select_columns(&cols).rank() == cols.len(),
                                r.select_columns(&cols).rank() == cols.len());
            }
        }

        #[test]
        fn span_witness_reconstructs_vector(m in arb_matrix(2, 4, 4), target in 0u64..16) {
            let f = m.field().clone();
            let v = f.vector_at(m.rows(), target % (1 << m.rows()));
            let cols: Vec<Vec<FieldElem>> = (0..m.cols()).map(|j| m.column(j)).collect();
            let basis: Vec<&[FieldElem]> = cols.iter().map(|c| c.as_slice()).collect();
            if let Some(coeffs) = in_span(&f, &v, &basis).unwrap() {
                prop_assert_eq!(m.mul_vector(&coeffs).unwrap(), v);
            } else {
                let mut with_v = cols.clone();
                with_v.push(v.clone());
                prop_assert!(Matrix::from_columns(&f, m.rows(), &with_v).unwrap().rank() > m.rank());
            }
        }
    }
}

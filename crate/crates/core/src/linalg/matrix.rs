use serde_json::Value;

use super::{LinalgError, Subspace};
use crate::field::Field;

/// Dense row-major matrix over a field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Reduced row echelon form together with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    /// Builds a matrix from equal-length rows; `cols` fixes the width for zero rows.
    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::Shape(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Self::new(field, n_rows, cols, data)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[F::Elem]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Shape(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok(self
            .row_iter()
            .map(|r| r.iter().zip(x).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "cannot stack {} columns on {}",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix::new(self.field.clone(), self.rows + other.rows, self.cols, data)
    }

    /// Unique reduced row echelon form (leading ones, zeros above and below).
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let pivots = rref_in_place(&m.field, &mut m.data, m.rows, m.cols);
        Rref {
            rank: pivots.len(),
            pivots,
            matrix: m,
        }
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rref_in_place(&self.field, &mut data, self.rows, self.cols).len()
    }

    /// `{x : M x = 0}`.
    pub fn kernel(&self) -> Subspace<F> {
        let f = &self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut gens = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(matrix.get(r, free));
            }
            gens.push(v);
        }
        Subspace::span_unchecked(f.clone(), self.cols, gens)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.row_iter()
                .map(|r| Value::Array(r.iter().map(|x| self.field.to_json(x)).collect()))
                .collect(),
        )
    }
}

/// Row-reduces a row-major `rows x cols` buffer in place and returns the pivot columns.
pub(crate) fn rref_in_place<F: Field>(f: &F, data: &mut [F::Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&data[r * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            data[r * cols + j] = f.mul(&data[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c].clone();
            if f.is_zero(&factor) {
                continue;
            }
            for j in c..cols {
                let t = f.mul(&factor, &data[r * cols + j]);
                data[i * cols + j] = f.sub(&data[i * cols + j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn gf2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn identity_is_already_reduced() {
        let id = Matrix::identity(gf2(), 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn all_ones_two_by_two_over_gf2() {
        let m = Matrix::from_rows(gf2(), 2, vec![vec![1, 1], vec![1, 1]]).unwrap();
        let r = m.rref();
        assert_eq!(
            r.matrix,
            Matrix::from_rows(gf2(), 2, vec![vec![1, 1], vec![0, 0]]).unwrap()
        );
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let z = Matrix::zeros(gf2(), 2, 3);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rational_rref() {
        let q = Rationals;
        let m = Matrix::from_rows(
            q,
            3,
            vec![
                vec![q.from_i64(2), q.from_i64(4), q.from_i64(6)],
                vec![q.from_i64(1), q.from_i64(3), q.from_i64(5)],
            ],
        )
        .unwrap();
        let r = m.rref();
        assert_eq!(r.rank, 2);
        // [[1,0,-1],[0,1,2]]
        assert_eq!(r.matrix.row(0), &[q.from_i64(1), q.from_i64(0), q.from_i64(-1)]);
        assert_eq!(r.matrix.row(1), &[q.from_i64(0), q.from_i64(1), q.from_i64(2)]);
    }

    #[test]
    fn kernel_examples() {
        let f = gf2();
        assert_eq!(Matrix::zeros(f, 3, 3).kernel(), Subspace::full(f, 3));
        assert_eq!(Matrix::identity(f, 3).kernel(), Subspace::zero(f, 3));
        let k = Matrix::from_rows(f, 2, vec![vec![1, 1]]).unwrap().kernel();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis().row(0), &[1, 1]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_rows(f, 4, vec![vec![1, 2, 3, 4], vec![2, 4, 1, 0]]).unwrap();
        let k = m.kernel();
        assert_eq!(k.dim(), 4 - m.rank());
        for v in k.basis().row_iter() {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn shape_errors() {
        assert!(Matrix::new(gf2(), 2, 2, vec![1]).is_err());
        assert!(Matrix::from_rows(gf2(), 2, vec![vec![1]]).is_err());
        let a = Matrix::identity(gf2(), 2);
        let b = Matrix::identity(gf2(), 3);
        assert!(a.mul(&b).is_err());
        assert!(a.vstack(&b).is_err());
    }
}

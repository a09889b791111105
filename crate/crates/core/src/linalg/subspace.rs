use serde_json::{json, Value};

use super::{LinalgError, Matrix};
use crate::field::Field;

/// A subspace of `L^n`, stored as the nonzero rows of its reduced row echelon
/// basis. The representation is canonical, so `==` and `Hash` compare spans.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    /// Span of `generators`, each of length `ambient`.
    pub fn span(field: F, ambient: usize, generators: Vec<Vec<F::Elem>>) -> Result<Self, LinalgError> {
        let m = Matrix::from_rows(field, ambient, generators)?;
        Ok(Self::from_matrix_rows(&m))
    }

    pub(crate) fn span_unchecked(field: F, ambient: usize, generators: Vec<Vec<F::Elem>>) -> Self {
        Self::span(field, ambient, generators).expect("generator lengths match the ambient dimension")
    }

    /// Row space of `m`.
    pub fn from_matrix_rows(m: &Matrix<F>) -> Self {
        let r = m.rref();
        let cols = m.cols();
        let data = r.matrix.data()[..r.rank * cols].to_vec();
        Subspace {
            ambient: cols,
            basis: Matrix::new(m.field().clone(), r.rank, cols, data).expect("shape"),
        }
    }

    /// Wraps a basis already known to be in reduced row echelon form without zero rows.
    pub(crate) fn from_rref_unchecked(basis: Matrix<F>) -> Self {
        Subspace {
            ambient: basis.cols(),
            basis,
        }
    }

    pub fn zero(field: F, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: F, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
        }
    }

    /// Span of the standard basis vectors with the given (distinct, in-range) indices.
    pub fn coordinate(field: F, ambient: usize, indices: &[usize]) -> Result<Self, LinalgError> {
        let mut gens = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= ambient {
                return Err(LinalgError::Shape(format!(
                    "coordinate {i} outside ambient dimension {ambient}"
                )));
            }
            let mut v = vec![field.zero(); ambient];
            v[i] = field.one();
            gens.push(v);
        }
        Self::span(field, ambient, gens)
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical (RREF) basis, one vector per row.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[F::Elem]> + '_ {
        self.basis.row_iter()
    }

    pub fn pivots(&self) -> Vec<usize> {
        let f = self.field();
        self.basis
            .row_iter()
            .map(|r| r.iter().position(|x| !f.is_zero(x)).expect("no zero rows"))
            .collect()
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let f = self.field();
        let mut x = v.to_vec();
        for (row, p) in self.basis.row_iter().zip(self.pivots()) {
            let c = x[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi = f.sub(xi, &f.mul(&c, ri));
            }
        }
        x.iter().all(|e| f.is_zero(e))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis_vectors().all(|v| other.contains(v))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch(self.field().spec(), other.field().spec()));
        }
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        Ok(Self::from_matrix_rows(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        let f = self.field();
        let ka = self.dim();
        // (a, b) with a.A + b.B = 0 gives a.A in A ∩ B, and every element arises this way.
        let stacked = self.basis.vstack(&other.basis)?;
        let relations = stacked.transpose().kernel();
        let gens = relations
            .basis_vectors()
            .map(|rel| {
                (0..self.ambient)
                    .map(|j| (0..ka).fold(f.zero(), |acc, i| f.add(&acc, &f.mul(&rel[i], self.basis.get(i, j)))))
                    .collect()
            })
            .collect();
        Self::span(f.clone(), self.ambient, gens)
    }

    /// `{"ambient": n, "basis": [[...], ...]}`.
    pub fn to_json(&self) -> Value {
        json!({ "ambient": self.ambient, "basis": self.basis.to_json() })
    }

    pub fn from_json(field: F, v: &Value) -> Result<Self, LinalgError> {
        let bad = |m: &str| LinalgError::Json(m.to_string());
        let ambient = v
            .get("ambient")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer \"ambient\""))? as usize;
        let rows = v
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array \"basis\""))?;
        let mut gens = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or_else(|| bad("basis rows must be arrays"))?;
            gens.push(r.iter().map(|x| field.from_json(x)).collect::<Result<Vec<_>, _>>()?);
        }
        Self::span(field, ambient, gens)
    }
}

//! Triples `(V, W, q)`: a finite-dimensional space `V`, a space `W`, and a
//! bilinear pairing `q: V x V -> W` that is symmetric or antisymmetric
//! (possibly with a different sign on each `W`-coordinate).

mod cheeger;
mod connected;
mod dynamic;
mod valence;

pub use cheeger::{cheeger_constant_coordinate, cheeger_constant_exhaustive, CheegerMethod, CheegerReport};
pub use connected::{is_pairing_connected_exhaustive, ConnectednessReport};
pub use dynamic::DynTriple;
pub use valence::{q_valence_coordinate, q_valence_exhaustive, ValenceReport};

use num_rational::BigRational;
use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::budget::BudgetExceeded;
use crate::field::{Field, FieldError, FieldSpec, PrimeField};
use crate::linalg::{LinalgError, Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("malformed triple: {0}")]
    Shape(String),
    #[error("declared symmetry fails at q(b{i}, b{j}) in W-coordinate {w}")]
    Symmetry { i: usize, j: usize, w: usize },
    #[error("vector length {got} does not match dim V = {expected}")]
    Length { expected: usize, got: usize },
    #[error("Cheeger constant undefined for dim V = {0} (need at least 2)")]
    Undefined(usize),
    #[error("subspace of dimension {dim} is not admissible in dim V = {ambient} (need 0 < dim F <= dim V / 2)")]
    Inadmissible { dim: usize, ambient: usize },
    #[error("basis index {index} out of range for dim V = {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("{0}; {1}")]
    Budget(BudgetExceeded, &'static str),
    #[error("exhaustive search needs a finite field, got {0}")]
    NonEnumerable(FieldSpec),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("triple JSON: {0}")]
    Json(String),
}

/// How `q(b_j, b_i)` relates to `q(b_i, b_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    /// One sign per `W`-coordinate: `true` for symmetric, `false` for antisymmetric.
    Componentwise(Vec<bool>),
}

impl Symmetry {
    fn symmetric_at(&self, w: usize) -> bool {
        match self {
            Symmetry::Symmetric => true,
            Symmetry::Antisymmetric => false,
            Symmetry::Componentwise(signs) => signs[w],
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Symmetry::Symmetric => json!("symmetric"),
            Symmetry::Antisymmetric => json!("antisymmetric"),
            Symmetry::Componentwise(signs) => {
                json!({ "componentwise": signs.iter().map(|&s| if s { 1 } else { -1 }).collect::<Vec<i32>>() })
            }
        }
    }

    fn from_json(v: &Value) -> Result<Self, PairingError> {
        let bad = || PairingError::Json(format!("unknown symmetry {v}"));
        match v {
            Value::String(s) if s == "symmetric" => Ok(Symmetry::Symmetric),
            Value::String(s) if s == "antisymmetric" => Ok(Symmetry::Antisymmetric),
            Value::Object(o) => {
                let signs = o.get("componentwise").and_then(Value::as_array).ok_or_else(bad)?;
                signs
                    .iter()
                    .map(|s| match s.as_i64() {
                        Some(1) => Ok(true),
                        Some(-1) => Ok(false),
                        _ => Err(bad()),
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(Symmetry::Componentwise)
            }
            _ => Err(bad()),
        }
    }
}

/// A pairing given by its structure tensor in fixed bases `b_1..b_n` of `V`
/// and `w_1..w_m` of `W`: `q(b_i, b_j) = sum_w tensor[i][j][w] w_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingTriple<F: Field> {
    field: F,
    dim_v: usize,
    dim_w: usize,
    /// Flat, index `(i * dim_v + j) * dim_w + w`.
    tensor: Vec<F::Elem>,
    symmetry: Symmetry,
}

impl<F: Field> PairingTriple<F> {
    /// Validates the shape and checks the declared symmetry entry by entry.
    pub fn new(
        field: F,
        dim_v: usize,
        dim_w: usize,
        tensor: Vec<F::Elem>,
        symmetry: Symmetry,
    ) -> Result<Self, PairingError> {
        if tensor.len() != dim_v * dim_v * dim_w {
            return Err(PairingError::Shape(format!(
                "tensor has {} entries, expected {dim_v} x {dim_v} x {dim_w}",
                tensor.len()
            )));
        }
        if let Symmetry::Componentwise(signs) = &symmetry {
            if signs.len() != dim_w {
                return Err(PairingError::Shape(format!(
                    "{} signs for dim W = {dim_w}",
                    signs.len()
                )));
            }
        }
        let t = PairingTriple {
            field,
            dim_v,
            dim_w,
            tensor,
            symmetry,
        };
        for i in 0..dim_v {
            for j in i..dim_v {
                for w in 0..dim_w {
                    let a = t.entry(i, j, w);
                    let b = t.entry(j, i, w);
                    let expected = if t.symmetry.symmetric_at(w) {
                        a.clone()
                    } else {
                        t.field.neg(a)
                    };
                    if *b != expected {
                        return Err(PairingError::Symmetry { i, j, w });
                    }
                }
            }
        }
        Ok(t)
    }

    /// From `tensor[i][j]` = coordinates of `q(b_i, b_j)`.
    pub fn from_nested(
        field: F,
        dim_w: usize,
        tensor: Vec<Vec<Vec<F::Elem>>>,
        symmetry: Symmetry,
    ) -> Result<Self, PairingError> {
        let n = tensor.len();
        let mut flat = Vec::with_capacity(n * n * dim_w);
        for (i, row) in tensor.into_iter().enumerate() {
            if row.len() != n {
                return Err(PairingError::Shape(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, cell) in row.into_iter().enumerate() {
                if cell.len() != dim_w {
                    return Err(PairingError::Shape(format!(
                        "entry ({i}, {j}) has {} coordinates, expected {dim_w}",
                        cell.len()
                    )));
                }
                flat.extend(cell);
            }
        }
        Self::new(field, n, dim_w, flat, symmetry)
    }

    pub fn zero(field: F, dim_v: usize, dim_w: usize) -> Self {
        let tensor = vec![field.zero(); dim_v * dim_v * dim_w];
        PairingTriple {
            field,
            dim_v,
            dim_w,
            tensor,
            symmetry: Symmetry::Antisymmetric,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.symmetry
    }

    pub fn entry(&self, i: usize, j: usize, w: usize) -> &F::Elem {
        &self.tensor[(i * self.dim_v + j) * self.dim_w + w]
    }

    /// Coordinates of `q(b_i, b_j)`.
    pub fn pair_basis(&self, i: usize, j: usize) -> &[F::Elem] {
        let start = (i * self.dim_v + j) * self.dim_w;
        &self.tensor[start..start + self.dim_w]
    }

    fn check_len(&self, x: &[F::Elem]) -> Result<(), PairingError> {
        if x.len() != self.dim_v {
            return Err(PairingError::Length {
                expected: self.dim_v,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `q(x, y) = sum_ij x_i y_j q(b_i, b_j)`.
    pub fn apply(&self, x: &[F::Elem], y: &[F::Elem]) -> Result<Vec<F::Elem>, PairingError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.apply_unchecked(x, y))
    }

    fn apply_unchecked(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim_w];
        for (i, xi) in x.iter().enumerate().filter(|(_, xi)| !f.is_zero(xi)) {
            for (j, yj) in y.iter().enumerate().filter(|(_, yj)| !f.is_zero(yj)) {
                let c = f.mul(xi, yj);
                for (o, t) in out.iter_mut().zip(self.pair_basis(i, j)) {
                    *o = f.add(o, &f.mul(&c, t));
                }
            }
        }
        out
    }

    /// Matrix of `v -> q(x, v)`, one row per `W`-coordinate.
    fn left_map(&self, x: &[F::Elem]) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let mut rows = vec![vec![f.zero(); self.dim_v]; self.dim_w];
        for (i, xi) in x.iter().enumerate().filter(|(_, xi)| !f.is_zero(xi)) {
            for j in 0..self.dim_v {
                for (w, row) in rows.iter_mut().enumerate() {
                    row[j] = f.add(&row[j], &f.mul(xi, self.entry(i, j, w)));
                }
            }
        }
        rows
    }

    /// `C(F) = {v : q(f, v) = 0 for all f in F}`: the kernel of the maps
    /// `v -> q(f_b, v)` stacked over a basis of `F`.
    pub fn orthogonal_complement(&self, sub: &Subspace<F>) -> Result<Subspace<F>, PairingError> {
        self.check_subspace(sub)?;
        let rows: Vec<Vec<F::Elem>> = sub.basis_vectors().flat_map(|f| self.left_map(f)).collect();
        let m = Matrix::from_rows(self.field.clone(), self.dim_v, rows)?;
        Ok(m.kernel())
    }

    fn check_subspace(&self, sub: &Subspace<F>) -> Result<(), PairingError> {
        if sub.ambient() != self.dim_v {
            return Err(LinalgError::AmbientMismatch(sub.ambient(), self.dim_v).into());
        }
        if sub.field().spec() != self.field.spec() {
            return Err(LinalgError::FieldMismatch(sub.field().spec(), self.field.spec()).into());
        }
        Ok(())
    }

    /// `h_F = (dim V - dim F - dim C + dim(C ∩ F)) / dim F` for `0 < dim F <= dim V / 2`.
    pub fn cheeger_of_subspace(&self, sub: &Subspace<F>) -> Result<BigRational, PairingError> {
        self.check_subspace(sub)?;
        let k = sub.dim();
        if k == 0 || 2 * k > self.dim_v {
            return Err(PairingError::Inadmissible {
                dim: k,
                ambient: self.dim_v,
            });
        }
        let c = self.orthogonal_complement(sub)?;
        let meet = c.intersection(sub)?;
        let num = self.dim_v as i64 - k as i64 - c.dim() as i64 + meet.dim() as i64;
        Ok(BigRational::new(num.into(), (k as i64).into()))
    }

    /// Appends one `W`-coordinate `z` with `q(b_pivot, b_pivot) = z` and every
    /// other basis pair mapping to `0` in it. The new coordinate is symmetric.
    pub fn augment(&self, pivot: usize) -> Result<PairingTriple<F>, PairingError> {
        if pivot >= self.dim_v {
            return Err(PairingError::IndexOutOfRange {
                index: pivot,
                dim: self.dim_v,
            });
        }
        let f = &self.field;
        let n = self.dim_v;
        let m = self.dim_w + 1;
        let mut tensor = Vec::with_capacity(n * n * m);
        for i in 0..n {
            for j in 0..n {
                tensor.extend_from_slice(self.pair_basis(i, j));
                tensor.push(if i == pivot && j == pivot { f.one() } else { f.zero() });
            }
        }
        let mut signs: Vec<bool> = (0..self.dim_w).map(|w| self.symmetry.symmetric_at(w)).collect();
        signs.push(true);
        Ok(PairingTriple {
            field: f.clone(),
            dim_v: n,
            dim_w: m,
            tensor,
            symmetry: Symmetry::Componentwise(signs),
        })
    }

    /// Whether `q(x, x) = 0` for every `x`: zero diagonal and `q(b_j, b_i) = -q(b_i, b_j)`.
    pub fn is_alternating(&self) -> bool {
        let f = &self.field;
        (0..self.dim_v).all(|i| {
            self.pair_basis(i, i).iter().all(|e| f.is_zero(e))
                && (i + 1..self.dim_v).all(|j| {
                    self.pair_basis(i, j)
                        .iter()
                        .zip(self.pair_basis(j, i))
                        .all(|(a, b)| f.is_zero(&f.add(a, b)))
                })
        })
    }

    /// The same pairing with every `W`-coordinate negated on pairs `(i, j)` with `i > j`.
    /// Flips the orientation convention of an antisymmetric pairing.
    pub fn with_lower_triangle_negated(&self) -> Result<PairingTriple<F>, PairingError> {
        let f = &self.field;
        let n = self.dim_v;
        let mut tensor = self.tensor.clone();
        for i in 0..n {
            for j in 0..i {
                for w in 0..self.dim_w {
                    let idx = (i * n + j) * self.dim_w + w;
                    tensor[idx] = f.neg(&tensor[idx]);
                }
            }
        }
        let symmetry = match &self.symmetry {
            Symmetry::Symmetric => Symmetry::Antisymmetric,
            Symmetry::Antisymmetric => Symmetry::Symmetric,
            Symmetry::Componentwise(s) => Symmetry::Componentwise(s.iter().map(|b| !b).collect()),
        };
        // a nonzero diagonal only fits the new declaration in characteristic 2
        PairingTriple::new(f.clone(), n, self.dim_w, tensor, symmetry)
    }

    /// `{"field", "dimV", "dimW", "tensor": [[[...]]], "symmetry"}`.
    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let tensor: Vec<Value> = (0..self.dim_v)
            .map(|i| {
                Value::Array(
                    (0..self.dim_v)
                        .map(|j| Value::Array(self.pair_basis(i, j).iter().map(|e| f.to_json(e)).collect()))
                        .collect(),
                )
            })
            .collect();
        json!({
            "field": f.spec().to_string(),
            "dimV": self.dim_v,
            "dimW": self.dim_w,
            "tensor": tensor,
            "symmetry": self.symmetry.to_json(),
        })
    }

    /// Parses the fields written by [`to_json`](Self::to_json); `field` must match `F`.
    pub fn from_json(field: F, v: &Value) -> Result<Self, PairingError> {
        let bad = |m: &str| PairingError::Json(m.to_string());
        let dim = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|d| d as usize)
                .ok_or_else(|| PairingError::Json(format!("missing integer {key:?}")))
        };
        let (n, m) = (dim("dimV")?, dim("dimW")?);
        let symmetry = Symmetry::from_json(v.get("symmetry").ok_or_else(|| bad("missing \"symmetry\""))?)?;
        let rows = v
            .get("tensor")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array \"tensor\""))?;
        if rows.len() != n {
            return Err(PairingError::Shape(format!(
                "tensor has {} rows, dimV is {n}",
                rows.len()
            )));
        }
        let mut nested = Vec::with_capacity(n);
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad("tensor rows must be arrays"))?;
            let mut cells = Vec::with_capacity(row.len());
            for cell in row {
                let cell = cell.as_array().ok_or_else(|| bad("tensor entries must be arrays"))?;
                cells.push(cell.iter().map(|e| field.from_json(e)).collect::<Result<Vec<_>, _>>()?);
            }
            nested.push(cells);
        }
        Self::from_nested(field, m, nested, symmetry)
    }
}

/// Random triple over `GF(p)` with the given symmetry: entries above the
/// diagonal are uniform, the rest follow from the symmetry. The diagonal is
/// uniform where the symmetry allows it (symmetric coordinates, or any
/// coordinate in characteristic 2) and zero otherwise.
pub fn random_triple<R: Rng>(
    field: PrimeField,
    dim_v: usize,
    dim_w: usize,
    symmetry: Symmetry,
    rng: &mut R,
) -> PairingTriple<PrimeField> {
    let p = field.modulus();
    let n = dim_v;
    let mut tensor = vec![0u32; n * n * dim_w];
    for i in 0..n {
        for j in i..n {
            for w in 0..dim_w {
                let sym = symmetry.symmetric_at(w);
                let a = if i < j || sym || p == 2 { rng.gen_range(0..p) } else { 0 };
                tensor[(i * n + j) * dim_w + w] = a;
                tensor[(j * n + i) * dim_w + w] = if sym { a } else { field.neg(&a) };
            }
        }
    }
    PairingTriple::new(field, dim_v, dim_w, tensor, symmetry).expect("constructed symmetric")
}

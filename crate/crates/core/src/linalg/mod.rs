//! Exact matrices and canonical subspaces over a [`Field`](crate::field::Field),
//! plus the exhaustive streams the brute-force oracles run on.

mod enumerate;
mod matrix;
mod subspace;

pub(crate) use enumerate::reduce_against;
pub use enumerate::{
    all_vectors, enumerate_subspaces, enumerate_unordered_bases, gaussian_binomial, gl_order, profiles,
    projective_basis_count, projective_points, subspace_count, unordered_basis_count, IndependentSets, Profile,
    ProfileIter, SubspaceStream,
};
pub(crate) use matrix::rref_in_place;
pub use matrix::{Matrix, Rref};
pub use subspace::Subspace;

use thiserror::Error;

use crate::budget::BudgetExceeded;
use crate::field::{FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("subspaces over different fields: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("{0} is not enumerable; exhaustive searches need a finite field")]
    NonEnumerable(FieldSpec),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("malformed subspace JSON: {0}")]
    Json(String),
}

//! Exact tools for comparing graph expansion with the expansion of vector
//! spaces carrying a vector-valued bilinear pairing, in particular the cup
//! product pairing `H^1 x H^1 -> H^2` of a right-angled Artin group.
//!
//! * [`field`]: exact scalars over `GF(p)` and the rationals.
//! * [`linalg`]: matrices, canonical subspaces, exhaustive subspace and basis streams.
//! * [`graph`]: simplicial graphs, the exact vertex Cheeger constant, spectral bounds, generators.
//! * [`raag`]: the cohomology triple of a graph and the centralizer-rank dictionary.
//! * [`pairing`]: pairing triples, their Cheeger constant, q-valence and pairing-connectedness.
//! * [`family`]: family reports and the equivalence verifications.

pub mod budget;
pub mod family;
pub mod field;
pub mod graph;
pub mod linalg;
pub mod pairing;
pub mod raag;

pub use budget::{BudgetExceeded, BudgetKind, Budgets};
pub use field::{Field, FieldElement, FieldError, FieldSpec, PrimeField, Rationals};
pub use linalg::{LinalgError, Matrix, Subspace};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Caps on exhaustive enumerations. Each search computes its size up front
/// and refuses to start when it would exceed the matching cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Vertex subsets visited by the exact graph Cheeger search (`2^n`).
    pub subsets: u64,
    /// Subspaces visited by a subspace-enumeration oracle.
    pub subspaces: u64,
    /// Bases visited by a basis-enumeration oracle.
    pub bases: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        // 2^24 subsets: graphs up to 24 vertices.
        // 400k subspaces: n <= 8 over GF(2), n <= 6 over GF(3), n <= 5 over GF(5) for dim <= n/2.
        // 2000 bases: n <= 4 over GF(2), n <= 3 over GF(3).
        Budgets {
            subsets: 1 << 24,
            subspaces: 400_000,
            bases: 2_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetKind {
    Subsets,
    Subspaces,
    Bases,
}

impl BudgetKind {
    /// The command-line flag that raises this budget.
    pub fn flag(&self) -> &'static str {
        match self {
            BudgetKind::Subsets => "--budget-subsets",
            BudgetKind::Subspaces => "--budget-subspaces",
            BudgetKind::Bases => "--budget-bases",
        }
    }
}

impl fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetKind::Subsets => "subset",
            BudgetKind::Subspaces => "subspace",
            BudgetKind::Bases => "basis",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{kind} enumeration needs {needed} candidates but the limit is {limit} (raise {})", .kind.flag())]
pub struct BudgetExceeded {
    pub kind: BudgetKind,
    pub needed: u128,
    pub limit: u64,
}

impl BudgetExceeded {
    pub(crate) fn check(kind: BudgetKind, needed: u128, limit: u64) -> Result<(), BudgetExceeded> {
        if needed > limit as u128 {
            Err(BudgetExceeded { kind, needed, limit })
        } else {
            Ok(())
        }
    }
}

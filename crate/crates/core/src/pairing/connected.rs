use rayon::prelude::*;
use serde_json::{json, Value};

use super::{PairingError, PairingTriple};
use crate::budget::{BudgetExceeded, BudgetKind};
use crate::field::PrimeField;
use crate::linalg::{gaussian_binomial, Subspace, SubspaceStream};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectednessReport {
    pub connected: bool,
    /// Complementary `(V0, V1)` with `q(V0, V1) = 0`, when one exists.
    pub witness: Option<(Subspace<PrimeField>, Subspace<PrimeField>)>,
    /// Subspaces `V0` and candidate partners `V1` examined.
    pub visited: u64,
}

impl ConnectednessReport {
    pub fn to_json(&self) -> Value {
        json!({
            "connected": self.connected,
            "witness": self.witness.as_ref().map(|(a, b)| json!({ "V0": a.to_json(), "V1": b.to_json() })),
            "visited": self.visited,
        })
    }
}

/// Whether every decomposition `V = V0 ⊕ V1` into nonzero subspaces has
/// `q(v0, v1) != 0` for some `v0 in V0`, `v1 in V1`.
///
/// The zero pattern of `q` is symmetric, so it suffices to take
/// `1 <= dim V0 <= n / 2`. Each `V1` that could pair trivially with `V0` lies in
/// `C(V0)`; the search enumerates the `(n - dim V0)`-dimensional subspaces of
/// `C(V0)` and checks the remaining condition `V0 ∩ V1 = 0` on each.
///
/// The `V0` candidates, and then the partners tried so far, are charged against
/// `subspace_budget` in enumeration order.
pub fn is_pairing_connected_exhaustive(
    t: &PairingTriple<PrimeField>,
    subspace_budget: u64,
) -> Result<ConnectednessReport, PairingError> {
    let f = *t.field();
    let n = t.dim_v();
    let dims: Vec<usize> = (1..=n / 2).collect();
    let stream = SubspaceStream::new(f, n, &dims);
    let over = |needed: u128| {
        BudgetExceeded::check(BudgetKind::Subspaces, needed, subspace_budget)
            .map_err(|e| PairingError::Budget(e, "pairing-connectedness has no fast path"))
    };
    let mut charged = stream.total();
    over(charged)?;
    let mut visited = 0u64;
    for v0 in stream {
        visited += 1;
        let k = v0.dim();
        let c0 = t.orthogonal_complement(&v0)?;
        if c0.dim() < n - k {
            continue;
        }
        charged = charged.saturating_add(gaussian_binomial(c0.dim(), n - k, f.order()));
        over(charged)?;
        let inner = SubspaceStream::new(f, c0.dim(), &[n - k]);
        let (found, tried) = find_partner(&v0, &c0, inner);
        visited += tried;
        if let Some(v1) = found {
            // q(V0, V1) = 0 by construction; confirm on bases anyway
            debug_assert!(v0.basis_vectors().all(|a| v1
                .basis_vectors()
                .all(|b| t.apply_unchecked(a, b).iter().all(|e| *e == 0))));
            return Ok(ConnectednessReport {
                connected: false,
                witness: Some((v0, v1)),
                visited,
            });
        }
    }
    Ok(ConnectednessReport {
        connected: true,
        witness: None,
        visited,
    })
}

/// First subspace of `C(V0)` (enumerated in coordinates of its basis) meeting `V0` trivially.
fn find_partner(
    v0: &Subspace<PrimeField>,
    c0: &Subspace<PrimeField>,
    inner: SubspaceStream,
) -> (Option<Subspace<PrimeField>>, u64) {
    let n = v0.ambient();
    let lift = |coords: &Subspace<PrimeField>| -> Subspace<PrimeField> {
        let m = coords
            .basis()
            .mul(c0.basis())
            .expect("coordinates match the basis of C(V0)");
        Subspace::from_matrix_rows(&m)
    };
    let results: Vec<(Option<usize>, u64)> = inner
        .chunks()
        .par_iter()
        .map(|profile| {
            let mut tried = 0;
            for (pos, coords) in profile.iter().enumerate() {
                tried += 1;
                let v1 = lift(&coords);
                let stacked = v0.basis().vstack(v1.basis()).expect("same ambient");
                if stacked.rank() == n {
                    return (Some(pos), tried);
                }
            }
            (None, tried)
        })
        .collect();
    // stop at the first chunk with a hit; chunks after it are not counted
    let mut tried = 0;
    for (ci, (hit, count)) in results.iter().enumerate() {
        tried += count;
        if let Some(pos) = hit {
            let coords = inner.chunks()[ci].iter().nth(*pos).expect("position within chunk");
            return (Some(lift(&coords)), tried);
        }
    }
    (None, tried)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldSpec};
    use crate::linalg::enumerate_subspaces;
    use crate::pairing::{random_triple, Symmetry};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const BUDGET: u64 = 400_000;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn graph_triple(field: PrimeField, n: usize, edges: &[(usize, usize)]) -> PairingTriple<PrimeField> {
        let m = edges.len();
        let mut t = vec![vec![vec![0; m]; n]; n];
        for (e, &(i, j)) in edges.iter().enumerate() {
            t[i][j][e] = 1;
            t[j][i][e] = field.neg(&1);
        }
        PairingTriple::from_nested(field, m, t, Symmetry::Antisymmetric).unwrap()
    }

    /// Every ordered pair of nonzero subspaces with complementary dimensions.
    fn oracle(t: &PairingTriple<PrimeField>) -> bool {
        let n = t.dim_v();
        let spec = FieldSpec::Prime(t.field().modulus());
        for k in 1..n {
            for a in enumerate_subspaces(n, &[k], &spec).unwrap() {
                for b in enumerate_subspaces(n, &[n - k], &spec).unwrap() {
                    if a.intersection(&b).unwrap().dim() != 0 {
                        continue;
                    }
                    let silent = a.basis_vectors().all(|x| {
                        b.basis_vectors()
                            .all(|y| t.apply(x, y).unwrap().iter().all(|e| *e == 0))
                    });
                    if silent {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn examples() {
        let line = PairingTriple::zero(gf(2), 1, 0);
        assert!(is_pairing_connected_exhaustive(&line, BUDGET).unwrap().connected);
        let two = graph_triple(gf(2), 2, &[]);
        let r = is_pairing_connected_exhaustive(&two, BUDGET).unwrap();
        assert!(!r.connected);
        let (a, b) = r.witness.unwrap();
        assert_eq!(a.dim() + b.dim(), 2);
        assert!(
            is_pairing_connected_exhaustive(&graph_triple(gf(2), 2, &[(0, 1)]), BUDGET)
                .unwrap()
                .connected
        );
    }

    #[test]
    fn witness_is_a_silent_decomposition() {
        let t = graph_triple(gf(3), 5, &[(0, 1), (1, 2), (3, 4)]);
        let r = is_pairing_connected_exhaustive(&t, BUDGET).unwrap();
        let (a, b) = r.witness.unwrap();
        assert_eq!(a.dim() + b.dim(), 5);
        assert_eq!(a.intersection(&b).unwrap().dim(), 0);
        for x in a.basis_vectors() {
            for y in b.basis_vectors() {
                assert!(t.apply(x, y).unwrap().iter().all(|e| *e == 0));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let t = PairingTriple::zero(gf(2), 8, 1);
        assert!(is_pairing_connected_exhaustive(&t, 10).is_err());
        // the zero pairing stops at the first line
        assert!(!is_pairing_connected_exhaustive(&t, BUDGET).unwrap().connected);
    }

    #[test]
    fn graphs_on_four_vertices_match_the_oracle() {
        for mask in 0u64..64 {
            let edges: Vec<(usize, usize)> = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, e)| e)
                .collect();
            let t = graph_triple(gf(2), 4, &edges);
            assert_eq!(
                is_pairing_connected_exhaustive(&t, BUDGET).unwrap().connected,
                oracle(&t),
                "{edges:?}"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn matches_oracle_on_random_triples(p in prop::sample::select(vec![2u32, 3]), n in 1usize..5, m in 0usize..3, seed in any::<u64>(), sym in any::<bool>()) {
            let s = if sym { Symmetry::Symmetric } else { Symmetry::Antisymmetric };
            let t = random_triple(gf(p), n, m, s, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(is_pairing_connected_exhaustive(&t, BUDGET).unwrap().connected, oracle(&t));
        }
    }
}

use std::cmp::Ordering;

use num_rational::BigRational;
use rayon::prelude::*;

use super::{GraphError, SimplicialGraph};
use crate::budget::{BudgetExceeded, BudgetKind};

/// Exact vertex Cheeger constant with the first minimizing subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCheeger {
    pub value: BigRational,
    /// Sorted vertex indices of the minimizer.
    pub minimizer: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    boundary: u32,
    size: u32,
    mask: u64,
}

impl Candidate {
    /// Value first, then smaller sets, then lexicographically smaller sorted member lists.
    fn cmp_key(&self, other: &Self) -> Ordering {
        let lhs = self.boundary as u64 * other.size as u64;
        let rhs = other.boundary as u64 * self.size as u64;
        lhs.cmp(&rhs).then(self.size.cmp(&other.size)).then_with(|| {
            if self.mask == other.mask {
                return Ordering::Equal;
            }
            let first_diff = (self.mask ^ other.mask).trailing_zeros();
            if self.mask >> first_diff & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }

    fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if y.cmp_key(&x) == Ordering::Less { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    size: usize,
    best: Option<Candidate>,
}

impl Search<'_> {
    fn run(&mut self, start: usize, chosen: usize, mask: u64, nbr: u64) {
        if chosen == self.size {
            let cand = Candidate {
                boundary: (nbr & !mask).count_ones(),
                size: self.size as u32,
                mask,
            };
            if self.best.is_none_or(|b| cand.cmp_key(&b) == Ordering::Less) {
                self.best = Some(cand);
            }
            return;
        }
        let remaining = self.size - chosen;
        if let Some(best) = self.best {
            // Each vertex still to be added can absorb at most one current neighbor.
            let outside = (nbr & !mask).count_ones() as u64;
            let lower = outside.saturating_sub(remaining as u64);
            // Later subsets in this chunk lose ties, so >= prunes.
            if lower * best.size as u64 >= best.boundary as u64 * self.size as u64 {
                return;
            }
        }
        for v in start..=self.n - remaining {
            self.run(v + 1, chosen + 1, mask | 1 << v, nbr | self.adj[v]);
        }
    }
}

/// Minimum of `|boundary(A)| / |A|` over nonempty `A` with `2|A| <= n`.
///
/// The search is split into independent chunks by (subset size, smallest
/// member) and folded with an order-independent minimum, so the result and
/// the reported minimizer do not depend on the thread count.
pub fn cheeger_graph_exact(graph: &SimplicialGraph, subset_budget: u64) -> Result<GraphCheeger, GraphError> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(GraphError::CheegerUndefined(n));
    }
    if n > 63 {
        return Err(GraphError::TooLarge(n));
    }
    BudgetExceeded::check(BudgetKind::Subsets, 1u128 << n, subset_budget).map_err(GraphError::Budget)?;
    let adj = graph.adjacency_masks();
    let chunks: Vec<(usize, usize)> = (1..=n / 2)
        .flat_map(|k| (0..=n - k).map(move |first| (k, first)))
        .collect();
    let best = chunks
        .par_iter()
        .map(|&(k, first)| {
            let mut s = Search {
                adj: &adj,
                n,
                size: k,
                best: None,
            };
            s.run(first + 1, 1, 1 << first, adj[first]);
            s.best
        })
        .reduce(|| None, Candidate::better)
        .expect("n >= 2 leaves at least one admissible subset");
    Ok(GraphCheeger {
        value: BigRational::new((best.boundary as i64).into(), (best.size as i64).into()),
        minimizer: (0..n).filter(|&v| best.mask >> v & 1 == 1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ratio;
    use crate::graph::{complete, cycle, edgeless, path, star, VertexSubset};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const BUDGET: u64 = 1 << 24;

    /// Plain enumeration of every admissible subset via the subset API.
    fn oracle(g: &SimplicialGraph) -> BigRational {
        let n = g.vertex_count();
        (1u64..1 << n)
            .filter(|m| 2 * m.count_ones() as usize <= n)
            .map(|m| {
                VertexSubset::from_indices(g, (0..n).filter(|v| m >> v & 1 == 1))
                    .unwrap()
                    .cheeger()
                    .unwrap()
            })
            .min()
            .unwrap()
    }

    #[test]
    fn square() {
        let r = cheeger_graph_exact(&cycle(4).unwrap(), BUDGET).unwrap();
        assert_eq!(r.value, ratio(1, 1));
        assert_eq!(r.minimizer, vec![0, 1]);
    }

    #[test]
    fn path_on_three_vertices() {
        let g = SimplicialGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let r = cheeger_graph_exact(&g, BUDGET).unwrap();
        // only singletons are admissible when n = 3
        assert_eq!(r.value, ratio(1, 1));
        assert_eq!(r.minimizer, vec![0]);
    }

    #[test]
    fn two_disjoint_edges() {
        let g = SimplicialGraph::from_indices(4, &[(0, 1), (2, 3)]).unwrap();
        let r = cheeger_graph_exact(&g, BUDGET).unwrap();
        assert_eq!(r.value, ratio(0, 1));
        assert_eq!(r.minimizer, vec![0, 1]);
    }

    #[test]
    fn even_cycles() {
        for (n, h) in [(4, ratio(1, 1)), (6, ratio(2, 3)), (8, ratio(1, 2)), (10, ratio(2, 5))] {
            assert_eq!(
                cheeger_graph_exact(&cycle(n).unwrap(), BUDGET).unwrap().value,
                h,
                "C{n}"
            );
        }
    }

    #[test]
    fn undefined_and_budget() {
        assert_eq!(
            cheeger_graph_exact(&edgeless(1).unwrap(), BUDGET),
            Err(GraphError::CheegerUndefined(1))
        );
        let err = cheeger_graph_exact(&cycle(12).unwrap(), 1 << 11).unwrap_err();
        assert!(err.to_string().contains("--budget-subsets"), "{err}");
        assert!(err.to_string().contains("spectral"), "{err}");
    }

    #[test]
    fn matches_oracle_on_all_small_graphs() {
        for n in 2..=6 {
            for g in SimplicialGraph::all_labeled(n) {
                let r = cheeger_graph_exact(&g, BUDGET).unwrap();
                assert_eq!(r.value, oracle(&g), "{:?}", g.edges());
                let witness = VertexSubset::from_indices(&g, r.minimizer.iter().copied()).unwrap();
                assert_eq!(witness.cheeger().unwrap(), r.value);
                assert_eq!(r.value == ratio(0, 1), !g.is_connected());
            }
        }
    }

    #[test]
    fn matches_oracle_on_named_graphs() {
        for g in [
            complete(7).unwrap(),
            star(6).unwrap(),
            path(9).unwrap(),
            cycle(11).unwrap(),
        ] {
            assert_eq!(cheeger_graph_exact(&g, BUDGET).unwrap().value, oracle(&g));
        }
    }

    #[test]
    fn invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40u64 {
            let n = 4 + (trial % 6) as usize;
            let mask = rand::Rng::gen::<u64>(&mut rng) & ((1u64 << (n * (n - 1) / 2)) - 1);
            let g = SimplicialGraph::from_edge_mask(n, mask);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.permuted(&perm);
            assert_eq!(
                cheeger_graph_exact(&g, BUDGET).unwrap().value,
                cheeger_graph_exact(&h, BUDGET).unwrap().value
            );
        }
    }
}

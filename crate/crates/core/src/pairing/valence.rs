use serde_json::{json, Value};

use super::{PairingError, PairingTriple};
use crate::budget::{BudgetExceeded, BudgetKind};
use crate::field::{Field, PrimeField};
use crate::linalg::{projective_basis_count, projective_points, reduce_against, Matrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValenceReport {
    /// `d(V)`.
    pub value: usize,
    /// A basis `B` attaining it (one representative per line), first in search order.
    pub basis: Vec<Vec<u32>>,
    /// Bottleneck of `rank(v -> q(s, v))` over `s`; no basis can do better.
    pub lower_bound: usize,
    /// Complete bases evaluated.
    pub visited: u64,
}

impl ValenceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value,
            "basis": self.basis,
            "lower_bound": self.lower_bound,
            "visited": self.visited,
            "method": "exhaustive",
        })
    }
}

/// Bitset over projective points.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn meets(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }
}

struct Search<'a> {
    field: PrimeField,
    points: &'a [Vec<u32>],
    /// `pairs_with[b]`: the points `s` with `q(s, b) != 0`.
    pairs_with: Vec<Vec<usize>>,
    /// `off_hyperplane[h]`: the points `s` with `h . s != 0`.
    off_hyperplane: Vec<Bits>,
    n: usize,
    lower_bound: usize,
    best: Option<(usize, Vec<usize>)>,
    visited: u64,
}

impl Search<'_> {
    /// Whether the points selected by `keep` span `V`: they must leave every hyperplane.
    fn spans(&self, keep: impl Fn(usize) -> bool) -> bool {
        let mut set = Bits::new(self.points.len());
        for s in (0..self.points.len()).filter(|&s| keep(s)) {
            set.set(s);
        }
        self.off_hyperplane.iter().all(|h| h.meets(&set))
    }

    /// Least `t` such that `{s : counts[s] <= t}` spans `V`; the best `max` over
    /// bases `S` drawn from the points, found greedily as in any matroid.
    fn bottleneck(&self, counts: &[usize]) -> usize {
        let top = counts.iter().copied().max().unwrap_or(0);
        (0..=top)
            .find(|&t| self.spans(|s| counts[s] <= t))
            .expect("all points together span")
    }

    fn done(&self) -> bool {
        self.best.as_ref().is_some_and(|(v, _)| *v == self.lower_bound)
    }

    fn run(
        &mut self,
        start: usize,
        chosen: &mut Vec<usize>,
        echelon: &mut Vec<(Vec<u32>, usize)>,
        counts: &mut [usize],
    ) {
        if chosen.len() == self.n {
            self.visited += 1;
            let v = self.bottleneck(counts);
            if self.best.as_ref().is_none_or(|(b, _)| v < *b) {
                self.best = Some((v, chosen.clone()));
            }
            return;
        }
        if let Some((b, _)) = &self.best {
            // counts only grow as the basis is completed
            let b = *b;
            if !self.spans(|s| counts[s] < b) {
                return;
            }
        }
        let remaining = self.n - chosen.len();
        for i in start..=self.points.len() - remaining {
            if self.done() {
                return;
            }
            let Some(red) = reduce_against(&self.field, echelon, &self.points[i]) else {
                continue;
            };
            for &s in &self.pairs_with[i] {
                counts[s] += 1;
            }
            chosen.push(i);
            echelon.push(red);
            self.run(i + 1, chosen, echelon, counts);
            echelon.pop();
            chosen.pop();
            for &s in &self.pairs_with[i] {
                counts[s] -= 1;
            }
        }
    }
}

fn dot(f: &PrimeField, a: &[u32], b: &[u32]) -> u32 {
    let acc: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    (acc % f.modulus() as u64) as u32
}

/// The q-valence `d(V) = min_S min_B max_{s in S} #{b in B : q(s, b) != 0}`
/// over bases `S` and `B` of `V`.
///
/// Both counts are unchanged by rescaling vectors, so `B` runs over bases of
/// projective points, and for fixed `B` the best `S` is a bottleneck basis.
/// Partial bases whose counts already rule out beating the best value are
/// pruned, and the search stops once the rank lower bound is reached.
/// Refuses to start when the number of projective bases exceeds `basis_budget`.
pub fn q_valence_exhaustive(t: &PairingTriple<PrimeField>, basis_budget: u64) -> Result<ValenceReport, PairingError> {
    let f = *t.field();
    let n = t.dim_v();
    BudgetExceeded::check(BudgetKind::Bases, projective_basis_count(n, f.order()), basis_budget)
        .map_err(|e| PairingError::Budget(e, "the distinguished-basis value is an upper bound"))?;
    if n == 0 {
        return Ok(ValenceReport {
            value: 0,
            basis: Vec::new(),
            lower_bound: 0,
            visited: 1,
        });
    }
    let points = projective_points(f, n);
    let pairs_with = points
        .iter()
        .map(|b| {
            (0..points.len())
                .filter(|&s| t.apply_unchecked(&points[s], b).iter().any(|e| *e != 0))
                .collect()
        })
        .collect();
    let off_hyperplane = points
        .iter()
        .map(|h| {
            let mut bits = Bits::new(points.len());
            for (s, p) in points.iter().enumerate() {
                if dot(&f, h, p) != 0 {
                    bits.set(s);
                }
            }
            bits
        })
        .collect();
    let mut search = Search {
        field: f,
        points: &points,
        pairs_with,
        off_hyperplane,
        n,
        lower_bound: 0,
        best: None,
        visited: 0,
    };
    let ranks: Vec<usize> = points
        .iter()
        .map(|s| Matrix::from_rows(f, n, t.left_map(s)).expect("shape").rank())
        .collect();
    search.lower_bound = search.bottleneck(&ranks);
    let mut counts = vec![0; points.len()];
    search.run(0, &mut Vec::new(), &mut Vec::new(), &mut counts);
    let (value, chosen) = search.best.expect("V has a basis");
    Ok(ValenceReport {
        value,
        basis: chosen.iter().map(|&i| points[i].clone()).collect(),
        lower_bound: search.lower_bound,
        visited: search.visited,
    })
}

/// `max_i #{j : q(b_i, b_j) != 0}` for the distinguished basis; an upper bound on `d(V)`.
pub fn q_valence_coordinate<F: Field>(t: &PairingTriple<F>) -> usize {
    let f = t.field();
    (0..t.dim_v())
        .map(|i| {
            (0..t.dim_v())
                .filter(|&j| t.pair_basis(i, j).iter().any(|e| !f.is_zero(e)))
                .count()
        })
        .max()
        .unwrap_or(0)
}

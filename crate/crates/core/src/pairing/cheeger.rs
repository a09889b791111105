use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{PairingError, PairingTriple};
use crate::budget::{BudgetExceeded, BudgetKind};
use crate::field::{format_rational, Field, PrimeField};
use crate::linalg::{rref_in_place, Subspace, SubspaceStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheegerMethod {
    /// Every admissible subspace.
    Exhaustive,
    /// Only spans of subsets of the distinguished basis.
    Coordinate,
}

impl fmt::Display for CheegerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheegerMethod::Exhaustive => "exhaustive",
            CheegerMethod::Coordinate => "coordinate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheegerReport<F: Field> {
    pub value: BigRational,
    /// The first minimizing subspace in enumeration order.
    pub minimizer: Subspace<F>,
    pub method: CheegerMethod,
    /// Candidate subspaces evaluated.
    pub visited: u64,
}

impl<F: Field> CheegerReport<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "value": format_rational(&self.value),
            "minimizer": self.minimizer.to_json(),
            "method": self.method.to_string(),
            "visited": self.visited,
        })
    }
}

const EXHAUSTIVE_HINT: &str = "the coordinate-subspace search is the fast alternative";

/// Numerator `n - dim(F + C(F))` and `dim F`, ordered by the ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Ratio {
    num: usize,
    den: usize,
}

impl Ratio {
    fn cmp_value(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// `h_F` numerator through ranks: with `M` the stacked maps `v -> q(f_b, v)`
/// over a basis of `F`, `dim C = n - rank M` and `dim (C ∩ F) = k - rank(M F^T)`,
/// so `n - k - dim C + dim (C ∩ F) = rank M - rank(M F^T)`.
fn rank_numerator(t: &PairingTriple<PrimeField>, basis: &[u32], k: usize) -> usize {
    let f = t.field();
    let p = f.modulus() as u64;
    let (n, m) = (t.dim_v(), t.dim_w());
    let rows = k * m;
    let mut big = vec![0u32; rows * n];
    for b in 0..k {
        let fb = &basis[b * n..(b + 1) * n];
        for v in 0..n {
            for w in 0..m {
                let mut acc = 0u64;
                for (i, &c) in fb.iter().enumerate() {
                    if c != 0 {
                        acc += c as u64 * *t.entry(i, v, w) as u64;
                    }
                }
                big[(b * m + w) * n + v] = (acc % p) as u32;
            }
        }
    }
    let mut gram = vec![0u32; rows * k];
    for r in 0..rows {
        for c in 0..k {
            let fc = &basis[c * n..(c + 1) * n];
            let acc: u64 = big[r * n..(r + 1) * n]
                .iter()
                .zip(fc)
                .map(|(&a, &b)| a as u64 * b as u64)
                .sum();
            gram[r * k + c] = (acc % p) as u32;
        }
    }
    let rank_big = rref_in_place(f, &mut big, rows, n).len();
    let rank_gram = rref_in_place(f, &mut gram, rows, k).len();
    rank_big - rank_gram
}

/// `h_V`, the minimum of `h_F` over every subspace `F` with `1 <= dim F <= n / 2`,
/// by enumerating all of them. Refuses to start when their number exceeds `subspace_budget`.
pub fn cheeger_constant_exhaustive(
    t: &PairingTriple<PrimeField>,
    subspace_budget: u64,
) -> Result<CheegerReport<PrimeField>, PairingError> {
    let n = t.dim_v();
    if n < 2 {
        return Err(PairingError::Undefined(n));
    }
    let dims: Vec<usize> = (1..=n / 2).collect();
    let stream = SubspaceStream::new(*t.field(), n, &dims);
    let total = stream.total();
    BudgetExceeded::check(BudgetKind::Subspaces, total, subspace_budget)
        .map_err(|e| PairingError::Budget(e, EXHAUSTIVE_HINT))?;
    // (value, chunk, position in chunk): chunks are already in enumeration order
    let best = stream
        .chunks()
        .par_iter()
        .enumerate()
        .map(|(ci, profile)| {
            let k = profile.dim();
            let mut best: Option<(Ratio, usize, usize)> = None;
            for (pos, sub) in profile.iter().enumerate() {
                let r = Ratio {
                    num: rank_numerator(t, sub.basis().data(), k),
                    den: k,
                };
                if best.is_none_or(|(b, _, _)| r.cmp_value(&b) == Ordering::Less) {
                    best = Some((r, ci, pos));
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(x), Some(y)) => {
                    let ord = y.0.cmp_value(&x.0).then((y.1, y.2).cmp(&(x.1, x.2)));
                    Some(if ord == Ordering::Less { y } else { x })
                }
                (x, None) => x,
                (None, y) => y,
            },
        )
        .expect("n >= 2 gives at least one admissible subspace");
    let (ratio, ci, pos) = best;
    let minimizer = stream.chunks()[ci].iter().nth(pos).expect("position within chunk");
    Ok(CheegerReport {
        value: BigRational::new((ratio.num as i64).into(), (ratio.den as i64).into()),
        minimizer,
        method: CheegerMethod::Exhaustive,
        visited: total as u64,
    })
}

/// Minimum of `h_F` over spans of basis subsets `B` with `1 <= |B| <= n / 2`,
/// each evaluated with the complement-and-intersection formula. Ties go to
/// the smaller, then lexicographically first, subset.
///
/// An upper bound on `h_V` in general; equal to it for cohomology triples of graphs.
pub fn cheeger_constant_coordinate<F: Field>(
    t: &PairingTriple<F>,
    subset_budget: u64,
) -> Result<CheegerReport<F>, PairingError> {
    let n = t.dim_v();
    if n < 2 {
        return Err(PairingError::Undefined(n));
    }
    let needed = if n >= 127 { u128::MAX } else { 1u128 << n };
    BudgetExceeded::check(BudgetKind::Subsets, needed, subset_budget)
        .map_err(|e| PairingError::Budget(e, "the graph-side spectral bounds remain available"))?;
    let chunks: Vec<(usize, usize)> = (1..=n / 2)
        .flat_map(|k| (0..=n - k).map(move |first| (k, first)))
        .collect();
    let results = chunks
        .par_iter()
        .map(|&(k, first)| {
            let mut best: Option<(BigRational, Vec<usize>)> = None;
            let mut visited = 0u64;
            let mut members = vec![first];
            coordinate_search(t, k, &mut members, &mut best, &mut visited)?;
            Ok((best, visited))
        })
        .collect::<Result<Vec<_>, PairingError>>()?;
    let mut visited = 0;
    let mut best: Option<(BigRational, Vec<usize>)> = None;
    // chunks are in (size, first member) order, so strict improvement keeps the first minimizer
    for (cand, v) in results {
        visited += v;
        if let Some(c) = cand {
            if best.as_ref().is_none_or(|b| c.0 < b.0) {
                best = Some(c);
            }
        }
    }
    let (value, members) = best.expect("n >= 2 gives at least one admissible subset");
    Ok(CheegerReport {
        value,
        minimizer: Subspace::coordinate(t.field().clone(), n, &members)?,
        method: CheegerMethod::Coordinate,
        visited,
    })
}

fn coordinate_search<F: Field>(
    t: &PairingTriple<F>,
    size: usize,
    members: &mut Vec<usize>,
    best: &mut Option<(BigRational, Vec<usize>)>,
    visited: &mut u64,
) -> Result<(), PairingError> {
    let n = t.dim_v();
    if members.len() == size {
        *visited += 1;
        let sub = Subspace::coordinate(t.field().clone(), n, members)?;
        let h = t.cheeger_of_subspace(&sub)?;
        if best.as_ref().is_none_or(|b| h < b.0) {
            *best = Some((h, members.clone()));
        }
        return Ok(());
    }
    let last = *members.last().expect("chunk seeds the first member");
    let remaining = size - members.len();
    for v in last + 1..=n - remaining {
        members.push(v);
        coordinate_search(t, size, members, best, visited)?;
        members.pop();
    }
    Ok(())
}

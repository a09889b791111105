use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GraphError, SimplicialGraph};

const PAIRING_ATTEMPTS: usize = 100_000;

pub fn cycle(n: usize) -> Result<SimplicialGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::Generator(format!(
            "a simple cycle needs at least 3 vertices, got {n}"
        )));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimplicialGraph::from_indices(n, &edges)
}

pub fn path(n: usize) -> Result<SimplicialGraph, GraphError> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    SimplicialGraph::from_indices(n, &edges)
}

pub fn complete(n: usize) -> Result<SimplicialGraph, GraphError> {
    let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    SimplicialGraph::from_indices(n, &edges)
}

/// `K_{1,leaves}`: hub `0` joined to `leaves` pendant vertices.
pub fn star(leaves: usize) -> Result<SimplicialGraph, GraphError> {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    SimplicialGraph::from_indices(leaves + 1, &edges)
}

pub fn edgeless(n: usize) -> Result<SimplicialGraph, GraphError> {
    SimplicialGraph::from_indices(n, &[])
}

/// Uniform `d`-regular simple graph from the pairing (configuration) model:
/// shuffle `n d` half-edges, pair them off, and reject any pairing with a loop
/// or a repeated edge. Deterministic in `seed`.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<SimplicialGraph, GraphError> {
    if !(n * d).is_multiple_of(2) {
        return Err(GraphError::Generator(format!("n*d = {} is odd", n * d)));
    }
    if d > 0 && d >= n {
        return Err(GraphError::Generator(format!(
            "degree {d} needs more than {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut edges = BTreeSet::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !edges.insert((u, v)) {
                continue 'attempt;
            }
        }
        let edges: Vec<_> = edges.into_iter().collect();
        return SimplicialGraph::from_indices(n, &edges);
    }
    Err(GraphError::Generator(format!(
        "no simple {d}-regular pairing on {n} vertices after {PAIRING_ATTEMPTS} attempts"
    )))
}

/// Gabber–Galil style graph on `(Z/m)^2`: `(x, y)` is joined to
/// `(x, y ± x)`, `(x, y ± (x + 1))`, `(x ± y, y)` and `(x ± (y + 1), y)`.
/// Loops and coincident edges are dropped, so degrees are at most 8.
/// Vertex `(x, y)` has index `x m + y` and label `"x,y"`.
pub fn margulis_like(m: usize) -> Result<SimplicialGraph, GraphError> {
    if m < 2 {
        return Err(GraphError::Generator(format!("modulus must be at least 2, got {m}")));
    }
    let idx = |x: usize, y: usize| (x % m) * m + (y % m);
    let mut edges = BTreeSet::new();
    for x in 0..m {
        for y in 0..m {
            let u = idx(x, y);
            for v in [idx(x, y + x), idx(x, y + x + 1), idx(x + y, y), idx(x + y + 1, y)] {
                // the inverse maps give the same undirected edges
                if u != v {
                    edges.insert((u.min(v), u.max(v)));
                }
            }
        }
    }
    let labels = (0..m).flat_map(|x| (0..m).map(move |y| format!("{x},{y}"))).collect();
    let edges: Vec<_> = edges.into_iter().collect();
    SimplicialGraph::with_labels(labels, &edges)
}

//! Finite simplicial graphs: no loops, no repeated edges, undirected.

mod cheeger;
mod generators;
mod io;
mod spectral;

pub use cheeger::{cheeger_graph_exact, GraphCheeger};
pub use generators::{complete, cycle, edgeless, margulis_like, path, random_regular, star};
pub use io::{GraphJson, InputFormat};
pub use spectral::{laplacian_lambda2, spectral_cheeger_bounds, SpectralBounds};

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_rational::BigRational;
use thiserror::Error;

use crate::budget::BudgetExceeded;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),
    #[error("self-loop edge {{{0:?}, {0:?}}}")]
    SelfLoop(String),
    #[error("repeated edge {{{0:?}, {1:?}}}")]
    RepeatedEdge(String, String),
    #[error("edge endpoint {0:?} is not a declared vertex")]
    UnknownVertex(String),
    #[error("Cheeger constant undefined for a graph with {0} vertices (need at least 2)")]
    CheegerUndefined(usize),
    #[error("invalid vertex subset: {0}")]
    SubsetPrecondition(String),
    #[error("graph is disconnected; spectral bounds need a connected graph")]
    Disconnected,
    #[error("{0} vertices is too many for exact subset search (limit 63); use spectral bounds")]
    TooLarge(usize),
    #[error("{0}; exact search is infeasible, use spectral bounds instead")]
    Budget(BudgetExceeded),
    #[error("graph parse error: {0}")]
    Parse(String),
    #[error("cannot generate graph: {0}")]
    Generator(String),
}

/// An undirected graph without loops or repeated edges, with labeled vertices.
///
/// Edges are stored once, as `(i, j)` index pairs with `i < j`, sorted
/// lexicographically; that order is also the order of the edge basis of the
/// associated cohomology triple.
#[derive(Debug, Clone)]
pub struct SimplicialGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl PartialEq for SimplicialGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for SimplicialGraph {}

impl SimplicialGraph {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self, GraphError> {
        let labels: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(l.clone()));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(s.to_string()))
        };
        let mut pairs = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            pairs.push((lookup(u.as_ref())?, lookup(v.as_ref())?));
        }
        Self::build(labels, index, pairs)
    }

    /// Graph on vertices labeled `"0"`, ..., `"n-1"`.
    pub fn from_indices(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    pub fn with_labels(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(l.clone()));
            }
        }
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= labels.len() {
                    return Err(GraphError::UnknownVertex(w.to_string()));
                }
            }
        }
        Self::build(labels, index, edges.to_vec())
    }

    fn build(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &pairs {
            if u == v {
                return Err(GraphError::SelfLoop(labels[u].clone()));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::RepeatedEdge(labels[u].clone(), labels[v].clone()));
            }
        }
        let edges: Vec<(usize, usize)> = seen.into_iter().collect();
        let mut adjacency = vec![Vec::new(); labels.len()];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for a in adjacency.iter_mut() {
            a.sort_unstable();
        }
        Ok(SimplicialGraph {
            labels,
            index,
            edges,
            adjacency,
        })
    }

    /// Labeled graph on `n` vertices whose edges are the set bits of `mask`,
    /// bit `t` standing for the `t`-th pair `(i, j)`, `i < j`, in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let mut edges = Vec::new();
        let mut t = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> t & 1 == 1 {
                    edges.push((i, j));
                }
                t += 1;
            }
        }
        Self::from_indices(n, &edges).expect("pairs are distinct and loop-free")
    }

    /// Every labeled graph on `n` vertices, in edge-mask order (`2^(n choose 2)` of them).
    pub fn all_labeled(n: usize) -> impl Iterator<Item = SimplicialGraph> {
        let pairs = n * n.saturating_sub(1) / 2;
        assert!(pairs < 64, "too many vertex pairs to enumerate");
        (0..1u64 << pairs).map(move |m| Self::from_edge_mask(n, m))
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Edges as `(i, j)` with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Largest vertex degree; 0 for the empty graph.
    pub fn max_valence(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Empty and single-vertex graphs count as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// Vertex sets of the connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut k = 0;
            while k < members.len() {
                let u = members[k];
                for &v in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The full (induced) subgraph on `vertices`, kept in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> SimplicialGraph {
        let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|(u, v)| Some((*pos.get(u)?, *pos.get(v)?)))
            .collect();
        Self::with_labels(labels, &edges).expect("induced subgraph of a simplicial graph")
    }

    /// Same graph with vertex `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> SimplicialGraph {
        let n = self.vertex_count();
        assert_eq!(perm.len(), n);
        let mut labels = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[i].clone();
        }
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Self::with_labels(labels, &edges).expect("permutation of a simplicial graph")
    }

    /// Neighborhood bitmasks; requires at most 64 vertices.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.vertex_count() <= 64);
        self.adjacency
            .iter()
            .map(|nb| nb.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect()
    }
}

/// A set of vertices of a particular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset<'g> {
    graph: &'g SimplicialGraph,
    members: BTreeSet<usize>,
}

impl<'g> VertexSubset<'g> {
    pub fn from_indices(
        graph: &'g SimplicialGraph,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GraphError> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v >= graph.vertex_count()) {
            return Err(GraphError::UnknownVertex(bad.to_string()));
        }
        Ok(VertexSubset { graph, members })
    }

    pub fn from_labels<S: AsRef<str>>(graph: &'g SimplicialGraph, labels: &[S]) -> Result<Self, GraphError> {
        let members = labels
            .iter()
            .map(|l| {
                graph
                    .index_of(l.as_ref())
                    .ok_or_else(|| GraphError::UnknownVertex(l.as_ref().to_string()))
            })
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(VertexSubset { graph, members })
    }

    pub fn all(graph: &'g SimplicialGraph) -> Self {
        VertexSubset {
            graph,
            members: (0..graph.vertex_count()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members.iter().map(|&v| self.graph.label(v)).collect()
    }

    /// Vertices outside the set adjacent to at least one member.
    pub fn boundary(&self) -> VertexSubset<'g> {
        let members = self
            .members
            .iter()
            .flat_map(|&v| self.graph.neighbors(v).iter().copied())
            .filter(|w| !self.members.contains(w))
            .collect();
        VertexSubset {
            graph: self.graph,
            members,
        }
    }

    /// `|boundary| / |A|`, defined for nonempty `A` with `2|A| <= n`.
    pub fn cheeger(&self) -> Result<BigRational, GraphError> {
        let n = self.graph.vertex_count();
        if self.members.is_empty() {
            return Err(GraphError::SubsetPrecondition("the subset is empty".into()));
        }
        if 2 * self.members.len() > n {
            return Err(GraphError::SubsetPrecondition(format!(
                "{} vertices is more than half of {n}",
                self.members.len()
            )));
        }
        Ok(BigRational::new(
            (self.boundary().len() as i64).into(),
            (self.members.len() as i64).into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ratio;

    fn p3() -> SimplicialGraph {
        SimplicialGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn construction_errors_name_the_culprit() {
        assert_eq!(
            SimplicialGraph::new(&["a", "b"], &[("a", "a")]),
            Err(GraphError::SelfLoop("a".into()))
        );
        assert_eq!(
            SimplicialGraph::new(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(GraphError::RepeatedEdge("b".into(), "a".into()))
        );
        assert_eq!(
            SimplicialGraph::new(&["a"], &[("a", "z")]),
            Err(GraphError::UnknownVertex("z".into()))
        );
        assert_eq!(
            SimplicialGraph::new(&["a", "a"], &[]),
            Err(GraphError::DuplicateVertex("a".into()))
        );
    }

    #[test]
    fn boundary_of_opposite_corners_of_square() {
        let c4 = cycle(4).unwrap();
        let a = VertexSubset::from_indices(&c4, [0, 2]).unwrap();
        assert_eq!(a.boundary().indices().collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn boundary_of_everything_is_empty() {
        let g = complete(4).unwrap();
        assert!(VertexSubset::all(&g).boundary().is_empty());
    }

    #[test]
    fn component_has_empty_boundary_and_zero_ratio() {
        let g = SimplicialGraph::from_indices(4, &[(0, 1), (2, 3)]).unwrap();
        let a = VertexSubset::from_indices(&g, [0, 1]).unwrap();
        assert!(a.boundary().is_empty());
        assert_eq!(a.cheeger().unwrap(), ratio(0, 1));
    }

    #[test]
    fn subset_ratios() {
        let k4 = complete(4).unwrap();
        assert_eq!(
            VertexSubset::from_indices(&k4, [0]).unwrap().cheeger().unwrap(),
            ratio(3, 1)
        );
        let g = p3();
        assert_eq!(
            VertexSubset::from_labels(&g, &["a"]).unwrap().cheeger().unwrap(),
            ratio(1, 1)
        );
        // two of three vertices is more than half
        assert!(matches!(
            VertexSubset::from_labels(&g, &["a", "c"]).unwrap().cheeger(),
            Err(GraphError::SubsetPrecondition(_))
        ));
        assert!(VertexSubset::from_indices(&g, []).unwrap().cheeger().is_err());
        // the ends of P5 a-b-c-d-e: {a, e} has boundary {b, d}; {a, c} has boundary {b, d}
        let p5 = path(5).unwrap();
        assert_eq!(
            VertexSubset::from_indices(&p5, [0, 1]).unwrap().cheeger().unwrap(),
            ratio(1, 2)
        );
    }

    #[test]
    fn valence_and_connectivity() {
        let s = star(3).unwrap();
        assert_eq!(s.max_valence(), 3);
        assert!(!edgeless(2).unwrap().is_connected());
        let c5 = cycle(5).unwrap();
        assert!(c5.is_connected());
        assert_eq!(c5.max_valence(), 2);
        let empty = SimplicialGraph::from_indices(0, &[]).unwrap();
        assert_eq!(empty.max_valence(), 0);
        assert!(empty.is_connected());
        assert!(edgeless(1).unwrap().is_connected());
    }

    #[test]
    fn all_labeled_counts() {
        assert_eq!(SimplicialGraph::all_labeled(4).count(), 64);
        assert_eq!(SimplicialGraph::all_labeled(1).count(), 1);
        assert_eq!(SimplicialGraph::all_labeled(0).count(), 1);
        let last = SimplicialGraph::all_labeled(4).last().unwrap();
        assert_eq!(last, complete(4).unwrap());
    }

    #[test]
    fn components_and_induced() {
        let g = SimplicialGraph::from_indices(5, &[(0, 3), (1, 2)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 3], vec![1, 2], vec![4]]);
        let h = g.induced_subgraph(&[3, 0, 4]);
        assert_eq!(h.labels(), &["3", "0", "4"]);
        assert_eq!(h.edges(), &[(0, 1)]);
    }
}

//! The degree-one cohomology triple `(H^1, H^2, cup)` of a right-angled Artin
//! group, and the centralizer ranks of its vertex generators.
//!
//! For a graph with vertices `v_1..v_n` and edges `e_1..e_m`, `H^1` has the
//! dual basis `v_1*..v_n*`, `H^2` has `e_1*..e_m*`, and
//! `v_i* ⌣ v_j* = ±e*` when `{v_i, v_j}` is the edge `e`, and `0` otherwise.

use serde_json::Value;
use thiserror::Error;

use crate::field::{Field, FieldError, FieldSpec, PrimeField, Rationals};
use crate::graph::SimplicialGraph;
use crate::pairing::{DynTriple, PairingTriple, Symmetry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RaagError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("the graph has no vertices")]
    EmptyGraph,
}

/// Which orientation of an edge gets `+e*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// `v_i* ⌣ v_j* = +e*` when `i < j`.
    #[default]
    SmallerFirst,
    /// `v_i* ⌣ v_j* = +e*` when `i > j`.
    LargerFirst,
}

/// A pairing triple built from a graph, with the bases named after the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaagTriple<F: Field> {
    triple: PairingTriple<F>,
    graph: SimplicialGraph,
    vertex_basis: Vec<String>,
    edge_basis: Vec<String>,
}

impl<F: Field> RaagTriple<F> {
    pub fn triple(&self) -> &PairingTriple<F> {
        &self.triple
    }

    pub fn into_triple(self) -> PairingTriple<F> {
        self.triple
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    /// `"a*"` for vertex `a`, in vertex order.
    pub fn vertex_basis(&self) -> &[String] {
        &self.vertex_basis
    }

    /// `"{a,b}*"` for edge `{a, b}`, in the graph's edge order.
    pub fn edge_basis(&self) -> &[String] {
        &self.edge_basis
    }

    /// The triple's JSON plus `"source_graph"`, `"vertex_basis"` and `"edge_basis"`.
    pub fn to_json(&self) -> Value {
        let mut v = self.triple.to_json();
        let obj = v.as_object_mut().expect("triple JSON is an object");
        obj.insert(
            "source_graph".into(),
            serde_json::to_value(self.graph.to_json()).expect("graph JSON"),
        );
        obj.insert("vertex_basis".into(), self.vertex_basis.clone().into());
        obj.insert("edge_basis".into(), self.edge_basis.clone().into());
        v
    }
}

pub fn build_triple<F: Field>(graph: &SimplicialGraph, field: F) -> RaagTriple<F> {
    build_triple_with(graph, field, SignConvention::default())
}

/// The cup product triple; edge `e_k` is the `k`-th edge in the graph's
/// lexicographic edge order.
pub fn build_triple_with<F: Field>(graph: &SimplicialGraph, field: F, convention: SignConvention) -> RaagTriple<F> {
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let mut tensor = vec![field.zero(); n * n * m];
    let (first, second) = match convention {
        SignConvention::SmallerFirst => (field.one(), field.neg(&field.one())),
        SignConvention::LargerFirst => (field.neg(&field.one()), field.one()),
    };
    for (e, &(i, j)) in graph.edges().iter().enumerate() {
        tensor[(i * n + j) * m + e] = first.clone();
        tensor[(j * n + i) * m + e] = second.clone();
    }
    let triple =
        PairingTriple::new(field, n, m, tensor, Symmetry::Antisymmetric).expect("cup product is antisymmetric");
    RaagTriple {
        triple,
        graph: graph.clone(),
        vertex_basis: graph.labels().iter().map(|l| format!("{l}*")).collect(),
        edge_basis: graph
            .edges()
            .iter()
            .map(|&(i, j)| format!("{{{},{}}}*", graph.label(i), graph.label(j)))
            .collect(),
    }
}

/// The cup product triple over a field chosen at run time, with its JSON form.
pub fn build_triple_dyn(graph: &SimplicialGraph, field: FieldSpec) -> Result<(DynTriple, Value), FieldError> {
    Ok(match field {
        FieldSpec::Prime(p) => {
            let r = build_triple(graph, PrimeField::new(p)?);
            let json = r.to_json();
            (DynTriple::Prime(r.into_triple()), json)
        }
        FieldSpec::Rational => {
            let r = build_triple(graph, Rationals);
            let json = r.to_json();
            (DynTriple::Rational(r.into_triple()), json)
        }
    })
}

/// Rank of the centralizer of the generator `v`, which is `<v> x A(lk(v))`: `1 + valence(v)`.
pub fn vertex_centralizer_rank(graph: &SimplicialGraph, vertex: &str) -> Result<usize, RaagError> {
    let i = graph
        .index_of(vertex)
        .ok_or_else(|| RaagError::UnknownVertex(vertex.to_string()))?;
    Ok(1 + graph.degree(i))
}

/// Largest centralizer rank of a nontrivial element: `1 +` maximum valence.
pub fn max_centralizer_rank(graph: &SimplicialGraph) -> Result<usize, RaagError> {
    if graph.vertex_count() == 0 {
        return Err(RaagError::EmptyGraph);
    }
    Ok(graph.max_valence() + 1)
}

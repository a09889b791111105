//! Graph file formats.
//!
//! JSON: `{"vertices": ["a", "b"], "edges": [["a", "b"]]}`.
//! Edge list: a `n m` header line, then `m` lines `u v` of 0-based vertex indices.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{GraphError, SimplicialGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Json,
    EdgeList,
}

impl FromStr for InputFormat {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(InputFormat::Json),
            "edgelist" => Ok(InputFormat::EdgeList),
            other => Err(GraphError::Parse(format!("unknown graph format {other:?}"))),
        }
    }
}

impl InputFormat {
    /// JSON if the first non-blank character is `{`, edge list otherwise.
    pub fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('{') {
            InputFormat::Json
        } else {
            InputFormat::EdgeList
        }
    }
}

impl SimplicialGraph {
    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.labels().to_vec(),
            edges: self
                .edges()
                .iter()
                .map(|&(u, v)| [self.label(u).to_string(), self.label(v).to_string()])
                .collect(),
        }
    }

    pub fn from_json(g: &GraphJson) -> Result<Self, GraphError> {
        let edges: Vec<(&str, &str)> = g.edges.iter().map(|[u, v]| (u.as_str(), v.as_str())).collect();
        let vertices: Vec<&str> = g.vertices.iter().map(String::as_str).collect();
        SimplicialGraph::new(&vertices, &edges)
    }

    pub fn from_json_str(text: &str) -> Result<Self, GraphError> {
        let g: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        Self::from_json(&g)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("graph JSON serializes")
    }

    /// Vertex labels are not part of this format; vertices are written by index.
    pub fn to_edgelist(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for &(u, v) in self.edges() {
            writeln!(out, "{u} {v}").expect("write to String");
        }
        out
    }

    /// Parses the edge-list format; vertices get labels `"0"`, ..., `"n-1"`.
    pub fn from_edgelist(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| GraphError::Parse("empty edge list".into()))?;
        let [n, m] = parse_pair(header, 1)?;
        let mut edges = Vec::with_capacity(m);
        for (lineno, line) in lines {
            let [u, v] = parse_pair(line, lineno)?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::Parse(format!(
                "header promises {m} edges, found {}",
                edges.len()
            )));
        }
        SimplicialGraph::from_indices(n, &edges)
    }

    pub fn parse(text: &str, format: Option<InputFormat>) -> Result<Self, GraphError> {
        match format.unwrap_or_else(|| InputFormat::sniff(text)) {
            InputFormat::Json => Self::from_json_str(text),
            InputFormat::EdgeList => Self::from_edgelist(text),
        }
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<[usize; 2], GraphError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let bad = || {
        GraphError::Parse(format!(
            "line {lineno}: expected two non-negative integers, got {line:?}"
        ))
    };
    if fields.len() != 2 {
        return Err(bad());
    }
    Ok([
        fields[0].parse().map_err(|_| bad())?,
        fields[1].parse().map_err(|_| bad())?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{margulis_like, random_regular};
    use proptest::prelude::*;

    #[test]
    fn json_example() {
        let text = r#"{"vertices":["a","b","c"],"edges":[["b","a"],["b","c"]]}"#;
        let g = SimplicialGraph::from_json_str(text).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(
            g.to_json_string(),
            r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"]]}"#
        );
    }

    #[test]
    fn json_rejects_loops_with_the_edge_named() {
        let err = SimplicialGraph::from_json_str(r#"{"vertices":["a"],"edges":[["a","a"]]}"#).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop("a".into()));
        assert!(SimplicialGraph::from_json_str("{\"vertices\": 3}").is_err());
    }

    #[test]
    fn edgelist_example() {
        let g = SimplicialGraph::from_edgelist("4 3\n0 1\n1 2\n\n2 3\n").unwrap();
        assert_eq!(g.to_edgelist(), "4 3\n0 1\n1 2\n2 3\n");
        assert!(SimplicialGraph::from_edgelist("3 2\n0 1\n").is_err());
        assert!(SimplicialGraph::from_edgelist("3 1\n0 x\n").is_err());
        assert!(matches!(
            SimplicialGraph::from_edgelist("3 2\n0 1\n1 0\n"),
            Err(GraphError::RepeatedEdge(_, _))
        ));
    }

    #[test]
    fn sniffing() {
        assert_eq!(InputFormat::sniff("  {\"vertices\":[]}"), InputFormat::Json);
        assert_eq!(InputFormat::sniff("2 1\n0 1"), InputFormat::EdgeList);
        let g = margulis_like(3).unwrap();
        assert_eq!(SimplicialGraph::parse(&g.to_json_string(), None).unwrap(), g);
    }

    proptest! {
        #[test]
        fn serializations_roundtrip(n in 4usize..14, seed in any::<u64>()) {
            let d = if n % 2 == 0 { 3 } else { 2 };
            let g = random_regular(n, d, seed).unwrap();
            let json = g.to_json_string();
            let back = SimplicialGraph::from_json_str(&json).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.to_json_string(), json);
            let text = g.to_edgelist();
            let back = SimplicialGraph::from_edgelist(&text).unwrap();
            prop_assert_eq!(back.edges(), g.edges());
            prop_assert_eq!(back.to_edgelist(), text);
        }
    }
}

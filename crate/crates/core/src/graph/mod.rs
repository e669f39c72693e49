//! Finite directed multigraphs, the standing hypotheses, the contracting
//! forest and weighted isomorphism.

mod contract;
mod iso;

pub use contract::{contracting_forest, ContractionData, LambdaImage};
pub use iso::{is_isomorphic, is_isomorphic_weighted};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub tgt: VertexId,
}

/// A finite directed graph with explicit edge identities. Parallel edges and
/// loops are allowed.
#[derive(Clone, Debug)]
pub struct DirectedMultigraph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl PartialEq for DirectedMultigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_names == other.vertex_names && self.edges == other.edges
    }
}

impl Eq for DirectedMultigraph {}

/// Wire format of a graph file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

fn check_name(kind: &str, name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::MalformedGraph(format!("empty {kind} id")));
    }
    if name.chars().any(char::is_whitespace) {
        return Err(Error::MalformedGraph(format!(
            "{kind} id `{name}` contains whitespace"
        )));
    }
    Ok(())
}

impl DirectedMultigraph {
    /// Builds a graph from vertex names and `(edge id, source, target)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertex_names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertex_names.is_empty() {
            return Err(Error::MalformedGraph("graph has no vertices".into()));
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in vertex_names.iter().enumerate() {
            check_name("vertex", v)?;
            if vertex_index.insert(v.clone(), VertexId(i as u32)).is_some() {
                return Err(Error::MalformedGraph(format!("duplicate vertex id `{v}`")));
            }
        }
        let mut out_edges = vec![Vec::new(); vertex_names.len()];
        let mut in_edges = vec![Vec::new(); vertex_names.len()];
        let mut edge_index = HashMap::new();
        let mut edge_list = Vec::new();
        for (name, src, tgt) in edges {
            check_name("edge", &name)?;
            let lookup = |v: &str| {
                vertex_index.get(v).copied().ok_or_else(|| {
                    Error::MalformedGraph(format!("edge `{name}` has dangling endpoint `{v}`"))
                })
            };
            let src = lookup(&src)?;
            let tgt = lookup(&tgt)?;
            let id = EdgeId(edge_list.len() as u32);
            if edge_index.insert(name.clone(), id).is_some() {
                return Err(Error::MalformedGraph(format!("duplicate edge id `{name}`")));
            }
            out_edges[src.index()].push(id);
            in_edges[tgt.index()].push(id);
            edge_list.push(Edge { name, src, tgt });
        }
        Ok(DirectedMultigraph {
            vertex_names,
            edges: edge_list,
            vertex_index,
            edge_index,
            out_edges,
            in_edges,
        })
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Self> {
        Self::new(
            spec.vertices.iter().cloned(),
            spec.edges
                .iter()
                .map(|e| (e.id.clone(), e.src.clone(), e.tgt.clone())),
        )
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: GraphSpec = serde_json::from_str(text)?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertex_names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.name.clone(),
                    src: self.vertex_name(e.src).to_string(),
                    tgt: self.vertex_name(e.tgt).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("graph spec serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].src
    }

    pub fn tgt(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].tgt
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.index()]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.index()]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_edges[v.index()].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_edges[v.index()].len()
    }

    /// Number of edges from `u` to `v`.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.out_edges(u)
            .iter()
            .filter(|&&e| self.tgt(e) == v)
            .count()
    }

    /// The graph with vertices and edges renamed by the given maps; ids not
    /// present in a map keep their name. Ordering is preserved.
    pub fn renamed(
        &self,
        vertex_map: &dyn Fn(&str) -> String,
        edge_map: &dyn Fn(&str) -> String,
    ) -> Result<Self> {
        Self::new(
            self.vertex_names.iter().map(|v| vertex_map(v)),
            self.edges.iter().map(|e| {
                (
                    edge_map(&e.name),
                    vertex_map(self.vertex_name(e.src)),
                    vertex_map(self.vertex_name(e.tgt)),
                )
            }),
        )
    }

    fn reaches_all(&self, start: VertexId, forward: bool) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([start]);
        seen[start.index()] = true;
        while let Some(v) = queue.pop_front() {
            let next = if forward {
                self.out_edges(v)
            } else {
                self.in_edges(v)
            };
            for &e in next {
                let w = if forward { self.tgt(e) } else { self.src(e) };
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_strongly_connected(&self) -> bool {
        let v0 = VertexId(0);
        self.reaches_all(v0, true) && self.reaches_all(v0, false)
    }

    /// Edges that are the single incoming edge of their target.
    pub fn single_incoming_edges(&self) -> Vec<EdgeId> {
        self.edge_ids()
            .filter(|&e| self.in_degree(self.tgt(e)) == 1)
            .collect()
    }

    /// Number of edges outside the single-incoming edge set.
    pub fn nu(&self) -> usize {
        self.edge_count() - self.single_incoming_edges().len()
    }
}

impl fmt::Display for DirectedMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub strongly_connected: bool,
    pub is_cycle: bool,
    pub nu: usize,
    pub standing_hypotheses_met: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sc = if self.strongly_connected {
            "strongly connected"
        } else {
            "not strongly connected"
        };
        let cy = if self.is_cycle {
            "a cycle"
        } else {
            "not a cycle"
        };
        write!(f, "{sc}, {cy}, ν={}", self.nu)?;
        if !self.standing_hypotheses_met {
            write!(f, " (standing hypotheses not met)")?;
        }
        Ok(())
    }
}

/// Checks strong connectivity, the non-cycle condition and `ν > 1`.
pub fn validate_graph(g: &DirectedMultigraph) -> ValidationReport {
    let strongly_connected = g.is_strongly_connected();
    let is_cycle = strongly_connected
        && g.edge_count() == g.vertex_count()
        && g.vertices()
            .all(|v| g.in_degree(v) == 1 && g.out_degree(v) == 1);
    let nu = g.nu();
    ValidationReport {
        strongly_connected,
        is_cycle,
        nu,
        standing_hypotheses_met: strongly_connected && !is_cycle && nu > 1,
    }
}

/// Incremental construction helper used by the family builders.
#[derive(Default)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    seen: HashSet<String>,
    edges: Vec<(String, String, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        if self.seen.insert(name.clone()) {
            self.vertices.push(name);
        }
        self
    }

    pub fn edge(
        &mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        tgt: impl Into<String>,
    ) -> &mut Self {
        self.edges.push((id.into(), src.into(), tgt.into()));
        self
    }

    pub fn build(&self) -> Result<DirectedMultigraph> {
        DirectedMultigraph::new(self.vertices.iter().cloned(), self.edges.iter().cloned())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn graph(vs: &[&str], es: &[(&str, &str, &str)]) -> DirectedMultigraph {
        DirectedMultigraph::new(
            vs.iter().map(|s| s.to_string()),
            es.iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())),
        )
        .unwrap()
    }

    #[test]
    fn dyck_two_validates() {
        let g = graph(&["V0"], &[("a", "V0", "V0"), ("b", "V0", "V0")]);
        let r = validate_graph(&g);
        assert!(r.strongly_connected);
        assert!(!r.is_cycle);
        assert_eq!(r.nu, 2);
        assert!(r.standing_hypotheses_met);
        assert_eq!(r.to_string(), "strongly connected, not a cycle, ν=2");
    }

    #[test]
    fn three_cycle_is_excluded() {
        let g = graph(
            &["A", "B", "C"],
            &[("x", "A", "B"), ("y", "B", "C"), ("z", "C", "A")],
        );
        let r = validate_graph(&g);
        assert!(r.strongly_connected && r.is_cycle);
        assert!(!r.standing_hypotheses_met);
    }

    #[test]
    fn two_cycle_has_no_kept_edges() {
        let g = graph(&["A", "B"], &[("x", "A", "B"), ("y", "B", "A")]);
        let r = validate_graph(&g);
        assert!(r.strongly_connected);
        assert_eq!(r.nu, 0);
        assert!(!r.standing_hypotheses_met);
    }

    #[test]
    fn not_strongly_connected() {
        let g = graph(&["A", "B"], &[("x", "A", "B"), ("l", "A", "A")]);
        assert!(!validate_graph(&g).strongly_connected);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let dangling =
            DirectedMultigraph::new(["A"], [("x".to_string(), "A".to_string(), "B".to_string())]);
        assert!(matches!(dangling, Err(Error::MalformedGraph(_))));
        let dup = DirectedMultigraph::new(
            ["A"],
            [
                ("x".to_string(), "A".to_string(), "A".to_string()),
                ("x".to_string(), "A".to_string(), "A".to_string()),
            ],
        );
        assert!(matches!(dup, Err(Error::MalformedGraph(_))));
        let dupv = DirectedMultigraph::new(["A", "A"], Vec::new());
        assert!(matches!(dupv, Err(Error::MalformedGraph(_))));
        assert!(DirectedMultigraph::new(Vec::<String>::new(), Vec::new()).is_err());
    }

    #[test]
    fn json_round_trip_and_parse_errors() {
        let text = r#"{"vertices":["V0"],"edges":[{"id":"a","src":"V0","tgt":"V0"}]}"#;
        let g = DirectedMultigraph::from_json_str(text).unwrap();
        let again = DirectedMultigraph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(g, again);
        match DirectedMultigraph::from_json_str("{\n  \"vertices\": [,]\n}") {
            Err(Error::Json { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected json error, got {other:?}"),
        }
    }
}

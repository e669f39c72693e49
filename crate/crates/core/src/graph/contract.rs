use std::collections::BTreeMap;

use serde::Serialize;

use super::{validate_graph, DirectedMultigraph, EdgeId, GraphSpec, VertexId};
use crate::error::{Error, Result};

/// Image of an edge under the contraction map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaImage {
    /// The edge survives as this edge of the contracted graph.
    Kept(EdgeId),
    /// A tree edge; its letters map to the idempotent of this contracted vertex.
    Idempotent(VertexId),
}

/// The contracting forest of a graph and the contracted graph on its roots.
///
/// Vertex and edge ids of `contracted` are its own; use [`Self::root_vertex`]
/// and [`Self::kept_edge`] to translate.
#[derive(Clone, Debug)]
pub struct ContractionData {
    pub tree_edge: Vec<bool>,
    pub roots: Vec<VertexId>,
    pub tree_of: Vec<VertexId>,
    pub root_path: Vec<Vec<EdgeId>>,
    pub leaf_levels: BTreeMap<VertexId, Vec<usize>>,
    pub contracted: DirectedMultigraph,
    pub lambda_edge: Vec<LambdaImage>,
    root_slot: Vec<Option<VertexId>>,
    kept_slot: Vec<Option<EdgeId>>,
    kept_origin: Vec<EdgeId>,
}

impl ContractionData {
    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.tree_edge[e.index()]
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.tree_edge
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(i, _)| EdgeId(i as u32))
    }

    pub fn kept_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.kept_origin.iter().copied()
    }

    pub fn level(&self, v: VertexId) -> usize {
        self.root_path[v.index()].len()
    }

    /// Vertex of the contracted graph standing for root `r` of the input graph.
    pub fn root_vertex(&self, r: VertexId) -> Option<VertexId> {
        self.root_slot[r.index()]
    }

    /// Edge of the contracted graph standing for edge `e` of the input graph.
    pub fn kept_edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.kept_slot[e.index()]
    }

    /// The input-graph edge behind an edge of the contracted graph.
    pub fn kept_origin(&self, e_hat: EdgeId) -> EdgeId {
        self.kept_origin[e_hat.index()]
    }

    /// The input-graph root behind a vertex of the contracted graph.
    pub fn root_origin(&self, r_hat: VertexId) -> VertexId {
        self.roots[r_hat.index()]
    }

    /// Vertices in the tree rooted at `r`.
    pub fn tree_vertices(&self, r: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.tree_of
            .iter()
            .enumerate()
            .filter(move |(_, &t)| t == r)
            .map(|(i, _)| VertexId(i as u32))
    }

    /// Contracted graph in the graph file format, extended with the roots and
    /// the tree edges (names from the input graph).
    pub fn to_json(&self, g: &DirectedMultigraph) -> ContractionJson {
        ContractionJson {
            graph: self.contracted.to_spec(),
            roots: self
                .roots
                .iter()
                .map(|&r| g.vertex_name(r).to_string())
                .collect(),
            tree_edges: self
                .tree_edges()
                .map(|e| g.edge_name(e).to_string())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionJson {
    #[serde(flatten)]
    pub graph: GraphSpec,
    pub roots: Vec<String>,
    pub tree_edges: Vec<String>,
}

/// Computes the single-incoming edges, the roots, the rooted trees, the
/// root-to-vertex paths and the contracted graph.
pub fn contracting_forest(g: &DirectedMultigraph) -> Result<ContractionData> {
    let report = validate_graph(g);
    if !report.standing_hypotheses_met {
        return Err(Error::Hypothesis(report.to_string()));
    }
    let n = g.vertex_count();
    let tree_edge: Vec<bool> = g.edge_ids().map(|e| g.in_degree(g.tgt(e)) == 1).collect();
    let roots: Vec<VertexId> = g.vertices().filter(|&v| g.in_degree(v) >= 2).collect();

    let mut tree_of = vec![VertexId(u32::MAX); n];
    let mut root_path: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for v in g.vertices() {
        let mut path = Vec::new();
        let mut cur = v;
        while g.in_degree(cur) == 1 {
            let e = g.in_edges(cur)[0];
            path.push(e);
            cur = g.src(e);
            if path.len() > n {
                return Err(Error::Internal(format!(
                    "single-incoming edges contain a cycle through `{}`",
                    g.vertex_name(v)
                )));
            }
        }
        if g.in_degree(cur) == 0 {
            return Err(Error::Internal(format!(
                "vertex `{}` has no incoming edge",
                g.vertex_name(cur)
            )));
        }
        path.reverse();
        tree_of[v.index()] = cur;
        root_path[v.index()] = path;
    }

    let mut leaf_levels: BTreeMap<VertexId, Vec<usize>> =
        roots.iter().map(|&r| (r, Vec::new())).collect();
    for v in g.vertices() {
        let is_root = g.in_degree(v) >= 2;
        let has_tree_child = g.out_edges(v).iter().any(|&e| tree_edge[e.index()]);
        if !is_root && !has_tree_child {
            leaf_levels
                .get_mut(&tree_of[v.index()])
                .expect("tree root is a root")
                .push(root_path[v.index()].len());
        }
    }
    for levels in leaf_levels.values_mut() {
        levels.sort_unstable();
    }

    let mut root_slot = vec![None; n];
    for (i, &r) in roots.iter().enumerate() {
        root_slot[r.index()] = Some(VertexId(i as u32));
    }
    let mut kept_slot = vec![None; g.edge_count()];
    let mut kept_origin = Vec::new();
    let mut hat_edges = Vec::new();
    let mut lambda_edge = Vec::with_capacity(g.edge_count());
    for e in g.edge_ids() {
        if tree_edge[e.index()] {
            let r = tree_of[g.src(e).index()];
            lambda_edge.push(LambdaImage::Idempotent(root_slot[r.index()].unwrap()));
        } else {
            let id = EdgeId(kept_origin.len() as u32);
            kept_slot[e.index()] = Some(id);
            kept_origin.push(e);
            lambda_edge.push(LambdaImage::Kept(id));
            hat_edges.push((
                g.edge_name(e).to_string(),
                g.vertex_name(tree_of[g.src(e).index()]).to_string(),
                g.vertex_name(g.tgt(e)).to_string(),
            ));
        }
    }
    let contracted = DirectedMultigraph::new(
        roots.iter().map(|&r| g.vertex_name(r).to_string()),
        hat_edges,
    )?;

    Ok(ContractionData {
        tree_edge,
        roots,
        tree_of,
        root_path,
        leaf_levels,
        contracted,
        lambda_edge,
        root_slot,
        kept_slot,
        kept_origin,
    })
}

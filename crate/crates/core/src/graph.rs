//! Simple undirected graphs with stable vertex IDs and provenance tags.
//!
//! IDs are handed out from a monotone counter and never reused after a
//! deletion, so a game transcript that says "vertex 417 was deleted" means the
//! same vertex on every replay.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge {{{0}, {0}}} would be a self-loop")]
    SelfLoop(VertexId),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("pendant path length must be at least 1")]
    EmptyPath,
    #[error("invalid graph json: {0}")]
    Json(#[from] serde_json::Error),
}

/// What a vertex is in the construction that created it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "kebab-case")]
pub enum Role {
    /// A Cayley-graph vertex standing for a group element.
    GroupElement,
    /// Hub or tail vertex of an arc gadget.
    EdgeGadgetInternal,
    /// Position `index` (1-based) on a pendant path of a reveal gadget.
    GadgetPath {
        index: u32,
    },
    /// The vertex whose deletion reveals a gadget's symmetry.
    RevealX,
    /// The vertex whose stabilization removes a gadget's symmetry.
    RevealY,
    /// Anchor-path vertex `a_index`, pinning construction layer `index`.
    Anchor {
        index: u32,
    },
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexTag {
    #[serde(flatten)]
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gadget: Option<u32>,
}

impl VertexTag {
    pub fn new(role: Role) -> Self {
        VertexTag {
            role,
            layer: None,
            gadget: None,
        }
    }

    pub fn plain() -> Self {
        Self::new(Role::Plain)
    }

    pub fn in_layer(mut self, layer: u32) -> Self {
        self.layer = Some(layer);
        self
    }

    pub fn in_gadget(mut self, gadget: u32) -> Self {
        self.gadget = Some(gadget);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Vertex {
    tag: VertexTag,
    nbrs: BTreeSet<VertexId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeMap<VertexId, Vertex>,
    next_id: VertexId,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on `n` plain vertices with IDs `0..n` and the given edges.
    pub fn from_edges(n: u32, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = Graph::new();
        for _ in 0..n {
            g.add_vertex(VertexTag::plain());
        }
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, tag: VertexTag) -> VertexId {
        let id = self.next_id;
        self.next_id += 1;
        self.vertices.insert(
            id,
            Vertex {
                tag,
                nbrs: BTreeSet::new(),
            },
        );
        id
    }

    /// Adds `{u, v}`; returns whether the edge is new.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.check(u)?;
        self.check(v)?;
        let fresh = self.vertices.get_mut(&u).unwrap().nbrs.insert(v);
        self.vertices.get_mut(&v).unwrap().nbrs.insert(u);
        if fresh {
            self.edge_count += 1;
        }
        Ok(fresh)
    }

    fn check(&self, v: VertexId) -> Result<&Vertex, GraphError> {
        self.vertices.get(&v).ok_or(GraphError::UnknownVertex(v))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Vertex IDs in ascending order.
    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn tag(&self, v: VertexId) -> Option<&VertexTag> {
        self.vertices.get(&v).map(|x| &x.tag)
    }

    pub fn set_tag(&mut self, v: VertexId, tag: VertexTag) -> Result<(), GraphError> {
        self.vertices
            .get_mut(&v)
            .ok_or(GraphError::UnknownVertex(v))?
            .tag = tag;
        Ok(())
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .get(&v)
            .into_iter()
            .flat_map(|x| x.nbrs.iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices.get(&v).map_or(0, |x| x.nbrs.len())
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.vertices.get(&u).is_some_and(|x| x.nbrs.contains(&v))
    }

    /// Edges as `(small, large)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices
            .iter()
            .flat_map(|(&u, x)| x.nbrs.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.vertices.values().map(|x| x.nbrs.len()).collect();
        d.sort_unstable();
        d
    }

    /// Removes `v` and its incident edges in place.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        let gone = self
            .vertices
            .remove(&v)
            .ok_or(GraphError::UnknownVertex(v))?;
        for u in &gone.nbrs {
            self.vertices.get_mut(u).unwrap().nbrs.remove(&v);
        }
        self.edge_count -= gone.nbrs.len();
        Ok(())
    }

    /// `g − v` as a new graph; all other IDs and tags are unchanged.
    pub fn delete_vertex(&self, v: VertexId) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.remove_vertex(v)?;
        Ok(g)
    }

    /// Subgraph induced on `keep`, IDs and tags preserved.
    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let mut edge_count = 0;
        let vertices: BTreeMap<VertexId, Vertex> = self
            .vertices
            .iter()
            .filter(|(id, _)| keep.contains(id))
            .map(|(&id, x)| {
                let nbrs: BTreeSet<VertexId> = x.nbrs.intersection(keep).copied().collect();
                edge_count += nbrs.len();
                (id, Vertex { tag: x.tag, nbrs })
            })
            .collect();
        Graph {
            vertices,
            next_id: self.next_id,
            edge_count: edge_count / 2,
        }
    }

    /// Connectivity by breadth-first search; the empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        let Some((&start, _)) = self.vertices.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Hangs a fresh path `v – u_1 – … – u_len` off `v`. `tagger` receives the
    /// 1-based path position. Returns the new IDs in path order.
    pub fn attach_pendant_path(
        &mut self,
        v: VertexId,
        len: usize,
        mut tagger: impl FnMut(usize) -> VertexTag,
    ) -> Result<Vec<VertexId>, GraphError> {
        self.check(v)?;
        if len < 1 {
            return Err(GraphError::EmptyPath);
        }
        let mut prev = v;
        let mut path = Vec::with_capacity(len);
        for i in 1..=len {
            let u = self.add_vertex(tagger(i));
            self.add_edge(prev, u)?;
            path.push(u);
            prev = u;
        }
        Ok(path)
    }

    /// Makes `v` adjacent to every vertex in `targets`.
    pub fn join_vertex_to_set(
        &mut self,
        v: VertexId,
        targets: impl IntoIterator<Item = VertexId>,
    ) -> Result<(), GraphError> {
        self.check(v)?;
        let targets: Vec<VertexId> = targets.into_iter().collect();
        for &w in &targets {
            if w == v {
                return Err(GraphError::SelfLoop(v));
            }
            self.check(w)?;
        }
        for w in targets {
            self.add_edge(v, w)?;
        }
        Ok(())
    }

    /// Embeds a copy of `source` under fresh IDs, rewriting tags with
    /// `remap`. Returns the old→new ID map.
    pub fn disjoint_copy(
        &mut self,
        source: &Graph,
        mut remap: impl FnMut(&VertexTag) -> VertexTag,
    ) -> BTreeMap<VertexId, VertexId> {
        let map: BTreeMap<VertexId, VertexId> = source
            .vertices
            .iter()
            .map(|(&old, x)| (old, self.add_vertex(remap(&x.tag))))
            .collect();
        for (u, v) in source.edges() {
            self.add_edge(map[&u], map[&v]).expect("fresh endpoints");
        }
        map
    }

    pub fn vertices_with_role(&self, pred: impl Fn(&Role) -> bool) -> Vec<VertexId> {
        self.vertices
            .iter()
            .filter(|(_, x)| pred(&x.tag.role))
            .map(|(&id, _)| id)
            .collect()
    }

    /// Adjacency symmetry and loop-freeness; asserted on every serialization.
    pub fn check_invariants(&self) -> bool {
        let mut half_edges = 0;
        for (&u, x) in &self.vertices {
            for &v in &x.nbrs {
                if v == u || !self.has_edge(v, u) {
                    return false;
                }
                half_edges += 1;
            }
            if u >= self.next_id {
                return false;
            }
        }
        half_edges == 2 * self.edge_count
    }

    pub fn to_json_value(&self) -> GraphJson {
        debug_assert!(self.check_invariants());
        GraphJson {
            vertices: self
                .vertices
                .iter()
                .map(|(&id, x)| JsonVertex { id, tag: x.tag })
                .collect(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    /// Canonical JSON: vertices by ID, edges `[small, large]` sorted.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let doc: GraphJson = serde_json::from_str(text)?;
        Graph::try_from(doc)
    }

    /// Hex SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// Graphviz rendering; node shape and color follow the vertex role.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n  node [fontsize=8];\n");
        for (&id, x) in &self.vertices {
            let (shape, color) = role_style(&x.tag.role);
            let _ = writeln!(
                out,
                "  {id} [shape={shape}, style=filled, fillcolor=\"{color}\", label=\"{id}\"];"
            );
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// DOT `(shape, fillcolor)` for a role.
pub fn role_style(role: &Role) -> (&'static str, &'static str) {
    match role {
        Role::GroupElement => ("circle", "#8fbcd4"),
        Role::EdgeGadgetInternal => ("point", "#bbbbbb"),
        Role::GadgetPath { .. } => ("point", "#dddddd"),
        Role::RevealX => ("doublecircle", "#e4572e"),
        Role::RevealY => ("doublecircle", "#29bf12"),
        Role::Anchor { .. } => ("box", "#ffc914"),
        Role::Plain => ("circle", "#ffffff"),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonVertex {
    pub id: VertexId,
    pub tag: VertexTag,
}

/// Wire form of a graph.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<JsonVertex>,
    pub edges: Vec<[VertexId; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(doc: GraphJson) -> Result<Self, Self::Error> {
        let mut vertices = BTreeMap::new();
        for v in doc.vertices {
            if vertices
                .insert(
                    v.id,
                    Vertex {
                        tag: v.tag,
                        nbrs: BTreeSet::new(),
                    },
                )
                .is_some()
            {
                return Err(GraphError::DuplicateVertex(v.id));
            }
        }
        let next_id = vertices.keys().next_back().map_or(0, |&m| m + 1);
        let mut g = Graph {
            vertices,
            next_id,
            edge_count: 0,
        };
        for [u, v] in doc.edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn delete_vertex_examples() {
        let k3 = cycle(3);
        let e = k3.delete_vertex(1).unwrap();
        assert_eq!((e.vertex_count(), e.edge_count()), (2, 1));

        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let iso = star.delete_vertex(0).unwrap();
        assert_eq!((iso.vertex_count(), iso.edge_count()), (3, 0));

        let p3 = cycle(4).delete_vertex(2).unwrap();
        assert_eq!((p3.vertex_count(), p3.edge_count()), (3, 2));
        assert_eq!(p3.degree_sequence(), vec![1, 1, 2]);
        assert!(p3.is_connected());

        assert!(matches!(
            k3.delete_vertex(9),
            Err(GraphError::UnknownVertex(9))
        ));
    }

    #[test]
    fn deleted_ids_are_never_reused() {
        let mut g = cycle(3);
        g.remove_vertex(2).unwrap();
        let fresh = g.add_vertex(VertexTag::plain());
        assert_eq!(fresh, 3);
        assert!(!g.to_json().contains("\"id\":2"));
    }

    #[test]
    fn connectivity() {
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(p4.is_connected());
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!two_edges.is_connected());
        assert!(Graph::new().is_connected());
        assert!(Graph::from_edges(1, &[]).unwrap().is_connected());
    }

    #[test]
    fn pendant_paths() {
        let mut k1 = Graph::from_edges(1, &[]).unwrap();
        let path = k1
            .attach_pendant_path(0, 2, |_| VertexTag::plain())
            .unwrap();
        assert_eq!(path, vec![1, 2]);
        assert_eq!(k1.degree_sequence(), vec![1, 1, 2]);

        let mut paw = cycle(3);
        paw.attach_pendant_path(0, 1, |_| VertexTag::plain())
            .unwrap();
        assert_eq!((paw.vertex_count(), paw.edge_count()), (4, 4));

        let mut g = cycle(5);
        let new = g
            .attach_pendant_path(3, 4, |i| {
                VertexTag::new(Role::GadgetPath { index: i as u32 })
            })
            .unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.tag(new[3]).unwrap().role, Role::GadgetPath { index: 4 });
        assert!(matches!(
            g.attach_pendant_path(3, 0, |_| VertexTag::plain()),
            Err(GraphError::EmptyPath)
        ));
        assert!(matches!(
            g.attach_pendant_path(99, 1, |_| VertexTag::plain()),
            Err(GraphError::UnknownVertex(99))
        ));
    }

    #[test]
    fn joins() {
        let mut g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let v = g.add_vertex(VertexTag::plain());
        g.join_vertex_to_set(v, [0, 1]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));

        let mut wheel = cycle(4);
        let hub = wheel.add_vertex(VertexTag::plain());
        wheel.join_vertex_to_set(hub, 0..4).unwrap();
        assert_eq!(wheel.degree_sequence(), vec![3, 3, 3, 3, 4]);

        let mut lone = cycle(3);
        let w = lone.add_vertex(VertexTag::plain());
        lone.join_vertex_to_set(w, []).unwrap();
        assert_eq!((lone.vertex_count(), lone.edge_count()), (4, 3));

        assert!(matches!(
            lone.join_vertex_to_set(w, [0, w]),
            Err(GraphError::SelfLoop(_))
        ));
        // the failed join must not have added anything
        assert_eq!(lone.edge_count(), 3);
    }

    #[test]
    fn copies() {
        let mut g = cycle(3);
        let map = g.disjoint_copy(&cycle(3), |t| *t);
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 6));
        assert!(!g.is_connected());
        let images: BTreeSet<_> = map.values().copied().collect();
        assert_eq!(images, BTreeSet::from([3, 4, 5]));
        assert_eq!(g.degree_sequence(), vec![2; 6]);
    }

    #[test]
    fn json_is_canonical_and_round_trips() {
        let mut g = Graph::new();
        let a = g.add_vertex(VertexTag::new(Role::RevealX).in_layer(2).in_gadget(7));
        let b = g.add_vertex(VertexTag::new(Role::GadgetPath { index: 3 }));
        let c = g.add_vertex(VertexTag::new(Role::Anchor { index: 0 }));
        g.add_edge(c, a).unwrap();
        g.add_edge(b, a).unwrap();
        let text = g.to_json();
        assert_eq!(
            text,
            r#"{"vertices":[{"id":0,"tag":{"role":"reveal-x","layer":2,"gadget":7}},{"id":1,"tag":{"role":"gadget-path","index":3}},{"id":2,"tag":{"role":"anchor","index":0}}],"edges":[[0,1],[0,2]]}"#
        );
        let back = Graph::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.hash(), g.hash());
        assert!(Graph::from_json(
            r#"{"vertices":[{"id":0,"tag":{"role":"plain"}}],"edges":[[0,0]]}"#
        )
        .is_err());
        assert!(Graph::from_json(r#"{"vertices":[],"edges":[[0,1]]}"#).is_err());
    }

    #[test]
    fn dot_has_one_node_line_per_vertex() {
        let g = cycle(5);
        let dot = g.to_dot();
        assert_eq!(dot.lines().filter(|l| l.contains("shape=")).count(), 5);
        assert_eq!(dot.matches(" -- ").count(), 5);
    }
}

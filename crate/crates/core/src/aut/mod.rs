//! Exact automorphism groups of (unlabelled) graphs.
//!
//! Vertex tags are never used as colours: the engine sees the bare graph.

mod refine;
mod search;

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::group::FiniteGroup;
use crate::perm::{enumerate_group, orbit, Permutation, StabilizerChain};
use refine::DenseGraph;

/// Default bound on |V| for the engine. Game graphs for two rounds over
/// order-4 groups already exceed 8,000 vertices.
pub const DEFAULT_MAX_VERTICES: usize = 20_000;
/// Groups up to this order are stored as explicit element lists.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000;
/// Largest order converted to a Cayley table.
pub const DEFAULT_ABSTRACT_CAP: usize = 2_048;
/// Explicit element lists are skipped when `order · |V|` exceeds this.
const ENUMERATION_BUDGET: u128 = 50_000_000;
/// Brute force checks all |V|! permutations.
pub const BRUTE_FORCE_MAX: usize = 9;

#[derive(Debug, Error)]
pub enum AutError {
    #[error("graph has {vertices} vertices, above the engine bound {bound}")]
    TooLarge { vertices: usize, bound: usize },
    #[error("brute force is limited to {BRUTE_FORCE_MAX} vertices, graph has {0}")]
    BruteForceTooLarge(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("automorphism group order does not fit in 128 bits")]
    OrderOverflow,
    #[error("automorphism group of order {order} is above the cap {cap} for an explicit table")]
    NotEnumerated { order: u128, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutOptions {
    pub max_vertices: usize,
    pub enumeration_cap: usize,
    pub abstract_cap: usize,
}

impl Default for AutOptions {
    fn default() -> Self {
        AutOptions {
            max_vertices: DEFAULT_MAX_VERTICES,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            abstract_cap: DEFAULT_ABSTRACT_CAP,
        }
    }
}

/// The automorphism group of a graph, as permutations of its vertex list.
///
/// Permutations act on positions in [`AutGroup::vertices`], the graph's vertex
/// IDs in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    vertices: Vec<VertexId>,
    generators: Vec<Permutation>,
    order: u128,
    base: Vec<u32>,
    elements: Option<Vec<Permutation>>,
}

impl AutGroup {
    fn new(
        vertices: Vec<VertexId>,
        generators: Vec<Permutation>,
        order: u128,
        base: Vec<u32>,
        cap: usize,
    ) -> Self {
        let n = vertices.len();
        let enumerable =
            order <= cap as u128 && order.saturating_mul(n.max(1) as u128) <= ENUMERATION_BUDGET;
        let elements = enumerable.then(|| {
            let all = enumerate_group(n, &generators, cap).expect("order within cap");
            assert_eq!(
                all.len() as u128,
                order,
                "enumeration disagrees with search order"
            );
            all
        });
        AutGroup {
            vertices,
            generators,
            order,
            base,
            elements,
        }
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements in ascending image-array order, if enumerated.
    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    pub fn base(&self) -> Vec<VertexId> {
        self.base
            .iter()
            .map(|&i| self.vertices[i as usize])
            .collect()
    }

    pub fn index_of(&self, v: VertexId) -> Option<u32> {
        self.vertices.binary_search(&v).ok().map(|i| i as u32)
    }

    /// Image of vertex `v` under `p`.
    pub fn image(&self, p: &Permutation, v: VertexId) -> Option<VertexId> {
        self.index_of(v).map(|i| self.vertices[p.apply(i) as usize])
    }

    /// Whether every generator fixes `v`.
    pub fn fixes(&self, v: VertexId) -> bool {
        self.generators.iter().all(|g| self.image(g, v) == Some(v))
    }

    /// Whether every generator maps `set` onto itself.
    pub fn stabilizes_set(&self, set: &BTreeSet<VertexId>) -> bool {
        self.generators.iter().all(|g| {
            set.iter()
                .all(|&v| self.image(g, v).is_some_and(|w| set.contains(&w)))
        })
    }

    pub fn orbit(&self, v: VertexId) -> Option<BTreeSet<VertexId>> {
        let i = self.index_of(v)?;
        Some(
            orbit(i, &self.generators)
                .into_iter()
                .map(|j| self.vertices[j as usize])
                .collect(),
        )
    }

    /// Order of the group generated by the generators, recomputed with
    /// Schreier–Sims rather than taken from the search.
    pub fn chain_order(&self) -> Option<u128> {
        StabilizerChain::new(self.vertices.len(), &self.generators).order()
    }

    /// Whether `p` belongs to the group.
    pub fn contains(&self, p: &Permutation) -> bool {
        match &self.elements {
            Some(all) => all.binary_search(p).is_ok(),
            None => StabilizerChain::new(self.vertices.len(), &self.generators).contains(p),
        }
    }

    /// Generator images keyed by the sorted vertex IDs.
    pub fn generator_images(&self) -> Vec<Vec<VertexId>> {
        self.generators
            .iter()
            .map(|g| {
                g.images()
                    .iter()
                    .map(|&i| self.vertices[i as usize])
                    .collect()
            })
            .collect()
    }

    pub fn to_json_value(&self) -> AutGroupJson {
        let cayley_table = match &self.elements {
            Some(_) if self.order <= 64 => Some(
                aut_as_abstract_group(self, self.order as usize)
                    .unwrap()
                    .rows(),
            ),
            _ => None,
        };
        AutGroupJson {
            order: self.order,
            vertices: self.vertices.clone(),
            generators: self.generator_images(),
            cayley_table,
        }
    }
}

/// Wire form of an automorphism group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutGroupJson {
    pub order: u128,
    /// Sorted vertex IDs; generator `g` sends `vertices[i]` to `g[i]`.
    pub vertices: Vec<VertexId>,
    pub generators: Vec<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cayley_table: Option<Vec<Vec<usize>>>,
}

fn to_dense(g: &Graph) -> (Vec<VertexId>, DenseGraph) {
    let ids: Vec<VertexId> = g.vertex_ids().collect();
    let index: HashMap<VertexId, u32> = ids
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let adj = ids
        .iter()
        .map(|&v| g.neighbors(v).map(|u| index[&u]).collect())
        .collect();
    (ids, DenseGraph::from_adjacency(adj))
}

fn colored_search(
    g: &Graph,
    colors: impl Fn(VertexId) -> u32,
    opts: &AutOptions,
) -> Result<AutGroup, AutError> {
    if g.vertex_count() > opts.max_vertices {
        return Err(AutError::TooLarge {
            vertices: g.vertex_count(),
            bound: opts.max_vertices,
        });
    }
    let (ids, dense) = to_dense(g);
    let cols: Vec<u32> = ids.iter().map(|&v| colors(v)).collect();
    let outcome = search::automorphisms(&dense, &cols);
    let order = outcome.order.ok_or(AutError::OrderOverflow)?;
    debug_assert!(outcome
        .generators
        .iter()
        .all(|p| is_automorphism(&dense, p)));
    Ok(AutGroup::new(
        ids,
        outcome.generators,
        order,
        outcome.base,
        opts.enumeration_cap,
    ))
}

fn is_automorphism(g: &DenseGraph, p: &Permutation) -> bool {
    (0..g.len() as u32).all(|v| {
        let nbrs = g.neighbors(v);
        nbrs.len() == g.neighbors(p.apply(v)).len()
            && nbrs.iter().all(|&u| g.has_edge(p.apply(v), p.apply(u)))
    })
}

/// Exact automorphism group with default options.
pub fn automorphisms(g: &Graph) -> Result<AutGroup, AutError> {
    automorphisms_with(g, &AutOptions::default())
}

pub fn automorphisms_with(g: &Graph, opts: &AutOptions) -> Result<AutGroup, AutError> {
    colored_search(g, |_| 0, opts)
}

/// Checks every permutation of the vertex set. Only for tiny graphs.
pub fn brute_force_automorphisms(g: &Graph) -> Result<AutGroup, AutError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_MAX {
        return Err(AutError::BruteForceTooLarge(n));
    }
    let (ids, dense) = to_dense(g);
    let mut elements: Vec<Permutation> = (0..n as u32)
        .permutations(n)
        .map(Permutation::from_images_unchecked)
        .filter(|p| is_automorphism(&dense, p))
        .collect();
    elements.sort();
    // greedy generating set: keep an element iff it is new to the span so far
    let mut generators: Vec<Permutation> = Vec::new();
    let mut chain = StabilizerChain::new(n, &[]);
    for p in &elements {
        if !chain.contains(p) {
            generators.push(p.clone());
            chain = StabilizerChain::new(n, &generators);
        }
    }
    let order = elements.len() as u128;
    let base = chain.base();
    Ok(AutGroup {
        vertices: ids,
        generators,
        order,
        base,
        elements: Some(elements),
    })
}

/// `{ σ(v) : σ ∈ Aut(g) }`.
pub fn orbit_of(g: &Graph, v: VertexId) -> Result<BTreeSet<VertexId>, AutError> {
    orbit_of_with(g, v, &AutOptions::default())
}

pub fn orbit_of_with(
    g: &Graph,
    v: VertexId,
    opts: &AutOptions,
) -> Result<BTreeSet<VertexId>, AutError> {
    if !g.contains(v) {
        return Err(AutError::UnknownVertex(v));
    }
    Ok(automorphisms_with(g, opts)?
        .orbit(v)
        .expect("vertex present"))
}

/// `|Stab(v)|`, computed as the automorphism group of `g` with `v` coloured
/// apart, independently of any orbit computation.
pub fn stabilizer_order(g: &Graph, v: VertexId) -> Result<u128, AutError> {
    stabilizer_order_with(g, v, &AutOptions::default())
}

pub fn stabilizer_order_with(g: &Graph, v: VertexId, opts: &AutOptions) -> Result<u128, AutError> {
    if !g.contains(v) {
        return Err(AutError::UnknownVertex(v));
    }
    Ok(colored_search(g, |u| u32::from(u == v), opts)?.order())
}

/// Automorphism group of `g` restricted to those fixing every vertex in `fixed`.
pub fn pointwise_stabilizer(
    g: &Graph,
    fixed: &[VertexId],
    opts: &AutOptions,
) -> Result<AutGroup, AutError> {
    for &v in fixed {
        if !g.contains(v) {
            return Err(AutError::UnknownVertex(v));
        }
    }
    colored_search(
        g,
        |u| {
            fixed
                .iter()
                .position(|&f| f == u)
                .map_or(0, |i| i as u32 + 1)
        },
        opts,
    )
}

/// Cayley table of an enumerated group under composition; identity at 0,
/// elements in ascending image-array order.
pub fn aut_as_abstract_group(a: &AutGroup, cap: usize) -> Result<FiniteGroup, AutError> {
    let not_enumerated = AutError::NotEnumerated {
        order: a.order,
        cap,
    };
    if a.order > cap as u128 {
        return Err(not_enumerated);
    }
    let elements = a.elements.as_ref().ok_or(not_enumerated)?;
    let index: HashMap<&Permutation, usize> =
        elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let rows = elements
        .iter()
        .map(|p| elements.iter().map(|q| index[&p.compose(q)]).collect())
        .collect();
    Ok(FiniteGroup::from_trusted_rows(rows))
}

/// Exact isomorphism test for unlabelled graphs.
pub fn graph_isomorphic(a: &Graph, b: &Graph) -> Result<bool, AutError> {
    graph_isomorphic_with(a, b, &AutOptions::default())
}

pub fn graph_isomorphic_with(a: &Graph, b: &Graph, opts: &AutOptions) -> Result<bool, AutError> {
    for g in [a, b] {
        if g.vertex_count() > opts.max_vertices {
            return Err(AutError::TooLarge {
                vertices: g.vertex_count(),
                bound: opts.max_vertices,
            });
        }
    }
    if a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
        || a.degree_sequence() != b.degree_sequence()
    {
        return Ok(false);
    }
    let (_, da) = to_dense(a);
    let (_, db) = to_dense(b);
    let zeros = vec![0; da.len()];
    Ok(search::isomorphism(&da, &zeros, &db, &zeros).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexTag;
    use crate::group::{are_isomorphic, cyclic, symmetric, trivial};

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn path(n: u32) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Centre 0 with legs of lengths 1, 2 and 3.
    fn spider123() -> Graph {
        Graph::from_edges(7, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)]).unwrap()
    }

    #[test]
    fn engine_examples() {
        assert_eq!(automorphisms(&cycle(3)).unwrap().order(), 6);
        assert_eq!(automorphisms(&path(3)).unwrap().order(), 2);
        assert_eq!(automorphisms(&spider123()).unwrap().order(), 1);
        assert_eq!(automorphisms(&Graph::new()).unwrap().order(), 1);
    }

    #[test]
    fn oracle_examples() {
        // the spider's rigidity, from all 7! permutations
        assert_eq!(brute_force_automorphisms(&spider123()).unwrap().order(), 1);
        assert_eq!(brute_force_automorphisms(&cycle(4)).unwrap().order(), 8);
        assert_eq!(
            brute_force_automorphisms(&Graph::from_edges(1, &[]).unwrap())
                .unwrap()
                .order(),
            1
        );
        assert_eq!(
            brute_force_automorphisms(&Graph::from_edges(3, &[]).unwrap())
                .unwrap()
                .order(),
            6
        );
        assert!(matches!(
            brute_force_automorphisms(&Graph::from_edges(10, &[]).unwrap()),
            Err(AutError::BruteForceTooLarge(10))
        ));
    }

    #[test]
    fn orbits_and_stabilizers() {
        assert_eq!(orbit_of(&cycle(4), 0).unwrap().len(), 4);
        assert_eq!(orbit_of(&path(3), 0).unwrap(), BTreeSet::from([0, 2]));
        for v in 0..7 {
            assert_eq!(orbit_of(&spider123(), v).unwrap(), BTreeSet::from([v]));
        }
        assert_eq!(stabilizer_order(&cycle(4), 2).unwrap(), 2);
        assert_eq!(stabilizer_order(&path(3), 1).unwrap(), 2);
        assert_eq!(
            stabilizer_order(&Graph::from_edges(1, &[]).unwrap(), 0).unwrap(),
            1
        );
        assert!(matches!(
            orbit_of(&path(3), 5),
            Err(AutError::UnknownVertex(5))
        ));
        assert!(matches!(
            stabilizer_order(&path(3), 5),
            Err(AutError::UnknownVertex(5))
        ));
    }

    #[test]
    fn abstract_groups() {
        let cap = DEFAULT_ABSTRACT_CAP;
        let c2 = aut_as_abstract_group(&automorphisms(&path(3)).unwrap(), cap).unwrap();
        assert!(are_isomorphic(&c2, &cyclic(2)));
        let s3 = aut_as_abstract_group(&automorphisms(&cycle(3)).unwrap(), cap).unwrap();
        assert!(are_isomorphic(&s3, &symmetric(3)));
        s3.validate().unwrap();
        let one = aut_as_abstract_group(&automorphisms(&spider123()).unwrap(), cap).unwrap();
        assert!(are_isomorphic(&one, &trivial()));
        assert!(matches!(
            aut_as_abstract_group(&automorphisms(&cycle(8)).unwrap(), 8),
            Err(AutError::NotEnumerated { order: 16, cap: 8 })
        ));
    }

    #[test]
    fn large_groups_fall_back_to_generators() {
        let empty = Graph::from_edges(9, &[]).unwrap();
        let aut = automorphisms(&empty).unwrap();
        assert_eq!(aut.order(), 362_880);
        assert!(aut.elements().is_none());
        assert_eq!(aut.chain_order(), Some(362_880));
        assert!(matches!(
            automorphisms_with(
                &empty,
                &AutOptions {
                    max_vertices: 5,
                    ..AutOptions::default()
                }
            ),
            Err(AutError::TooLarge {
                vertices: 9,
                bound: 5
            })
        ));
    }

    #[test]
    fn tags_are_ignored() {
        let mut g = path(3);
        g.set_tag(0, VertexTag::new(crate::graph::Role::RevealX))
            .unwrap();
        assert_eq!(automorphisms(&g).unwrap().order(), 2);
    }

    #[test]
    fn isomorphism_examples() {
        assert!(!graph_isomorphic(&cycle(4), &path(4)).unwrap());
        // the spider with shuffled ids
        let shuffled =
            Graph::from_edges(7, &[(6, 3), (6, 0), (0, 5), (6, 2), (2, 1), (1, 4)]).unwrap();
        assert!(graph_isomorphic(&spider123(), &shuffled).unwrap());
        // same degree sequence, different graphs: C6 vs two triangles
        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!graph_isomorphic(&cycle(6), &two_triangles).unwrap());
    }

    #[test]
    fn json_form() {
        let aut = automorphisms(&path(3)).unwrap();
        let json = aut.to_json_value();
        assert_eq!(json.order, 2);
        assert_eq!(json.vertices, vec![0, 1, 2]);
        assert_eq!(json.generators, vec![vec![2, 1, 0]]);
        assert_eq!(json.cayley_table, Some(vec![vec![0, 1], vec![1, 0]]));
    }
}

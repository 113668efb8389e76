#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use vdgame_core::aut::AutGroup;
use vdgame_core::{FiniteGroup, Graph, VertexId};

/// Every labelled simple graph on `n` vertices, one per edge mask.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
        .collect();
    let total = 1u64 << pairs.len();
    (0..total).map(move |mask| {
        let edges: Vec<(u32, u32)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges(n as u32, &edges).unwrap()
    })
}

pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n as u32, &edges).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Same graph with vertex IDs permuted at random.
pub fn relabel(g: &Graph, rng: &mut StdRng) -> Graph {
    let ids: Vec<VertexId> = g.vertex_ids().collect();
    let mut perm: Vec<u32> = (0..ids.len() as u32).collect();
    perm.shuffle(rng);
    let pos = |v: VertexId| perm[ids.binary_search(&v).unwrap()];
    let edges: Vec<(u32, u32)> = g.edges().map(|(u, v)| (pos(u), pos(v))).collect();
    Graph::from_edges(ids.len() as u32, &edges).unwrap()
}

pub fn connected_by_bfs(g: &Graph) -> bool {
    let Some(start) = g.vertex_ids().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == g.vertex_count()
}

/// Checks directly on the edge list that every enumerated element of `aut`
/// is an automorphism of `g`.
pub fn all_elements_preserve_edges(g: &Graph, aut: &AutGroup) -> bool {
    let elements = aut.elements().expect("enumerated");
    elements.iter().all(|p| {
        g.edges()
            .all(|(u, v)| g.has_edge(aut.image(p, u).unwrap(), aut.image(p, v).unwrap()))
    })
}

/// `aut` acts on `orbit` (listed in element order of `group`) exactly as
/// `group` acts on itself by left multiplication, with `orbit[0]` as the
/// identity: then `σ ↦ σ(orbit[0])` is an isomorphism `aut → group`.
pub fn regular_action_isomorphism(
    aut: &AutGroup,
    orbit: &[VertexId],
    group: &FiniteGroup,
) -> Result<(), String> {
    let elements = aut.elements().ok_or("group not enumerated")?;
    if elements.len() != group.order() || orbit.len() != group.order() {
        return Err(format!(
            "|Aut| = {}, |orbit| = {}, |Γ| = {}",
            elements.len(),
            orbit.len(),
            group.order()
        ));
    }
    let label = |p: &vdgame_core::Permutation| -> Result<usize, String> {
        let w = aut.image(p, orbit[0]).ok_or("base vertex missing")?;
        orbit
            .iter()
            .position(|&o| o == w)
            .ok_or_else(|| format!("σ moves the base outside the orbit to {w}"))
    };
    let labels: Vec<usize> = elements.iter().map(label).collect::<Result<_, _>>()?;
    if labels.iter().collect::<BTreeSet<_>>().len() != group.order() {
        return Err("σ ↦ σ(base) is not a bijection".into());
    }
    for (a, p) in elements.iter().enumerate() {
        for (b, q) in elements.iter().enumerate() {
            if label(&p.compose(q))? != group.mul(labels[a], labels[b]) {
                return Err("σ ↦ σ(base) is not a homomorphism".into());
            }
        }
    }
    Ok(())
}

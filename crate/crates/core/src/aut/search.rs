//! Individualization–refinement search.
//!
//! The leftmost path of the search tree fixes a base `v_0, v_1, …`. Working
//! bottom-up, level `k` decides for every vertex `w` of the target cell
//! whether some automorphism fixing `v_0..v_{k-1}` sends `v_k` to `w`, by
//! looking for a leaf under `(v_0..v_{k-1}, w)` equivalent to the first leaf.
//! The product of the resulting basic orbit lengths is the group order and
//! the automorphisms found along the way generate the group.

use super::refine::{DenseGraph, Partition, Workspace};
use crate::perm::{orbit_representatives, Permutation};

#[derive(Debug, Clone)]
struct PathNode {
    part: Partition,
    trace: u64,
    target: Option<u32>,
    chosen: u32,
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub generators: Vec<Permutation>,
    /// `None` if the order does not fit in a `u128`
    pub order: Option<u128>,
    pub base: Vec<u32>,
}

fn root_partition(g: &DenseGraph, colors: &[u32], ws: &mut Workspace) -> (Partition, u64) {
    let mut part = Partition::from_colors(colors);
    let mut sig: u64 = part.cell_count() as u64;
    for s in part.cell_starts() {
        sig = sig.wrapping_mul(0x100_0000_01b3).wrapping_add(
            ((colors[part.cell(s)[0] as usize] as u64) << 32) | part.cell(s).len() as u64,
        );
    }
    let starts = part.cell_starts();
    let trace = part.refine(g, &starts, ws);
    (part, trace ^ sig.rotate_left(17))
}

fn first_path(g: &DenseGraph, colors: &[u32], ws: &mut Workspace) -> Vec<PathNode> {
    let (mut part, mut trace) = root_partition(g, colors, ws);
    let mut path = Vec::new();
    loop {
        let target = part.target_cell();
        let chosen = target.map_or(0, |t| part.cell(t)[0]);
        path.push(PathNode {
            part: part.clone(),
            trace,
            target,
            chosen,
        });
        if target.is_none() {
            return path;
        }
        let s = part.individualize(chosen);
        trace = part.refine(g, &[s], ws);
    }
}

struct Matcher<'a> {
    source: &'a DenseGraph,
    target: &'a DenseGraph,
    path: &'a [PathNode],
    leaf0: &'a [u32],
    ws: Workspace,
}

impl Matcher<'_> {
    fn child(&mut self, part: &Partition, v: u32, depth: usize) -> Option<Partition> {
        let mut child = part.clone();
        let s = child.individualize(v);
        let trace = child.refine(self.target, &[s], &mut self.ws);
        let expect = &self.path[depth];
        (trace == expect.trace && child.cell_count() == expect.part.cell_count()).then_some(child)
    }

    /// Searches below `part` (already matched to `path[depth]`) for a leaf
    /// whose correspondence with the first leaf is an isomorphism.
    fn find(&mut self, part: Partition, depth: usize) -> Option<Permutation> {
        let node = &self.path[depth];
        if part.is_discrete() {
            if node.target.is_some() {
                return None;
            }
            return self.leaf_map(&part);
        }
        let t = part.target_cell()?;
        if Some(t) != node.target {
            return None;
        }
        let cell = part.cell(t).to_vec();
        for u in cell {
            if let Some(child) = self.child(&part, u, depth + 1) {
                if let Some(found) = self.find(child, depth + 1) {
                    return Some(found);
                }
            }
        }
        None
    }

    fn leaf_map(&self, leaf: &Partition) -> Option<Permutation> {
        let mut images = vec![0u32; leaf.len()];
        for (&a, &b) in self.leaf0.iter().zip(&leaf.lab) {
            images[a as usize] = b;
        }
        if self.source.edge_count() != self.target.edge_count() {
            return None;
        }
        for v in 0..self.source.len() as u32 {
            let gv = images[v as usize];
            let nbrs = self.source.neighbors(v);
            if nbrs.len() != self.target.neighbors(gv).len() {
                return None;
            }
            if !nbrs
                .iter()
                .all(|&u| self.target.has_edge(gv, images[u as usize]))
            {
                return None;
            }
        }
        Some(Permutation::from_images_unchecked(images))
    }
}

/// Automorphism group of the vertex-coloured graph `(g, colors)`.
pub(crate) fn automorphisms(g: &DenseGraph, colors: &[u32]) -> SearchOutcome {
    let n = g.len();
    if n == 0 {
        return SearchOutcome {
            generators: Vec::new(),
            order: Some(1),
            base: Vec::new(),
        };
    }
    let mut ws = Workspace::new(n);
    let path = first_path(g, colors, &mut ws);
    let leaf0 = path.last().unwrap().part.lab.clone();
    let levels = path.len() - 1;
    let mut matcher = Matcher {
        source: g,
        target: g,
        path: &path,
        leaf0: &leaf0,
        ws,
    };

    let mut generators: Vec<Permutation> = Vec::new();
    let mut orbit_lengths = vec![0u32; levels];
    for k in (0..levels).rev() {
        let node = &path[k];
        let cell = node.part.cell(node.target.unwrap()).to_vec();
        let vk = node.chosen;
        let mut reps = orbit_representatives(n, &generators);
        let mut failed: Vec<u32> = Vec::new();
        for &w in &cell {
            if reps[w as usize] == reps[vk as usize]
                || failed.iter().any(|&f| reps[f as usize] == reps[w as usize])
            {
                continue;
            }
            let found = matcher
                .child(&node.part, w, k + 1)
                .and_then(|child| matcher.find(child, k + 1));
            match found {
                Some(gamma) => {
                    debug_assert_eq!(gamma.apply(vk), w);
                    generators.push(gamma);
                    reps = orbit_representatives(n, &generators);
                }
                None => failed.push(w),
            }
        }
        orbit_lengths[k] = cell
            .iter()
            .filter(|&&w| reps[w as usize] == reps[vk as usize])
            .count() as u32;
    }
    let order = orbit_lengths
        .iter()
        .try_fold(1u128, |acc, &l| acc.checked_mul(l as u128));
    let base = path[..levels].iter().map(|p| p.chosen).collect();
    SearchOutcome {
        generators,
        order,
        base,
    }
}

/// An isomorphism `a → b` respecting colours, if one exists.
pub(crate) fn isomorphism(
    a: &DenseGraph,
    colors_a: &[u32],
    b: &DenseGraph,
    colors_b: &[u32],
) -> Option<Permutation> {
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return None;
    }
    let n = a.len();
    if n == 0 {
        return Some(Permutation::identity(0));
    }
    let mut ws = Workspace::new(n);
    let path = first_path(a, colors_a, &mut ws);
    let leaf0 = path.last().unwrap().part.lab.clone();
    let (root_b, trace_b) = root_partition(b, colors_b, &mut ws);
    if trace_b != path[0].trace || root_b.cell_count() != path[0].part.cell_count() {
        return None;
    }
    let mut matcher = Matcher {
        source: a,
        target: b,
        path: &path,
        leaf0: &leaf0,
        ws,
    };
    matcher.find(root_b, 0)
}

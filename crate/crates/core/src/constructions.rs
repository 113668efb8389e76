//! Graphs with a prescribed automorphism group and a vertex with trivial
//! stabilizer, and the reveal gadget built on top of them.
//!
//! Every construction is checked by the automorphism engine before it is
//! returned; a failed check is an error, never a silently wrong graph.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{self, AutError, AutOptions};
use crate::graph::{Graph, Role, VertexId, VertexTag};
use crate::group::{are_isomorphic, FiniteGroup};

pub use crate::aut::graph_isomorphic;

/// Bound on the group order accepted by the constructions.
pub const DEFAULT_MAX_GROUP_ORDER: usize = crate::group::DEFAULT_MAX_ORDER;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("group of order {order} is above the construction bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("construction failed verification: {0}")]
    Verification(String),
    #[error(transparent)]
    Aut(#[from] AutError),
}

#[derive(Debug, Clone, Copy)]
pub struct ConstructionOptions {
    /// Check every invariant with the automorphism engine.
    pub verify: bool,
    pub max_group_order: usize,
    pub aut: AutOptions,
}

impl Default for ConstructionOptions {
    fn default() -> Self {
        ConstructionOptions {
            verify: true,
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
            aut: AutOptions::default(),
        }
    }
}

/// A connected graph realizing `group`, with a vertex of trivial stabilizer.
#[derive(Debug, Clone)]
pub struct StabilizedGraph {
    pub graph: Graph,
    pub anchor: VertexId,
    pub group: FiniteGroup,
    /// Vertex of each group element, indexed by element.
    pub element_vertices: Vec<VertexId>,
    pub verified: bool,
}

/// Rigid spider with legs 1, 2, 3; vertex 0 is the centre.
pub fn rigid_spider() -> Graph {
    let mut g = Graph::new();
    let centre = g.add_vertex(VertexTag::new(Role::GroupElement));
    for len in 1..=3 {
        g.attach_pendant_path(centre, len, |_| VertexTag::plain())
            .expect("centre exists");
    }
    g
}

/// Cayley graph of `group` on its minimal generating set with every arc
/// `a → a·s_q` replaced by the path `a – c1 – c2 – a·s_q`, tails of length
/// `2q − 1 + extra` on `c1` and `2q + extra` on `c2`. The shorter tail marks
/// the tail end of the arc and the tail lengths name the generator.
fn cayley_with_arc_gadgets(
    group: &FiniteGroup,
    gens: &[usize],
    extra: usize,
) -> (Graph, Vec<VertexId>) {
    let mut g = Graph::new();
    let elements: Vec<VertexId> = (0..group.order())
        .map(|_| g.add_vertex(VertexTag::new(Role::GroupElement)))
        .collect();
    let internal = |_| VertexTag::new(Role::EdgeGadgetInternal);
    for a in 0..group.order() {
        for (q, &s) in gens.iter().enumerate() {
            let q = q + 1;
            let b = group.mul(a, s);
            let c1 = g.add_vertex(internal(0));
            let c2 = g.add_vertex(internal(0));
            for (u, v) in [(elements[a], c1), (c1, c2), (c2, elements[b])] {
                g.add_edge(u, v).expect("fresh vertices");
            }
            g.attach_pendant_path(c1, 2 * q - 1 + extra, internal)
                .expect("hub exists");
            g.attach_pendant_path(c2, 2 * q + extra, internal)
                .expect("hub exists");
        }
    }
    (g, elements)
}

/// Builds and verifies a connected graph `G` with `Aut(G) ≅ group` and an
/// anchor vertex whose stabilizer is trivial.
pub fn frucht_with_trivial_stabilizer(
    group: &FiniteGroup,
) -> Result<StabilizedGraph, ConstructionError> {
    frucht_with_trivial_stabilizer_with(group, &ConstructionOptions::default())
}

pub fn frucht_with_trivial_stabilizer_with(
    group: &FiniteGroup,
    opts: &ConstructionOptions,
) -> Result<StabilizedGraph, ConstructionError> {
    if group.order() > opts.max_group_order {
        return Err(ConstructionError::GroupTooLarge {
            order: group.order(),
            bound: opts.max_group_order,
        });
    }
    if group.order() == 1 {
        let graph = rigid_spider();
        let sg = StabilizedGraph {
            graph,
            anchor: 0,
            group: group.clone(),
            element_vertices: vec![0],
            verified: false,
        };
        return finish_stabilized(sg, opts);
    }
    let gens = group.minimal_generating_set();
    let mut extra = 0;
    let mut last_err = None;
    // second attempt: lengthen every tail by the previous maximum
    for _ in 0..2 {
        let (graph, element_vertices) = cayley_with_arc_gadgets(group, &gens, extra);
        let sg = StabilizedGraph {
            graph,
            anchor: element_vertices[0],
            group: group.clone(),
            element_vertices,
            verified: false,
        };
        match finish_stabilized(sg, opts) {
            Ok(sg) => return Ok(sg),
            Err(ConstructionError::Verification(msg)) => last_err = Some(msg),
            Err(e) => return Err(e),
        }
        extra = 2 * extra + 2 * gens.len();
    }
    Err(ConstructionError::Verification(
        last_err.unwrap_or_default(),
    ))
}

fn finish_stabilized(
    mut sg: StabilizedGraph,
    opts: &ConstructionOptions,
) -> Result<StabilizedGraph, ConstructionError> {
    if opts.verify {
        verify_stabilized(&sg, &opts.aut)?;
        sg.verified = true;
    }
    Ok(sg)
}

fn verify_stabilized(sg: &StabilizedGraph, aut_opts: &AutOptions) -> Result<(), ConstructionError> {
    let fail = |msg: String| Err(ConstructionError::Verification(msg));
    if !sg.graph.is_connected() {
        return fail("graph is not connected".into());
    }
    let aut = aut::automorphisms_with(&sg.graph, aut_opts)?;
    if !realizes(&aut, &sg.group, aut_opts)? {
        return fail(format!(
            "Aut(G) has order {}, not isomorphic to the group of order {}",
            aut.order(),
            sg.group.order()
        ));
    }
    let stab = aut::stabilizer_order_with(&sg.graph, sg.anchor, aut_opts)?;
    if stab != 1 {
        return fail(format!("anchor stabilizer has order {stab}"));
    }
    Ok(())
}

/// Whether an automorphism group is isomorphic to `group`.
pub(crate) fn realizes(
    aut: &aut::AutGroup,
    group: &FiniteGroup,
    opts: &AutOptions,
) -> Result<bool, AutError> {
    if aut.order() != group.order() as u128 {
        return Ok(false);
    }
    let abstract_group = aut::aut_as_abstract_group(aut, opts.abstract_cap)?;
    Ok(are_isomorphic(&abstract_group, group))
}

/// Sizes and pendant paths of a reveal gadget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetLayout {
    /// |V(G)| of the underlying stabilized graph
    pub n: usize,
    /// bits used to number `v_1..v_n`
    pub t: usize,
    /// pendant path length actually used (`t`, or longer after remediation)
    pub path_len: usize,
    /// `v_1..v_n` in order
    pub base_vertices: Vec<VertexId>,
    /// `u_1..u_{path_len}` hanging off each `v_j`
    pub paths: Vec<Vec<VertexId>>,
}

/// Rigid graph `H` with vertices `x`, `y` such that `H − x` is connected,
/// `Aut(H − x) ≅ group` and `y` has trivial stabilizer in `H − x`.
#[derive(Debug, Clone)]
pub struct RevealGadget {
    pub graph: Graph,
    pub x: VertexId,
    pub y: VertexId,
    /// orbit of `y` in `H − x`
    pub orbit: BTreeSet<VertexId>,
    pub group: FiniteGroup,
    pub layout: GadgetLayout,
    pub verified: bool,
}

/// Outcome of each gadget invariant check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetReport {
    pub aut_h_trivial: bool,
    pub h_minus_x_connected: bool,
    pub aut_h_minus_x_matches: bool,
    pub y_stabilizer_trivial: bool,
    pub size_formula: bool,
    pub aut_h_order: u128,
    pub aut_h_minus_x_order: u128,
}

impl GadgetReport {
    pub fn all_hold(&self) -> bool {
        self.aut_h_trivial
            && self.h_minus_x_connected
            && self.aut_h_minus_x_matches
            && self.y_stabilizer_trivial
            && self.size_formula
    }

    fn failures(&self) -> Vec<&'static str> {
        [
            (self.aut_h_trivial, "Aut(H) is not trivial"),
            (self.h_minus_x_connected, "H - x is disconnected"),
            (
                self.aut_h_minus_x_matches,
                "Aut(H - x) does not match the group",
            ),
            (
                self.y_stabilizer_trivial,
                "stabilizer of y in H - x is not trivial",
            ),
            (self.size_formula, "|V(H)| != n(t+1)+1"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, msg)| msg)
        .collect()
    }
}

/// Number of bits needed to write `n`, so `1..=n` get distinct nonzero patterns.
pub fn bit_length(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

fn assemble_gadget(base: &StabilizedGraph, path_len: usize) -> RevealGadget {
    let mut graph = base.graph.clone();
    let base_vertices: Vec<VertexId> = graph.vertex_ids().collect();
    let n = base_vertices.len();
    let t = bit_length(n);
    let paths: Vec<Vec<VertexId>> = base_vertices
        .iter()
        .map(|&v| {
            graph
                .attach_pendant_path(v, path_len, |i| {
                    VertexTag::new(Role::GadgetPath { index: i as u32 })
                })
                .expect("base vertex exists")
        })
        .collect();
    let x = graph.add_vertex(VertexTag::new(Role::RevealX));
    graph
        .join_vertex_to_set(x, base_vertices.iter().copied())
        .expect("base vertices exist");
    for (j0, path) in paths.iter().enumerate() {
        let j = j0 + 1;
        for (bit, &u) in path.iter().take(t).enumerate() {
            if j >> bit & 1 == 1 {
                graph.add_edge(x, u).expect("path vertex exists");
            }
        }
    }
    let y = base.anchor;
    graph
        .set_tag(y, VertexTag::new(Role::RevealY))
        .expect("anchor exists");
    RevealGadget {
        graph,
        x,
        y,
        orbit: BTreeSet::new(),
        group: base.group.clone(),
        layout: GadgetLayout {
            n,
            t,
            path_len,
            base_vertices,
            paths,
        },
        verified: false,
    }
}

/// Checks the five gadget invariants and fills in the orbit of `y`.
pub fn check_gadget(
    gadget: &mut RevealGadget,
    opts: &AutOptions,
) -> Result<GadgetReport, ConstructionError> {
    let aut_h = aut::automorphisms_with(&gadget.graph, opts)?;
    let h_minus_x = gadget.graph.delete_vertex(gadget.x).expect("x exists");
    let aut_hx = aut::automorphisms_with(&h_minus_x, opts)?;
    let stab_y = aut::stabilizer_order_with(&h_minus_x, gadget.y, opts)?;
    gadget.orbit = aut_hx.orbit(gadget.y).expect("y exists");
    let layout = &gadget.layout;
    Ok(GadgetReport {
        aut_h_trivial: aut_h.is_trivial(),
        h_minus_x_connected: h_minus_x.is_connected(),
        aut_h_minus_x_matches: realizes(&aut_hx, &gadget.group, opts)?,
        y_stabilizer_trivial: stab_y == 1,
        size_formula: gadget.graph.vertex_count() == layout.n * (layout.path_len + 1) + 1,
        aut_h_order: aut_h.order(),
        aut_h_minus_x_order: aut_hx.order(),
    })
}

/// Builds and verifies the reveal gadget for `group`.
pub fn build_reveal_gadget(group: &FiniteGroup) -> Result<RevealGadget, ConstructionError> {
    build_reveal_gadget_with(group, &ConstructionOptions::default()).map(|(g, _)| g)
}

/// As [`build_reveal_gadget`], also returning the invariant report (absent
/// when verification is switched off).
pub fn build_reveal_gadget_with(
    group: &FiniteGroup,
    opts: &ConstructionOptions,
) -> Result<(RevealGadget, Option<GadgetReport>), ConstructionError> {
    let base = frucht_with_trivial_stabilizer_with(group, opts)?;
    let n = base.graph.vertex_count();
    let t = bit_length(n);
    if !opts.verify {
        let mut gadget = assemble_gadget(&base, t);
        // the orbit of y is the element vertices under the regular action
        gadget.orbit = if group.order() == 1 {
            BTreeSet::from([gadget.y])
        } else {
            base.element_vertices.iter().copied().collect()
        };
        return Ok((gadget, None));
    }
    let mut failures = Vec::new();
    // remediation: lengthen the pendant paths by n, keeping the bit pattern
    // on their first t vertices
    for path_len in [t, t + n] {
        let mut gadget = assemble_gadget(&base, path_len);
        let report = check_gadget(&mut gadget, &opts.aut)?;
        if report.all_hold() {
            gadget.verified = true;
            return Ok((gadget, Some(report)));
        }
        failures.push(format!(
            "path length {path_len}: {}",
            report.failures().join(", ")
        ));
    }
    Err(ConstructionError::Verification(failures.join("; ")))
}

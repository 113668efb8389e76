//! The vertex deletion game: the layered game graph `G_0`, the player's
//! strategy, and machine verification of every round.
//!
//! `F_0` is a copy of `H_0 − x_0`. Layer `j + 1` hangs a copy of every gadget
//! `H_1..H_k` off each vertex of `U_j`, joining the parent to the whole copy;
//! `U_{j+1}` collects the copies of the orbits `O_i`. An anchor path
//! `a_0 – … – a_ℓ`, with `a_j` joined to the vertices new in layer `j`, pins
//! the layers. In round `j` the player deletes the `x` copy of gadget
//! `(j, u_{j−1}, i_j)` and moves on to its `y` copy.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{self, AutError, AutGroup};
use crate::constructions::{self, ConstructionError, ConstructionOptions, RevealGadget};
use crate::graph::{Graph, GraphError, Role, VertexId, VertexTag};
use crate::group::{are_isomorphic, FiniteGroup, GroupError, GroupSpec};
use crate::perm::{Permutation, StabilizerChain};

/// Default cap on `k^ℓ` for exhaustive verification.
pub const DEFAULT_MAX_SEQUENCES: usize = 4_096;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid game config: {0}")]
    Config(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("game graph would have {projected} vertices, above the bound {bound}")]
    TooLarge { projected: u128, bound: usize },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("all {0} rounds have been played")]
    RoundsExhausted(usize),
    #[error("bad index {index}: challenges range over 1..={k}")]
    BadIndex { index: usize, k: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("claim check precondition violated: vertex {0} is not in V(F_j)")]
    NotInLayers(VertexId),
    #[error("{sequences} challenge sequences exceed the budget {budget}")]
    BudgetExceeded { sequences: u128, budget: usize },
    #[error("replay mismatch: {0}")]
    Replay(String),
}

/// The adversary's Round-0 choice: `Γ_0, Γ_1..Γ_k` and the number of rounds.
#[derive(Debug, Clone)]
pub struct GameConfig {
    groups: Vec<FiniteGroup>,
    rounds: usize,
    /// original index (1-based) of each isomorphism class among `Γ_1..Γ_k`
    representatives: Vec<usize>,
    /// `remap[i - 1]`: dedup index (1-based) of original challenge `i`
    remap: Vec<usize>,
}

impl GameConfig {
    /// `groups[0]` is `Γ_0`; the rest are the challenge groups.
    pub fn new(groups: Vec<FiniteGroup>, rounds: usize) -> Result<Self, GameError> {
        if groups.len() < 2 {
            return Err(GameError::Config(
                "need Γ_0 and at least one challenge group".into(),
            ));
        }
        if rounds < 1 {
            return Err(GameError::Config("need at least one round".into()));
        }
        let mut representatives: Vec<usize> = Vec::new();
        let mut remap = Vec::with_capacity(groups.len() - 1);
        for i in 1..groups.len() {
            match representatives
                .iter()
                .position(|&r| are_isomorphic(&groups[r], &groups[i]))
            {
                Some(d) => remap.push(d + 1),
                None => {
                    representatives.push(i);
                    remap.push(representatives.len());
                }
            }
        }
        Ok(GameConfig {
            groups,
            rounds,
            representatives,
            remap,
        })
    }

    /// Parses and builds every spec with the given order bound.
    pub fn from_specs<S: AsRef<str>>(
        specs: &[S],
        rounds: usize,
        max_order: usize,
    ) -> Result<Self, GameError> {
        let groups = specs
            .iter()
            .map(|s| {
                s.as_ref()
                    .parse::<GroupSpec>()
                    .and_then(|spec| spec.build(max_order))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(groups, rounds)
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn groups(&self) -> &[FiniteGroup] {
        &self.groups
    }

    /// `k` as the adversary sees it (duplicates included).
    pub fn challenge_count(&self) -> usize {
        self.groups.len() - 1
    }

    /// `k` after removing isomorphic duplicates.
    pub fn distinct_count(&self) -> usize {
        self.representatives.len()
    }

    /// Original challenge index standing for each distinct group.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    /// Dedup index of an original challenge index.
    pub fn dedup_index(&self, challenge: usize) -> Result<usize, GameError> {
        if challenge == 0 || challenge > self.challenge_count() {
            return Err(GameError::BadIndex {
                index: challenge,
                k: self.challenge_count(),
            });
        }
        Ok(self.remap[challenge - 1])
    }

    pub fn group_names(&self) -> Vec<String> {
        self.groups
            .iter()
            .map(|g| g.name().unwrap_or("unnamed").to_owned())
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GameOptions {
    pub construction: ConstructionOptions,
    /// Verify `Aut(G_j)` after every move.
    pub verify_rounds: bool,
    pub max_sequences: usize,
}

impl Default for GameOptions {
    fn default() -> Self {
        GameOptions {
            construction: ConstructionOptions::default(),
            verify_rounds: true,
            max_sequences: DEFAULT_MAX_SEQUENCES,
        }
    }
}

impl GameOptions {
    fn max_vertices(&self) -> usize {
        self.construction.aut.max_vertices
    }
}

/// A placed copy `H_i^{(layer, parent)}` of gadget `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetHandle {
    pub layer: u32,
    pub parent: VertexId,
    /// dedup index, 1-based
    pub group_index: usize,
    pub vertices: Vec<VertexId>,
    pub x: VertexId,
    pub y: VertexId,
    pub orbit: Vec<VertexId>,
}

/// Which vertex of the challenged gadget the player deletes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// The copy of `x`: the winning move.
    #[default]
    RevealX,
    /// The copy of `y`; a deliberately wrong move for negative controls.
    DeleteYCopy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    /// index as named by the adversary
    pub challenge: usize,
    pub group_index: usize,
    pub deleted_vertex: VertexId,
    pub aut_order: Option<u128>,
    pub verified: Option<bool>,
    /// only orders were compared (group too large for a Cayley table)
    #[serde(default)]
    pub partial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub round: usize,
    pub expected: String,
    pub aut_order: u128,
    pub verified: bool,
    pub partial: bool,
}

/// Everything about one game in progress.
#[derive(Debug, Clone)]
pub struct GameState {
    config: GameConfig,
    opts: GameOptions,
    initial: Graph,
    initial_hash: String,
    graph: Graph,
    round: usize,
    layer_vertices: Vec<Vec<VertexId>>,
    u_layers: Vec<Vec<VertexId>>,
    anchors: Vec<VertexId>,
    handles: Vec<GadgetHandle>,
    handle_index: BTreeMap<(u32, VertexId, usize), usize>,
    u_path: Vec<VertexId>,
    history: Vec<RoundRecord>,
    initial_verification: Option<VerificationRecord>,
}

/// Vertex count and orbit size of the gadget for `group`, without building it.
pub fn projected_gadget_size(group: &FiniteGroup) -> (u128, u128) {
    let m = group.order() as u128;
    let n: u128 = if m == 1 {
        7
    } else {
        let r = group.minimal_generating_set().len() as u128;
        // each element vertex, plus per generator q an arc of 2 hubs and tails 2q−1, 2q
        m * (1 + (1..=r).map(|q| 4 * q + 1).sum::<u128>())
    };
    let t = constructions::bit_length(n as usize) as u128;
    (n * (t + 1) + 1, m)
}

/// `|V(G_0)|` from gadget sizes `(|H_i|, |O_i|)`; `None` on overflow.
fn game_size(h0: (u128, u128), layer_gadgets: &[(u128, u128)], rounds: usize) -> Option<u128> {
    let per_parent: u128 = layer_gadgets.iter().map(|g| g.0).sum();
    let growth: u128 = layer_gadgets.iter().map(|g| g.1).sum();
    let mut total = h0.0 - 1 + rounds as u128 + 1;
    let mut u = h0.1;
    for _ in 0..rounds {
        total = total.checked_add(u.checked_mul(per_parent)?)?;
        u = u.checked_mul(growth)?;
    }
    Some(total)
}

/// Projected `|V(G_0)|` for a config, computed before anything is built.
pub fn projected_game_size(config: &GameConfig) -> Option<u128> {
    let h0 = projected_gadget_size(&config.groups[0]);
    let layer: Vec<_> = config
        .representatives
        .iter()
        .map(|&i| projected_gadget_size(&config.groups[i]))
        .collect();
    game_size(h0, &layer, config.rounds)
}

fn check_size(projected: Option<u128>, bound: usize) -> Result<(), GameError> {
    match projected {
        Some(p) if p <= bound as u128 => Ok(()),
        p => Err(GameError::TooLarge {
            projected: p.unwrap_or(u128::MAX),
            bound,
        }),
    }
}

/// Builds `G_0` for `config` and verifies `Aut(G_0) ≅ Γ_0`.
pub fn build_game(config: GameConfig, opts: GameOptions) -> Result<GameState, GameError> {
    check_size(projected_game_size(&config), opts.max_vertices())?;

    let build = |g: &FiniteGroup| -> Result<RevealGadget, GameError> {
        Ok(constructions::build_reveal_gadget_with(g, &opts.construction)?.0)
    };
    let h0 = build(&config.groups[0])?;
    let gadgets: Vec<RevealGadget> = config
        .representatives
        .iter()
        .map(|&i| build(&config.groups[i]))
        .collect::<Result<_, _>>()?;
    let sizes: Vec<_> = gadgets
        .iter()
        .map(|h| (h.graph.vertex_count() as u128, h.orbit.len() as u128))
        .collect();
    check_size(
        game_size(
            (h0.graph.vertex_count() as u128, h0.orbit.len() as u128),
            &sizes,
            config.rounds,
        ),
        opts.max_vertices(),
    )?;

    let mut g = Graph::new();
    let f0_source = h0.graph.delete_vertex(h0.x)?;
    let map = g.disjoint_copy(&f0_source, |t| VertexTag {
        layer: Some(0),
        ..*t
    });
    let mut layer_vertices = vec![map.values().copied().collect::<Vec<_>>()];
    let mut u_layers = vec![h0.orbit.iter().map(|v| map[v]).collect::<Vec<_>>()];
    let u0 = map[&h0.y];

    let mut handles = Vec::new();
    let mut handle_index = BTreeMap::new();
    for j in 0..config.rounds {
        let layer = j as u32 + 1;
        let mut fresh = Vec::new();
        let mut next_u = Vec::new();
        for &parent in &u_layers[j] {
            for (d, gadget) in gadgets.iter().enumerate() {
                let id = handles.len() as u32;
                let map = g.disjoint_copy(&gadget.graph, |t| VertexTag {
                    layer: Some(layer),
                    gadget: Some(id),
                    ..*t
                });
                let vertices: Vec<VertexId> = map.values().copied().collect();
                g.join_vertex_to_set(parent, vertices.iter().copied())?;
                let orbit: Vec<VertexId> = gadget.orbit.iter().map(|v| map[v]).collect();
                fresh.extend_from_slice(&vertices);
                next_u.extend_from_slice(&orbit);
                handle_index.insert((layer, parent, d + 1), handles.len());
                handles.push(GadgetHandle {
                    layer,
                    parent,
                    group_index: d + 1,
                    vertices,
                    x: map[&gadget.x],
                    y: map[&gadget.y],
                    orbit,
                });
            }
        }
        next_u.sort_unstable();
        layer_vertices.push(fresh);
        u_layers.push(next_u);
    }

    let anchors: Vec<VertexId> = (0..=config.rounds)
        .map(|j| g.add_vertex(VertexTag::new(Role::Anchor { index: j as u32 }).in_layer(j as u32)))
        .collect();
    for (j, pair) in anchors.windows(2).enumerate() {
        g.add_edge(pair[0], pair[1])?;
        debug_assert!(j < config.rounds);
    }
    for (j, &a) in anchors.iter().enumerate() {
        g.join_vertex_to_set(a, layer_vertices[j].iter().copied())?;
    }

    let initial_hash = g.hash();
    let mut state = GameState {
        config,
        opts,
        initial: g.clone(),
        initial_hash,
        graph: g,
        round: 0,
        layer_vertices,
        u_layers,
        anchors,
        handles,
        handle_index,
        u_path: vec![u0],
        history: Vec::new(),
        initial_verification: None,
    };
    if opts.construction.verify {
        let record = state.verify_round()?;
        if !record.verified {
            return Err(GameError::Verification(format!(
                "Aut(G_0) has order {}, not isomorphic to {}",
                record.aut_order, record.expected
            )));
        }
    }
    Ok(state)
}

/// Result of the restriction-map check `Aut(G_0 − X) → Aut(F_j − X)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim1Report {
    pub layer: usize,
    pub removed: Vec<VertexId>,
    pub order_g: u128,
    pub order_f: u128,
    /// every generator of `Aut(G_0 − X)` restricts to an automorphism of `F_j − X`
    pub restrictions_are_automorphisms: bool,
    /// the restricted generators still generate a group of order `|Aut(G_0 − X)|`
    pub restriction_injective: bool,
    pub holds: bool,
}

impl GameState {
    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn options(&self) -> &GameOptions {
        &self.opts
    }

    /// Current graph `G_round`.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `G_0` as built.
    pub fn initial_graph(&self) -> &Graph {
        &self.initial
    }

    pub fn initial_hash(&self) -> &str {
        &self.initial_hash
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn remaining_rounds(&self) -> usize {
        self.config.rounds - self.round
    }

    pub fn is_finished(&self) -> bool {
        self.round == self.config.rounds
    }

    pub fn history(&self) -> &[RoundRecord] {
        &self.history
    }

    pub fn initial_verification(&self) -> Option<&VerificationRecord> {
        self.initial_verification.as_ref()
    }

    pub fn anchors(&self) -> &[VertexId] {
        &self.anchors
    }

    pub fn handles(&self) -> &[GadgetHandle] {
        &self.handles
    }

    pub fn handle(
        &self,
        layer: u32,
        parent: VertexId,
        group_index: usize,
    ) -> Option<&GadgetHandle> {
        self.handle_index
            .get(&(layer, parent, group_index))
            .map(|&i| &self.handles[i])
    }

    /// `U_j`.
    pub fn u_layer(&self, j: usize) -> &[VertexId] {
        &self.u_layers[j]
    }

    /// `V(F_j) ∖ V(F_{j−1})`.
    pub fn layer_vertices(&self, j: usize) -> &[VertexId] {
        &self.layer_vertices[j]
    }

    /// `V(F_j)`.
    pub fn f_vertices(&self, j: usize) -> BTreeSet<VertexId> {
        self.layer_vertices[..=j]
            .iter()
            .flatten()
            .copied()
            .collect()
    }

    /// `u_0, …, u_round`; the last entry is the current removal vertex.
    pub fn u_path(&self) -> &[VertexId] {
        &self.u_path
    }

    pub fn current_u(&self) -> VertexId {
        *self.u_path.last().expect("u_0 always present")
    }

    /// Deletes the player's answer to `challenge` (an original 1-based index).
    pub fn player_move(&mut self, challenge: usize) -> Result<VertexId, GameError> {
        self.player_move_with(challenge, Strategy::RevealX)
    }

    pub fn player_move_with(
        &mut self,
        challenge: usize,
        strategy: Strategy,
    ) -> Result<VertexId, GameError> {
        if self.is_finished() {
            return Err(GameError::RoundsExhausted(self.config.rounds));
        }
        let d = self.config.dedup_index(challenge)?;
        let layer = self.round as u32 + 1;
        let handle = self
            .handle(layer, self.current_u(), d)
            .expect("every U_j vertex carries all gadgets")
            .clone();
        let victim = match strategy {
            Strategy::RevealX => handle.x,
            Strategy::DeleteYCopy => handle.y,
        };
        self.graph.remove_vertex(victim)?;
        self.round += 1;
        self.u_path.push(handle.y);
        self.history.push(RoundRecord {
            round: self.round,
            challenge,
            group_index: d,
            deleted_vertex: victim,
            aut_order: None,
            verified: None,
            partial: false,
        });
        Ok(victim)
    }

    /// Move plus verification (unless switched off in the options).
    pub fn play(&mut self, challenge: usize) -> Result<RoundRecord, GameError> {
        self.play_with(challenge, Strategy::RevealX)
    }

    pub fn play_with(
        &mut self,
        challenge: usize,
        strategy: Strategy,
    ) -> Result<RoundRecord, GameError> {
        self.player_move_with(challenge, strategy)?;
        if self.opts.verify_rounds {
            self.verify_round()?;
        } else {
            self.record_order()?;
        }
        Ok(self.history.last().unwrap().clone())
    }

    /// Records `|Aut(G_round)|` in the last history entry without the
    /// isomorphism check.
    pub fn record_order(&mut self) -> Result<u128, GameError> {
        let order = self.current_aut()?.order();
        if let Some(entry) = self.history.last_mut() {
            entry.aut_order = Some(order);
        }
        Ok(order)
    }

    /// Group the current graph should realize.
    fn expected_group(&self) -> &FiniteGroup {
        match self.history.last() {
            None => &self.config.groups[0],
            Some(r) => &self.config.groups[self.config.representatives[r.group_index - 1]],
        }
    }

    pub fn current_aut(&self) -> Result<AutGroup, GameError> {
        Ok(aut::automorphisms_with(
            &self.graph,
            &self.opts.construction.aut,
        )?)
    }

    /// Checks `Aut(G_round) ≅ Γ_{i_round}` (`Γ_0` before any move) and records
    /// the outcome in the history.
    pub fn verify_round(&mut self) -> Result<VerificationRecord, GameError> {
        let aut = self.current_aut()?;
        let expected = self.expected_group();
        let (verified, partial) =
            match constructions::realizes(&aut, expected, &self.opts.construction.aut) {
                Ok(iso) => (iso, false),
                Err(AutError::NotEnumerated { .. }) => {
                    (aut.order() == expected.order() as u128, true)
                }
                Err(e) => return Err(e.into()),
            };
        let record = VerificationRecord {
            round: self.round,
            expected: expected.name().unwrap_or("unnamed").to_owned(),
            aut_order: aut.order(),
            verified,
            partial,
        };
        match self.history.last_mut() {
            Some(entry) => {
                entry.aut_order = Some(record.aut_order);
                entry.verified = Some(verified);
                entry.partial = partial;
            }
            None => self.initial_verification = Some(record.clone()),
        }
        Ok(record)
    }

    /// Whether every automorphism of `G_round` fixes `u_0..u_{round−1}`.
    pub fn earlier_u_fixed(&self) -> Result<bool, GameError> {
        let aut = self.current_aut()?;
        Ok(self.u_path[..self.round].iter().all(|&u| aut.fixes(u)))
    }

    /// Checks that `Aut(G_0 − X)` restricts injectively onto `Aut(F_j − X)`
    /// and that the two orders agree.
    pub fn check_claim1(&self, j: usize, removed: &[VertexId]) -> Result<Claim1Report, GameError> {
        if j > self.config.rounds {
            return Err(GameError::Config(format!(
                "layer {j} is beyond the last layer {}",
                self.config.rounds
            )));
        }
        let f = self.f_vertices(j);
        if let Some(&bad) = removed.iter().find(|v| !f.contains(v)) {
            return Err(GameError::NotInLayers(bad));
        }
        let removed_set: BTreeSet<VertexId> = removed.iter().copied().collect();
        let mut g_minus = self.initial.clone();
        for &v in &removed_set {
            g_minus.remove_vertex(v)?;
        }
        let keep: BTreeSet<VertexId> = f.difference(&removed_set).copied().collect();
        let f_minus = self.initial.induced_subgraph(&keep);
        let aut_opts = &self.opts.construction.aut;
        let aut_g = aut::automorphisms_with(&g_minus, aut_opts)?;
        let aut_f = aut::automorphisms_with(&f_minus, aut_opts)?;

        let f_ids: Vec<VertexId> = f_minus.vertex_ids().collect();
        let mut restricted = Vec::with_capacity(aut_g.generators().len());
        let mut all_automorphisms = true;
        for gen in aut_g.generators() {
            let images: Option<Vec<VertexId>> = f_ids
                .iter()
                .map(|&v| aut_g.image(gen, v).filter(|w| keep.contains(w)))
                .collect();
            let Some(images) = images else {
                all_automorphisms = false;
                break;
            };
            let map: BTreeMap<VertexId, VertexId> =
                f_ids.iter().copied().zip(images.iter().copied()).collect();
            if !f_minus
                .edges()
                .all(|(u, v)| f_minus.has_edge(map[&u], map[&v]))
            {
                all_automorphisms = false;
                break;
            }
            let perm: Vec<u32> = images
                .iter()
                .map(|w| f_ids.binary_search(w).expect("image inside F_j − X") as u32)
                .collect();
            restricted.push(Permutation::from_images(perm).expect("restriction is a bijection"));
        }
        let injective = all_automorphisms
            && StabilizerChain::new(f_ids.len(), &restricted).order() == Some(aut_g.order());
        Ok(Claim1Report {
            layer: j,
            removed: removed_set.into_iter().collect(),
            order_g: aut_g.order(),
            order_f: aut_f.order(),
            restrictions_are_automorphisms: all_automorphisms,
            restriction_injective: injective,
            holds: aut_g.order() == aut_f.order() && all_automorphisms && injective,
        })
    }

    pub fn transcript(&self) -> Transcript {
        Transcript {
            config: TranscriptConfig {
                groups: self.config.group_names(),
                rounds: self.config.rounds,
            },
            g0_hash: self.initial_hash.clone(),
            history: self
                .history
                .iter()
                .map(|r| TranscriptEntry {
                    challenge: r.challenge,
                    deleted_vertex: r.deleted_vertex,
                    aut_order: r.aut_order,
                    verified: r.verified,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptConfig {
    pub groups: Vec<String>,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub challenge: usize,
    pub deleted_vertex: VertexId,
    pub aut_order: Option<u128>,
    pub verified: Option<bool>,
}

/// Replayable record of a game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: TranscriptConfig,
    pub g0_hash: String,
    pub history: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Rebuilds `G_0` from a transcript and replays its challenges, checking the
/// graph hash, every deleted vertex and every recorded order.
pub fn replay(
    transcript: &Transcript,
    max_order: usize,
    opts: GameOptions,
) -> Result<GameState, GameError> {
    let config = GameConfig::from_specs(
        &transcript.config.groups,
        transcript.config.rounds,
        max_order,
    )?;
    let mut state = build_game(config, opts)?;
    if state.initial_hash != transcript.g0_hash {
        return Err(GameError::Replay(format!(
            "G_0 hash {} does not match transcript {}",
            state.initial_hash, transcript.g0_hash
        )));
    }
    for entry in &transcript.history {
        let record = state.play(entry.challenge)?;
        if record.deleted_vertex != entry.deleted_vertex {
            return Err(GameError::Replay(format!(
                "round {}: deleted {} but transcript says {}",
                record.round, record.deleted_vertex, entry.deleted_vertex
            )));
        }
        if let (Some(want), Some(got)) = (entry.aut_order, record.aut_order) {
            if want != got {
                return Err(GameError::Replay(format!(
                    "round {}: Aut order {got}, transcript says {want}",
                    record.round
                )));
            }
        }
        if let (Some(want), Some(got)) = (entry.verified, record.verified) {
            if want != got {
                return Err(GameError::Replay(format!(
                    "round {}: verified {got}, transcript says {want}",
                    record.round
                )));
            }
        }
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceReport {
    /// challenges as original indices
    pub challenges: Vec<usize>,
    pub rounds: Vec<RoundRecord>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub g0_vertices: usize,
    pub g0_aut_order: Option<u128>,
    pub sequences: Vec<SequenceReport>,
    pub passed: bool,
}

/// Replays the strategy against every challenge sequence in `{1..k}^ℓ`
/// (`k` after dedup), each from a fresh copy of `G_0`, verifying every round.
pub fn verify_exhaustive(
    config: GameConfig,
    opts: GameOptions,
) -> Result<ExhaustiveReport, GameError> {
    verify_exhaustive_with(config, opts, Strategy::RevealX)
}

pub fn verify_exhaustive_with(
    config: GameConfig,
    opts: GameOptions,
    strategy: Strategy,
) -> Result<ExhaustiveReport, GameError> {
    let k = config.distinct_count();
    let sequences = (k as u128).checked_pow(config.rounds as u32);
    match sequences {
        Some(s) if s <= opts.max_sequences as u128 => {}
        s => {
            return Err(GameError::BudgetExceeded {
                sequences: s.unwrap_or(u128::MAX),
                budget: opts.max_sequences,
            })
        }
    }
    let opts = GameOptions {
        verify_rounds: true,
        ..opts
    };
    let reps: Vec<usize> = config.representatives.clone();
    let rounds = config.rounds;
    let base = build_game(config, opts)?;
    let all: Vec<Vec<usize>> = (0..rounds)
        .map(|_| reps.iter().copied())
        .multi_cartesian_product()
        .collect();
    let sequences: Vec<SequenceReport> = all
        .into_par_iter()
        .map(|challenges| -> Result<SequenceReport, GameError> {
            let mut state = base.clone();
            let mut records = Vec::with_capacity(rounds);
            for &c in &challenges {
                records.push(state.play_with(c, strategy)?);
            }
            let passed = records.iter().all(|r| r.verified == Some(true));
            Ok(SequenceReport {
                challenges,
                rounds: records,
                passed,
            })
        })
        .collect::<Result<_, _>>()?;
    let g0_ok = base
        .initial_verification
        .as_ref()
        .is_some_and(|r| r.verified);
    Ok(ExhaustiveReport {
        g0_vertices: base.initial.vertex_count(),
        g0_aut_order: base.initial_verification.as_ref().map(|r| r.aut_order),
        passed: g0_ok && sequences.iter().all(|s| s.passed),
        sequences,
    })
}

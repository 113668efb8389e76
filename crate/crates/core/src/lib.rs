//! Graphs whose automorphism groups change in prescribed ways under vertex
//! deletion, the exact automorphism engine that checks them, and a player for
//! the vertex deletion game.

pub mod aut;
pub mod constructions;
pub mod game;
pub mod graph;
pub mod group;
pub mod perm;

pub use aut::{AutError, AutGroup, AutOptions};
pub use game::{build_game, GameConfig, GameError, GameOptions, GameState, Strategy, Transcript};
pub use graph::{Graph, GraphError, Role, VertexId, VertexTag};
pub use group::{FiniteGroup, GroupError, GroupSpec};
pub use perm::Permutation;

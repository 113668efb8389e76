//! Command-line interface and HTTP/JSON session service for the vertex
//! deletion game.

pub mod api;
pub mod cli;
pub mod limits;

pub use limits::Limits;

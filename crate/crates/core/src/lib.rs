//! Strongly stable matchings in bipartite instances with ties.

mod bipartite;
pub mod cli;
pub mod fixed_edge;
pub mod instance;
pub mod matching;
pub mod maxseq;
mod scc;
pub mod lattice;
pub mod oracle;
pub mod representation;
pub mod rotations;
pub mod solver;

pub use instance::{generate_random, parse_instance, serialize_instance, Edge, EdgeId, GenParams, Instance, ParseError};
pub use matching::{format_matching, parse_matching, Matching, MatchingError, Signature};
pub use solver::{blocking_edges, man_optimal, woman_optimal, BlockingReport, NoSolution};

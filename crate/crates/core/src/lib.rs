//! Rectilinear planarity testing and drawing for plane series-parallel graphs.

pub mod builder;
pub mod error;
pub mod generate;
pub mod graph;
pub mod interval;
pub mod json;
pub mod layout;
pub mod oracle;
pub mod spq;
pub mod term;
pub mod tester;

pub use error::{Error, Result};
pub use generate::{all_terms, gen_random_spterm, gen_random_spterm_with, GenParams};
pub use graph::{to_plane_graph, Corner, EdgeId, FaceId, Faces, NodeId, PlaneGraph, VertexId};
pub use interval::{HalfInt, HalfIntInterval};
pub use json::{graph_from_json, graph_to_json, term_from_json, term_to_json, ImportedGraph};
pub use spq::{build_spq_tree, choose_reference_edge, Rooted, SpqTree};
pub use term::{parse_spterm, SpTerm};
pub use tester::{test, Outcome, RejectReason, Verdict};

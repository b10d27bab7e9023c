//! Born machine circuit construction: rotation layers, CNOT entangling
//! layers, Chow-Liu derived layers and embedding into hardware coupling
//! graphs.

mod chow_liu;
mod circuit;
mod embed;
mod entangler;
mod graph;

pub use chow_liu::{chow_liu_layer, pairwise_mutual_information, ChowLiuLayer};
pub use circuit::{build_circuit, CircuitSpec, Gate, RotationLayer};
pub use embed::{brute_force_embedding, embed_edges, embed_layer};
pub use entangler::{entangler_dc2, entangler_dc4, Cnot, EntanglerLayer, SUB_COVERING_NS};
pub use graph::CouplingGraph;

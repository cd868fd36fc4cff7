//! Reverse-square Hamiltonian cycles in dense digraphs.
//!
//! The crate implements the absorption-method construction at desk scale:
//! connecting cascades, absorber families and absorbing paths, a certified
//! reservoir, a greedy reverse-square path cover, and the assembly that ties
//! them together into a verified cycle. Small-instance brute-force oracles in
//! [`oracle`] serve as ground truth.

pub mod absorbing;
pub mod connecting;
pub mod constants;
pub mod digraph;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod pathcover;
pub mod pipeline;
pub mod reservoir;
pub mod rng;

pub use digraph::{Arc, Digraph, RsCycle, RsPath, VertexSet};
pub use error::{Error, Result};

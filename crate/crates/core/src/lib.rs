//! Constructions and an independent verifier for decompositions of complete
//! equipartite graphs, complete cyclic multipartite graphs and complete
//! graphs into 2-factors with prescribed cycle types.
//!
//! Every construction returns a [`DecompositionCertificate`]: the host graph
//! description plus an ordered list of role-labelled factors. The
//! [`verify`] module checks certificates without trusting the code that
//! produced them.

pub mod base;
pub mod certificate;
pub mod composition;
pub mod error;
pub mod four_part;
pub mod graph;
pub mod ingredients;
pub mod multivar;
pub mod product;
pub mod quasigroup;
pub mod verify;

pub use certificate::{DecompositionCertificate, Factor, HostKind, HostSpec};
pub use error::{ConstructError, GraphError};
pub use graph::{CycleType, EquipartiteDigraph, PartiteVertex, TwoFactor};

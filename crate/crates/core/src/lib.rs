//! Matroidal networks and scalar-linear network codes.
//!
//! A network is scalar-linearly solvable over a finite field exactly when it
//! is matroidal with respect to a matroid representable over that field. This
//! crate builds both directions of that correspondence at desk scale:
//!
//! * [`field`]: GF(p^l) arithmetic, subfield embeddings, row reduction.
//! * [`matroid`]: uniform, graphic, vector and explicit matroids.
//! * [`network`]: acyclic multigraph networks, global coding vectors,
//!   validation, simulation and an exhaustive solvability search.
//! * [`matroidal`]: network-matroid mappings and the construction of a
//!   matroidal network from a matroid.
//! * [`solver`]: code synthesis from representations, uniform matroids and
//!   graphic matroids, and extraction of a representable matroid from a code.
//! * [`json`]: the interchange formats used by the command-line tool.

pub mod field;
pub mod json;
pub mod matroid;
pub mod matroidal;
pub mod network;
pub mod solver;
mod union_find;

pub use field::{FieldCtx, FieldElem, Matrix};
pub use matroid::{EnumerationCaps, Graph, Matroid};
pub use matroidal::{construct, verify_matroidal, Construction, ConstructionConfig, NetworkMatroidMapping};
pub use network::{GlobalCode, Network};

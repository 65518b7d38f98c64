//! Symmetric chain decompositions of `P × n`, with a focus on the cuboids
//! `P(k, n) = Q_k × n` and decompositions free of taut chains.

pub mod constructions;
pub mod cuboid;
pub mod data_io;
pub mod packet;
pub mod poset;
pub mod scd;
pub mod search;

pub use cuboid::{build_cuboid, ChainProduct, CuboidElement};
pub use poset::{build_chain_poset, build_hypercube, product, ElementId, GradedPoset, PosetError};
pub use scd::{is_taut, validate_scd, Chain, Scd, ValidationReport};

//! Constructive procedures on symmetric chain decompositions.
//!
//! * [`grid_scd`] and [`hypercube_scd`]: canonical decompositions of
//!   rectangles and Boolean lattices.
//! * [`product_lift`] and [`extend_dimension`]: `P × n` to `(P × Q) × n`.
//! * [`shift`]: SCDs of `P × n` to SCDs of `P × m` once both chains are
//!   longer than `rk(P)`.
//! * [`collapse`], [`middle_graph`], [`enumerate_matchings`], [`expand`] and
//!   [`repair`]: moving between `P × rk(P)` and `P × (rk(P) + 1)`.
//! * [`generate`]: taut-free SCDs of every cuboid `P(k, n)` with `k ≥ 5`,
//!   `n ≥ 3`.

use thiserror::Error;

use crate::poset::PosetError;

mod generate;
mod grid;
mod lift;
mod middle;
mod shift;

pub use generate::{generate, Generated};
pub use grid::{grid_chains, grid_scd, hypercube_scd};
pub use lift::{extend_dimension, product_lift};
pub use middle::{
    collapse, enumerate_matchings, expand, has_forbidden_subchain, middle_graph, repair, EdgeMatching,
    MiddleEdge, MiddleGraph,
};
pub use shift::shift;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("grid sides must be positive, got {0} x {1}")]
    EmptyGrid(usize, usize),
    #[error("input is not a valid symmetric chain decomposition: {0}")]
    InvalidInput(String),
    #[error("chain {0} of the input is taut")]
    TautInput(usize),
    #[error("chain length {length} is below rk(P) + 1 = {min}")]
    ChainTooShort { length: usize, min: usize },
    #[error("chain {0} changes P-coordinate inside the middle block")]
    NonVerticalMiddle(usize),
    #[error("base poset must be rank-symmetric with a unique minimum and maximum")]
    NoUniqueExtremes,
    #[error("base poset must have rank at least 1")]
    BaseRankZero,
    #[error("host must be P x {expected}, got P x {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("expected exactly one single-element chain, found {0}")]
    SingletonCount(usize),
    #[error("middle graph is not one maximal path plus loops: {0}")]
    MiddleGraphShape(String),
    #[error("matching is inconsistent with the middle graph: {0}")]
    BadMatching(String),
    #[error("the maximum of P covers {0} element(s); at least 2 are needed")]
    MaxCoversTooFew(usize),
    #[error("no eligible reconnection target for the top element")]
    NoRepairTarget,
    #[error("host is not a cuboid Q_k x n")]
    NotCuboid,
    #[error("cannot extend Q_{from} to the smaller Q_{to}")]
    DimensionShrink { from: usize, to: usize },
    #[error(
        "P({k},{n}) has no symmetric chain decomposition without taut chains: \
         every decomposition of Q_k x n has a taut chain when k <= 4 or n <= 2"
    )]
    OutsideRegion { k: usize, n: usize },
}

/// Full validation of an input SCD, turning findings into an error.
pub(crate) fn require_valid(
    host: &crate::cuboid::ChainProduct,
    scd: &crate::scd::Scd,
) -> Result<crate::scd::ValidationReport, ConstructionError> {
    let report = crate::scd::validate_scd(host, scd);
    if report.is_valid() {
        Ok(report)
    } else {
        Err(ConstructionError::InvalidInput(report.messages.join("; ")))
    }
}

pub(crate) fn require_nontaut(
    host: &crate::cuboid::ChainProduct,
    scd: &crate::scd::Scd,
) -> Result<(), ConstructionError> {
    let report = require_valid(host, scd)?;
    match report.taut_chain_indices.first() {
        Some(&i) => Err(ConstructionError::TautInput(i)),
        None => Ok(()),
    }
}

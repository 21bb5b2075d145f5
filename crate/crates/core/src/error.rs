use thiserror::Error;

use crate::graph::PartiteVertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex ({element},{part}) outside a grid of {parts} parts of size {part_size}")]
    VertexOutOfRange {
        element: u32,
        part: u32,
        part_size: u32,
        parts: u32,
    },
    #[error("loop at {0}")]
    SelfLoop(PartiteVertex),
    #[error("arc {0} -> {1} occurs more than once")]
    DuplicateArc(PartiteVertex, PartiteVertex),
    #[error("antiparallel arcs {0} <-> {1} collapse to one edge")]
    AntiparallelCollapse(PartiteVertex, PartiteVertex),
    #[error("graphs live on different vertex sets: {left:?} vs {right:?}")]
    UniverseMismatch {
        left: (u32, u32, bool),
        right: (u32, u32, bool),
    },
    #[error("part counts differ: {0} vs {1}")]
    PartCountMismatch(u32, u32),
    #[error("vertex {0} is not covered")]
    NotSpanning(PartiteVertex),
    #[error("vertex {vertex} has in-degree {in_degree} and out-degree {out_degree}")]
    DegreeViolation {
        vertex: PartiteVertex,
        in_degree: u32,
        out_degree: u32,
    },
    #[error("arc {0} -> {1} is not in the host")]
    ForeignArc(PartiteVertex, PartiteVertex),
    #[error("input is not a single directed cycle: {0}")]
    NotACycle(String),
    #[error("cannot parse cycle type {0:?}")]
    BadCycleType(String),
}

/// Failure of a construction: a parameter outside the supported range, an
/// unavailable ingredient, or an internal inconsistency caught by the
/// built-in checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("{param}={value} excluded: {reason}")]
    Excluded {
        param: &'static str,
        value: i64,
        reason: String,
    },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no admissible split: {0}")]
    Infeasible(String),
    #[error("unsupported quasigroup order {0}")]
    UnsupportedOrder(u32),
    #[error("ingredient unavailable: {0}")]
    Ingredient(String),
    #[error("vertex count {vertices} exceeds cap {cap}")]
    OverCap { vertices: u64, cap: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl ConstructError {
    pub(crate) fn excluded(
        param: &'static str,
        value: impl TryInto<i64>,
        reason: impl Into<String>,
    ) -> Self {
        Self::Excluded {
            param,
            value: value.try_into().unwrap_or(i64::MAX),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = ConstructError> = std::result::Result<T, E>;

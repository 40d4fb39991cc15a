use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge set contains a cycle through edge ({0}, {1})")]
    CycleDetected(usize, usize),
    #[error("vertex id {id} out of range for order {order}")]
    InvalidVertexId { id: usize, order: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} is not alive")]
    DeadVertex(usize),
    #[error("order {order} exceeds bit-set capacity {capacity}")]
    CapacityExceeded { order: usize, capacity: usize },
    #[error("memo table exceeded its limit of {0} entries")]
    MemoLimitExceeded(usize),
    #[error("component count {c} invalid for order {n}")]
    InvalidComponentCount { n: usize, c: usize },
    #[error("requested size {requested} exceeds cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("strategy {strategy} returned illegal vertex {vertex}")]
    IllegalStrategyMove { strategy: String, vertex: usize },
    #[error("no legal move in an empty state")]
    EmptyState,
    #[error("strategy {0} asked to move out of turn")]
    NotToMove(String),
    #[error("layout does not match forest: {0}")]
    LayoutMismatch(String),
    #[error("strategy {0} is label dependent and cannot be solved under isomorphism collapse")]
    StrategyNotIsoSafe(String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("hypergraph has no hyperedges")]
    EmptyHypergraph,
    #[error("invalid node set {nodes:?}: {reason}")]
    InvalidNodeSet { nodes: alloc::vec::Vec<u32>, reason: &'static str },
    #[error("index {index} out of range for {len} hyperedges")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected a set of cardinality {expected}, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("projection order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("projection order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("projection of order {order} would hold up to {estimated} subsets, budget is {budget}")]
    ProjectionTooLarge { order: usize, estimated: u64, budget: u64 },
    #[error("brute-force projection needs {pairs} facet pairs, bound is {bound}")]
    BruteForceTooLarge { pairs: u128, bound: u128 },
    #[error("malformed projected graph: {0}")]
    MalformedProjection(&'static str),
    #[error("no hyperedges of target size {0} available as positives")]
    EmptyPositives(usize),
    #[error("{name} must lie strictly between 0 and 1, got {value}")]
    InvalidFraction { name: &'static str, value: f64 },
    #[error("candidate set invariant violated: {0}")]
    CandidateInvariant(String),
    #[error("cannot split: {class} class has {count} members, need at least 2")]
    SplitTooSmall { class: &'static str, count: usize },
    #[error("non-finite {feature} value for candidate {candidate:?}")]
    NonFiniteFeature { feature: &'static str, candidate: alloc::vec::Vec<u32> },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("AUC-PR is undefined when all labels belong to one class")]
    UndefinedMetric,
    #[error("Pearson correlation is undefined for zero-variance input")]
    UndefinedCorrelation,
    #[error("percent gain is undefined for a zero baseline")]
    UndefinedGain,
}

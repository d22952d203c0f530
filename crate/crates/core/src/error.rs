use thiserror::Error;

/// Every failure the library reports. Domain errors only; bugs panic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IlaError {
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("composition leaves an empty index set")]
    NullSubexpression,
    #[error("rename is not a bijection: {0}")]
    BadRename(String),
    #[error("bad block partition: {0}")]
    BadPartition(String),
    #[error("not a generalized operator")]
    NotGenop,
    #[error("genaut is not an upper semi genop")]
    NotUsg,
    #[error("seed is not contained in V∘Ẇ")]
    BadSeed,
    #[error("cap does not contain V×W")]
    BadCap,
    #[error("subspace is not invariant: {0}")]
    NotInvariant(String),
    #[error("target is not reachable by feedback: {0}")]
    NotReachableByFeedback(String),
    #[error("target is not reachable by injection: {0}")]
    NotReachableByInjection(String),
    #[error("operator is already a genop; nothing to place")]
    NothingToPlace,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("target polynomial lacks the fixed factor {factor}")]
    UnplaceableFactor { factor: String },
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("edge set contains a circuit: {0}")]
    NotAForest(String),
    #[error("pair does not link the two systems")]
    NotLinked,
    #[error("transfer hypotheses fail: {0}")]
    TransferConditionsFail(String),
    #[error("ill-posed network: {0}")]
    IllPosedNetwork(String),
    #[error("singular static multiport: {0}")]
    SingularStatic(String),
    #[error("parse error at {line}:{column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("duplicate device {0}")]
    DuplicateDevice(String),
    #[error("internal certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, IlaError>;

use thiserror::Error;

/// Errors shared by all model kinds and conversions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("universe mismatch: expected variables {expected:?}, got {found:?}")]
    UniverseMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("duplicate variable name `{0}` in universe")]
    DuplicateVariable(String),

    /// Raised wherever a monotone Boolean function is required. Cut sets are
    /// only defined for monotone functions; FTs do not support a NOT function.
    #[error("function is not monotone: FTs do not support a NOT function")]
    NonMonotoneFunction,

    #[error("function is true under the all-zero assignment; it has no minimal cut sets")]
    TrivialFunction,

    #[error("probability {value} for `{name}` is outside [0, 1]")]
    ProbabilityOutOfRange { name: String, value: f64 },

    #[error("{count} variables exceed the exhaustive-operation cap of {max}")]
    TooManyVariables { count: usize, max: usize },

    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("duplicate definition of `{0}`")]
    DuplicateDefinition(String),

    #[error("unresolved reference to `{0}`")]
    UnresolvedReference(String),

    #[error("cycle detected through `{0}`")]
    CycleDetected(String),

    #[error("no toplevel declaration found")]
    MissingTop,

    #[error("node `{0}` is not reachable from the top event")]
    UnreachableDefinition(String),

    #[error("bad arity for gate `{gate}`: {msg}")]
    BadArity { gate: String, msg: String },

    /// Gate-formula probability requires a tree-shaped FT: per-gate
    /// independence breaks as soon as a node feeds two parents.
    #[error("node `{0}` is shared by more than one parent; gate formulas require a tree-shaped FT (use the BDD method instead)")]
    SharedEvent(String),

    #[error("dataset must contain at least one row")]
    EmptyDataset,

    #[error("BDD ordering violated: node at level {level} may only have children at strictly greater levels")]
    OrderViolation { level: usize },

    #[error("BDD references belong to different managers")]
    ManagerMismatch,

    #[error("variable order mismatch: expected {expected:?}, got {found:?}")]
    OrderMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("cut set collection is empty; cannot build a fault tree")]
    EmptyCutSets,

    #[error("no probability supplied for variable `{0}`")]
    MissingProbability(String),
}

pub type Result<T> = std::result::Result<T, Error>;

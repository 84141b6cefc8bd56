use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("instance document: {0}")]
    Schema(String),

    #[error("duplicate id '{id}' in {set}")]
    DuplicateId { set: String, id: String },

    #[error("{location}: {message}")]
    InvalidValue { location: String, message: String },

    #[error("{location}: unknown {kind} '{id}'")]
    UnknownReference {
        location: String,
        kind: &'static str,
        id: String,
    },

    #[error("non-finite coordinate ({lat}, {lon})")]
    NonFiniteCoordinate { lat: f64, lon: f64 },

    #[error("echelon chain position '{0}' has no members")]
    EmptyChainPosition(String),

    #[error("no transport cost given for material '{0}', which has flow columns")]
    MissingTransportCost(String),

    #[error("name '{name}' is produced by more than one {what}")]
    NameCollision { what: &'static str, name: String },

    #[error("name '{0}' is not a valid MPS identifier")]
    InvalidName(String),

    #[error("solution line {line}: {message}")]
    SolutionFormat { line: usize, message: String },

    #[error("oracle refused: {0}")]
    OracleLimit(String),

    #[error("simplex hit the iteration limit of {0} pivots")]
    IterationLimit(usize),

    #[error("external solver: {0}")]
    ExternalSolver(String),

    #[error("cost breakdown total {breakdown} does not reconcile with objective {objective}")]
    Reconciliation { breakdown: f64, objective: f64 },

    #[error("generator spec: {0}")]
    GenSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

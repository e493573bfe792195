use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("edge `{edge}` refers to undeclared vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("duplicate edge identifier `{0}`")]
    DuplicateEdge(String),
    #[error("duplicate vertex identifier `{0}`")]
    DuplicateVertex(String),
    #[error("terminal `{0}` is not a declared vertex")]
    UnknownTerminal(String),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("unknown edge identifier `{0}`")]
    UnknownEdge(String),
    #[error("at least two terminals are required, got {0}")]
    TooFewTerminals(usize),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("threshold is infinite for k = {0}")]
    ThresholdAbsent(usize),
    #[error("edge pair is not a minimum cut of the cactus")]
    UnknownPair,
    /// A structural claim about minimum cuts failed to hold. Seeing this
    /// means either a bug or an input outside the supported model.
    #[error("structural failure: {0}")]
    Structural(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

macro_rules! structural {
    ($($arg:tt)*) => {
        $crate::error::Error::Structural(format!($($arg)*))
    };
}
pub(crate) use structural;

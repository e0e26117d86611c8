use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0}: simple graphs have no loops")]
    Loop(usize),

    #[error("a graph needs at least one vertex")]
    NoVertices,

    #[error("malformed graph6: {0}")]
    Graph6(String),

    #[error("graph6 short form supports at most 62 vertices, got {0}")]
    Graph6TooLarge(usize),

    #[error("edge probability {0} is outside [0, 1]")]
    Probability(f64),

    #[error(
        "enumeration budget exceeded: C({n}, {k}) = {subsets} subsets exceeds the budget of {budget}; \
         use Monte Carlo estimation (mc_event) instead"
    )]
    BudgetExceeded {
        n: usize,
        k: usize,
        subsets: String,
        budget: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("catalog line {line}: expected a graph on {expected} vertices, found {found}")]
    CatalogVertexCount {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("geometric parameter p_{0} equals 1, the sum diverges")]
    Divergent(usize),

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    File {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Attaches `path` to an I/O error.
pub(crate) fn file_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::File {
        path: path.to_path_buf(),
        source,
    }
}

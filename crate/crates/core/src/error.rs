use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("digraph has a loop at vertex {0}")]
    LoopPresent(usize),
    #[error("size budget exceeded for {what}: reached {reached}, limit {limit}")]
    SizeBudgetExceeded {
        what: &'static str,
        reached: usize,
        limit: usize,
    },
    #[error("poset elements carry no subset labels")]
    MissingLabels,
    #[error("digraph is not symmetric: arc ({0},{1}) has no reverse")]
    NotSymmetric(usize, usize),
    #[error("b({n},{k}) is not available within the budget")]
    TableIncomplete { n: usize, k: usize },
    #[error("b-table mismatch for ({n},{k}): cached {cached}, computed {computed}")]
    TableMismatch {
        n: usize,
        k: usize,
        cached: usize,
        computed: usize,
    },
    #[error("retraction map failed validation: {0}")]
    RetractionInvalid(String),
    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("unsupported size {n} for generator {kind}")]
    UnsupportedSize { kind: &'static str, n: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::SizeBudgetExceeded { .. } | Error::TableIncomplete { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

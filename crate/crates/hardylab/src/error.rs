use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    /// Bad user input: unparsable sequence entries, out-of-range parameters.
    #[error("input error: {0}")]
    Input(String),
    /// A series that does not converge for the requested parameters.
    #[error("divergent: {0}")]
    Divergent(String),
    /// A tail that cannot be closed in finite form for the given weight.
    #[error("tail not computable: {0}")]
    TailNotComputable(String),
    /// An internal cross-check failed; indicates a bug, not bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("subcritical: no {k}-core for c = {c} (c_k = {ck:.6})")]
    Subcritical { k: usize, c: f64, ck: f64 },
    #[error("supercritical: c = {c} >= c_k = {ck:.6} for k = {k}, the peeling sequence does not vanish")]
    Supercritical { k: usize, c: f64, ck: f64 },
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("edge ({u}, {v}) has an endpoint outside [0, {n})")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("degree sum {0} is odd")]
    OddDegreeSum(usize),
    #[error("no simple graph after {tries} configuration draws")]
    RejectionExhausted { tries: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("protocol violation by {player}: {reason}")]
    Protocol { player: String, reason: String },
    #[error("board has {edges} edges; exhaustive search is limited to {limit}")]
    BoardTooLarge { edges: usize, limit: usize },
    #[error("domain error: {0}")]
    Domain(String),
}

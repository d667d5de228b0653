use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },

    #[error("({u},{v}) is not an edge")]
    NotAnEdge { u: u32, v: u32 },

    #[error("graph too small: need n >= {min}, got {n}")]
    GraphTooSmall { n: usize, min: usize },

    #[error("invalid k = {k}: expected 2 <= k <= {max} (floor(log2 n) for this graph)")]
    InvalidK { k: u32, max: u32 },

    #[error("level {level} out of range (levels 0..{levels})")]
    LevelOutOfRange { level: usize, levels: usize },

    #[error("dimension mismatch: matrix has n = {matrix_n}, graph has n = {graph_n}")]
    DimensionMismatch { matrix_n: usize, graph_n: usize },

    #[error("({s},{t}) is disconnected; no witness path exists")]
    DisconnectedPair { s: u32, t: u32 },

    #[error("run output is missing the {0:?} snapshot (run with snapshot_phases)")]
    MissingSnapshot(String),

    #[error("malformed edge-list input: {0}")]
    Parse(String),

    #[error("malformed matrix dump: {0}")]
    BadDump(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use std::io;

use thiserror::Error;

use crate::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range (graph has {vertex_count} vertices)")]
    VertexOutOfRange { vertex: u64, vertex_count: usize },

    #[error("landmark count {requested} out of range 1..={vertex_count}")]
    LandmarkCount { requested: usize, vertex_count: usize },

    #[error("landmark rank {rank} out of range (labelling has {landmarks} landmarks)")]
    RankOutOfRange { rank: usize, landmarks: usize },

    #[error("vertex {0} is a landmark; this operation needs a non-landmark endpoint")]
    LandmarkEndpoint(VertexId),

    #[error("landmark {0} listed twice")]
    DuplicateLandmark(VertexId),

    #[error("landmark sets differ between labellings")]
    LandmarkMismatch,

    #[error("vertex insertion needs at least one attachment")]
    EmptyAttachment,

    #[error("workload: {0}")]
    Workload(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn out_of_range(vertex: impl Into<u64>, vertex_count: usize) -> Self {
        Error::VertexOutOfRange { vertex: vertex.into(), vertex_count }
    }
}

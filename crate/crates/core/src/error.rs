use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid roadmap: {0}")]
    InvalidRoadmap(String),

    #[error("roadmap is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("edge {u}-{v} has non-positive length {length}")]
    NonPositiveLength { u: String, v: String, length: f64 },

    #[error(
        "triangle inequality violated: edge {u}-{v} has length {length} but {u}-{via}-{v} has length {detour}"
    )]
    TriangleInequality {
        u: String,
        via: String,
        v: String,
        length: f64,
        detour: f64,
    },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    /// The request cannot be served for this instance size (for example `m >= n`).
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance exceeds size limit: {0}")]
    SizeLimit(String),
}

impl Error {
    /// Errors the caller should treat as "input is valid but cannot be served".
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible(_) | Error::SizeLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

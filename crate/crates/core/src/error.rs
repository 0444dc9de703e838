use std::path::PathBuf;

use thiserror::Error;

use crate::paving::BoxId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid barycentric coordinates {0:?}")]
    InvalidBarycentric([f64; 4]),
    #[error("face index {0} out of range 0..=3")]
    FaceOutOfRange(usize),
    #[error("direction {0} out of range 1..=2")]
    DirectionOutOfRange(usize),
    #[error("cannot differentiate a degree 0 patch")]
    DegreeZero,
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("edge lengths must be positive, got {0:?}")]
    NonPositiveEdgeLength([f64; 3]),
    #[error("resolution {0} is not a power of two >= 1")]
    InvalidResolution(u64),
    #[error("box {id} is not valid at resolution {n}")]
    InvalidBox { id: BoxId, n: u32 },
    #[error("cuboid does not intersect the plane z = {0}")]
    NotIntersecting(f64),
    #[error("plane z values must be finite and strictly increasing (index {0})")]
    UnsortedPlanes(usize),
    #[error("iterator advanced after it became invalid")]
    InvalidIterator,
    #[error("{path}: parse error at line {line}, column {column}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("mesh map #{index} (id {id}): {msg}")]
    InvalidMap { index: usize, id: u32, msg: String },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("sink rejected output: {0}")]
    Sink(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

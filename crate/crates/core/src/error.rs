use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid rational literal `{0}`")]
    Rational(String),
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("malformed state expression `{expr}`: {reason}")]
    State { expr: String, reason: String },
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("form matrix is {rows}x{cols} but the algebra has dimension {dim}")]
    FormShape { dim: usize, rows: usize, cols: usize },
    #[error("basis has {names} names but dim = {dim}")]
    BasisNames { dim: usize, names: usize },
    #[error("bracket entry refers to index {index} outside 0..{dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension must be positive")]
    EmptyAlgebra,
    #[error("basis name `{0}` is reserved or duplicated")]
    BadName(String),
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("fields #{a} and #{b} are not local up to order {bound} on the window")]
    NotLocal { a: u64, b: u64, bound: u32 },
    #[error("mode sum for field #{handle} needs {needed} terms, above the termination bound {bound}")]
    TerminationBound { handle: u64, needed: i64, bound: i64 },
    #[error("derivation direction {dir} out of range 0..={rank}")]
    Direction { dir: usize, rank: usize },
    #[error("mode window is empty")]
    EmptyWindow,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VertexError {
    #[error("state has a component outside the vacuum ideal (tail {0}); its x-support is infinite")]
    NotInVacuumIdeal(String),
    #[error("state is not homogeneous for the t-multidegree")]
    Inhomogeneous,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{context}: {message}")]
    Json { context: String, message: String, line: usize, column: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl ConfigError {
    pub fn from_json(context: impl Into<String>, e: serde_json::Error) -> Self {
        ConfigError::Json {
            context: context.into(),
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        }
    }
}

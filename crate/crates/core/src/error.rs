use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grading: {0}")]
    InvalidGrading(String),

    #[error("root index {index} out of range 1..={rank}")]
    RootIndexOutOfRange { index: usize, rank: usize },

    #[error("simple root {0} is even (p_b p_(b+1) = +1); odd reflection needs an odd root")]
    EvenRoot(usize),

    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("evaluation at a pole")]
    Pole,

    #[error("pole of order {order} at the requested point; only simple poles are handled")]
    HigherOrderPole { order: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid skew shape: {0}")]
    InvalidShape(String),

    #[error("tableau entry {entry} outside 1..={max}")]
    EntryOutOfRange { entry: usize, max: usize },

    #[error("shape has {cells} cells, above the enumeration cap of {cap}")]
    ShapeTooLarge { cells: usize, cap: usize },

    #[error("requested T-function index ({a}, {m}) outside the grid bounds ({a_max}, {m_max})")]
    BoundExceeded {
        a: usize,
        m: usize,
        a_max: usize,
        m_max: usize,
    },

    #[error("color {color} expects {expected} roots, got {got}")]
    RootCountMismatch {
        color: usize,
        expected: usize,
        got: usize,
    },

    #[error("system has {total} Bethe roots, above the solver cap of {cap}")]
    SystemTooLarge { total: usize, cap: usize },

    #[error("root collision: {0}")]
    RootCollision(String),

    #[error("overlapping pole locations: {0}")]
    OverlappingPoles(String),

    #[error("particle-hole matching failed: {0}")]
    MatchingFailure(String),

    #[error("the f-polynomial is identically zero")]
    ZeroFPolynomial,

    #[error("json: {0}")]
    Json(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot mix {left} and {right} scalars in one computation")]
    ModeMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("float precision must be at least 64 bits, got {0}")]
    PrecisionTooLow(u32),

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: String },

    #[error("coordinate <{r},{d},{e}> is outside a {n}-grid")]
    OutOfRange {
        n: usize,
        r: usize,
        d: usize,
        e: usize,
    },

    #[error("grid sizes differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{function}{args} is outside the domain of the function")]
    Domain {
        function: &'static str,
        args: String,
    },

    #[error("a grid must have at least {min} rows, got {n}")]
    TooFewRows { n: usize, min: usize },

    #[error("grid is not isotropic; use the Laplacian oracle for its corner resistance")]
    NotSymmetric,

    #[error("corner tails differ while reducing the {m}-grid: {detail}")]
    TailAsymmetry { m: usize, detail: String },

    #[error("symmetries leave {missing} triangles undetermined")]
    Underdetermined { missing: usize },

    #[error("operation needs exact arithmetic")]
    ExactModeRequired,

    #[error("resistor network is disconnected")]
    Singular,

    #[error("malformed grid document: {0}")]
    Document(String),

    #[error("cannot parse {kind} from {input:?}")]
    Parse { kind: &'static str, input: String },

    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

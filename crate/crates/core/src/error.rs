use thiserror::Error;

/// Errors produced by the arithmetic, construction and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right} (lift both operands to a common modulus first)")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("modulus {0} is outside the supported range 1..=64")]
    ModulusOutOfRange(u64),

    #[error("cannot lift modulus {from} to {to}: {from} does not divide {to}")]
    NotDivisible { from: u32, to: u32 },

    #[error("coefficient vector has length {len}, expected the modulus {modulus}")]
    CoefficientLength { modulus: u32, len: usize },

    #[error("integer coefficient bound exceeded during {0}")]
    CoefficientOverflow(&'static str),

    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("sequence length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("zone width {z} outside 1..={len}")]
    ZoneOutOfRange { z: usize, len: usize },

    #[error("not a unimodular code set: {0}")]
    NotUnimodular(String),

    #[error("not a Butson-type Hadamard matrix: {0}")]
    NotBh(String),

    #[error("unknown BH matrix {name:?}; catalog: {catalog}")]
    UnknownBh { name: String, catalog: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error{}: {field}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        field: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

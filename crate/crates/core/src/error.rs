use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{h} exceeds the 2^20 cap")]
    FieldTooLarge { p: u32, h: u32 },
    #[error("no modulus bundled for GF({p}^{h})")]
    MissingModulus { p: u32, h: u32 },
    #[error("malformed modulus fixture line {line}: {reason}")]
    Fixture { line: usize, reason: String },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("degree {sub} does not divide {h}")]
    NotSubfield { sub: u32, h: u32 },
    #[error("field GF({p}^{h}) is not of Suzuki shape (p = 2, h odd)")]
    NotSuzukiField { p: u32, h: u32 },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("size cap exceeded: {what} ({size} > {cap})")]
    CapExceeded { what: String, size: u128, cap: u128 },
    #[error("{orbit_len} does not divide group order {group_order}")]
    OrbitNotDividing { group_order: u128, orbit_len: u128 },
    #[error("unsupported parameters for {family}: {reason}")]
    UnsupportedParams { family: String, reason: String },
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("block is not closed under addition ({0})")]
    NotClosed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("block size {0} is not a power of the characteristic")]
    NotPrimePower(usize),
    #[error("pair counts are not uniform: pair {pair:?} lies in {count} blocks, expected {expected}")]
    Nonuniform { pair: (u32, u32), count: u64, expected: u64 },
    #[error("tactical ratio violated on an orbit of length {orbit}: {meet} points in the block")]
    TacticalRatio { orbit: usize, meet: usize },
    #[error("translation stabilizer bound violated: m = {m}, t = {t}, f = {f}")]
    CiciBound { m: u32, t: u32, f: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog entry {0}")]
    UnknownEntry(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different fields ({0} vs {1})")]
    MixedFields(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("the literal `z` is only available over GF(4) and Q(zeta3) (at byte {pos})")]
    FieldMismatch { pos: usize },
    #[error("factor {factor} is not a linear form: {msg}")]
    NonLinearFactor { factor: usize, msg: String },
    #[error("factor {factor} is the zero form")]
    ZeroFactor { factor: usize },
    #[error("factors {first} and {second} define the same hyperplane")]
    DuplicateHyperplane { first: usize, second: usize },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("field specification is invalid: {0}")]
    BadField(String),
    #[error("the arrangement is empty")]
    EmptyArrangement,
    #[error("not a flat of the arrangement")]
    NotAFlat,
    #[error("not a partition of the arrangement: {0}")]
    NotAPartition(String),
    #[error("pivot {pivot} is not a hyperplane of the partition")]
    PivotNotInBlock { pivot: usize },
    #[error("partition is not nice")]
    NotNice,
    #[error("not a maximal chain of modular flats: {0}")]
    NotAModularChain(String),
    #[error("bad hyperplane order: {0}")]
    BadOrder(String),
    #[error("bad seed: {0}")]
    BadSeed(String),
    #[error("index set is not strictly increasing")]
    NotSorted,
    #[error("index {0} is out of range")]
    OutOfRange(usize),
    #[error("{what} exceeds the cap ({count} > {cap})")]
    CapExceeded { what: &'static str, count: u128, cap: u128 },
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// True for errors caused by a computation cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

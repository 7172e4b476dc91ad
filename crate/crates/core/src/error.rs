use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported (odd primes only)")]
    UnsupportedCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("modulus has length {got}, expected {expected}")]
    ModulusLength { expected: usize, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus {0:?} is reducible")]
    Reducible(Vec<u32>),
    #[error("coefficient {value} out of range for p = {p}")]
    CoefficientOutOfRange { value: u64, p: u32 },
    #[error("element does not belong to this field context")]
    CtxMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the class of x does not generate the multiplicative group")]
    NotPrimitive,
    #[error("{s} does not divide the extension degree {m}")]
    NotADivisor { s: usize, m: usize },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("field of size {size} exceeds the configured bound {bound}")]
    TooLarge { size: u64, bound: u64 },
    #[error("parameter a lies in the prime field")]
    AInPrimeField,
    #[error("b must be nonzero")]
    BZero,
    #[error("extension degree {0} is too small (need m >= 3)")]
    DegreeTooSmall(usize),
    #[error("a does not satisfy a quadratic relation over F_p with nonzero constant term")]
    NoQuadraticRelation,
    #[error("closed form did not reduce to an integer: {0}")]
    NonIntegerFormula(String),
    #[error("predicted frequency is not an integer: {0}")]
    NonIntegerFrequency(String),
    #[error("predicted frequency is negative: {0}")]
    NegativeFrequency(String),
    #[error("distinct parameters produced equal codewords (kernel of size {kernel})")]
    DimensionMismatch { kernel: u64 },
    #[error("vectors do not form a basis")]
    NotABasis,
    #[error("moment equations have no nonnegative integer solution: {0}")]
    InconsistentMoments(String),
    #[error("no prediction available outside the theorem hypotheses: {0}")]
    OutOfRegime(String),
    #[error("weight distribution has no nonzero weight")]
    EmptyCode,
    #[error("generator columns are not pairwise non-proportional")]
    NotProjective,
    #[error("sum-set budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("not a sum set: h = {h:?} has {count} representations, expected {expected}")]
    NotASumSet {
        h: Vec<u32>,
        count: u64,
        expected: u64,
    },
    #[error("expected a three-weight code, found {0} nonzero weights")]
    NotThreeWeight(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Config(String),
}

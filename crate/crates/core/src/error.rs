use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not supported; use an odd prime")]
    EvenPrime,
    #[error("invalid ring parameters: {0}")]
    InvalidDescriptor(String),
    #[error("modulus is not irreducible modulo p")]
    ReducibleModulus,
    #[error("operands live over different ring descriptors")]
    DescriptorMismatch,
    #[error("element is not a unit")]
    NonUnit,
    #[error("residue is zero")]
    ZeroResidue,
    #[error("{0} does not divide {1}")]
    NotDivisor(u64, u64),
    #[error("truncation or domain mismatch: {0}")]
    Mismatch(String),
    #[error("series has nonzero constant term")]
    NonZeroConstant,
    #[error("linear coefficient is not a unit")]
    NonUnitLinear,
    #[error("Weierstrass degree exceeds truncation {0}")]
    NoUnitCoefficient(usize),
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("first unit coefficient of [p] sits at index {0}, which is not a power of p")]
    HeightIndex(usize),
    #[error("integrality failure at degree {0}")]
    Integrality(usize),
    #[error("degree-by-degree solve did not converge: {0}")]
    NonConvergence(String),
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("Newton polygon check failed: {0}")]
    Polygon(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("group-law axiom failed: {0}")]
    Axiom(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

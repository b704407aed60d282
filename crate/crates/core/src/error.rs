use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("invalid exponent {0}: expected a positive precision")]
    InvalidExponent(u32),
    #[error("{value} is not invertible modulo {p}^{k}")]
    NotInvertible { value: String, p: u64, k: u32 },
    #[error("{value} is not a unit modulo {p}")]
    NotAUnit { value: String, p: u64 },
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("character sum did not reduce to a rational number")]
    NonRationalResult,
    #[error("character sum is not an integer multiple of the expected denominator")]
    NonIntegerResult,
    #[error("Taylor system for G1/G2 is inconsistent at x = {0}")]
    SingularSystem(String),
    #[error("precision p^{k} is outside the supported range {min}..={max}")]
    Precision { k: u32, min: u32, max: u32 },
    #[error("binomial forms with half-integer l = (n+1)/2 are not defined (n = {0})")]
    EvenNUnsupported(u64),
    #[error("p = {p} exceeds the oracle guard p <= {limit}")]
    OracleGuard { p: u64, limit: u64 },
    #[error("requires p >= {min}, got p = {p}")]
    PrimeTooSmall { p: u64, min: u64 },
    #[error("Gamma table for modulus {0} exceeds the desk-scale size limit")]
    TableTooLarge(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
}

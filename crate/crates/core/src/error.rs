use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} lies outside the {domain} domain")]
    IndexOutsideDomain { index: i64, domain: &'static str },
    #[error("weight undefined at index {0}")]
    UndefinedAt(i64),
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: i64, hi: i64 },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid input: {0}")]
    InvalidSpec(String),
    #[error("orbit of {point} leaves the window after {steps} steps")]
    BoundaryEscape { point: i64, steps: u64 },
    #[error("weight sequence is unbounded; the operator is not well-defined")]
    UnboundedWeight,
    #[error("weight sequence has a zero weight; use the general analyzer")]
    ZeroWeight,
    #[error("Köthe matrix has zero entries, outside the characterization's scope")]
    ZeroKotheEntry,
    #[error("could not extend the witness construction at level {level}: {reason}")]
    CertificateExhausted { level: u32, reason: String },
    #[error("horizon {horizon} is too small for the first checkpoint at step {needed}")]
    HorizonTooSmall { horizon: u64, needed: u64 },
    #[error("pair scalars must differ")]
    IdenticalScalars,
    #[error("certificate replay failed: {0}")]
    ReplayFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

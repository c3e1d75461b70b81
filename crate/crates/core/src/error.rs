use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Every failure the numerics can report. The variant name is part of the
/// message so front-ends can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("InvalidInput: {0}")]
    InvalidInput(&'static str),
    #[error("DegenerateInterval: [{lo}, {hi}] has no interior")]
    DegenerateInterval { lo: f64, hi: f64 },
    #[error("EmptyInterval: [{lo}, {hi}] is empty")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("OutOfDomain: {value} lies outside [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    #[error("OutOfRange: value {value} is not attained")]
    OutOfRange { value: f64 },
    #[error("NotBracketed: target {target} is outside the tabulated range")]
    NotBracketed { target: f64 },
    #[error("NewtonDivergence: stage solve failed at t = {t}")]
    NewtonDivergence { t: f64 },
    #[error("BlowUp: |y| exceeded {threshold:e} at t = {t}")]
    BlowUp { t: f64, threshold: f64 },
    #[error("SourceNotZero: the identity holds for the homogeneous equation only")]
    SourceNotZero,
    #[error("NotLinear: f and g must be linear with the requested slopes")]
    NotLinear,
    #[error("NotPeriodic: the source has no forcing frequency")]
    NotPeriodic,
    #[error("ContourThroughRoot: contour hits a root near {re} + {im}i")]
    ContourThroughRoot { re: f64, im: f64 },
    #[error("VerificationMismatch: analytic label {analytic} but roots indicate {computed}")]
    VerificationMismatch {
        analytic: &'static str,
        computed: &'static str,
    },
    #[error("HypothesisViolated: {0}")]
    HypothesisViolated(&'static str),
    #[error("NotCoprime: gcd({p}, {q}) = {gcd}")]
    NotCoprime { p: u64, q: u64, gcd: u64 },
    #[error("DivisorBelowFloor: |H(i k omega)| = {modulus:e} at k = {k}")]
    DivisorBelowFloor { k: i64, modulus: f64 },
    #[error("ShootingDivergence: period map did not converge after {iterations} iterations (defect {defect:e})")]
    ShootingDivergence { iterations: usize, defect: f64 },
    #[error("ContractionFailed: no convergence after {iterations} iterations (last step {last_step:e})")]
    ContractionFailed { iterations: usize, last_step: f64 },
}

impl Error {
    /// Variant name, for exit-status mapping and reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::DegenerateInterval { .. } => "DegenerateInterval",
            Error::EmptyInterval { .. } => "EmptyInterval",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::NotBracketed { .. } => "NotBracketed",
            Error::NewtonDivergence { .. } => "NewtonDivergence",
            Error::BlowUp { .. } => "BlowUp",
            Error::SourceNotZero => "SourceNotZero",
            Error::NotLinear => "NotLinear",
            Error::NotPeriodic => "NotPeriodic",
            Error::ContourThroughRoot { .. } => "ContourThroughRoot",
            Error::VerificationMismatch { .. } => "VerificationMismatch",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::DivisorBelowFloor { .. } => "DivisorBelowFloor",
            Error::ShootingDivergence { .. } => "ShootingDivergence",
            Error::ContractionFailed { .. } => "ContractionFailed",
        }
    }
}

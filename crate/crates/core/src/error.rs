use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be a positive finite rate, got {value}")]
    NonPositiveRate { name: &'static str, value: f64 },
    #[error("batch size must be at least 1")]
    ZeroBatchSize,
    #[error("truncation size {got} is too small, need at least {need}")]
    TruncationTooSmall { need: usize, got: usize },
    #[error("root solver did not converge at z = {re} + {im}i")]
    RootSolveFailure { re: f64, im: f64 },
    #[error("t = {t} is not inside the open arm (0, {a})")]
    NotOnOpenArm { t: f64, a: f64 },
    #[error("no conjugate pair of dominant roots at t = {t}")]
    NoConjugatePair { t: f64 },
    #[error("closed-form denominator {value:e} is below the singularity threshold")]
    NearSingularConfiguration { value: f64 },
    #[error("could not isolate the zeros of h_{n}")]
    ZeroFindingFailure { n: usize },
    #[error("z lies inside the Gershgorin region of the operator")]
    InsideSupport,
    #[error("truncation did not converge up to size {size} (last change {change:e})")]
    TruncationNotConverged { size: usize, change: f64 },
    #[error("quadrature did not converge (error estimate {estimate:e})")]
    QuadratureNotConverged { estimate: f64 },
    #[error("a pole of the resolvent lies on the star at {re} + {im}i")]
    PoleOnStar { re: f64, im: f64 },
    #[error("tail bound {bound:e} exceeds 1e-8; enlarge the truncation")]
    TailNotControlled { bound: f64 },
    #[error("Picard iteration stopped at k = {k} with increment {increment:e}")]
    IterationBudgetExceeded { k: usize, increment: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The normalization unit κ₂ was zero.
    #[error("kappa2 must be nonzero (it is the unit of every rate)")]
    ZeroUnit,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    /// The requested coupling lies in the inaccessible region (Δ₁² < 0).
    #[error("infeasible coupling g1 = {g1}: the mechanical-gain family needs g1 >= {g1_min}")]
    Infeasible { g1: f64, g1_min: f64 },
    #[error("characteristic coefficients are not real (max |Im| = {max_imag:e}); classification needs a pseudo-Hermitian spectrum")]
    ComplexCoefficients { max_imag: f64 },
    #[error("discriminant does not change sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("A and B vanish at {at}: the bracket contains an EP3, not an EP2")]
    Ep3InsideBracket { at: f64 },
    #[error("log-log fit quality r^2 = {r_squared} is below 0.99")]
    FitQuality { r_squared: f64 },
    #[error("time step too large: dt*|H| = {0} (must be < 0.1)")]
    StepTooLarge(f64),
    #[error("window [{t0}, {t1}] lies outside the trajectory")]
    Range { t0: f64, t1: f64 },
}

impl Error {
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_))
    }
}

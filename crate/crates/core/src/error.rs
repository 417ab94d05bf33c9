use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("insufficient sample: need at least {needed} observations, got {got}")]
    InsufficientSample { needed: usize, got: usize },

    #[error("degenerate sample: empirical variance is zero")]
    DegenerateSample,

    #[error("non-finite observation at index {0}")]
    NonFinite(usize),

    #[error("parameter {name} = {value} out of range ({range})")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("moment order {0} is outside the supported range")]
    MomentOrder(usize),

    #[error("non-positive asymptotic variance {0}: moment vector is not realizable")]
    NonPositiveVariance(f64),

    #[error("plug-in variance unavailable: estimated variance {0} is not positive")]
    PlugInVarianceUnavailable(f64),

    #[error("unrealizable mixing distribution: kurtosis {kappa} below skewness^2 + 1 = {floor}")]
    UnrealizableMixing { kappa: f64, floor: f64 },

    #[error("point (tau = {tau}, kappa = {kappa}) is below the Pearson boundary and unattainable")]
    BelowPearsonBoundary { tau: f64, kappa: f64 },

    #[error("measure is not normalized: total mass {0}")]
    NotNormalized(f64),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(name: &'static str, value: f64, ok: bool, range: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value, range })
    }
}

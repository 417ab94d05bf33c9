//! Kurtosis minus squared skewness: the sample statistic `T_n`, its asymptotic
//! test of unimodality, exact moment calculus for the families used to study
//! it, the skewness-kurtosis boundary sets, a brute-force moment oracle and a
//! seeded Monte Carlo harness.
//!
//! Moment arithmetic is generic over [`scalar::Field`] (exact rationals as well
//! as floats) or [`scalar::Real`] (`f32`, `f64`). Samplers, the boundary
//! minimizer, the oracle and the simulation harness work in `f64`.

pub mod asymptotic;
pub mod boundary;
pub mod error;
pub mod families;
pub mod moments;
pub mod normal;
pub mod oracle;
pub mod power;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod verify;

pub use asymptotic::{
    asymptotic_variance, null_varsigma2, unimodal_delta_bound, unimodality_test, unimodality_test_with,
    TestResult, VarianceMode,
};
pub use boundary::{
    boundary, boundary_curve, classify, construct_attaining, khintchine_forward, l_printed, l_rederived,
    pearson_floor, symmetric_unimodal_floor, unimodal_floor, BoundaryCurve, BoundaryPoint, LVariant,
    RegionVerdict,
};
pub use error::{Error, Result};
pub use families::{DistributionSpec, Sampler, Sign};
pub use moments::{
    central_moments, sample_moment_vector, t_statistic, t_statistic_with, M2Divisor, MomentVector, Sample,
    SkKurtPoint,
};
pub use normal::{normal_cdf, normal_quantile};
pub use oracle::{oracle_khintchine, oracle_moments, MeasureDescription};
pub use power::{clt_diagnostic, simulate_power, simulate_power_with, wald_ci, CltDiagnostic, PowerEstimate};
pub use scalar::{Field, Real};
pub use verify::{verify_all, VerifyReport};

pub type Rational = num_rational::BigRational;
pub type SampleF64 = Sample<f64>;
pub type SampleF32 = Sample<f32>;
pub type MomentVectorF64 = MomentVector<f64>;
pub type MomentVectorF32 = MomentVector<f32>;
pub type MomentVectorExact = MomentVector<Rational>;

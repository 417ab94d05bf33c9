//! Limit law of `√n (T_n − Δ)` and the one-sided test of unimodality.
//!
//! Under H₀ (unimodality) Δ ≥ 189/125, with equality only for BIU(1/2), where
//! the limit variance is ς² = 2¹⁶·3²/(5⁷·7). The test rejects when
//! `T_n − 189/125 ≤ −(ς/√n)·Φ⁻¹(1 − level)`.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::moments::{sample_moment_vector, t_statistic_with, M2Divisor, MomentVector, Sample};
use crate::normal::{normal_cdf, normal_quantile};
use crate::scalar::{Field, Real};

/// Infimum of Δ over unimodal laws, 189/125.
pub fn unimodal_delta_bound<T: Field>() -> T {
    T::ratio(189, 125)
}

/// ς² of the least favorable null law BIU(1/2): 589824/546875.
pub fn null_varsigma2<T: Field>() -> T {
    T::ratio(589_824, 546_875)
}

/// Which ς enters the rejection rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceMode {
    /// ς fixed at the BIU(1/2) value.
    NullBiu,
    /// ς² estimated from plug-in reduced moments of the sample.
    PlugIn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult<T = f64> {
    pub t_n: T,
    pub delta_ref: T,
    pub varsigma: T,
    pub variance_mode: VarianceMode,
    pub z: T,
    pub p_value: T,
    pub reject: bool,
    pub level: T,
    pub n: usize,
}

/// Limit variance ς² of `√n (T_n − Δ)` for a reduced moment vector:
///
/// `4Δ³ − Δ² − (3ν₃⁴ + 16ν₃² − 8ν₃ν₅ + 4ν₆)Δ + ν₃⁶ − 4ν₃⁴ − 4ν₃³ν₅ + 2ν₃²(2 + 3ν₆) + 4ν₃(ν₅ − ν₇) + ν₈`
pub fn asymptotic_variance<T: Field + ToPrimitive>(m: &MomentVector<T>) -> Result<T> {
    let v = asymptotic_variance_unchecked(m);
    if v > T::zero() {
        Ok(v)
    } else {
        Err(Error::NonPositiveVariance(v.to_f64().unwrap_or(f64::NAN)))
    }
}

pub(crate) fn asymptotic_variance_unchecked<T: Field>(m: &MomentVector<T>) -> T {
    let int = T::from_int;
    let (n3, n5, n6, n7, n8) = (m.nu(3), m.nu(5), m.nu(6), m.nu(7), m.nu(8));
    let d = m.delta();
    let n3_2 = n3.square();
    let n3_4 = n3_2.square();

    int(4) * d.ipow(3)
        - d.square()
        - (int(3) * n3_4.clone() + int(16) * n3_2.clone() - int(8) * n3.clone() * n5.clone()
            + int(4) * n6.clone())
            * d
        + n3_4.clone() * n3_2.clone()
        - int(4) * n3_4
        - int(4) * n3_2.clone() * n3.clone() * n5.clone()
        + int(2) * n3_2 * (int(2) + int(3) * n6)
        + int(4) * n3 * (n5 - n7)
        + n8
}

/// Applies the rejection rule to a precomputed statistic.
pub fn decide<T: Real>(
    t_n: T,
    n: usize,
    level: T,
    varsigma: T,
    variance_mode: VarianceMode,
) -> Result<TestResult<T>> {
    let level_f = level.to_f64().unwrap_or(f64::NAN);
    check_range("level", level_f, level_f > 0.0 && level_f < 1.0, "0 < level < 1")?;
    let quantile = T::lit(normal_quantile(1.0 - level_f)?);
    let delta_ref = unimodal_delta_bound::<T>();
    let root_n = T::from_usize(n).expect("n fits the scalar type").sqrt();
    let reject = t_n - delta_ref <= -(varsigma / root_n) * quantile;
    let z = root_n * (t_n - delta_ref) / varsigma;
    let p_value = T::lit(normal_cdf(z.to_f64().unwrap_or(f64::NAN)));
    Ok(TestResult {
        t_n,
        delta_ref,
        varsigma,
        variance_mode,
        z,
        p_value,
        reject,
        level,
        n,
    })
}

/// One-sided asymptotic test of H₀: Δ ≥ 189/125 (implied by unimodality).
pub fn unimodality_test<T: Real>(sample: &Sample<T>, level: T, mode: VarianceMode) -> Result<TestResult<T>> {
    unimodality_test_with(sample, level, mode, M2Divisor::N)
}

/// [`unimodality_test`] with a choice of divisor for m₂ inside `T_n`.
pub fn unimodality_test_with<T: Real>(
    sample: &Sample<T>,
    level: T,
    mode: VarianceMode,
    divisor: M2Divisor,
) -> Result<TestResult<T>> {
    let t_n = t_statistic_with(sample, divisor)?;
    let varsigma = match mode {
        VarianceMode::NullBiu => null_varsigma2::<T>().sqrt(),
        VarianceMode::PlugIn => {
            let mv = sample_moment_vector(sample)?;
            let v = asymptotic_variance_unchecked(&mv);
            if !(v > T::zero()) {
                return Err(Error::PlugInVarianceUnavailable(v.to_f64().unwrap_or(f64::NAN)));
            }
            v.sqrt()
        }
    };
    decide(t_n, sample.len(), level, varsigma, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn reduced(higher: [f64; 6]) -> MomentVector {
        MomentVector::reduced(0.0, 1.0, higher)
    }

    #[test]
    fn variance_at_normal_moments() {
        let v = asymptotic_variance(&reduced([0.0, 3.0, 0.0, 15.0, 0.0, 105.0])).unwrap();
        assert!((v - 24.0).abs() < 1e-12);
    }

    #[test]
    fn variance_at_uniform_moments_is_exact() {
        let r = |a, b| BigRational::ratio(a, b);
        let mv = MomentVector::reduced(
            r(0, 1),
            r(1, 1),
            [r(0, 1), r(9, 5), r(0, 1), r(27, 7), r(0, 1), r(9, 1)],
        );
        assert_eq!(asymptotic_variance(&mv).unwrap(), r(1152, 875));
    }

    #[test]
    fn non_positive_variance_reported() {
        // two-point symmetric law: Δ = 1, all even moments 1, gives ς² = 0
        let err = asymptotic_variance(&reduced([0.0, 1.0, 0.0, 1.0, 0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::NonPositiveVariance(_)));
    }

    #[test]
    fn null_constant_matches_decimal() {
        let v: f64 = null_varsigma2();
        assert!((v - 1.078_535_314_3).abs() < 1e-10);
        assert!((v.sqrt() - 1.038_525_548_2).abs() < 1e-10);
    }

    #[test]
    fn decision_examples() {
        let s = null_varsigma2::<f64>().sqrt();
        let r = decide(1.0, 100, 0.05, s, VarianceMode::NullBiu).unwrap();
        assert!(r.reject);
        let threshold = 1.512 - s * 1.644_853_6 / 10.0;
        assert!((threshold - 1.34117).abs() < 1e-5);

        for &n in &[4usize, 50, 1000, 100_000] {
            for &level in &[0.001, 0.05, 0.2, 0.49] {
                let r = decide(189.0 / 125.0, n, level, s, VarianceMode::NullBiu).unwrap();
                assert!(!r.reject);
            }
        }

        let r = decide(1.46, 1000, 0.05, s, VarianceMode::NullBiu).unwrap();
        assert!(!r.reject);
        let threshold = 1.512 - s * 1.644_853_6 / 1000f64.sqrt();
        assert!((threshold - 1.45798).abs() < 1e-5);
    }

    #[test]
    fn level_out_of_range() {
        for level in [0.0, 1.0, 1.5, -0.1, f64::NAN] {
            assert!(decide(1.0, 10, level, 1.0, VarianceMode::NullBiu).is_err());
        }
    }

    #[test]
    fn plug_in_mode_uses_sample_moments() {
        let x: Vec<f64> = (0..200).map(|i| ((i * 37 % 101) as f64).sqrt()).collect();
        let s = Sample::new(x).unwrap();
        let r = unimodality_test(&s, 0.05, VarianceMode::PlugIn).unwrap();
        let mv = sample_moment_vector(&s).unwrap();
        assert_eq!(r.varsigma, asymptotic_variance(&mv).unwrap().sqrt());
        assert_eq!(r.variance_mode, VarianceMode::PlugIn);
    }

    #[test]
    fn plug_in_mode_fails_loudly_on_two_point_data() {
        let s = Sample::new(vec![-1.0, 1.0, -1.0, 1.0, 1.0, -1.0]).unwrap();
        assert!(matches!(
            unimodality_test(&s, 0.05, VarianceMode::PlugIn),
            Err(Error::PlugInVarianceUnavailable(_))
        ));
        // the null mode still works on the same data
        assert!(unimodality_test(&s, 0.05, VarianceMode::NullBiu).is_ok());
    }
}

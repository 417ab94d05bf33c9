//! Boundary-inflated uniform BIU(p): mass 1−p at the left endpoint, mass p
//! spread uniformly, standardized to mean 0 and variance 1. Equivalently
//! `X = (2/p)·√(3p/(4−3p))·(B·U − p/2)` with B ~ Bernoulli(p), U ~ U(0, 1).
//!
//! The reduced moments are available through three independent routes, all
//! kept: per-order closed forms, the generic k-th moment formula, and the
//! generic formula obtained by centering `B·U` directly.

use crate::error::{check_range, Result};
use crate::moments::{MomentVector, Sample, MAX_ORDER};
use crate::scalar::{Field, Real};

use super::DistributionSpec;

fn check_p<T: Field>(p: &T) -> Result<()> {
    check_range("p", p.as_f64(), *p > T::zero() && *p <= T::one(), "0 < p <= 1")
}

/// `√(3p/(4−3p))`, the magnitude of the left endpoint.
pub fn biu_endpoint<T: Real>(p: T) -> T {
    let three = T::lit(3.0);
    (three * p / (T::lit(4.0) - three * p)).sqrt()
}

/// Multiplier of `B·U − p/2` in the sampler representation.
pub fn biu_scale(p: f64) -> f64 {
    2.0 / p * biu_endpoint(p)
}

/// ν₃…ν₈ from the per-order closed forms.
pub fn biu_nu_closed<T: Real>(p: T) -> [T; 6] {
    let c = |v: f64| T::lit(v);
    let s = biu_endpoint(p);
    let q = c(1.0) - p;
    let r = c(4.0) - c(3.0) * p;
    let p2 = p * p;
    let p3 = p2 * p;
    let p4 = p3 * p;
    let p5 = p4 * p;
    let p6 = p5 * p;
    let p7 = p6 * p;

    let nu3 = c(6.0) * q * q / (p * r) * s;
    let nu4 = c(9.0) * (c(16.0) - c(40.0) * p + c(40.0) * p2 - c(15.0) * p3) / (c(5.0) * p * r * r);
    let nu5 = c(12.0) * q * q * (c(4.0) - c(4.0) * p + c(3.0) * p2) / (p2 * r * r) * s;
    let nu6 = c(27.0)
        * (c(64.0) - c(224.0) * p + c(336.0) * p2 - c(280.0) * p3 + c(140.0) * p4 - c(35.0) * p5)
        / (c(7.0) * p2 * r * r * r);
    let nu7 = c(54.0) * q * q * (c(8.0) - c(16.0) * p + c(16.0) * p2 - c(8.0) * p3 + c(3.0) * p4)
        / (p3 * r * r * r)
        * s;
    let nu8 = c(9.0)
        * (c(256.0) - c(1152.0) * p + c(2304.0) * p2 - c(2688.0) * p3 + c(2016.0) * p4 - c(1008.0) * p5
            + c(336.0) * p6
            - c(63.0) * p7)
        / (p3 * r * r * r * r);
    [nu3, nu4, nu5, nu6, nu7, nu8]
}

/// ν_k = s^k·{(−1)^k(1−p) + ((2−p)^{k+1} − (−p)^{k+1}) / (2(k+1)p^{k−1})}, s = √(3p/(4−3p)).
pub fn biu_nu_generic<T: Real>(p: T, k: usize) -> T {
    let s = biu_endpoint(p);
    let ki = k as i32;
    let sign = if k % 2 == 0 { T::one() } else { -T::one() };
    let kp1 = T::from_usize(k + 1).expect("small integer");
    let two = T::lit(2.0);
    let bracket =
        sign * (T::one() - p) + ((two - p).powi(ki + 1) - (-p).powi(ki + 1)) / (two * kp1 * p.powi(ki - 1));
    s.powi(ki) * bracket
}

/// ν_k from centering `B·U` directly:
/// `(p(4−3p)/12)^{−k/2}·((−p/2)^k + p/(k+1)·[(1−p/2)^{k+1} − (k+1−p/2)(−p/2)^k])`.
pub fn biu_nu_centered<T: Real>(p: T, k: usize) -> T {
    let ki = k as i32;
    let half_p = p / T::lit(2.0);
    let kp1 = T::from_usize(k + 1).expect("small integer");
    let var = p * (T::lit(4.0) - T::lit(3.0) * p) / T::lit(12.0);
    let central = (-half_p).powi(ki)
        + p / kp1 * ((T::one() - half_p).powi(ki + 1) - (kp1 - half_p) * (-half_p).powi(ki));
    central / var.powf(T::from_usize(k).expect("small integer") / T::lit(2.0))
}

/// Reduced moments of BIU(p) from the per-order closed forms, cross-checked
/// (in debug builds) against the two generic formulas.
pub fn biu_moment_vector<T: Real>(p: T) -> Result<MomentVector<T>> {
    check_p(&p)?;
    let higher = biu_nu_closed(p);
    if cfg!(debug_assertions) {
        let tol = T::closed_form_tol();
        for (i, &v) in higher.iter().enumerate() {
            let k = i + 3;
            let g = biu_nu_generic(p, k);
            let c = biu_nu_centered(p, k);
            let scale = v.abs().max(T::one());
            debug_assert!(
                (v - g).abs() <= tol * scale,
                "BIU nu_{k} closed vs generic at p={p:?}"
            );
            debug_assert!(
                (v - c).abs() <= tol * scale,
                "BIU nu_{k} closed vs centered at p={p:?}"
            );
        }
    }
    Ok(MomentVector::reduced(T::zero(), T::one(), higher))
}

/// All reduced moments ν₀…ν₈ by the generic formula.
pub fn biu_nu_generic_all<T: Real>(p: T) -> [T; MAX_ORDER + 1] {
    let mut out = [T::zero(); MAX_ORDER + 1];
    for (k, v) in out.iter_mut().enumerate() {
        *v = biu_nu_generic(p, k);
    }
    out
}

/// Δ(p) = 9(4 + 32p − 80p² + 60p³ − 15p⁴) / (5p(4−3p)³).
pub fn biu_delta<T: Field>(p: T) -> Result<T> {
    check_p(&p)?;
    let i = T::from_int;
    let r = i(4) - i(3) * p.clone();
    let num = i(4) + i(32) * p.clone() - i(80) * p.ipow(2) + i(60) * p.ipow(3) - i(15) * p.ipow(4);
    Ok(i(9) * num / (i(5) * p * r.ipow(3)))
}

/// ς²(p) = 1152(2446 − 11229p + 21744p² − 22080p³ + 11640p⁴ − 2520p⁵) / (875p³(4−3p)⁸).
pub fn biu_varsigma2<T: Field>(p: T) -> Result<T> {
    check_p(&p)?;
    let i = T::from_int;
    let r = i(4) - i(3) * p.clone();
    let num = i(2446) - i(11229) * p.clone() + i(21744) * p.ipow(2) - i(22080) * p.ipow(3)
        + i(11640) * p.ipow(4)
        - i(2520) * p.ipow(5);
    Ok(i(1152) * num / (i(875) * p.ipow(3) * r.ipow(8)))
}

pub fn biu_sample(p: f64, n: usize, seed: u64) -> Result<Sample> {
    DistributionSpec::Biu { p }.sample(n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::asymptotic_variance;
    use num_rational::BigRational;

    #[test]
    fn half_matches_reference_moments() {
        let mv = biu_moment_vector(0.5).unwrap();
        let r35 = (3.0f64 / 5.0).sqrt();
        let expect = [
            1.2 * r35,
            297.0 / 125.0,
            132.0 / 25.0 * r35,
            7479.0 / 875.0,
            2754.0 / 125.0 * r35,
            4437.0 / 125.0,
        ];
        for (k, e) in (3..=8).zip(expect) {
            assert!((mv.nu(k) - e).abs() < 1e-13 * e, "k={k}");
        }
        assert!((mv.nu(3) - 0.929_516_0).abs() < 1e-7);
    }

    #[test]
    fn half_matches_special_case_formula() {
        // ν_k = (3/5)^{k/2}·(3^{k+1} + (4k+5)(−1)^k) / (8(k+1))
        for k in 0..=8usize {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let e = 0.6f64.powf(k as f64 / 2.0) * (3f64.powi(k as i32 + 1) + (4 * k + 5) as f64 * sign)
                / (8.0 * (k + 1) as f64);
            let g = biu_nu_generic(0.5, k);
            assert!((g - e).abs() < 1e-13 * e.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn p_one_is_standardized_uniform() {
        let mv = biu_moment_vector(1.0f64).unwrap();
        assert!(mv.nu(3).abs() < 1e-15);
        assert!((mv.nu(4) - 1.8).abs() < 1e-14);
        assert!((mv.nu(6) - 27.0 / 7.0).abs() < 1e-13);
        assert!((mv.nu(8) - 9.0).abs() < 1e-13);
        assert_eq!((mv.nu(1), mv.nu(2)), (0.0, 1.0));
    }

    #[test]
    fn generic_orders_zero_to_two() {
        for p in [0.05f64, 0.3, 0.5, 0.9, 1.0] {
            let all = biu_nu_generic_all(p);
            assert!((all[0] - 1.0).abs() < 1e-12);
            assert!(all[1].abs() < 1e-12);
            assert!((all[2] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_and_varsigma_exact_at_half_and_one() {
        let r = |a, b| BigRational::ratio(a, b);
        assert_eq!(biu_delta(r(1, 2)).unwrap(), r(189, 125));
        assert_eq!(biu_varsigma2(r(1, 2)).unwrap(), r(589_824, 546_875));
        assert_eq!(biu_delta(r(1, 1)).unwrap(), r(9, 5));
        assert_eq!(biu_varsigma2(r(1, 1)).unwrap(), r(1152, 875));
    }

    #[test]
    fn delta_at_tenth() {
        let d: f64 = biu_delta(0.1).unwrap();
        assert!((d - 2.2951).abs() < 1e-4, "{d}");
        let mv = biu_moment_vector(0.1).unwrap();
        assert!((mv.delta() - d).abs() < 1e-12);
    }

    #[test]
    fn varsigma_closed_form_matches_general_variance() {
        for i in 1..=20 {
            let p = i as f64 / 20.0;
            let closed: f64 = biu_varsigma2(p).unwrap();
            let general = asymptotic_variance(&biu_moment_vector(p).unwrap()).unwrap();
            assert!(((closed - general) / closed).abs() < 1e-10, "p={p}");
        }
    }

    #[test]
    fn out_of_range() {
        assert!(biu_moment_vector(0.0).is_err());
        assert!(biu_moment_vector(1.5).is_err());
        assert!(biu_delta(-0.2).is_err());
        assert!(biu_varsigma2(f64::NAN).is_err());
    }

    #[test]
    fn f32_moments() {
        let mv = biu_moment_vector(0.5f32).unwrap();
        assert!((mv.nu(4) - 2.376).abs() < 1e-5);
    }
}

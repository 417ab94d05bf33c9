//! Mixed normal MN(p, d): density `(1−p)φ(x) + pφ(x−d)`.

use crate::error::{check_range, Result};
use crate::moments::{MomentVector, Sample, SkKurtPoint, MAX_ORDER};
use crate::normal::normal_pdf;
use crate::scalar::{binomial, Real};

use super::DistributionSpec;

fn check<T: Real>(p: T, d: T) -> Result<()> {
    check_range("p", p.as_f64(), p >= T::zero() && p <= T::one(), "0 <= p <= 1")?;
    check_range("d", d.as_f64(), d >= T::zero(), "d >= 0")
}

/// (τ, κ, Δ) of MN(p, d). Δ is stored as κ − τ²; [`mn_delta_closed`] is the
/// separately simplified expression and agrees to rounding.
pub fn mn_stats<T: Real>(p: T, d: T) -> Result<SkKurtPoint<T>> {
    check(p, d)?;
    let one = T::one();
    let q = p * (one - p);
    let v = one + d * d * q;
    let tau = d.powi(3) * q * (one - T::lit(2.0) * p) / v.powf(T::lit(1.5));
    let kappa = T::lit(3.0) + d.powi(4) * q * (one - T::lit(6.0) * q) / (v * v);
    Ok(SkKurtPoint::new(tau, kappa))
}

/// Δ(p, d) = 3 + d⁴p(1−p)·(1 − 6p(1−p) − 2d²p²(1−p)²) / (1 + d²p(1−p))³.
pub fn mn_delta_closed<T: Real>(p: T, d: T) -> Result<T> {
    check(p, d)?;
    let one = T::one();
    let q = p * (one - p);
    let d2 = d * d;
    let v = one + d2 * q;
    Ok(T::lit(3.0) + d2 * d2 * q * (one - T::lit(6.0) * q - T::lit(2.0) * d2 * q * q) / (v * v * v))
}

/// Sufficient condition for bimodality: `min(p, 1−p)·exp(d²/8) ≥ 1`.
/// `false` is inconclusive.
pub fn mn_bimodal_sufficient(p: f64, d: f64) -> bool {
    p.min(1.0 - p) * (d * d / 8.0).exp() >= 1.0
}

pub fn mn_density(p: f64, d: f64, x: f64) -> f64 {
    (1.0 - p) * normal_pdf(x) + p * normal_pdf(x - d)
}

/// Reduced moments from `X − μ = N + d(B − p)` with N, B independent.
pub fn mn_moment_vector(p: f64, d: f64) -> Result<MomentVector> {
    check(p, d)?;
    let normal = |j: usize| -> f64 {
        if j % 2 == 1 {
            0.0
        } else {
            (1..j).step_by(2).map(|i| i as f64).product()
        }
    };
    let centered_bernoulli = |m: usize| p * (1.0 - p).powi(m as i32) + (1.0 - p) * (-p).powi(m as i32);
    let mut central = [0.0; MAX_ORDER + 1];
    for (k, c) in central.iter_mut().enumerate() {
        *c = (0..=k)
            .map(|j| binomial(k, j) * normal(j) * d.powi((k - j) as i32) * centered_bernoulli(k - j))
            .sum();
    }
    MomentVector::from_central(p * d, &central)
}

pub fn mn_sample(p: f64, d: f64, n: usize, seed: u64) -> Result<Sample> {
    DistributionSpec::MixedNormal { p, d }.sample(n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_the_bound_at_half_five() {
        let s = mn_stats(0.5f64, 5.0).unwrap();
        assert_eq!(s.tau, 0.0);
        assert!((s.delta - 1.51367).abs() < 1e-5, "{}", s.delta);
    }

    #[test]
    fn single_normal() {
        for p in [0.0f64, 0.3, 1.0] {
            let s = mn_stats(p, 0.0).unwrap();
            assert_eq!((s.tau, s.kappa, s.delta), (0.0, 3.0, 3.0));
        }
    }

    #[test]
    fn closed_delta_agrees() {
        for &p in &[0.0f64, 0.1, 0.25, 0.5, 0.7, 0.99] {
            for &d in &[0.0, 0.5, 2.0, 5.0, 9.0] {
                let a = mn_stats(p, d).unwrap().delta;
                let b = mn_delta_closed(p, d).unwrap();
                assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "p={p} d={d}");
            }
        }
    }

    #[test]
    fn symmetry_in_p() {
        // exact when 1 − (1 − p) == p in floating point
        for &p in &[0.0f64, 0.125, 0.25, 0.375] {
            for &d in &[0.5, 3.0, 7.0] {
                let a = mn_stats(p, d).unwrap();
                let b = mn_stats(1.0 - p, d).unwrap();
                assert_eq!(a.tau, -b.tau);
                assert_eq!(a.kappa, b.kappa);
            }
        }
        for &p in &[0.1f64, 0.3, 0.45] {
            let a = mn_stats(p, 4.0).unwrap();
            let b = mn_stats(1.0 - p, 4.0).unwrap();
            assert!((a.tau + b.tau).abs() < 1e-13 && (a.kappa - b.kappa).abs() < 1e-13);
        }
    }

    #[test]
    fn divergence_along_curve() {
        let p: f64 = 1e-4;
        let d = p.powf(-0.75);
        let x = mn_stats(p, d).unwrap().delta * p.sqrt();
        assert!((0.9..=1.0).contains(&x), "{x}");
    }

    #[test]
    fn bimodality_condition() {
        assert!(mn_bimodal_sufficient(0.5, 5.0));
        assert!(!mn_bimodal_sufficient(0.2, 3.0));
        assert!(!mn_bimodal_sufficient(0.5, 0.0));
    }

    #[test]
    fn density_shape() {
        assert!((mn_density(0.0, 3.0, 0.0) - 0.398_942_3).abs() < 1e-7);
        let f = |x| mn_density(0.5, 5.0, x);
        assert!(f(0.0) > f(2.5) && f(2.5) < f(5.0));
    }

    #[test]
    fn moment_vector_matches_stats() {
        for &(p, d) in &[(0.5, 5.0), (0.2, 3.0), (0.9, 1.0), (0.0, 2.0)] {
            let mv = mn_moment_vector(p, d).unwrap();
            let s = mn_stats(p, d).unwrap();
            assert!((mv.nu(3) - s.tau).abs() < 1e-12);
            assert!((mv.nu(4) - s.kappa).abs() < 1e-12);
        }
        let mv = mn_moment_vector(0.3, 0.0).unwrap();
        assert!((mv.nu(6) - 15.0).abs() < 1e-12 && (mv.nu(8) - 105.0).abs() < 1e-11);
    }
}

//! Standardized three-atom laws attaining every point on or above the Pearson
//! parabola κ = τ² + 1.
//!
//! For 0 < α ≤ 1 and z ≥ 0 the atoms are `−√(α(1+z))`, `0`, `√((1+z)/α)` with
//! probabilities `1/((1+α)(1+z))`, `1 − 1/(1+z)`, `α/((1+α)(1+z))`. The law has
//! mean 0, variance 1, τ = ((1−α)/√α)·√(1+z) and κ = τ² + 1 + z. The `Minus`
//! sign reflects it through the origin.

use crate::error::{check_range, Result};
use crate::moments::{MomentVector, Sample, SkKurtPoint, MAX_ORDER};
use crate::scalar::Real;

use super::{DistributionSpec, Sign};

fn check(alpha: f64, z: f64) -> Result<()> {
    check_range("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "0 < alpha <= 1")?;
    check_range("z", z, z >= 0.0, "z >= 0")
}

/// `(location, probability)` of the three atoms, in increasing order of location.
pub fn threepoint_atoms(alpha: f64, z: f64, sign: Sign) -> [(f64, f64); 3] {
    let w = 1.0 + z;
    let left = (-(alpha * w).sqrt(), 1.0 / ((1.0 + alpha) * w));
    let mid = (0.0, z / w);
    let right = ((w / alpha).sqrt(), alpha / ((1.0 + alpha) * w));
    match sign {
        Sign::Plus => [left, mid, right],
        Sign::Minus => [(-right.0, right.1), mid, (-left.0, left.1)],
    }
}

/// Closed-form (τ, κ, Δ).
pub fn threepoint_stats<T: Real>(alpha: T, z: T, sign: Sign) -> Result<SkKurtPoint<T>> {
    check(alpha.as_f64(), z.as_f64())?;
    let w = T::one() + z;
    let tau = T::lit(sign.factor()) * (T::one() - alpha) / alpha.sqrt() * w.sqrt();
    let kappa = tau * tau + w;
    Ok(SkKurtPoint::new(tau, kappa))
}

/// Reduced moments by finite sums over the atoms.
pub fn threepoint_moment_vector(alpha: f64, z: f64, sign: Sign) -> Result<MomentVector> {
    check(alpha, z)?;
    let atoms = threepoint_atoms(alpha, z, sign);
    let mean: f64 = atoms.iter().map(|(x, w)| x * w).sum();
    let mut central = [0.0; MAX_ORDER + 1];
    for (k, c) in central.iter_mut().enumerate() {
        *c = atoms.iter().map(|(x, w)| w * (x - mean).powi(k as i32)).sum();
    }
    MomentVector::from_central(mean, &central)
}

pub fn threepoint_sample(alpha: f64, z: f64, sign: Sign, n: usize, seed: u64) -> Result<Sample> {
    DistributionSpec::ThreePoint { alpha, z, sign }.sample(n, seed)
}

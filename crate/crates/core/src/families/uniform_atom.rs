//! Uniform on [−1, 1] with probability p, atom at 0 with mass 1 − p.
//! Symmetric and unimodal, with κ = 9/(5p) sweeping [9/5, ∞).

use crate::error::{check_range, Result};
use crate::moments::{MomentVector, SkKurtPoint, MAX_ORDER};
use crate::scalar::Field;

fn check<T: Field>(p: &T) -> Result<()> {
    check_range("p", p.as_f64(), *p > T::zero() && *p <= T::one(), "0 < p <= 1")
}

/// (0, 9/(5p)); exact in rational arithmetic.
pub fn uniform_atom_stats<T: Field>(p: T) -> Result<SkKurtPoint<T>> {
    check(&p)?;
    Ok(SkKurtPoint::new(T::zero(), T::from_int(9) / (T::from_int(5) * p)))
}

/// E X^k = p/(k+1) for even k, σ² = p/3.
pub fn uniform_atom_moment_vector(p: f64) -> Result<MomentVector> {
    check(&p)?;
    let mut central = [0.0; MAX_ORDER + 1];
    for (k, c) in central.iter_mut().enumerate() {
        *c = match k {
            0 => 1.0,
            _ if k % 2 == 0 => p / (k + 1) as f64,
            _ => 0.0,
        };
    }
    MomentVector::from_central(0.0, &central)
}

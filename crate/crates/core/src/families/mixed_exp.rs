//! Mixture of two exponential densities,
//! `g(x) = (1−p)e^{−x} + p·e^{−(x−d)}·1[x ≥ d]`, i.e. the law of `E + d·B`.
//!
//! τ, κ and Δ are derived from the raw moments `E X^k = k!·[1 − p + p·Σ_{j≤k} d^j/j!]`
//! through the binomial central-moment expansion. The simplified displays for
//! var, m₃, m₄ and Δ are kept as separate functions and agree with the
//! derivation exactly in rational arithmetic.

use crate::error::{check_range, Result};
use crate::moments::{MomentVector, Sample, SkKurtPoint, MAX_ORDER};
use crate::scalar::{Field, Real};

use super::DistributionSpec;

fn check<T: Field>(p: &T, d: &T) -> Result<()> {
    check_range("p", p.as_f64(), *p >= T::zero() && *p <= T::one(), "0 <= p <= 1")?;
    check_range("d", d.as_f64(), *d > T::zero(), "d > 0")
}

/// `E X^k = k!·[1 − p + p·Σ_{j=0}^{k} d^j / j!]`, 0 ≤ k ≤ 8.
pub fn mixexp_raw_moment<T: Field>(p: T, d: T, k: usize) -> Result<T> {
    check(&p, &d)?;
    if k > MAX_ORDER {
        return Err(crate::Error::MomentOrder(k));
    }
    let mut partial = T::zero();
    let mut term = T::one();
    for j in 0..=k {
        if j > 0 {
            term = term * d.clone() / T::from_int(j as i64);
        }
        partial = partial + term.clone();
    }
    let fact = (1..=k as i64).fold(T::one(), |acc, i| acc * T::from_int(i));
    Ok(fact * (T::one() - p.clone() + p * partial))
}

/// Central moments `E(X − EX)^k`, k = 0..=8, from the raw moments.
pub fn mixexp_central<T: Field>(p: T, d: T) -> Result<[T; MAX_ORDER + 1]> {
    let mut raw: Vec<T> = Vec::with_capacity(MAX_ORDER + 1);
    for k in 0..=MAX_ORDER {
        raw.push(mixexp_raw_moment(p.clone(), d.clone(), k)?);
    }
    let mean = raw[1].clone();
    let central: Vec<T> = (0..=MAX_ORDER)
        .map(|k| {
            let mut acc = T::zero();
            let mut binom = T::one();
            for j in 0..=k {
                if j > 0 {
                    binom = binom * T::from_int((k - j + 1) as i64) / T::from_int(j as i64);
                }
                acc = acc + binom.clone() * raw[j].clone() * (-mean.clone()).ipow((k - j) as u32);
            }
            acc
        })
        .collect();
    Ok(central.try_into().expect("nine central moments"))
}

/// Δ = (m₄m₂ − m₃²)/m₂³ from the raw-moment derivation; exact in rational arithmetic.
pub fn mixexp_delta<T: Field>(p: T, d: T) -> Result<T> {
    let c = mixexp_central(p, d)?;
    let m2 = c[2].clone();
    Ok((c[4].clone() * m2.clone() - c[3].square()) / m2.ipow(3))
}

/// (τ, κ, Δ) from the raw-moment derivation.
pub fn mixexp_stats<T: Real>(p: T, d: T) -> Result<SkKurtPoint<T>> {
    let c = mixexp_central(p, d)?;
    let m2 = c[2];
    Ok(SkKurtPoint::new(c[3] / m2.powf(T::lit(1.5)), c[4] / (m2 * m2)))
}

pub fn mixexp_moment_vector(p: f64, d: f64) -> Result<MomentVector> {
    let c = mixexp_central(p, d)?;
    MomentVector::from_central(mixexp_raw_moment(p, d, 1)?, &c)
}

/// Simplified displays: (EX, var X, m₃, m₄) =
/// `(1 + pd, 1 + d²q, 2 + d³q(1−2p), 9 + 6d²q + d⁴q(1 − 3p + 3p²))`, q = p(1−p).
pub fn mixexp_printed_moments<T: Field>(p: T, d: T) -> Result<[T; 4]> {
    check(&p, &d)?;
    let i = T::from_int;
    let q = p.clone() * (i(1) - p.clone());
    Ok([
        i(1) + p.clone() * d.clone(),
        i(1) + d.square() * q.clone(),
        i(2) + d.ipow(3) * q.clone() * (i(1) - i(2) * p.clone()),
        i(9) + i(6) * d.square() * q.clone() + d.ipow(4) * q * (i(1) - i(3) * p.clone() + i(3) * p.square()),
    ])
}

/// Simplified display
/// `Δ = 5 − d³q·(4 − 8p − d(1 − 12q) + 4d³q²) / (1 + d²q)³`, q = p(1−p).
pub fn mixexp_delta_printed<T: Field>(p: T, d: T) -> Result<T> {
    check(&p, &d)?;
    let i = T::from_int;
    let q = p.clone() * (i(1) - p.clone());
    let v = i(1) + d.square() * q.clone();
    let bracket = i(4) - i(8) * p - d.clone() * (i(1) - i(12) * q.clone()) + i(4) * d.ipow(3) * q.square();
    Ok(i(5) - d.ipow(3) * q * bracket / v.ipow(3))
}

pub fn mixexp_sample(p: f64, d: f64, n: usize, seed: u64) -> Result<Sample> {
    DistributionSpec::MixedExponential { p, d }.sample(n, seed)
}

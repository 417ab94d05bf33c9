//! W = V with probability p (V uniform on {2, 3}), W = U with probability 1 − p
//! (U uniform on (0, 1)). Multimodal for 0 < p < 1, yet Δ moves continuously
//! from 9/5 at p = 0 to 1 at p = 1, so it crosses 189/125.

use crate::error::{check_range, Result};
use crate::moments::{MomentVector, MAX_ORDER};
use crate::scalar::Field;

fn check<T: Field>(p: &T) -> Result<()> {
    check_range("p", p.as_f64(), *p >= T::zero() && *p <= T::one(), "0 <= p <= 1")
}

/// `E W^k = p(2^k + 3^k)/2 + (1 − p)/(k + 1)`.
pub fn wmix_raw_moment<T: Field>(p: T, k: usize) -> Result<T> {
    check(&p)?;
    if k > MAX_ORDER {
        return Err(crate::Error::MomentOrder(k));
    }
    let i = T::from_int;
    let atoms = (i(2).ipow(k as u32) + i(3).ipow(k as u32)) / i(2);
    Ok(p.clone() * atoms + (i(1) - p) / i(k as i64 + 1))
}

fn wmix_central<T: Field>(p: T) -> Result<[T; MAX_ORDER + 1]> {
    let raw: Vec<T> = (0..=MAX_ORDER)
        .map(|k| wmix_raw_moment(p.clone(), k))
        .collect::<Result<_>>()?;
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

/// Δ(p) of W, exact in rational arithmetic.
pub fn wmix_delta<T: Field>(p: T) -> Result<T> {
    let c = wmix_central(p)?;
    let m2 = c[2].clone();
    Ok((c[4].clone() * m2.clone() - c[3].square()) / m2.ipow(3))
}

pub fn wmix_moment_vector(p: f64) -> Result<MomentVector> {
    let c = wmix_central(p)?;
    MomentVector::from_central(wmix_raw_moment(p, 1)?, &c)
}

/// Bisection for the p at which Δ(p) = `target`, assuming Δ(lo) > target > Δ(hi).
pub fn wmix_crossing(target: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if wmix_delta(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

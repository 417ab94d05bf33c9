//! Scalar abstractions.
//!
//! Rational closed forms (bounds, BIU Δ(p), ς²(p), mixture moments) only need
//! field arithmetic and are generic over [`Field`], so they can be evaluated
//! exactly in [`num_rational::BigRational`]. Anything that needs square roots
//! or logarithms is generic over [`Real`] (f32 / f64).

use std::fmt::Debug;
use std::iter::Sum;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Ordered field with integer embedding.
pub trait Field: Clone + Debug + PartialOrd + Num + Neg<Output = Self> + ToPrimitive {
    fn from_int(v: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn ipow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Floating-point field: f32 or f64.
pub trait Real: Field + Float + FloatConst + FromPrimitive + Sum + Send + Sync + 'static {
    /// Converts an f64 literal; every implementor represents all finite f64 inputs approximately.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    /// Closed-form agreement tolerance used by internal cross-checks.
    fn closed_form_tol() -> Self {
        Self::epsilon() * Self::lit(4096.0)
    }
}

macro_rules! impl_float_field {
    ($t:ty) => {
        impl Field for $t {
            fn from_int(v: i64) -> Self {
                v as $t
            }

            fn ipow(&self, k: u32) -> Self {
                Float::powi(*self, k as i32)
            }
        }

        impl Real for $t {}
    };
}

impl_float_field!(f32);
impl_float_field!(f64);

impl Field for Rational64 {
    fn from_int(v: i64) -> Self {
        Rational64::from_integer(v)
    }
}

impl Field for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

/// Running Neumaier accumulator.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Accumulator<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Accumulator<T> {
    pub(crate) fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub(crate) fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp = self.comp + ((self.sum - t) + v);
        } else {
            self.comp = self.comp + ((v - t) + self.sum);
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> T {
        self.sum + self.comp
    }
}

/// Binomial coefficient as f64 (exact for the small orders used here).
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
        assert_eq!(v.iter().sum::<f64>(), 1.0 + 0.0);
    }

    #[test]
    fn rational_field_is_exact() {
        let a = BigRational::ratio(189, 125);
        let b = BigRational::ratio(378, 250);
        assert_eq!(a, b);
        assert_eq!(BigRational::ratio(3, 5).ipow(2), BigRational::ratio(9, 25));
    }

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(8, 4), 70.0);
        assert_eq!(binomial(9, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(factorial(8), 40320.0);
    }
}

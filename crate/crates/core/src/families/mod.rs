//! Parametric families: exact moment calculus and seeded samplers.
//!
//! | tag           | law                                                               |
//! |---------------|-------------------------------------------------------------------|
//! | `biu`         | boundary-inflated uniform BIU(p), standardized                    |
//! | `mn`          | `(1−p)·N(0,1) + p·N(d,1)`                                         |
//! | `mixexp`      | `E + d·B`, E standard exponential, B ~ Bernoulli(p)               |
//! | `threepoint`  | standardized three-atom law with skewness sign·τ and kurtosis τ²+1+z |
//! | `uniformatom` | uniform on [−1, 1] w.p. p, atom at 0 w.p. 1−p                     |
//! | `wmix`        | uniform on {2, 3} w.p. p, uniform(0, 1) w.p. 1−p                  |
//!
//! Endpoints p = 0 and p = 1 are accepted wherever the limit law is a proper
//! distribution (`mn`, `mixexp`, `wmix`); BIU, `uniformatom` need p > 0.

pub mod biu;
pub mod mixed_exp;
pub mod mixed_normal;
pub mod three_point;
pub mod uniform_atom;
pub mod wmix;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::asymptotic::asymptotic_variance;
use crate::error::{check_range, Result};
use crate::moments::{MomentVector, Sample, SkKurtPoint};
use crate::rng::Stream;

pub use biu::{biu_delta, biu_moment_vector, biu_sample, biu_varsigma2};
pub use mixed_exp::{mixexp_raw_moment, mixexp_sample, mixexp_stats};
pub use mixed_normal::{mn_bimodal_sufficient, mn_density, mn_sample, mn_stats};
pub use three_point::{threepoint_sample, threepoint_stats};
pub use uniform_atom::uniform_atom_stats;
pub use wmix::wmix_delta;

/// Direction of skewness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum DistributionSpec {
    Biu {
        p: f64,
    },
    #[serde(rename = "mn")]
    MixedNormal {
        p: f64,
        d: f64,
    },
    #[serde(rename = "mixexp")]
    MixedExponential {
        p: f64,
        d: f64,
    },
    #[serde(rename = "threepoint")]
    ThreePoint {
        alpha: f64,
        z: f64,
        sign: Sign,
    },
    #[serde(rename = "uniformatom")]
    UniformAtom {
        p: f64,
    },
    #[serde(rename = "wmix")]
    TwoPointUniformMix {
        p: f64,
    },
}

impl DistributionSpec {
    pub fn family(&self) -> &'static str {
        match self {
            Self::Biu { .. } => "biu",
            Self::MixedNormal { .. } => "mn",
            Self::MixedExponential { .. } => "mixexp",
            Self::ThreePoint { .. } => "threepoint",
            Self::UniformAtom { .. } => "uniformatom",
            Self::TwoPointUniformMix { .. } => "wmix",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Biu { p } | Self::UniformAtom { p } => {
                check_range("p", p, p > 0.0 && p <= 1.0, "0 < p <= 1")
            }
            Self::MixedNormal { p, d } => {
                check_range("p", p, (0.0..=1.0).contains(&p), "0 <= p <= 1")?;
                check_range("d", d, d >= 0.0, "d >= 0")
            }
            Self::MixedExponential { p, d } => {
                check_range("p", p, (0.0..=1.0).contains(&p), "0 <= p <= 1")?;
                check_range("d", d, d > 0.0, "d > 0")
            }
            Self::ThreePoint { alpha, z, .. } => {
                check_range("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "0 < alpha <= 1")?;
                check_range("z", z, z >= 0.0, "z >= 0")
            }
            Self::TwoPointUniformMix { p } => check_range("p", p, (0.0..=1.0).contains(&p), "0 <= p <= 1"),
        }
    }

    /// Exact reduced moments ν₀…ν₈.
    pub fn exact_moment_vector(&self) -> Result<MomentVector> {
        self.validate()?;
        match *self {
            Self::Biu { p } => biu_moment_vector(p),
            Self::MixedNormal { p, d } => mixed_normal::mn_moment_vector(p, d),
            Self::MixedExponential { p, d } => mixed_exp::mixexp_moment_vector(p, d),
            Self::ThreePoint { alpha, z, sign } => three_point::threepoint_moment_vector(alpha, z, sign),
            Self::UniformAtom { p } => uniform_atom::uniform_atom_moment_vector(p),
            Self::TwoPointUniformMix { p } => wmix::wmix_moment_vector(p),
        }
    }

    /// Exact (τ, κ, Δ) from the family's closed forms.
    pub fn stats(&self) -> Result<SkKurtPoint> {
        self.validate()?;
        match *self {
            Self::Biu { p } => Ok(biu_moment_vector(p)?.point()),
            Self::MixedNormal { p, d } => mn_stats(p, d),
            Self::MixedExponential { p, d } => mixexp_stats(p, d),
            Self::ThreePoint { alpha, z, sign } => threepoint_stats(alpha, z, sign),
            Self::UniformAtom { p } => uniform_atom_stats(p),
            Self::TwoPointUniformMix { p } => Ok(wmix::wmix_moment_vector(p)?.point()),
        }
    }

    /// Exact Δ = κ − τ².
    pub fn delta(&self) -> Result<f64> {
        Ok(self.stats()?.delta)
    }

    /// Limit variance ς² of `√n (T_n − Δ)` under this law.
    pub fn varsigma2(&self) -> Result<f64> {
        asymptotic_variance(&self.exact_moment_vector()?)
    }

    pub fn sampler(&self) -> Result<Sampler> {
        self.validate()?;
        Ok(match *self {
            Self::Biu { p } => Sampler::Biu {
                p,
                scale: biu::biu_scale(p),
            },
            Self::MixedNormal { p, d } => Sampler::MixedNormal { p, d },
            Self::MixedExponential { p, d } => Sampler::MixedExponential { p, d },
            Self::ThreePoint { alpha, z, sign } => {
                let atoms = three_point::threepoint_atoms(alpha, z, sign);
                Sampler::Atoms {
                    values: [atoms[0].0, atoms[1].0, atoms[2].0],
                    cut: [atoms[0].1, atoms[0].1 + atoms[1].1],
                }
            }
            Self::UniformAtom { p } => Sampler::UniformAtom { p },
            Self::TwoPointUniformMix { p } => Sampler::TwoPointUniformMix { p },
        })
    }

    /// `n` i.i.d. draws from a fresh stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Sample> {
        let sampler = self.sampler()?;
        let mut stream = Stream::new(seed);
        let mut buf = Vec::with_capacity(n);
        sampler.fill(&mut stream, n, &mut buf);
        Ok(Sample::from_finite(buf))
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Biu { p } => write!(f, "BIU({p})"),
            Self::MixedNormal { p, d } => write!(f, "MN({p}, {d})"),
            Self::MixedExponential { p, d } => write!(f, "MixExp({p}, {d})"),
            Self::ThreePoint { alpha, z, sign } => {
                let s = if sign == Sign::Plus { '+' } else { '-' };
                write!(f, "ThreePoint(alpha={alpha}, z={z}, {s})")
            }
            Self::UniformAtom { p } => write!(f, "UniformAtom({p})"),
            Self::TwoPointUniformMix { p } => write!(f, "WMix({p})"),
        }
    }
}

/// A validated spec with per-draw constants precomputed.
#[derive(Clone, Copy, Debug)]
pub enum Sampler {
    Biu { p: f64, scale: f64 },
    MixedNormal { p: f64, d: f64 },
    MixedExponential { p: f64, d: f64 },
    Atoms { values: [f64; 3], cut: [f64; 2] },
    UniformAtom { p: f64 },
    TwoPointUniformMix { p: f64 },
}

impl Sampler {
    pub fn draw(&self, s: &mut Stream) -> f64 {
        match *self {
            // X = (2/p)·√(3p/(4−3p))·(B·U − p/2)
            Sampler::Biu { p, scale } => {
                let b = if s.bernoulli(p) { 1.0 } else { 0.0 };
                let u = s.uniform();
                scale * (b * u - 0.5 * p)
            }
            Sampler::MixedNormal { p, d } => {
                let shift = if s.bernoulli(p) { d } else { 0.0 };
                s.normal() + shift
            }
            Sampler::MixedExponential { p, d } => {
                let e = s.exponential();
                if s.bernoulli(p) {
                    e + d
                } else {
                    e
                }
            }
            Sampler::Atoms { values, cut } => {
                let u = s.uniform();
                if u < cut[0] {
                    values[0]
                } else if u < cut[1] {
                    values[1]
                } else {
                    values[2]
                }
            }
            Sampler::UniformAtom { p } => {
                let b = s.bernoulli(p);
                let u = s.uniform();
                if b {
                    2.0 * u - 1.0
                } else {
                    0.0
                }
            }
            Sampler::TwoPointUniformMix { p } => {
                let b = s.bernoulli(p);
                let u = s.uniform();
                match (b, u < 0.5) {
                    (true, true) => 2.0,
                    (true, false) => 3.0,
                    (false, _) => u,
                }
            }
        }
    }

    /// Clears `buf` and fills it with `n` draws.
    pub fn fill(&self, s: &mut Stream, n: usize, buf: &mut Vec<f64>) {
        buf.clear();
        buf.extend((0..n).map(|_| self.draw(s)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_out_of_range() {
        assert!(DistributionSpec::Biu { p: 1.5 }.validate().is_err());
        assert!(DistributionSpec::Biu { p: 0.0 }.validate().is_err());
        assert!(DistributionSpec::MixedNormal { p: 0.5, d: -1.0 }
            .validate()
            .is_err());
        assert!(DistributionSpec::MixedExponential { p: 0.5, d: 0.0 }
            .validate()
            .is_err());
        assert!(DistributionSpec::UniformAtom { p: f64::NAN }.validate().is_err());
        let tp = DistributionSpec::ThreePoint {
            alpha: 0.0,
            z: 1.0,
            sign: Sign::Plus,
        };
        assert!(tp.validate().is_err());
        assert!(DistributionSpec::TwoPointUniformMix { p: 0.0 }.validate().is_ok());
    }

    #[test]
    fn samples_are_seed_deterministic() {
        let specs = [
            DistributionSpec::Biu { p: 0.3 },
            DistributionSpec::MixedNormal { p: 0.4, d: 2.0 },
            DistributionSpec::MixedExponential { p: 0.2, d: 3.0 },
            DistributionSpec::UniformAtom { p: 0.7 },
            DistributionSpec::TwoPointUniformMix { p: 0.5 },
        ];
        for spec in specs {
            let a = spec.sample(500, 11).unwrap();
            let b = spec.sample(500, 11).unwrap();
            let c = spec.sample(500, 12).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }
}

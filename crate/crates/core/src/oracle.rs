//! Brute-force moments of measures built from atoms, density segments and
//! Gaussian pieces.
//!
//! Atoms are summed exactly. Constant, exponential and log-ratio segments are
//! integrated through closed-form antiderivatives. Gaussian pieces use
//! adaptive Gauss-Legendre quadrature over μ ± 12σ; the neglected tail mass is
//! below 1e-32. Central moments are taken about the mean piece by piece rather
//! than expanded from raw moments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{MomentVector, MAX_ORDER};
use crate::normal::normal_pdf;
use crate::quadrature::integrate;
use crate::scalar::{binomial, factorial, Accumulator};

pub const MASS_TOL: f64 = 1e-12;
const GAUSS_HALF_WIDTH: f64 = 12.0;

/// Density of a segment on its interval [a, b].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityKind {
    /// `c`.
    Constant { c: f64 },
    /// `coef·exp(−(x − shift)/scale)`; the upper end may be +∞.
    Exponential { coef: f64, shift: f64, scale: f64 },
    /// `coef·ln(top/|x|)` on an interval not containing 0 in its interior,
    /// with |x| ≤ top. This is the density of U·Z over a uniform piece of Z.
    LogRatio { coef: f64, top: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub density: DensityKind,
}

/// `weight · N(mean, sd²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPiece {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureDescription {
    /// `(location, mass)`.
    pub atoms: Vec<(f64, f64)>,
    pub segments: Vec<Segment>,
    pub gaussians: Vec<GaussianPiece>,
}

impl MeasureDescription {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom(mut self, x: f64, mass: f64) -> Self {
        self.atoms.push((x, mass));
        self
    }

    pub fn segment(mut self, a: f64, b: f64, density: DensityKind) -> Self {
        self.segments.push(Segment { a, b, density });
        self
    }

    pub fn uniform(self, a: f64, b: f64, mass: f64) -> Self {
        self.segment(a, b, DensityKind::Constant { c: mass / (b - a) })
    }

    pub fn gaussian(mut self, weight: f64, mean: f64, sd: f64) -> Self {
        self.gaussians.push(GaussianPiece { weight, mean, sd });
        self
    }

    /// Structural checks: finite ordered endpoints, non-negative masses and densities.
    pub fn check_structure(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMeasure(msg));
        for &(x, w) in &self.atoms {
            if !x.is_finite() || !(w >= 0.0) || !w.is_finite() {
                return bad(format!("atom ({x}, {w})"));
            }
        }
        for s in &self.segments {
            if !s.a.is_finite() || s.b.is_nan() || !(s.a < s.b) {
                return bad(format!("segment endpoints [{}, {}]", s.a, s.b));
            }
            let ok = match s.density {
                DensityKind::Constant { c } => c >= 0.0 && c.is_finite() && s.b.is_finite(),
                DensityKind::Exponential { coef, shift, scale } => {
                    coef >= 0.0 && coef.is_finite() && shift.is_finite() && scale > 0.0 && scale.is_finite()
                }
                DensityKind::LogRatio { coef, top } => {
                    coef >= 0.0
                        && coef.is_finite()
                        && top > 0.0
                        && s.b.is_finite()
                        && (s.a >= 0.0 || s.b <= 0.0)
                        && s.a.abs().max(s.b.abs()) <= top
                }
            };
            if !ok {
                return bad(format!("segment {s:?}"));
            }
        }
        for g in &self.gaussians {
            if !(g.weight >= 0.0)
                || !g.weight.is_finite()
                || !g.mean.is_finite()
                || !(g.sd > 0.0)
                || !g.sd.is_finite()
            {
                return bad(format!("gaussian piece {g:?}"));
            }
        }
        Ok(())
    }

    pub fn total_mass(&self) -> f64 {
        self.moment_about(0.0, 0)
    }

    /// Structure is valid and total mass is 1 within [`MASS_TOL`].
    pub fn validate(&self) -> Result<()> {
        self.check_structure()?;
        let mass = self.total_mass();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::NotNormalized(mass));
        }
        Ok(())
    }

    /// `∫ (x − c)^k dμ(x)`.
    fn moment_about(&self, c: f64, k: usize) -> f64 {
        let mut acc = Accumulator::new();
        for &(x, w) in &self.atoms {
            acc.add(w * (x - c).powi(k as i32));
        }
        for s in &self.segments {
            acc.add(segment_moment(s, c, k));
        }
        for g in &self.gaussians {
            acc.add(gaussian_moment(g, c, k));
        }
        acc.total()
    }
}

fn segment_moment(s: &Segment, c: f64, k: usize) -> f64 {
    match s.density {
        DensityKind::Constant { c: h } => {
            let k1 = (k + 1) as i32;
            h * ((s.b - c).powi(k1) - (s.a - c).powi(k1)) / k1 as f64
        }
        DensityKind::Exponential { coef, shift, scale } => {
            // d/dt[−s·e^{−t/s}·Σ_j k!/(k−j)!·s^j·t^{k−j}] = t^k·e^{−t/s}
            let anti = |x: f64| -> f64 {
                if x == f64::INFINITY {
                    return 0.0;
                }
                let t = x - c;
                let poly: f64 = (0..=k)
                    .map(|j| factorial(k) / factorial(k - j) * scale.powi(j as i32) * t.powi((k - j) as i32))
                    .sum();
                -coef * scale * (-(x - shift) / scale).exp() * poly
            };
            anti(s.b) - anti(s.a)
        }
        DensityKind::LogRatio { coef, top } => {
            // ∫ x^j ln(top/x) dx = x^{j+1}/(j+1)·(ln(top/x) + 1/(j+1)) on x > 0
            let positive = |lo: f64, hi: f64, center: f64| -> f64 {
                let anti = |x: f64, j: usize| -> f64 {
                    if x == 0.0 {
                        return 0.0;
                    }
                    let j1 = (j + 1) as f64;
                    x.powi(j as i32 + 1) / j1 * ((top / x).ln() + 1.0 / j1)
                };
                (0..=k)
                    .map(|j| binomial(k, j) * (-center).powi((k - j) as i32) * (anti(hi, j) - anti(lo, j)))
                    .sum()
            };
            if s.a >= 0.0 {
                coef * positive(s.a, s.b, c)
            } else {
                // x = −y: ∫ (−y − c)^k ln(top/y) dy over [−b, −a]
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                coef * sign * positive(-s.b, -s.a, -c)
            }
        }
    }
}

fn gaussian_moment(g: &GaussianPiece, c: f64, k: usize) -> f64 {
    let shift = g.mean - c;
    g.weight
        * integrate(
            |y| (shift + g.sd * y).powi(k as i32) * normal_pdf(y),
            -GAUSS_HALF_WIDTH,
            GAUSS_HALF_WIDTH,
            1e-15,
        )
}

/// Raw moments `E X^k`, k = 0..=kmax.
pub fn oracle_raw_moments(m: &MeasureDescription, kmax: usize) -> Result<Vec<f64>> {
    if kmax > MAX_ORDER {
        return Err(Error::MomentOrder(kmax));
    }
    m.validate()?;
    Ok((0..=kmax).map(|k| m.moment_about(0.0, k)).collect())
}

/// Reduced moments ν₀…ν₈ with location and squared scale.
pub fn oracle_moments(m: &MeasureDescription) -> Result<MomentVector> {
    m.validate()?;
    let mean = m.moment_about(0.0, 1);
    let mut central = [0.0; MAX_ORDER + 1];
    for (k, c) in central.iter_mut().enumerate() {
        *c = m.moment_about(mean, k);
    }
    MomentVector::from_central(mean, &central)
}

/// The law of U·Z, U uniform on (0, 1) independent of Z ~ `mixing`.
///
/// An atom of Z at z ≠ 0 becomes a uniform segment between 0 and z; an atom
/// at 0 stays an atom. A constant piece of Z on [a, b] with 0 ≤ a < b gives
/// the density `c·ln(b/max(x, a))` on (0, b): constant `c·ln(b/a)` on (0, a)
/// and log-ratio on [a, b]; negative pieces are mirrored. Pieces crossing 0
/// are split first. Exponential and Gaussian pieces are not supported.
pub fn khintchine_measure(mixing: &MeasureDescription) -> Result<MeasureDescription> {
    mixing.validate()?;
    if !mixing.gaussians.is_empty() {
        return Err(Error::InvalidMeasure(
            "Gaussian mixing pieces are not supported".into(),
        ));
    }
    let mut out = MeasureDescription::new();
    for &(z, w) in &mixing.atoms {
        if w == 0.0 {
            continue;
        }
        if z == 0.0 {
            out = out.atom(0.0, w);
        } else {
            let (a, b) = if z > 0.0 { (0.0, z) } else { (z, 0.0) };
            out = out.uniform(a, b, w);
        }
    }
    for s in &mixing.segments {
        let DensityKind::Constant { c } = s.density else {
            return Err(Error::InvalidMeasure(format!("unsupported mixing segment {s:?}")));
        };
        let mut pieces = Vec::new();
        if s.a < 0.0 && s.b > 0.0 {
            pieces.push((s.a, 0.0));
            pieces.push((0.0, s.b));
        } else {
            pieces.push((s.a, s.b));
        }
        for (a, b) in pieces {
            // work with magnitudes lo < hi on the positive side
            let (lo, hi, negative) = if b <= 0.0 { (-b, -a, true) } else { (a, b, false) };
            let mirror = |x0: f64, x1: f64| if negative { (-x1, -x0) } else { (x0, x1) };
            if lo > 0.0 {
                let (x0, x1) = mirror(0.0, lo);
                out = out.segment(
                    x0,
                    x1,
                    DensityKind::Constant {
                        c: c * (hi / lo).ln(),
                    },
                );
            }
            let (x0, x1) = mirror(lo, hi);
            out = out.segment(x0, x1, DensityKind::LogRatio { coef: c, top: hi });
        }
    }
    Ok(out)
}

/// Reduced moments of U·Z for Z ~ `mixing`.
pub fn oracle_khintchine(mixing: &MeasureDescription) -> Result<MomentVector> {
    oracle_moments(&khintchine_measure(mixing)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn biu_half() -> MeasureDescription {
        let s = 0.6f64.sqrt();
        MeasureDescription::new()
            .atom(-s, 0.5)
            .uniform(-s, -s + 4.0 * s, 0.5)
    }

    #[test]
    fn biu_half_moments() {
        let mv = oracle_moments(&biu_half()).unwrap();
        assert!(mv.mu.abs() < 1e-15);
        assert!((mv.sigma2 - 1.0).abs() < 1e-14);
        assert!((mv.nu(4) - 297.0 / 125.0).abs() < 1e-12 * 2.376);
        assert!((mv.nu(8) - 4437.0 / 125.0).abs() < 1e-12 * 35.5);
    }

    #[test]
    fn three_point_atoms() {
        let m = MeasureDescription::new()
            .atom(-1.0, 1.0 / 3.0)
            .atom(0.0, 0.5)
            .atom(2.0, 1.0 / 6.0);
        let mv = oracle_moments(&m).unwrap();
        assert!((mv.nu(3) - 1.0).abs() < 1e-14 && (mv.nu(4) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn exponential_pieces() {
        let m = MeasureDescription::new()
            .segment(
                0.0,
                f64::INFINITY,
                DensityKind::Exponential {
                    coef: 0.5,
                    shift: 0.0,
                    scale: 1.0,
                },
            )
            .segment(
                1.0,
                f64::INFINITY,
                DensityKind::Exponential {
                    coef: 0.5,
                    shift: 1.0,
                    scale: 1.0,
                },
            );
        let raw = oracle_raw_moments(&m, 2).unwrap();
        assert!((raw[1] - 1.5).abs() < 1e-15);
        assert!((raw[2] - 3.5).abs() < 1e-14);
        // truncated piece: ∫₀¹ e^{−x} dx
        let t = MeasureDescription::new().segment(
            0.0,
            1.0,
            DensityKind::Exponential {
                coef: 1.0,
                shift: 0.0,
                scale: 1.0,
            },
        );
        assert!((t.total_mass() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn gaussian_pieces() {
        let m = MeasureDescription::new()
            .gaussian(0.5, 0.0, 1.0)
            .gaussian(0.5, 5.0, 1.0);
        let mv = oracle_moments(&m).unwrap();
        assert!((mv.mu - 2.5).abs() < 1e-13);
        assert!((mv.sigma2 - 7.25).abs() < 1e-12);
        assert!(mv.nu(3).abs() < 1e-12);
    }

    #[test]
    fn normalization_errors() {
        let m = MeasureDescription::new().atom(0.0, 0.7);
        assert!(matches!(oracle_moments(&m), Err(Error::NotNormalized(_))));
        let m = MeasureDescription::new().atom(0.0, -0.1).atom(1.0, 1.1);
        assert!(matches!(oracle_moments(&m), Err(Error::InvalidMeasure(_))));
        let m = MeasureDescription::new().uniform(1.0, 0.0, 1.0);
        assert!(oracle_moments(&m).is_err());
        assert!(oracle_raw_moments(&biu_half(), 9).is_err());
    }

    #[test]
    fn khintchine_of_constant_is_uniform() {
        let mv = oracle_khintchine(&MeasureDescription::new().atom(1.0, 1.0)).unwrap();
        assert!((mv.nu(4) - 1.8).abs() < 1e-14);
        assert!((mv.mu - 0.5).abs() < 1e-15);
    }

    #[test]
    fn khintchine_of_two_point_is_biu_half() {
        let top = 4.0 * 0.6f64.sqrt();
        let mv = oracle_khintchine(&MeasureDescription::new().atom(0.0, 0.5).atom(top, 0.5)).unwrap();
        assert!((mv.delta() - 1.512).abs() < 1e-10);
    }

    #[test]
    fn khintchine_of_uniform_is_product_of_uniforms() {
        let z = MeasureDescription::new().uniform(0.0, 1.0, 1.0);
        let x = khintchine_measure(&z).unwrap();
        let raw = oracle_raw_moments(&x, 8).unwrap();
        for (k, r) in raw.iter().enumerate() {
            let want = 1.0 / ((k + 1) * (k + 1)) as f64;
            assert!((r - want).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn khintchine_divides_raw_moments() {
        let zs = [
            MeasureDescription::new()
                .uniform(-2.0, 3.0, 0.4)
                .atom(1.5, 0.35)
                .atom(-0.5, 0.25),
            MeasureDescription::new()
                .uniform(0.5, 2.0, 0.5)
                .uniform(-3.0, -1.0, 0.5),
            MeasureDescription::new().atom(0.0, 0.2).atom(2.0, 0.8),
        ];
        for z in &zs {
            let rz = oracle_raw_moments(z, 8).unwrap();
            let rx = oracle_raw_moments(&khintchine_measure(z).unwrap(), 8).unwrap();
            for k in 0..=8 {
                let want = rz[k] / (k + 1) as f64;
                assert!((rx[k] - want).abs() < 1e-12 * want.abs().max(1.0), "k={k}");
            }
        }
    }
}

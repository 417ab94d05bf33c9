//! Skewness-kurtosis sets: the Pearson, unimodal and symmetric-unimodal floors,
//! the offset function L(α, τ) in its printed and rederived forms, the
//! numerically minimized unimodal boundary b(τ), region classification and the
//! three-point construction attaining any point above the Pearson parabola.
//!
//! The rederived offset comes from the Khintchine representation X = U·Z with
//! Z standardized to mean α and unit variance. Then `E X^k = E Z^k/(k+1)`,
//! `var X = (4+α²)/12` and `E(X − EX)³ = (τ_G + α)/4`, so the mixing skewness
//! that yields output skewness τ is `τ_G = τ(4+α²)^{3/2}/(6√3) − α`. Taking G on
//! its Pearson floor (`κ_G = τ_G² + 1`) gives the offset. It agrees with the
//! printed L at |α| = 1 with ατ < 0 only for the anchor τ = ±2(3/5)^{3/2};
//! elsewhere the two differ, most visibly at τ = 0 where the rederived offset
//! is identically 9/5 while the printed one dips to about 1.586.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::unimodal_delta_bound;
use crate::error::{check_range, Error, Result};
use crate::families::{DistributionSpec, Sign};
use crate::moments::SkKurtPoint;
use crate::scalar::Field;

/// τ² + 1.
pub fn pearson_floor<T: Field>(tau: T) -> T {
    tau.square() + T::one()
}

/// τ² + 189/125.
pub fn unimodal_floor<T: Field>(tau: T) -> T {
    tau.square() + unimodal_delta_bound::<T>()
}

/// 9/5.
pub fn symmetric_unimodal_floor<T: Field>() -> T {
    T::ratio(9, 5)
}

/// The offset L(α, τ) exactly as printed.
pub fn l_printed(alpha: f64, tau: f64) -> f64 {
    let r3 = 3f64.sqrt();
    let a2 = alpha * alpha;
    let w = 4.0 + a2;
    let w3 = w * w * w;
    let quad = (1.0 + 4.0 * a2) * w3 * tau * tau / 3.0;
    let lin = 2.0 * alpha * w.powf(1.5) * (8.0 * r3 * a2 * a2 + (2.0 * r3 + 1.0) * a2 - 1.0) * tau;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let a8 = a4 * a4;
    let cst = 3.0 * (48.0 * a8 + (15.0 + 4.0 * r3) * a6 + (60.0 - 4.0 * r3) * a4 + 60.0 * a2 + 192.0);
    (quad + lin + cst) / (5.0 * w3)
}

/// (τ, κ) of X = U·Z where Z has mean α, unit variance, skewness `tau_g` and
/// kurtosis `kappa_g`, from `E X^k = E Z^k/(k+1)`.
pub fn khintchine_forward(alpha: f64, tau_g: f64, kappa_g: f64) -> Result<SkKurtPoint> {
    check_range("alpha", alpha, true, "finite")?;
    check_range("tau_g", tau_g, true, "finite")?;
    check_range("kappa_g", kappa_g, true, "finite")?;
    let floor = tau_g * tau_g + 1.0;
    if kappa_g < floor {
        return Err(Error::UnrealizableMixing {
            kappa: kappa_g,
            floor,
        });
    }
    let a = alpha;
    let z = [
        1.0,
        a,
        1.0 + a * a,
        tau_g + 3.0 * a + a.powi(3),
        kappa_g + 4.0 * a * tau_g + 6.0 * a * a + a.powi(4),
    ];
    let x: Vec<f64> = z.iter().enumerate().map(|(k, m)| m / (k + 1) as f64).collect();
    let mu = x[1];
    let m2 = x[2] - mu * mu;
    let m3 = x[3] - 3.0 * mu * x[2] + 2.0 * mu.powi(3);
    let m4 = x[4] - 4.0 * mu * x[3] + 6.0 * mu * mu * x[2] - 3.0 * mu.powi(4);
    let point = SkKurtPoint::new(m3 / m2.powf(1.5), m4 / (m2 * m2));
    debug_assert!(
        (point.kappa - khintchine_kappa_printed(alpha, tau_g, kappa_g)).abs()
            <= 1e-10 * point.kappa.abs().max(1.0),
        "Khintchine kurtosis disagrees with the closed display at alpha={alpha}"
    );
    Ok(point)
}

/// The closed kurtosis display
/// `κ = τ² − 108w⁻³(τ_G + α)² + (9/5)w⁻²(16κ_G + 24ατ_G + 16α² + α⁴)`, w = 4 + α².
pub fn khintchine_kappa_printed(alpha: f64, tau_g: f64, kappa_g: f64) -> f64 {
    let w = 4.0 + alpha * alpha;
    let tau = (tau_g + alpha) * 6.0 * 3f64.sqrt() / w.powf(1.5);
    tau * tau - 108.0 * (tau_g + alpha).powi(2) / w.powi(3)
        + 1.8 * (16.0 * kappa_g + 24.0 * alpha * tau_g + 16.0 * alpha * alpha + alpha.powi(4)) / (w * w)
}

/// Skewness τ_G of the mixing law (mean α, unit variance) that makes U·Z have skewness τ.
pub fn mixing_skewness(alpha: f64, tau: f64) -> f64 {
    tau * (4.0 + alpha * alpha).powf(1.5) / (6.0 * 3f64.sqrt()) - alpha
}

/// κ − τ² of U·Z with G on its Pearson floor and τ_G from [`mixing_skewness`].
pub fn l_rederived(alpha: f64, tau: f64) -> f64 {
    let tau_g = mixing_skewness(alpha, tau);
    let point = khintchine_forward(alpha, tau_g, tau_g * tau_g + 1.0)
        .expect("mixing law on its Pearson floor is realizable");
    point.kappa - tau * tau
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LVariant {
    Printed,
    Rederived,
}

impl LVariant {
    pub fn eval(self, alpha: f64, tau: f64) -> f64 {
        match self {
            LVariant::Printed => l_printed(alpha, tau),
            LVariant::Rederived => l_rederived(alpha, tau),
        }
    }
}

impl std::str::FromStr for LVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "printed" => Ok(LVariant::Printed),
            "rederived" => Ok(LVariant::Rederived),
            other => Err(format!(
                "unknown L variant `{other}` (expected printed or rederived)"
            )),
        }
    }
}

pub const GRID_STEP: f64 = 0.05;
pub const INITIAL_HALF_WIDTH: f64 = 8.0;
/// Search half-width cap. At τ = 0 the rederived offset is flat, so the
/// doubling rule alone would never stop.
pub const MAX_HALF_WIDTH: f64 = 4096.0;
/// Golden-section tolerance in α.
pub const ALPHA_TOL: f64 = 1e-10;
const TIE_RTOL: f64 = 1e-12;

/// A located minimum: `b = τ² + L(α*, τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub tau: f64,
    pub b: f64,
    pub alpha_star: f64,
}

fn is_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_RTOL * a.abs().max(b.abs())
}

fn golden_section(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > ALPHA_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Global minimum over α of `f`: symmetric grid, widened by doubling until
/// the edge values reach twice the interior minimum, then golden section.
/// Near-ties on the grid go to the smallest |α|, negative first.
pub fn minimize_offset(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut half = INITIAL_HALF_WIDTH;
    let (alpha_grid, f_grid) = loop {
        let m = (half / GRID_STEP).round() as i64;
        let values: Vec<(f64, f64)> = (-m..=m)
            .map(|i| {
                let a = i as f64 * GRID_STEP;
                (a, f(a))
            })
            .collect();
        let fmin = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        let edge = values[0].1.min(values[values.len() - 1].1);
        if edge >= 2.0 * fmin || half >= MAX_HALF_WIDTH {
            let best = values
                .iter()
                .filter(|v| is_tie(v.1, fmin) || v.1 == fmin)
                .min_by(|x, y| {
                    x.0.abs()
                        .partial_cmp(&y.0.abs())
                        .unwrap()
                        .then(x.0.partial_cmp(&y.0).unwrap())
                })
                .copied()
                .expect("grid is non-empty");
            break best;
        }
        half *= 2.0;
    };
    let (a, fa) = golden_section(&f, alpha_grid - GRID_STEP, alpha_grid + GRID_STEP);
    if fa < f_grid && !is_tie(fa, f_grid) {
        (a, fa)
    } else {
        (alpha_grid, f_grid)
    }
}

/// `b(τ) = τ² + min_α L(α, τ)` and the located minimizer.
pub fn boundary(tau: f64, which: LVariant) -> BoundaryPoint {
    let (alpha_star, offset) = minimize_offset(|a| which.eval(a, tau));
    BoundaryPoint {
        tau,
        b: tau * tau + offset,
        alpha_star,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub taus: Vec<f64>,
    pub b: Vec<f64>,
    pub alpha_star: Vec<f64>,
    pub which: LVariant,
}

impl BoundaryCurve {
    /// `f(τ) = τ² + 189/125` at each grid point.
    pub fn f(&self) -> Vec<f64> {
        self.taus.iter().map(|&t| unimodal_floor(t)).collect()
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }
}

/// Evenly spaced grid; node i is `(min·(steps−1−i) + max·i)/(steps−1)`, so a
/// grid with `min = −max` is exactly symmetric.
pub fn tau_grid(tau_min: f64, tau_max: f64, steps: usize) -> Result<Vec<f64>> {
    check_range("tau_min", tau_min, tau_min < tau_max, "tau_min < tau_max")?;
    check_range("tau_max", tau_max, true, "finite")?;
    if steps < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "steps",
            value: steps as f64,
            range: "steps >= 2",
        });
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| (tau_min * (last - i as f64) + tau_max * i as f64) / last)
        .collect())
}

/// b(τ) over a grid, evaluated in parallel; the result does not depend on scheduling.
pub fn boundary_curve(tau_min: f64, tau_max: f64, steps: usize, which: LVariant) -> Result<BoundaryCurve> {
    let taus = tau_grid(tau_min, tau_max, steps)?;
    let points: Vec<BoundaryPoint> = taus.par_iter().map(|&t| boundary(t, which)).collect();
    Ok(BoundaryCurve {
        b: points.iter().map(|p| p.b).collect(),
        alpha_star: points.iter().map(|p| p.alpha_star).collect(),
        taus,
        which,
    })
}

/// Membership tolerance for the closed-form floors.
pub const MEMBERSHIP_TOL: f64 = 1e-12;
/// Tolerance for `above_b`, which depends on a numerical minimum.
pub const BOUNDARY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub point: SkKurtPoint,
    pub pearson_ok: bool,
    pub unimodal_consistent: bool,
    pub above_b: bool,
    pub symmetric_unimodal_member: bool,
    /// b(τ) from the rederived offset.
    pub b: f64,
    /// κ − b(τ).
    pub margin: f64,
}

pub fn classify(point: SkKurtPoint) -> RegionVerdict {
    let tol = |x: f64| MEMBERSHIP_TOL * x.abs().max(1.0);
    let delta = point.delta;
    let pearson_ok = delta >= 1.0 - tol(delta);
    let unimodal_consistent = delta >= unimodal_delta_bound::<f64>() - tol(delta);
    let symmetric_unimodal_member = point.tau.abs() <= MEMBERSHIP_TOL
        && point.kappa >= symmetric_unimodal_floor::<f64>() - tol(point.kappa);
    let bp = boundary(point.tau, LVariant::Rederived);
    let margin = point.kappa - bp.b;
    let above_b = margin >= -BOUNDARY_TOL * bp.b.abs().max(1.0);
    RegionVerdict {
        point,
        pearson_ok: pearson_ok || unimodal_consistent || above_b || symmetric_unimodal_member,
        unimodal_consistent,
        above_b,
        symmetric_unimodal_member,
        b: bp.b,
        margin,
    }
}

/// A three-point law with skewness τ₀ and kurtosis κ₀: `z = κ₀ − τ₀² − 1` and
/// `√α = 2/(c + √(c² + 4))` with `c = |τ₀|/√(1+z)`, the positive root of
/// `s² + cs − 1 = 0`.
pub fn construct_attaining(tau0: f64, kappa0: f64) -> Result<DistributionSpec> {
    check_range("tau", tau0, true, "finite")?;
    check_range("kappa", kappa0, true, "finite")?;
    if kappa0 < pearson_floor(tau0) {
        return Err(Error::BelowPearsonBoundary {
            tau: tau0,
            kappa: kappa0,
        });
    }
    let z = (kappa0 - tau0 * tau0 - 1.0).max(0.0);
    let c = tau0.abs() / (1.0 + z).sqrt();
    let s = 2.0 / (c + (c * c + 4.0).sqrt());
    Ok(DistributionSpec::ThreePoint {
        alpha: (s * s).min(1.0),
        z,
        sign: Sign::of(tau0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn tau_star() -> f64 {
        2.0 * 0.6f64.powf(1.5)
    }

    #[test]
    fn floors() {
        let r = |a, b| BigRational::ratio(a, b);
        assert_eq!(pearson_floor(r(0, 1)), r(1, 1));
        assert_eq!(symmetric_unimodal_floor::<BigRational>(), r(9, 5));
        // τ² = 108/125 at the anchor
        assert_eq!(r(108, 125) + unimodal_delta_bound::<BigRational>(), r(297, 125));
        assert!((unimodal_floor(tau_star()) - 297.0 / 125.0).abs() < 1e-14);
    }

    #[test]
    fn printed_anchors() {
        for a in [-1.0, 0.0, 1.0] {
            assert_eq!(l_printed(a, 0.0), 1.8);
        }
        let t = tau_star();
        assert!((l_printed(1.0, -t) - 1.512).abs() < 1e-12);
        assert!((l_printed(-1.0, t) - 1.512).abs() < 1e-12);
    }

    #[test]
    fn rederived_closed_form() {
        for &a in &[-3.0, -1.0, -0.2, 0.0, 0.7, 2.5] {
            for &t in &[-1.5, -0.3, 0.0, 0.9, 2.0] {
                let w: f64 = 4.0 + a * a;
                let e = 1.8 + t * t * (1.0 + 4.0 * a * a) / 15.0 - 0.8 * 3f64.sqrt() * a * t / w.sqrt();
                assert!((l_rederived(a, t) - e).abs() < 1e-12, "a={a} t={t}");
            }
        }
    }

    #[test]
    fn khintchine_examples() {
        let p = khintchine_forward(1.0, 0.0, 1.0).unwrap();
        assert!((p.tau - 1.2 * 0.6f64.sqrt()).abs() < 1e-14);
        assert!((p.kappa - 297.0 / 125.0).abs() < 1e-13);
        for kg in [1.0, 3.0, 10.0] {
            assert_eq!(khintchine_forward(0.0, 0.0, kg).unwrap().tau, 0.0);
        }
        // product of two uniforms: E X^k = 1/(k+1)²
        let raw: Vec<f64> = (0..5).map(|k| 1.0 / ((k + 1) * (k + 1)) as f64).collect();
        let mu = raw[1];
        let m2 = raw[2] - mu * mu;
        let m3 = raw[3] - 3.0 * mu * raw[2] + 2.0 * mu.powi(3);
        let p = khintchine_forward(3f64.sqrt(), 0.0, 1.8).unwrap();
        assert!((p.tau - m3 / m2.powf(1.5)).abs() < 1e-12);
        assert!((p.tau - 0.9719).abs() < 1e-4);
        assert!(matches!(
            khintchine_forward(0.0, 1.0, 1.5),
            Err(Error::UnrealizableMixing { .. })
        ));
    }

    #[test]
    fn printed_kappa_display_matches() {
        for &a in &[-2.0, -0.5, 0.0, 0.3, 1.0, 4.0] {
            for &tg in &[-1.0, 0.0, 0.6, 2.0] {
                for &z in &[0.0, 0.5, 3.0] {
                    let kg = tg * tg + 1.0 + z;
                    let p = khintchine_forward(a, tg, kg).unwrap();
                    let q = khintchine_kappa_printed(a, tg, kg);
                    assert!((p.kappa - q).abs() < 1e-10 * q.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn boundary_anchor_both_variants() {
        for which in [LVariant::Printed, LVariant::Rederived] {
            for t in [tau_star(), -tau_star()] {
                let bp = boundary(t, which);
                assert!((bp.b - t * t - 1.512).abs() < 1e-6, "{which:?} {bp:?}");
                assert!((bp.alpha_star.abs() - 1.0).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn boundary_at_zero() {
        let p = boundary(0.0, LVariant::Printed);
        assert!(p.b < 1.8 && (p.b - 1.586).abs() < 1e-3, "{p:?}");
        assert!(p.alpha_star < 0.0);
        let r = boundary(0.0, LVariant::Rederived);
        assert!((r.b - 1.8).abs() < 1e-8);
        assert_eq!(r.alpha_star, 0.0);
    }

    #[test]
    fn symmetric_grid_is_exact() {
        let g = tau_grid(-2.0, 2.0, 41).unwrap();
        for i in 0..g.len() {
            assert_eq!(g[i], -g[g.len() - 1 - i]);
        }
        assert!(tau_grid(1.0, 1.0, 5).is_err());
        assert!(tau_grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn classify_examples() {
        let v = classify(SkKurtPoint::new(0.0, 3.0));
        assert!(v.pearson_ok && v.unimodal_consistent && v.above_b && v.symmetric_unimodal_member);
        let v = classify(SkKurtPoint::new(0.0, 1.2));
        assert!(v.pearson_ok && !v.unimodal_consistent && !v.symmetric_unimodal_member);
        let t = 1.2 * 0.6f64.sqrt();
        let v = classify(SkKurtPoint::new(t, 297.0 / 125.0));
        assert!(v.unimodal_consistent);
        assert!((v.point.delta - 1.512).abs() < 1e-12);
        let v = classify(SkKurtPoint::new(0.5, 0.9));
        assert!(!v.pearson_ok && !v.above_b);
    }

    #[test]
    fn construct_examples() {
        let DistributionSpec::ThreePoint { alpha, z, .. } = construct_attaining(0.0, 1.0).unwrap() else {
            panic!()
        };
        assert_eq!((alpha, z), (1.0, 0.0));
        let DistributionSpec::ThreePoint { alpha, z, sign } = construct_attaining(1.0, 3.0).unwrap() else {
            panic!()
        };
        assert!((alpha - 0.5).abs() < 1e-15 && z == 1.0 && sign == Sign::Plus);
        assert!(matches!(
            construct_attaining(2.0, 4.0),
            Err(Error::BelowPearsonBoundary { .. })
        ));
    }
}

//! Cross-checks of every closed form against the moment oracle.

use serde::{Deserialize, Serialize};

use crate::asymptotic::asymptotic_variance;
use crate::boundary::{boundary, construct_attaining, khintchine_forward, LVariant};
use crate::error::Result;
use crate::families::biu::{biu_delta, biu_endpoint, biu_scale, biu_varsigma2};
use crate::families::mixed_exp::{mixexp_delta_printed, mixexp_printed_moments};
use crate::families::three_point::threepoint_atoms;
use crate::families::{DistributionSpec, Sign};
use crate::oracle::{oracle_khintchine, oracle_moments, DensityKind, MeasureDescription};

pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub check: String,
    pub params: String,
    pub quantity: String,
    pub closed: f64,
    pub oracle: f64,
    /// `|closed − oracle| / max(1, |oracle|)`.
    pub rel_err: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    fn push(&mut self, check: &str, params: &str, quantity: &str, closed: f64, oracle: f64) {
        let rel_err = (closed - oracle).abs() / oracle.abs().max(1.0);
        self.rows.push(VerifyRow {
            check: check.to_string(),
            params: params.to_string(),
            quantity: quantity.to_string(),
            closed,
            oracle,
            rel_err,
            pass: rel_err <= self.tolerance,
        });
    }
}

/// The law of a family member as an oracle measure.
pub fn family_measure(spec: &DistributionSpec) -> Result<MeasureDescription> {
    spec.validate()?;
    let m = MeasureDescription::new();
    Ok(match *spec {
        DistributionSpec::Biu { p } => {
            let s = biu_endpoint(p);
            m.atom(-s, 1.0 - p).uniform(-s, biu_scale(p) - s, p)
        }
        DistributionSpec::MixedNormal { p, d } => m.gaussian(1.0 - p, 0.0, 1.0).gaussian(p, d, 1.0),
        DistributionSpec::MixedExponential { p, d } => m
            .segment(
                0.0,
                f64::INFINITY,
                DensityKind::Exponential {
                    coef: 1.0 - p,
                    shift: 0.0,
                    scale: 1.0,
                },
            )
            .segment(
                d,
                f64::INFINITY,
                DensityKind::Exponential {
                    coef: p,
                    shift: d,
                    scale: 1.0,
                },
            ),
        DistributionSpec::ThreePoint { alpha, z, sign } => threepoint_atoms(alpha, z, sign)
            .iter()
            .fold(m, |m, &(x, w)| m.atom(x, w)),
        DistributionSpec::UniformAtom { p } => m.atom(0.0, 1.0 - p).uniform(-1.0, 1.0, p),
        DistributionSpec::TwoPointUniformMix { p } => {
            m.atom(2.0, 0.5 * p).atom(3.0, 0.5 * p).uniform(0.0, 1.0, 1.0 - p)
        }
    })
}

/// Parameter grids swept by [`verify_all`].
pub fn default_grid() -> Vec<DistributionSpec> {
    let mut out = Vec::new();
    for p in [0.05, 0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 1.0] {
        out.push(DistributionSpec::Biu { p });
    }
    for p in [0.0, 0.1, 0.3, 0.5, 0.8] {
        for d in [0.0, 1.0, 3.0, 5.2, 8.0] {
            out.push(DistributionSpec::MixedNormal { p, d });
        }
    }
    for p in [0.0, 0.05, 0.2, 0.5, 0.9, 1.0] {
        for d in [0.5, 1.0, 3.0, 6.0] {
            out.push(DistributionSpec::MixedExponential { p, d });
        }
    }
    for alpha in [0.1, 0.5, 1.0] {
        for z in [0.0, 1.0, 5.0] {
            for sign in [Sign::Plus, Sign::Minus] {
                out.push(DistributionSpec::ThreePoint { alpha, z, sign });
            }
        }
    }
    for p in [0.1, 0.5, 1.0] {
        out.push(DistributionSpec::UniformAtom { p });
    }
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        out.push(DistributionSpec::TwoPointUniformMix { p });
    }
    out
}

fn family_checks(report: &mut VerifyReport, spec: &DistributionSpec) -> Result<()> {
    let fam = spec.family();
    let params = spec.to_string();
    let oracle = oracle_moments(&family_measure(spec)?)?;
    let stats = spec.stats()?;
    report.push(fam, &params, "tau", stats.tau, oracle.nu(3));
    report.push(fam, &params, "kappa", stats.kappa, oracle.nu(4));
    report.push(fam, &params, "delta", stats.delta, oracle.delta());
    let exact = spec.exact_moment_vector()?;
    report.push(fam, &params, "mu", exact.mu, oracle.mu);
    report.push(fam, &params, "sigma2", exact.sigma2, oracle.sigma2);
    for k in 3..=8 {
        report.push(fam, &params, &format!("nu{k}"), exact.nu(k), oracle.nu(k));
    }
    match *spec {
        DistributionSpec::Biu { p } => {
            report.push(fam, &params, "delta closed form", biu_delta(p)?, oracle.delta());
            report.push(
                fam,
                &params,
                "varsigma2 closed form",
                biu_varsigma2(p)?,
                asymptotic_variance(&oracle)?,
            );
        }
        DistributionSpec::MixedExponential { p, d } => {
            let [mean, var, m3, m4] = mixexp_printed_moments(p, d)?;
            let s = oracle.sigma2.sqrt();
            report.push("mixexp display", &params, "EX", mean, oracle.mu);
            report.push("mixexp display", &params, "var", var, oracle.sigma2);
            report.push("mixexp display", &params, "m3", m3, oracle.nu(3) * s.powi(3));
            report.push("mixexp display", &params, "m4", m4, oracle.nu(4) * s.powi(4));
            report.push(
                "mixexp display",
                &params,
                "delta",
                mixexp_delta_printed(p, d)?,
                oracle.delta(),
            );
        }
        _ => {}
    }
    Ok(())
}

/// Mixing law with mean α, unit variance, skewness τ_G and kurtosis τ_G² + 1 + z.
pub fn shifted_three_point(alpha: f64, tau_g: f64, z: f64) -> Result<MeasureDescription> {
    let spec = construct_attaining(tau_g, tau_g * tau_g + 1.0 + z)?;
    family_measure(&spec).map(|m| MeasureDescription {
        atoms: m.atoms.iter().map(|&(x, w)| (x + alpha, w)).collect(),
        ..m
    })
}

fn khintchine_checks(report: &mut VerifyReport) -> Result<()> {
    for &(alpha, tau_g, z) in &[
        (1.0, 0.0, 0.0),
        (-0.5, 0.8, 0.3),
        (2.0, -1.2, 1.5),
        (0.0, 0.0, 2.0),
        (0.3, 2.0, 0.0),
    ] {
        let params = format!("alpha={alpha}, tau_G={tau_g}, z={z}");
        let fwd = khintchine_forward(alpha, tau_g, tau_g * tau_g + 1.0 + z)?;
        let orc = oracle_khintchine(&shifted_three_point(alpha, tau_g, z)?)?;
        report.push("khintchine", &params, "tau", fwd.tau, orc.nu(3));
        report.push("khintchine", &params, "kappa", fwd.kappa, orc.nu(4));
    }
    // the rederived boundary at τ = 0 is attained by α* with τ_G = −α*
    let bp = boundary(0.0, LVariant::Rederived);
    let a = bp.alpha_star;
    let orc = oracle_khintchine(&shifted_three_point(a, -a, 0.0)?)?;
    report.push(
        "boundary",
        "tau=0, rederived",
        "b",
        bp.b,
        orc.nu(4) - orc.nu(3).powi(2),
    );
    Ok(())
}

/// Runs every family check over [`default_grid`] plus the Khintchine checks.
pub fn verify_all() -> Result<VerifyReport> {
    let mut report = VerifyReport {
        tolerance: VERIFY_TOL,
        rows: Vec::new(),
    };
    for spec in default_grid() {
        family_checks(&mut report, &spec)?;
    }
    khintchine_checks(&mut report)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_passes() {
        let report = verify_all().unwrap();
        let bad: Vec<_> = report.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(report.rows.len() > 500);
    }

    #[test]
    fn measures_are_normalized() {
        for spec in default_grid() {
            let m = family_measure(&spec).unwrap();
            assert!((m.total_mass() - 1.0).abs() < 1e-12, "{spec}");
        }
    }
}

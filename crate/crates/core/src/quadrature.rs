//! Adaptive Gauss-Legendre quadrature.

use std::sync::OnceLock;

const ORDER: usize = 20;
const MAX_DEPTH: u32 = 30;

/// Nodes and weights of the `ORDER`-point rule on [−1, 1], by Newton
/// iteration on the Legendre polynomial.
fn rule() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut x = [0.0; ORDER];
        let mut w = [0.0; ORDER];
        let n = ORDER as f64;
        for i in 0..ORDER {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=ORDER {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

fn fixed(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * x
        .iter()
        .zip(w)
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
}

fn refine(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = fixed(f, a, m);
    let right = fixed(f, m, b);
    let sum = left + right;
    if depth == 0 || (sum - whole).abs() <= tol {
        return sum;
    }
    refine(f, a, m, left, 0.5 * tol, depth - 1) + refine(f, m, b, right, 0.5 * tol, depth - 1)
}

/// ∫ₐᵇ f with absolute error target `rtol·∫ₐᵇ|f|`. The target is floored at
/// a small multiple of machine precision, below which splitting cannot help.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rtol: f64) -> f64 {
    let scale = fixed(&|x| f(x).abs(), a, b);
    let tol = rtol.max(64.0 * f64::EPSILON) * scale;
    let whole = fixed(&f, a, b);
    refine(&f, a, b, whole, tol, MAX_DEPTH)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_weights() {
        let (x, w) = rule();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.iter().all(|v| v.abs() < 1.0));
    }

    #[test]
    fn polynomials_exact() {
        for k in 0..=39 {
            let got = fixed(&|x: f64| x.powi(k), -1.0, 1.0);
            let want = if k % 2 == 0 { 2.0 / (k + 1) as f64 } else { 0.0 };
            assert!((got - want).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn gaussian_mass() {
        let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((integrate(phi, -12.0, 12.0, 1e-15) - 1.0).abs() < 1e-14);
        assert!((integrate(|x| x.powi(4) * phi(x), -12.0, 12.0, 1e-15) - 3.0).abs() < 1e-13);
    }
}

use proptest::prelude::*;
use skewkurt::moments::central_moments;
use skewkurt::{oracle_moments, sample_moment_vector, t_statistic, MeasureDescription, Sample};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn non_constant(v: &[f64]) -> bool {
    v.iter().any(|&x| (x - v[0]).abs() > 1e-6 * v[0].abs().max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn affine_invariance(
        v in prop::collection::vec(-50.0f64..50.0, 4..120),
        a in prop_oneof![-20.0f64..-0.05, 0.05f64..20.0],
        b in -1e3f64..1e3,
    ) {
        prop_assume!(non_constant(&v));
        let s = Sample::new(v).unwrap();
        let moved = s.affine(a, b).unwrap();
        let t0 = t_statistic(&s).unwrap();
        let t1 = t_statistic(&moved).unwrap();
        prop_assert!(rel(t1, t0) < 1e-9, "{t0} vs {t1}");

        let m0 = sample_moment_vector(&s).unwrap();
        let m1 = sample_moment_vector(&moved).unwrap();
        for k in 3..=8 {
            let flip = if a < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            let (x, y) = (flip * m0.nu(k), m1.nu(k));
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "k={k}: {x} vs {y}");
        }
    }

    #[test]
    fn pearson_floor(v in prop::collection::vec(-1e4f64..1e4, 4..300)) {
        prop_assume!(non_constant(&v));
        let t = t_statistic(&Sample::new(v).unwrap()).unwrap();
        prop_assert!(t >= 1.0 - 1e-12, "{t}");
    }

    #[test]
    fn two_point_samples_sit_near_the_floor(k in 2usize..60, x in -100.0f64..100.0, h in 0.01f64..100.0) {
        let v: Vec<f64> = (0..2 * k).map(|i| if i % 2 == 0 { x - h } else { x + h }).collect();
        let t = t_statistic(&Sample::new(v).unwrap()).unwrap();
        prop_assert!(t >= 1.0 - 1e-12 && t <= 1.0 + 1e-9, "{t}");
    }

    #[test]
    fn expanded_atoms_agree_with_oracle(
        atoms in prop::collection::vec((-10.0f64..10.0, 1usize..6), 2..6),
    ) {
        let xs: Vec<f64> = atoms.iter().map(|a| a.0).collect();
        prop_assume!(non_constant(&xs));
        let total: usize = atoms.iter().map(|a| a.1).sum();
        let mut values = Vec::with_capacity(total);
        let mut measure = MeasureDescription::new();
        for &(x, count) in &atoms {
            values.extend(std::iter::repeat(x).take(count));
            measure = measure.atom(x, count as f64 / total as f64);
        }
        let emp = sample_moment_vector(&Sample::new(values).unwrap()).unwrap();
        let exact = oracle_moments(&measure).unwrap();
        prop_assert!(rel(emp.mu, exact.mu) < 1e-12);
        prop_assert!(rel(emp.sigma2, exact.sigma2) < 1e-12);
        for k in 3..=8 {
            prop_assert!(rel(emp.nu(k), exact.nu(k)) < 1e-12, "k={k}: {} vs {}", emp.nu(k), exact.nu(k));
        }
    }
}

#[test]
fn central_moment_examples() {
    let m = central_moments(&Sample::new(vec![-1.0, 1.0]).unwrap(), 4).unwrap();
    assert_eq!(m, vec![1.0, 0.0, 1.0]);
    let m: Vec<f64> = central_moments(&Sample::new(vec![0.0, 1.0, 2.0]).unwrap(), 4).unwrap();
    assert!((m[0] - 2.0 / 3.0).abs() < 1e-15 && m[1].abs() < 1e-15 && (m[2] - 2.0 / 3.0).abs() < 1e-15);
    let m = central_moments(&Sample::new(vec![4.2; 3]).unwrap(), 2).unwrap();
    assert_eq!(m, vec![0.0]);
}

#[test]
fn pearson_floor_at_ten_million() {
    // a far-off-centre balanced two-point sample: exactly 1 in exact arithmetic
    let v: Vec<f64> = (0..10_000_000)
        .map(|i| if i % 2 == 0 { 999.0 } else { 1001.0 })
        .collect();
    let t = t_statistic(&Sample::new(v).unwrap()).unwrap();
    assert!(t >= 1.0 - 1e-12, "{t}");
    assert!(t - 1.0 < 1e-9, "{t}");
}

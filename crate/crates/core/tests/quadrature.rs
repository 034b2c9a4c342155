use discspace::quadrature::{
    area_ladder, bergman_norm, bloch_seminorm, classify_ladder, dirichlet_type_norm, green, hardy_norm, mean_p, qs_seminorm,
    Classification, Growth, LadderOptions, QuadratureConfig,
};
use discspace::{AnalyticFunction, PowerSeries, C64};
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

/// Binomial coefficients of (1-z)^(-beta): c_0 = 1, c_{k+1} = c_k (k+beta)/(k+1).
fn binomial_coeffs(beta: f64, n: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for k in 0..n {
        let next = c[k] * (k as f64 + beta) / (k as f64 + 1.0);
        c.push(next);
    }
    c
}

/// Parseval: M_2(r, f)^2 = sum |c_k|^2 r^(2k).
fn parseval(c: &[f64], r: f64) -> f64 {
    c.iter().enumerate().map(|(k, c)| c * c * r.powi(2 * k as i32)).sum()
}

#[test]
fn monomial_means() {
    let f = AnalyticFunction::monomial(5);
    for &r in &[0.0, 0.3, 0.9, 0.999] {
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let m = mean_p(&f, r, p, &cfg()).unwrap();
            assert!((m - r.powi(5)).abs() < 1e-12, "r={r} p={p} m={m}");
        }
    }
}

#[test]
fn parseval_oracle_for_power_series() {
    let c = [1.0, -0.5, 0.25, 3.0, 0.0, 0.0, 1.5];
    let f: AnalyticFunction = PowerSeries::from_real(&c).into();
    for &r in &cfg().radius_ladder {
        let m = mean_p(&f, r, 2.0, &cfg()).unwrap();
        let exact = parseval(&c, r);
        let total: f64 = c.iter().map(|c| c * c).sum();
        assert!((m * m - exact).abs() < 1e-9 * (1.0 + total));
    }
}

#[test]
fn binomial_max_modulus() {
    for beta in [0.3, 1.0, 2.5] {
        let f = AnalyticFunction::binomial(beta).unwrap();
        for r in [0.5, 0.9, 0.999] {
            let m = mean_p(&f, r, f64::INFINITY, &cfg()).unwrap();
            let exact = (1.0 - r).powf(-beta);
            assert!((m / exact - 1.0).abs() < 1e-10, "beta={beta} r={r}");
        }
    }
}

#[test]
fn binomial_mean_two_matches_parseval() {
    // At r = 0.9 the coefficient sum has converged far below 1e-12 by k = 600.
    let beta = 0.7;
    let c = binomial_coeffs(beta, 600);
    let f = AnalyticFunction::binomial(beta).unwrap();
    let m = mean_p(&f, 0.9, 2.0, &cfg()).unwrap();
    let exact = parseval(&c, 0.9).sqrt();
    assert!((m / exact - 1.0).abs() < 1e-10, "{m} vs {exact}");
}

#[test]
fn hardy_examples() {
    let rep = hardy_norm(&AnalyticFunction::constant(2.0), 3.0, &cfg()).unwrap();
    assert!((rep.estimate().unwrap() - 2.0).abs() < 1e-12);
    let rep = hardy_norm(&AnalyticFunction::binomial(0.3).unwrap(), 2.0, &cfg()).unwrap();
    assert!(rep.classification.converges(), "{rep:?}");
    let rep = hardy_norm(&AnalyticFunction::binomial(1.0).unwrap(), 2.0, &cfg()).unwrap();
    assert!(rep.classification.diverges(), "{rep:?}");
}

#[test]
fn bergman_examples() {
    for (p, alpha) in [(1.0, 0.0), (2.0, 1.5), (3.0, -0.5)] {
        let rep = bergman_norm(&AnalyticFunction::constant(-3.0), p, alpha, &cfg()).unwrap();
        let est = rep.estimate().unwrap();
        assert!((est - 3.0).abs() < 1e-6, "p={p} alpha={alpha}: {est}");
    }
    for n in [0usize, 1, 4] {
        let rep = bergman_norm(&AnalyticFunction::monomial(n), 2.0, 0.0, &cfg()).unwrap();
        let exact = 1.0 / ((n + 1) as f64).sqrt();
        assert!((rep.estimate().unwrap() - exact).abs() < 1e-6, "n={n}");
    }
    assert!(bergman_norm(&AnalyticFunction::constant(1.0), 2.0, -1.0, &cfg()).is_err());
}

#[test]
fn bergman_binomial_threshold() {
    for (p, alpha) in [(2.0, 0.0), (1.0, 1.0), (3.0, 2.0)] {
        let beta0 = (2.0 + alpha) / p;
        let inside = bergman_norm(&AnalyticFunction::binomial(beta0 - 0.15).unwrap(), p, alpha, &cfg()).unwrap();
        assert!(inside.classification.converges(), "p={p} alpha={alpha}: {inside:?}");
        let outside = bergman_norm(&AnalyticFunction::binomial(beta0 + 0.15).unwrap(), p, alpha, &cfg()).unwrap();
        match outside.classification {
            Classification::Diverges(Growth::Power { gamma }) => {
                // |f|^p integrates like (1-r)^(alpha + 1 - beta p), and the norm takes a p-th root
                let exact = (0.15 * p) / p;
                assert!((gamma - exact).abs() < 0.02, "gamma {gamma} vs {exact}");
            }
            other => panic!("p={p} alpha={alpha}: {other:?}"),
        }
    }
}

#[test]
fn dirichlet_type_examples() {
    let rep = dirichlet_type_norm(&AnalyticFunction::constant(4.0), 2.0, 0.0, &cfg()).unwrap();
    assert!((rep.estimate().unwrap() - 4.0).abs() < 1e-12);
    for n in [1usize, 2, 7] {
        let rep = dirichlet_type_norm(&AnalyticFunction::monomial(n), 2.0, 0.0, &cfg()).unwrap();
        assert!((rep.estimate().unwrap() - (n as f64).sqrt()).abs() < 1e-6, "n={n}");
    }
    // alpha = p - 1: finite iff beta < 1/p
    for p in [1.5, 2.0, 3.0] {
        let inside = AnalyticFunction::binomial(1.0 / p - 0.15).unwrap();
        let outside = AnalyticFunction::binomial(1.0 / p + 0.15).unwrap();
        assert!(dirichlet_type_norm(&inside, p, p - 1.0, &cfg()).unwrap().classification.converges());
        assert!(dirichlet_type_norm(&outside, p, p - 1.0, &cfg()).unwrap().classification.diverges());
    }
}

#[test]
fn bloch_examples() {
    // log(1/(1-z)) = sum z^k / k truncated at degree N; (1-r^2)|f'(r)| = (1+r)(1-r^N),
    // which tends to 2 while r^N is negligible.
    let n = 1 << 15;
    let log_series: AnalyticFunction =
        PowerSeries::new((0..=n).map(|k| C64::new(if k == 0 { 0.0 } else { 1.0 / k as f64 }, 0.0)).collect()).into();
    let cfg10 = cfg().with_ladder_depth(10);
    let rep = bloch_seminorm(&log_series, &cfg10).unwrap();
    for &(r, v) in &rep.ladder {
        let oracle = (1.0 + r) * (1.0 - r.powi(n));
        assert!((v - oracle).abs() < 1e-9, "{v} vs {oracle}");
    }
    assert!((rep.estimate().unwrap() - 2.0).abs() < 1e-3, "{rep:?}");

    let rep = bloch_seminorm(&AnalyticFunction::binomial(0.2).unwrap(), &cfg()).unwrap();
    assert!(rep.classification.diverges(), "{rep:?}");
    let rep = bloch_seminorm(&AnalyticFunction::constant(5.0), &cfg()).unwrap();
    assert_eq!(rep.estimate(), Some(0.0));
}

#[test]
fn green_examples() {
    let z = C64::new(0.3, -0.4);
    assert!((green(z, C64::new(0.0, 0.0)).unwrap() - (1.0 / z.norm()).ln()).abs() < 1e-15);
    assert!((green(C64::new(0.5, 0.0), C64::new(0.2, 0.0)).unwrap() - 3f64.ln()).abs() < 1e-14);
    assert!(green(z, z).is_err());
}

#[test]
fn green_is_symmetric_and_nonnegative() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let mut point = || C64::from_polar(rng.gen_range(0.0..0.999f64).sqrt(), rng.gen_range(0.0..6.3));
    for _ in 0..1000 {
        let (z, a) = (point(), point());
        let g = green(z, a).unwrap();
        assert!(g >= 0.0);
        assert!((g - green(a, z).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn qs_examples() {
    let rep = qs_seminorm(&AnalyticFunction::constant(2.0), 0.5, &cfg()).unwrap();
    assert_eq!(rep.estimate(), Some(0.0));
    let rep = qs_seminorm(&AnalyticFunction::monomial(1), 0.0, &cfg()).unwrap();
    assert!((rep.estimate().unwrap() - 1.0).abs() < 1e-6, "{rep:?}");
    assert!(qs_seminorm(&AnalyticFunction::monomial(1), -0.1, &cfg()).is_err());
}

#[test]
fn qs_of_z_with_log_weight() {
    // For f = z and a = 0: int |1|^2 log(1/|w|)^s dA = 2 int_0^1 r log(1/r)^s dr = Gamma(s+1) / 2^s,
    // and every other a gives a smaller value.
    let s = 0.5;
    let rep = qs_seminorm(&AnalyticFunction::monomial(1), s, &cfg()).unwrap();
    let exact = 0.5 * std::f64::consts::PI.sqrt() / 2f64.sqrt();
    assert!((rep.estimate().unwrap() - exact).abs() < 1e-5, "{rep:?}");
}

#[test]
fn qs_ladder_is_monotone_for_each_a() {
    let f: AnalyticFunction = PowerSeries::from_real(&[0.0, 1.0, 0.5, 0.0, -0.25]).into();
    let mut c = cfg().with_ladder_depth(8);
    for a in [C64::new(0.0, 0.0), C64::new(0.5, 0.5), C64::new(-0.9, 0.0)] {
        c.a_grid = vec![a];
        let rep = qs_seminorm(&f, 0.3, &c).unwrap();
        assert!(rep.ladder.windows(2).all(|w| w[1].1 >= w[0].1), "{a}");
    }
}

#[test]
fn qs_finiteness_carries_to_the_measure() {
    // If the Q_s seminorm converges, so does int (1-|z|)^s |f'|^2 dA.
    let s = 0.4;
    let f: AnalyticFunction = PowerSeries::from_real(&[1.0, 0.5, 0.0, 2.0, 0.0, 0.0, 0.0, -1.0]).into();
    let mut c = cfg();
    c.a_grid = vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 0.9)];
    let q = qs_seminorm(&f, s, &c).unwrap();
    assert!(q.classification.converges(), "{q:?}");
    let ladder = area_ladder(&f.derivative(), 2.0, |r| (1.0 - r).powf(s), &c).unwrap();
    let rep = discspace::quadrature::ConvergenceReport::from_ladder(ladder, &c.ladder_options());
    assert!(rep.classification.converges(), "{rep:?}");
}

#[test]
fn bloch_growth_bound() {
    // |f(z)| <= (log 1/(1-|z|) + 1)(B + |f(0)|) for f in the Bloch space.
    let f: AnalyticFunction = PowerSeries::from_real(&[0.5, 1.0, 0.0, -2.0, 0.0, 0.5]).into();
    let rep = bloch_seminorm(&f, &cfg()).unwrap();
    let b = rep.estimate().unwrap();
    for &(r, _) in &rep.ladder {
        let m = mean_p(&f, r, f64::INFINITY, &cfg()).unwrap();
        assert!(m <= ((1.0 / (1.0 - r)).ln() + 1.0) * (b + 0.5 + 1e-3));
    }
}

#[test]
fn ladder_classifier_examples() {
    let opts = LadderOptions::default();
    let t: Vec<f64> = (1..=5).map(f64::from).collect();
    let (c, _) = classify_ladder(&t, &[1.0, 1.5, 1.75, 1.875, 1.9375], &opts);
    assert!((c.estimate().unwrap() - 2.0).abs() < 1e-6);

    let t: Vec<f64> = (1..=16).map(f64::from).collect();
    let harmonic: Vec<f64> = (1..=16).map(|j| (1..=j).map(|k| 1.0 / k as f64).sum()).collect();
    assert_eq!(classify_ladder(&t, &harmonic, &opts).0, Classification::Diverges(Growth::Log));

    let power: Vec<f64> = t.iter().map(|&j| (1.0 - (1.0 - (-j).exp2())).powf(-0.5)).collect();
    match classify_ladder(&t, &power, &opts).0 {
        Classification::Diverges(Growth::Power { gamma }) => assert!((gamma - 0.5).abs() < 1e-6),
        other => panic!("{other:?}"),
    }
}

#[test]
fn report_json_shape() {
    let rep = hardy_norm(&AnalyticFunction::constant(2.0), 2.0, &cfg()).unwrap();
    let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["classification", "estimate", "model", "gamma", "ladder", "a_grid"] {
        assert!(keys.contains(&k));
    }
    assert_eq!(v["classification"], "converges");
    assert_eq!(v["model"], "const");
    assert!(v["gamma"].is_null() && v["a_grid"].is_null());
    assert_eq!(v["ladder"].as_array().unwrap().len(), 16);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval_consistency(c in prop::collection::vec(-3.0f64..3.0, 1..24), j in 0usize..16) {
        let f: AnalyticFunction = PowerSeries::from_real(&c).into();
        let r = cfg().radius_ladder[j];
        let m = mean_p(&f, r, 2.0, &cfg()).unwrap();
        let total: f64 = c.iter().map(|c| c * c).sum();
        prop_assert!((m * m - parseval(&c, r)).abs() < 1e-9 * (1.0 + total));
    }

    #[test]
    fn bergman_ladder_is_nondecreasing(beta in 0.1f64..2.0, p in 1.0f64..4.0, alpha in -0.5f64..2.0) {
        let f = AnalyticFunction::binomial(beta).unwrap();
        let rep = bergman_norm(&f, p, alpha, &cfg().with_ladder_depth(8)).unwrap();
        prop_assert!(rep.ladder.windows(2).all(|w| w[1].1 >= w[0].1));
    }
}

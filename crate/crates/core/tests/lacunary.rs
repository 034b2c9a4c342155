use discspace::decision::Space;
use discspace::lacunary::*;
use discspace::quadrature::{LadderOptions, Model, QuadratureConfig};
use discspace::witnesses::*;
use discspace::{AnalyticFunction, LacunarySeries, C64};
use proptest::prelude::*;

fn opts() -> LadderOptions {
    LadderOptions::default()
}

fn harmonic(k: usize) -> f64 {
    (1..=k).map(|j| 1.0 / j as f64).sum()
}

fn explicit(exps: &[u64], coeffs: &[f64]) -> LacunarySeries {
    let c: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
    LacunarySeries::from_terms(exps, &c, None).unwrap()
}

fn dyadic_exps(n: usize) -> Vec<u64> {
    (1..=n as u32).map(|k| 1u64 << k).collect()
}

#[test]
fn besov_examples() {
    let w = dyadic_series(0.5, 1.0 / 3.0, DEFAULT_K_MAX);
    let m = besov_member(&w, 3.0, DEFAULT_K_MAX, &opts()).unwrap();
    assert_eq!(m.verdict, TriState::In);
    let mut acc = 0.0;
    for (k, s) in m.partial_sums().iter().enumerate() {
        acc += ((k + 1) as f64).powf(-1.5);
        assert!((s - acc).abs() <= 1e-12 * acc);
    }

    let exps = dyadic_exps(40);
    let inv: Vec<f64> = exps.iter().map(|&n| 1.0 / n as f64).collect();
    assert_eq!(
        besov_member(&explicit(&exps, &inv), 2.0, 200, &opts()).unwrap().verdict,
        TriState::In
    );

    let ones = vec![1.0; 40];
    for p in [1.5, 2.0, 5.0] {
        assert_eq!(
            besov_member(&explicit(&exps, &ones), p, 200, &opts()).unwrap().verdict,
            TriState::Out
        );
    }
    assert!(besov_member(&w, 1.0, 200, &opts()).is_err());
}

#[test]
fn qs_examples() {
    let w = besov_not_qs(6.0, 0.2, DEFAULT_K_MAX).unwrap();
    let f = w.series().unwrap();
    let m = qs_member(f, 0.2, DEFAULT_K_MAX, &opts()).unwrap();
    assert_eq!(m.verdict, TriState::Out);
    for (k, s) in m.partial_sums().iter().enumerate() {
        assert!(*s >= harmonic(k + 1) * (1.0 - 1e-15));
    }

    let f = dyadic_series(0.5, 1.0 / 2.5, DEFAULT_K_MAX);
    assert_eq!(qs_member(&f, 0.5, DEFAULT_K_MAX, &opts()).unwrap().verdict, TriState::In);

    let zero = explicit(&[2, 4, 8, 16, 32], &[0.0; 5]);
    let m = qs_member(&zero, 0.5, 200, &opts()).unwrap();
    assert_eq!(m.verdict, TriState::In);
    assert_eq!(m.report.unwrap().estimate(), Some(0.0));

    assert!(qs_member(&f, 1.0, 200, &opts()).is_err());
    let m0 = qs_member(&f, 0.0, 200, &opts()).unwrap();
    assert!(!m0.report.unwrap().notes.is_empty());
}

#[test]
fn harmonic_boundary_is_exact() {
    let w = besov_not_qs(4.0, 0.5, DEFAULT_K_MAX).unwrap();
    let m = qs_member(w.series().unwrap(), 0.5, DEFAULT_K_MAX, &opts()).unwrap();
    assert_eq!(m.verdict, TriState::Out);
    assert_eq!(m.report.as_ref().unwrap().model(), Some(Model::Log));
    let mut h = 0.0;
    for (k, s) in m.partial_sums().iter().enumerate() {
        h += 1.0 / (k + 1) as f64;
        assert!((s - h).abs() <= 1e-15 * h, "K = {}: {s} vs {h}", k + 1);
    }
}

#[test]
fn dirichlet_type_examples() {
    // equality case at p = 5, s = 0.2: alpha = p(1+s)/2 - 1 = 2
    let w = dirichlet_type_not_qs(5.0, 2.0, 0.2, DEFAULT_K_MAX).unwrap();
    let m = dirichlet_type_member(w.series().unwrap(), 5.0, 2.0, DEFAULT_K_MAX, &opts()).unwrap();
    assert_eq!(m.verdict, TriState::In);
    let mut acc = 0.0;
    for (k, s) in m.partial_sums().iter().enumerate() {
        acc += ((k + 1) as f64).powf(-2.5);
        assert!((s - acc).abs() <= 1e-13 * acc);
    }

    let (w, branch) = qs_not_dirichlet_type(1.5, 0.05, 0.4, DEFAULT_K_MAX).unwrap();
    assert_eq!(branch, Thm8Branch::Boundary);
    let m = dirichlet_type_member(w.series().unwrap(), 1.5, 0.05, DEFAULT_K_MAX, &opts()).unwrap();
    assert_eq!(m.verdict, TriState::Out);
    let mut h = 0.0;
    for (k, s) in m.partial_sums().iter().enumerate() {
        h += 1.0 / (k + 1) as f64;
        assert!((s - h).abs() <= 1e-13 * h);
    }

    let zero = explicit(&[2, 4, 8, 16], &[0.0; 4]);
    assert_eq!(dirichlet_type_member(&zero, 2.0, 1.0, 200, &opts()).unwrap().verdict, TriState::In);
    assert!(dirichlet_type_member(&zero, 2.0, -1.0, 200, &opts()).is_err());
}

#[test]
fn hinf_examples() {
    let (a, _) = qs_not_dirichlet_type(3.0, 1.5, 0.8, DEFAULT_K_MAX).unwrap();
    assert_eq!(
        hinf_sufficient(a.series().unwrap(), DEFAULT_K_MAX, &opts()).unwrap().verdict,
        TriState::In
    );
    let (b, _) = qs_not_dirichlet_type(1.5, 0.05, 0.4, DEFAULT_K_MAX).unwrap();
    assert_eq!(
        hinf_sufficient(b.series().unwrap(), DEFAULT_K_MAX, &opts()).unwrap().verdict,
        TriState::In
    );
    let harmonic = dyadic_series(1.0, 0.0, DEFAULT_K_MAX);
    assert_eq!(
        hinf_sufficient(&harmonic, DEFAULT_K_MAX, &opts()).unwrap().verdict,
        TriState::Unknown
    );
}

#[test]
fn binomial_examples() {
    let dt = Space::DirichletType { p: 4.0, alpha: 3.0 };
    assert_eq!(binomial_member(0.1, &dt).unwrap().verdict, TriState::In);
    assert_eq!(binomial_member(0.1, &Space::Bloch).unwrap().verdict, TriState::Out);
    assert_eq!(binomial_member(0.1, &Space::Hinf).unwrap().verdict, TriState::Out);
    let (p, alpha) = (3.0, 1.0);
    let berg = Space::Bergman { p, alpha };
    assert_eq!(binomial_member((2.0 + alpha) / p, &berg).unwrap().verdict, TriState::Out);
    assert_eq!(binomial_member(0.99 * (2.0 + alpha) / p, &berg).unwrap().verdict, TriState::In);
    assert!(binomial_member(0.5, &Space::Bmoa).is_err());
    assert!(binomial_member(0.0, &berg).is_err());
    let json = serde_json::to_value(binomial_member(0.1, &dt).unwrap()).unwrap();
    assert_eq!(json["verdict"], "in");
    assert_eq!(json["criterion"], "closed-form");
}

#[test]
fn coefficient_criteria_refuse_derivatives() {
    let f = dyadic_series(0.5, 0.3, 20);
    assert!(besov_member(&f.derivative(), 3.0, 20, &opts()).is_err());
}

#[test]
fn membership_json_shape() {
    let f = dyadic_series(0.5, 0.3, 30);
    let v = serde_json::to_value(qs_member(&f, 0.5, 30, &opts()).unwrap()).unwrap();
    assert_eq!(v["criterion"], "4.3");
    assert!(v["report"]["ladder"].is_array());
}

fn quick_verify() -> VerifyConfig {
    VerifyConfig {
        quadrature: QuadratureConfig {
            a_grid: vec![C64::new(0.0, 0.0)],
            ..QuadratureConfig::default().with_ladder_depth(10)
        },
        ..VerifyConfig::default()
    }
}

/// Gap series with geometric coefficients `2^(-rate k)` whose criterion
/// sums are geometric on either side, so quadrature can decide them too.
#[test]
fn criterion_agrees_with_quadrature() {
    let cfg = quick_verify();
    let points: Vec<(f64, Space)> = vec![
        (0.5, Space::Besov { p: 3.0 }),
        (0.2, Space::Besov { p: 3.0 }),
        (0.6, Space::Besov { p: 4.0 }),
        (0.1, Space::Besov { p: 4.0 }),
        (0.5, Space::Qs { s: 0.5 }),
        (0.1, Space::Qs { s: 0.5 }),
        (0.4, Space::Qs { s: 0.0 }),
        (0.3, Space::Qs { s: 0.2 }),
        (0.3, Space::DirichletType { p: 2.0, alpha: 1.5 }),
        (0.0, Space::DirichletType { p: 2.0, alpha: 0.5 }),
        (0.6, Space::DirichletType { p: 3.0, alpha: 2.0 }),
        (0.1, Space::DirichletType { p: 3.0, alpha: 2.0 }),
        (0.25, Space::Bergman { p: 2.0, alpha: 0.0 }),
    ];
    let mut decided = 0;
    let mut seen = [false; 2];
    for (rate, space) in points {
        let f: AnalyticFunction = dyadic_series(0.0, rate, 40).into();
        let crit = verify_witness(&f, &[(space, TriState::In)], &cfg).unwrap();
        let c = &crit.claims[0];
        let verdict = c.criterion.as_ref().unwrap().verdict;
        assert_ne!(verdict, TriState::Unknown, "rate {rate}, {space}");
        seen[(verdict == TriState::In) as usize] = true;
        if c.quadrature_verdict != TriState::Unknown {
            decided += 1;
            assert_eq!(c.quadrature_verdict, verdict, "rate {rate}, {space}");
        }
    }
    assert!(seen[0] && seen[1]);
    assert!(decided >= 12, "quadrature decided only {decided} points");
}

#[test]
fn witness_parameter_checks() {
    assert!(besov_not_qs(2.5, 0.9, 50).is_err());
    assert!(besov_not_qs(6.0, 0.2, 50).is_ok());
    assert!(dirichlet_type_not_qs(4.0, 0.0, 0.5, 50).is_err());
    assert!(qs_not_dirichlet_type(3.0, 1.8, 0.8, 50).is_err());
    assert!(qs_not_dirichlet_type(3.0, 0.5, 0.8, 50).is_err());
    assert!(unbounded_in_dirichlet_type(4.0, 1.0).is_err());
    assert!(matches!(girela_function(), Err(discspace::Error::NotConstructible(_))));
    assert!(matches!(nowak_function(), Err(discspace::Error::NotConstructible(_))));
}

#[test]
fn case_two_reduces_to_case_one() {
    let w = dirichlet_type_not_qs(4.0, 2.0, 0.3, 50).unwrap();
    assert_eq!(w.family, WitnessFamily::Case1 { s: 0.5 });
    assert_eq!(w.steps.len(), 1);
    assert!(w.claims.contains(&(Space::Qs { s: 0.3 }, TriState::Out)));
}

#[test]
fn midpoint_exponents() {
    let beta = |p, a| match unbounded_in_dirichlet_type(p, a).unwrap().family {
        WitnessFamily::Binomial { beta } => beta,
        other => panic!("{other:?}"),
    };
    assert!((beta(4.0, 3.0) - 0.125).abs() < 1e-15);
    assert!((beta(4.0, 2.5) - 0.0625).abs() < 1e-15);
    assert!((beta(1.0, -0.5) - 0.25).abs() < 1e-15);
}

#[test]
fn witnesses_pass_verification() {
    let cfg = quick_verify();
    let ws = vec![
        besov_not_qs(6.0, 0.2, DEFAULT_K_MAX).unwrap(),
        dirichlet_type_not_qs(4.0, 2.0, 0.5, DEFAULT_K_MAX).unwrap(),
        dirichlet_type_not_qs(4.0, 2.0, 0.3, DEFAULT_K_MAX).unwrap(),
        qs_not_dirichlet_type(3.0, 1.5, 0.8, DEFAULT_K_MAX).unwrap().0,
        unbounded_in_dirichlet_type(4.0, 3.0).unwrap(),
        unbounded_in_dirichlet_type(4.0, 2.5).unwrap(),
    ];
    for w in ws {
        let r = w.verify(&cfg).unwrap();
        assert!(r.pass(), "{:?}\n{r}", w.family);
    }
}

#[test]
fn wrong_claim_fails() {
    let w = besov_not_qs(6.0, 0.2, DEFAULT_K_MAX).unwrap();
    let r = verify_witness(&w.function, &[(Space::Qs { s: 0.2 }, TriState::In)], &quick_verify()).unwrap();
    assert!(!r.pass());
    assert_eq!(serde_json::to_value(&r).unwrap()["result"], "FAIL");
}

#[test]
fn factory_outputs_are_dyadic_and_decreasing() {
    let ws = vec![
        besov_not_qs(6.0, 0.2, 60).unwrap(),
        dirichlet_type_not_qs(5.0, 2.0, 0.2, 60).unwrap(),
        qs_not_dirichlet_type(1.5, 0.05, 0.4, 60).unwrap().0,
        qs_not_dirichlet_type(3.0, 1.5, 0.8, 60).unwrap().0,
    ];
    for w in ws {
        let f = w.series().unwrap();
        assert_eq!(f.gap_ratio().unwrap(), 2.0);
        let t = f.terms();
        for (k, term) in t.iter().enumerate() {
            assert_eq!(term.n, Some(1u64 << (k + 1)));
            assert!(term.coefficient().re > 0.0 && term.coefficient().im == 0.0);
        }
        assert!(t.windows(2).all(|w| w[1].ln_abs() < w[0].ln_abs()));
    }
}

#[test]
fn affine_rescale_examples() {
    let z0 = C64::new(0.3, -0.2);
    let h = affine_rescale(AnalyticFunction::constant(0.0), z0, 2.0, 1.0).unwrap();
    assert_eq!(h.eval(C64::new(0.5, 0.1)).unwrap(), z0);
    assert!(affine_rescale(AnalyticFunction::constant(0.0), z0, 0.0, 1.0).is_err());

    let (w, _) = qs_not_dirichlet_type(3.0, 1.5, 0.8, 40).unwrap();
    let f = w.series().unwrap();
    let bound: f64 = f.terms().iter().map(|t| t.coefficient().norm()).sum();
    let h = affine_rescale(w.function.clone(), z0, 0.5, bound).unwrap();
    let mut state = 17u64;
    for _ in 0..1000 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let r = (state >> 11) as f64 / (1u64 << 53) as f64;
        let z = C64::from_polar(0.999 * r.sqrt(), r * 1e4);
        assert!((h.eval(z).unwrap() - z0).norm() <= 0.5 * (1.0 + 1e-12));
    }

    let cfg = QuadratureConfig::default().with_ladder_depth(8);
    let g = AnalyticFunction::binomial(0.3).unwrap();
    let hg = affine_rescale(g.clone(), z0, 0.7, 2.0).unwrap();
    let a = discspace::quadrature::bloch_seminorm(&g, &cfg).unwrap();
    let b = discspace::quadrature::bloch_seminorm(&hg, &cfg).unwrap();
    for (x, y) in a.ladder.iter().zip(&b.ladder) {
        assert!((y.1 - 0.35 * x.1).abs() <= 1e-9 * x.1);
    }
}

fn verdicts(f: &LacunarySeries) -> Vec<TriState> {
    let o = opts();
    vec![
        besov_member(f, 3.0, 80, &o).unwrap().verdict,
        qs_member(f, 0.4, 80, &o).unwrap().verdict,
        dirichlet_type_member(f, 2.5, 1.0, 80, &o).unwrap().verdict,
        hinf_sufficient(f, 80, &o).unwrap().verdict,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_never_changes_verdicts(e in 0.0f64..2.0, rate in -0.2f64..0.8, re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let f = dyadic_series(e, rate, 80);
        prop_assert_eq!(verdicts(&f), verdicts(&f.scaled(C64::new(re, im))));
    }

    #[test]
    fn qs_monotone_in_s(e in 0.0f64..2.0, rate in 0.0f64..0.6, s in 0.0f64..0.9, ds in 0.0f64..0.09) {
        let f = dyadic_series(e, rate, 120);
        let lo = qs_member(&f, s, 120, &opts()).unwrap().verdict;
        let hi = qs_member(&f, s + ds, 120, &opts()).unwrap().verdict;
        prop_assert!(lo != TriState::In || hi != TriState::Out);
    }

    #[test]
    fn dirichlet_type_monotone_in_alpha(e in 0.0f64..2.0, rate in 0.0f64..0.6, p in 1.0f64..4.0, alpha in -0.9f64..3.0, da in 0.0f64..1.0) {
        let f = dyadic_series(e, rate, 120);
        let lo = dirichlet_type_member(&f, p, alpha, 120, &opts()).unwrap().verdict;
        let hi = dirichlet_type_member(&f, p, alpha + da, 120, &opts()).unwrap().verdict;
        prop_assert!(lo != TriState::In || hi != TriState::Out);
    }

    #[test]
    fn blocks_partition_arbitrary_gap_series(start in 1u64..50, ratios in proptest::collection::vec(2u64..5, 1..20)) {
        let mut exps = vec![start];
        for r in ratios {
            let next = exps.last().unwrap().saturating_mul(r);
            if next == *exps.last().unwrap() || next > 1 << 60 { break; }
            exps.push(next);
        }
        let f = explicit(&exps, &vec![1.0; exps.len()]);
        let b = DyadicBlocks::new(&f.terms());
        let mut all: Vec<usize> = b.blocks.values().flatten().copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..exps.len()).collect::<Vec<_>>());
        for (&k, js) in &b.blocks {
            for &j in js {
                prop_assert!(exps[j] >> k == 1);
            }
        }
    }
}

use discspace::decision::{
    decide, includes, superposition_class, superposition_class_in, sweep_pool, table_consistency, table_consistency_of, Answer, Space,
    VerdictClass, VerdictTable,
};
use discspace::lacunary::TriState;
use discspace::symbols::{EntireSymbol, SymbolClass, SymbolTolerances};
use discspace::{Error, C64};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn sp(t: &str) -> Space {
    t.parse().unwrap()
}

fn class(x: &str, y: &str) -> (VerdictClass, String) {
    let v = superposition_class(&sp(x), &sp(y)).unwrap();
    (v.class, v.citation)
}

fn known(c: SymbolClass) -> VerdictClass {
    VerdictClass::Known(c)
}

#[test]
fn verdict_examples() {
    assert_eq!(class("bmoa", "dt:3,2"), (known(SymbolClass::Order1Type0), "Thm 1(a)".into()));
    assert_eq!(class("bmoa", "dt:1.5,0.5"), (known(SymbolClass::Constant), "Thm 1(a)".into()));
    assert_eq!(class("besov:1", "qs:0.3"), (known(SymbolClass::AllEntire), "Thm 4(a)".into()));
    assert_eq!(class("qs:0.5", "dt:4,2.2").0, VerdictClass::Open);
    assert_eq!(
        class("dirichlet", "bergman:2,0.5"),
        (known(SymbolClass::Order2Finite), "Thm 5(a)".into())
    );
}

#[test]
fn verdicts_across_the_theorems() {
    let cases = [
        ("bloch", "hardy:3", SymbolClass::Constant, "Thm A(b)"),
        ("hardy:3", "bmoa", SymbolClass::Constant, "Thm A(c)"),
        ("bloch", "dt:3,2", SymbolClass::Constant, "Thm 1(b)"),
        ("dt:3,2", "bloch", SymbolClass::Constant, "Thm 1(d)"),
        ("qs:0.4", "dt:3,2", SymbolClass::Order1Type0, "Thm 2(a)"),
        ("dt:3,2", "qs:0.4", SymbolClass::Constant, "Thm 2(b)"),
        ("dirichlet", "dt:3,2", SymbolClass::Order2Finite, "Thm 3(a)"),
        ("besov:1", "besov:1", SymbolClass::AllEntire, "Thm B"),
        ("besov:3", "bloch", SymbolClass::Linear, "Thm C"),
        ("besov:3", "besov:4", SymbolClass::Linear, "Cor D(a)"),
        ("besov:4", "besov:3", SymbolClass::Constant, "Cor D(b)"),
        ("besov:3", "qs:0.5", SymbolClass::Linear, "Thm 4(b)"),
        ("besov:5", "qs:0.5", SymbolClass::Constant, "Thm 4(b)"),
        ("qs:0.5", "besov:3", SymbolClass::Constant, "Thm 4(c)"),
        ("qs:0.5", "bergman:2,0", SymbolClass::Order1Type0, "Thm 5(b)"),
        ("bergman:2,0", "bloch", SymbolClass::Constant, "Thm 5(c)"),
        ("bmoa", "dt:4,1", SymbolClass::Constant, "Thm 6(a)"),
        ("dt:4,1", "bloch", SymbolClass::AllEntire, "Thm 6(b)"),
        // (1+s)/2 = 0.75 > (alpha+1)/p = 0.5
        ("dt:4,1", "qs:0.5", SymbolClass::AllEntire, "Thm 6(c)"),
        // (1+s)/2 = 0.55 < 0.6
        ("dt:5,2", "qs:0.1", SymbolClass::Constant, "Thm 6(d)"),
        ("qs:0.3", "hinf", SymbolClass::Constant, "Thm F"),
        ("dt:3,1.5", "qs:0.5", SymbolClass::Constant, "Thm 7"),
        // p(s+1)/2 - 1 = 1.25 > 1.1
        ("qs:0.5", "dt:3,1.1", SymbolClass::Constant, "Thm 8(a)"),
        // p < 2 on the edge: 1.5 * 1.5 / 2 - 1 = 0.125
        ("qs:0.5", "dt:1.5,0.125", SymbolClass::Constant, "Thm 8(b)"),
        ("bloch", "dt:3,1.5", SymbolClass::Constant, "Thm 9(a)"),
        ("dirichlet", "dt:1.5,0.2", SymbolClass::Order2Finite, "Thm 9(b)"),
        ("dirichlet", "dt:3,1.5", SymbolClass::Order2Finite, "Thm 9(c)"),
        ("qs:0.5", "dt:1.5,0.3", SymbolClass::Order1Type0, "Thm 10"),
        ("qs:0.5", "dt:4,2.7", SymbolClass::Order1Type0, "Thm 11"),
    ];
    for (x, y, c, cite) in cases {
        assert_eq!(class(x, y), (known(c), cite.to_string()), "{x} -> {y}");
    }
}

#[test]
fn open_region_boundaries() {
    // p >= 2: both ends of [p(s+1)/2 - 1, p-2+s] are open, just outside is not.
    // Here the lower end is alpha = p-2, which is the Besov space B^4.
    assert_eq!(class("qs:0.5", "dt:4,2"), (known(SymbolClass::Constant), "Thm 4(c)".into()));
    assert_eq!(class("qs:0.5", "dt:4,2.0000001").0, VerdictClass::Open);
    assert_eq!(class("qs:0.5", "dt:3,1.25").0, VerdictClass::Open);
    assert_eq!(class("qs:0.5", "dt:3,1.2499"), (known(SymbolClass::Constant), "Thm 8(a)".into()));
    assert_eq!(class("qs:0.5", "dt:4,2.5").0, VerdictClass::Open);
    assert_eq!(
        class("qs:0.5", "dt:4,2.5000001"),
        (known(SymbolClass::Order1Type0), "Thm 11".into())
    );
    // p = 2 leaves the single point alpha = s
    assert_eq!(class("qs:0.3", "dt:2,0.3").0, VerdictClass::Open);
    assert_eq!(class("qs:0.3", "dt:2,0.29").0, known(SymbolClass::Constant));
    assert_eq!(class("qs:0.3", "dt:2,0.31").0, known(SymbolClass::Order1Type0));
    let v = superposition_class(&sp("qs:0.5"), &sp("dt:4,2.2")).unwrap();
    assert!(v.region.unwrap().contains("dt:4,2.2"));
}

#[test]
fn unsupported_is_not_open() {
    let e = superposition_class(&sp("hardy:2"), &sp("besov:3")).unwrap_err();
    assert!(matches!(e, Error::UnsupportedPair(_)));
    let e = superposition_class(&Space::Qs { s: -1.0 }, &Space::Bloch).unwrap_err();
    assert!(matches!(e, Error::Parameter(_)));
    // off the single claimed line p = 2 there is no boundary to sit on
    for y in ["qs:0.5", "dirichlet"] {
        let e = superposition_class(&sp("hardy:3"), &sp(y)).unwrap_err();
        assert!(matches!(e, Error::UnsupportedPair(_)), "{y}");
    }
}

#[test]
fn unclaimed_boundaries_are_open() {
    // B^1 -> B^q, 1 < q != 2: the edge p = 1 of 1 < X.p <= Y.p, claimed only at q = 1 and q = 2
    let v = superposition_class(&sp("besov:1"), &sp("besov:1.5")).unwrap();
    assert_eq!((v.class, v.citation.as_str()), (VerdictClass::Open, "unclaimed boundary"));
    assert!(v.region.unwrap().contains("Cor D(a)"));
    assert_eq!(class("besov:1", "besov:1").0, known(SymbolClass::AllEntire));
    assert_eq!(class("besov:1.01", "besov:1.5").0, known(SymbolClass::Linear));
}

#[test]
fn hardy_and_diagonal_differ_below_two() {
    for p in [0.5, 1.0, 1.5, 1.9] {
        let y = Space::DirichletType { p, alpha: p - 1.0 };
        assert_eq!(superposition_class(&Space::Bmoa, &y).unwrap().class, known(SymbolClass::Constant));
        let h = Space::Hardy { p };
        assert_eq!(
            superposition_class(&Space::Bmoa, &h).unwrap().class,
            known(SymbolClass::Order1Type0)
        );
    }
}

#[test]
fn inclusion_examples() {
    let r = includes(&sp("besov:3"), &sp("qs:0.5")).unwrap();
    assert_eq!(r.verdict, TriState::In);
    assert!(r.citation.contains("Prop 1"));
    let r = includes(&sp("dt:1.5,0.5"), &sp("hardy:1.5")).unwrap();
    assert_eq!(r.verdict, TriState::In);
    assert!(r.citation.contains("(1.4)"));
    let r = includes(&Space::Bloch, &Space::Bmoa).unwrap();
    assert_eq!(r.verdict, TriState::Out);
    assert_eq!(includes(&sp("dt:4,1"), &sp("qs:0.5")).unwrap().verdict, TriState::In);
    assert_eq!(includes(&sp("dt:5,2"), &sp("qs:0.1")).unwrap().verdict, TriState::Out);
    // H^3 is not inside the Bloch space, while B^3 ⊂ BMOA ⊂ B
    assert_eq!(includes(&sp("hardy:3"), &sp("besov:3")).unwrap().verdict, TriState::Out);
    assert_eq!(includes(&sp("dt:3,1.5"), &sp("hardy:3")).unwrap().verdict, TriState::Unknown);
}

#[test]
fn decide_examples() {
    let tol = SymbolTolerances::default();
    let half = EntireSymbol::exp_rate(C64::new(0.5, 0.0));
    let d = decide(&Space::Bmoa, &sp("dt:3,2"), &half, &tol).unwrap();
    assert_eq!(d.answer, Answer::No);
    let five = EntireSymbol::constant(C64::new(5.0, 0.0));
    assert_eq!(decide(&Space::Bloch, &sp("dt:3,2"), &five, &tol).unwrap().answer, Answer::Yes);
    let d = decide(&Space::Dirichlet, &sp("dt:3,2"), &EntireSymbol::exp_of_square(), &tol).unwrap();
    assert_eq!(d.answer, Answer::Yes);
    let d = decide(&sp("qs:0.5"), &sp("dt:4,2.2"), &EntireSymbol::exp(), &tol).unwrap();
    assert_eq!(d.answer, Answer::PaperOpen);
    assert!(decide(&sp("hardy:2"), &sp("besov:3"), &five, &tol).is_err());
}

#[test]
fn shipped_table_is_consistent() {
    let v = table_consistency();
    assert!(v.is_empty(), "{v:#?}");
}

#[test]
fn seeded_fault_is_reported() {
    let bad = VerdictTable::shipped()
        .clone()
        .with_class("bloch", "dt", "Thm 1(b)", VerdictClass::Known(SymbolClass::Linear));
    let v = table_consistency_of(&bad, 200, 7);
    assert!(!v.is_empty());
    assert!(v.iter().any(|x| x.kind == "identity" && x.detail.contains("Thm 1(b)")), "{v:#?}");
}

#[test]
fn bloch_targets_are_never_open() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut decided = 0;
    for _ in 0..200 {
        for x in sweep_pool(&mut rng) {
            match superposition_class(&x, &Space::Bloch) {
                Ok(v) => {
                    assert_ne!(v.class, VerdictClass::Open, "{x}");
                    decided += 1;
                }
                Err(Error::UnsupportedPair(_)) => {}
                Err(e) => panic!("{x}: {e}"),
            }
        }
    }
    assert!(decided > 1000);
}

#[test]
fn qs_to_dirichlet_type_is_covered() {
    // every (p, alpha) for Q_s -> D^p_alpha has exactly one verdict
    let mut rng = StdRng::seed_from_u64(3);
    use rand::Rng;
    for _ in 0..2000 {
        let s = rng.gen_range(0.01..0.99);
        let p = rng.gen_range(0.3..6.0);
        let alpha = rng.gen_range(-0.99..p + 1.0);
        let v = superposition_class(&Space::Qs { s }, &Space::DirichletType { p, alpha });
        assert!(v.is_ok(), "s={s} p={p} alpha={alpha}: {v:?}");
    }
}

fn space_strategy() -> impl Strategy<Value = Space> {
    prop_oneof![
        (0.3..6.0f64).prop_map(|p| Space::Hardy { p }),
        (0.3..6.0f64, -0.99..3.0f64).prop_map(|(p, alpha)| Space::Bergman { p, alpha }),
        (0.3..6.0f64, -0.99..6.0f64).prop_map(|(p, alpha)| Space::DirichletType { p, alpha }),
        (0.3..6.0f64).prop_map(|p| Space::DirichletType { p, alpha: p - 1.0 }),
        (1.1..6.0f64).prop_map(|p| Space::DirichletType { p, alpha: p - 2.0 }),
        (1.0..6.0f64).prop_map(|p| Space::Besov { p }),
        prop_oneof![Just(0.0), Just(1.0), Just(2.0), 0.0..1.5f64].prop_map(|s| Space::Qs { s }),
        Just(Space::Bloch),
        Just(Space::Bmoa),
        Just(Space::Dirichlet),
        Just(Space::Hinf),
        Just(Space::Besov { p: 2.0 }),
        Just(Space::DirichletType { p: 2.0, alpha: 1.0 }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normalize_is_a_projection(x in space_strategy()) {
        prop_assume!(x.validate().is_ok());
        let n = x.normalize().unwrap();
        prop_assert_eq!(n.normalize().unwrap(), n);
    }

    #[test]
    fn verdicts_ignore_presentation(x in space_strategy(), y in space_strategy()) {
        prop_assume!(x.validate().is_ok() && y.validate().is_ok());
        let raw = superposition_class(&x, &y);
        let canon = superposition_class(&x.normalize().unwrap(), &y.normalize().unwrap());
        match (raw, canon) {
            (Ok(a), Ok(b)) => prop_assert_eq!((a.class, a.citation), (b.class, b.citation)),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn inclusion_is_reflexive_and_chains(x in space_strategy(), y in space_strategy(), z in space_strategy()) {
        prop_assume!(x.validate().is_ok() && y.validate().is_ok() && z.validate().is_ok());
        prop_assert_eq!(includes(&x, &x).unwrap().verdict, TriState::In);
        let xy = includes(&x, &y).unwrap();
        prop_assert_ne!(xy.citation.as_str(), "conflicting facts");
        if xy.verdict == TriState::In && includes(&y, &z).unwrap().verdict == TriState::In {
            prop_assert_ne!(includes(&x, &z).unwrap().verdict, TriState::Out);
        }
    }

    #[test]
    fn constant_verdicts_never_meet_inclusions(x in space_strategy(), y in space_strategy()) {
        prop_assume!(x.validate().is_ok() && y.validate().is_ok());
        if let Ok(v) = superposition_class_in(VerdictTable::shipped(), &x, &y) {
            if v.class == VerdictClass::Known(SymbolClass::Constant) {
                prop_assert_ne!(includes(&x, &y).unwrap().verdict, TriState::In);
            }
        }
    }
}

use curvpos::expr::{validate, BundleExpr, Literal, ModelLeaf};
use curvpos::report::{from_json, to_json};
use curvpos::spec::{parse_spec, print_spec, GriffithsSettings, Spec, TestKind, SPEC_SCHEMA};
use curvpos::suite::{run_suite, SuiteName};
use curvpos::{certify, CertifyOptions};
use curvpos_core::curvature::random_hermitian_curvature;
use proptest::prelude::*;

fn literal(n: usize) -> impl Strategy<Value = BundleExpr> {
    (any::<u64>(), 1..=2usize, -1.0..1.0f64).prop_map(move |(seed, r, shift)| {
        let t = random_hermitian_curvature(seed, n, r, shift).unwrap();
        BundleExpr::Literal(Literal::from_tensor(&t))
    })
}

fn leaf(n: usize) -> BoxedStrategy<BundleExpr> {
    let model = prop_oneof![
        Just(ModelLeaf::FubiniStudyTangent { n }),
        (-3..=3i64).prop_map(move |m| ModelLeaf::ProjectiveLineBundle { n, m }),
        Just(ModelLeaf::CanonicalBundle { n }),
        Just(ModelLeaf::HyperbolicCotangent { n }),
        prop::collection::vec(-3..=3i64, 1..=3).prop_map(move |degrees| ModelLeaf::DirectSumLines { n, degrees }),
    ]
    .prop_map(BundleExpr::Model);
    prop_oneof![3 => model, 1 => literal(n)].boxed()
}

fn line(n: usize) -> BoxedStrategy<BundleExpr> {
    prop_oneof![
        (-3..=3i64).prop_map(move |m| BundleExpr::Model(ModelLeaf::ProjectiveLineBundle { n, m })),
        Just(BundleExpr::Model(ModelLeaf::CanonicalBundle { n })),
        Just(BundleExpr::Det(Box::new(BundleExpr::Model(ModelLeaf::FubiniStudyTangent { n })))),
    ]
    .boxed()
}

fn tree(n: usize) -> impl Strategy<Value = BundleExpr> {
    leaf(n).prop_recursive(4, 24, 3, move |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| BundleExpr::Dual(Box::new(e))),
            inner.clone().prop_map(|e| BundleExpr::Det(Box::new(e))),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(BundleExpr::Tensor),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(BundleExpr::DirectSum),
            (inner.clone(), line(n)).prop_map(|(b, l)| BundleExpr::Twist { bundle: Box::new(b), line: Box::new(l) }),
            (1..=3usize, inner.clone()).prop_map(|(k, of)| {
                BundleExpr::Orthonormalize(Box::new(BundleExpr::SymPower { k, of: Box::new(of) }))
            }),
            (-1e3..1e3f64, inner).prop_map(|(factor, of)| BundleExpr::Scale { factor, of: Box::new(of) }),
        ]
    })
}

fn valid_spec() -> impl Strategy<Value = Spec> {
    let tests = prop::sample::subsequence(vec![TestKind::Nakano, TestKind::DualNakano, TestKind::Griffiths], 1..=3)
        .prop_shuffle();
    let griffiths = prop::option::of(
        (prop::option::of(1..100usize), prop::option::of(1..1000usize))
            .prop_map(|(starts, max_iters)| GriffithsSettings { starts, max_iters }),
    );
    (2..=3usize)
        .prop_flat_map(tree)
        .prop_filter("shape within limits", |e| validate(e).is_ok())
        .prop_flat_map(move |bundle| {
            (
                Just(bundle),
                tests.clone(),
                prop::option::of(1e-15..1.0f64),
                prop::option::of(any::<u64>()),
                griffiths.clone(),
            )
        })
        .prop_map(|(bundle, tests, tolerance, seed, griffiths)| Spec {
            schema: SPEC_SCHEMA.into(),
            bundle,
            tests,
            tolerance,
            seed,
            griffiths,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_of_print_is_identity(spec in valid_spec()) {
        let text = print_spec(&spec);
        let (parsed, shape) = parse_spec(&text).unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(shape, validate(&spec.bundle).unwrap());
        // Printing is canonical.
        prop_assert_eq!(print_spec(&parsed), text);
    }
}

fn literal_spec(seed: u64, n: usize, r: usize, shift: f64) -> String {
    let t = random_hermitian_curvature(seed, n, r, shift).unwrap();
    print_spec(&Spec {
        schema: SPEC_SCHEMA.into(),
        bundle: BundleExpr::Literal(Literal::from_tensor(&t)),
        tests: vec![TestKind::Nakano, TestKind::DualNakano, TestKind::Griffiths],
        tolerance: None,
        seed: Some(seed),
        griffiths: Some(GriffithsSettings { starts: Some(4), max_iters: None }),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reports_are_deterministic_and_round_trip(
        seed in any::<u64>(), n in 1..=3usize, r in 1..=3usize, shift in -0.5..0.5f64,
    ) {
        let text = literal_spec(seed, n, r, shift);
        let a = certify(text.as_bytes(), CertifyOptions::default()).unwrap();
        let b = certify(text.as_bytes(), CertifyOptions::default()).unwrap();
        let json = to_json(&a);
        prop_assert_eq!(&json, &to_json(&b));
        prop_assert_eq!(from_json(&json).unwrap(), a);
    }
}

#[test]
fn report_with_timings_round_trips() {
    let text = literal_spec(5, 2, 2, 0.1);
    let opts = CertifyOptions { timings: true, ..Default::default() };
    let report = certify(text.as_bytes(), opts).unwrap();
    let timings = report.timings.as_ref().unwrap();
    assert!(timings.contains_key("evaluate") && timings.contains_key("griffiths"));
    assert_eq!(from_json(&to_json(&report)).unwrap(), report);
}

#[test]
fn cli_overrides_take_precedence() {
    let text = literal_spec(9, 2, 2, 0.1);
    let report = certify(text.as_bytes(), CertifyOptions { tolerance: Some(1e-6), seed: Some(3), timings: false })
        .unwrap();
    assert_eq!((report.tolerance, report.seed), (1e-6, 3));
    let report = certify(text.as_bytes(), CertifyOptions::default()).unwrap();
    assert_eq!((report.tolerance, report.seed), (curvpos_core::positivity::DEFAULT_TOLERANCE, 9));
    assert!(certify(text.as_bytes(), CertifyOptions { tolerance: Some(0.0), ..Default::default() }).is_err());
}

#[test]
fn suites_are_deterministic_and_pass() {
    for seed in [0, 1, 12345] {
        let a = run_suite(SuiteName::All, seed, false).unwrap();
        let b = run_suite(SuiteName::All, seed, false).unwrap();
        assert_eq!(to_json(&a), to_json(&b));
        assert_eq!(from_json(&to_json(&a)).unwrap(), a);
        let failed: Vec<_> = a.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert!(failed.is_empty(), "seed {seed}: {failed:?}");
        assert_eq!(a.outcome.exit_code, 0);
    }
}

#[test]
fn identities_residuals_are_small_on_the_default_seed() {
    let report = run_suite(SuiteName::Identities, 0, false).unwrap();
    for c in &report.checks {
        if c.name.contains("residual") {
            assert!(c.value < 1e-10, "{}: {}", c.name, c.value);
        }
    }
}

mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stabwit::io::{self, StateSpec};
use stabwit::linalg;
use stabwit::pauli::{HermitianOperator, PauliString};
use stabwit::states::{DensityMatrix, Graph, PureState};
use stabwit::witnesses::{self, DetectionClass, WitnessParams};
use stabwit::{entropic, nonlinear, sampling};

fn pauli_text(n: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop::sample::select(vec!['I', 'X', 'Y', 'Z']), n).prop_map(|v| v.into_iter().collect())
}

fn bloch_angles(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((0.0..std::f64::consts::PI, 0.0..2.0 * std::f64::consts::PI), n)
}

fn product_from_angles(angles: &[(f64, f64)]) -> PureState {
    let f: Vec<_> = angles
        .iter()
        .map(|&(t, p)| linalg::bloch_state(t.sin() * p.cos(), t.sin() * p.sin(), t.cos()))
        .collect();
    PureState::product(&f).unwrap()
}

fn catalog_for(n: usize, class: DetectionClass) -> Vec<witnesses::Witness> {
    let mut out = Vec::new();
    for id in witnesses::witness_ids() {
        let params = if witnesses::takes_n(id) {
            WitnessParams::n(n)
        } else if id.starts_with("graph") {
            WitnessParams::graph(Graph::path(n).unwrap())
        } else if n == 3 {
            WitnessParams::default()
        } else {
            continue;
        };
        let w = witnesses::build(id, &params).unwrap();
        if w.detection_class == class || class == DetectionClass::RulesOutFullSeparability {
            out.push(w);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_states_never_detected(angles in bloch_angles(4)) {
        let psi = product_from_angles(&angles).to_density();
        // every witness, genuine ones included, is nonnegative on product states
        for w in catalog_for(4, DetectionClass::RulesOutFullSeparability) {
            let v = w.expectation(&psi).unwrap();
            prop_assert!(v >= -1e-9, "{} = {v}", w.name);
        }
    }

    #[test]
    fn product_states_three_qubits(angles in bloch_angles(3)) {
        let psi = product_from_angles(&angles).to_density();
        for w in catalog_for(3, DetectionClass::RulesOutFullSeparability) {
            let v = w.expectation(&psi).unwrap();
            prop_assert!(v >= -1e-9, "{} = {v}", w.name);
        }
    }

    #[test]
    fn biseparable_states_escape_genuine_witnesses(seed in any::<u64>(), n in 3usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = sampling::random_biseparable_state(&mut rng, n).to_density();
        for w in catalog_for(n, DetectionClass::GenuineMultipartite) {
            let v = w.expectation(&psi).unwrap();
            prop_assert!(v >= -1e-9, "{} = {v}", w.name);
        }
        prop_assert!(entropic::eur_criterion(&psi, witnesses::Family::Ghz, n).unwrap().lhs >= std::f64::consts::LN_2 - 1e-9);
    }

    #[test]
    fn pauli_product_matches_dense(a in pauli_text(3), b in pauli_text(3)) {
        let pa = PauliString::must(&a);
        let pb = PauliString::must(&b);
        let prod = pa * pb;
        let phase = prod.phase().to_complex();
        let expected = pauli(&a) * pauli(&b);
        let got = pauli(&prod.key().to_string()) * phase;
        prop_assert!(max_diff(&got, &expected) < 1e-12);
        let comm = &pauli(&a) * &pauli(&b) - &pauli(&b) * &pauli(&a);
        prop_assert_eq!(pa.commutes(&pb), comm.norm() < 1e-12);
        prop_assert_eq!(pa.commutes_locally(&pb), locally_compatible(&a, &b));
    }

    #[test]
    fn operator_dense_round_trip(terms in proptest::collection::vec((pauli_text(3), -2.0f64..2.0), 1..6)) {
        let op = HermitianOperator::from_terms(3, terms.iter().map(|(s, c)| (s.as_str(), *c))).unwrap();
        prop_assert!(max_diff(&op.to_dense().unwrap(), &dense(&op)) < 1e-12);
        let back = HermitianOperator::from_dense(&op.to_dense().unwrap()).unwrap();
        prop_assert!(max_diff(&dense(&back), &dense(&op)) < 1e-12);
        let spec = io::OperatorSpec::from_operator(&op);
        let text = serde_json::to_string(&spec).unwrap();
        prop_assert!(max_diff(&dense(&io::parse_operator(&text).unwrap()), &dense(&op)) < 1e-12);
    }

    #[test]
    fn variances_are_nonnegative(seed in any::<u64>(), s in pauli_text(3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = sampling::random_separable_mixture(&mut rng, 3, 3).unwrap();
        let op = HermitianOperator::term(PauliString::must(&s));
        let v = nonlinear::variance(&op, &rho).unwrap();
        let m = op.expectation(&rho).unwrap();
        prop_assert!(v >= 0.0);
        prop_assert!((v - (1.0 - m * m)).abs() < 1e-10);
    }

    #[test]
    fn lur_holds_on_separable_mixtures(seed in any::<u64>(), k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = sampling::random_separable_mixture(&mut rng, 3, 4).unwrap();
        for r in [nonlinear::lur_ghz(&rho, 3, k).unwrap(), nonlinear::lur_cluster(&rho, 3, k).unwrap()] {
            prop_assert!(r.total >= -1e-9);
            prop_assert!(r.correction >= 0.0);
            prop_assert!(r.total <= r.linear_part + 1e-12);
        }
    }

    #[test]
    fn entropy_is_concave(seed in any::<u64>(), lambda in 0.0f64..1.0, s in pauli_text(3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sampling::random_pure_state(&mut rng, 3).to_density();
        let b = sampling::random_pure_state(&mut rng, 3).to_density();
        let mix = DensityMatrix::mixture(&[(lambda, &a), (1.0 - lambda, &b)]).unwrap();
        let op = HermitianOperator::from_terms(3, [(s.as_str(), 1.0), ("ZZZ", 0.5)]).unwrap();
        let h = |r: &DensityMatrix| entropic::entropy_of(&op, r).unwrap();
        prop_assert!(h(&mix) >= lambda * h(&a) + (1.0 - lambda) * h(&b) - 1e-10);
        let d = entropic::outcome_distribution(&op, &mix).unwrap();
        prop_assert!((d.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn witness_expectation_is_linear_in_noise(p in 0.0f64..1.0, n in 3usize..=5) {
        let w = witnesses::ghz_genuine_two_settings(n).unwrap();
        let target = w.expectation_on_target().unwrap();
        let mixed = w.operator.trace() / (1u64 << n) as f64;
        let rho = stabwit::states::mix_with_white_noise(w.target_pure.as_ref().unwrap(), p).unwrap();
        prop_assert!((w.expectation(&rho).unwrap() - ((1.0 - p) * target + p * mixed)).abs() < 1e-10);
        let t = w.analytic_noise_threshold.unwrap();
        if (p - t).abs() > 1e-9 {
            prop_assert_eq!(w.detects(&rho).unwrap(), p < t);
        }
    }

    #[test]
    fn dense_state_json_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = sampling::random_separable_mixture(&mut rng, n, 2).unwrap();
        let back = io::parse_dense_state(&io::dense_state_to_json(&rho)).unwrap();
        prop_assert!(max_diff(back.matrix(), rho.matrix()) == 0.0);
    }

    #[test]
    fn state_specs_parse(n in 2usize..=8, p in 0.0f64..=1.0) {
        let spec: StateSpec = format!("ghz:{n}:p={p}").parse().unwrap();
        prop_assert_eq!(spec.n, Some(n));
        prop_assert_eq!(spec.noise_p, p);
        let spec: StateSpec = format!("cluster:{n}").parse().unwrap();
        prop_assert_eq!(spec.noise_p, 0.0);
        let bad = format!("ghz:{n}:p={}", p + 1.5);
        prop_assert!(bad.parse::<StateSpec>().is_err());
    }
}

#[test]
fn noisy_state_spec_matches_reference() {
    let rho = "ghz:4:p=0.2".parse::<StateSpec>().unwrap().load().unwrap();
    assert!(max_diff(rho.matrix(), &noisy(&ghz(4), 0.2)) < 1e-14);
    let rho = "cluster:5".parse::<StateSpec>().unwrap().load().unwrap();
    assert!(max_diff(rho.matrix(), &projector(&cluster(5))) < 1e-14);
    let rho = "w3:p=0.5".parse::<StateSpec>().unwrap().load().unwrap();
    assert!(max_diff(rho.matrix(), &noisy(&w3(), 0.5)) < 1e-14);
}

#[test]
fn lur_fixture_is_the_documented_mixture() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/lur_detected_only.json");
    let rho = io::load_dense_state(&path).unwrap();
    let mut flip = V::zeros(8);
    flip[0b100] = Complex64::new(1.0, 0.0);
    let expected = projector(&ghz(3)) * Complex64::new(0.6, 0.0) + projector(&flip) * Complex64::new(0.4, 0.0);
    assert!(max_diff(rho.matrix(), &expected) < 1e-15);
    let r = nonlinear::lur_ghz(&rho, 3, 1).unwrap();
    assert!((r.linear_part - 0.2).abs() < 1e-12);
    assert!((r.correction - 0.32).abs() < 1e-12);
    assert!(r.detected);
}

//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always print. Exit status is
//! nonzero if a criterion fails, except those listed in `KNOWN_UNATTAINABLE`
//! (reported as FAIL and documented; if one starts passing the run fails
//! until the list is updated). Set `STABWIT_ACCEPTANCE_STRICT=1` to fail on those too.

mod common;

use std::f64::consts::LN_2;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::*;
use stabwit::oracle::{self, OracleConfig};
use stabwit::pauli::PauliString;
use stabwit::states::DensityMatrix;
use stabwit::witnesses::{self, Certificate, Family, WitnessParams};
use stabwit::{entropic, io, nonlinear, report, sampling, stabilizer, states, HermitianOperator};

/// Criteria that cannot be met as stated; see the README.
const KNOWN_UNATTAINABLE: &[u32] = &[10];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    failures: Vec<String>,
    checks: usize,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { failures: Vec::new(), checks: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn close(&mut self, label: &str, value: f64, expected: f64, tol: f64) {
        self.check((value - expected).abs() <= tol, || format!("{label}: {value} vs {expected} (tol {tol})"));
    }
}

fn witness(id: &str, n: Option<usize>) -> witnesses::Witness {
    witnesses::build(id, &WitnessParams { n, ..Default::default() }).unwrap()
}

fn target_of(id: &str, n: usize) -> Option<M> {
    if id.starts_with("ghz") || id == "mermin3" {
        Some(projector(&ghz(n)))
    } else if id.starts_with("cluster") {
        Some(projector(&cluster(n)))
    } else if id.starts_with("w3") {
        Some(projector(&w3()))
    } else {
        None
    }
}

/// Analytic thresholds at 1e-12, from the dense operator and an
/// independently built target.
fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let mut cases: Vec<(&str, Option<usize>, f64)> = Vec::new();
    for n in 3..=8 {
        let nf = n as f64;
        let k = ((n + 2) / 4) as i32;
        cases.push(("ghz_two_term", Some(n), 0.5));
        cases.push(("ghz_three_term", Some(n), 2.0 / 3.0));
        cases.push(("ghz_genuine_sum", Some(n), 1.0 / nf));
        cases.push(("ghz_genuine_two_settings", Some(n), 1.0 / (3.0 - 2f64.powf(2.0 - nf))));
        cases.push(("cluster_two_term", Some(n), 0.5));
        cases.push(("cluster_three_term", Some(n), 2.0 / 3.0));
        cases.push(("cluster_composite", Some(n), 2f64.powi(k) / (2f64.powi(k) + 1.0)));
    }
    cases.push(("ghz_genuine_two_settings", Some(3), 0.4));
    cases.push(("mermin3", None, 0.5));
    cases.push(("cluster_genuine", Some(4), 1.0 / 3.0));
    cases.push(("rho3", None, 0.5));
    cases.push(("w3_projector", None, 8.0 / 21.0));
    cases.push(("w3", None, 4.0 / 15.0));
    cases.push(("w3_two_setting", None, (3.0 - 5f64.sqrt()) / 4.0));
    for (id, n, expected) in cases {
        let w = witness(id, n);
        let label = format!("{id} N={}", w.n_qubits());
        let wd = dense(&w.operator);
        let target = target_of(id, w.n_qubits()).unwrap_or_else(|| w.target.matrix().clone());
        o.close(&format!("{label} dense"), threshold(&wd, &target), expected, 1e-12);
        o.close(&format!("{label} library"), oracle::noise_threshold_analytic(&w).unwrap(), expected, 1e-12);
        o.close(&format!("{label} stored"), w.analytic_noise_threshold.unwrap_or(f64::NAN), expected, 1e-12);
    }
    for n in 3..=8 {
        let w = witness("cluster_genuine", Some(n));
        let t = threshold(&dense(&w.operator), &projector(&cluster(n)));
        o.check(t > 0.25, || format!("cluster_genuine N={n}: {t} not above 1/4"));
        o.close(&format!("cluster_genuine N={n} stored"), w.analytic_noise_threshold.unwrap(), t, 1e-12);
    }
    o
}

/// Bisected thresholds against the analytic ones, every witness, N = 3..8.
fn criterion_2() -> Outcome {
    let rows: Vec<_> = report::suite_witnesses(3, 8)
        .into_par_iter()
        .map(|(id, label, p)| {
            let w = witnesses::build(&id, &p).unwrap();
            let emp = oracle::witness_threshold_empirical(&w).unwrap();
            let ana = oracle::noise_threshold_analytic(&w).unwrap();
            (format!("{id} {label} N={}", w.n_qubits()), emp, ana)
        })
        .collect();
    let mut o = Outcome::new();
    let mut ids = std::collections::BTreeSet::new();
    for (label, emp, ana) in rows {
        ids.insert(label.split(' ').next().unwrap().to_string());
        o.close(&label, emp, ana, 1e-3);
    }
    for id in witnesses::witness_ids() {
        o.check(ids.contains(id), || format!("{id} not covered"));
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let pcfg = OracleConfig::product();
    let bcfg = OracleConfig::biseparable();
    for n in 3..=6 {
        let g = stabilizer::ghz_generators(n).unwrap();
        let ops = g.generator_operators();
        for m in 1..n {
            let v = oracle::max_over_product_states(&(ops[0].clone() + ops[m].clone()), &pcfg).unwrap().value;
            o.close(&format!("product max S1+S{} N={n}", m + 1), v, 1.0, 1e-4);
        }
        let proj = witnesses::ghz_projector_as_stabilizer_product(n).unwrap();
        let r = oracle::max_over_biseparable(&proj, &bcfg).unwrap();
        o.close(&format!("biseparable max GHZ projector N={n}"), r.value, 0.5, 1e-3);
        // the returned state must reach the value it reports
        let psi = r.state(n).unwrap();
        let v = (psi.amplitudes().adjoint() * projector(&ghz(n)) * psi.amplitudes())[(0, 0)].re;
        o.close(&format!("biseparable argmax N={n}"), v, r.value, 1e-9);
        let m = oracle::max_over_biseparable(&witnesses::mermin_operator(n).unwrap(), &bcfg).unwrap().value;
        o.close(&format!("biseparable max M_N N={n}"), m, 0.5, 1e-3);
    }
    let w = witnesses::w3_two_setting().unwrap();
    o.close("biseparable min W'", oracle::min_over_biseparable(&w.operator, &bcfg).unwrap().value, 0.0, 1e-4);
    o.close("biseparable min W' (reduced)", oracle::min_over_biseparable_w3(&w.operator).unwrap(), 0.0, 1e-4);
    o.close("global min W'", min_eig(&dense(&w.operator)), 5f64.sqrt() - 3.0, 1e-6);
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    for id in ["ghz_genuine_sum", "ghz_genuine_two_settings", "cluster_genuine"] {
        for n in 3..=8 {
            let w = witness(id, Some(n));
            let Certificate::Dominance { alpha, reference } = &w.certificate else {
                o.check(false, || format!("{id} N={n}: no dominance certificate"));
                continue;
            };
            o.close(&format!("{id} N={n} alpha"), *alpha, 2.0, 0.0);
            let state = if id.starts_with("ghz") { ghz(n) } else { cluster(n) };
            let dim = 1 << n;
            let wt = M::identity(dim, dim) * num_complex::Complex64::new(0.5, 0.0) - projector(&state);
            o.check(max_diff(&dense(reference), &wt) < 1e-12, || format!("{id} N={n}: reference is not 1/2 - |psi><psi|"));
            let e = min_eig(&(dense(&w.operator) - wt * num_complex::Complex64::new(*alpha, 0.0)));
            o.check(e >= -1e-9, || format!("{id} N={n}: min eigenvalue {e}"));
        }
    }
    for n in 2..=6 {
        let p = witnesses::ghz_projector_as_stabilizer_product(n).unwrap();
        let d = max_diff(&dense(&p), &projector(&ghz(n)));
        o.check(d <= 1e-12, || format!("GHZ projector expansion N={n}: {d}"));
    }
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    for n in 3..=10 {
        let nf = n as f64;
        let ghz_t = 1.0 / (3.0 - 2f64.powf(2.0 - nf));
        o.close(&format!("two-setting GHZ N={n}"), oracle::optimal_two_setting_noise(2.0, 2f64.powi(n as i32 - 1)), ghz_t, 1e-12);
        let (d1, d2) = oracle::two_setting_subgroup_sizes(Family::Ghz, n);
        o.close(&format!("GHZ d-values N={n}"), oracle::optimal_two_setting_noise(d1, d2), ghz_t, 1e-12);
        let (e1, e2) = if n % 2 == 0 { (nf / 2.0, nf / 2.0) } else { ((nf + 1.0) / 2.0, (nf - 1.0) / 2.0) };
        let (d1, d2) = oracle::two_setting_subgroup_sizes(Family::Cluster, n);
        o.close(&format!("cluster d1 N={n}"), d1, 2f64.powf(e1), 0.0);
        o.close(&format!("cluster d2 N={n}"), d2, 2f64.powf(e2), 0.0);
        let cluster_t = 1.0 / (4.0 - 2.0 / 2f64.powf(e1) - 2.0 / 2f64.powf(e2));
        o.close(&format!("cluster threshold N={n}"), witnesses::cluster_genuine_threshold(n), cluster_t, 1e-12);
        if n <= 8 {
            let t = threshold(&dense(&witness("cluster_genuine", Some(n)).operator), &projector(&cluster(n)));
            o.close(&format!("cluster witness threshold N={n}"), t, cluster_t, 1e-12);
        }
    }
    // exhaustive pairwise local compatibility between the three classes
    for n in 3..=6 {
        let g = stabilizer::cluster_generators(n).unwrap();
        let elements: Vec<(usize, String)> = (0..g.len())
            .map(|k| {
                let mask: usize = g.contained_generators(k).iter().map(|i| 1 << i).sum();
                (mask, g.element(k).key().to_string())
            })
            .collect();
        for l in 0..n - 1 {
            let class = |mask: usize| match (mask >> l & 1, mask >> (l + 1) & 1) {
                (1, 0) => Some(0),
                (0, 1) => Some(1),
                (1, 1) => Some(2),
                _ => None,
            };
            let mut clash = None;
            for (ma, a) in &elements {
                for (mb, b) in &elements {
                    if let (Some(ca), Some(cb)) = (class(*ma), class(*mb)) {
                        if ca != cb && locally_compatible(a, b) {
                            clash = Some(format!("{a} / {b}"));
                        }
                    }
                }
            }
            o.check(clash.is_none(), || format!("cluster N={n} l={}: compatible across classes {clash:?}", l + 1));
            o.check(stabilizer::pair_classes_exclusive(&g, l).unwrap(), || format!("library disagrees N={n} l={}", l + 1));
        }
        // largest subgroup measurable in one setting
        let (size, _) = stabilizer::max_one_setting_subgroup(&g);
        let expected = 1usize << n.div_ceil(2);
        o.check(size == expected, || format!("cluster N={n}: largest one-setting subgroup {size}, expected {expected}"));
    }
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    for n in 3..=8 {
        let psi = ghz(n);
        let bound = dense(&witnesses::fidelity_bound_operator(Family::Ghz, n).unwrap());
        let lib_psi = states::make_ghz(n).unwrap();
        for i in 0..10 {
            let p = i as f64 / 10.0;
            let rho = noisy(&psi, p);
            let f = expect(&projector(&psi), &rho);
            let fp = expect(&bound, &rho);
            let lib_rho = states::mix_with_white_noise(&lib_psi, p).unwrap();
            let nf = n as f64;
            o.close(&format!("F N={n} p={p}"), f, 1.0 - p * (1.0 - 2f64.powf(-nf)), 1e-10);
            o.close(&format!("F library N={n} p={p}"), lib_rho.fidelity_with(&lib_psi).unwrap(), f, 1e-10);
            o.close(&format!("F' N={n} p={p}"), fp, 1.0 - p * (1.5 - 2f64.powf(-(nf - 1.0))), 1e-10);
            o.check(fp <= f + 1e-12, || format!("F' > F at N={n} p={p}"));
        }
    }
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/lur_detected_only.json");
    let rho = io::load_dense_state(&fixture).unwrap();
    let linear = witness("ghz_two_term", Some(3)).expectation(&rho).unwrap();
    let lur = nonlinear::lur_ghz(&rho, 3, 1).unwrap();
    o.check(linear >= 0.0, || format!("fixture detected by the linear witness: {linear}"));
    o.check(lur.detected, || format!("fixture not detected by the LUR: {}", lur.total));

    for n in [3usize, 4] {
        let mut rng = ChaCha8Rng::seed_from_u64(700 + n as u64);
        let mut worst = f64::INFINITY;
        let mut worst_corr = f64::INFINITY;
        for _ in 0..10_000 {
            let rho = sampling::random_product_state(&mut rng, n).to_density();
            for k in 1..n {
                for r in [
                    nonlinear::lur_ghz(&rho, n, k).unwrap(),
                    nonlinear::lur_ghz_three(&rho, n, k + 1).unwrap(),
                    nonlinear::lur_cluster(&rho, n, k).unwrap(),
                ] {
                    worst = worst.min(r.total);
                    worst_corr = worst_corr.min(r.correction);
                }
            }
        }
        o.check(worst >= -1e-9, || format!("LUR total {worst} on a product state, N={n}"));
        o.check(worst_corr >= 0.0, || format!("negative correction {worst_corr}, N={n}"));
    }

    let sets: [&[&str]; 3] = [&["XII", "YII", "ZII"], &["XXX", "YXX", "ZXX"], &["XII", "YII", "ZXI", "ZYI", "ZZX"]];
    let ops: Vec<Vec<HermitianOperator>> = sets
        .iter()
        .map(|s| s.iter().map(|p| HermitianOperator::term(PauliString::must(p))).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for i in 0..10_000 {
        let rho = if i % 2 == 0 {
            sampling::random_pure_state(&mut rng, 3).to_density()
        } else {
            let a = sampling::random_pure_state(&mut rng, 3).to_density();
            let b = sampling::random_pure_state(&mut rng, 3).to_density();
            DensityMatrix::mixture(&[(0.5, &a), (0.5, &b)]).unwrap()
        };
        for set in &ops {
            worst = worst.max(nonlinear::anticommuting_mean_bound(set, &rho).unwrap());
        }
    }
    o.check(worst <= 1.0 + 1e-9, || format!("anticommuting bound exceeded: {worst}"));
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let x = HermitianOperator::term(PauliString::must("X"));
    let y = HermitianOperator::term(PauliString::must("Y"));
    o.close("eur_bound(X, Y)", entropic::eur_bound(&x, &y).unwrap(), LN_2, 1e-10);
    for n in 3..=6 {
        for (fam, v) in [(Family::Ghz, ghz(n)), (Family::Cluster, cluster(n))] {
            let rho = DensityMatrix::new(projector(&v)).unwrap();
            o.close(&format!("{fam:?} N={n} lhs"), entropic::eur_criterion(&rho, fam, n).unwrap().lhs, 0.0, 1e-9);
        }
    }
    for n in [3usize, 4] {
        for fam in [Family::Ghz, Family::Cluster] {
            let mut rng = ChaCha8Rng::seed_from_u64(800 + n as u64);
            let mut worst = f64::INFINITY;
            for _ in 0..10_000 {
                let rho = sampling::random_biseparable_state(&mut rng, n).to_density();
                worst = worst.min(entropic::eur_criterion(&rho, fam, n).unwrap().lhs);
            }
            o.check(worst >= LN_2 - 1e-9, || format!("{fam:?} N={n}: biseparable lhs {worst}"));
        }
    }
    for (n, expected) in [(3, 0.123), (4, 0.083)] {
        let target = DensityMatrix::new(projector(&ghz(n))).unwrap();
        let t = oracle::noise_threshold_empirical(|r| Ok(entropic::eur_criterion(r, Family::Ghz, n)?.detected), &target)
            .unwrap();
        o.close(&format!("entropic threshold N={n}"), t, expected, 5e-3);
    }
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let u = stabilizer::w3_preparation_unitary();
    let id = M::identity(8, 8);
    o.check(max_diff(&(u.adjoint() * &u), &id) <= 1e-10, || "U is not unitary".into());
    let mut zero = V::zeros(8);
    zero[0] = num_complex::Complex64::new(1.0, 0.0);
    o.check((&u * zero - w3()).norm() <= 1e-10, || "U|000> != |W3>".into());
    let ops = stabilizer::w3_stabilizing_ops();
    let w = w3();
    for (k, s) in ops.iter().enumerate() {
        let d = (dense(s) * &w - &w).norm();
        o.check(d <= 1e-10, || format!("S{} moves |W3> by {d}", k + 1));
    }
    let prod = HermitianOperator::product(3, ops.iter()).unwrap();
    o.check(max_diff(&dense(&prod), &(-pauli("ZZZ"))) <= 1e-12, || format!("S1 S2 S3 = {prod}"));
    let dprod = dense(&ops[0]) * dense(&ops[1]) * dense(&ops[2]);
    o.check(max_diff(&dprod, &(-pauli("ZZZ"))) <= 1e-12, || "dense S1 S2 S3 != -ZZZ".into());
    o
}

/// The W3 projector part cannot hold with Pauli settings: its expansion has
/// seven pairwise locally incompatible weight-3 terms.
fn criterion_10() -> Outcome {
    let mut o = Outcome::new();
    let cases = [
        (witness("ghz_two_term", Some(4)), 2),
        (witness("ghz_three_term", Some(4)), 3),
        (witness("ghz_genuine_two_settings", Some(4)), 2),
        (witness("cluster_genuine", Some(4)), 2),
        (witness("w3", None), 3),
    ];
    for (w, expected) in &cases {
        let c = stabilizer::partition_into_settings(&w.operator).count();
        o.check(c == *expected, || format!("{}: {c} settings, expected {expected}", w.name));
    }
    for n in 3..=8 {
        for (id, expected) in [("ghz_two_term", 2), ("ghz_three_term", 3), ("ghz_genuine_two_settings", 2), ("cluster_genuine", 2)] {
            let c = stabilizer::partition_into_settings(&witness(id, Some(n)).operator).count();
            o.check(c == expected, || format!("{id} N={n}: {c} settings, expected {expected}"));
        }
    }
    let proj = witnesses::w3_projector().unwrap();
    let c = stabilizer::partition_into_settings(&proj.operator).count();
    o.check(c <= 5, || format!("w3_projector: {c} Pauli settings, criterion asks for at most 5"));
    o
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "analytic noise thresholds", criterion_1),
        (2, "empirical thresholds, N = 3..8", criterion_2),
        (3, "separable and biseparable oracle bounds", criterion_3),
        (4, "dominance certificates and GHZ projector expansion", criterion_4),
        (5, "two-setting optimum and cluster setting structure", criterion_5),
        (6, "fidelity bounds", criterion_6),
        (7, "local uncertainty relations", criterion_7),
        (8, "entropic uncertainty relations", criterion_8),
        (9, "W-state stabilizing operators", criterion_9),
        (10, "measurement setting counts", criterion_10),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let strict = std::env::var("STABWIT_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut blocking = 0;
    for (id, name, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = out.failures.is_empty();
        println!("{} criterion {id:>2}: {name} ({} checks, {secs:.1}s)", if pass { "PASS" } else { "FAIL" }, out.checks);
        for f in out.failures.iter().take(10) {
            println!("      {f}");
        }
        let known = KNOWN_UNATTAINABLE.contains(&id);
        if !pass && known {
            println!("      known unattainable as stated; not counted unless STABWIT_ACCEPTANCE_STRICT=1");
        }
        if pass && known {
            println!("      listed in KNOWN_UNATTAINABLE but passes; remove it from the list");
        }
        if (pass && known) || (!pass && (!known || strict)) {
            blocking += 1;
        }
    }
    if blocking > 0 {
        println!("{blocking} blocking criteria failed");
        std::process::exit(1);
    }
}

use omega_core::harness::{
    enumerate_algebras, parse_file, run_directives, verify_critical_generation, verify_main_prime, verify_paper,
    verify_representations, verify_similarity, verify::corpus_algebra, EnumerationJob, HarnessOptions, Pathway, Report,
    Status,
};
use omega_core::modring::Ring;
use omega_core::sigterm::Signature;

fn job(n: u32, orders: Vec<u32>) -> EnumerationJob {
    EnumerationJob::new(&Ring::modular(n).unwrap(), orders, &Signature::binary("mul"))
}

fn faulty(p: Pathway) -> HarnessOptions {
    HarnessOptions { fault: Some(p), ..Default::default() }
}

fn assert_clean(r: &Report) {
    for i in &r.items {
        assert_eq!(i.status, Status::Pass, "{} {}: {}", i.id, i.description, i.certificate);
    }
    assert!(r.violations.is_empty());
    assert_eq!(r.exit_code(), 0);
}

fn assert_violation(r: &Report, p: Pathway) {
    assert!(!r.violations.is_empty(), "{p:?} did not trigger a violation");
    assert_eq!(r.exit_code(), 1);
    assert!(r.items.iter().any(|i| i.status == Status::Violation));
}

#[test]
fn full_report_passes_and_is_deterministic() {
    let opts = HarnessOptions::default();
    let a = verify_paper(&opts).unwrap();
    assert_clean(&a);
    let b = verify_paper(&opts).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.to_json().starts_with("{\n  \"schema\": \"omega-report/1\""));
}

#[test]
fn main_prime_exhaustive_runs() {
    let opts = HarnessOptions::default();
    assert_clean(&verify_main_prime(&job(2, vec![2, 2]), &opts).unwrap());
    assert_clean(&verify_main_prime(&job(3, vec![3]), &opts).unwrap());
}

#[test]
fn main_prime_vacuous_without_primes() {
    // over Z/4 a rank-one free module carries no prime algebra: 2x spans a
    // square-zero ideal
    let j = job(4, vec![4]);
    assert!(enumerate_algebras(&j).unwrap().iter().all(|a| !omega_core::idealth::is_prime(a).unwrap()));
    assert_clean(&verify_main_prime(&j, &HarnessOptions::default()).unwrap());
}

#[test]
fn critical_generation_examples() {
    let opts = HarnessOptions::default();
    for (file, name) in [("heisenberg.alg", "Lp"), ("fields.alg", "Z2"), ("sl2.alg", "sl2"), ("example4.alg", "A1")] {
        assert_clean(&verify_critical_generation(&corpus_algebra(file, name), &opts).unwrap());
    }
}

#[test]
fn injected_faults_trigger_every_detector() {
    for p in [Pathway::PrimeTests, Pathway::PrimeCritical, Pathway::CriticalMonolithic, Pathway::MainPrime] {
        assert_violation(&verify_main_prime(&job(2, vec![2, 2]), &faulty(p)).unwrap(), p);
    }
    let lp = corpus_algebra("heisenberg.alg", "Lp");
    assert_violation(&verify_critical_generation(&lp, &faulty(Pathway::CriticalGeneration)).unwrap(), Pathway::CriticalGeneration);
    for p in [Pathway::Similarity, Pathway::SimilarMonoliths, Pathway::PrimeCorollary] {
        assert_violation(&verify_similarity(&faulty(p)).unwrap(), p);
    }
    for p in [Pathway::PrimeSection, Pathway::Minrep] {
        assert_violation(&verify_representations(&faulty(p)).unwrap(), p);
    }
}

#[test]
fn faults_only_touch_their_own_pathway() {
    assert_clean(&verify_similarity(&faulty(Pathway::MainPrime)).unwrap());
    assert_clean(&verify_representations(&faulty(Pathway::Similarity)).unwrap());
}

#[test]
fn corpus_directives_hold() {
    let opts = HarnessOptions::default();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../algebras");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let f = parse_file(&std::fs::read_to_string(&path).unwrap()).unwrap();
        for item in run_directives(&f, &path.display().to_string(), &opts).unwrap() {
            assert_eq!(item.status, Status::Pass, "{}: {}", item.id, item.description);
            count += 1;
        }
    }
    assert!(count >= 30);
}

#[test]
fn failed_expectation_is_reported() {
    let src = "ring Z/3\nsignature { mul : 2 }\nalgebra A { basis x ; mul(x,x) = x }\nexpect prime(A) = false";
    let f = parse_file(src).unwrap();
    let items = run_directives(&f, "inline", &HarnessOptions::default()).unwrap();
    assert_eq!(items[0].status, Status::Fail);
    assert_eq!(items[0].id, "inline:4");
}

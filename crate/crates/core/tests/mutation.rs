//! The verifier rejects single-defect mutations with the matching class.

mod common;

use hwf_core::certificate::CertificateFile;
use hwf_core::verify::{verify_certificate, verify_file, DefectClass};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn pool_is_valid() {
    for c in common::mutation_pool() {
        let r = verify_certificate(&c);
        assert!(r.passed(), "{}", r.to_text());
    }
}

#[test]
fn random_mutations_are_rejected() {
    let pool = common::mutation_pool();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let cert = &pool[rng.gen_range(0..pool.len())];
        let (file, class) = common::mutate(&mut rng, cert);
        let r = verify_file(&file);
        assert!(!r.passed(), "trial {trial}: mutation {class} accepted");
        assert!(
            r.has(class),
            "trial {trial}: expected {class}, got {:?}",
            r.classes()
        );
    }
}

#[test]
fn every_mutation_kind_is_exercised() {
    let pool = common::mutation_pool();
    let mut rng = StdRng::seed_from_u64(7);
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..200 {
        let cert = &pool[rng.gen_range(0..pool.len())];
        seen.insert(common::mutate(&mut rng, cert).1);
    }
    use DefectClass::*;
    for c in [
        MissingArc,
        DuplicateArc,
        CensusMismatch,
        TypeMismatch,
        ForeignArc,
        InvalidVertex,
    ] {
        assert!(seen.contains(&c), "{c} never generated");
    }
}

#[test]
fn deleted_arc_reports_degree_and_missing() {
    let c = hwf_core::base::decompose_cxn(5, 7, 3).unwrap();
    let mut file = c.to_file(false);
    file.factors[0].arcs.as_mut().unwrap().pop();
    let r = verify_file(&file);
    assert!(r.has(DefectClass::DegreeViolation));
    assert!(r.has(DefectClass::MissingArc));
}

#[test]
fn mutated_file_survives_round_trip() {
    let c = hwf_core::base::decompose_cxn(3, 3, 2).unwrap();
    let mut file = c.to_file(false);
    file.factors[1].arcs.as_mut().unwrap()[0][0] = 99;
    let back = CertificateFile::from_json(&file.to_json()).unwrap();
    assert!(verify_file(&back).has(DefectClass::InvalidVertex));
}

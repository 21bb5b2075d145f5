//! Acceptance criteria, one test each. Every test prints a single
//! `PASS` or `FAIL` line before asserting.

mod common;

use std::io::Write as _;
use std::time::{Duration, Instant};

use hwf_core::base::{appendix_c12_3, appendix_c12_n, cxn_admissible, decompose_cxn};
use hwf_core::certificate::{ROLE_R, ROLE_S};
use hwf_core::composition::{cvresult, main_theorem, triangle_blowup, ClassConfig, CvCase};
use hwf_core::four_part::{c4n_admissible, decompose_c4n};
use hwf_core::ingredients::{
    kirkman_small, rgdd_builtin, search_factorization, search_uniform, FactorTarget,
    IngredientRegistry, SearchOutcome,
};
use hwf_core::multivar::{
    decompose_4x_2xn_n, decompose_4x_xn_2n, decompose_4xy_2xn_yn, decompose_xy,
    four_x_2xn_n_admissible, four_x_xn_2n_admissible, layer_schedule, xy_admissible,
};
use hwf_core::verify::{verify_certificate, verify_file};
use hwf_core::{CycleType, DecompositionCertificate, HostSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const LIMIT: Duration = Duration::from_secs(60);

fn report(id: &str, name: &str, failures: &[String]) {
    // straight to the handle so the line shows even when output is captured
    let line = if failures.is_empty() {
        format!("PASS {id}: {name}\n")
    } else {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        format!(
            "FAIL {id}: {name} ({} failures; first: {})\n",
            failures.len(),
            shown.join("; ")
        )
    };
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

/// Verifies `cert` and checks it has exactly `want` factors per (role, type).
fn check(
    label: &str,
    cert: &DecompositionCertificate,
    want: &[(&str, CycleType, usize)],
) -> Option<String> {
    let r = verify_certificate(cert);
    if !r.passed() {
        return Some(format!("{label}: verifier {:?}", r.classes()));
    }
    let total: usize = want.iter().map(|w| w.2).sum();
    if cert.factors.len() != total {
        return Some(format!(
            "{label}: {} factors, want {total} ({})",
            cert.factors.len(),
            cert.census_string()
        ));
    }
    for (role, t, n) in want {
        if cert.count_of(role, t) != *n {
            return Some(format!(
                "{label}: census {}, want {n} x {t} {role}",
                cert.census_string()
            ));
        }
    }
    None
}

fn run(
    label: String,
    build: impl FnOnce() -> hwf_core::error::Result<DecompositionCertificate>,
    want: &[(&str, CycleType, usize)],
) -> Option<String> {
    match build() {
        Ok(c) => check(&label, &c, want),
        Err(e) => Some(format!("{label}: {e}")),
    }
}

fn u(len: u32, count: u32) -> CycleType {
    CycleType::uniform(len, count)
}

#[test]
fn criterion_01_cxn_sweep() {
    let start = Instant::now();
    let mut fails = Vec::new();
    for x in [3, 5, 7, 9, 11, 13] {
        for n in [3, 5, 7, 9] {
            for s in (0..=x).filter(|&s| s != 1) {
                assert!(cxn_admissible(x, s));
                let want = [
                    (ROLE_S, u(x * n, 1), s as usize),
                    (ROLE_R, u(n, x), (x - s) as usize),
                ];
                fails.extend(run(
                    format!("x={x} n={n} s={s}"),
                    || decompose_cxn(x, n, s),
                    &want,
                ));
            }
        }
    }
    if start.elapsed() > LIMIT {
        fails.push(format!("took {:?}", start.elapsed()));
    }
    report("1", "C_(x:n) sweep over x<=13, n<=9, all s != 1", &fails);
}

#[test]
fn criterion_02_c4n_sweep() {
    let mut fails = Vec::new();
    for n in [3, 5, 7, 9, 11, 13] {
        for s in [0, 2, 3, 4] {
            assert!(c4n_admissible(s));
            let want = [
                (ROLE_S, u(2 * n, 2), s as usize),
                (ROLE_R, u(n, 4), 4 - s as usize),
            ];
            fails.extend(run(format!("n={n} s={s}"), || decompose_c4n(n, s), &want));
        }
    }
    report("2", "C_(4:n) sweep over n<=13, s in {0,2,3,4}", &fails);
}

#[test]
fn criterion_03_xy_sweep() {
    let mut fails = Vec::new();
    for (x, y) in [(3, 5), (3, 7), (5, 7), (3, 3)] {
        for n in [3, 5] {
            for s in (0..=x * y).filter(|&s| s != 1 && s + 1 != x * y) {
                assert!(xy_admissible(x, y, s));
                let want = [
                    (ROLE_S, u(x * n, y), s as usize),
                    (ROLE_R, u(y * n, x), (x * y - s) as usize),
                ];
                fails.extend(run(
                    format!("x={x} y={y} n={n} s={s}"),
                    || decompose_xy(x, y, n, s),
                    &want,
                ));
            }
        }
    }
    report("3", "C_(xy:n) sweep, all s_p outside {1, xy-1}", &fails);
}

#[test]
fn criterion_04_four_x_sweep() {
    let mut fails = Vec::new();
    for x in [3, 5, 7] {
        let f = 4 * x;
        let a: Vec<u32> = (0..=f).filter(|&s| four_x_2xn_n_admissible(x, s)).collect();
        if a != (0..=f).filter(|&s| s != 1).collect::<Vec<_>>() {
            fails.push(format!("x={x}: 2xn/n admissible set {a:?}"));
        }
        let b: Vec<u32> = (0..=f)
            .filter(|&s| four_x_xn_2n_admissible(x, 3, s))
            .collect();
        if b != (0..=f)
            .filter(|&s| s != 1 && s + 1 != f)
            .collect::<Vec<_>>()
        {
            fails.push(format!("x={x}: xn/2n admissible set {b:?}"));
        }
        for n in [3, 5, 7] {
            for &s in &a {
                let want = [
                    (ROLE_S, u(2 * x * n, 2), s as usize),
                    (ROLE_R, u(n, f), (f - s) as usize),
                ];
                fails.extend(run(
                    format!("2xn/n x={x} n={n} s={s}"),
                    || decompose_4x_2xn_n(x, n, s),
                    &want,
                ));
            }
            for &s in &b {
                let want = [
                    (ROLE_S, u(x * n, 4), s as usize),
                    (ROLE_R, u(2 * n, 2 * x), (f - s) as usize),
                ];
                fails.extend(run(
                    format!("xn/2n x={x} n={n} s={s}"),
                    || decompose_4x_xn_2n(x, n, s),
                    &want,
                ));
            }
        }
    }
    report("4", "C_(4x:n) into 2xn/n and xn/2n, x,n in {3,5,7}", &fails);
}

#[test]
fn criterion_05_four_xy_spots() {
    let mut fails = Vec::new();
    let (x, y) = (3, 5);
    if layer_schedule(x, y, 25) != Some(vec![0, 0, 2, 11, 12]) {
        fails.push(format!(
            "s=25 schedule {:?}, want k=2 a=2 eps=1",
            layer_schedule(x, y, 25)
        ));
    }
    if layer_schedule(x, y, 37) != Some(vec![2, 2, 9, 12, 12]) {
        fails.push(format!(
            "s=37 schedule {:?}, want k'=3 a=2 eps=3",
            layer_schedule(x, y, 37)
        ));
    }
    let m = 4 * x * y;
    for n in [3, 5] {
        for s in [0, 2, 25, 37, m - 2, m] {
            let want = [
                (ROLE_S, u(2 * x * n, 2 * y), s as usize),
                (ROLE_R, u(y * n, 4 * x), (m - s) as usize),
            ];
            fails.extend(run(
                format!("n={n} s={s}"),
                || decompose_4xy_2xn_yn(x, y, n, s),
                &want,
            ));
        }
    }
    report(
        "5",
        "C_(4xy:n) spot set with the two figure schedules",
        &fails,
    );
}

#[test]
fn criterion_06_appendix() {
    let mut fails = Vec::new();
    fails.extend(check(
        "n=3",
        &appendix_c12_3(),
        &[(ROLE_S, u(12, 3), 7), (ROLE_R, u(6, 6), 5)],
    ));
    for n in [5, 7] {
        let want = [(ROLE_S, u(3 * n, 4), 7), (ROLE_R, u(2 * n, 6), 5)];
        fails.extend(run(format!("n={n}"), || appendix_c12_n(n), &want));
    }
    report(
        "6",
        "C_(12:3) into 7 [12^3] + 5 [6^6]; C_(12:n) into 7 [3n^4] + 5 [2n^6]",
        &fails,
    );
}

#[test]
fn criterion_07_cvresult_cases() {
    let mut fails = Vec::new();
    let cases = [
        (CvCase::A, 3, 5, 7, 1, 3, 52),
        (CvCase::B, 3, 1, 1, 3, 3, 17),
        (CvCase::C, 3, 1, 1, 4, 5, 20),
        (CvCase::D, 3, 1, 1, 1, 5, 7),
        (CvCase::E, 3, 5, 1, 3, 3, 97),
        (CvCase::F, 3, 5, 1, 1, 3, 30),
    ];
    for (case, x, y, z, w, n, s) in cases {
        let start = Instant::now();
        let v = case.order(x, y, z, w);
        let (l1, l2) = case.lengths(x, y, z, n);
        let want = [
            (ROLE_S, u(l1, v * n / l1), s as usize),
            (ROLE_R, u(l2, v * n / l2), (v - s) as usize),
        ];
        let label = format!(
            "({case}) x={x} y={y} z={z} w={w} n={n} s={s} on {} vertices",
            v * n
        );
        fails.extend(run(
            label.clone(),
            || cvresult(case, x, y, z, w, n, s),
            &want,
        ));
        if start.elapsed() > LIMIT {
            fails.push(format!("{label}: took {:?}", start.elapsed()));
        }
    }
    report("7", "C_(v:n) cases (a)-(f), one instance each", &fails);
}

#[test]
fn criterion_08_k15_9() {
    let reg = IngredientRegistry::builtin();
    let cfg = ClassConfig::new(3, 5, 1, 1);
    let mut fails = Vec::new();
    for s in (0..=60).filter(|&s| s != 1 && s != 59) {
        let want = [
            (ROLE_S, u(9, 15), s as usize),
            (ROLE_R, u(15, 9), 60 - s as usize),
        ];
        fails.extend(run(
            format!("s={s}"),
            || main_theorem(&reg, 15, 9, 3, &[cfg], s, 60 - s),
            &want,
        ));
    }
    report(
        "8",
        "K_(15:9) into s [9^15] + (60-s) [15^9], every s outside {1,59}",
        &fails,
    );
}

#[test]
fn criterion_09_k27_blowup() {
    let reg = IngredientRegistry::builtin();
    let mut fails = Vec::new();
    for s in (0..=13).filter(|&s| s != 1 && s != 12) {
        let want = [
            (ROLE_S, u(3, 9), s as usize),
            (ROLE_R, u(9, 3), 13 - s as usize),
        ];
        fails.extend(run(
            format!("s={s}"),
            || triangle_blowup(&reg, 3, 3, 3, s),
            &want,
        ));
    }
    report(
        "9",
        "K_27 from RGDD(3^3) into s C_3 + r C_9 factors, s,r != 1",
        &fails,
    );
}

#[test]
fn criterion_10_algebra() {
    let mut rng = StdRng::seed_from_u64(10);
    let mut fails = Vec::new();
    for i in 0..500 {
        let (x, y, k) = (
            rng.gen_range(1..5),
            rng.gen_range(1..5),
            rng.gen_range(2..6),
        );
        if !common::law_commutes(rng.gen(), x, y, k) {
            fails.push(format!("commutativity #{i} x={x} y={y} k={k}"));
        }
        if !common::law_identity(rng.gen(), x, k) {
            fails.push(format!("identity #{i} x={x} k={k}"));
        }
        if !common::law_distributes(rng.gen(), x, y, k) {
            fails.push(format!("distributivity #{i} x={x} y={y} k={k}"));
        }
        let (a, b) = (rng.gen_range(1..5), rng.gen_range(1..5));
        let (ex, ey) = (rng.gen_range(0..3), rng.gen_range(0..3));
        if !common::law_cycle_formula(rng.gen(), k.min(4), a, b, ex, ey) {
            fails.push(format!("cycle formula #{i}"));
        }
    }
    report("10", "partite product laws, 500 random checks each", &fails);
}

fn targets_of(cert: &DecompositionCertificate) -> Vec<FactorTarget> {
    cert.factors
        .iter()
        .map(|f| FactorTarget {
            role: f.role.clone(),
            cycle_type: f.declared_type.clone(),
        })
        .collect()
}

#[test]
fn criterion_11_oracle_agreement() {
    let reg = IngredientRegistry::builtin();
    let mut fails = Vec::new();
    let mut built: Vec<(String, DecompositionCertificate)> = vec![
        ("K_9".into(), kirkman_small(9).unwrap().certificate),
        (
            "K_(3:3)".into(),
            rgdd_builtin(3, 3).unwrap().to_certificate().unwrap(),
        ),
    ];
    for s in [0, 2, 3] {
        built.push((format!("C_(3:3) s={s}"), decompose_cxn(3, 3, s).unwrap()));
    }
    for s in [0, 2, 3, 4] {
        built.push((format!("C_(4:3) s={s}"), decompose_c4n(3, s).unwrap()));
    }
    for s in [0, 2, 5] {
        built.push((format!("C_(5:3) s={s}"), decompose_cxn(5, 3, s).unwrap()));
    }
    for (label, cert) in &built {
        if !verify_certificate(cert).passed() {
            fails.push(format!(
                "{label}: constructed certificate fails verification"
            ));
        }
        match search_factorization(&cert.host, &targets_of(cert), reg.search_budget) {
            SearchOutcome::Found(found) => {
                if !verify_certificate(&found).passed() {
                    fails.push(format!("{label}: searched certificate fails verification"));
                }
            }
            SearchOutcome::NotFound { exhausted, nodes } => fails.push(format!(
                "{label}: search found nothing (exhausted={exhausted}, {nodes} nodes)"
            )),
        }
    }
    match search_uniform(&HostSpec::complete(6), &u(3, 2), reg.search_budget) {
        SearchOutcome::NotFound {
            exhausted: true, ..
        } => {}
        other => fails.push(format!("K_6 into triangle factors: {other:?}")),
    }
    report("11", "search and constructions agree on hosts up to 30 vertices; K_6 has no triangle factorization", &fails);
}

#[test]
fn criterion_12_mutations() {
    let pool = common::mutation_pool();
    let mut rng = StdRng::seed_from_u64(12);
    let mut fails = Vec::new();
    for trial in 0..1000 {
        let cert = &pool[rng.gen_range(0..pool.len())];
        let (file, class) = common::mutate(&mut rng, cert);
        let r = verify_file(&file);
        if r.passed() || !r.has(class) {
            fails.push(format!(
                "trial {trial}: expected {class}, got {:?}",
                r.classes()
            ));
        }
    }
    report(
        "12",
        "1000 single-defect mutations rejected with the right class",
        &fails,
    );
}

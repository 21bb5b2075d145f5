//! Independent certificate checks.
//!
//! The verifier reads the on-disk form of a certificate and re-derives
//! everything from the raw arc lists: host membership is decided from the
//! host description by a closed-form predicate, degrees and cycles are
//! recomputed with successor arrays, and the edge partition is checked with
//! a single occurrence map. It shares no code with the constructions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::certificate::{CertificateFile, DecompositionCertificate, HostKind, HostSpec};
use crate::graph::CycleType;
use crate::ingredients::Rgdd;
use crate::quasigroup::Quasigroup;

pub use crate::ingredients::search_factorization as brute_force_decompose;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DefectClass {
    InvalidVertex,
    NotSpanning,
    DegreeViolation,
    ForeignArc,
    DuplicateArc,
    MissingArc,
    TypeMismatch,
    CensusMismatch,
}

impl fmt::Display for DefectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Defect {
    pub class: DefectClass,
    /// Factor index, or `None` for certificate-level defects.
    pub factor: Option<usize>,
    /// Number of offending arcs or vertices.
    pub count: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub role: String,
    pub declared: String,
    pub analyzed: Option<String>,
    pub arcs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub host: String,
    pub vertices: u64,
    pub host_arcs: u64,
    pub covered_arcs: u64,
    pub factors: Vec<FactorReport>,
    pub defects: Vec<Defect>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn has(&self, class: DefectClass) -> bool {
        self.defects.iter().any(|d| d.class == class)
    }

    pub fn classes(&self) -> Vec<DefectClass> {
        let mut c: Vec<_> = self.defects.iter().map(|d| d.class).collect();
        c.sort();
        c.dedup();
        c
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "host {}: {} vertices, {} arcs, {} covered\n",
            self.host, self.vertices, self.host_arcs, self.covered_arcs
        );
        let mut census: BTreeMap<(String, String, Option<String>), usize> = BTreeMap::new();
        for f in &self.factors {
            *census
                .entry((f.role.clone(), f.declared.clone(), f.analyzed.clone()))
                .or_insert(0) += 1;
        }
        for ((role, declared, analyzed), n) in census {
            let a = analyzed.unwrap_or_else(|| "-".into());
            s.push_str(&format!(
                "  {n} x {role} declared {declared} analyzed {a}\n"
            ));
        }
        if self.passed() {
            s.push_str("PASS\n");
        } else {
            for d in &self.defects {
                match d.factor {
                    Some(i) => s.push_str(&format!(
                        "  {} in factor {i} ({}): {}\n",
                        d.class, d.count, d.detail
                    )),
                    None => s.push_str(&format!("  {} ({}): {}\n", d.class, d.count, d.detail)),
                }
            }
            s.push_str("FAIL\n");
        }
        s
    }
}

fn host_has(host: &HostSpec, u: u64, v: u64) -> bool {
    let x = host.part_size as u64;
    let k = host.parts as u64;
    let (pu, pv) = (u / x, v / x);
    match host.kind {
        HostKind::Complete => u != v,
        HostKind::Equipartite => pu != pv,
        HostKind::Union => pu == pv && u != v,
        HostKind::Cyclic if host.directed => k >= 2 && pv == (pu + 1) % k,
        HostKind::Cyclic => k >= 3 && (pv == (pu + 1) % k || pu == (pv + 1) % k),
    }
}

fn host_arc_count(host: &HostSpec) -> u64 {
    let x = host.part_size as u64;
    let k = host.parts as u64;
    let v = x * k;
    match host.kind {
        HostKind::Complete => v * v.saturating_sub(1) / 2,
        HostKind::Equipartite => x * x * k * k.saturating_sub(1) / 2,
        HostKind::Union => k * x * x.saturating_sub(1) / 2,
        HostKind::Cyclic if host.directed => {
            if k >= 2 {
                x * x * k
            } else {
                0
            }
        }
        HostKind::Cyclic => {
            if k >= 3 {
                x * x * k
            } else {
                0
            }
        }
    }
}

struct Tally {
    class: DefectClass,
    count: u64,
    first: Option<String>,
}

impl Tally {
    fn new(class: DefectClass) -> Self {
        Self {
            class,
            count: 0,
            first: None,
        }
    }

    fn hit(&mut self, detail: impl FnOnce() -> String) {
        if self.first.is_none() {
            self.first = Some(detail());
        }
        self.count += 1;
    }

    fn flush(self, factor: Option<usize>, out: &mut Vec<Defect>) {
        if self.count > 0 {
            out.push(Defect {
                class: self.class,
                factor,
                count: self.count,
                detail: self.first.unwrap_or_default(),
            });
        }
    }
}

/// Verifies an in-memory certificate through its explicit file form.
pub fn verify_certificate(cert: &DecompositionCertificate) -> VerificationReport {
    verify_file(&cert.to_file(false))
}

/// Verifies a certificate as read from disk.
pub fn verify_file(file: &CertificateFile) -> VerificationReport {
    let host = file.header.host;
    let x = host.part_size as u64;
    let nv = host.vertex_count();
    let directed = host.directed;
    let vname = |id: u64| format!("({},{})", id % x.max(1), id / x.max(1));
    let mut defects = Vec::new();
    let mut factors = Vec::new();
    let mut owner: HashMap<(u64, u64), usize> = HashMap::new();

    for (fi, rec) in file.factors.iter().enumerate() {
        let mut invalid = Tally::new(DefectClass::InvalidVertex);
        let mut foreign = Tally::new(DefectClass::ForeignArc);
        let mut dup = Tally::new(DefectClass::DuplicateArc);
        let mut spanning = Tally::new(DefectClass::NotSpanning);
        let mut degree = Tally::new(DefectClass::DegreeViolation);
        let mut type_mismatch = Tally::new(DefectClass::TypeMismatch);

        let raw = rec.explicit_arcs();
        let mut arcs: Vec<(u64, u64)> = Vec::with_capacity(raw.len());
        for a in &raw {
            if a[0] as u64 >= x || a[2] as u64 >= x || a[1] >= host.parts || a[3] >= host.parts {
                invalid.hit(|| format!("arc {:?}", a));
                continue;
            }
            let u = a[1] as u64 * x + a[0] as u64;
            let v = a[3] as u64 * x + a[2] as u64;
            let key = if directed || u < v { (u, v) } else { (v, u) };
            if !host_has(&host, u, v) {
                foreign.hit(|| format!("{} -> {}", vname(u), vname(v)));
            }
            match owner.get(&key) {
                Some(&prev) => dup.hit(|| {
                    if prev == fi {
                        format!("{} -> {} repeated", vname(u), vname(v))
                    } else {
                        format!("{} -> {} also in factor {prev}", vname(u), vname(v))
                    }
                }),
                None => {
                    owner.insert(key, fi);
                }
            }
            arcs.push((u, v));
        }

        let n = nv as usize;
        let mut analyzed = None;
        let mut succ = vec![u64::MAX; n];
        let mut out_deg = vec![0u32; n];
        let mut in_deg = vec![0u32; n];
        let mut nbrs = vec![[u64::MAX; 2]; if directed { 0 } else { n }];
        for &(u, v) in &arcs {
            if directed {
                succ[u as usize] = v;
                out_deg[u as usize] += 1;
                in_deg[v as usize] += 1;
            } else {
                for (a, b) in [(u, v), (v, u)] {
                    let d = out_deg[a as usize] as usize;
                    if d < 2 {
                        nbrs[a as usize][d] = b;
                    }
                    out_deg[a as usize] += 1;
                    in_deg[a as usize] += 1;
                }
            }
        }
        let want = if directed { 1 } else { 2 };
        for w in 0..n {
            if out_deg[w] == 0 && in_deg[w] == 0 {
                spanning.hit(|| format!("vertex {} uncovered", vname(w as u64)));
            } else if out_deg[w] != want || in_deg[w] != want {
                degree.hit(|| {
                    format!(
                        "vertex {} has in {} out {}",
                        vname(w as u64),
                        in_deg[w],
                        out_deg[w]
                    )
                });
            }
        }
        if spanning.count == 0 && degree.count == 0 && invalid.count == 0 && n > 0 {
            let mut seen = vec![false; n];
            let mut lengths = Vec::new();
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let mut len = 0u32;
                if directed {
                    let mut w = s;
                    while !seen[w] {
                        seen[w] = true;
                        len += 1;
                        w = succ[w] as usize;
                    }
                } else {
                    let (mut prev, mut cur) = (usize::MAX, s);
                    loop {
                        seen[cur] = true;
                        len += 1;
                        let [a, b] = nbrs[cur];
                        let next = if a as usize != prev { a } else { b } as usize;
                        prev = cur;
                        cur = next;
                        if cur == s {
                            break;
                        }
                    }
                }
                lengths.push(len);
            }
            let t = CycleType::from_lengths(lengths);
            if t != rec.declared_type {
                type_mismatch.hit(|| format!("declared {} analyzed {}", rec.declared_type, t));
            }
            analyzed = Some(t.to_string());
        } else if rec.declared_type.total_vertices() != nv {
            type_mismatch.hit(|| {
                format!(
                    "declared {} does not cover {nv} vertices",
                    rec.declared_type
                )
            });
        }

        for t in [invalid, spanning, degree, foreign, dup, type_mismatch] {
            t.flush(Some(fi), &mut defects);
        }
        factors.push(FactorReport {
            role: rec.role.clone(),
            declared: rec.declared_type.to_string(),
            analyzed,
            arcs: raw.len(),
        });
    }

    let host_arcs = host_arc_count(&host);
    let covered = owner
        .keys()
        .filter(|&&(u, v)| host_has(&host, u, v))
        .count() as u64;
    if covered < host_arcs {
        defects.push(Defect {
            class: DefectClass::MissingArc,
            factor: None,
            count: host_arcs - covered,
            detail: format!("{} of {host_arcs} host arcs uncovered", host_arcs - covered),
        });
    }

    let mut actual: BTreeMap<(String, CycleType), u32> = BTreeMap::new();
    for rec in &file.factors {
        *actual
            .entry((rec.role.clone(), rec.declared_type.clone()))
            .or_insert(0) += 1;
    }
    let mut declared: BTreeMap<(String, CycleType), u32> = BTreeMap::new();
    for c in &file.header.construction.census {
        *declared
            .entry((c.role.clone(), c.cycle_type.clone()))
            .or_insert(0) += c.count;
    }
    if actual != declared {
        let diff = actual
            .keys()
            .chain(declared.keys())
            .filter(|k| actual.get(*k) != declared.get(*k))
            .count();
        defects.push(Defect {
            class: DefectClass::CensusMismatch,
            factor: None,
            count: diff as u64,
            detail: "factor roles and types disagree with the header census".into(),
        });
    }

    VerificationReport {
        host: host.describe(),
        vertices: nv,
        host_arcs,
        covered_arcs: covered,
        factors,
        defects,
    }
}

/// Every row and column of the table is a permutation.
pub fn check_quasigroup(q: &Quasigroup) -> bool {
    let w = q.order as usize;
    if q.table.len() != w * w {
        return false;
    }
    for r in 0..w {
        let mut row = vec![false; w];
        let mut col = vec![false; w];
        for c in 0..w {
            let a = q.table[r * w + c] as usize;
            let b = q.table[c * w + r] as usize;
            if a >= w || b >= w || row[a] || col[b] {
                return false;
            }
            row[a] = true;
            col[b] = true;
        }
    }
    true
}

/// The pair map `(i, j) ↦ (i∘j, i*j)` is injective.
pub fn check_orthogonality(a: &Quasigroup, b: &Quasigroup) -> bool {
    if a.order != b.order || !check_quasigroup(a) || !check_quasigroup(b) {
        return false;
    }
    let w = a.order as usize;
    let mut seen = vec![false; w * w];
    for idx in 0..w * w {
        let key = a.table[idx] as usize * w + b.table[idx] as usize;
        if seen[key] {
            return false;
        }
        seen[key] = true;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RgddReport {
    pub groups_partition: bool,
    pub blocks_well_formed: bool,
    pub blocks_transverse: bool,
    pub pair_coverage: bool,
    pub classes_resolve: bool,
}

impl RgddReport {
    pub fn passed(&self) -> bool {
        self.groups_partition
            && self.blocks_well_formed
            && self.blocks_transverse
            && self.pair_coverage
            && self.classes_resolve
    }
}

/// Checks the group, block, coverage and resolvability axioms by enumeration.
pub fn check_rgdd(d: &Rgdd) -> RgddReport {
    let v = (d.h * d.u) as usize;
    let mut group_of = vec![usize::MAX; v];
    let mut groups_partition = d.groups.len() == d.u as usize;
    for (gi, g) in d.groups.iter().enumerate() {
        groups_partition &= g.len() == d.h as usize;
        for &p in g {
            if (p as usize) < v && group_of[p as usize] == usize::MAX {
                group_of[p as usize] = gi;
            } else {
                groups_partition = false;
            }
        }
    }
    groups_partition &= group_of.iter().all(|&g| g != usize::MAX);

    let mut blocks_well_formed = true;
    let mut blocks_transverse = true;
    let mut classes_resolve = true;
    let mut pairs = vec![0u32; v * v];
    for class in &d.classes {
        let mut hit = vec![false; v];
        for b in class {
            let ok = b.len() == 3 && b.iter().all(|&p| (p as usize) < v);
            if !ok {
                blocks_well_formed = false;
                classes_resolve = false;
                continue;
            }
            for (ai, &a) in b.iter().enumerate() {
                if hit[a as usize] {
                    classes_resolve = false;
                }
                hit[a as usize] = true;
                for &c in &b[ai + 1..] {
                    if a == c {
                        blocks_well_formed = false;
                    } else if group_of[a as usize] == group_of[c as usize] {
                        blocks_transverse = false;
                    } else {
                        pairs[a as usize * v + c as usize] += 1;
                        pairs[c as usize * v + a as usize] += 1;
                    }
                }
            }
        }
        classes_resolve &= hit.iter().all(|&h| h);
    }
    let mut pair_coverage = groups_partition;
    if groups_partition {
        for a in 0..v {
            for c in a + 1..v {
                if group_of[a] != group_of[c] && pairs[a * v + c] != d.lambda {
                    pair_coverage = false;
                }
            }
        }
    }
    RgddReport {
        groups_partition,
        blocks_well_formed,
        blocks_transverse,
        pair_coverage,
        classes_resolve,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::decompose_cxn;

    #[test]
    fn valid_certificate_passes() {
        let r = verify_certificate(&decompose_cxn(5, 7, 3).unwrap());
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.covered_arcs, 175);
    }

    #[test]
    fn deleted_arc_detected() {
        let mut f = decompose_cxn(5, 7, 3).unwrap().to_file(false);
        f.factors[1].arcs.as_mut().unwrap().pop();
        let r = verify_file(&f);
        assert!(r.has(DefectClass::DegreeViolation));
        assert!(r.has(DefectClass::MissingArc));
    }

    #[test]
    fn equal_tables_not_orthogonal() {
        let q = Quasigroup::from_fn(3, |i, j| (i + j) % 3);
        assert!(check_quasigroup(&q));
        assert!(!check_orthogonality(&q, &q));
        let bad = Quasigroup::from_fn(3, |i, _| i);
        assert!(!check_quasigroup(&bad));
    }

    #[test]
    fn order_six_cyclic_pairs_fail() {
        // every pair of tables (i + a j, i + b j) over Z_6 with a, b units
        for a in [1u32, 5] {
            for b in [1u32, 5] {
                let qa = Quasigroup::from_fn(6, |i, j| (i + a * j) % 6);
                let qb = Quasigroup::from_fn(6, |i, j| (i + b * j) % 6);
                assert!(!check_orthogonality(&qa, &qb));
            }
        }
    }
}

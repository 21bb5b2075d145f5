//! Building blocks used as black boxes by the compositions: uniform
//! factorizations of `K_v`, 3-RGDDs, user-supplied designs and a bounded
//! backtracking search.
//!
//! Every ingredient is checked by the verifier before it is handed out.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::certificate::{
    CertificateFile, DecompositionCertificate, HostKind, HostSpec, ROLE_UNIFORM,
};
use crate::error::{ConstructError, Result};
use crate::graph::{CycleType, EquipartiteDigraph};
use crate::verify::{check_rgdd, verify_certificate, verify_file};

/// Environment variable naming the directory of extra ingredient files.
pub const INGREDIENT_DIR_ENV: &str = "HWF_INGREDIENT_DIR";

/// A verified 2-factorization of `K_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompleteGraphFactorization {
    pub v: u32,
    pub certificate: DecompositionCertificate,
}

impl CompleteGraphFactorization {
    /// Accepts a certificate over `K_v` that passes verification.
    pub fn from_certificate(cert: DecompositionCertificate) -> Result<Self> {
        if cert.host.kind != HostKind::Complete {
            return Err(ConstructError::Ingredient(format!(
                "expected a complete-graph host, found {}",
                cert.host.describe()
            )));
        }
        let report = verify_certificate(&cert);
        if !report.passed() {
            return Err(ConstructError::Ingredient(format!(
                "factorization of {} fails verification: {:?}",
                cert.host.describe(),
                report.classes()
            )));
        }
        Ok(Self {
            v: cert.host.vertex_count() as u32,
            certificate: cert,
        })
    }

    /// Cycle length when every factor is a `C_n`-factor.
    pub fn uniform_length(&self) -> Option<u32> {
        let first = self
            .certificate
            .factors
            .first()?
            .declared_type
            .uniform_length()?;
        self.certificate
            .factors
            .iter()
            .all(|f| f.declared_type.uniform_length() == Some(first))
            .then_some(first)
    }

    pub fn factors(&self) -> impl Iterator<Item = &EquipartiteDigraph> {
        self.certificate.factors.iter().map(|f| &f.graph)
    }
}

fn complete_from_cycles(
    v: u32,
    lemma: &str,
    classes: &[Vec<Vec<u32>>],
) -> CompleteGraphFactorization {
    let mut cert = DecompositionCertificate::new(HostSpec::complete(v), lemma).with_param("v", v);
    for class in classes {
        let mut arcs = Vec::new();
        let mut lengths = Vec::new();
        for c in class {
            lengths.push(c.len() as u32);
            for t in 0..c.len() {
                arcs.push((c[t], c[(t + 1) % c.len()]));
            }
        }
        let g = EquipartiteDigraph::from_ids(v, 1, false, arcs)
            .expect("cycle classes are edge-disjoint");
        cert.push(ROLE_UNIFORM, CycleType::from_lengths(lengths), g);
    }
    CompleteGraphFactorization::from_certificate(cert.seal())
        .expect("built-in factorization verifies")
}

/// Walecki's rotational decomposition of `K_v`, `v` odd, into `(v−1)/2`
/// Hamiltonian cycles.
pub fn walecki_hamiltonian(v: u32) -> Result<CompleteGraphFactorization> {
    if v < 3 || v.is_multiple_of(2) {
        return Err(ConstructError::excluded("v", v, "Walecki needs odd v >= 3"));
    }
    let m = (v - 1) / 2;
    let inf = v - 1;
    let modulus = 2 * m;
    // zigzag 0, 1, -1, 2, -2, ..., m on Z_2m
    let zigzag: Vec<u32> = (0..modulus)
        .map(|t| {
            if t == 0 {
                0
            } else if t % 2 == 1 {
                t.div_ceil(2)
            } else {
                modulus - t / 2
            }
        })
        .collect();
    let classes: Vec<Vec<Vec<u32>>> = (0..m)
        .map(|i| {
            let mut c = vec![inf];
            c.extend(zigzag.iter().map(|&z| (z + i) % modulus));
            vec![c]
        })
        .collect();
    Ok(complete_from_cycles(v, "walecki", &classes))
}

/// Parallel classes of a Kirkman triple system on 15 points: a packing of
/// the lines of `PG(3,2)` into seven spreads.
const KTS15: [[[u32; 3]; 5]; 7] = [
    [[0, 1, 2], [3, 7, 11], [4, 9, 14], [5, 10, 12], [6, 8, 13]],
    [[0, 3, 4], [1, 7, 9], [2, 12, 13], [5, 8, 14], [6, 10, 11]],
    [[0, 5, 6], [1, 8, 10], [2, 11, 14], [3, 9, 13], [4, 7, 12]],
    [[0, 7, 8], [1, 11, 13], [2, 4, 5], [3, 10, 14], [6, 9, 12]],
    [[0, 9, 10], [1, 12, 14], [2, 3, 6], [4, 8, 11], [5, 7, 13]],
    [[0, 11, 12], [1, 3, 5], [2, 8, 9], [4, 10, 13], [6, 7, 14]],
    [[0, 13, 14], [1, 4, 6], [2, 7, 10], [3, 8, 12], [5, 9, 11]],
];

fn kts_classes(v: u32) -> Option<Vec<Vec<Vec<u32>>>> {
    match v {
        3 => Some(vec![vec![vec![0, 1, 2]]]),
        9 => {
            // lines of the affine plane over Z_3, point (a, b) = 3a + b
            let line = |f: &dyn Fn(u32, u32) -> u32, c: u32| -> Vec<u32> {
                (0..9).filter(|&p| f(p / 3, p % 3) == c).collect()
            };
            let slopes: [&dyn Fn(u32, u32) -> u32; 4] =
                [&|_, b| b, &|a, _| a, &|a, b| (b + 3 - a) % 3, &|a, b| {
                    (b + 6 - 2 * a) % 3
                }];
            Some(
                slopes
                    .iter()
                    .map(|f| (0..3).map(|c| line(f, c)).collect())
                    .collect(),
            )
        }
        15 => Some(
            KTS15
                .iter()
                .map(|class| class.iter().map(|t| t.to_vec()).collect())
                .collect(),
        ),
        _ => None,
    }
}

/// Resolvable triangle factorizations of `K_v` for `v ∈ {3, 9, 15}`.
pub fn kirkman_small(v: u32) -> Result<CompleteGraphFactorization> {
    let classes = kts_classes(v).ok_or_else(|| {
        ConstructError::Ingredient(format!("no built-in Kirkman triple system on {v} points"))
    })?;
    Ok(complete_from_cycles(v, "kirkman", &classes))
}

/// Existence predicate for a `C_n`-factorization of `K_v`: `n | v` and
/// `(v, n) ∉ {(6, 3), (12, 3)}`.
pub fn op_feasible(v: u32, n: u32) -> bool {
    n >= 3 && v >= n && v.is_multiple_of(n) && (v, n) != (6, 3) && (v, n) != (12, 3)
}

/// A 3-RGDD: points `0..h·u` in `u` groups of size `h`, with parallel classes
/// of 3-element blocks covering each transverse pair `lambda` times.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Rgdd {
    pub h: u32,
    pub u: u32,
    pub lambda: u32,
    pub groups: Vec<Vec<u32>>,
    pub classes: Vec<Vec<Vec<u32>>>,
}

impl Rgdd {
    /// Reads a `λ = 1` design from a triangle factorization of `K_(h:u)`;
    /// groups are the parts and point `(g, i)` is `i·h + g`.
    pub fn from_certificate(cert: &DecompositionCertificate) -> Result<Self> {
        let host = cert.host;
        if host.kind != HostKind::Equipartite
            && !(host.kind == HostKind::Complete && host.parts == 1)
        {
            return Err(ConstructError::Ingredient(format!(
                "{} is not an equipartite host",
                host.describe()
            )));
        }
        let (h, u) = if host.kind == HostKind::Complete {
            (1, host.part_size)
        } else {
            (host.part_size, host.parts)
        };
        let mut classes = Vec::new();
        for f in &cert.factors {
            if f.declared_type.uniform_length() != Some(3) {
                return Err(ConstructError::Ingredient(
                    "design factors must be triangle factors".into(),
                ));
            }
            let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for &(a, b) in f.graph.arcs() {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
            let mut seen = vec![false; (h * u) as usize];
            let mut blocks = Vec::new();
            for (&p, nb) in &adj {
                if seen[p as usize] || nb.len() != 2 {
                    continue;
                }
                let mut b = vec![p, nb[0], nb[1]];
                b.sort_unstable();
                for &q in &b {
                    seen[q as usize] = true;
                }
                blocks.push(b);
            }
            classes.push(blocks);
        }
        let d = Rgdd {
            h,
            u,
            lambda: 1,
            groups: (0..u)
                .map(|i| (0..h).map(|g| i * h + g).collect())
                .collect(),
            classes,
        };
        let report = check_rgdd(&d);
        if !report.passed() {
            return Err(ConstructError::Ingredient(format!(
                "RGDD axioms violated: {report:?}"
            )));
        }
        Ok(d)
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// The triangle factorization of `K_(h:u)` read by [`Rgdd::from_certificate`].
    pub fn to_certificate(&self) -> Result<DecompositionCertificate> {
        let host = if self.h == 1 {
            HostSpec::complete(self.u)
        } else {
            HostSpec::equipartite(self.h, self.u)
        };
        let mut cert = DecompositionCertificate::new(host, "rgdd")
            .with_param("h", self.h)
            .with_param("u", self.u);
        let t = CycleType::uniform(3, self.h * self.u / 3);
        for class in &self.classes {
            let arcs = class
                .iter()
                .flat_map(|b| [(b[0], b[1]), (b[1], b[2]), (b[0], b[2])]);
            let g = EquipartiteDigraph::from_ids(host.part_size, host.parts, false, arcs)?;
            cert.push(ROLE_UNIFORM, t.clone(), g);
        }
        Ok(cert.seal())
    }
}

/// Existence predicate for a `(3, λ)`-RGDD of type `h^u`.
pub fn rgdd_feasible(h: u32, u: u32, lambda: u32) -> bool {
    if u < 3 || !(lambda * h * (u - 1)).is_multiple_of(2) || !(h * u).is_multiple_of(3) {
        return false;
    }
    if (lambda, h, u) == (1, 2, 6) || (lambda, h, u) == (1, 6, 3) {
        return false;
    }
    if lambda % 2 == 1 && (h, u) == (2, 3) {
        return false;
    }
    if lambda % 4 == 2 && (h, u) == (1, 6) {
        return false;
    }
    true
}

fn rgdd_3_3() -> Rgdd {
    // class d: blocks {(g,0), (g+d,1), (g+2d,2)}
    let classes = (0..3)
        .map(|d| {
            (0..3)
                .map(|g| vec![g, 3 + (g + d) % 3, 6 + (g + 2 * d) % 3])
                .collect()
        })
        .collect();
    Rgdd {
        h: 3,
        u: 3,
        lambda: 1,
        groups: (0..3)
            .map(|i| (0..3).map(|g| 3 * i + g).collect())
            .collect(),
        classes,
    }
}

/// Built-in 3-RGDDs: type `3^3`, and type `1^v` for `v ∈ {3, 9, 15}`.
pub fn rgdd_builtin(h: u32, u: u32) -> Option<Rgdd> {
    match (h, u) {
        (3, 3) => Some(rgdd_3_3()),
        (1, v) => kts_classes(v).map(|classes| Rgdd {
            h: 1,
            u: v,
            lambda: 1,
            groups: (0..v).map(|p| vec![p]).collect(),
            classes,
        }),
        _ => None,
    }
}

/// Validated ingredient read from a certificate file.
#[derive(Clone, Debug, PartialEq)]
pub enum Ingredient {
    Complete(CompleteGraphFactorization),
    Rgdd(Rgdd),
}

impl Ingredient {
    pub fn describe(&self) -> String {
        match self {
            Ingredient::Complete(c) => {
                format!("K_{} factorization: {}", c.v, c.certificate.census_string())
            }
            Ingredient::Rgdd(d) => {
                format!("3-RGDD({}^{}) with {} classes", d.h, d.u, d.class_count())
            }
        }
    }
}

/// Parses and validates an ingredient in certificate format.
pub fn ingest_design_text(text: &str) -> Result<Ingredient> {
    let file = CertificateFile::from_json(text)
        .map_err(|e| ConstructError::Ingredient(format!("parse error: {e}")))?;
    let report = verify_file(&file);
    if !report.passed() {
        return Err(ConstructError::Ingredient(format!(
            "ingredient fails verification: {:?}",
            report.classes()
        )));
    }
    let cert = file.into_certificate()?;
    match cert.host.kind {
        HostKind::Complete => Ok(Ingredient::Complete(
            CompleteGraphFactorization::from_certificate(cert)?,
        )),
        HostKind::Equipartite => Ok(Ingredient::Rgdd(Rgdd::from_certificate(&cert)?)),
        _ => Err(ConstructError::Ingredient(format!(
            "unsupported ingredient host {}",
            cert.host.describe()
        ))),
    }
}

pub fn ingest_design(path: &Path) -> Result<Ingredient> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConstructError::Ingredient(format!("{}: {e}", path.display())))?;
    ingest_design_text(&text)
}

/// Lookup for ingredients: built-ins first, then ingested designs, then a
/// bounded search.
#[derive(Clone, Debug, Default)]
pub struct IngredientRegistry {
    complete: Vec<CompleteGraphFactorization>,
    rgdds: Vec<Rgdd>,
    pub search_budget: u64,
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

impl IngredientRegistry {
    pub fn builtin() -> Self {
        Self {
            complete: Vec::new(),
            rgdds: Vec::new(),
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    /// Built-ins plus every `*.json` file of `dir`.
    pub fn with_dir(dir: &Path) -> Result<Self> {
        let mut reg = Self::builtin();
        let entries = fs::read_dir(dir)
            .map_err(|e| ConstructError::Ingredient(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for p in paths {
            reg.add(ingest_design(&p)?);
        }
        Ok(reg)
    }

    /// Uses the directory named by `HWF_INGREDIENT_DIR` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(INGREDIENT_DIR_ENV) {
            Some(dir) if Path::new(&dir).is_dir() => Self::with_dir(Path::new(&dir)),
            _ => Ok(Self::builtin()),
        }
    }

    pub fn add(&mut self, ing: Ingredient) {
        match ing {
            Ingredient::Complete(c) => self.complete.push(c),
            Ingredient::Rgdd(d) => self.rgdds.push(d),
        }
    }

    pub fn ingested(&self) -> Vec<Ingredient> {
        self.complete
            .iter()
            .cloned()
            .map(Ingredient::Complete)
            .chain(self.rgdds.iter().cloned().map(Ingredient::Rgdd))
            .collect()
    }

    pub fn describe(&self) -> Vec<String> {
        let mut out = vec![
            "builtin: Walecki Hamiltonian factorization of K_v, v odd".to_string(),
            "builtin: Kirkman triangle factorizations of K_3, K_9, K_15".to_string(),
            "builtin: 3-RGDD(3^3), 3-RGDD(1^3), 3-RGDD(1^9), 3-RGDD(1^15)".to_string(),
            format!("search: backtracking up to {} nodes", self.search_budget),
        ];
        out.extend(
            self.ingested()
                .iter()
                .map(|i| format!("ingested: {}", i.describe())),
        );
        out
    }

    /// A `C_n`-factorization of `K_v`.
    pub fn complete_factorization(&self, v: u32, n: u32) -> Result<CompleteGraphFactorization> {
        if v.is_multiple_of(2) {
            return Err(ConstructError::Ingredient(format!("K_{v} has odd degree")));
        }
        if !op_feasible(v, n) {
            return Err(ConstructError::Ingredient(format!(
                "K_{v} has no C_{n}-factorization"
            )));
        }
        if n == v {
            return walecki_hamiltonian(v);
        }
        if n == 3 {
            if let Ok(k) = kirkman_small(v) {
                return Ok(k);
            }
        }
        if let Some(c) = self
            .complete
            .iter()
            .find(|c| c.v == v && c.uniform_length() == Some(n))
        {
            return Ok(c.clone());
        }
        if v <= 30 {
            let host = HostSpec::complete(v);
            let t = CycleType::uniform(n, v / n);
            if let SearchOutcome::Found(cert) = search_uniform(&host, &t, self.search_budget) {
                return CompleteGraphFactorization::from_certificate(cert);
            }
        }
        Err(ConstructError::Ingredient(format!(
            "no C_{n}-factorization of K_{v} available; supply one via {INGREDIENT_DIR_ENV}"
        )))
    }

    pub fn rgdd(&self, h: u32, u: u32) -> Result<Rgdd> {
        if let Some(d) = rgdd_builtin(h, u) {
            return Ok(d);
        }
        if let Some(d) = self.rgdds.iter().find(|d| d.h == h && d.u == u) {
            return Ok(d.clone());
        }
        Err(ConstructError::Ingredient(if rgdd_feasible(h, u, 1) {
            format!(
                "3-RGDD({h}^{u}) exists but is not available; supply one via {INGREDIENT_DIR_ENV}"
            )
        } else {
            format!("3-RGDD({h}^{u}) does not exist")
        }))
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(DecompositionCertificate),
    /// `exhausted` is true when the whole search space was explored, so no
    /// decomposition of the requested shape exists.
    NotFound {
        exhausted: bool,
        nodes: u64,
    },
}

impl SearchOutcome {
    pub fn found(self) -> Option<DecompositionCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// A factor shape requested from the search.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FactorTarget {
    pub role: String,
    pub cycle_type: CycleType,
}

struct Search {
    n: usize,
    directed: bool,
    rem: Vec<u64>,
    nodes: u64,
    budget: u64,
    factors: Vec<(FactorTarget, Vec<(u32, u32)>)>,
}

impl Search {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.budget
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.rem[u] &= !(1 << v);
        if !self.directed {
            self.rem[v] &= !(1 << u);
        }
    }

    fn restore(&mut self, u: usize, v: usize) {
        self.rem[u] |= 1 << v;
        if !self.directed {
            self.rem[v] |= 1 << u;
        }
    }

    /// Places the remaining factors; `Err(())` means the budget ran out.
    fn factors_level(
        &mut self,
        pending: &mut BTreeMap<FactorTarget, u32>,
    ) -> std::result::Result<bool, ()> {
        if pending.values().all(|&c| c == 0) {
            return Ok(true);
        }
        let keys: Vec<FactorTarget> = pending
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(k, _)| k.clone())
            .collect();
        for t in keys {
            *pending.get_mut(&t).unwrap() -= 1;
            let mut lengths: BTreeMap<u32, u32> = t.cycle_type.entries().collect();
            let mut arcs = Vec::new();
            let r = self.cycles_level(0, &mut lengths, &mut arcs, true, &t, pending);
            *pending.get_mut(&t).unwrap() += 1;
            match r {
                Ok(true) => return Ok(true),
                Ok(false) => {}
                Err(()) => return Err(()),
            }
        }
        Ok(false)
    }

    fn cycles_level(
        &mut self,
        covered: u64,
        lengths: &mut BTreeMap<u32, u32>,
        arcs: &mut Vec<(u32, u32)>,
        first: bool,
        target: &FactorTarget,
        pending: &mut BTreeMap<FactorTarget, u32>,
    ) -> std::result::Result<bool, ()> {
        let full = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        if covered == full {
            self.factors.push((target.clone(), arcs.clone()));
            let r = self.factors_level(pending)?;
            if !r {
                self.factors.pop();
            }
            return Ok(r);
        }
        if !self.tick() {
            return Err(());
        }
        let start = (!covered).trailing_zeros() as usize;
        let options: Vec<u32> = lengths
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&l, _)| l)
            .collect();
        for len in options {
            *lengths.get_mut(&len).unwrap() -= 1;
            let mut path = vec![start];
            let forced = if first {
                let m = self.rem[start];
                if m == 0 {
                    *lengths.get_mut(&len).unwrap() += 1;
                    return Ok(false);
                }
                Some(m.trailing_zeros() as usize)
            } else {
                None
            };
            let r = self.extend(
                &mut path,
                len as usize,
                covered | 1 << start,
                forced,
                lengths,
                arcs,
                target,
                pending,
            );
            *lengths.get_mut(&len).unwrap() += 1;
            match r {
                Ok(true) => return Ok(true),
                Ok(false) => {}
                Err(()) => return Err(()),
            }
        }
        Ok(false)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        path: &mut Vec<usize>,
        len: usize,
        covered: u64,
        forced: Option<usize>,
        lengths: &mut BTreeMap<u32, u32>,
        arcs: &mut Vec<(u32, u32)>,
        target: &FactorTarget,
        pending: &mut BTreeMap<FactorTarget, u32>,
    ) -> std::result::Result<bool, ()> {
        let last = *path.last().unwrap();
        let start = path[0];
        if path.len() == len {
            if self.rem[last] >> start & 1 == 0 {
                return Ok(false);
            }
            if !self.directed && len > 2 && forced.is_none() && path[1] > last {
                return Ok(false);
            }
            self.remove(last, start);
            arcs.push(norm(self.directed, last, start));
            let r = self.cycles_level(covered, lengths, arcs, false, target, pending);
            arcs.pop();
            self.restore(last, start);
            return r;
        }
        if !self.tick() {
            return Err(());
        }
        let mut cand = self.rem[last] & !covered;
        if path.len() == 1 {
            if let Some(f) = forced {
                cand &= 1 << f;
            }
        }
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.remove(last, w);
            arcs.push(norm(self.directed, last, w));
            path.push(w);
            let r = self.extend(
                path,
                len,
                covered | 1 << w,
                forced,
                lengths,
                arcs,
                target,
                pending,
            );
            path.pop();
            arcs.pop();
            self.restore(last, w);
            match r {
                Ok(true) => return Ok(true),
                Ok(false) => {}
                Err(()) => return Err(()),
            }
        }
        Ok(false)
    }
}

fn norm(directed: bool, u: usize, v: usize) -> (u32, u32) {
    if directed || u < v {
        (u as u32, v as u32)
    } else {
        (v as u32, u as u32)
    }
}

/// Backtracking search for a decomposition of `host` into factors of the
/// given shapes, one target per factor. Each new factor is required to use
/// the smallest remaining arc at vertex 0, which removes the symmetry between
/// factors without losing solutions. Hosts above 64 vertices are not
/// searched.
pub fn search_factorization(
    host: &HostSpec,
    targets: &[FactorTarget],
    budget: u64,
) -> SearchOutcome {
    let n = host.vertex_count() as usize;
    let not_found = |exhausted, nodes| SearchOutcome::NotFound { exhausted, nodes };
    if n == 0 || n > 64 {
        return not_found(false, 0);
    }
    let g = host.graph();
    // a spanning 2-regular factor has n edges, a 1-in 1-out factor n arcs
    let per_factor = n;
    if targets
        .iter()
        .any(|t| t.cycle_type.total_vertices() != n as u64)
        || targets.len() * per_factor != g.arc_count()
    {
        return not_found(true, 0);
    }
    let mut rem = vec![0u64; n];
    for &(u, v) in g.arcs() {
        rem[u as usize] |= 1 << v;
        if !g.is_directed() {
            rem[v as usize] |= 1 << u;
        }
    }
    let deg_ok = if g.is_directed() {
        (0..n).all(|w| {
            let indeg = rem.iter().filter(|m| *m >> w & 1 == 1).count();
            rem[w].count_ones() as usize == targets.len() && indeg == targets.len()
        })
    } else {
        rem.iter()
            .all(|m| m.count_ones() as usize == 2 * targets.len())
    };
    if !deg_ok {
        return not_found(true, 0);
    }
    let mut pending: BTreeMap<FactorTarget, u32> = BTreeMap::new();
    for t in targets {
        *pending.entry(t.clone()).or_insert(0) += 1;
    }
    let mut s = Search {
        n,
        directed: g.is_directed(),
        rem,
        nodes: 0,
        budget,
        factors: Vec::new(),
    };
    match s.factors_level(&mut pending) {
        Ok(true) => {
            let mut cert =
                DecompositionCertificate::new(*host, "search").with_param("budget", budget);
            for (t, arcs) in s.factors {
                let graph =
                    EquipartiteDigraph::from_ids(host.part_size, host.parts, host.directed, arcs)
                        .expect("search emits distinct arcs");
                cert.push(&t.role, t.cycle_type, graph);
            }
            SearchOutcome::Found(cert.seal())
        }
        Ok(false) => not_found(true, s.nodes),
        Err(()) => not_found(false, s.nodes),
    }
}

/// Searches for a factorization of `host` into factors of one type; the
/// factor count is fixed by the arc count.
pub fn search_uniform(host: &HostSpec, t: &CycleType, budget: u64) -> SearchOutcome {
    let n = host.vertex_count();
    let arcs = host.graph().arc_count() as u64;
    if n == 0 || !arcs.is_multiple_of(n) {
        return SearchOutcome::NotFound {
            exhausted: true,
            nodes: 0,
        };
    }
    let targets = vec![
        FactorTarget {
            role: ROLE_UNIFORM.to_string(),
            cycle_type: t.clone(),
        };
        (arcs / n) as usize
    ];
    search_factorization(host, &targets, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walecki_small() {
        for v in [3, 5, 7, 9, 11] {
            let w = walecki_hamiltonian(v).unwrap();
            assert_eq!(w.certificate.factors.len() as u32, (v - 1) / 2);
            assert_eq!(w.uniform_length(), Some(v));
        }
        assert!(walecki_hamiltonian(6).is_err());
    }

    #[test]
    fn kirkman_tables() {
        assert_eq!(kirkman_small(9).unwrap().certificate.factors.len(), 4);
        assert_eq!(kirkman_small(15).unwrap().certificate.factors.len(), 7);
        assert_eq!(kirkman_small(3).unwrap().certificate.factors.len(), 1);
        assert!(kirkman_small(21).is_err());
    }

    #[test]
    fn feasibility_predicates() {
        assert!(op_feasible(9, 3));
        assert!(!op_feasible(6, 3));
        assert!(!op_feasible(12, 3));
        assert!(!rgdd_feasible(2, 6, 1));
        assert!(rgdd_feasible(3, 3, 1));
        assert!(!rgdd_feasible(6, 3, 1));
        assert!(!rgdd_feasible(2, 3, 3));
        assert!(!rgdd_feasible(1, 6, 2));
        assert!(rgdd_feasible(1, 9, 1));
    }

    #[test]
    fn builtin_rgdds_valid() {
        for (h, u) in [(3, 3), (1, 3), (1, 9), (1, 15)] {
            let d = rgdd_builtin(h, u).unwrap();
            assert!(check_rgdd(&d).passed(), "h={h} u={u}");
        }
        assert_eq!(rgdd_builtin(3, 3).unwrap().class_count(), 3);
    }

    #[test]
    fn search_small_hosts() {
        let k9 = search_uniform(&HostSpec::complete(9), &CycleType::uniform(3, 3), 1_000_000)
            .found()
            .unwrap();
        assert_eq!(k9.factors.len(), 4);
        assert!(verify_certificate(&k9).passed());
        let c33 = search_uniform(
            &HostSpec::cyclic(3, 3, true),
            &CycleType::uniform(9, 1),
            1_000_000,
        )
        .found()
        .unwrap();
        assert_eq!(c33.factors.len(), 3);
        assert!(matches!(
            search_uniform(&HostSpec::complete(6), &CycleType::uniform(3, 2), 1_000_000),
            SearchOutcome::NotFound {
                exhausted: true,
                ..
            }
        ));
    }

    #[test]
    fn ingestion_roundtrip() {
        let k = kirkman_small(9).unwrap();
        let text = k.certificate.to_json(false);
        assert_eq!(ingest_design_text(&text).unwrap(), Ingredient::Complete(k));
        let mut file = CertificateFile::from_json(&text).unwrap();
        file.factors[0].arcs.as_mut().unwrap().pop();
        assert!(ingest_design_text(&file.to_json()).is_err());
    }
}

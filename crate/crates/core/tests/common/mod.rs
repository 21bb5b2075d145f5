#![allow(dead_code)]

use std::collections::BTreeSet;

use hwf_core::base::{appendix_c12_n, decompose_cxn};
use hwf_core::certificate::CertificateFile;
use hwf_core::composition::{cvresult, main_theorem, triangle_blowup, ClassConfig, CvCase};
use hwf_core::four_part::decompose_c4n;
use hwf_core::graph::{make_complete_equipartite, make_directed_cyclic};
use hwf_core::ingredients::{kirkman_small, IngredientRegistry};
use hwf_core::multivar::decompose_xy;
use hwf_core::product::{partite_product, predicted_cycle_product, product_of_cycles};
use hwf_core::verify::DefectClass;
use hwf_core::{CycleType, DecompositionCertificate, EquipartiteDigraph, PartiteVertex};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// Directed cycle through consecutive parts `0, 1, …` of `C→_(x:k)` with a
/// random choice of `len / k` distinct elements in each part.
pub fn random_cycle<R: Rng>(rng: &mut R, x: u32, k: u32, len: u32) -> EquipartiteDigraph {
    let per = len / k;
    let cols: Vec<Vec<u32>> = (0..k)
        .map(|_| {
            let mut e: Vec<u32> = (0..x).collect();
            e.shuffle(rng);
            e.truncate(per as usize);
            e
        })
        .collect();
    let seq: Vec<u32> = (0..len)
        .map(|t| cols[(t % k) as usize][(t / k) as usize])
        .collect();
    let arcs = (0..len).map(|t| {
        (
            PartiteVertex::new(seq[t as usize], t % k),
            PartiteVertex::new(seq[((t + 1) % len) as usize], (t + 1) % k),
        )
    });
    EquipartiteDigraph::from_vertex_arcs(x, k, true, arcs).unwrap()
}

/// Random subgraph of `C→_(x:k)` keeping each arc with probability 1/2.
pub fn random_cyclic_subgraph<R: Rng>(rng: &mut R, x: u32, k: u32) -> EquipartiteDigraph {
    let full = make_directed_cyclic(x, k);
    let keep: Vec<bool> = (0..full.arc_count()).map(|_| rng.gen_bool(0.5)).collect();
    let mut i = 0;
    full.filter_arcs(|_, _| {
        i += 1;
        keep[i - 1]
    })
}

/// Valid certificates of every host kind used as mutation targets.
pub fn mutation_pool() -> Vec<DecompositionCertificate> {
    let reg = IngredientRegistry::builtin();
    vec![
        decompose_cxn(5, 3, 2).unwrap(),
        decompose_cxn(3, 5, 3).unwrap(),
        decompose_c4n(3, 2).unwrap(),
        decompose_xy(3, 5, 3, 7).unwrap(),
        appendix_c12_n(5).unwrap(),
        cvresult(CvCase::A, 3, 5, 1, 1, 3, 7).unwrap(),
        kirkman_small(9).unwrap().certificate,
        main_theorem(&reg, 15, 3, 3, &[ClassConfig::new(3, 5, 1, 1)], 10, 5).unwrap(),
        triangle_blowup(&reg, 3, 3, 3, 5).unwrap(),
    ]
}

fn other_type(t: &CycleType, n: u64) -> CycleType {
    // same vertex total, different shape
    let n = n as u32;
    let alt = [
        CycleType::uniform(n, 1),
        CycleType::from_lengths([3, n - 3]),
        CycleType::from_lengths([4, n - 4]),
    ];
    alt.into_iter()
        .find(|a| a != t && a.total_vertices() == n as u64)
        .unwrap()
}

/// Applies one random defect to a certificate file and names the defect
/// class the verifier must report.
pub fn mutate<R: Rng>(
    rng: &mut R,
    cert: &DecompositionCertificate,
) -> (CertificateFile, DefectClass) {
    let mut file = cert.to_file(false);
    let nf = file.factors.len();
    let fi = rng.gen_range(0..nf);
    let host = file.header.host;
    match rng.gen_range(0..6) {
        0 => {
            let arcs = file.factors[fi].arcs.as_mut().unwrap();
            let i = rng.gen_range(0..arcs.len());
            arcs.remove(i);
            (file, DefectClass::MissingArc)
        }
        1 if nf > 1 => {
            let mut fj = rng.gen_range(0..nf - 1);
            if fj >= fi {
                fj += 1;
            }
            let src = file.factors[fj].arcs.as_ref().unwrap();
            let a = src[rng.gen_range(0..src.len())];
            file.factors[fi].arcs.as_mut().unwrap().push(a);
            (file, DefectClass::DuplicateArc)
        }
        2 => {
            let f = &mut file.factors[fi];
            f.role = if f.role == "F1" {
                "F2".into()
            } else {
                format!("{}x", f.role)
            };
            (file, DefectClass::CensusMismatch)
        }
        3 => {
            let n = host.vertex_count();
            let f = &mut file.factors[fi];
            f.declared_type = other_type(&f.declared_type, n);
            (file, DefectClass::TypeMismatch)
        }
        4 => {
            // redirect an arc inside its own part: never a host arc for
            // partite hosts; for complete hosts use a loop instead
            let arcs = file.factors[fi].arcs.as_mut().unwrap();
            let i = rng.gen_range(0..arcs.len());
            let a = &mut arcs[i];
            if host.part_size > 1
                && host.kind != hwf_core::HostKind::Complete
                && host.kind != hwf_core::HostKind::Union
            {
                a[3] = a[1];
                a[2] = (a[0] + 1 + rng.gen_range(0..host.part_size - 1)) % host.part_size;
            } else {
                a[2] = a[0];
                a[3] = a[1];
            }
            (file, DefectClass::ForeignArc)
        }
        _ => {
            let arcs = file.factors[fi].arcs.as_mut().unwrap();
            let i = rng.gen_range(0..arcs.len());
            arcs[i][0] = host.part_size + rng.gen_range(0..5);
            (file, DefectClass::InvalidVertex)
        }
    }
}

pub fn arc_set(g: &EquipartiteDigraph) -> BTreeSet<(u32, u32)> {
    g.arcs().iter().copied().collect()
}

/// Relabels `G ⊗ H` as `H ⊗ G`: element `g·y + h` becomes `h·x + g`.
fn swapped(p: &EquipartiteDigraph, x: u32, y: u32) -> BTreeSet<(u32, u32)> {
    let ps = x * y;
    let map = |id: u32| {
        let (part, e) = (id / ps, id % ps);
        part * ps + (e % y) * x + e / y
    };
    p.arcs()
        .iter()
        .map(|&(a, b)| {
            let (a, b) = (map(a), map(b));
            if p.is_directed() || a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

fn random_equipartite(rng: &mut StdRng, x: u32, k: u32) -> EquipartiteDigraph {
    make_complete_equipartite(x, k).filter_arcs(|_, _| rng.gen_bool(0.5))
}

/// `G ⊗ H ≅ H ⊗ G` on random directed cyclic and undirected equipartite
/// graphs with parts of size `x`, `y`.
pub fn law_commutes(seed: u64, x: u32, y: u32, k: u32) -> bool {
    let mut rng = StdRng::seed_from_u64(seed);
    let g = random_cyclic_subgraph(&mut rng, x, k);
    let h = random_cyclic_subgraph(&mut rng, y, k);
    let directed = swapped(&partite_product(&g, &h).unwrap(), x, y)
        == arc_set(&partite_product(&h, &g).unwrap());
    let g = random_equipartite(&mut rng, x, k);
    let h = random_equipartite(&mut rng, y, k);
    let undirected = swapped(&partite_product(&g, &h).unwrap(), x, y)
        == arc_set(&partite_product(&h, &g).unwrap());
    directed && undirected
}

/// Parts of size one are a two-sided identity.
pub fn law_identity(seed: u64, x: u32, k: u32) -> bool {
    let mut rng = StdRng::seed_from_u64(seed);
    let g = random_cyclic_subgraph(&mut rng, x, k);
    let directed = partite_product(&g, &make_directed_cyclic(1, k)).unwrap() == g;
    let g = random_equipartite(&mut rng, x, k);
    let one = make_complete_equipartite(1, k);
    directed && partite_product(&g, &one).unwrap() == g && partite_product(&one, &g).unwrap() == g
}

/// `G ⊗ (H1 ∪ H2) = G ⊗ H1 ∪ G ⊗ H2` with disjoint right-hand sides for a
/// random edge-disjoint split of `H`.
pub fn law_distributes(seed: u64, x: u32, y: u32, k: u32) -> bool {
    let mut rng = StdRng::seed_from_u64(seed);
    let g = random_cyclic_subgraph(&mut rng, x, k);
    let h = random_cyclic_subgraph(&mut rng, y, k);
    let side: Vec<bool> = (0..h.arc_count()).map(|_| rng.gen_bool(0.5)).collect();
    let (mut i, mut j) = (0, 0);
    let h1 = h.filter_arcs(|_, _| {
        i += 1;
        side[i - 1]
    });
    let h2 = h.filter_arcs(|_, _| {
        j += 1;
        !side[j - 1]
    });
    let whole = arc_set(&partite_product(&g, &h).unwrap());
    let p1 = arc_set(&partite_product(&g, &h1).unwrap());
    let p2 = arc_set(&partite_product(&g, &h2).unwrap());
    p1.is_disjoint(&p2) && whole == p1.union(&p2).copied().collect()
}

/// Product of a random `ak`-cycle and `bk`-cycle walked against the closed
/// form; parts have `a + ex` and `b + ey` elements.
pub fn law_cycle_formula(seed: u64, k: u32, a: u32, b: u32, ex: u32, ey: u32) -> bool {
    let mut rng = StdRng::seed_from_u64(seed);
    let (x, y) = (a + ex, b + ey);
    let (n, m) = (a * k, b * k);
    let c = random_cycle(&mut rng, x, k, n);
    let c2 = random_cycle(&mut rng, y, k, m);
    product_of_cycles(&c, &c2).unwrap() == predicted_cycle_product(n, m, k, x, y)
}

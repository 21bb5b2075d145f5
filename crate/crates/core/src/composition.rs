//! Assembling large decompositions from small ones: scaling by `C→_(zw:n)`,
//! the `C_(v:n)` dispatcher, blowing `K_m` up to `K_(v:m)`, adding the
//! intra-part copies of `K_v`, RGDD blow-ups and the complete-graph drivers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::base::{cxn_admissible, decompose_cxn};
use crate::certificate::{
    DecompositionCertificate, HostKind, HostSpec, ROLE_R, ROLE_S, ROLE_UNIFORM,
};
use crate::error::{ConstructError, Result};
use crate::four_part::decompose_c4n;
use crate::graph::{CycleType, EquipartiteDigraph, TwoFactor};
use crate::ingredients::{
    op_feasible, rgdd_feasible, walecki_hamiltonian, CompleteGraphFactorization,
    IngredientRegistry, Rgdd,
};
use crate::multivar::{
    decompose_4x_2xn_n, decompose_4x_xn_2n, decompose_4xy_2xn_yn, decompose_xy,
    four_x_2xn_n_admissible, four_x_xn_2n_admissible, four_xy_admissible, xy_admissible,
};
use crate::product::partite_product;
use crate::quasigroup::{gregarious_factorization, order_supported};
use crate::verify::verify_certificate;

/// Default vertex cap for the complete-graph drivers in construct mode.
pub const DEFAULT_VERTEX_CAP: u64 = 1000;

fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// Product of the prime powers `p^a` that divide `x` and `y` with the same
/// exponent `a`.
pub fn sgcd(x: u64, y: u64) -> u64 {
    let (fx, fy) = (factorize(x), factorize(y));
    fx.iter()
        .filter(|(p, a)| fy.get(p) == Some(a))
        .map(|(p, a)| p.pow(*a))
        .product()
}

fn check_odd(name: &'static str, v: u32) -> Result<()> {
    if v.is_multiple_of(2) {
        Err(ConstructError::excluded(name, v, "must be odd"))
    } else {
        Ok(())
    }
}

fn check_order(w: u32) -> Result<()> {
    if w == 2 || w == 6 {
        return Err(ConstructError::excluded(
            "w",
            w,
            "no orthogonal quasigroups of order 2 or 6",
        ));
    }
    if !order_supported(w) {
        return Err(ConstructError::UnsupportedOrder(w));
    }
    Ok(())
}

fn product_factor(g: &EquipartiteDigraph, h: &EquipartiteDigraph) -> Result<TwoFactor> {
    Ok(TwoFactor::from_graph(partite_product(g, h)?)?)
}

/// `C→_(zw:n)` into `zw` `C→_{zn}`-factors: `H_z(i, φ_z(i)) ⊗ T_w(j)`.
pub fn scale_zw(z: u32, w: u32, n: u32) -> Result<DecompositionCertificate> {
    check_odd("z", z)?;
    check_odd("n", n)?;
    check_order(w)?;
    let zc = decompose_cxn(z, n, if z == 1 { 0 } else { z })?;
    let wc = gregarious_factorization(w, n)?;
    let mut cert = DecompositionCertificate::new(HostSpec::cyclic(z * w, n, true), "scale_zw")
        .with_param("z", z)
        .with_param("w", w)
        .with_param("n", n);
    for fz in &zc.factors {
        for fw in &wc.factors {
            let f = product_factor(&fz.graph, &fw.graph)?;
            cert.push(ROLE_UNIFORM, f.cycle_type, f.graph);
        }
    }
    Ok(cert.seal())
}

/// `C→_(4zw:n)` into `4zw` `C→_{2zn}`-factors: the factors of
/// [`scale_zw`] times the four `C→_{2n}`-factors of `C→_(4:n)`.
pub fn scale_zw_4(z: u32, w: u32, n: u32) -> Result<DecompositionCertificate> {
    let base = scale_zw(z, w, n)?;
    let four = decompose_c4n(n, 4)?;
    let mut cert =
        DecompositionCertificate::new(HostSpec::cyclic(4 * z * w, n, true), "scale_zw_4")
            .with_param("z", z)
            .with_param("w", w)
            .with_param("n", n);
    for a in &base.factors {
        for b in &four.factors {
            let f = product_factor(&a.graph, &b.graph)?;
            cert.push(ROLE_UNIFORM, f.cycle_type, f.graph);
        }
    }
    Ok(cert.seal())
}

/// Per-block (or per-class) split of a target count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPlan {
    pub cap: u32,
    pub parts: Vec<u32>,
}

impl SplitPlan {
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `cap − s_t` for every part.
    pub fn complement(&self) -> Vec<u32> {
        self.parts.iter().map(|&p| self.cap - p).collect()
    }
}

fn padded(mut head: Vec<u32>, count: usize) -> Option<Vec<u32>> {
    if head.len() > count {
        return None;
    }
    head.resize(count, 0);
    Some(head)
}

fn direct_split(count: usize, cap: u32, target: u32) -> Vec<Vec<u32>> {
    let (t, u) = ((target / cap) as usize, target % cap);
    let mut out = Vec::new();
    let mut plain = vec![cap; t];
    if u > 0 {
        plain.push(u);
    }
    out.extend(padded(plain, count));
    if u == 1 && t >= 1 && cap >= 3 {
        // borrow: one full block gives up two, the remainder becomes three
        let mut p = vec![cap; t - 1];
        p.extend([cap - 2, 3]);
        out.extend(padded(p, count));
    }
    out
}

/// Splits `target` into `count` parts in `0..=cap` accepted by `allowed`.
/// Full parts come first, then at most two mixed parts; when that shape
/// has a forbidden part an exhaustive table over part sums decides.
pub fn split_with(
    count: usize,
    cap: u32,
    target: u32,
    allowed: impl Fn(u32) -> bool,
) -> Option<SplitPlan> {
    let total = count as u32 * cap;
    if target > total || cap == 0 {
        return None;
    }
    let mut cands = direct_split(count, cap, target);
    for p in direct_split(count, cap, total - target) {
        cands.push(p.iter().map(|&v| cap - v).collect());
    }
    if let Some(parts) = cands.into_iter().find(|p| p.iter().all(|&v| allowed(v))) {
        return Some(SplitPlan { cap, parts });
    }
    let vals: Vec<u32> = (0..=cap).rev().filter(|&v| allowed(v)).collect();
    // reach[b][t]: b parts can sum to t
    let mut reach = vec![vec![false; target as usize + 1]; count + 1];
    reach[0][0] = true;
    for b in 1..=count {
        for t in 0..=target as usize {
            reach[b][t] = vals
                .iter()
                .any(|&v| v as usize <= t && reach[b - 1][t - v as usize]);
        }
    }
    if !reach[count][target as usize] {
        return None;
    }
    let mut parts = Vec::with_capacity(count);
    let mut rem = target as usize;
    for b in (1..=count).rev() {
        let v = *vals
            .iter()
            .find(|&&v| v as usize <= rem && reach[b - 1][rem - v as usize])
            .expect("reachable table has a witness");
        parts.push(v);
        rem -= v as usize;
    }
    Some(SplitPlan { cap, parts })
}

/// Per-class split with every part in `{0..cap} \ {1, cap−1}`.
pub fn greedy_split(count: usize, cap: u32, target: u32) -> Option<SplitPlan> {
    split_with(count, cap, target, |v| v != 1 && v + 1 != cap)
}

/// A base decomposition of `C→_(m:n)` into `C→_{m1·n}`- and
/// `C→_{m2·n}`-factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseDecomposition {
    /// `C→_(x:n)`: `xn` and `n`.
    Cxn { x: u32 },
    /// `C→_(xy:n)`: `xn` and `yn`.
    Xy { x: u32, y: u32 },
    /// `C→_(4x:n)`: `2xn` and `n`.
    FourX2xnN { x: u32 },
    /// `C→_(4x:n)`: `xn` and `2n`.
    FourXXn2n { x: u32 },
    /// `C→_(4xy:n)`: `2xn` and `yn`.
    FourXy { x: u32, y: u32 },
}

impl BaseDecomposition {
    pub fn order(&self) -> u32 {
        match *self {
            Self::Cxn { x } => x,
            Self::Xy { x, y } => x * y,
            Self::FourX2xnN { x } | Self::FourXXn2n { x } => 4 * x,
            Self::FourXy { x, y } => 4 * x * y,
        }
    }

    /// `(m1, m2)`.
    pub fn lengths(&self) -> (u32, u32) {
        match *self {
            Self::Cxn { x } => (x, 1),
            Self::Xy { x, y } => (x, y),
            Self::FourX2xnN { x } => (2 * x, 1),
            Self::FourXXn2n { x } => (x, 2),
            Self::FourXy { x, y } => (2 * x, y),
        }
    }

    pub fn admissible(&self, n: u32, s: u32) -> bool {
        match *self {
            Self::Cxn { x } => cxn_admissible(x, s),
            Self::Xy { x, y } => xy_admissible(x, y, s),
            Self::FourX2xnN { x } => four_x_2xn_n_admissible(x, s),
            Self::FourXXn2n { x } => four_x_xn_2n_admissible(x, n, s),
            Self::FourXy { x, y } => four_xy_admissible(x, y, s),
        }
    }

    pub fn build(&self, n: u32, s: u32) -> Result<DecompositionCertificate> {
        match *self {
            Self::Cxn { x } => decompose_cxn(x, n, s),
            Self::Xy { x, y } => decompose_xy(x, y, n, s),
            Self::FourX2xnN { x } => decompose_4x_2xn_n(x, n, s),
            Self::FourXXn2n { x } => decompose_4x_xn_2n(x, n, s),
            Self::FourXy { x, y } => decompose_4xy_2xn_yn(x, y, n, s),
        }
    }
}

/// `C→_(m·zw:n)` (or `C→_(4m·zw:n)` with `four`) into `s` `C→_{m1·zn}`-
/// factors and the rest `C→_{m2·zn}`-factors (doubled lengths with `four`).
/// Block `i` is the base decomposition with `s_i` F1-factors times the
/// scaling factor `Z_i`.
pub fn scale_decomposition(
    base: BaseDecomposition,
    z: u32,
    w: u32,
    n: u32,
    s: u32,
    four: bool,
) -> Result<DecompositionCertificate> {
    check_odd("z", z)?;
    let (m1, m2) = base.lengths();
    let zi = z as i64;
    if zi.gcd(&(m1 as i64)) != 1 || zi.gcd(&(m2 as i64)) != 1 {
        return Err(ConstructError::Hypothesis(format!(
            "gcd(m1, z) = gcd(m2, z) = 1 fails for m1={m1}, m2={m2}, z={z}"
        )));
    }
    if four && (m1 % 2 == 0 || m2 % 2 == 0) {
        return Err(ConstructError::Hypothesis(
            "m1 and m2 must be odd for the 4-fold form".into(),
        ));
    }
    let zc = if four {
        scale_zw_4(z, w, n)?
    } else {
        scale_zw(z, w, n)?
    };
    let m = base.order();
    let blocks = zc.factors.len();
    let total = m * blocks as u32;
    if s > total {
        return Err(ConstructError::excluded("s", s, format!("at most {total}")));
    }
    if s == 1 || s + 1 == total {
        return Err(ConstructError::excluded(
            "s",
            s,
            "s and its complement must differ from 1",
        ));
    }
    let plan = split_with(blocks, m, s, |v| base.admissible(n, v)).ok_or_else(|| {
        ConstructError::Infeasible(format!(
            "no split of s={s} over {blocks} blocks of size {m}"
        ))
    })?;
    let k = if four { 2 } else { 1 };
    let part = m * zc.host.part_size;
    let (len_s, len_r) = (k * m1 * z * n, k * m2 * z * n);
    let t_s = CycleType::uniform(len_s, part * n / len_s);
    let t_r = CycleType::uniform(len_r, part * n / len_r);
    let mut cache: BTreeMap<u32, DecompositionCertificate> = BTreeMap::new();
    let mut cert =
        DecompositionCertificate::new(HostSpec::cyclic(part, n, true), "scale_decomposition")
            .with_param("m", m)
            .with_param("z", z)
            .with_param("w", w)
            .with_param("n", n)
            .with_param("s", s)
            .with_param("four", four)
            .with_param("blocks", plan.parts.clone());
    for (i, &si) in plan.parts.iter().enumerate() {
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(si) {
            e.insert(base.build(n, si)?);
        }
        let b = &cache[&si];
        let zf = &zc.factors[i].graph;
        for f in &b.factors {
            let p = product_factor(&f.graph, zf)?;
            let expected = if f.role == ROLE_S { &t_s } else { &t_r };
            if &p.cycle_type != expected {
                return Err(ConstructError::Internal(format!(
                    "block product analyzed as {} but should be {}",
                    p.cycle_type, expected
                )));
            }
            cert.push(&f.role, p.cycle_type, p.graph);
        }
    }
    Ok(cert.seal())
}

/// The six shapes of `C_(v:n)` decompositions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CvCase {
    /// `C_(xyzw:n)`: `xzn` and `yzn`.
    A,
    /// `C_(4xzw:n)`: `2xzn` and `2zn`.
    B,
    /// `C_(4xzw:n)`: `2xzn` and `zn`.
    C,
    /// `C_(4xzw:n)`: `xzn` and `2zn`.
    D,
    /// `C_(4xyzw:n)`: `2xzn` and `yzn`.
    E,
    /// `C_(4xyzw:n)`: `2xzn` and `2yzn`.
    F,
}

impl FromStr for CvCase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            "c" => Ok(Self::C),
            "d" => Ok(Self::D),
            "e" => Ok(Self::E),
            "f" => Ok(Self::F),
            other => Err(format!("unknown case {other:?}; expected a-f")),
        }
    }
}

impl fmt::Display for CvCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Self::A => "a",
            Self::B => "b",
            Self::C => "c",
            Self::D => "d",
            Self::E => "e",
            Self::F => "f",
        };
        f.write_str(c)
    }
}

impl CvCase {
    fn base(&self, x: u32, y: u32) -> (BaseDecomposition, bool) {
        match self {
            Self::A => (BaseDecomposition::Xy { x, y }, false),
            Self::B => (BaseDecomposition::Cxn { x }, true),
            Self::C => (BaseDecomposition::FourX2xnN { x }, false),
            Self::D => (BaseDecomposition::FourXXn2n { x }, false),
            Self::E => (BaseDecomposition::FourXy { x, y }, false),
            Self::F => (BaseDecomposition::Xy { x, y }, true),
        }
    }

    pub fn uses_y(&self) -> bool {
        matches!(self, Self::A | Self::E | Self::F)
    }

    /// Part size of the host.
    pub fn order(&self, x: u32, y: u32, z: u32, w: u32) -> u32 {
        let y = if self.uses_y() { y } else { 1 };
        let k = if *self == Self::A { 1 } else { 4 };
        k * x * y * z * w
    }

    /// `(F1, F2)` cycle lengths.
    pub fn lengths(&self, x: u32, y: u32, z: u32, n: u32) -> (u32, u32) {
        let zn = z * n;
        match self {
            Self::A => (x * zn, y * zn),
            Self::B => (2 * x * zn, 2 * zn),
            Self::C => (2 * x * zn, zn),
            Self::D => (x * zn, 2 * zn),
            Self::E => (2 * x * zn, y * zn),
            Self::F => (2 * x * zn, 2 * y * zn),
        }
    }
}

/// Undirected `C_(v:n)` into `s` F1- and `v − s` F2-factors for one of the
/// six cases.
pub fn cvresult(
    case: CvCase,
    x: u32,
    y: u32,
    z: u32,
    w: u32,
    n: u32,
    s: u32,
) -> Result<DecompositionCertificate> {
    check_odd("x", x)?;
    if case.uses_y() {
        check_odd("y", y)?;
    }
    check_odd("z", z)?;
    check_odd("n", n)?;
    check_order(w)?;
    let y = if case.uses_y() { y } else { 1 };
    if (z as i64).gcd(&(x as i64)) != 1 || (z as i64).gcd(&(y as i64)) != 1 {
        return Err(ConstructError::Hypothesis(format!(
            "gcd(x,z) = gcd(y,z) = 1 fails for x={x}, y={y}, z={z}"
        )));
    }
    let (base, four) = case.base(x, y);
    let mut cert = scale_decomposition(base, z, w, n, s, four)?.undirected()?;
    cert.construction.lemma = "cvresult".into();
    cert.construction.parameters.clear();
    cert.set_param("case", case.to_string());
    for (k, v) in [("x", x), ("y", y), ("z", z), ("w", w), ("n", n), ("s", s)] {
        cert.set_param(k, v);
    }
    Ok(cert)
}

fn swap_roles(mut cert: DecompositionCertificate) -> DecompositionCertificate {
    for f in &mut cert.factors {
        f.role = if f.role == ROLE_S {
            ROLE_R.into()
        } else {
            ROLE_S.into()
        };
    }
    cert.seal()
}

/// One cycle class of the main construction: `C_(v:n)` into `C_{xzn}`-
/// and `C_{yzn}`-factors. At most one of `x, y, z` is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ClassConfig {
    pub x: u32,
    pub y: u32,
    pub z: u32,
    pub w: u32,
}

impl ClassConfig {
    pub fn new(x: u32, y: u32, z: u32, w: u32) -> Self {
        Self { x, y, z, w }
    }

    fn evens(&self) -> usize {
        [self.x, self.y, self.z]
            .iter()
            .filter(|&&a| a % 2 == 0)
            .count()
    }

    /// `xyzw`, doubled when one of `x, y, z` is even.
    pub fn v(&self) -> u32 {
        let p = self.x * self.y * self.z * self.w;
        if self.evens() == 1 {
            2 * p
        } else {
            p
        }
    }

    pub fn check(&self) -> Result<()> {
        let Self { x, y, z, w } = *self;
        if x == 0 || y == 0 || z == 0 || w == 0 {
            return Err(ConstructError::Hypothesis(
                "x, y, z, w must be positive".into(),
            ));
        }
        if self.evens() > 1 {
            return Err(ConstructError::Hypothesis(
                "2 divides at most one of x, y, z".into(),
            ));
        }
        for (name, a) in [("x", x), ("y", y), ("z", z)] {
            if a % 4 == 0 {
                return Err(ConstructError::Hypothesis(format!(
                    "4 does not divide {name}={a}"
                )));
            }
        }
        if (x as i64).gcd(&(z as i64)) != 1 || (y as i64).gcd(&(z as i64)) != 1 {
            return Err(ConstructError::Hypothesis(format!(
                "gcd(x,z) = gcd(y,z) = 1 fails for ({x},{y},{z})"
            )));
        }
        check_order(w)
    }

    /// `(xzn, yzn)`.
    pub fn lengths(&self, n: u32) -> (u32, u32) {
        (self.x * self.z * n, self.y * self.z * n)
    }

    /// The case and the odd parameters, with a flag for swapped roles.
    pub fn dispatch(&self) -> (CvCase, u32, u32, u32, bool) {
        let Self { x, y, z, .. } = *self;
        if x % 2 == 0 {
            let h = x / 2;
            if y == 1 {
                (CvCase::C, h, 1, z, false)
            } else if h == 1 {
                (CvCase::D, y, 1, z, true)
            } else {
                (CvCase::E, h, y, z, false)
            }
        } else if y % 2 == 0 {
            let h = y / 2;
            if h == 1 {
                (CvCase::D, x, 1, z, false)
            } else if x == 1 {
                (CvCase::C, h, 1, z, true)
            } else {
                (CvCase::E, h, x, z, true)
            }
        } else if z % 2 == 0 {
            if y == 1 {
                (CvCase::B, x, 1, z / 2, false)
            } else {
                (CvCase::F, x, y, z / 2, false)
            }
        } else {
            (CvCase::A, x, y, z, false)
        }
    }

    /// Undirected `C_(v:n)` with `s` `C_{xzn}`-factors (F1).
    pub fn decompose(&self, n: u32, s: u32) -> Result<DecompositionCertificate> {
        self.check()?;
        let v = self.v();
        if s > v {
            return Err(ConstructError::excluded("s", s, format!("at most v={v}")));
        }
        let (case, a, b, c, swapped) = self.dispatch();
        if swapped {
            Ok(swap_roles(cvresult(case, a, b, c, self.w, n, v - s)?))
        } else {
            cvresult(case, a, b, c, self.w, n, s)
        }
    }
}

/// Cycles of an undirected 2-regular graph as vertex sequences, each
/// starting at its smallest vertex.
pub fn undirected_cycles(g: &EquipartiteDigraph) -> Result<Vec<Vec<u32>>> {
    let n = g.vertex_count() as usize;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, b) in g.arcs() {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] || adj[start].is_empty() {
            continue;
        }
        if adj.iter().any(|a| !a.is_empty() && a.len() != 2) {
            return Err(ConstructError::Internal("factor is not 2-regular".into()));
        }
        let mut cyc = vec![start as u32];
        seen[start] = true;
        let (mut prev, mut cur) = (start as u32, adj[start][0].min(adj[start][1]));
        while cur as usize != start {
            seen[cur as usize] = true;
            cyc.push(cur);
            let nb = &adj[cur as usize];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        out.push(cyc);
    }
    Ok(out)
}

fn factors_by_role<'a>(
    cert: &'a DecompositionCertificate,
    role: &str,
) -> Vec<&'a crate::certificate::Factor> {
    cert.factors.iter().filter(|f| f.role == role).collect()
}

/// `K_(v:m)` from a factorization of `K_m` and, for every class `t` and
/// every cycle of that class, a decomposition of `C_(v:len)` into `s_t`
/// F1- and `v − s_t` F2-factors supplied by `decompose(cycle, len, s_t)`.
/// The `j`-th F1-factor of class `t` is the union of the `j`-th F1-factors
/// of its cycles.
pub fn kvm_from_cvn(
    v: u32,
    km: &CompleteGraphFactorization,
    plan: &SplitPlan,
    decompose: &mut dyn FnMut(usize, u32, u32) -> Result<DecompositionCertificate>,
) -> Result<DecompositionCertificate> {
    let m = km.v;
    let classes: Vec<&EquipartiteDigraph> = km.factors().collect();
    let mut cert = DecompositionCertificate::new(HostSpec::equipartite(v, m), "kvm_from_cvn")
        .with_param("v", v)
        .with_param("m", m)
        .with_param("split", plan.parts.clone());
    if v == 1 {
        let s = plan.total() as usize;
        for (i, f) in km.certificate.factors.iter().enumerate() {
            let role = if i < s { ROLE_S } else { ROLE_R };
            let g = EquipartiteDigraph::from_ids(1, m, false, f.graph.arcs().iter().copied())?;
            cert.push(role, f.declared_type.clone(), g);
        }
        return Ok(cert.seal());
    }
    if plan.parts.len() != classes.len() {
        return Err(ConstructError::Internal(format!(
            "split has {} parts for {} classes",
            plan.parts.len(),
            classes.len()
        )));
    }
    for (t, class) in classes.iter().enumerate() {
        let st = plan.parts[t];
        let cycles = undirected_cycles(class)?;
        let mut pieces = Vec::with_capacity(cycles.len());
        for (i, cyc) in cycles.iter().enumerate() {
            let len = cyc.len() as u32;
            let mut c = decompose(i, len, st)?;
            if c.host.directed {
                c = c.undirected()?;
            }
            if c.host.kind != HostKind::Cyclic || c.host.part_size != v || c.host.parts != len {
                return Err(ConstructError::Ingredient(format!(
                    "cycle decomposition has host {}, expected C_({v}:{len})",
                    c.host.describe()
                )));
            }
            if c.role_count(ROLE_S) != st as usize || c.role_count(ROLE_R) != (v - st) as usize {
                return Err(ConstructError::Ingredient(format!(
                    "cycle decomposition has census {}, expected {st} F1 and {} F2",
                    c.census_string(),
                    v - st
                )));
            }
            pieces.push((cyc.clone(), c));
        }
        for role in [ROLE_S, ROLE_R] {
            let per_cycle: Vec<Vec<&crate::certificate::Factor>> = pieces
                .iter()
                .map(|(_, c)| factors_by_role(c, role))
                .collect();
            let count = per_cycle.first().map_or(0, |p| p.len());
            for j in 0..count {
                let mut arcs = Vec::new();
                let mut ty = CycleType::new();
                for ((cyc, _), fs) in pieces.iter().zip(&per_cycle) {
                    let f = fs[j];
                    ty = ty.merged(&f.declared_type);
                    let map = |id: u32| cyc[(id / v) as usize] * v + id % v;
                    arcs.extend(f.graph.arcs().iter().map(|&(a, b)| (map(a), map(b))));
                }
                cert.push(role, ty, EquipartiteDigraph::from_ids(v, m, false, arcs)?);
            }
        }
    }
    Ok(cert.seal())
}

/// `K_(v:m)` into `s` F1- and `r` F2-factors: a `C_n`-factorization of
/// `K_m`, a per-class split of `s`, and `configs[i]` on the `i`-th cycle of
/// every class. A single config is used for every cycle.
pub fn main_theorem(
    registry: &IngredientRegistry,
    v: u32,
    m: u32,
    n: u32,
    configs: &[ClassConfig],
    s: u32,
    r: u32,
) -> Result<DecompositionCertificate> {
    check_odd("m", m)?;
    check_odd("n", n)?;
    if n < 3 || !m.is_multiple_of(n) {
        return Err(ConstructError::Hypothesis(format!(
            "n={n} must be at least 3 and divide m={m}"
        )));
    }
    let k = (m / n) as usize;
    let configs: Vec<ClassConfig> = if configs.len() == 1 {
        vec![configs[0]; k]
    } else {
        configs.to_vec()
    };
    if configs.len() != k {
        return Err(ConstructError::Hypothesis(format!(
            "expected m/n={k} configurations, got {}",
            configs.len()
        )));
    }
    for c in &configs {
        c.check()?;
        if c.v() != v {
            return Err(ConstructError::Hypothesis(format!(
                "configuration {c:?} gives v={}, not {v}",
                c.v()
            )));
        }
    }
    let classes = (m - 1) / 2;
    if s + r != v * classes {
        return Err(ConstructError::Hypothesis(format!(
            "s + r must equal v(m-1)/2 = {}",
            v * classes
        )));
    }
    if s == 1 || r == 1 {
        return Err(ConstructError::excluded(
            if s == 1 { "s" } else { "r" },
            1,
            "s and r must differ from 1",
        ));
    }
    let km = registry.complete_factorization(m, n)?;
    let plan = if v == 1 {
        SplitPlan {
            cap: 1,
            parts: Vec::new(),
        }
    } else {
        greedy_split(classes as usize, v, s).ok_or_else(|| {
            ConstructError::Infeasible(format!(
                "no per-class split of s={s} with parts in [0,{v}] minus {{1,{}}}",
                v - 1
            ))
        })?
    };
    let plan = if v == 1 {
        SplitPlan {
            cap: 1,
            parts: vec![1; s as usize],
        }
    } else {
        plan
    };
    let mut cache: BTreeMap<(usize, u32), DecompositionCertificate> = BTreeMap::new();
    let mut dec = |i: usize, len: u32, st: u32| -> Result<DecompositionCertificate> {
        if len != n {
            return Err(ConstructError::Ingredient(format!(
                "K_{m} factor has a {len}-cycle, expected {n}"
            )));
        }
        if let Some(c) = cache.get(&(i, st)) {
            return Ok(c.clone());
        }
        let c = configs[i].decompose(n, st)?;
        cache.insert((i, st), c.clone());
        Ok(c)
    };
    let mut cert = kvm_from_cvn(v, &km, &plan, &mut dec)?;
    cert.construction.lemma = "main_theorem".into();
    cert.set_param("n", n);
    cert.set_param("s", s);
    cert.set_param("r", r);
    cert.set_param(
        "configs",
        serde_json::to_value(&configs).expect("configs serialize"),
    );
    Ok(cert)
}

/// `m` disjoint copies of `K_v`; factor `j` of each role is the union of
/// factor `j` of that role in every copy.
pub fn union_of_copies(
    v: u32,
    copies: &[DecompositionCertificate],
) -> Result<DecompositionCertificate> {
    let m = copies.len() as u32;
    let mut cert = DecompositionCertificate::new(HostSpec::union(v, m), "union_of_copies")
        .with_param("v", v)
        .with_param("m", m);
    for c in copies {
        if c.host.kind != HostKind::Complete || c.host.vertex_count() != v as u64 {
            return Err(ConstructError::Ingredient(format!(
                "copy has host {}, expected K_{v}",
                c.host.describe()
            )));
        }
    }
    for role in [ROLE_S, ROLE_R] {
        let per: Vec<Vec<&crate::certificate::Factor>> =
            copies.iter().map(|c| factors_by_role(c, role)).collect();
        let count = per.first().map_or(0, |p| p.len());
        if per.iter().any(|p| p.len() != count) {
            return Err(ConstructError::Ingredient(format!(
                "copies disagree on the number of {role} factors"
            )));
        }
        for j in 0..count {
            let mut arcs = Vec::new();
            let mut ty = CycleType::new();
            for (copy, fs) in per.iter().enumerate() {
                ty = ty.merged(&fs[j].declared_type);
                let off = copy as u32 * v;
                arcs.extend(fs[j].graph.arcs().iter().map(|&(a, b)| (a + off, b + off)));
            }
            cert.push(role, ty, EquipartiteDigraph::from_ids(v, m, false, arcs)?);
        }
    }
    if copies.iter().any(|c| {
        c.factors
            .iter()
            .any(|f| f.role != ROLE_S && f.role != ROLE_R)
    }) {
        return Err(ConstructError::Ingredient(
            "copy factors must carry role F1 or F2".into(),
        ));
    }
    Ok(cert.seal())
}

fn role_type<'a>(
    certs: &[&'a DecompositionCertificate],
    role: &str,
) -> Result<Option<&'a CycleType>> {
    let mut found: Option<&CycleType> = None;
    for c in certs {
        for f in c.factors.iter().filter(|f| f.role == role) {
            match found {
                None => found = Some(&f.declared_type),
                Some(t) if t != &f.declared_type => {
                    return Err(ConstructError::Ingredient(format!(
                        "{role} factors disagree: {t} and {}",
                        f.declared_type
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(found)
}

/// `K_vm` from the intra-part graph `m·K_v` and the inter-part graph
/// `K_(v:m)`; every F1-factor (and every F2-factor) must have one type.
pub fn assemble_complete(
    inner: &DecompositionCertificate,
    outer: &DecompositionCertificate,
) -> Result<DecompositionCertificate> {
    let (v, m) = (inner.host.part_size, inner.host.parts);
    if inner.host.kind != HostKind::Union {
        return Err(ConstructError::Ingredient(format!(
            "inner host {} is not m K_v",
            inner.host.describe()
        )));
    }
    let outer_ok = (outer.host.kind == HostKind::Equipartite
        && outer.host.part_size == v
        && outer.host.parts == m)
        || (m == 1 && outer.factors.is_empty());
    if !outer_ok {
        return Err(ConstructError::Ingredient(format!(
            "outer host {} does not match K_({v}:{m})",
            outer.host.describe()
        )));
    }
    role_type(&[inner, outer], ROLE_S)?;
    role_type(&[inner, outer], ROLE_R)?;
    let host = HostSpec {
        kind: HostKind::Complete,
        part_size: v,
        parts: m,
        directed: false,
    };
    let mut cert = DecompositionCertificate::new(host, "assemble_complete")
        .with_param("v", v)
        .with_param("m", m);
    for f in inner.factors.iter().chain(&outer.factors) {
        let g = EquipartiteDigraph::from_ids(v, m, false, f.graph.arcs().iter().copied())?;
        cert.push(&f.role, f.declared_type.clone(), g);
    }
    Ok(cert.seal())
}

fn relabel_uniform(cert: &DecompositionCertificate, role: &str) -> DecompositionCertificate {
    let mut c = cert.clone();
    for f in &mut c.factors {
        f.role = role.into();
    }
    c.seal()
}

/// `C_len`-factorization of `K_v`: the registry first, then
/// `K_v = q·K_{v/q} ∪ K_(v/q:q)` with the inner copies found recursively.
pub fn uniform_complete(
    registry: &IngredientRegistry,
    v: u32,
    len: u32,
) -> Result<DecompositionCertificate> {
    if let Ok(f) = registry.complete_factorization(v, len) {
        return Ok(f.certificate);
    }
    if v % 2 == 1 && op_feasible(v, len) {
        for q in (3..v).step_by(2).filter(|q| v.is_multiple_of(*q)) {
            let vp = v / q;
            if !vp.is_multiple_of(len) {
                continue;
            }
            for n in [q, 3] {
                if q % n != 0 || !len.is_multiple_of(n) || !op_feasible(q, n) {
                    continue;
                }
                let c = len / n;
                if c.is_multiple_of(2) || !vp.is_multiple_of(c) {
                    continue;
                }
                let Ok(inner) = uniform_complete(registry, vp, len) else {
                    continue;
                };
                let config = ClassConfig::new(c, vp / c, 1, 1);
                let total = vp * (q - 1) / 2;
                let Ok(outer) = main_theorem(registry, vp, q, n, &[config], total, 0) else {
                    continue;
                };
                let inner = relabel_uniform(&inner, ROLE_S);
                let copies = vec![inner; q as usize];
                let whole = assemble_complete(&union_of_copies(vp, &copies)?, &outer)?;
                let mut out = relabel_uniform(&whole, ROLE_UNIFORM);
                out.construction.lemma = "uniform_complete".into();
                out.set_param("len", len);
                return Ok(out);
            }
        }
    }
    Err(ConstructError::Ingredient(format!(
        "no C_{len}-factorization of K_{v} available"
    )))
}

/// `K_hum` from a 3-RGDD of type `h^u`: each block of parallel class `p`
/// becomes a copy of `K_(m:3)` decomposed by `class_certs[p]`, and each
/// group becomes a copy of `K_hm` decomposed by `group_cert`. Point `a`,
/// copy `g` is vertex `a·m + g`.
pub fn rgdd_blowup(
    design: &Rgdd,
    m: u32,
    class_certs: &[DecompositionCertificate],
    group_cert: &DecompositionCertificate,
) -> Result<DecompositionCertificate> {
    if design.lambda != 1 {
        return Err(ConstructError::Ingredient(
            "blow-up needs a design with lambda = 1".into(),
        ));
    }
    let report = crate::verify::check_rgdd(design);
    if !report.passed() {
        return Err(ConstructError::Ingredient(format!(
            "RGDD axioms violated: {report:?}"
        )));
    }
    let pcount = design.class_count();
    if class_certs.len() != pcount && class_certs.len() != 1 {
        return Err(ConstructError::Ingredient(format!(
            "{} class decompositions for {pcount} classes",
            class_certs.len()
        )));
    }
    for c in class_certs {
        let shape_ok = c.host.part_size == m
            && c.host.parts == 3
            && (c.host.kind == HostKind::Equipartite
                || (c.host.kind == HostKind::Cyclic && !c.host.directed));
        if !shape_ok {
            return Err(ConstructError::Ingredient(format!(
                "class decomposition host {} is not K_({m}:3)",
                c.host.describe()
            )));
        }
    }
    let hm = design.h * m;
    if group_cert.host.kind != HostKind::Complete || group_cert.host.vertex_count() != hm as u64 {
        return Err(ConstructError::Ingredient(format!(
            "group decomposition host {} is not K_{hm}",
            group_cert.host.describe()
        )));
    }
    let points = design.h * design.u;
    let host = HostSpec {
        kind: HostKind::Complete,
        part_size: m,
        parts: points,
        directed: false,
    };
    let mut cert = DecompositionCertificate::new(host, "rgdd_blowup")
        .with_param("h", design.h)
        .with_param("u", design.u)
        .with_param("m", m);
    for (p, class) in design.classes.iter().enumerate() {
        let cc = &class_certs[if class_certs.len() == 1 { 0 } else { p }];
        for f in &cc.factors {
            let mut arcs = Vec::new();
            let mut ty = CycleType::new();
            for block in class {
                ty = ty.merged(&f.declared_type);
                let map = |id: u32| block[(id / m) as usize] * m + id % m;
                arcs.extend(f.graph.arcs().iter().map(|&(a, b)| (map(a), map(b))));
            }
            cert.push(
                &f.role,
                ty,
                EquipartiteDigraph::from_ids(m, points, false, arcs)?,
            );
        }
    }
    for f in &group_cert.factors {
        let mut arcs = Vec::new();
        let mut ty = CycleType::new();
        for group in &design.groups {
            ty = ty.merged(&f.declared_type);
            let map = |q: u32| group[(q / m) as usize] * m + q % m;
            arcs.extend(f.graph.arcs().iter().map(|&(a, b)| (map(a), map(b))));
        }
        cert.push(
            &f.role,
            ty,
            EquipartiteDigraph::from_ids(m, points, false, arcs)?,
        );
    }
    Ok(cert.seal())
}

/// Options for `K_3m` in [`triangle_blowup`]: number of triangle factors
/// and how to build them.
/// Lazily built `K_h`-block factorization keyed by its triangle-factor count.
type GroupOption<'a> = (u32, Box<dyn Fn() -> Result<DecompositionCertificate> + 'a>);

fn group_options(registry: &IngredientRegistry, h: u32, m: u32) -> Vec<GroupOption<'_>> {
    let hm = h * m;
    let total = (hm - 1) / 2;
    let mut out: Vec<GroupOption<'_>> = Vec::new();
    if hm == 1 {
        out.push((
            0,
            Box::new(|| {
                Ok(DecompositionCertificate::new(
                    HostSpec::complete(1),
                    "empty",
                ))
            }),
        ));
        return out;
    }
    if op_feasible(hm, 3) {
        out.push((
            total,
            Box::new(move || {
                Ok(relabel_uniform(
                    &registry.complete_factorization(hm, 3)?.certificate,
                    ROLE_S,
                ))
            }),
        ));
    }
    if op_feasible(hm, 3 * m) {
        out.push((
            0,
            Box::new(move || {
                Ok(relabel_uniform(
                    &uniform_complete(registry, hm, 3 * m)?,
                    ROLE_R,
                ))
            }),
        ));
    }
    if h == 3 && m >= 3 {
        // K_3m = m·K_3 (one triangle factor) plus K_(3:m) in Hamiltonian factors
        out.push((
            1,
            Box::new(move || {
                let tri = DecompositionCertificate::new(HostSpec::complete(3), "triangle");
                let mut tri = tri;
                tri.push(
                    ROLE_S,
                    CycleType::uniform(3, 1),
                    EquipartiteDigraph::from_ids(3, 1, false, [(0, 1), (1, 2), (0, 2)])?,
                );
                let inner = union_of_copies(3, &vec![tri.seal(); m as usize])?;
                let k = walecki_hamiltonian(m)?;
                let classes = (m - 1) / 2;
                let plan = SplitPlan {
                    cap: 3,
                    parts: vec![0; classes as usize],
                };
                let mut dec = |_i: usize, len: u32, st: u32| {
                    decompose_cxn(3, len, st).and_then(|c| Ok(c.undirected()?))
                };
                let outer = kvm_from_cvn(3, &k, &plan, &mut dec)?;
                assemble_complete(&inner, &outer)
            }),
        ));
    }
    out
}

/// `K_hum` into `s` triangle factors (F1) and `r` `C_3m`-factors (F2) by
/// blowing up a 3-RGDD of type `h^u`. Each class uses `C_(m:3)` into
/// `m − c` Hamiltonian and `c` triangle factors, `c ∈ {0..m} \ {m−1}`.
pub fn triangle_blowup(
    registry: &IngredientRegistry,
    h: u32,
    u: u32,
    m: u32,
    s: u32,
) -> Result<DecompositionCertificate> {
    check_odd("m", m)?;
    if !rgdd_feasible(h, u, 1) {
        return Err(ConstructError::Hypothesis(format!(
            "no 3-RGDD of type {h}^{u} exists"
        )));
    }
    let design = registry.rgdd(h, u)?;
    let v = h * u * m;
    check_odd("hum", v)?;
    let total = (v - 1) / 2;
    if s > total || s == 1 || s + 1 == total {
        return Err(ConstructError::excluded(
            "s",
            s,
            format!("s and {total}-s must differ from 1"),
        ));
    }
    let pcount = design.class_count();
    let class_ok = |c: u32| c <= m && cxn_admissible(m, m - c);
    for (sb, build) in group_options(registry, h, m) {
        if sb > s {
            continue;
        }
        let Some(plan) = split_with(pcount, m, s - sb, class_ok) else {
            continue;
        };
        let Ok(group) = build() else { continue };
        let mut cache: BTreeMap<u32, DecompositionCertificate> = BTreeMap::new();
        let mut class_certs = Vec::with_capacity(pcount);
        for &c in &plan.parts {
            if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(c) {
                e.insert(swap_roles(decompose_cxn(m, 3, m - c)?.undirected()?));
            }
            class_certs.push(cache[&c].clone());
        }
        let mut cert = rgdd_blowup(&design, m, &class_certs, &group)?;
        cert.set_param("s", s);
        cert.set_param("class_triangles", plan.parts.clone());
        cert.set_param("group_triangles", sb);
        return Ok(cert);
    }
    Err(ConstructError::Infeasible(format!(
        "no class split reaches s={s} on K_{v}"
    )))
}

/// How a driver should run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DriverMode {
    /// Evaluate the hypotheses only.
    Feasibility,
    /// Build and verify, refusing hosts above `cap` vertices.
    Construct { cap: u64 },
}

/// Named hypotheses of a driver with their truth values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub driver: &'static str,
    pub checks: Vec<(String, bool)>,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    fn new(driver: &'static str) -> Self {
        Self {
            driver,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    /// First failed hypothesis.
    pub fn failed(&self) -> Option<&str> {
        self.checks
            .iter()
            .find(|(_, ok)| !ok)
            .map(|(n, _)| n.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.driver);
        for (name, ok) in &self.checks {
            out.push_str(&format!(
                "  [{}] {name}\n",
                if *ok { "ok" } else { "FAILED" }
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(if self.passed() {
            "feasible\n"
        } else {
            "infeasible\n"
        });
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DriverOutcome {
    Feasible(HypothesisReport),
    Infeasible(HypothesisReport),
    Constructed(HypothesisReport, Box<DecompositionCertificate>),
}

impl DriverOutcome {
    pub fn report(&self) -> &HypothesisReport {
        match self {
            Self::Feasible(r) | Self::Infeasible(r) | Self::Constructed(r, _) => r,
        }
    }

    pub fn certificate(&self) -> Option<&DecompositionCertificate> {
        match self {
            Self::Constructed(_, c) => Some(c),
            _ => None,
        }
    }
}

fn finish(
    report: HypothesisReport,
    mode: DriverMode,
    vertices: u64,
    build: impl FnOnce() -> Result<DecompositionCertificate>,
) -> Result<DriverOutcome> {
    if !report.passed() {
        return Ok(DriverOutcome::Infeasible(report));
    }
    match mode {
        DriverMode::Feasibility => Ok(DriverOutcome::Feasible(report)),
        DriverMode::Construct { cap } => {
            if vertices > cap {
                return Err(ConstructError::OverCap { vertices, cap });
            }
            if vertices.is_multiple_of(2) {
                return Err(ConstructError::Hypothesis(format!(
                    "construct mode needs an odd number of vertices; K_{vertices} has odd degree"
                )));
            }
            let cert = build()?;
            let v = verify_certificate(&cert);
            if !v.passed() {
                return Err(ConstructError::Internal(format!(
                    "driver output fails verification: {:?}",
                    v.classes()
                )));
            }
            Ok(DriverOutcome::Constructed(report, Box::new(cert)))
        }
    }
}

fn divides(a: u64, b: u64) -> bool {
    a != 0 && b.is_multiple_of(a)
}

/// Candidate `(s_alpha, r_alpha)` pairs, one of them zero, leaving
/// `s_beta, r_beta ≠ 1`; the larger side is tried first.
fn alpha_options(s: u32, r: u32, whole: u32) -> Vec<(u32, u32)> {
    let opts = if s >= r {
        [(whole, 0), (0, whole)]
    } else {
        [(0, whole), (whole, 0)]
    };
    opts.into_iter()
        .filter(|&(sa, ra)| sa <= s && ra <= r && s - sa != 1 && r - ra != 1)
        .collect()
}

fn first_ok<T>(opts: Vec<(u32, u32)>, mut f: impl FnMut(u32, u32) -> Result<T>) -> Result<T> {
    let mut last = ConstructError::Infeasible("no split of (s, r) between the two parts".into());
    for (sa, ra) in opts {
        match f(sa, ra) {
            Ok(t) => return Ok(t),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// `K_3n` into `s` `C_3x`- and `r` `C_3y`-factors from a 3-RGDD of type
/// `h^u` blown up by `m = xyw / sgcd(x, y)`.
#[allow(clippy::too_many_arguments)]
pub fn c3n_driver(
    registry: &IngredientRegistry,
    x: u32,
    y: u32,
    n: u32,
    h: u32,
    u: u32,
    w: u32,
    s: u32,
    mode: DriverMode,
) -> Result<DriverOutcome> {
    let z = sgcd(x as u64, y as u64);
    let (x64, y64, n64) = (x as u64, y as u64, n as u64);
    let mut rep = HypothesisReport::new("c3n_driver");
    rep.check("xy/sgcd(x,y) divides n", divides(x64 * y64 / z, n64));
    rep.check(
        "4 does not divide x nor y",
        !x.is_multiple_of(4) && !y.is_multiple_of(4),
    );
    rep.check(
        "4 divides n if 2 divides xy",
        (x64 * y64) % 2 == 1 || n.is_multiple_of(4),
    );
    rep.check(
        "3n = h*u*x*y*w/sgcd(x,y)",
        3 * n64 * z == h as u64 * u as u64 * x64 * y64 * w as u64,
    );
    rep.check("h = 0 mod 3", h.is_multiple_of(3));
    rep.check("u >= 3", u >= 3);
    rep.check(
        "h(u-1) even",
        (h as u64 * (u as u64).saturating_sub(1)).is_multiple_of(2),
    );
    rep.check(
        "(h,u) not in {(2,6),(6,3)}",
        (h, u) != (2, 6) && (h, u) != (6, 3),
    );
    let total = (3 * n64).saturating_sub(1) / 2;
    rep.check(
        "s, r != 1 with s + r = floor((3n-1)/2)",
        s as u64 <= total && s != 1 && s as u64 + 1 != total,
    );
    let vertices = 3 * n64;
    finish(rep, mode, vertices, || {
        let z = z as u32;
        let m = x * y * w / z;
        let (x1, y1) = (x / z, y / z);
        let design = registry.rgdd(h, u)?;
        let total = (3 * n - 1) / 2;
        let r = total - s;
        let block_total = (h * m - 1) / 2;
        let pcount = design.class_count();
        let opts: Vec<_> = alpha_options(s, r, block_total)
            .into_iter()
            .filter(|&(sa, _)| greedy_split(pcount, m, s - sa).is_some())
            .collect();
        first_ok(opts, |sa, _| {
            let group = if sa > 0 {
                relabel_uniform(&uniform_complete(registry, h * m, 3 * x)?, ROLE_S)
            } else {
                relabel_uniform(&uniform_complete(registry, h * m, 3 * y)?, ROLE_R)
            };
            let plan = greedy_split(pcount, m, s - sa).expect("filtered above");
            let config = ClassConfig::new(x1, y1, z, w);
            let mut cache: BTreeMap<u32, DecompositionCertificate> = BTreeMap::new();
            let mut class_certs = Vec::new();
            for &si in &plan.parts {
                if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(si) {
                    e.insert(main_theorem(registry, m, 3, 3, &[config], si, m - si)?);
                }
                class_certs.push(cache[&si].clone());
            }
            let mut cert = rgdd_blowup(&design, m, &class_certs, &group)?;
            cert.construction.lemma = "c3n_driver".into();
            cert.set_param("s", s);
            Ok(cert)
        })
    })
}

/// `K_m` into `s` `C_x`- and `r` `C_y`-factors with `z = sgcd(x, y)` and
/// `w = gcd(x, y) / z ≥ 2`.
pub fn km_uniform_driver(
    registry: &IngredientRegistry,
    m: u32,
    x: u32,
    y: u32,
    s: u32,
    mode: DriverMode,
) -> Result<DriverOutcome> {
    let (m64, x64, y64) = (m as u64, x as u64, y as u64);
    let z = sgcd(x64, y64);
    let w = x64.gcd(&y64) / z;
    let mut rep = HypothesisReport::new("km_uniform_driver");
    rep.notes
        .push(format!("z = sgcd(x,y) = {z}, w = gcd(x,y)/z = {w}"));
    rep.check("w = gcd(x,y)/sgcd(x,y) >= 2", w >= 2);
    rep.check("xy/z divides m", divides(x64 * y64 / z, m64));
    rep.check(
        "4 does not divide x nor y",
        !x.is_multiple_of(4) && !y.is_multiple_of(4),
    );
    rep.check(
        "neither x nor y is 3 if m/w in {6,12}",
        !(divides(w, m64) && [6, 12].contains(&(m64 / w)) && (x == 3 || y == 3)),
    );
    let total = m64.saturating_sub(1) / 2;
    rep.check(
        "s, r != 1 with s + r = floor((m-1)/2)",
        s as u64 <= total && s != 1 && s as u64 + 1 != total,
    );
    finish(rep, mode, m64, || {
        let (z, w) = (z as u32, w as u32);
        let k = m * z / (x * y);
        let (xp, yp) = (x / (z * w), y / (z * w));
        let mp = m / w;
        let total = (m - 1) / 2;
        let r = total - s;
        first_ok(alpha_options(s, r, (mp - 1) / 2), |sa, ra| {
            let outer = main_theorem(
                registry,
                mp,
                w,
                w,
                &[ClassConfig::new(xp, yp, z, w * k)],
                s - sa,
                r - ra,
            )?;
            let inner_one = if sa > 0 {
                relabel_uniform(&uniform_complete(registry, mp, x)?, ROLE_S)
            } else {
                relabel_uniform(&uniform_complete(registry, mp, y)?, ROLE_R)
            };
            let inner = union_of_copies(mp, &vec![inner_one; w as usize])?;
            let mut cert = assemble_complete(&inner, &outer)?;
            cert.construction.lemma = "km_uniform_driver".into();
            cert.set_param("x", x);
            cert.set_param("y", y);
            cert.set_param("s", s);
            Ok(cert)
        })
    })
}

/// `K_vm` into `s` `[x_1^{vn/x_1}, …]`- and `r` `[y_1^{vn/y_1}, …]`-factors.
#[allow(clippy::too_many_arguments)]
pub fn kvm_nonuniform_driver(
    registry: &IngredientRegistry,
    v: u32,
    m: u32,
    n: u32,
    xs: &[u32],
    ys: &[u32],
    s: u32,
    mode: DriverMode,
) -> Result<DriverOutcome> {
    let (v64, n64) = (v as u64, n as u64);
    let mut rep = HypothesisReport::new("kvm_nonuniform_driver");
    rep.check("m >= 3 odd", m >= 3 && m % 2 == 1);
    let k = m.checked_div(n).unwrap_or(0);
    rep.check("n divides m", divides(n64, m as u64));
    rep.check(
        "k = m/n cycle lengths given for x and y",
        xs.len() == k as usize && ys.len() == k as usize,
    );
    rep.check(
        "n divides every x_i and y_i",
        xs.iter().chain(ys).all(|&a| divides(n64, a as u64)),
    );
    let zs: Vec<u64> = xs
        .iter()
        .zip(ys)
        .map(|(&a, &b)| sgcd(a as u64, b as u64))
        .collect();
    rep.check(
        "x_i y_i/(z_i n) divides v",
        xs.iter().zip(ys).zip(&zs).all(|((&a, &b), &z)| {
            let num = a as u64 * b as u64;
            divides(z * n64, num) && divides(num / (z * n64), v64)
        }),
    );
    rep.check("x_i divides v", xs.iter().all(|&a| divides(a as u64, v64)));
    rep.check(
        "4 does not divide any x_i, y_i",
        xs.iter().chain(ys).all(|&a| a % 4 != 0),
    );
    rep.check(
        "3 not among x_i, y_i if k in {6,12}",
        !([6, 12].contains(&k) && xs.iter().chain(ys).any(|&a| a == 3)),
    );
    let total = (v64 * m as u64).saturating_sub(1) / 2;
    rep.check(
        "s, r != 1 with s + r = floor((vm-1)/2)",
        s as u64 <= total && s != 1 && s as u64 + 1 != total,
    );
    finish(rep, mode, v64 * m as u64, || {
        let mut configs = Vec::new();
        for ((&a, &b), &z) in xs.iter().zip(ys).zip(&zs) {
            let z = z as u32;
            if a % (z * n) != 0 || b % (z * n) != 0 {
                return Err(ConstructError::Hypothesis(format!(
                    "z_i n = {} must divide x_i={a} and y_i={b}",
                    z * n
                )));
            }
            let ki = v * z * n / (a * b);
            configs.push(ClassConfig::new(a / (z * n), b / (z * n), z, n * ki));
        }
        let total = (v * m - 1) / 2;
        let r = total - s;
        first_ok(alpha_options(s, r, (v - 1) / 2), |sa, ra| {
            let outer = main_theorem(registry, v, m, n, &configs, s - sa, r - ra)?;
            let mut copies = Vec::with_capacity(m as usize);
            for c in 0..m {
                let i = (c / n) as usize;
                let one = if sa > 0 {
                    relabel_uniform(&uniform_complete(registry, v, xs[i])?, ROLE_S)
                } else {
                    relabel_uniform(&uniform_complete(registry, v, ys[i])?, ROLE_R)
                };
                copies.push(one);
            }
            let inner = union_of_copies(v, &copies)?;
            let mut cert = assemble_complete(&inner, &outer)?;
            cert.construction.lemma = "kvm_nonuniform_driver".into();
            cert.set_param("s", s);
            Ok(cert)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_certificate;

    fn assert_verified(c: &DecompositionCertificate) {
        let r = verify_certificate(c);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn sgcd_examples() {
        let x = 8 * 9 * 25 * 49;
        let y = 9 * 125 * 49 * 14641;
        assert_eq!(sgcd(x, y), 9 * 49);
        assert_eq!(sgcd(45, 45), 45);
        assert_eq!(sgcd(12, 18), 1);
        assert_eq!(sgcd(15, 45), 5);
    }

    #[test]
    fn scale_examples() {
        let c = scale_zw(3, 4, 5).unwrap();
        assert_eq!(c.count_of(ROLE_UNIFORM, &CycleType::uniform(15, 4)), 12);
        assert_verified(&c);
        let c = scale_zw(5, 3, 3).unwrap();
        assert_eq!(c.count_of(ROLE_UNIFORM, &CycleType::uniform(15, 3)), 15);
        let c = scale_zw(3, 1, 5).unwrap();
        let direct = decompose_cxn(3, 5, 3).unwrap();
        let mut a: Vec<_> = c.factors.iter().map(|f| f.graph.clone()).collect();
        let mut b: Vec<_> = direct.factors.iter().map(|f| f.graph.clone()).collect();
        a.sort_by(|p, q| p.arcs().cmp(q.arcs()));
        b.sort_by(|p, q| p.arcs().cmp(q.arcs()));
        assert_eq!(a, b);
        let c = scale_zw_4(1, 1, 3).unwrap();
        assert_eq!(c.count_of(ROLE_UNIFORM, &CycleType::uniform(6, 2)), 4);
        assert!(matches!(
            scale_zw(3, 6, 3),
            Err(ConstructError::Excluded { .. })
        ));
    }

    #[test]
    fn splits() {
        assert_eq!(greedy_split(3, 15, 31).unwrap().parts, vec![15, 13, 3]);
        assert_eq!(greedy_split(4, 15, 0).unwrap().parts, vec![0; 4]);
        let p = greedy_split(4, 15, 44).unwrap();
        assert_eq!(p.total(), 44);
        assert!(p.parts.iter().all(|&v| v != 1 && v != 14));
        // v = 4 leaves {0, 2, 4}: odd targets are out of reach
        assert!(greedy_split(3, 4, 5).is_none());
        assert_eq!(greedy_split(3, 4, 6).unwrap().total(), 6);
        // m = 3 blocks: the borrow shape has a 1 and needs the table
        let p = split_with(3, 3, 4, |v| cxn_admissible(3, v)).unwrap();
        assert_eq!(p.total(), 4);
    }

    #[test]
    fn scale_decomposition_u1() {
        let c =
            scale_decomposition(BaseDecomposition::Xy { x: 3, y: 5 }, 1, 4, 3, 31, false).unwrap();
        assert_eq!(
            c.construction.parameters["blocks"],
            serde_json::json!([15, 13, 3, 0])
        );
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(9, 20)), 31);
        assert_verified(&c);
        let c =
            scale_decomposition(BaseDecomposition::FourX2xnN { x: 3 }, 5, 1, 5, 24, false).unwrap();
        assert_eq!(
            c.construction.parameters["blocks"],
            serde_json::json!([12, 12, 0, 0, 0])
        );
        assert_verified(&c);
    }

    #[test]
    fn cvresult_examples() {
        let c = cvresult(CvCase::A, 3, 5, 1, 1, 3, 7).unwrap();
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(9, 5)), 7);
        assert_eq!(c.count_of(ROLE_R, &CycleType::uniform(15, 3)), 8);
        assert!(!c.host.directed);
        assert_verified(&c);
        let c = cvresult(CvCase::C, 3, 1, 1, 1, 5, 5).unwrap();
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(30, 2)), 5);
        assert_eq!(c.count_of(ROLE_R, &CycleType::uniform(5, 12)), 7);
        assert_verified(&c);
    }

    #[test]
    fn dispatch_shapes() {
        assert_eq!(
            ClassConfig::new(3, 5, 1, 1).dispatch(),
            (CvCase::A, 3, 5, 1, false)
        );
        assert_eq!(
            ClassConfig::new(6, 1, 1, 1).dispatch(),
            (CvCase::C, 3, 1, 1, false)
        );
        assert_eq!(
            ClassConfig::new(3, 2, 1, 1).dispatch(),
            (CvCase::D, 3, 1, 1, false)
        );
        assert_eq!(
            ClassConfig::new(6, 5, 1, 1).dispatch(),
            (CvCase::E, 3, 5, 1, false)
        );
        assert_eq!(
            ClassConfig::new(3, 1, 2, 1).dispatch(),
            (CvCase::B, 3, 1, 1, false)
        );
        assert_eq!(ClassConfig::new(3, 5, 2, 1).v(), 60);
        for (cfg, n, s) in [
            (ClassConfig::new(3, 2, 1, 1), 3, 5),
            (ClassConfig::new(2, 3, 1, 1), 3, 5),
            (ClassConfig::new(1, 6, 1, 1), 3, 4),
        ] {
            let c = cfg.decompose(n, s).unwrap();
            let (l1, l2) = cfg.lengths(n);
            let v = cfg.v();
            assert_eq!(
                c.count_of(ROLE_S, &CycleType::uniform(l1, v * n / l1)),
                s as usize,
                "{cfg:?}"
            );
            assert_eq!(
                c.count_of(ROLE_R, &CycleType::uniform(l2, v * n / l2)),
                (v - s) as usize,
                "{cfg:?}"
            );
            assert_verified(&c);
        }
    }

    #[test]
    fn main_theorem_small() {
        let reg = IngredientRegistry::builtin();
        let c = main_theorem(&reg, 15, 3, 3, &[ClassConfig::new(3, 5, 1, 1)], 10, 5).unwrap();
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(9, 5)), 10);
        assert_eq!(c.count_of(ROLE_R, &CycleType::uniform(15, 3)), 5);
        assert_verified(&c);
        assert!(main_theorem(&reg, 15, 3, 3, &[ClassConfig::new(3, 5, 1, 1)], 14, 1).is_err());
        assert!(main_theorem(&reg, 12, 3, 3, &[ClassConfig::new(3, 2, 1, 2)], 6, 6).is_err());
    }

    #[test]
    fn assemble_uniform() {
        let reg = IngredientRegistry::builtin();
        let cfg = ClassConfig::new(3, 5, 1, 1);
        let outer = main_theorem(&reg, 15, 3, 3, &[cfg], 9, 6).unwrap();
        let k15 = relabel_uniform(&walecki_hamiltonian(15).unwrap().certificate, ROLE_R);
        let inner = union_of_copies(15, &vec![k15; 3]).unwrap();
        // F2 of K_(15:3) is [15^3] and so is three copies of a Hamiltonian K_15 factor
        let c = assemble_complete(&inner, &outer).unwrap();
        assert_eq!(c.role_count(ROLE_S), 9);
        assert_eq!(c.role_count(ROLE_R), 13);
        assert_verified(&c);
        let k15 = relabel_uniform(&walecki_hamiltonian(15).unwrap().certificate, ROLE_S);
        let inner = union_of_copies(15, &vec![k15; 3]).unwrap();
        assert!(assemble_complete(&inner, &outer).is_err());
    }

    #[test]
    fn uniform_complete_recursion() {
        let reg = IngredientRegistry::builtin();
        let c = uniform_complete(&reg, 45, 15).unwrap();
        assert_eq!(c.factors.len(), 22);
        assert!(c
            .factors
            .iter()
            .all(|f| f.declared_type == CycleType::uniform(15, 3)));
        assert_verified(&c);
    }

    #[test]
    fn blowups() {
        let reg = IngredientRegistry::builtin();
        for s in [0, 2, 5, 8, 11, 13] {
            let c = triangle_blowup(&reg, 3, 3, 3, s).unwrap();
            assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(3, 9)), s as usize);
            assert_eq!(c.role_count(ROLE_R), 13 - s as usize);
            assert_verified(&c);
        }
        let kts = triangle_blowup(&reg, 1, 9, 1, 4).unwrap();
        assert_eq!(kts.factors.len(), 4);
        assert_verified(&kts);
    }

    #[test]
    fn drivers() {
        let reg = IngredientRegistry::builtin();
        let out = km_uniform_driver(&reg, 135, 15, 45, 30, DriverMode::Feasibility).unwrap();
        assert!(matches!(out, DriverOutcome::Feasible(_)));
        let out = km_uniform_driver(&reg, 135, 4, 45, 30, DriverMode::Feasibility).unwrap();
        assert_eq!(out.report().failed(), Some("w = gcd(x,y)/sgcd(x,y) >= 2"));
        let out = c3n_driver(&reg, 3, 9, 81, 3, 3, 1, 10, DriverMode::Feasibility).unwrap();
        assert!(
            matches!(out, DriverOutcome::Feasible(_)),
            "{}",
            out.report().to_text()
        );
        let out = c3n_driver(
            &reg,
            1,
            3,
            9,
            3,
            3,
            1,
            4,
            DriverMode::Construct {
                cap: DEFAULT_VERTEX_CAP,
            },
        )
        .unwrap();
        let c = out.certificate().unwrap();
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(3, 9)), 4);
        let out = kvm_nonuniform_driver(
            &reg,
            9,
            3,
            3,
            &[3],
            &[9],
            4,
            DriverMode::Construct { cap: 100 },
        )
        .unwrap();
        let c = out.certificate().unwrap();
        assert_eq!(c.role_count(ROLE_S), 4);
        assert!(matches!(
            c3n_driver(&reg, 1, 3, 9, 3, 3, 1, 4, DriverMode::Construct { cap: 10 }),
            Err(ConstructError::OverCap { .. })
        ));
    }
}

//! Products of difference factors indexed by several coordinates.
//!
//! `C→_(xy:n)`, `C→_(4x:n)` and `C→_(4xy:n)` are partitioned into pieces
//! `H((i,α,…), ρ(i,α,…))` for a bijection `ρ` of the index set. Each piece is
//! a product of one-coordinate pieces (`H_x`, `H_y`, `Λ`), so its cycle type
//! is decided by which coordinates `ρ` moves. The bijections are built from
//! phi- and theta-functions.

use num_integer::Integer;

use crate::base::{appendix_c12_3, appendix_c12_n, decompose_cxn, h_graph, phi_map, t_graph};
use crate::certificate::{DecompositionCertificate, HostSpec, ROLE_R, ROLE_S};
use crate::error::{ConstructError, Result};
use crate::four_part::{decompose_c4n, gamma_factor, lambda_factor};
use crate::graph::{CycleType, EquipartiteDigraph, TwoFactor};
use crate::product::partite_product;

fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn diff_coprime(m: u32, a: u32, b: u32) -> bool {
    gcd(m as i64, a as i64 - b as i64) == 1
}

fn check_odd(name: &'static str, v: u32) -> Result<()> {
    if v.is_multiple_of(2) {
        Err(ConstructError::excluded(name, v, "must be odd"))
    } else {
        Ok(())
    }
}

fn check_parts(n: u32) -> Result<()> {
    if n < 3 {
        Err(ConstructError::excluded(
            "n",
            n,
            "at least three parts required",
        ))
    } else {
        Ok(())
    }
}

fn product_factor(g: &EquipartiteDigraph, h: &EquipartiteDigraph) -> Result<TwoFactor> {
    Ok(TwoFactor::from_graph(partite_product(g, h)?)?)
}

/// `T_(xy)(i,α) = T_x(i) ⊗ T_y(α)`.
pub fn t_xy(x: u32, y: u32, n: u32, i: u32, alpha: u32) -> Result<TwoFactor> {
    product_factor(&t_graph(x, n, i)?.graph, &t_graph(y, n, alpha)?.graph)
}

/// `H_(xy)(i,α)(j,β) = H_x(i,j) ⊗ H_y(α,β)`.
pub fn h_xy(
    x: u32,
    y: u32,
    n: u32,
    (i, alpha): (u32, u32),
    (j, beta): (u32, u32),
) -> Result<TwoFactor> {
    product_factor(
        &h_graph(x, n, i, j)?.graph,
        &h_graph(y, n, alpha, beta)?.graph,
    )
}

/// `T_(2x)(i,α) = T_x(i) ⊗ Γ(α)`.
pub fn t_2x(x: u32, n: u32, i: u32, alpha: u32) -> Result<TwoFactor> {
    product_factor(&t_graph(x, n, i)?.graph, &gamma_factor(alpha, n)?.graph)
}

/// `H_(2x)(i,α)(j,β) = H_x(i,j) ⊗ Λ(α,β)`.
pub fn h_2x(x: u32, n: u32, (i, alpha): (u32, u32), (j, beta): (u32, u32)) -> Result<TwoFactor> {
    product_factor(
        &h_graph(x, n, i, j)?.graph,
        &lambda_factor(alpha, beta, n)?.graph,
    )
}

/// `H_(2xy)(i,α,γ)(j,β,δ) = H_(2x)(i,α)(j,β) ⊗ H_y(γ,δ)`.
pub fn h_2xy(
    x: u32,
    y: u32,
    n: u32,
    (i, alpha, gamma): (u32, u32, u32),
    (j, beta, delta): (u32, u32, u32),
) -> Result<TwoFactor> {
    let left = h_2x(x, n, (i, alpha), (j, beta))?;
    product_factor(&left.graph, &h_graph(y, n, gamma, delta)?.graph)
}

/// A bijection of `Z_x × Z_4` with exactly `s` moved points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaFunction {
    pub x: u32,
    pub s: u32,
    map: Vec<(u32, u32)>,
}

impl ThetaFunction {
    pub fn apply(&self, i: u32, alpha: u32) -> (u32, u32) {
        self.map[(i * 4 + alpha) as usize]
    }

    pub fn is_fixed(&self, i: u32, alpha: u32) -> bool {
        self.apply(i, alpha) == (i, alpha)
    }

    pub fn fixed_points(&self) -> Vec<(u32, u32)> {
        (0..self.x)
            .flat_map(|i| (0..4).map(move |a| (i, a)))
            .filter(|&(i, a)| self.is_fixed(i, a))
            .collect()
    }
}

/// `θ_s` on `Z_x × Z_4` for odd `x` and `s ∈ {0, 2, …, 4x}`.
pub fn theta_function(x: u32, s: u32) -> Result<ThetaFunction> {
    check_odd("x", x)?;
    if s == 1 {
        return Err(ConstructError::excluded(
            "s",
            s,
            "a single point cannot move",
        ));
    }
    if s > 4 * x {
        return Err(ConstructError::excluded(
            "s",
            s,
            format!("at most 4x={} points can move", 4 * x),
        ));
    }
    let mut map: Vec<(u32, u32)> = (0..x).flat_map(|i| (0..4).map(move |a| (i, a))).collect();
    let m = |i: u32| i % x;
    let mut set = |from: (u32, u32), to: (u32, u32)| {
        map[(m(from.0) * 4 + from.1) as usize] = (m(to.0), to.1);
    };
    if s == 4 * x - 1 && x >= 3 {
        for i in 0..x - 1 {
            for alpha in [0, 2] {
                set((i, alpha), (i + 1, alpha + 1));
            }
            if i >= 1 {
                for alpha in [1, 3] {
                    set((i, alpha), (i - 1, alpha - 1));
                }
            }
        }
        set((x - 1, 1), (x - 2, 2));
        set((x - 1, 3), (0, 1));
        set((0, 1), (x - 1, 0));
        set((x - 1, 0), (0, 3));
        set((0, 3), (x - 2, 0));
    } else {
        let (k, a, b) = match s % 4 {
            0 => (s / 4, 0, 0),
            2 => (s / 4, 1, 0),
            3 => (s / 4, 0, 1),
            _ => ((s - 5) / 4, 1, 1),
        };
        for i in 0..k {
            set((i, 0), (i + 1, 1));
            set((i + 1, 1), (i, 0));
            set((i, 2), (i + 1, 3));
            set((i + 1, 3), (i, 2));
        }
        if a == 1 {
            set((k, 0), (k + 1, 1));
            set((k + 1, 1), (k, 0));
        }
        if b == 1 {
            set((k, 2), (k + 1, 3));
            set((k + 1, 3), (k + 2, 1));
            set((k + 2, 1), (k, 2));
        }
    }
    Ok(ThetaFunction { x, s, map })
}

/// A permutation of a mixed-radix index set `Z_d0 × Z_d1 × …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexBijection {
    pub dims: Vec<u32>,
    images: Vec<u32>,
}

impl IndexBijection {
    pub fn from_fn(dims: &[u32], f: impl Fn(&[u32]) -> Vec<u32>) -> Self {
        let mut b = Self {
            dims: dims.to_vec(),
            images: Vec::new(),
        };
        let total: u32 = dims.iter().product();
        b.images = (0..total)
            .map(|p| {
                let img = f(&b.unflat(p));
                b.flat(&img)
            })
            .collect();
        b
    }

    fn from_images(dims: &[u32], images: Vec<u32>) -> Self {
        Self {
            dims: dims.to_vec(),
            images,
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn flat(&self, v: &[u32]) -> u32 {
        v.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&c, &d)| acc * d + c % d)
    }

    pub fn unflat(&self, mut p: u32) -> Vec<u32> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = p % d;
            p /= d;
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.unflat(self.images[self.flat(v) as usize])
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images.iter().all(|&q| {
            let fresh = (q as usize) < seen.len() && !seen[q as usize];
            if fresh {
                seen[q as usize] = true;
            }
            fresh
        })
    }

    /// All points as `(point, image)` coordinate pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (Vec<u32>, Vec<u32>)> + '_ {
        (0..self.images.len() as u32)
            .map(move |p| (self.unflat(p), self.unflat(self.images[p as usize])))
    }
}

/// On `Z_x × Z_y`: every point moves in exactly one coordinate, by a
/// difference coprime to that coordinate's modulus.
pub fn satisfies_xy_conditions(x: u32, y: u32, b: &IndexBijection) -> bool {
    b.is_bijection()
        && b.pairs().all(|(p, q)| {
            (diff_coprime(x, p[0], q[0]) && p[1] == q[1])
                || (diff_coprime(y, p[1], q[1]) && p[0] == q[0])
        })
}

/// On `Z_x × Z_4`: a moved point changes `α` and moves `i` by a difference
/// coprime to `x`.
pub fn satisfies_2x_hamiltonian_conditions(x: u32, b: &IndexBijection) -> bool {
    b.is_bijection()
        && b.pairs()
            .all(|(p, q)| p == q || (p[1] != q[1] && diff_coprime(x, p[0], q[0])))
}

/// On `Z_x × Z_4`: every point either changes only `α`, or keeps `α` and
/// moves `i` by a difference coprime to `x`.
pub fn satisfies_2x_split_conditions(x: u32, b: &IndexBijection) -> bool {
    b.is_bijection()
        && b.pairs().all(|(p, q)| {
            (p[1] != q[1] && p[0] == q[0]) || (p[1] == q[1] && diff_coprime(x, p[0], q[0]))
        })
}

/// On `Z_x × Z_4 × Z_y`: a point either moves `γ` by a difference coprime
/// to `y` keeping `(i, α)`, or keeps `γ` and moves `(i, α)` as in
/// [`satisfies_2x_hamiltonian_conditions`].
pub fn satisfies_2xy_conditions(x: u32, y: u32, b: &IndexBijection) -> bool {
    b.is_bijection()
        && b.pairs().all(|(p, q)| {
            if p[2] == q[2] {
                diff_coprime(x, p[0], q[0]) && p[1] != q[1]
            } else {
                diff_coprime(y, p[2], q[2]) && p[0] == q[0] && p[1] == q[1]
            }
        })
}

/// A non-increasing sequence of `slots` values in `{0..=cap} \ {cap−1}`
/// with equal first two entries and the given sum. Larger values are tried
/// first.
pub fn allocate_rows(slots: u32, cap: u32, total: u32) -> Option<Vec<u32>> {
    fn rec(out: &mut Vec<u32>, slots: u32, cap: u32, upper: u32, left: u32) -> bool {
        let placed = out.len() as u32;
        if placed == slots {
            return left == 0;
        }
        let remaining = slots - placed;
        if left > upper * remaining {
            return false;
        }
        for v in (0..=upper.min(left)).rev() {
            if cap >= 1 && v == cap - 1 {
                continue;
            }
            if placed == 0 && slots >= 2 {
                if 2 * v > left {
                    continue;
                }
                out.push(v);
                out.push(v);
                if rec(out, slots, cap, v, left - 2 * v) {
                    return true;
                }
                out.pop();
                out.pop();
            } else {
                out.push(v);
                if rec(out, slots, cap, v, left - v) {
                    return true;
                }
                out.pop();
            }
        }
        false
    }
    let mut out = Vec::new();
    rec(&mut out, slots, cap, cap, total).then_some(out)
}

/// Exhaustive search for a bijection in which each point picks one of its
/// candidate images; candidates flagged `true` count toward `want`.
fn search_bijection(
    dims: &[u32],
    want: u32,
    budget: u64,
    cand: impl Fn(&[u32]) -> Vec<(Vec<u32>, bool)>,
) -> Option<IndexBijection> {
    let probe = IndexBijection::from_images(dims, Vec::new());
    let total: u32 = dims.iter().product();
    let options: Vec<Vec<(u32, bool)>> = (0..total)
        .map(|p| {
            cand(&probe.unflat(p))
                .into_iter()
                .map(|(q, t)| (probe.flat(&q), t))
                .collect()
        })
        .collect();
    struct St<'a> {
        options: &'a [Vec<(u32, bool)>],
        used: Vec<bool>,
        images: Vec<u32>,
        nodes: u64,
        budget: u64,
        want: u32,
    }
    fn rec(st: &mut St, p: usize, have: u32) -> bool {
        st.nodes += 1;
        if st.nodes > st.budget {
            return false;
        }
        let n = st.options.len();
        if p == n {
            return have == st.want;
        }
        if have > st.want || have + ((n - p) as u32) < st.want {
            return false;
        }
        for k in 0..st.options[p].len() {
            let (q, t) = st.options[p][k];
            if st.used[q as usize] {
                continue;
            }
            st.used[q as usize] = true;
            st.images[p] = q;
            if rec(st, p + 1, have + t as u32) {
                return true;
            }
            st.used[q as usize] = false;
        }
        false
    }
    let mut st = St {
        options: &options,
        used: vec![false; total as usize],
        images: vec![0; total as usize],
        nodes: 0,
        budget,
        want,
    };
    rec(&mut st, 0, 0).then(|| IndexBijection::from_images(dims, st.images))
}

const BIJECTION_SEARCH_BUDGET: u64 = 2_000_000;

/// The bijection used by [`decompose_xy`]: `r_p` points keep `i` (giving
/// `C→_{yn}`-factors) and the rest keep `α` (giving `C→_{xn}`-factors).
pub fn xy_bijection(x: u32, y: u32, s_p: u32) -> Result<IndexBijection> {
    let r_p = x * y - s_p;
    if let Some(r) = allocate_rows(y, x, r_p) {
        let phis: Vec<Vec<u32>> = r.iter().map(|&ra| phi_map(x, x - ra)).collect();
        let pi: Vec<u32> = (0..x)
            .map(|i| phis.iter().filter(|p| p[i as usize] == i).count() as u32)
            .collect();
        let sigmas: Vec<Vec<u32>> = pi.iter().map(|&c| phi_map(y, c)).collect();
        return Ok(IndexBijection::from_fn(&[x, y], |v| {
            let (i, a) = (v[0], v[1]);
            vec![phis[a as usize][i as usize], sigmas[i as usize][a as usize]]
        }));
    }
    search_bijection(&[x, y], r_p, BIJECTION_SEARCH_BUDGET, |v| {
        let mut c = Vec::new();
        for j in (0..x).filter(|&j| diff_coprime(x, v[0], j)) {
            c.push((vec![j, v[1]], false));
        }
        for b in (0..y).filter(|&b| diff_coprime(y, v[1], b)) {
            c.push((vec![v[0], b], true));
        }
        c
    })
    .ok_or_else(|| {
        ConstructError::Infeasible(format!(
            "no bijection of Z_{x} x Z_{y} with {r_p} points keeping i"
        ))
    })
}

fn check_xy_params(x: u32, y: u32, n: u32, s_p: u32) -> Result<()> {
    check_odd("x", x)?;
    check_odd("y", y)?;
    check_odd("n", n)?;
    check_parts(n)?;
    let m = x * y;
    if s_p > m {
        return Err(ConstructError::excluded(
            "s",
            s_p,
            format!("at most xy={m}"),
        ));
    }
    if s_p == 1 || (m >= 2 && s_p == m - 1) {
        return Err(ConstructError::excluded(
            "s",
            s_p,
            "s and xy-s must differ from 1",
        ));
    }
    Ok(())
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

fn relabel(
    mut cert: DecompositionCertificate,
    lemma: &str,
    params: &[(&str, u32)],
) -> DecompositionCertificate {
    cert.construction.lemma = lemma.into();
    cert.construction.parameters.clear();
    for (k, v) in params {
        cert.set_param(k, *v);
    }
    cert
}

fn push_checked(
    cert: &mut DecompositionCertificate,
    role: &str,
    expected: &CycleType,
    f: TwoFactor,
) -> Result<()> {
    if &f.cycle_type != expected {
        return Err(ConstructError::Internal(format!(
            "piece analyzed as {} but its index class predicts {}",
            f.cycle_type, expected
        )));
    }
    cert.push(role, f.cycle_type, f.graph);
    Ok(())
}

/// `C→_(xy:n)` into `s_p` `C→_{xn}`-factors (F1) and `xy − s_p`
/// `C→_{yn}`-factors (F2).
pub fn decompose_xy(x: u32, y: u32, n: u32, s_p: u32) -> Result<DecompositionCertificate> {
    check_xy_params(x, y, n, s_p)?;
    let params = [("x", x), ("y", y), ("n", n), ("s", s_p)];
    if y == 1 {
        return Ok(relabel(decompose_cxn(x, n, s_p)?, "decompose_xy", &params));
    }
    if x == 1 {
        return Ok(relabel(
            swap_roles(decompose_cxn(y, n, y - s_p)?),
            "decompose_xy",
            &params,
        ));
    }
    let psi = xy_bijection(x, y, s_p)?;
    if !satisfies_xy_conditions(x, y, &psi) {
        return Err(ConstructError::Internal(
            "xy bijection violates its conditions".into(),
        ));
    }
    let t_s = CycleType::uniform(x * n, y);
    let t_r = CycleType::uniform(y * n, x);
    let mut cert = DecompositionCertificate::new(HostSpec::cyclic(x * y, n, true), "decompose_xy");
    for (k, v) in params {
        cert.set_param(k, v);
    }
    for (p, q) in psi.pairs() {
        let f = h_xy(x, y, n, (p[0], p[1]), (q[0], q[1]))?;
        if p[0] == q[0] {
            push_checked(&mut cert, ROLE_R, &t_r, f)?;
        } else {
            push_checked(&mut cert, ROLE_S, &t_s, f)?;
        }
    }
    Ok(cert.seal())
}

pub fn xy_admissible(x: u32, y: u32, s_p: u32) -> bool {
    let m = x * y;
    s_p <= m && s_p != 1 && s_p + 1 != m
}

fn theta_bijection(t: &ThetaFunction) -> IndexBijection {
    IndexBijection::from_fn(&[t.x, 4], |v| {
        let (j, b) = t.apply(v[0], v[1]);
        vec![j, b]
    })
}

/// `C→_(4x:n)` into `s_p` `C→_{2xn}`-factors (F1) and `4x − s_p`
/// `C→_n`-factors (F2), using `θ_{s_p}`.
pub fn decompose_4x_2xn_n(x: u32, n: u32, s_p: u32) -> Result<DecompositionCertificate> {
    check_odd("x", x)?;
    check_parts(n)?;
    let theta = theta_function(x, s_p)?;
    let psi = theta_bijection(&theta);
    if !satisfies_2x_hamiltonian_conditions(x, &psi) {
        return Err(ConstructError::Internal(
            "theta-function violates its conditions".into(),
        ));
    }
    let t_s = CycleType::uniform(2 * x * n, 2);
    let t_r = CycleType::uniform(n, 4 * x);
    let mut cert =
        DecompositionCertificate::new(HostSpec::cyclic(4 * x, n, true), "decompose_4x_2xn_n")
            .with_param("x", x)
            .with_param("n", n)
            .with_param("s", s_p);
    for (p, q) in psi.pairs() {
        let f = h_2x(x, n, (p[0], p[1]), (q[0], q[1]))?;
        if p == q {
            push_checked(&mut cert, ROLE_R, &t_r, f)?;
        } else {
            push_checked(&mut cert, ROLE_S, &t_s, f)?;
        }
    }
    Ok(cert.seal())
}

pub fn four_x_2xn_n_admissible(x: u32, s_p: u32) -> bool {
    s_p != 1 && s_p <= 4 * x
}

/// The bijection used by [`decompose_4x_xn_2n`]: allocation rows over the
/// four values of `α`, with `σ_i` rotating the first `π(i)` values.
pub fn four_x_split_bijection(x: u32, s_p: u32) -> Option<IndexBijection> {
    let r_p = 4 * x - s_p;
    let r = allocate_rows(4, x, r_p)?;
    let psis: Vec<Vec<u32>> = r.iter().map(|&ra| phi_map(x, x - ra)).collect();
    let pi: Vec<u32> = (0..x)
        .map(|i| psis.iter().filter(|p| p[i as usize] == i).count() as u32)
        .collect();
    Some(IndexBijection::from_fn(&[x, 4], |v| {
        let (i, a) = (v[0], v[1]);
        let c = pi[i as usize];
        let beta = if a < c { (a + 1) % c } else { a };
        vec![psis[a as usize][i as usize], beta]
    }))
}

/// `C→_(4x:n)` into `s_p` `C→_{xn}`-factors (F1) and `4x − s_p`
/// `C→_{2n}`-factors (F2). The point `(x, s_p) = (3, 7)` has no allocation
/// and uses the explicit `x = 12` difference tables instead.
pub fn decompose_4x_xn_2n(x: u32, n: u32, s_p: u32) -> Result<DecompositionCertificate> {
    check_odd("x", x)?;
    check_parts(n)?;
    if s_p > 4 * x {
        return Err(ConstructError::excluded(
            "s",
            s_p,
            format!("at most 4x={}", 4 * x),
        ));
    }
    if s_p == 1 || s_p + 1 == 4 * x {
        return Err(ConstructError::excluded(
            "s",
            s_p,
            "s and 4x-s must differ from 1",
        ));
    }
    let params = [("x", x), ("n", n), ("s", s_p)];
    if x == 1 {
        return Ok(relabel(
            swap_roles(decompose_c4n(n, 4 - s_p)?),
            "decompose_4x_xn_2n",
            &params,
        ));
    }
    if (x, s_p) == (3, 7) {
        let cert = if n == 3 {
            appendix_c12_3()
        } else {
            appendix_c12_n(n)?
        };
        return Ok(relabel(cert, "decompose_4x_xn_2n", &params));
    }
    let psi = four_x_split_bijection(x, s_p).ok_or_else(|| {
        ConstructError::Infeasible(format!("no row allocation for x={x}, s={s_p}"))
    })?;
    if !satisfies_2x_split_conditions(x, &psi) {
        return Err(ConstructError::Internal(
            "split bijection violates its conditions".into(),
        ));
    }
    let t_s = CycleType::uniform(x * n, 4);
    let t_r = CycleType::uniform(2 * n, 2 * x);
    let mut cert =
        DecompositionCertificate::new(HostSpec::cyclic(4 * x, n, true), "decompose_4x_xn_2n");
    for (k, v) in params {
        cert.set_param(k, v);
    }
    for (p, q) in psi.pairs() {
        let f = h_2x(x, n, (p[0], p[1]), (q[0], q[1]))?;
        if p[0] == q[0] {
            push_checked(&mut cert, ROLE_R, &t_r, f)?;
        } else {
            push_checked(&mut cert, ROLE_S, &t_s, f)?;
        }
    }
    Ok(cert.seal())
}

pub fn four_x_xn_2n_admissible(x: u32, n: u32, s_p: u32) -> bool {
    let _ = n;
    s_p <= 4 * x && s_p != 1 && s_p + 1 != 4 * x
}

/// Theta parameter of each layer `γ = 0..y−1` for the three-index
/// bijection, or `None` when the schedule does not exist.
pub fn layer_schedule(x: u32, y: u32, s_p: u32) -> Option<Vec<u32>> {
    let f = 4 * x;
    if y < 3 || s_p == 1 || s_p > f * y || s_p + 1 == f * y {
        return None;
    }
    let (k, q) = (s_p / f, s_p % f);
    let mut layers = vec![0; y as usize];
    if k == 0 {
        layers[y as usize - 1] = s_p;
    } else if k + 3 <= y {
        let (a, eps) = match q {
            0 => (2, 2),
            1 => (2, 1),
            q => (q, 0),
        };
        for g in y - k + 1..y {
            layers[g as usize] = f;
        }
        layers[(y - k) as usize] = f - eps;
        layers[(y - k - 1) as usize] = a;
    } else {
        let rem = s_p - f * (y - 2);
        let (a, eps) = if rem == 0 {
            (2, 4)
        } else if rem == 1 {
            (2, 3)
        } else if rem == 2 {
            (2, 2)
        } else if rem.is_multiple_of(2) {
            (rem / 2, 0)
        } else {
            (rem.div_ceil(2), 1)
        };
        if a < 2 || a + eps > f || eps > 4 {
            return None;
        }
        for g in 3..y {
            layers[g as usize] = f;
        }
        layers[2] = f - eps;
        layers[1] = a;
        layers[0] = a;
    }
    Some(layers)
}

/// The three-index bijection `ρ(i,α,γ) = (ψ_γ(i,α), σ_{i,α}(γ))`, where
/// `σ_{i,α}` moves exactly the layers whose theta-function fixes `(i,α)`.
pub fn two_xy_bijection(x: u32, y: u32, s_p: u32) -> Result<IndexBijection> {
    let layers = layer_schedule(x, y, s_p).ok_or_else(|| {
        ConstructError::Infeasible(format!("no layer schedule for x={x}, y={y}, s={s_p}"))
    })?;
    let thetas: Vec<ThetaFunction> = layers
        .iter()
        .map(|&s| theta_function(x, s))
        .collect::<Result<_>>()?;
    let mut sigmas = Vec::with_capacity((x * 4) as usize);
    for i in 0..x {
        for a in 0..4 {
            let fixed: Vec<bool> = thetas.iter().map(|t| t.is_fixed(i, a)).collect();
            let count = fixed.iter().filter(|&&f| f).count();
            if fixed[..count].iter().any(|&f| !f) || count == 1 {
                return Err(ConstructError::Infeasible(format!(
                    "layers fixing ({i},{a}) are not an initial segment of length other than 1"
                )));
            }
            sigmas.push(phi_map(y, count as u32));
        }
    }
    Ok(IndexBijection::from_fn(&[x, 4, y], |v| {
        let (i, a, g) = (v[0], v[1], v[2]);
        let (j, b) = thetas[g as usize].apply(i, a);
        vec![j, b, sigmas[(i * 4 + a) as usize][g as usize]]
    }))
}

/// `C→_(4xy:n)` into `s_p` `C→_{2xn}`-factors (F1) and `4xy − s_p`
/// `C→_{yn}`-factors (F2).
pub fn decompose_4xy_2xn_yn(x: u32, y: u32, n: u32, s_p: u32) -> Result<DecompositionCertificate> {
    check_odd("x", x)?;
    check_odd("y", y)?;
    check_parts(n)?;
    let m = 4 * x * y;
    if s_p > m {
        return Err(ConstructError::excluded(
            "s",
            s_p,
            format!("at most 4xy={m}"),
        ));
    }
    if s_p == 1 || s_p + 1 == m {
        return Err(ConstructError::excluded(
            "s",
            s_p,
            "s and 4xy-s must differ from 1",
        ));
    }
    let params = [("x", x), ("y", y), ("n", n), ("s", s_p)];
    if y == 1 {
        return Ok(relabel(
            decompose_4x_2xn_n(x, n, s_p)?,
            "decompose_4xy_2xn_yn",
            &params,
        ));
    }
    let rho = two_xy_bijection(x, y, s_p)?;
    if !satisfies_2xy_conditions(x, y, &rho) {
        return Err(ConstructError::Internal(
            "three-index bijection violates its conditions".into(),
        ));
    }
    let t_s = CycleType::uniform(2 * x * n, 2 * y);
    let t_r = CycleType::uniform(y * n, 4 * x);
    let mut cert =
        DecompositionCertificate::new(HostSpec::cyclic(m, n, true), "decompose_4xy_2xn_yn");
    for (k, v) in params {
        cert.set_param(k, v);
    }
    for (p, q) in rho.pairs() {
        let f = h_2xy(x, y, n, (p[0], p[1], p[2]), (q[0], q[1], q[2]))?;
        if p[2] == q[2] {
            push_checked(&mut cert, ROLE_S, &t_s, f)?;
        } else {
            push_checked(&mut cert, ROLE_R, &t_r, f)?;
        }
    }
    Ok(cert.seal())
}

pub fn four_xy_admissible(x: u32, y: u32, s_p: u32) -> bool {
    let m = 4 * x * y;
    s_p <= m && s_p != 1 && s_p + 1 != m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::f_slice;
    use crate::graph::{boolean_sum, cycle_structure};

    #[test]
    fn h_xy_matches_slice_definition() {
        let (x, y, n) = (3, 5, 3);
        let t1 = t_xy(x, y, n, 1, 2).unwrap();
        assert_eq!(t1.cycle_type, CycleType::uniform(3, 15));
        let t2 = t_xy(x, y, n, 2, 4).unwrap().graph;
        let def = boolean_sum(
            &boolean_sum(&t1.graph, &f_slice(&t1.graph, n)).unwrap(),
            &f_slice(&t2, n),
        )
        .unwrap();
        let h = h_xy(x, y, n, (1, 2), (2, 4)).unwrap();
        assert_eq!(h.graph, def);
        assert_eq!(h_xy(x, y, n, (1, 2), (1, 2)).unwrap(), t1);
    }

    #[test]
    fn h_2x_classes() {
        let (x, n) = (3, 5);
        assert_eq!(
            h_2x(x, n, (0, 0), (0, 0)).unwrap().cycle_type,
            CycleType::uniform(5, 12)
        );
        assert_eq!(
            h_2x(x, n, (0, 0), (1, 1)).unwrap().cycle_type,
            CycleType::uniform(30, 2)
        );
        assert_eq!(
            h_2x(x, n, (0, 0), (0, 1)).unwrap().cycle_type,
            CycleType::uniform(10, 6)
        );
        assert_eq!(
            h_2x(x, n, (0, 1), (2, 1)).unwrap().cycle_type,
            CycleType::uniform(15, 4)
        );
        let t = t_2x(x, n, 1, 2).unwrap();
        assert_eq!(h_2x(x, n, (1, 2), (1, 2)).unwrap(), t);
    }

    #[test]
    fn theta_examples() {
        let t = theta_function(5, 9).unwrap();
        assert_eq!(t.apply(0, 0), (1, 1));
        assert_eq!(t.apply(1, 1), (0, 0));
        assert_eq!(t.apply(0, 2), (1, 3));
        assert_eq!(t.apply(1, 3), (0, 2));
        assert_eq!(t.apply(1, 0), (2, 1));
        assert_eq!(t.apply(2, 1), (1, 0));
        assert_eq!(t.apply(1, 2), (2, 3));
        assert_eq!(t.apply(2, 3), (3, 1));
        assert_eq!(t.apply(3, 1), (1, 2));
        assert_eq!(t.fixed_points().len(), 20 - 9);
        assert_eq!(theta_function(5, 19).unwrap().fixed_points(), vec![(4, 2)]);
        assert_eq!(theta_function(5, 0).unwrap().fixed_points().len(), 20);
        assert!(theta_function(5, 1).is_err());
    }

    #[test]
    fn theta_invariants_and_nesting() {
        for x in (1..=13).step_by(2) {
            for s in (0..=4 * x).filter(|&s| s != 1) {
                let t = theta_function(x, s).unwrap();
                let b = theta_bijection(&t);
                assert!(satisfies_2x_hamiltonian_conditions(x, &b), "x={x} s={s}");
                assert_eq!(t.fixed_points().len() as u32, 4 * x - s, "x={x} s={s}");
            }
            if x >= 3 {
                let tail = [(x - 1, 2), (0, 3), (x - 1, 0), (0, 1)];
                for eps in 1..=4 {
                    let mut want = tail[..eps as usize].to_vec();
                    want.sort_unstable();
                    assert_eq!(theta_function(x, 4 * x - eps).unwrap().fixed_points(), want);
                }
                // pairs used by the layer schedules: any a beside 4x-1, only a = 2 deeper
                for eps in 1..=4 {
                    let big = theta_function(x, 4 * x - eps).unwrap();
                    let top = if eps == 1 { 4 * x - 1 } else { 2 };
                    for a in 2..=top {
                        let small = theta_function(x, a).unwrap();
                        assert!(
                            big.fixed_points()
                                .iter()
                                .all(|&(i, al)| small.is_fixed(i, al)),
                            "x={x} eps={eps} a={a}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn allocations() {
        assert_eq!(allocate_rows(5, 3, 7), Some(vec![3, 3, 1, 0, 0]));
        // x = 3, four slots: r_p = 5 has no allocation
        assert_eq!(allocate_rows(4, 3, 5), None);
        assert_eq!(allocate_rows(3, 3, 4), None);
        for r in allocate_rows(4, 7, 17).unwrap() {
            assert_ne!(r, 6);
        }
    }

    #[test]
    fn xy_small() {
        let c = decompose_xy(3, 5, 5, 7).unwrap();
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(15, 5)), 7);
        assert_eq!(c.count_of(ROLE_R, &CycleType::uniform(25, 3)), 8);
        assert_eq!(
            c.factors.iter().map(|f| f.graph.arc_count()).sum::<usize>(),
            1125
        );
        let c = decompose_xy(3, 3, 3, 4).unwrap();
        assert_eq!(c.role_count(ROLE_S), 4);
        assert!(decompose_xy(3, 5, 3, 14).is_err());
    }

    #[test]
    fn schedules() {
        assert_eq!(layer_schedule(3, 5, 25), Some(vec![0, 0, 2, 11, 12]));
        assert_eq!(layer_schedule(3, 5, 37), Some(vec![2, 2, 9, 12, 12]));
        for s in (0..=60).filter(|&s| s != 1 && s != 59) {
            let l = layer_schedule(3, 5, s).unwrap_or_else(|| panic!("s={s}"));
            assert_eq!(l.iter().sum::<u32>(), s);
            assert_eq!(l[0], l[1]);
        }
    }

    #[test]
    fn two_xy_small() {
        let c = decompose_4xy_2xn_yn(3, 5, 3, 25).unwrap();
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(18, 10)), 25);
        assert_eq!(c.count_of(ROLE_R, &CycleType::uniform(15, 12)), 35);
        for f in &c.factors {
            assert_eq!(cycle_structure(&f.graph).unwrap(), f.declared_type);
        }
    }

    #[test]
    fn split_bijection_x3_s7_falls_back() {
        assert!(four_x_split_bijection(3, 7).is_none());
        let c = decompose_4x_xn_2n(3, 5, 7).unwrap();
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(15, 4)), 7);
        assert_eq!(c.count_of(ROLE_R, &CycleType::uniform(10, 6)), 5);
    }
}

//! Difference-method factors of `C→_(x:n)`.
//!
//! A [`DifferenceVector`] assigns one difference `d_j ∈ Z_x` to each part
//! pair `(j, j+1 mod n)`; developing it gives the arcs
//! `((g, j), (g + d_j, j + 1))` for all `g`. The factors `T_x(i)` and
//! `H_x(i, s)`, the tabulated triples for `x = 12` and the decomposition of
//! `C→_(x:n)` into Hamiltonian and `C→_n`-factors are all built this way.

use num_integer::Integer;

use crate::certificate::{DecompositionCertificate, HostSpec, ROLE_R, ROLE_S};
use crate::error::{ConstructError, Result};
use crate::graph::{CycleType, EquipartiteDigraph, TwoFactor};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DifferenceVector {
    pub modulus: u32,
    pub diffs: Vec<u32>,
}

impl DifferenceVector {
    pub fn new(modulus: u32, diffs: impl IntoIterator<Item = i64>) -> Self {
        let m = modulus as i64;
        Self {
            modulus,
            diffs: diffs.into_iter().map(|d| d.rem_euclid(m) as u32).collect(),
        }
    }

    pub fn parts(&self) -> u32 {
        self.diffs.len() as u32
    }

    pub fn sum(&self) -> u32 {
        (self.diffs.iter().map(|&d| d as u64).sum::<u64>() % self.modulus as u64) as u32
    }

    /// Cycle type of the developed factor: `gcd(x, Σd)` cycles of length
    /// `n·x/gcd(x, Σd)`.
    pub fn cycle_type(&self) -> CycleType {
        let x = self.modulus;
        let g = x.gcd(&self.sum());
        CycleType::uniform(self.parts() * x / g, g)
    }

    pub fn develop(&self) -> EquipartiteDigraph {
        let (x, n) = (self.modulus, self.parts());
        let arcs = (0..n).flat_map(|j| {
            let d = self.diffs[j as usize];
            (0..x).map(move |g| (j * x + g, ((j + 1) % n) * x + (g + d) % x))
        });
        EquipartiteDigraph::from_ids(x, n, true, arcs).expect("developed arcs are distinct")
    }
}

/// Exponents of the binary expansion of `n − 1`, largest first.
pub fn binary_exponents(n: u32) -> Vec<u32> {
    let m = n.saturating_sub(1);
    (0..32).rev().filter(|&e| m >> e & 1 == 1).collect()
}

/// Develops `diffs` over `C→_(x:n)`.
pub fn difference_factor(x: u32, diffs: &[i64]) -> TwoFactor {
    let dv = DifferenceVector::new(x, diffs.iter().copied());
    let cycle_type = dv.cycle_type();
    TwoFactor {
        graph: dv.develop(),
        cycle_type,
    }
}

fn require_odd(name: &'static str, v: u32) -> Result<()> {
    if v.is_multiple_of(2) {
        Err(ConstructError::excluded(name, v, "must be odd"))
    } else {
        Ok(())
    }
}

/// Differences of `T_x(i)`, one per part pair `j → j+1`.
pub fn t_differences(x: u32, n: u32, i: u32) -> DifferenceVector {
    let exps = binary_exponents(n);
    let k = exps.len();
    let i = i as i64;
    let mut d: Vec<i64> = exps.iter().map(|&e| (1i64 << e) * i).collect();
    d.extend(std::iter::repeat_n(-2 * i, k - 1));
    d.extend(std::iter::repeat_n(-i, n as usize - 2 * k + 1));
    DifferenceVector::new(x, d)
}

/// `T_x(i)`: a `C→_n`-factor of `C→_(x:n)` for odd `x`.
pub fn t_graph(x: u32, n: u32, i: u32) -> Result<TwoFactor> {
    require_odd("x", x)?;
    check_parts(n)?;
    let dv = t_differences(x, n, i % x);
    Ok(TwoFactor {
        cycle_type: dv.cycle_type(),
        graph: dv.develop(),
    })
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

/// `F_h(G)`: arcs from part `h−1` to part `h`; `h = n` is the slice from part
/// `n−1` back to part 0.
pub fn f_slice(g: &EquipartiteDigraph, h: u32) -> EquipartiteDigraph {
    let n = g.parts();
    let (from, to) = (h - 1, h % n);
    g.filter_arcs(|u, v| u.part == from && v.part == to)
}

/// Differences of `H_x(i, s)`: those of `T_x(i)` with the wrap-around slice
/// taken from `T_x(s)`.
pub fn h_differences(x: u32, n: u32, i: u32, s: u32) -> DifferenceVector {
    let mut dv = t_differences(x, n, i);
    let last = t_differences(x, n, s).diffs[n as usize - 1];
    dv.diffs[n as usize - 1] = last;
    dv
}

/// `H_x(i, s)`: `gcd(x, i−s)` directed cycles of length `xn / gcd(x, i−s)`.
pub fn h_graph(x: u32, n: u32, i: u32, s: u32) -> Result<TwoFactor> {
    require_odd("x", x)?;
    check_parts(n)?;
    let dv = h_differences(x, n, i % x, s % x);
    Ok(TwoFactor {
        cycle_type: dv.cycle_type(),
        graph: dv.develop(),
    })
}

/// A bijection of `Z_x` with `x − s` fixed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiFunction {
    pub x: u32,
    pub s: u32,
    map: Vec<u32>,
}

impl PhiFunction {
    pub fn apply(&self, i: u32) -> u32 {
        self.map[i as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.map
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        (0..self.x).filter(|&i| self.apply(i) == i).collect()
    }

    pub fn is_fixed(&self, i: u32) -> bool {
        self.apply(i) == i
    }
}

/// Piecewise map of `{0..}` moving exactly the first `s` points (`s ≠ 1`),
/// defined on `0..len` for any `len ≥ s`.
pub(crate) fn phi_map(len: u32, s: u32) -> Vec<u32> {
    (0..len)
        .map(|i| {
            if s == 0 || i >= s {
                i
            } else if i + 3 <= s {
                if i % 2 == 0 {
                    i + 1
                } else {
                    i - 1
                }
            } else if i + 2 == s {
                s - 1
            } else if s % 2 == 1 {
                i - 2
            } else {
                i - 1
            }
        })
        .collect()
}

/// `φ_s` on `Z_x`, for odd `x` and `s ∈ {0} ∪ {2..x}`.
pub fn phi_function(x: u32, s: u32) -> Result<PhiFunction> {
    require_odd("x", x)?;
    if s == 1 {
        return Err(ConstructError::excluded(
            "s",
            s,
            "a single point cannot move",
        ));
    }
    if s > x {
        return Err(ConstructError::excluded(
            "s",
            s,
            format!("at most x={x} points can move"),
        ));
    }
    Ok(PhiFunction {
        x,
        s,
        map: phi_map(x, s),
    })
}

/// `C→_(x:n)` into `s` Hamiltonian factors (role F1) and `x − s`
/// `C→_n`-factors (role F2), using `H_x(i, φ_s(i))`.
pub fn decompose_cxn(x: u32, n: u32, s: u32) -> Result<DecompositionCertificate> {
    check_parts(n)?;
    let phi = phi_function(x, s)?;
    let mut cert = DecompositionCertificate::new(HostSpec::cyclic(x, n, true), "decompose_cxn")
        .with_param("x", x)
        .with_param("n", n)
        .with_param("s", s);
    for i in 0..x {
        let j = phi.apply(i);
        let f = h_graph(x, n, i, j)?;
        let role = if i == j { ROLE_R } else { ROLE_S };
        cert.push(role, f.cycle_type, f.graph);
    }
    Ok(cert.seal())
}

/// Checks whether `decompose_cxn(x, ·, s)` accepts `s`.
pub fn cxn_admissible(x: u32, s: u32) -> bool {
    x % 2 == 1 && s != 1 && s <= x
}

/// Difference triples over `C→_(12:3)`: five with sum 6 and seven with sum
/// 4 or 8. Each column is a permutation of `Z_12`.
pub const APPENDIX_TRIPLES: [[u32; 3]; 12] = [
    [0, 3, 3],
    [1, 1, 4],
    [2, 2, 2],
    [3, 9, 6],
    [4, 4, 10],
    [5, 10, 5],
    [6, 6, 8],
    [7, 0, 9],
    [8, 5, 7],
    [9, 7, 0],
    [10, 11, 11],
    [11, 8, 1],
];

fn appendix_role(triple: &[u32; 3]) -> &'static str {
    if triple.iter().sum::<u32>() % 12 == 6 {
        ROLE_R
    } else {
        ROLE_S
    }
}

/// The twelve tabulated triples developed over `C→_(12:3)`.
pub fn appendix_c12_3() -> DecompositionCertificate {
    let mut cert = DecompositionCertificate::new(HostSpec::cyclic(12, 3, true), "appendix_c12")
        .with_param("n", 3);
    for t in &APPENDIX_TRIPLES {
        let f = difference_factor(12, &t.map(|d| d as i64));
        cert.push(appendix_role(t), f.cycle_type, f.graph);
    }
    cert.seal()
}

/// `C→_(12:n)` for odd `n ≥ 5`: seven `[3n^4]`-factors and five
/// `[2n^6]`-factors. Factor `d` uses the alternating prefix `d, −d, …` on
/// the first `n − 3` part pairs, then tabulated triple `d`.
pub fn appendix_c12_n(n: u32) -> Result<DecompositionCertificate> {
    if n < 5 {
        return Err(ConstructError::excluded("n", n, "needs n >= 5"));
    }
    if n.is_multiple_of(2) {
        // column sums force an even number of zero-sum prefix slots
        return Err(ConstructError::excluded(
            "n",
            n,
            "the zero-sum prefix needs an even number of slots",
        ));
    }
    let mut cert = DecompositionCertificate::new(HostSpec::cyclic(12, n, true), "appendix_c12")
        .with_param("n", n);
    for (row, t) in APPENDIX_TRIPLES.iter().enumerate() {
        let d = row as i64;
        let mut diffs: Vec<i64> = (0..n - 3)
            .map(|j| if j % 2 == 0 { d } else { -d })
            .collect();
        diffs.extend(t.iter().map(|&v| v as i64));
        let f = difference_factor(12, &diffs);
        cert.push(appendix_role(t), f.cycle_type, f.graph);
    }
    Ok(cert.seal())
}

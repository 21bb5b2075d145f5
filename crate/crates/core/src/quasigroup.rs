//! Orthogonal quasigroup pairs and the gregarious `C→_n`-factorization of
//! `C→_(w:n)` they induce.

use crate::certificate::{DecompositionCertificate, HostSpec, ROLE_UNIFORM};
use crate::error::{ConstructError, Result};
use crate::graph::{CycleType, EquipartiteDigraph};

/// Multiplication table of a finite quasigroup on `{0..order}`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Quasigroup {
    pub order: u32,
    pub table: Vec<u32>,
}

impl Quasigroup {
    pub fn from_fn(order: u32, f: impl Fn(u32, u32) -> u32) -> Self {
        let mut table = Vec::with_capacity((order * order) as usize);
        for i in 0..order {
            for j in 0..order {
                table.push(f(i, j));
            }
        }
        Self { order, table }
    }

    pub fn op(&self, i: u32, j: u32) -> u32 {
        self.table[(i * self.order + j) as usize]
    }

    /// Direct product; element `(a, b)` is stored as `a * other.order + b`.
    pub fn direct_product(&self, other: &Self) -> Self {
        let w = other.order;
        Self::from_fn(self.order * w, |i, j| {
            self.op(i / w, j / w) * w + other.op(i % w, j % w)
        })
    }
}

/// Multiplication in `GF(2^e)` modulo the irreducible polynomial `poly`.
fn gf2_mul(mut a: u32, mut b: u32, e: u32, poly: u32) -> u32 {
    let mut r = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> e & 1 == 1 {
            a ^= poly;
        }
    }
    r
}

/// Smallest irreducible polynomial of degree `e` over `GF(2)`, as a bit mask
/// including the leading term.
fn gf2_irreducible(e: u32) -> u32 {
    (1u32 << e..1u32 << (e + 1))
        .find(|&p| {
            p & 1 == 1 && (1..e).all(|d| (1u32 << d..1u32 << (d + 1)).all(|q| gf2_rem(p, q) != 0))
        })
        .expect("irreducible polynomials exist in every degree")
}

fn gf2_rem(mut p: u32, q: u32) -> u32 {
    let dq = 31 - q.leading_zeros();
    while p != 0 && 31 - p.leading_zeros() >= dq {
        p ^= q << (31 - p.leading_zeros() - dq);
    }
    p
}

/// Quasigroup orders with a built-in orthogonal pair: every `w` not
/// congruent to 2 modulo 4.
pub fn order_supported(w: u32) -> bool {
    w >= 1 && w % 4 != 2
}

/// Two orthogonal quasigroups of order `w`.
pub fn orthogonal_quasigroups(w: u32) -> Result<(Quasigroup, Quasigroup)> {
    if !order_supported(w) {
        return Err(ConstructError::UnsupportedOrder(w));
    }
    let e = w.trailing_zeros();
    let odd = w >> e;
    let odd_pair = (
        Quasigroup::from_fn(odd, |i, j| (i + j) % odd),
        Quasigroup::from_fn(odd, |i, j| (i + 2 * j) % odd),
    );
    if e == 0 {
        return Ok(odd_pair);
    }
    let q = 1u32 << e;
    let poly = gf2_irreducible(e);
    let field_pair = (
        Quasigroup::from_fn(q, |i, j| i ^ j),
        Quasigroup::from_fn(q, |i, j| i ^ gf2_mul(2, j, e, poly)),
    );
    if odd == 1 {
        return Ok(field_pair);
    }
    Ok((
        field_pair.0.direct_product(&odd_pair.0),
        field_pair.1.direct_product(&odd_pair.1),
    ))
}

/// `C→_(w:n)` into `w` factors of type `[n^w]` in which every cycle meets
/// each part once. The cycle for the pair `(i, j)` is
/// `(i,0) (j,1) (i,2) … (j,n−2) (i∘j, n−1)`, and factor `l` collects the
/// pairs with `i * j = l`.
pub fn gregarious_factorization(w: u32, n: u32) -> Result<DecompositionCertificate> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(ConstructError::excluded(
            "n",
            n,
            "the alternating cycle pattern needs odd n >= 3",
        ));
    }
    let (circ, star) = orthogonal_quasigroups(w)?;
    let mut per_factor: Vec<Vec<(u32, u32)>> = vec![Vec::new(); w as usize];
    for i in 0..w {
        for j in 0..w {
            let l = star.op(i, j) as usize;
            let label = |p: u32| -> u32 {
                if p == n - 1 {
                    circ.op(i, j)
                } else if p.is_multiple_of(2) {
                    i
                } else {
                    j
                }
            };
            for p in 0..n {
                let q = (p + 1) % n;
                per_factor[l].push((p * w + label(p), q * w + label(q)));
            }
        }
    }
    let mut cert = DecompositionCertificate::new(HostSpec::cyclic(w, n, true), "gregarious")
        .with_param("w", w)
        .with_param("n", n);
    for arcs in per_factor {
        let g = EquipartiteDigraph::from_ids(w, n, true, arcs)?;
        cert.push(ROLE_UNIFORM, CycleType::uniform(n, w), g);
    }
    Ok(cert.seal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle_structure;
    use crate::verify::{check_orthogonality, check_quasigroup};

    #[test]
    fn supported_orders() {
        for w in [1, 3, 4, 5, 7, 8, 9, 12, 16, 20, 24] {
            let (a, b) = orthogonal_quasigroups(w).unwrap();
            assert!(check_quasigroup(&a) && check_quasigroup(&b), "w={w}");
            assert!(check_orthogonality(&a, &b), "w={w}");
        }
        for w in [2, 6, 10, 14, 18] {
            assert_eq!(
                orthogonal_quasigroups(w),
                Err(ConstructError::UnsupportedOrder(w))
            );
        }
    }

    #[test]
    fn order_three_tables() {
        let (a, b) = orthogonal_quasigroups(3).unwrap();
        assert_eq!(a.table, vec![0, 1, 2, 1, 2, 0, 2, 0, 1]);
        assert_eq!(b.table, vec![0, 2, 1, 1, 0, 2, 2, 1, 0]);
    }

    #[test]
    fn gf_polynomials() {
        assert_eq!(gf2_irreducible(2), 0b111);
        assert_eq!(gf2_irreducible(3), 0b1011);
        assert_eq!(gf2_irreducible(4), 0b10011);
    }

    #[test]
    fn gregarious_cycles() {
        for (w, n) in [(1, 3), (3, 5), (4, 7), (5, 3), (12, 3)] {
            let c = gregarious_factorization(w, n).unwrap();
            assert_eq!(c.factors.len() as u32, w);
            for f in &c.factors {
                assert_eq!(cycle_structure(&f.graph).unwrap(), CycleType::uniform(n, w));
            }
        }
        assert!(gregarious_factorization(3, 4).is_err());
        assert!(gregarious_factorization(6, 3).is_err());
    }
}

//! Gadget factorizations of `C→_(4:n)` into `C→_n`- and `C→_{2n}`-factors.
//!
//! A gadget `γ_{a,j}` spans `4 + a` consecutive parts and consists of four
//! vertex-disjoint directed paths, one starting at each height (element)
//! `0..3` of its first column and ending at the same height in its last
//! column. `Γ(j)` tiles the `n` parts with `γ_{0,j}` gadgets and one tail
//! gadget `γ_{n mod 3, j}`; `Λ(i, j)` is `Γ(i)` with its wrap-around slice
//! taken from `Γ(j)`.

use crate::base::f_slice;
use crate::certificate::{DecompositionCertificate, HostSpec, ROLE_R, ROLE_S};
use crate::error::{ConstructError, Result};
use crate::graph::{boolean_sum, CycleType, EquipartiteDigraph, PartiteVertex, TwoFactor};

/// Height sequences `GAMMA[a][j][h]` of the path starting at height `h`.
const GAMMA: [[[&str; 4]; 4]; 3] = [
    [
        ["0000", "1321", "2132", "3213"],
        ["0230", "1111", "2302", "3023"],
        ["0310", "1031", "2222", "3103"],
        ["0120", "1201", "2012", "3333"],
    ],
    [
        ["00000", "13231", "21312", "32123"],
        ["02320", "11111", "23032", "30203"],
        ["03130", "10301", "22222", "31013"],
        ["01210", "12021", "20102", "33333"],
    ],
    [
        ["000000", "132131", "213212", "321323"],
        ["023020", "111111", "230232", "302303"],
        ["031030", "103101", "222222", "310313"],
        ["012010", "120121", "201202", "333333"],
    ],
];

/// Heights of the path of `γ_{a,j}` starting at height `h`.
pub fn gadget_path(a: u32, j: u32, h: u32) -> Vec<u32> {
    GAMMA[a as usize][j as usize][h as usize]
        .bytes()
        .map(|b| (b - b'0') as u32)
        .collect()
}

/// Where a gadget is placed inside `C→_(4:n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// `γ_{0,j}(t)` on parts `3t−1 .. 3t+2`.
    Body(u32),
    /// `γ_{a,j}(n)` on parts `3b−4 .. n−1`, where `n = 3b + a`.
    Tail,
}

fn check_n(n: u32) -> Result<()> {
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

/// Arcs of `γ_{a,j}` relocated to the parts named by `placement`.
pub fn gamma_placed(a: u32, j: u32, placement: Placement, n: u32) -> Result<EquipartiteDigraph> {
    check_n(n)?;
    if a > 2 || j > 3 {
        return Err(ConstructError::excluded(
            "j",
            j,
            "gadget index out of range",
        ));
    }
    let (b, rem) = (n / 3, n % 3);
    let first = match placement {
        Placement::Body(t) => {
            if a != 0 || b < 2 || t > b - 2 {
                return Err(ConstructError::excluded(
                    "t",
                    t,
                    format!("no body gadget {t} for n={n}"),
                ));
            }
            3 * t as i64 - 1
        }
        Placement::Tail => {
            if a != rem {
                return Err(ConstructError::excluded(
                    "a",
                    a,
                    format!("tail gadget for n={n} has a={rem}"),
                ));
            }
            3 * b as i64 - 4
        }
    };
    let part = |c: usize| (first + c as i64).rem_euclid(n as i64) as u32;
    let mut arcs = Vec::new();
    for h in 0..4 {
        let path = gadget_path(a, j, h);
        for c in 0..path.len() - 1 {
            arcs.push((
                PartiteVertex::new(path[c], part(c)),
                PartiteVertex::new(path[c + 1], part(c + 1)),
            ));
        }
    }
    Ok(EquipartiteDigraph::from_vertex_arcs(4, n, true, arcs)?)
}

/// `Γ(j)`: a `C→_n`-factor of `C→_(4:n)`.
pub fn gamma_factor(j: u32, n: u32) -> Result<TwoFactor> {
    check_n(n)?;
    let b = n / 3;
    let mut g = gamma_placed(n % 3, j, Placement::Tail, n)?;
    for t in 0..b.saturating_sub(1) {
        g = boolean_sum(&g, &gamma_placed(0, j, Placement::Body(t), n)?)?;
    }
    Ok(TwoFactor {
        graph: g,
        cycle_type: CycleType::uniform(n, 4),
    })
}

/// `Λ(i, j)`: `[2n^2]` when `i ≠ j`, and `Γ(i)` when `i = j`.
pub fn lambda_factor(i: u32, j: u32, n: u32) -> Result<TwoFactor> {
    let gi = gamma_factor(i, n)?.graph;
    if i == j {
        return Ok(TwoFactor {
            graph: gi,
            cycle_type: CycleType::uniform(n, 4),
        });
    }
    let gj = gamma_factor(j, n)?.graph;
    let g = boolean_sum(&boolean_sum(&gi, &f_slice(&gi, n))?, &f_slice(&gj, n))?;
    Ok(TwoFactor {
        graph: g,
        cycle_type: CycleType::uniform(2 * n, 2),
    })
}

/// End height of each start height for `λ_{i,j}`: the body gadget
/// `γ_{0,i}` whose first slice is replaced by that of `γ_{0,j}`.
pub fn height_table(i: u32, j: u32) -> [u32; 4] {
    let step = |g: u32, c: usize, h: u32| -> u32 {
        (0..4)
            .map(|s| gadget_path(0, g, s))
            .find(|p| p[c] == h)
            .expect("each column is a permutation of heights")[c + 1]
    };
    let mut out = [0; 4];
    for (h, slot) in out.iter_mut().enumerate() {
        let mut cur = step(j, 0, h as u32);
        cur = step(i, 1, cur);
        *slot = step(i, 2, cur);
    }
    out
}

/// Permutation of `{0..3}` with `4 − s` fixed points.
fn swap_pattern(s: u32) -> Option<[u32; 4]> {
    match s {
        0 => Some([0, 1, 2, 3]),
        2 => Some([1, 0, 2, 3]),
        3 => Some([1, 2, 0, 3]),
        4 => Some([1, 0, 3, 2]),
        _ => None,
    }
}

/// `C→_(4:n)` into `s` `C→_{2n}`-factors (F1) and `4 − s` `C→_n`-factors
/// (F2), for `s ∈ {0, 2, 3, 4}`.
pub fn decompose_c4n(n: u32, s: u32) -> Result<DecompositionCertificate> {
    check_n(n)?;
    let pi = swap_pattern(s)
        .ok_or_else(|| ConstructError::excluded("s", s, "s must be one of 0, 2, 3, 4"))?;
    let mut cert = DecompositionCertificate::new(HostSpec::cyclic(4, n, true), "decompose_c4n")
        .with_param("n", n)
        .with_param("s", s);
    for j in 0..4 {
        let f = lambda_factor(j, pi[j as usize], n)?;
        let role = if pi[j as usize] == j { ROLE_R } else { ROLE_S };
        cert.push(role, f.cycle_type, f.graph);
    }
    Ok(cert.seal())
}

pub fn c4n_admissible(s: u32) -> bool {
    swap_pattern(s).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{boolean_sum_all, cycle_structure, make_directed_cyclic};

    #[test]
    fn gadget_transcription_partitions_slices() {
        for a in 0..3u32 {
            let cols = 4 + a as usize;
            for c in 0..cols - 1 {
                let mut used = [[0u32; 4]; 4];
                for j in 0..4 {
                    let mut starts = [false; 4];
                    for h in 0..4 {
                        let p = gadget_path(a, j, h);
                        assert_eq!(p.len(), cols);
                        assert_eq!(p[0], h);
                        assert_eq!(p[cols - 1], h);
                        used[p[c] as usize][p[c + 1] as usize] += 1;
                        assert!(!starts[p[c] as usize]);
                        starts[p[c] as usize] = true;
                    }
                }
                assert!(used.iter().flatten().all(|&u| u == 1), "a={a} column {c}");
            }
        }
    }

    #[test]
    fn placements() {
        let g = gamma_placed(0, 0, Placement::Body(0), 7).unwrap();
        let mut parts: Vec<u32> = g
            .vertex_arcs()
            .flat_map(|(u, v)| [u.part, v.part])
            .collect();
        parts.sort_unstable();
        parts.dedup();
        assert_eq!(parts, vec![0, 1, 2, 6]);
        let tail = gamma_placed(1, 0, Placement::Tail, 7).unwrap();
        let mut parts: Vec<u32> = tail
            .vertex_arcs()
            .flat_map(|(u, v)| [u.part, v.part])
            .collect();
        parts.sort_unstable();
        parts.dedup();
        assert_eq!(parts, vec![2, 3, 4, 5, 6]);
        assert!(gamma_placed(0, 0, Placement::Body(1), 7).is_err());
        assert!(gamma_placed(0, 0, Placement::Tail, 7).is_err());
    }

    #[test]
    fn gamma_factors_partition() {
        for n in 3..=14 {
            let gs: Vec<_> = (0..4).map(|j| gamma_factor(j, n).unwrap().graph).collect();
            for g in &gs {
                assert_eq!(
                    cycle_structure(g).unwrap(),
                    CycleType::uniform(n, 4),
                    "n={n}"
                );
            }
            let host = make_directed_cyclic(4, n);
            assert_eq!(boolean_sum_all(&host, &gs).unwrap(), host);
        }
    }

    #[test]
    fn height_tables_frozen() {
        let expected = [
            [[0, 1, 2, 3], [3, 2, 1, 0], [1, 0, 3, 2], [2, 3, 0, 1]],
            [[3, 2, 1, 0], [0, 1, 2, 3], [2, 3, 0, 1], [1, 0, 3, 2]],
            [[1, 0, 3, 2], [2, 3, 0, 1], [0, 1, 2, 3], [3, 2, 1, 0]],
            [[2, 3, 0, 1], [1, 0, 3, 2], [3, 2, 1, 0], [0, 1, 2, 3]],
        ];
        for i in 0..4 {
            for j in 0..4 {
                let t = height_table(i, j);
                assert_eq!(t, expected[i as usize][j as usize], "i={i} j={j}");
                for h in 0..4 {
                    assert_eq!(t[t[h] as usize] as usize, h);
                    assert_eq!(t[h] as usize == h, i == j);
                }
            }
        }
    }

    #[test]
    fn lambda_types() {
        for n in 3..=13 {
            for i in 0..4 {
                for j in 0..4 {
                    let f = lambda_factor(i, j, n).unwrap();
                    assert_eq!(
                        cycle_structure(&f.graph).unwrap(),
                        f.cycle_type,
                        "n={n} i={i} j={j}"
                    );
                }
            }
        }
        assert_eq!(lambda_factor(2, 2, 7).unwrap(), gamma_factor(2, 7).unwrap());
    }

    #[test]
    fn c4n_census() {
        let c = decompose_c4n(7, 2).unwrap();
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(14, 2)), 2);
        assert_eq!(c.count_of(ROLE_R, &CycleType::uniform(7, 4)), 2);
        let c = decompose_c4n(5, 4).unwrap();
        assert_eq!(c.count_of(ROLE_S, &CycleType::uniform(10, 2)), 4);
        assert!(decompose_c4n(5, 1).is_err());
    }
}

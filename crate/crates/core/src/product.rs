//! Partite product `G ⊗ H` of two graphs with the same number of parts.
//!
//! Vertex `(g, h, i)` of the product is stored as element `g * y + h` of part
//! `i`, where `y` is the part size of `H`.

use std::collections::HashMap;

use num_integer::Integer;

use crate::error::GraphError;
use crate::graph::{EquipartiteDigraph, PartiteVertex, VertexId};

/// Flattening between composite labels `(g, h)` and product elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductVertexMap {
    pub left: u32,
    pub right: u32,
}

impl ProductVertexMap {
    pub fn new(left: u32, right: u32) -> Self {
        Self { left, right }
    }

    pub fn flatten(&self, g: u32, h: u32) -> u32 {
        g * self.right + h
    }

    pub fn split(&self, element: u32) -> (u32, u32) {
        (element / self.right, element % self.right)
    }

    pub fn part_size(&self) -> u32 {
        self.left * self.right
    }
}

fn oriented(
    g: &EquipartiteDigraph,
    (u, v): (VertexId, VertexId),
) -> Vec<(PartiteVertex, PartiteVertex)> {
    let (a, b) = (g.vertex(u), g.vertex(v));
    if g.is_directed() {
        vec![(a, b)]
    } else if a.part == b.part {
        vec![(a, b), (b, a)]
    } else if a.part < b.part {
        vec![(a, b)]
    } else {
        vec![(b, a)]
    }
}

/// `G ⊗ H`. Undirected edges between distinct parts are matched after
/// orienting them from the lower part to the higher one.
pub fn partite_product(
    g: &EquipartiteDigraph,
    h: &EquipartiteDigraph,
) -> Result<EquipartiteDigraph, GraphError> {
    if g.parts() != h.parts() {
        return Err(GraphError::PartCountMismatch(g.parts(), h.parts()));
    }
    if g.is_directed() != h.is_directed() {
        return Err(GraphError::UniverseMismatch {
            left: (g.part_size(), g.parts(), g.is_directed()),
            right: (h.part_size(), h.parts(), h.is_directed()),
        });
    }
    let map = ProductVertexMap::new(g.part_size(), h.part_size());
    let mut buckets: HashMap<(u32, u32), Vec<(u32, u32)>> = HashMap::new();
    for &arc in h.arcs() {
        for (a, b) in oriented(h, arc) {
            buckets
                .entry((a.part, b.part))
                .or_default()
                .push((a.element, b.element));
        }
    }
    let ps = map.part_size();
    let mut out = Vec::new();
    for &arc in g.arcs() {
        for (a, b) in oriented(g, arc) {
            if let Some(list) = buckets.get(&(a.part, b.part)) {
                for &(h1, h2) in list {
                    let u = a.part * ps + map.flatten(a.element, h1);
                    let v = b.part * ps + map.flatten(b.element, h2);
                    out.push((u, v));
                }
            }
        }
    }
    if !g.is_directed() {
        // same-part edges are produced from both orientations
        for e in out.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        out.sort_unstable();
        out.dedup();
    }
    EquipartiteDigraph::from_ids(ps, g.parts(), g.is_directed(), out)
}

/// Components of the product of two directed cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleProduct {
    /// Lengths of the directed cycles, sorted.
    pub cycle_lengths: Vec<u32>,
    /// Vertices of the product with no arcs.
    pub isolated: u32,
}

fn single_cycle_length(c: &EquipartiteDigraph) -> Result<u32, GraphError> {
    if !c.is_directed() {
        return Err(GraphError::NotACycle("undirected input".into()));
    }
    let n = c.vertex_count() as usize;
    let mut succ = vec![u32::MAX; n];
    let mut indeg = vec![0u32; n];
    for &(u, v) in c.arcs() {
        if succ[u as usize] != u32::MAX {
            return Err(GraphError::NotACycle(format!(
                "out-degree above 1 at {}",
                c.vertex(u)
            )));
        }
        succ[u as usize] = v;
        indeg[v as usize] += 1;
    }
    let mut start = None;
    for w in 0..n {
        let out = (succ[w] != u32::MAX) as u32;
        if indeg[w] != out {
            return Err(GraphError::NotACycle(format!(
                "unbalanced degree at {}",
                c.vertex(w as u32)
            )));
        }
        if out == 1 && start.is_none() {
            start = Some(w);
        }
    }
    let start = start.ok_or_else(|| GraphError::NotACycle("no arcs".into()))?;
    let mut len = 0;
    let mut w = start;
    loop {
        len += 1;
        w = succ[w] as usize;
        if w == start {
            break;
        }
    }
    if len as usize != c.arc_count() {
        return Err(GraphError::NotACycle("more than one cycle".into()));
    }
    Ok(len)
}

/// Walks `C ⊗ C′` for single directed cycles `C`, `C′` (other vertices
/// isolated) and reports its cycles.
pub fn product_of_cycles(
    c: &EquipartiteDigraph,
    c2: &EquipartiteDigraph,
) -> Result<CycleProduct, GraphError> {
    single_cycle_length(c)?;
    single_cycle_length(c2)?;
    let p = partite_product(c, c2)?;
    let n = p.vertex_count() as usize;
    let mut succ = vec![u32::MAX; n];
    for &(u, v) in p.arcs() {
        succ[u as usize] = v;
    }
    let mut seen = vec![false; n];
    let mut lengths = Vec::new();
    let mut isolated = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        if succ[s] == u32::MAX {
            isolated += 1;
            seen[s] = true;
            continue;
        }
        let mut len = 0;
        let mut w = s;
        while !seen[w] {
            seen[w] = true;
            len += 1;
            w = succ[w] as usize;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    Ok(CycleProduct {
        cycle_lengths: lengths,
        isolated,
    })
}

/// Closed form for [`product_of_cycles`]: `gcd(n,m)/k` cycles of length
/// `nm/gcd(n,m)` and `xyk − nm/k` isolated vertices.
pub fn predicted_cycle_product(n: u32, m: u32, k: u32, x: u32, y: u32) -> CycleProduct {
    let g = n.gcd(&m);
    CycleProduct {
        cycle_lengths: vec![n / g * m; (g / k) as usize],
        isolated: x * y * k - n * m / k,
    }
}

//! Equipartite (di)graphs on a grid of `parts × part_size` vertices.
//!
//! A vertex is a pair `(element, part)`. Internally it is stored as the flat
//! id `part * part_size + element`, and arc sets are kept sorted so two graphs
//! over the same vertex universe can be compared, merged and serialized
//! deterministically. Undirected edges are stored with the smaller id first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Flat vertex index, `part * part_size + element`.
pub type VertexId = u32;

/// A vertex `(g, i)`: element `g` of part `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartiteVertex {
    pub element: u32,
    pub part: u32,
}

impl PartiteVertex {
    pub const fn new(element: u32, part: u32) -> Self {
        Self { element, part }
    }
}

impl fmt::Display for PartiteVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.element, self.part)
    }
}

/// A graph whose vertex set is `Z_part_size × Z_parts`.
///
/// The arc list is sorted and free of duplicates. Hosts, gadgets and factors
/// are all values of this type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquipartiteDigraph {
    part_size: u32,
    parts: u32,
    directed: bool,
    arcs: Vec<(VertexId, VertexId)>,
}

impl EquipartiteDigraph {
    /// The graph with no arcs.
    pub fn empty(part_size: u32, parts: u32, directed: bool) -> Self {
        Self {
            part_size,
            parts,
            directed,
            arcs: Vec::new(),
        }
    }

    /// Builds a graph from `(element, part)` pairs, rejecting out-of-range
    /// vertices, loops and repeated arcs.
    pub fn from_vertex_arcs<I>(
        part_size: u32,
        parts: u32,
        directed: bool,
        arcs: I,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (PartiteVertex, PartiteVertex)>,
    {
        let mut ids = Vec::new();
        for (u, v) in arcs {
            for w in [u, v] {
                if w.element >= part_size || w.part >= parts {
                    return Err(GraphError::VertexOutOfRange {
                        element: w.element,
                        part: w.part,
                        part_size,
                        parts,
                    });
                }
            }
            ids.push((
                u.part * part_size + u.element,
                v.part * part_size + v.element,
            ));
        }
        Self::from_ids(part_size, parts, directed, ids)
    }

    /// Builds a graph from flat vertex ids.
    pub fn from_ids<I>(
        part_size: u32,
        parts: u32,
        directed: bool,
        arcs: I,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let n = part_size * parts;
        let mut list: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in arcs {
            if u >= n || v >= n {
                let bad = if u >= n { u } else { v };
                return Err(GraphError::VertexOutOfRange {
                    element: bad % part_size.max(1),
                    part: bad / part_size.max(1),
                    part_size,
                    parts,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop(vertex_of(part_size, u)));
            }
            list.push(if directed || u < v { (u, v) } else { (v, u) });
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateArc(
                vertex_of(part_size, w[0].0),
                vertex_of(part_size, w[0].1),
            ));
        }
        Ok(Self {
            part_size,
            parts,
            directed,
            arcs: list,
        })
    }

    pub fn part_size(&self) -> u32 {
        self.part_size
    }

    pub fn parts(&self) -> u32 {
        self.parts
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> u32 {
        self.part_size * self.parts
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Sorted arc list as flat ids.
    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn into_arcs(self) -> Vec<(VertexId, VertexId)> {
        self.arcs
    }

    pub fn id(&self, v: PartiteVertex) -> VertexId {
        v.part * self.part_size + v.element
    }

    pub fn vertex(&self, id: VertexId) -> PartiteVertex {
        vertex_of(self.part_size, id)
    }

    pub fn vertex_arcs(&self) -> impl Iterator<Item = (PartiteVertex, PartiteVertex)> + '_ {
        self.arcs
            .iter()
            .map(move |&(u, v)| (self.vertex(u), self.vertex(v)))
    }

    pub fn contains(&self, u: PartiteVertex, v: PartiteVertex) -> bool {
        let (a, b) = (self.id(u), self.id(v));
        let key = if self.directed || a < b {
            (a, b)
        } else {
            (b, a)
        };
        self.arcs.binary_search(&key).is_ok()
    }

    /// True when both graphs live on the same vertex grid with the same
    /// directedness.
    pub fn same_universe(&self, other: &Self) -> bool {
        self.part_size == other.part_size
            && self.parts == other.parts
            && self.directed == other.directed
    }

    fn check_universe(&self, other: &Self) -> Result<(), GraphError> {
        if self.same_universe(other) {
            Ok(())
        } else {
            Err(GraphError::UniverseMismatch {
                left: (self.part_size, self.parts, self.directed),
                right: (other.part_size, other.parts, other.directed),
            })
        }
    }

    /// True when every arc of `self` is an arc of `other`.
    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.same_universe(other)
            && self
                .arcs
                .iter()
                .all(|a| other.arcs.binary_search(a).is_ok())
    }

    /// Arcs whose tail lies in part `from` and head in part `to`.
    pub fn arcs_between(
        &self,
        from: u32,
        to: u32,
    ) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let ps = self.part_size;
        self.arcs.iter().copied().filter(move |&(u, v)| {
            let (pu, pv) = (u / ps, v / ps);
            (pu == from && pv == to) || (!self.directed && pu == to && pv == from)
        })
    }

    /// Keeps only the arcs accepted by `keep`.
    pub fn filter_arcs<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(PartiteVertex, PartiteVertex) -> bool,
    {
        let ps = self.part_size;
        Self {
            part_size: self.part_size,
            parts: self.parts,
            directed: self.directed,
            arcs: self
                .arcs
                .iter()
                .copied()
                .filter(|&(u, v)| keep(vertex_of(ps, u), vertex_of(ps, v)))
                .collect(),
        }
    }

    /// Drops arc directions. Fails if two antiparallel arcs would merge.
    pub fn underlying_undirected(&self) -> Result<Self, GraphError> {
        if !self.directed {
            return Ok(self.clone());
        }
        Self::from_ids(self.part_size, self.parts, false, self.arcs.iter().copied()).map_err(|e| {
            match e {
                GraphError::DuplicateArc(u, v) => GraphError::AntiparallelCollapse(u, v),
                other => other,
            }
        })
    }
}

pub(crate) fn vertex_of(part_size: u32, id: VertexId) -> PartiteVertex {
    PartiteVertex {
        element: id % part_size,
        part: id / part_size,
    }
}

/// `K_(x:m)`: parts of size `x`, every edge between distinct parts.
pub fn make_complete_equipartite(part_size: u32, parts: u32) -> EquipartiteDigraph {
    let mut arcs =
        Vec::with_capacity((part_size * part_size * parts * parts.saturating_sub(1) / 2) as usize);
    for p in 0..parts {
        for q in p + 1..parts {
            for g in 0..part_size {
                for h in 0..part_size {
                    arcs.push((p * part_size + g, q * part_size + h));
                }
            }
        }
    }
    arcs.sort_unstable();
    EquipartiteDigraph {
        part_size,
        parts,
        directed: false,
        arcs,
    }
}

/// `C→_(x:k)`: all arcs `((g,i),(h,i+1 mod k))`.
pub fn make_directed_cyclic(part_size: u32, parts: u32) -> EquipartiteDigraph {
    let mut arcs = Vec::with_capacity((part_size * part_size * parts) as usize);
    for p in 0..parts {
        let q = (p + 1) % parts;
        for g in 0..part_size {
            for h in 0..part_size {
                arcs.push((p * part_size + g, q * part_size + h));
            }
        }
    }
    arcs.sort_unstable();
    EquipartiteDigraph {
        part_size,
        parts,
        directed: true,
        arcs,
    }
}

/// `C_(x:k)`, the undirected complete cyclic multipartite graph.
pub fn make_cyclic(part_size: u32, parts: u32) -> EquipartiteDigraph {
    make_directed_cyclic(part_size, parts)
        .underlying_undirected()
        .expect("cyclic host with at least three parts has no antiparallel arcs")
}

/// The complete graph on all `part_size * parts` grid vertices.
pub fn make_complete(part_size: u32, parts: u32) -> EquipartiteDigraph {
    let n = part_size * parts;
    let mut arcs = Vec::with_capacity((n * n.saturating_sub(1) / 2) as usize);
    for u in 0..n {
        for v in u + 1..n {
            arcs.push((u, v));
        }
    }
    EquipartiteDigraph {
        part_size,
        parts,
        directed: false,
        arcs,
    }
}

/// `parts` disjoint copies of `K_part_size`, one inside each part.
pub fn make_disjoint_complete(part_size: u32, parts: u32) -> EquipartiteDigraph {
    let mut arcs = Vec::new();
    for p in 0..parts {
        for g in 0..part_size {
            for h in g + 1..part_size {
                arcs.push((p * part_size + g, p * part_size + h));
            }
        }
    }
    EquipartiteDigraph {
        part_size,
        parts,
        directed: false,
        arcs,
    }
}

/// `G ⊕ H`: symmetric difference of arc sets.
pub fn boolean_sum(
    g: &EquipartiteDigraph,
    h: &EquipartiteDigraph,
) -> Result<EquipartiteDigraph, GraphError> {
    g.check_universe(h)?;
    let (a, b) = (&g.arcs, &h.arcs);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Ok(EquipartiteDigraph {
        arcs: out,
        ..g.clone_shape()
    })
}

/// Sums many graphs on the same universe.
pub fn boolean_sum_all<'a, I>(
    shape: &EquipartiteDigraph,
    graphs: I,
) -> Result<EquipartiteDigraph, GraphError>
where
    I: IntoIterator<Item = &'a EquipartiteDigraph>,
{
    let mut acc = shape.clone_shape();
    for g in graphs {
        acc = boolean_sum(&acc, g)?;
    }
    Ok(acc)
}

impl EquipartiteDigraph {
    /// An empty graph on the same universe.
    pub fn clone_shape(&self) -> Self {
        Self::empty(self.part_size, self.parts, self.directed)
    }
}

/// Multiset of cycle lengths, kept as `length -> multiplicity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(BTreeMap<u32, u32>);

impl CycleType {
    pub fn new() -> Self {
        Self::default()
    }

    /// `[length^count]`.
    pub fn uniform(length: u32, count: u32) -> Self {
        let mut t = Self::new();
        t.add(length, count);
        t
    }

    pub fn from_lengths<I: IntoIterator<Item = u32>>(lengths: I) -> Self {
        let mut t = Self::new();
        for l in lengths {
            t.add(l, 1);
        }
        t
    }

    pub fn add(&mut self, length: u32, count: u32) {
        if count > 0 {
            *self.0.entry(length).or_insert(0) += count;
        }
    }

    /// Cycle-type of the disjoint union of two factors.
    pub fn merged(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for (&l, &c) in &other.0 {
            t.add(l, c);
        }
        t
    }

    pub fn total_vertices(&self) -> u64 {
        self.0.iter().map(|(&l, &c)| l as u64 * c as u64).sum()
    }

    pub fn cycle_count(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().map(|(&l, &c)| (l, c))
    }

    /// Length of the only cycle size present, if the type is uniform.
    pub fn uniform_length(&self) -> Option<u32> {
        if self.0.len() == 1 {
            self.0.keys().next().copied()
        } else {
            None
        }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (l, c)) in self.entries().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if c == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{c}")?;
            }
        }
        write!(f, "]")
    }
}

impl FromStr for CycleType {
    type Err = GraphError;

    /// Parses `[3^5,5^2,11]`; brackets are optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadCycleType(s.to_string());
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut t = CycleType::new();
        for item in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (l, c) = match item.split_once('^') {
                Some((l, c)) => (
                    l.trim().parse().map_err(|_| bad())?,
                    c.trim().parse().map_err(|_| bad())?,
                ),
                None => (item.parse().map_err(|_| bad())?, 1),
            };
            if l == 0 || c == 0 {
                return Err(bad());
            }
            t.add(l, c);
        }
        if t.0.is_empty() {
            return Err(bad());
        }
        Ok(t)
    }
}

impl Serialize for CycleType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[u32; 2]> = self.entries().map(|(l, c)| [l, c]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycleType {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs: Vec<[u32; 2]> = Vec::deserialize(deserializer)?;
        let mut t = CycleType::new();
        for [l, c] in pairs {
            if l == 0 || c == 0 {
                return Err(serde::de::Error::custom(
                    "cycle lengths and multiplicities must be positive",
                ));
            }
            t.add(l, c);
        }
        Ok(t)
    }
}

/// A spanning 2-regular subgraph together with its cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFactor {
    pub graph: EquipartiteDigraph,
    pub cycle_type: CycleType,
}

impl TwoFactor {
    /// Analyzes `graph` as a factor of the full grid, without a host check.
    pub fn from_graph(graph: EquipartiteDigraph) -> Result<Self, GraphError> {
        let cycle_type = cycle_structure(&graph)?;
        Ok(Self { graph, cycle_type })
    }
}

/// Analyzes `arcs` as a 2-factor of `host`.
pub fn analyze_factor(
    host: &EquipartiteDigraph,
    arcs: &EquipartiteDigraph,
) -> Result<TwoFactor, GraphError> {
    host.check_universe(arcs)?;
    if let Some(&(u, v)) = arcs
        .arcs
        .iter()
        .find(|a| host.arcs.binary_search(a).is_err())
    {
        return Err(GraphError::ForeignArc(arcs.vertex(u), arcs.vertex(v)));
    }
    TwoFactor::from_graph(arcs.clone())
}

/// Cycle type of a graph in which every vertex has in- and out-degree 1
/// (directed) or degree 2 (undirected).
pub fn cycle_structure(g: &EquipartiteDigraph) -> Result<CycleType, GraphError> {
    let n = g.vertex_count() as usize;
    if g.directed {
        let mut succ = vec![u32::MAX; n];
        let mut indeg = vec![0u32; n];
        let mut outdeg = vec![0u32; n];
        for &(u, v) in &g.arcs {
            succ[u as usize] = v;
            outdeg[u as usize] += 1;
            indeg[v as usize] += 1;
        }
        for w in 0..n {
            if indeg[w] == 0 && outdeg[w] == 0 {
                return Err(GraphError::NotSpanning(g.vertex(w as u32)));
            }
            if indeg[w] != 1 || outdeg[w] != 1 {
                return Err(GraphError::DegreeViolation {
                    vertex: g.vertex(w as u32),
                    in_degree: indeg[w],
                    out_degree: outdeg[w],
                });
            }
        }
        let mut seen = vec![false; n];
        let mut t = CycleType::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut w = start;
            while !seen[w] {
                seen[w] = true;
                len += 1;
                w = succ[w] as usize;
            }
            t.add(len, 1);
        }
        Ok(t)
    } else {
        let mut adj = vec![[u32::MAX; 2]; n];
        let mut deg = vec![0u32; n];
        for &(u, v) in &g.arcs {
            for (a, b) in [(u, v), (v, u)] {
                let d = deg[a as usize];
                if d < 2 {
                    adj[a as usize][d as usize] = b;
                }
                deg[a as usize] += 1;
            }
        }
        for (w, &dw) in deg.iter().enumerate().take(n) {
            if dw == 0 {
                return Err(GraphError::NotSpanning(g.vertex(w as u32)));
            }
            if dw != 2 {
                return Err(GraphError::DegreeViolation {
                    vertex: g.vertex(w as u32),
                    in_degree: dw,
                    out_degree: dw,
                });
            }
        }
        let mut seen = vec![false; n];
        let mut t = CycleType::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 1;
            seen[start] = true;
            let mut prev = start;
            let mut cur = adj[start][0] as usize;
            while cur != start {
                seen[cur] = true;
                len += 1;
                let next = if adj[cur][0] as usize == prev {
                    adj[cur][1]
                } else {
                    adj[cur][0]
                } as usize;
                prev = cur;
                cur = next;
            }
            t.add(len, 1);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_equipartite_edge_counts() {
        assert_eq!(make_complete_equipartite(1, 3).arc_count(), 3);
        // 3 part pairs, 9 edges each
        assert_eq!(make_complete_equipartite(3, 3).arc_count(), 27);
        assert_eq!(make_complete_equipartite(3, 3).vertex_count(), 9);
        assert_eq!(make_complete_equipartite(4, 3).arc_count(), 48);
    }

    #[test]
    fn directed_cyclic_counts() {
        let c = make_directed_cyclic(1, 5);
        assert_eq!(c.arc_count(), 5);
        assert_eq!(cycle_structure(&c).unwrap(), CycleType::uniform(5, 1));
        assert_eq!(make_directed_cyclic(3, 3).arc_count(), 27);
        assert_eq!(make_directed_cyclic(5, 7).arc_count(), 175);
        assert_eq!(make_cyclic(3, 3), make_complete_equipartite(3, 3));
    }

    #[test]
    fn sum_is_symmetric_difference() {
        let g = make_directed_cyclic(2, 3);
        let e = g.clone_shape();
        assert!(boolean_sum(&g, &g).unwrap().is_empty());
        assert_eq!(boolean_sum(&g, &e).unwrap(), g);
        let other = make_directed_cyclic(2, 4);
        assert!(matches!(
            boolean_sum(&g, &other),
            Err(GraphError::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn analyze_rejects_missing_degree() {
        let host = make_directed_cyclic(1, 5);
        let partial = host.filter_arcs(|u, _| u.part != 0);
        assert!(matches!(
            analyze_factor(&host, &partial),
            Err(GraphError::DegreeViolation { .. })
        ));
        let empty = host.clone_shape();
        assert!(matches!(
            analyze_factor(&host, &empty),
            Err(GraphError::NotSpanning(_))
        ));
    }

    #[test]
    fn duplicate_arcs_rejected() {
        let r = EquipartiteDigraph::from_ids(2, 2, false, [(0, 2), (2, 0)]);
        assert!(matches!(r, Err(GraphError::DuplicateArc(..))));
    }

    #[test]
    fn cycle_type_text_roundtrip() {
        let t: CycleType = "[3^2,3^3,5^2,11,13]".parse().unwrap();
        assert_eq!(t.to_string(), "[3^5,5^2,11,13]");
        assert_eq!(t.total_vertices(), 49);
        assert!("[0]".parse::<CycleType>().is_err());
    }

    #[test]
    fn undirected_collapse_detected() {
        let g = EquipartiteDigraph::from_ids(1, 2, true, [(0, 1), (1, 0)]).unwrap();
        assert!(matches!(
            g.underlying_undirected(),
            Err(GraphError::AntiparallelCollapse(..))
        ));
    }
}

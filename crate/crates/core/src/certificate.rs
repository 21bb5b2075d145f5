//! Decomposition certificates and their JSON file format.
//!
//! A certificate names a host graph, records which construction produced it
//! and lists role-labelled factors whose arc sets are meant to partition the
//! host. Factor roles are `F1` (the factors counted by `s`), `F2` (counted by
//! `r`) and `F` (uniform factorizations with a single role).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::GraphError;
use crate::graph::{
    make_complete, make_complete_equipartite, make_cyclic, make_directed_cyclic,
    make_disjoint_complete, CycleType, EquipartiteDigraph, PartiteVertex,
};

pub const FORMAT_VERSION: u32 = 1;

pub const ROLE_S: &str = "F1";
pub const ROLE_R: &str = "F2";
pub const ROLE_UNIFORM: &str = "F";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HostKind {
    /// Complete graph on all grid vertices.
    Complete,
    /// Complete equipartite graph `K_(x:m)`.
    Equipartite,
    /// Complete cyclic multipartite graph `C_(x:k)` or `C→_(x:k)`.
    Cyclic,
    /// Disjoint union of complete graphs, one per part.
    Union,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HostSpec {
    pub kind: HostKind,
    pub part_size: u32,
    pub parts: u32,
    pub directed: bool,
}

impl HostSpec {
    pub fn complete(v: u32) -> Self {
        Self {
            kind: HostKind::Complete,
            part_size: v,
            parts: 1,
            directed: false,
        }
    }

    pub fn equipartite(part_size: u32, parts: u32) -> Self {
        Self {
            kind: HostKind::Equipartite,
            part_size,
            parts,
            directed: false,
        }
    }

    pub fn cyclic(part_size: u32, parts: u32, directed: bool) -> Self {
        Self {
            kind: HostKind::Cyclic,
            part_size,
            parts,
            directed,
        }
    }

    pub fn union(part_size: u32, parts: u32) -> Self {
        Self {
            kind: HostKind::Union,
            part_size,
            parts,
            directed: false,
        }
    }

    pub fn vertex_count(&self) -> u64 {
        self.part_size as u64 * self.parts as u64
    }

    /// Arc or edge set of the host.
    pub fn graph(&self) -> EquipartiteDigraph {
        match (self.kind, self.directed) {
            (HostKind::Cyclic, true) => make_directed_cyclic(self.part_size, self.parts),
            (HostKind::Cyclic, false) => make_cyclic(self.part_size, self.parts),
            (HostKind::Complete, _) => make_complete(self.part_size, self.parts),
            (HostKind::Equipartite, _) => make_complete_equipartite(self.part_size, self.parts),
            (HostKind::Union, _) => make_disjoint_complete(self.part_size, self.parts),
        }
    }

    /// Number of factors in any 2-factorization of this host.
    pub fn expected_factor_count(&self) -> Option<u64> {
        let v = self.vertex_count();
        let x = self.part_size as u64;
        let degree = match self.kind {
            HostKind::Cyclic if self.directed => return Some(x),
            HostKind::Cyclic => 2 * x,
            HostKind::Complete => v - 1,
            HostKind::Equipartite => v - x,
            HostKind::Union => x - 1,
        };
        if degree % 2 == 0 {
            Some(degree / 2)
        } else {
            None
        }
    }

    pub fn describe(&self) -> String {
        let (x, k) = (self.part_size, self.parts);
        match self.kind {
            HostKind::Complete => format!("K_{}", x * k),
            HostKind::Equipartite => format!("K_({x}:{k})"),
            HostKind::Cyclic if self.directed => format!("C->_({x}:{k})"),
            HostKind::Cyclic => format!("C_({x}:{k})"),
            HostKind::Union => format!("{k}K_{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub role: String,
    pub cycle_type: CycleType,
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub lemma: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default)]
    pub census: Vec<CensusEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub role: String,
    pub declared_type: CycleType,
    pub graph: EquipartiteDigraph,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionCertificate {
    pub host: HostSpec,
    pub construction: Construction,
    pub factors: Vec<Factor>,
}

impl DecompositionCertificate {
    pub fn new(host: HostSpec, lemma: impl Into<String>) -> Self {
        Self {
            host,
            construction: Construction {
                lemma: lemma.into(),
                parameters: BTreeMap::new(),
                census: Vec::new(),
            },
            factors: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.construction
            .parameters
            .insert(key.to_string(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.construction
            .parameters
            .insert(key.to_string(), value.into());
    }

    pub fn push(&mut self, role: &str, declared_type: CycleType, graph: EquipartiteDigraph) {
        self.factors.push(Factor {
            role: role.to_string(),
            declared_type,
            graph,
        });
    }

    /// Recomputes the header census from the factor list.
    pub fn seal(mut self) -> Self {
        self.construction.census =
            census_of(self.factors.iter().map(|f| (&f.role, &f.declared_type)));
        self
    }

    /// Drops arc directions on the host and every factor. A decomposition of
    /// `C→_(x:k)` becomes one of `C_(x:k)` with the same cycle types.
    pub fn undirected(&self) -> Result<Self, GraphError> {
        let mut out = self.clone();
        out.host.directed = false;
        for f in &mut out.factors {
            f.graph = f.graph.underlying_undirected()?;
        }
        Ok(out)
    }

    pub fn role_count(&self, role: &str) -> usize {
        self.factors.iter().filter(|f| f.role == role).count()
    }

    /// Number of factors with the given role and declared type.
    pub fn count_of(&self, role: &str, t: &CycleType) -> usize {
        self.factors
            .iter()
            .filter(|f| f.role == role && &f.declared_type == t)
            .count()
    }

    pub fn census_string(&self) -> String {
        census_of(self.factors.iter().map(|f| (&f.role, &f.declared_type)))
            .iter()
            .map(|c| format!("{}x{} {}", c.count, c.cycle_type, c.role))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_file(&self, compact: bool) -> CertificateFile {
        CertificateFile {
            header: Header {
                format_version: FORMAT_VERSION,
                host: self.host,
                construction: self.construction.clone(),
            },
            factors: self
                .factors
                .iter()
                .map(|f| {
                    let arcs: Vec<[u32; 4]> = f
                        .graph
                        .vertex_arcs()
                        .map(|(u, v)| [u.element, u.part, v.element, v.part])
                        .collect();
                    let compact_form = if compact { compact_of(&f.graph) } else { None };
                    match compact_form {
                        Some(c) => FactorRecord {
                            role: f.role.clone(),
                            declared_type: f.declared_type.clone(),
                            arcs: None,
                            compact: Some(c),
                        },
                        None => FactorRecord {
                            role: f.role.clone(),
                            declared_type: f.declared_type.clone(),
                            arcs: Some(arcs),
                            compact: None,
                        },
                    }
                })
                .collect(),
        }
    }

    pub fn to_json(&self, compact: bool) -> String {
        serde_json::to_string_pretty(&self.to_file(compact)).expect("certificate serializes")
    }
}

pub(crate) fn census_of<'a, I>(items: I) -> Vec<CensusEntry>
where
    I: IntoIterator<Item = (&'a String, &'a CycleType)>,
{
    let mut map: BTreeMap<(String, CycleType), u32> = BTreeMap::new();
    for (r, t) in items {
        *map.entry((r.clone(), t.clone())).or_insert(0) += 1;
    }
    map.into_iter()
        .map(|((role, cycle_type), count)| CensusEntry {
            role,
            cycle_type,
            count,
        })
        .collect()
}

/// On-disk header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format_version: u32,
    pub host: HostSpec,
    pub construction: Construction,
}

/// Arcs developed by adding every `g ∈ Z_develop_modulo` to both endpoint
/// elements of each base arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactArcs {
    pub base_arcs: Vec<[u32; 4]>,
    pub develop_modulo: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub role: String,
    pub declared_type: CycleType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<[u32; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compact: Option<CompactArcs>,
}

impl FactorRecord {
    /// Explicit arc list, developing the compact form if present. Arcs are
    /// returned exactly as written, including out-of-range or repeated ones.
    pub fn explicit_arcs(&self) -> Vec<[u32; 4]> {
        let mut out = self.arcs.clone().unwrap_or_default();
        if let Some(c) = &self.compact {
            let m = c.develop_modulo.max(1);
            for g in 0..m {
                for a in &c.base_arcs {
                    out.push([(a[0] + g) % m, a[1], (a[2] + g) % m, a[3]]);
                }
            }
        }
        out
    }
}

/// A certificate exactly as stored on disk. The verifier works on this form
/// so malformed content is reported rather than rejected at load time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub header: Header,
    pub factors: Vec<FactorRecord>,
}

impl CertificateFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Builds the in-memory certificate. Fails on invalid vertices or arcs
    /// repeated inside one factor.
    pub fn into_certificate(self) -> Result<DecompositionCertificate, GraphError> {
        let host = self.header.host;
        let mut factors = Vec::with_capacity(self.factors.len());
        for f in self.factors {
            let arcs = f.explicit_arcs();
            let graph = EquipartiteDigraph::from_vertex_arcs(
                host.part_size,
                host.parts,
                host.directed,
                arcs.iter().map(|a| {
                    (
                        PartiteVertex::new(a[0], a[1]),
                        PartiteVertex::new(a[2], a[3]),
                    )
                }),
            )?;
            factors.push(Factor {
                role: f.role,
                declared_type: f.declared_type,
                graph,
            });
        }
        Ok(DecompositionCertificate {
            host,
            construction: self.header.construction,
            factors,
        })
    }
}

/// Base arcs of a factor invariant under `g ↦ g+1` on every part, provided
/// all arcs join distinct parts.
fn compact_of(g: &EquipartiteDigraph) -> Option<CompactArcs> {
    let x = g.part_size();
    let mut base = Vec::new();
    for (u, v) in g.vertex_arcs() {
        if u.part == v.part {
            return None;
        }
        let shifted = (
            PartiteVertex::new((u.element + 1) % x, u.part),
            PartiteVertex::new((v.element + 1) % x, v.part),
        );
        if !g.contains(shifted.0, shifted.1) {
            return None;
        }
        if u.element == 0 {
            base.push([u.element, u.part, v.element, v.part]);
        }
    }
    Some(CompactArcs {
        base_arcs: base,
        develop_modulo: x,
    })
}

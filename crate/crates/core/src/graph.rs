//! Weighted dual graphs, cycles on them, and the vectors derived directly
//! from the intersection form.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use thiserror::Error;

use crate::document::GraphDocument;
use crate::linalg::{ExactMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    DuplicateVertex { id: String },
    UnknownVertex { edge: usize, id: String },
    Loop { edge: usize, id: String },
    NegativeGenus { id: String, genus: i64 },
    NonNegativeSelfIntersection { id: String, value: i64 },
    Disconnected { unreachable: Vec<String> },
    NotNegativeDefinite,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::DuplicateVertex { id } => write!(f, "vertex `{id}` declared twice"),
            Violation::UnknownVertex { edge, id } => write!(f, "edge {edge} references unknown vertex `{id}`"),
            Violation::Loop { edge, id } => write!(f, "edge {edge} is a loop at `{id}`"),
            Violation::NegativeGenus { id, genus } => write!(f, "vertex `{id}` has genus {genus} < 0"),
            Violation::NonNegativeSelfIntersection { id, value } => {
                write!(f, "vertex `{id}` has self-intersection {value} > -1")
            }
            Violation::Disconnected { unreachable } => {
                write!(f, "graph is disconnected; unreachable from the first vertex: {}", unreachable.join(", "))
            }
            Violation::NotNegativeDefinite => write!(f, "intersection matrix is not negative definite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vector has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vector entry at `{id}` is {value}; entries must be nonnegative")]
    NegativeEntry { id: String, value: i64 },
    #[error("L not realizable on this graph: {reason}")]
    NotRealizable { reason: String },
    #[error("no edge between `{0}` and `{1}`")]
    NoSuchEdge(String, String),
    #[error("vertex `{0}` cannot be contracted: {1}")]
    NotContractible(String, &'static str),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub genus: i64,
    pub self_intersection: i64,
}

impl Vertex {
    pub fn new(id: impl Into<String>, genus: i64, self_intersection: i64) -> Self {
        Self { id: id.into(), genus, self_intersection }
    }
}

/// A connected loopless weighted graph with negative definite intersection
/// matrix. Vertex order is the construction order and is used for every
/// output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertices: Vec<Vertex>,
    /// One entry per edge, multi-edges repeated.
    edges: Vec<(usize, usize)>,
    /// Per vertex: (neighbor, multiplicity), sorted by neighbor.
    neighbors: Vec<Vec<(usize, i64)>>,
    index: HashMap<String, usize>,
}

impl WeightedGraph {
    pub fn new<S: AsRef<str>>(vertices: Vec<Vertex>, edges: &[(S, S)]) -> Result<Self, GraphError> {
        let mut violations = Vec::new();
        if vertices.is_empty() {
            violations.push(Violation::NoVertices);
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                violations.push(Violation::DuplicateVertex { id: v.id.clone() });
            }
            if v.genus < 0 {
                violations.push(Violation::NegativeGenus { id: v.id.clone(), genus: v.genus });
            }
            if v.self_intersection > -1 {
                violations.push(Violation::NonNegativeSelfIntersection {
                    id: v.id.clone(),
                    value: v.self_intersection,
                });
            }
        }
        let mut resolved = Vec::with_capacity(edges.len());
        for (k, (a, b)) in edges.iter().enumerate() {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ends: Vec<Option<usize>> = [a, b].iter().map(|id| index.get(*id).copied()).collect();
            for (id, end) in [a, b].iter().zip(&ends) {
                if end.is_none() {
                    violations.push(Violation::UnknownVertex { edge: k, id: (*id).to_string() });
                }
            }
            if let [Some(i), Some(j)] = ends[..] {
                if i == j {
                    violations.push(Violation::Loop { edge: k, id: a.to_string() });
                } else {
                    resolved.push((i, j));
                }
            }
        }
        if violations.iter().any(|v| matches!(v, Violation::NoVertices | Violation::DuplicateVertex { .. })) {
            return Err(GraphError::Invalid(violations));
        }

        let graph = Self::assemble(vertices, resolved, index);
        let unreachable = graph.unreachable_from_first();
        if !unreachable.is_empty() {
            violations.push(Violation::Disconnected {
                unreachable: unreachable.into_iter().map(|i| graph.vertices[i].id.clone()).collect(),
            });
        }
        if violations.is_empty() && !graph.intersection_matrix().is_negative_definite()? {
            violations.push(Violation::NotNegativeDefinite);
        }
        if violations.is_empty() {
            Ok(graph)
        } else {
            Err(GraphError::Invalid(violations))
        }
    }

    fn assemble(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>, index: HashMap<String, usize>) -> Self {
        let mut counts: Vec<HashMap<usize, i64>> = vec![HashMap::new(); vertices.len()];
        for &(i, j) in &edges {
            *counts[i].entry(j).or_default() += 1;
            *counts[j].entry(i).or_default() += 1;
        }
        let neighbors = counts
            .into_iter()
            .map(|m| {
                let mut v: Vec<(usize, i64)> = m.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        Self { vertices, edges, neighbors, index }
    }

    fn unreachable_from_first(&self) -> Vec<usize> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(w, _) in &self.neighbors[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..n).filter(|&i| !seen[i]).collect()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(|v| v.id.as_str())
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, i64)] {
        &self.neighbors[i]
    }

    pub fn edge_multiplicity(&self, i: usize, j: usize) -> i64 {
        self.neighbors[i].iter().find(|&&(w, _)| w == j).map_or(0, |&(_, m)| m)
    }

    pub fn index_of(&self, id: &str) -> Result<usize, GraphError> {
        self.index.get(id).copied().ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn valency(&self, i: usize) -> i64 {
        self.neighbors[i].iter().map(|&(_, m)| m).sum()
    }

    pub fn intersection_matrix(&self) -> ExactMatrix {
        let n = self.len();
        let mut rows = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            rows[i][i] = v.self_intersection;
            for &(j, m) in &self.neighbors[i] {
                rows[i][j] = m;
            }
        }
        ExactMatrix::from_rows(&rows).expect("square by construction")
    }

    /// `(I·z)_v` for every vertex, widened so that products cannot overflow.
    pub fn apply(&self, z: &[i64]) -> Vec<i128> {
        (0..self.len()).map(|i| self.apply_at(z, i)).collect()
    }

    pub fn apply_at(&self, z: &[i64], i: usize) -> i128 {
        let own = self.vertices[i].self_intersection as i128 * z[i] as i128;
        self.neighbors[i]
            .iter()
            .fold(own, |acc, &(j, m)| acc + m as i128 * z[j] as i128)
    }

    /// Intersection number `a · b`.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i128 {
        self.apply(b).iter().zip(a).map(|(x, &y)| x * y as i128).sum()
    }

    /// `k_v = val(v) + 2g(v) - 2`.
    pub fn canonical_k(&self) -> Cycle {
        Cycle((0..self.len()).map(|i| self.valency(i) + 2 * self.vertices[i].genus - 2).collect())
    }

    /// Solves `I·M = -L` and accepts the result only if it is a strictly
    /// positive integral cycle.
    pub fn multiplicities_from_l(&self, l: &LVector) -> Result<Cycle, GraphError> {
        self.check_len(l.len())?;
        if l.iter().all(|&x| x == 0) {
            return Err(GraphError::NotRealizable { reason: "L is the zero vector".into() });
        }
        let rhs: Vec<BigInt> = l.iter().map(|&x| BigInt::from(-x)).collect();
        let m = self.intersection_matrix().solve_exact(&rhs)?;
        let Some(values) = m.to_integers() else {
            return Err(GraphError::NotRealizable {
                reason: format!("multiplicities {m} are not integral"),
            });
        };
        if let Some(i) = values.iter().position(|&x| x <= 0) {
            return Err(GraphError::NotRealizable {
                reason: format!("multiplicity at `{}` is {}", self.vertices[i].id, values[i]),
            });
        }
        Ok(Cycle(values))
    }

    pub fn check_len(&self, got: usize) -> Result<(), GraphError> {
        if got != self.len() {
            return Err(GraphError::LengthMismatch { expected: self.len(), got });
        }
        Ok(())
    }

    /// Reads a per-vertex map into canonical order; missing ids are zero.
    pub fn vector_from_map<'a, I>(&self, entries: I) -> Result<Vec<i64>, GraphError>
    where
        I: IntoIterator<Item = (&'a String, &'a i64)>,
    {
        let mut out = vec![0; self.len()];
        for (id, &value) in entries {
            out[self.index_of(id)?] = value;
        }
        Ok(out)
    }

    fn fresh_id(&self, base: &str) -> String {
        (1..)
            .map(|k| format!("{base}.{k}"))
            .find(|id| !self.index.contains_key(id))
            .expect("unbounded search")
    }

    fn rebuild(&self, vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let named: Vec<(String, String)> = edges
            .iter()
            .map(|&(i, j)| (vertices[i].id.clone(), vertices[j].id.clone()))
            .collect();
        Self::new(vertices, &named)
    }

    /// Blows up a free point of `E_v`. The new (-1)-vertex is appended last.
    pub fn blow_up_free_point(&self, v: usize) -> Result<(Self, usize), GraphError> {
        let mut vertices = self.vertices.clone();
        vertices[v].self_intersection -= 1;
        let w = vertices.len();
        vertices.push(Vertex::new(self.fresh_id(&self.vertices[v].id), 0, -1));
        let mut edges = self.edges.clone();
        edges.push((v, w));
        Ok((self.rebuild(vertices, edges)?, w))
    }

    /// Blows up one intersection point of `E_v` and `E_u`, replacing one copy
    /// of the edge by a path through the new vertex.
    pub fn blow_up_double_point(&self, v: usize, u: usize) -> Result<(Self, usize), GraphError> {
        let pos = self
            .edges
            .iter()
            .position(|&(a, b)| (a, b) == (v, u) || (a, b) == (u, v))
            .ok_or_else(|| GraphError::NoSuchEdge(self.vertices[v].id.clone(), self.vertices[u].id.clone()))?;
        let mut vertices = self.vertices.clone();
        vertices[v].self_intersection -= 1;
        vertices[u].self_intersection -= 1;
        let w = vertices.len();
        let base = format!("{}_{}", self.vertices[v].id, self.vertices[u].id);
        vertices.push(Vertex::new(self.fresh_id(&base), 0, -1));
        let mut edges = self.edges.clone();
        edges.remove(pos);
        edges.push((v, w));
        edges.push((w, u));
        Ok((self.rebuild(vertices, edges)?, w))
    }

    /// Contracts a genus-0 (-1)-vertex of valency one. Returns the new graph
    /// and the index (in the new graph) of the neighbor it was attached to.
    pub fn contract_leaf(&self, w: usize) -> Result<(Self, usize), GraphError> {
        let vert = &self.vertices[w];
        if vert.genus != 0 || vert.self_intersection != -1 {
            return Err(GraphError::NotContractible(vert.id.clone(), "not a genus-0 (-1)-curve"));
        }
        let [(v, 1)] = self.neighbors[w][..] else {
            return Err(GraphError::NotContractible(vert.id.clone(), "valency is not one"));
        };
        let remap = |i: usize| if i > w { i - 1 } else { i };
        let mut vertices = self.vertices.clone();
        vertices[v].self_intersection += 1;
        vertices.remove(w);
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != w && b != w)
            .map(|&(a, b)| (remap(a), remap(b)))
            .collect();
        Ok((self.rebuild(vertices, edges)?, remap(v)))
    }
}

/// Builds the graph described by a parsed document. Every failed structural
/// invariant is reported.
pub fn validate_graph(doc: &GraphDocument) -> Result<WeightedGraph, GraphError> {
    let vertices = doc
        .vertices
        .iter()
        .map(|v| Vertex::new(v.id.clone(), v.genus, v.self_intersection))
        .collect();
    WeightedGraph::new(vertices, &doc.edges)
}

macro_rules! int_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub(crate) Vec<i64>);

        impl $name {
            pub fn into_inner(self) -> Vec<i64> {
                self.0
            }

            pub fn as_slice(&self) -> &[i64] {
                &self.0
            }
        }

        impl Deref for $name {
            type Target = [i64];
            fn deref(&self) -> &[i64] {
                &self.0
            }
        }

        impl Index<usize> for $name {
            type Output = i64;
            fn index(&self, i: usize) -> &i64 {
                &self.0[i]
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    };
}

int_vector!(
    /// Integer divisor `Σ d_v E_v`, one coefficient per vertex.
    Cycle
);
int_vector!(
    /// Nonnegative intersection numbers of the hyperplane section with each curve.
    LVector
);
int_vector!(
    /// Nonnegative intersection numbers of the polar curve with each curve.
    PVector
);

impl Cycle {
    pub fn new(values: Vec<i64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&x| x > 0)
    }

    pub fn le(&self, other: &Cycle) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn meet(&self, other: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub(crate) fn values_mut(&mut self) -> &mut Vec<i64> {
        &mut self.0
    }
}

fn check_nonnegative(values: &[i64], ids: Option<&WeightedGraph>) -> Result<(), GraphError> {
    match values.iter().position(|&x| x < 0) {
        Some(i) => Err(GraphError::NegativeEntry {
            id: ids.map_or_else(|| i.to_string(), |g| g.vertex(i).id.clone()),
            value: values[i],
        }),
        None => Ok(()),
    }
}

impl LVector {
    pub fn new(values: Vec<i64>) -> Result<Self, GraphError> {
        check_nonnegative(&values, None)?;
        Ok(Self(values))
    }

    pub fn for_graph(graph: &WeightedGraph, values: Vec<i64>) -> Result<Self, GraphError> {
        graph.check_len(values.len())?;
        check_nonnegative(&values, Some(graph))?;
        Ok(Self(values))
    }

    pub fn unit(n: usize, i: usize) -> Self {
        Self(Cycle::unit(n, i).0)
    }

    pub(crate) fn values_mut(&mut self) -> &mut Vec<i64> {
        &mut self.0
    }
}

impl PVector {
    pub fn new(values: Vec<i64>) -> Result<Self, GraphError> {
        check_nonnegative(&values, None)?;
        Ok(Self(values))
    }

    pub fn for_graph(graph: &WeightedGraph, values: Vec<i64>) -> Result<Self, GraphError> {
        graph.check_len(values.len())?;
        check_nonnegative(&values, Some(graph))?;
        Ok(Self(values))
    }
}

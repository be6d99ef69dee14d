//! Euler characteristics of the Milnor fiber, the polar multiplicity, the
//! Laplacian relation `I·A = K + L − P` between inner rates and polar data,
//! Hurwitz-type checks, and exhaustive enumeration of feasible 𝓟-vectors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::document::ConstraintDocument;
use crate::graph::{Cycle, GraphError, LVector, PVector, WeightedGraph};
use crate::linalg::{LinalgError, RationalMatrix, RationalVector};

/// Default number of search-tree nodes `enumerate_p` may visit.
pub const DEFAULT_MAX_PREFIXES: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("`{id}` must be a leaf without hyperplane branches (valency {valency}, l = {l})")]
    NotBareLeaf { id: String, valency: i64, l: i64 },
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
    #[error("search visited more than {cap} partial P-vectors")]
    PrefixCap { cap: u64 },
}

fn multiplicities(g: &WeightedGraph, l: &LVector) -> Result<Cycle, PolarError> {
    Ok(g.multiplicities_from_l(l)?)
}

fn fiber_term(g: &WeightedGraph, m: &Cycle, l: &LVector, v: usize) -> i64 {
    m[v] * (2 - 2 * g.vertex(v).genus - g.valency(v) - l[v])
}

/// `χ(F_t) = Σ_v m_v (2 − 2g(v) − val(v) − l_v)`.
pub fn chi_milnor_fiber(g: &WeightedGraph, l: &LVector) -> Result<i64, PolarError> {
    let m = multiplicities(g, l)?;
    Ok((0..g.len()).map(|v| fiber_term(g, &m, l, v)).sum())
}

/// The same sum restricted to `subset`. Valencies are taken in the full graph.
pub fn chi_over_subset<S: AsRef<str>>(g: &WeightedGraph, l: &LVector, subset: &[S]) -> Result<i64, PolarError> {
    let indices = subset
        .iter()
        .map(|id| g.index_of(id.as_ref()))
        .collect::<Result<BTreeSet<_>, _>>()?;
    let m = multiplicities(g, l)?;
    Ok(indices.into_iter().map(|v| fiber_term(g, &m, l, v)).sum())
}

/// `m(X,0) = Σ m_v l_v`.
pub fn surface_multiplicity(g: &WeightedGraph, l: &LVector) -> Result<i64, PolarError> {
    let m = multiplicities(g, l)?;
    Ok(m.iter().zip(l.iter()).map(|(a, b)| a * b).sum())
}

/// `m(Π) = m(X,0) − χ(F_t)`.
pub fn polar_multiplicity(g: &WeightedGraph, l: &LVector) -> Result<i64, PolarError> {
    Ok(surface_multiplicity(g, l)? - chi_milnor_fiber(g, l)?)
}

fn laplacian_rhs(g: &WeightedGraph, l: &LVector, p: &[i64]) -> Vec<BigInt> {
    let k = g.canonical_k();
    (0..g.len()).map(|v| BigInt::from(k[v] + l[v] - p[v])).collect()
}

fn rates(a: &RationalVector, m: &Cycle) -> RationalVector {
    RationalVector(a.iter().zip(m.iter()).map(|(x, &mv)| x / BigRational::from_integer(mv.into())).collect())
}

/// Solves `I·A = K + L − P` and returns `(A, Q)` with `q_v = a_v / m_v`.
pub fn laplacian_solve_a(
    g: &WeightedGraph,
    l: &LVector,
    p: &PVector,
) -> Result<(RationalVector, RationalVector), PolarError> {
    g.check_len(p.len())?;
    let m = multiplicities(g, l)?;
    let a = g.intersection_matrix().solve_exact(&laplacian_rhs(g, l, p))?;
    let q = rates(&a, &m);
    Ok((a, q))
}

/// `P = K + L − I·A`, unchecked for sign and integrality.
pub fn laplacian_solve_p(g: &WeightedGraph, l: &LVector, a: &RationalVector) -> Result<RationalVector, PolarError> {
    g.check_len(l.len())?;
    let image = g.intersection_matrix().mul_rational(a)?;
    let k = g.canonical_k();
    Ok(RationalVector(
        (0..g.len())
            .map(|v| BigRational::from_integer((k[v] + l[v]).into()) - &image[v])
            .collect(),
    ))
}

/// `χ(F̂_v) + m_v p_v = deg · χ(F̂'_v)`.
pub fn hurwitz_check(chi_fiber: i64, m_v: i64, p_v: i64, degree: i64, chi_image: i64) -> bool {
    degree >= 1 && chi_fiber + m_v * p_v == degree * chi_image
}

/// Possible `p_v` at a leaf `v` with `l_v = 0`, assuming the leaf maps to a
/// disc (`χ = 1`) with some degree `1 ≤ d ≤ m(X,0)`.
pub fn hurwitz_leaf_bounds(g: &WeightedGraph, l: &LVector, v: &str) -> Result<BTreeSet<i64>, PolarError> {
    let idx = g.index_of(v)?;
    g.check_len(l.len())?;
    let valency = g.valency(idx);
    if valency != 1 || l[idx] != 0 {
        return Err(PolarError::NotBareLeaf { id: v.to_string(), valency, l: l[idx] });
    }
    let m = multiplicities(g, l)?;
    let chi = fiber_term(g, &m, l, idx);
    let mult = surface_multiplicity(g, l)?;
    Ok((1..=mult)
        .filter_map(|d| {
            let num = d - chi;
            (num >= 0 && num % m[idx] == 0).then(|| num / m[idx])
        })
        .collect())
}

/// Declarative constraints on `P` and the induced inner rates. Bounds are
/// indexed by vertex position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    pub fixed: Vec<Option<i64>>,
    pub upper: Vec<Option<i64>>,
    pub lower: Vec<Option<i64>>,
    pub total_weighted_sum: Option<i64>,
    pub require_a_integral: bool,
    pub require_q_at_least_one: bool,
    pub require_q_one_at_l_nodes: bool,
    pub strict_monotone_paths: Vec<Vec<usize>>,
    pub max_prefixes: u64,
}

impl ConstraintSet {
    /// No bounds; `A` required integral, the other switches off.
    pub fn new(g: &WeightedGraph) -> Self {
        let n = g.len();
        Self {
            fixed: vec![None; n],
            upper: vec![None; n],
            lower: vec![None; n],
            total_weighted_sum: None,
            require_a_integral: true,
            require_q_at_least_one: false,
            require_q_one_at_l_nodes: false,
            strict_monotone_paths: Vec::new(),
            max_prefixes: DEFAULT_MAX_PREFIXES,
        }
    }

    /// Every switch off and no bounds.
    pub fn unconstrained(g: &WeightedGraph) -> Self {
        Self { require_a_integral: false, ..Self::new(g) }
    }

    pub fn from_document(g: &WeightedGraph, doc: &ConstraintDocument) -> Result<Self, PolarError> {
        let mut set = Self::new(g);
        for (map, slot) in [(&doc.fixed, &mut set.fixed), (&doc.upper, &mut set.upper), (&doc.lower, &mut set.lower)] {
            for (id, &value) in map {
                slot[g.index_of(id)?] = Some(value);
            }
        }
        set.total_weighted_sum = doc.total_weighted_sum;
        set.require_a_integral = doc.require_a_integral;
        set.require_q_at_least_one = doc.require_q_at_least_one;
        set.require_q_one_at_l_nodes = doc.require_q_one_at_l_nodes;
        set.strict_monotone_paths = doc
            .strict_monotone_paths
            .iter()
            .map(|p| p.iter().map(|id| g.index_of(id)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        if let Some(cap) = doc.max_prefixes {
            set.max_prefixes = cap;
        }
        set.validate(g)?;
        Ok(set)
    }

    pub fn fix(mut self, g: &WeightedGraph, id: &str, value: i64) -> Result<Self, PolarError> {
        self.fixed[g.index_of(id)?] = Some(value);
        Ok(self)
    }

    pub fn bounded(mut self, g: &WeightedGraph, id: &str, lower: Option<i64>, upper: Option<i64>) -> Result<Self, PolarError> {
        let i = g.index_of(id)?;
        self.lower[i] = lower.or(self.lower[i]);
        self.upper[i] = upper.or(self.upper[i]);
        Ok(self)
    }

    pub fn monotone_path(mut self, g: &WeightedGraph, ids: &[&str]) -> Result<Self, PolarError> {
        let path = ids.iter().map(|id| g.index_of(id)).collect::<Result<Vec<_>, _>>()?;
        self.strict_monotone_paths.push(path);
        Ok(self)
    }

    /// Checks that bounds agree with one another and that paths are paths.
    pub fn validate(&self, g: &WeightedGraph) -> Result<(), PolarError> {
        let n = g.len();
        for slot in [&self.fixed, &self.upper, &self.lower] {
            g.check_len(slot.len())?;
        }
        let bad = |msg: String| Err(PolarError::InvalidConstraint(msg));
        for v in 0..n {
            let id = &g.vertex(v).id;
            for value in [self.fixed[v], self.upper[v], self.lower[v]].into_iter().flatten() {
                if value < 0 {
                    return bad(format!("bound {value} at `{id}` is negative"));
                }
            }
            if let (Some(lo), Some(hi)) = (self.lower[v], self.upper[v]) {
                if lo > hi {
                    return bad(format!("lower bound {lo} exceeds upper bound {hi} at `{id}`"));
                }
            }
            if let Some(f) = self.fixed[v] {
                if self.lower[v].is_some_and(|lo| f < lo) || self.upper[v].is_some_and(|hi| f > hi) {
                    return bad(format!("fixed value {f} at `{id}` is outside its bounds"));
                }
            }
        }
        if self.total_weighted_sum.is_some_and(|t| t < 0) {
            return bad("weighted sum must be nonnegative".into());
        }
        for (k, path) in self.strict_monotone_paths.iter().enumerate() {
            if path.len() < 2 {
                return bad(format!("monotone path {k} needs at least two vertices"));
            }
            if let Some(w) = path.windows(2).find(|w| g.edge_multiplicity(w[0], w[1]) == 0) {
                return bad(format!(
                    "monotone path {k}: `{}` and `{}` are not adjacent",
                    g.vertex(w[0]).id,
                    g.vertex(w[1]).id
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintCheck {
    pub name: String,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationSolution {
    pub p: PVector,
    pub a: RationalVector,
    pub q: RationalVector,
    pub diagnostics: Vec<ConstraintCheck>,
}

/// All integral `P ≥ 0` meeting `constraints`, sorted lexicographically.
///
/// The domain at `v` is `[0, ⌊S / m_v⌋]` with `S` the prescribed weighted
/// sum or, when unset, the polar multiplicity; prefixes whose weighted sum
/// already exceeds `S` are cut.
pub fn enumerate_p(
    g: &WeightedGraph,
    l: &LVector,
    constraints: &ConstraintSet,
) -> Result<Vec<ExplorationSolution>, PolarError> {
    constraints.validate(g)?;
    g.check_len(l.len())?;
    let m = multiplicities(g, l)?;
    let n = g.len();
    let budget = match constraints.total_weighted_sum {
        Some(t) => t,
        None => polar_multiplicity(g, l)?,
    };
    let domains: Vec<(i64, i64)> = (0..n)
        .map(|v| {
            let mut lo = constraints.lower[v].unwrap_or(0);
            let mut hi = budget.max(-1).div_euclid(m[v]);
            if let Some(u) = constraints.upper[v] {
                hi = hi.min(u);
            }
            if let Some(f) = constraints.fixed[v] {
                lo = lo.max(f);
                hi = hi.min(f);
            }
            (lo, hi)
        })
        .collect();
    if domains.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(Vec::new());
    }
    let mut reach = vec![0i64; n + 1];
    for v in (0..n).rev() {
        reach[v] = reach[v + 1] + m[v] * domains[v].1;
    }

    let inverse = g.intersection_matrix().inverse_exact()?;
    let base = inverse.mul_int(&laplacian_rhs(g, l, &vec![0; n]))?;
    let mut search = PSearch {
        g,
        l,
        m: &m,
        c: constraints,
        inverse: &inverse,
        base: &base,
        domains: &domains,
        reach: &reach,
        budget,
        p: vec![0; n],
        visited: 0,
        out: Vec::new(),
    };
    search.descend(0, 0)?;
    let mut out = search.out;
    out.sort_by(|a, b| a.p.cmp(&b.p));
    Ok(out)
}

struct PSearch<'a> {
    g: &'a WeightedGraph,
    l: &'a LVector,
    m: &'a Cycle,
    c: &'a ConstraintSet,
    inverse: &'a RationalMatrix,
    base: &'a RationalVector,
    domains: &'a [(i64, i64)],
    reach: &'a [i64],
    budget: i64,
    p: Vec<i64>,
    visited: u64,
    out: Vec<ExplorationSolution>,
}

impl PSearch<'_> {
    fn descend(&mut self, k: usize, sum: i64) -> Result<(), PolarError> {
        if k == self.p.len() {
            if self.c.total_weighted_sum.is_none_or(|t| t == sum) {
                if let Some(solution) = self.evaluate() {
                    self.out.push(solution);
                }
            }
            return Ok(());
        }
        let (lo, hi) = self.domains[k];
        for value in lo..=hi {
            let next = sum + self.m[k] * value;
            if next > self.budget {
                break;
            }
            if self.c.total_weighted_sum.is_some() && next + self.reach[k + 1] < self.budget {
                continue;
            }
            self.visited += 1;
            if self.visited > self.c.max_prefixes {
                return Err(PolarError::PrefixCap { cap: self.c.max_prefixes });
            }
            self.p[k] = value;
            self.descend(k + 1, next)?;
        }
        self.p[k] = 0;
        Ok(())
    }

    fn evaluate(&self) -> Option<ExplorationSolution> {
        let n = self.p.len();
        let a = RationalVector(
            (0..n)
                .map(|i| {
                    let mut x = self.base[i].clone();
                    for (j, &pj) in self.p.iter().enumerate() {
                        if pj != 0 {
                            x -= self.inverse.get(i, j) * BigRational::from_integer(pj.into());
                        }
                    }
                    x
                })
                .collect(),
        );
        let q = rates(&a, self.m);
        let mut diagnostics = vec![ConstraintCheck { name: "bounds".into(), satisfied: true }];
        if self.c.total_weighted_sum.is_some() {
            diagnostics.push(ConstraintCheck { name: "total_weighted_sum".into(), satisfied: true });
        }
        let one = BigRational::one();
        let mut check = |name: String, ok: bool| {
            diagnostics.push(ConstraintCheck { name, satisfied: ok });
            ok
        };
        if self.c.require_a_integral && !check("A_integral".into(), a.is_integral()) {
            return None;
        }
        if self.c.require_q_at_least_one && !check("q_at_least_one".into(), q.iter().all(|x| *x >= one)) {
            return None;
        }
        if self.c.require_q_one_at_l_nodes {
            let ok = (0..n).filter(|&v| self.l[v] > 0).all(|v| q[v] == one);
            if !check("q_one_at_L_nodes".into(), ok) {
                return None;
            }
        }
        for (k, path) in self.c.strict_monotone_paths.iter().enumerate() {
            let ok = path.windows(2).all(|w| q[w[0]] < q[w[1]]);
            if !check(format!("strict_monotone_path[{k}]"), ok) {
                return None;
            }
        }
        debug_assert!(self.laplacian_holds(&a));
        Some(ExplorationSolution { p: PVector(self.p.clone()), a, q, diagnostics })
    }

    fn laplacian_holds(&self, a: &RationalVector) -> bool {
        let image = self.g.intersection_matrix().mul_rational(a).expect("dimension");
        let rhs = laplacian_rhs(self.g, self.l, &self.p);
        image.iter().zip(rhs).all(|(x, y)| *x == BigRational::from_integer(y))
    }
}

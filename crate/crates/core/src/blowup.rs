//! Point blowups on a resolution graph, tracking multiplicities, the
//! hyperplane 𝓛-vector and the ν-vector, plus the Aux-tuple bound.
//!
//! ν is computed once on a base graph by [`nu_vector`] and then propagated
//! through blowups by the recursion `ν_w = ν_v + 1` (free point) and
//! `ν_w = ν_v + ν_v' + 1` (double point). It is never recomputed on a
//! blown-up graph.

use std::cmp::Ordering;

use thiserror::Error;

use crate::graph::{Cycle, GraphError, LVector, WeightedGraph};
use crate::lipman::{cnp_divisor_pair, LipmanError};
use crate::polar::{polar_multiplicity, PolarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lipman(#[from] LipmanError),
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error("{requested} hyperplane branches requested at the center but only {available} available at `{id}`")]
    TooManyBranches { id: String, requested: i64, available: i64 },
    #[error("I·M + L = 0 fails at `{id}` after the blowup")]
    InvariantViolated { id: String },
    #[error("ν must be strictly positive; found {value} at `{id}`")]
    NonPositiveNu { id: String, value: i64 },
}

/// `ν = D1 + D2 − E` for the divisor pair of [`cnp_divisor_pair`].
pub fn nu_vector(g: &WeightedGraph) -> Result<Cycle, LipmanError> {
    let pair = cnp_divisor_pair(g)?;
    Ok(Cycle::new(pair.d1.iter().zip(pair.d2.iter()).map(|(a, b)| a + b - 1).collect()))
}

/// A resolution graph together with `M`, `L` and `ν` on its current vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionState {
    graph: WeightedGraph,
    m: Cycle,
    l: LVector,
    nu: Cycle,
}

impl ResolutionState {
    /// State on a base graph: `M` from `L`, `ν` from [`nu_vector`].
    pub fn base(graph: WeightedGraph, l: LVector) -> Result<Self, BlowupError> {
        let nu = nu_vector(&graph)?;
        Self::with_nu(graph, l, nu)
    }

    pub fn with_nu(graph: WeightedGraph, l: LVector, nu: Cycle) -> Result<Self, BlowupError> {
        graph.check_len(l.len())?;
        graph.check_len(nu.len())?;
        let m = graph.multiplicities_from_l(&l)?;
        let state = Self { graph, m, l, nu };
        state.check_nu()?;
        Ok(state)
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn multiplicities(&self) -> &Cycle {
        &self.m
    }

    pub fn l_vector(&self) -> &LVector {
        &self.l
    }

    pub fn nu(&self) -> &Cycle {
        &self.nu
    }

    /// `Σ m_v l_v`.
    pub fn weighted_l_sum(&self) -> i128 {
        self.m.iter().zip(self.l.iter()).map(|(&a, &b)| a as i128 * b as i128).sum()
    }

    fn check_nu(&self) -> Result<(), BlowupError> {
        match self.nu.iter().position(|&x| x < 1) {
            Some(i) => Err(BlowupError::NonPositiveNu {
                id: self.graph.vertex(i).id.clone(),
                value: self.nu[i],
            }),
            None => Ok(()),
        }
    }

    fn check_invariant(&self) -> Result<(), BlowupError> {
        let image = self.graph.apply(&self.m);
        match (0..self.graph.len()).find(|&i| image[i] + self.l[i] as i128 != 0) {
            Some(i) => Err(BlowupError::InvariantViolated { id: self.graph.vertex(i).id.clone() }),
            None => Ok(()),
        }
    }

    fn take_branches(&self, l: &mut LVector, v: usize, count: i64) -> Result<(), BlowupError> {
        if count < 0 {
            return Err(GraphError::NegativeEntry { id: self.graph.vertex(v).id.clone(), value: count }.into());
        }
        if count > l[v] {
            return Err(BlowupError::TooManyBranches {
                id: self.graph.vertex(v).id.clone(),
                requested: count,
                available: l[v],
            });
        }
        l.values_mut()[v] -= count;
        Ok(())
    }

    /// Blows up a free point of `E_v` through which `l_at_center` branches
    /// of the hyperplane section pass.
    pub fn blowup_free(&self, v: &str, l_at_center: i64) -> Result<Self, BlowupError> {
        let v = self.graph.index_of(v)?;
        let mut l = self.l.clone();
        self.take_branches(&mut l, v, l_at_center)?;
        let (graph, w) = self.graph.blow_up_free_point(v)?;
        self.extend(graph, l, w, self.m[v] + l_at_center, self.nu[v] + 1, l_at_center)
    }

    /// Blows up an intersection point of `E_v` and `E_v'`. Branches through
    /// a double point meet both curves, so `l_at_center` is taken from both.
    pub fn blowup_double(&self, v: &str, v2: &str, l_at_center: i64) -> Result<Self, BlowupError> {
        let v = self.graph.index_of(v)?;
        let u = self.graph.index_of(v2)?;
        let mut l = self.l.clone();
        self.take_branches(&mut l, v, l_at_center)?;
        self.take_branches(&mut l, u, l_at_center)?;
        let (graph, w) = self.graph.blow_up_double_point(v, u)?;
        let m = self.m[v] + self.m[u] + l_at_center;
        self.extend(graph, l, w, m, self.nu[v] + self.nu[u] + 1, l_at_center)
    }

    fn extend(
        &self,
        graph: WeightedGraph,
        mut l: LVector,
        w: usize,
        m_w: i64,
        nu_w: i64,
        l_w: i64,
    ) -> Result<Self, BlowupError> {
        debug_assert_eq!(w, self.graph.len());
        let mut m = self.m.clone();
        m.values_mut().push(m_w);
        let mut nu = self.nu.clone();
        nu.values_mut().push(nu_w);
        l.values_mut().push(l_w);
        let next = Self { graph, m, l, nu };
        next.check_invariant()?;
        Ok(next)
    }

    /// Contracts a genus-0 (-1)-leaf, returning its hyperplane branches to
    /// the neighbor. Inverse of [`Self::blowup_free`].
    pub fn contract(&self, w: &str) -> Result<Self, BlowupError> {
        let w = self.graph.index_of(w)?;
        let (graph, v) = self.graph.contract_leaf(w)?;
        let drop = |c: &[i64]| -> Vec<i64> {
            c.iter().enumerate().filter(|&(i, _)| i != w).map(|(_, &x)| x).collect()
        };
        let mut l = LVector::new(drop(&self.l))?;
        l.values_mut()[v] += self.l[w];
        let next = Self {
            graph,
            m: Cycle::new(drop(&self.m)),
            l,
            nu: Cycle::new(drop(&self.nu)),
        };
        next.check_invariant()?;
        Ok(next)
    }
}

/// Lexicographically ordered quadruple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuxTuple(pub [i64; 4]);

pub fn aux_compare(a: &AuxTuple, b: &AuxTuple) -> Ordering {
    a.cmp(b)
}

/// `(m(Π), m(Π), m(Π), max ν)`.
pub fn aux_upper_bound(g: &WeightedGraph, l: &LVector) -> Result<AuxTuple, BlowupError> {
    let mp = polar_multiplicity(g, l)?;
    let max_nu = nu_vector(g)?.iter().copied().max().expect("graph has vertices");
    Ok(AuxTuple([mp, mp, mp, max_nu]))
}

//! Computations in the Lipman cone of a weighted graph: anti-nef tests,
//! Laufer's fundamental cycle, least divisors below a prescribed intersection
//! bound, the multiplicity bound and box enumeration of anti-nef cycles.

use thiserror::Error;

use crate::graph::{Cycle, GraphError, LVector, WeightedGraph};

/// Upper limit on the shift `c` tried when looking for the second divisor.
pub const SHIFT_SEARCH_BUDGET: i64 = 64;

/// Default number of box points the enumerator may visit.
pub const DEFAULT_MAX_POINTS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LipmanError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("bound vector has a negative entry at position {0}")]
    NegativeBound(usize),
    #[error("box is empty: lower exceeds upper at position {0}")]
    InvalidBox(usize),
    #[error("enumeration visited more than {cap} box points")]
    BoxCap { cap: u64 },
    #[error("open-condition search failed after shifts up to {budget}")]
    SearchFailed { budget: i64 },
    #[error("cycle coefficient overflowed a 64-bit integer")]
    Overflow,
}

/// Subtracted from `(I·Z)_v`: the Ineq1 right-hand side `val(v) + 2g(v)`.
pub fn ineq1_weights(g: &WeightedGraph) -> Vec<i64> {
    (0..g.len()).map(|i| g.valency(i) + 2 * g.vertex(i).genus).collect()
}

/// The stronger Ineq2 right-hand side `val(v) + 2g(v) + 2`.
pub fn ineq2_weights(g: &WeightedGraph) -> Vec<i64> {
    ineq1_weights(g).into_iter().map(|w| w + 2).collect()
}

pub fn is_antinef(g: &WeightedGraph, z: &[i64]) -> bool {
    g.apply(z).into_iter().all(|x| x <= 0)
}

/// Vertex selection used by the Laufer iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    First,
    Last,
}

/// Laufer's algorithm from the unit cycle at the first vertex.
pub fn fundamental_cycle(g: &WeightedGraph) -> Cycle {
    fundamental_cycle_from(g, 0, Selection::First)
}

/// Laufer's algorithm: start at `E_start` and add `E_v` at a vertex with
/// `(I·Z)_v > 0` until none is left.
pub fn fundamental_cycle_from(g: &WeightedGraph, start: usize, rule: Selection) -> Cycle {
    let n = g.len();
    let mut z = Cycle::unit(n, start);
    loop {
        let image = g.apply(&z);
        let violating = match rule {
            Selection::First => image.iter().position(|&x| x > 0),
            Selection::Last => image.iter().rposition(|&x| x > 0),
        };
        match violating {
            Some(v) => z.values_mut()[v] += 1,
            None => return z,
        }
    }
}

/// Least `D ≥ 0` with `(I·D)_v ≤ -w_v` at every vertex.
///
/// Monotone fixpoint from zero: at the first violating vertex `v`, `d_v` is
/// raised by the smallest amount that repairs row `v` given the current
/// neighbors. Raising `d_v` only increases the other rows, so each step stays
/// below the least solution.
pub fn minimal_bounded_cycle(g: &WeightedGraph, w: &[i64]) -> Result<Cycle, LipmanError> {
    g.check_len(w.len())?;
    if let Some(i) = w.iter().position(|&x| x < 0) {
        return Err(LipmanError::NegativeBound(i));
    }
    let n = g.len();
    let mut d = Cycle::zeros(n);
    loop {
        let violating = (0..n)
            .map(|i| (i, g.apply_at(&d, i) + w[i] as i128))
            .find(|&(_, excess)| excess > 0);
        let Some((v, excess)) = violating else { return Ok(d) };
        let step = (-g.vertex(v).self_intersection) as i128;
        let raise = (excess + step - 1) / step;
        let slot = &mut d.values_mut()[v];
        *slot = i64::try_from(*slot as i128 + raise).map_err(|_| LipmanError::Overflow)?;
    }
}

/// `minimal_bounded_cycle`, with `Z_min` substituted for a zero result.
fn nonzero_bounded_cycle(g: &WeightedGraph, w: &[i64]) -> Result<Cycle, LipmanError> {
    let d = minimal_bounded_cycle(g, w)?;
    Ok(if d.is_zero() { fundamental_cycle(g) } else { d })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityBound {
    /// Least nonzero divisor satisfying Ineq1.
    pub divisor: Cycle,
    /// `-D²`, an upper bound for the multiplicity of any realization.
    pub value: i128,
}

pub fn ineq1_divisor(g: &WeightedGraph) -> Result<Cycle, LipmanError> {
    nonzero_bounded_cycle(g, &ineq1_weights(g))
}

pub fn multiplicity_bound(g: &WeightedGraph) -> Result<MultiplicityBound, LipmanError> {
    let divisor = ineq1_divisor(g)?;
    let value = -g.pairing(&divisor, &divisor);
    Ok(MultiplicityBound { divisor, value })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnpPair {
    pub d1: Cycle,
    pub d2: Cycle,
    /// The shift `c` and vertex `u` at which `d2` was accepted.
    pub shift: i64,
    pub vertex: usize,
}

/// `true` when `α_v β_w − β_v α_w ≠ 0` on every edge.
pub fn edge_determinants_nonzero(g: &WeightedGraph, a: &[i64], b: &[i64]) -> bool {
    g.edges().iter().all(|&(v, w)| {
        a[v] as i128 * b[w] as i128 - b[v] as i128 * a[w] as i128 != 0
    })
}

/// Two divisors satisfying Ineq2 whose coefficient vectors are nowhere
/// proportional along an edge.
///
/// `d1` is the least Ineq2 divisor. `d2` is the first least divisor for the
/// right-hand side `w + c·e_u`, scanning `c = 1..=64` and then `u` in vertex
/// order, that meets the edge condition.
pub fn cnp_divisor_pair(g: &WeightedGraph) -> Result<CnpPair, LipmanError> {
    let w = ineq2_weights(g);
    let d1 = minimal_bounded_cycle(g, &w)?;
    for shift in 1..=SHIFT_SEARCH_BUDGET {
        for vertex in 0..g.len() {
            let mut target = w.clone();
            target[vertex] += shift;
            let d2 = minimal_bounded_cycle(g, &target)?;
            if edge_determinants_nonzero(g, &d1, &d2) {
                return Ok(CnpPair { d1, d2, shift, vertex });
            }
        }
    }
    Err(LipmanError::SearchFailed { budget: SHIFT_SEARCH_BUDGET })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_points: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self { max_points: DEFAULT_MAX_POINTS }
    }
}

/// All anti-nef cycles in `[lower, upper]`, in lexicographic order.
///
/// Depth-first over coordinates in vertex order. A prefix is cut when some
/// assigned vertex has `(I·Z)_v > 0` even with every unassigned neighbor at
/// its lower bound, since raising those neighbors only increases the row.
pub fn enumerate_antinef_in_box(
    g: &WeightedGraph,
    lower: &[i64],
    upper: &[i64],
    limits: EnumerationLimits,
) -> Result<Vec<Cycle>, LipmanError> {
    g.check_len(lower.len())?;
    g.check_len(upper.len())?;
    if let Some(i) = (0..g.len()).find(|&i| lower[i] > upper[i]) {
        return Err(LipmanError::InvalidBox(i));
    }
    let mut walker = BoxWalker {
        g,
        lower,
        upper,
        z: lower.to_vec(),
        visited: 0,
        cap: limits.max_points,
        out: Vec::new(),
    };
    walker.descend(0)?;
    Ok(walker.out)
}

struct BoxWalker<'a> {
    g: &'a WeightedGraph,
    lower: &'a [i64],
    upper: &'a [i64],
    z: Vec<i64>,
    visited: u64,
    cap: u64,
    out: Vec<Cycle>,
}

impl BoxWalker<'_> {
    /// Row `v` with coordinates past `k` held at their lower bounds.
    fn optimistic_row(&self, v: usize, k: usize) -> i128 {
        let own = self.g.vertex(v).self_intersection as i128 * self.z[v] as i128;
        self.g.neighbors(v).iter().fold(own, |acc, &(j, m)| {
            let zj = if j <= k { self.z[j] } else { self.lower[j] };
            acc + m as i128 * zj as i128
        })
    }

    fn descend(&mut self, k: usize) -> Result<(), LipmanError> {
        if k == self.g.len() {
            self.out.push(Cycle::new(self.z.clone()));
            return Ok(());
        }
        for value in self.lower[k]..=self.upper[k] {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(LipmanError::BoxCap { cap: self.cap });
            }
            self.z[k] = value;
            // Earlier neighbors only get worse as z_k grows.
            let earlier_ok = self
                .g
                .neighbors(k)
                .iter()
                .filter(|&&(j, _)| j < k)
                .all(|&(j, _)| self.optimistic_row(j, k) <= 0);
            if !earlier_ok {
                break;
            }
            if self.optimistic_row(k, k) <= 0 {
                self.descend(k + 1)?;
            }
        }
        self.z[k] = self.lower[k];
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LCandidate {
    pub z: Cycle,
    pub l: LVector,
}

/// Anti-nef `Z` with `Z_min ≤ Z ≤ D`, `D` the least nonzero Ineq1 divisor,
/// each paired with `L = -I·Z`.
pub fn enumerate_l_candidates(
    g: &WeightedGraph,
    limits: EnumerationLimits,
) -> Result<Vec<LCandidate>, LipmanError> {
    let lower = fundamental_cycle(g);
    let upper = ineq1_divisor(g)?;
    enumerate_antinef_in_box(g, &lower, &upper, limits)?
        .into_iter()
        .map(|z| candidate_for(g, z))
        .collect()
}

fn candidate_for(g: &WeightedGraph, z: Cycle) -> Result<LCandidate, LipmanError> {
    let l = g
        .apply(&z)
        .into_iter()
        .map(|x| i64::try_from(-x).map_err(|_| LipmanError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LCandidate { z, l: LVector::new(l)? })
}

/// Membership test for the candidate list without enumerating it.
pub fn l_candidate_for(g: &WeightedGraph, z: &Cycle) -> Result<Option<LCandidate>, LipmanError> {
    g.check_len(z.len())?;
    let upper = ineq1_divisor(g)?;
    if !is_antinef(g, z) || !fundamental_cycle(g).le(z) || !z.le(&upper) {
        return Ok(None);
    }
    candidate_for(g, z.clone()).map(Some)
}

#![allow(dead_code, clippy::needless_range_loop)]

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use resgraph::graph::Vertex;
use resgraph::WeightedGraph;

pub const IDS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Self-intersections on the diagonal, edge counts off it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmallGraph {
    pub e: Vec<i64>,
    pub adj: Vec<Vec<i64>>,
}

impl SmallGraph {
    pub fn n(&self) -> usize {
        self.e.len()
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { self.e[i] } else { self.adj[i][j] }).collect())
            .collect()
    }

    pub fn apply(&self, z: &[i64]) -> Vec<i64> {
        self.matrix().iter().map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn build(&self, genus: &[i64]) -> WeightedGraph {
        let n = self.n();
        let vertices = (0..n).map(|i| Vertex::new(IDS[i], genus[i], self.e[i])).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for _ in 0..self.adj[i][j] {
                    edges.push((IDS[i], IDS[j]));
                }
            }
        }
        WeightedGraph::new(vertices, &edges).expect("sweep graph is valid")
    }

    pub fn connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if self.adj[i][j] > 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Every leading principal minor of `-I` positive, by cofactor expansion.
    pub fn negative_definite(&self) -> bool {
        let m: Vec<Vec<i128>> =
            self.matrix().iter().map(|r| r.iter().map(|&x| -(x as i128)).collect()).collect();
        (1..=self.n()).all(|k| {
            let minor: Vec<Vec<i128>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            cofactor_det(&minor) > 0
        })
    }

    fn permuted(&self, p: &[usize]) -> SmallGraph {
        let n = self.n();
        SmallGraph {
            e: (0..n).map(|i| self.e[p[i]]).collect(),
            adj: (0..n).map(|i| (0..n).map(|j| self.adj[p[i]][p[j]]).collect()).collect(),
        }
    }

    /// Lexicographically least relabelling.
    pub fn canonical(&self) -> SmallGraph {
        permutations(self.n()).iter().map(|p| self.permuted(p)).min().expect("at least one permutation")
    }
}

pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let sub: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * cofactor_det(&sub)
        })
        .sum()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// All connected loopless graphs on `1..=max_n` labelled vertices with
/// self-intersections in `[-5, -1]` and at most two parallel edges whose
/// intersection matrix is negative definite.
pub fn labelled_sweep(max_n: usize) -> Vec<SmallGraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for code in 0..3usize.pow(pairs.len() as u32) {
            let mut adj = vec![vec![0; n]; n];
            let mut c = code;
            for &(i, j) in &pairs {
                adj[i][j] = (c % 3) as i64;
                adj[j][i] = adj[i][j];
                c /= 3;
            }
            let shape = SmallGraph { e: vec![-1; n], adj };
            if !shape.connected() {
                continue;
            }
            for wcode in 0..5usize.pow(n as u32) {
                let mut e = Vec::with_capacity(n);
                let mut c = wcode;
                for _ in 0..n {
                    e.push(-1 - (c % 5) as i64);
                    c /= 5;
                }
                let g = SmallGraph { e, adj: shape.adj.clone() };
                if g.negative_definite() {
                    out.push(g);
                }
            }
        }
    }
    out
}

pub fn canonical_sweep(max_n: usize) -> Vec<SmallGraph> {
    let mut set: Vec<SmallGraph> = labelled_sweep(max_n).iter().map(SmallGraph::canonical).collect();
    set.sort();
    set.dedup();
    set
}

/// Exact solve by Gauss-Jordan elimination over the rationals.
pub fn rational_solve(a: &[Vec<i64>], b: &[i64]) -> Vec<BigRational> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = a[i].iter().map(|&x| BigRational::from_integer(x.into())).collect();
            row.push(BigRational::from_integer(b[i].into()));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).expect("nonsingular");
        m.swap(col, pivot);
        let inv = BigRational::one() / &m[col][col];
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let delta = &f * &m[col][c];
                    m[r][c] = &m[r][c] - delta;
                }
            }
        }
    }
    m.into_iter().map(|mut r| r.pop().unwrap()).collect()
}

pub fn ceil(x: &BigRational) -> i64 {
    let c = x.ceil().to_integer();
    i64::try_from(c).expect("small")
}

/// A random connected negative-definite graph on `n` vertices: a random
/// tree plus an occasional extra edge, weights redrawn until definite.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> WeightedGraph {
    loop {
        let mut adj = vec![vec![0i64; n]; n];
        for j in 1..n {
            let i = rng.gen_range(0..j);
            adj[i][j] += 1;
            adj[j][i] += 1;
        }
        if n > 2 && rng.gen_bool(0.3) {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i != j {
                adj[i][j] += 1;
                adj[j][i] += 1;
            }
        }
        let dominant = rng.gen_bool(0.5);
        let e = (0..n)
            .map(|i| {
                if dominant {
                    (-(adj[i].iter().sum::<i64>()) - rng.gen_range(0..3)).min(-1)
                } else {
                    rng.gen_range(-5..=-1)
                }
            })
            .collect();
        let sg = SmallGraph { e, adj };
        if !sg.negative_definite() {
            continue;
        }
        let genus: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.2) { 1 } else { 0 }).collect();
        return sg.build(&genus);
    }
}

//! One line per acceptance criterion. Exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resgraph::blowup::ResolutionState;
use resgraph::cli::run_command;
use resgraph::graph::{Cycle, LVector, PVector};
use resgraph::linalg::rational;
use resgraph::{fixtures, lipman, parse_constraint_document, parse_graph_document, polar};
use resgraph::{validate_graph, ConstraintSet, RationalVector, WeightedGraph};

use common::SmallGraph;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn mm_l() -> LVector {
    LVector::unit(10, 0)
}

const MM_P: [i64; 10] = [0, 1, 0, 0, 0, 0, 1, 0, 0, 1];

fn mm_q() -> RationalVector {
    RationalVector(
        [(1, 1), (2, 1), (5, 2), (13, 5), (5, 2), (13, 5), (34, 13), (8, 3), (3, 1), (4, 1)]
            .iter()
            .map(|&(a, b)| rational(a, b))
            .collect(),
    )
}

fn c1() -> Outcome {
    let start = Instant::now();
    let m = fixtures::mm().multiplicities_from_l(&mm_l()).map_err(|e| e.to_string())?;
    ensure(m.as_slice() == [2, 1, 2, 5, 2, 5, 13, 3, 2, 1], || format!("M = {m}"))?;
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!("M = {m} in {took:.2?}"))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let g = fixtures::mm();
    let l = mm_l();
    let chi = polar::chi_milnor_fiber(&g, &l).map_err(|e| e.to_string())?;
    let mp = polar::polar_multiplicity(&g, &l).map_err(|e| e.to_string())?;
    let m = g.multiplicities_from_l(&l).map_err(|e| e.to_string())?;
    let weighted: i64 = m.iter().zip(MM_P).map(|(a, b)| a * b).sum();
    ensure(chi == -13, || format!("chi = {chi}"))?;
    ensure(mp == 15, || format!("m(polar) = {mp}"))?;
    ensure(weighted == 15, || format!("sum m_v p_v = {weighted}"))?;
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!("chi = -13, m(polar) = 15, sum m_v p_v = 15 in {took:.2?}"))
}

fn explore_fixture(constraints: &str) -> Outcome {
    let start = Instant::now();
    let doc = parse_graph_document(&std::fs::read(fixture("mm.json")).unwrap()).map_err(|e| e.to_string())?;
    let g = validate_graph(&doc).map_err(|e| e.to_string())?;
    let l = LVector::for_graph(&g, g.vector_from_map(doc.l_vector.as_ref().unwrap()).unwrap()).unwrap();
    let cdoc = parse_constraint_document(&std::fs::read(fixture(constraints)).unwrap()).map_err(|e| e.to_string())?;
    let set = ConstraintSet::from_document(&g, &cdoc).map_err(|e| e.to_string())?;
    let solutions = polar::enumerate_p(&g, &l, &set).map_err(|e| e.to_string())?;
    ensure(solutions.len() == 1, || format!("{} solutions", solutions.len()))?;
    let s = &solutions[0];
    ensure(s.p.as_slice() == MM_P, || format!("P = {}", s.p))?;
    ensure(s.q == mm_q(), || format!("Q = {}", s.q))?;
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!("unique P = {}, Q = {} in {took:.2?}", s.p, s.q))
}

fn c3() -> Outcome {
    let out = explore_fixture("mm-constraints.json")?;
    let cli = run_command([
        "resgraph",
        "explore",
        "--graph",
        fixture("mm.json").to_str().unwrap(),
        "--constraints",
        fixture("mm-constraints.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    ensure(cli.exit_code == 0, || format!("cli exit {}: {}", cli.exit_code, cli.stderr))?;
    Ok(out)
}

fn c4() -> Outcome {
    let cdoc = parse_constraint_document(&std::fs::read(fixture("mm-constraints-route-b.json")).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(cdoc.total_weighted_sum.is_none(), || "route B sets a total".into())?;
    explore_fixture("mm-constraints-route-b.json")
}

/// Componentwise minimum of the nonzero anti-nef points of `[0, hi]`, if any.
fn brute_zmin(sg: &SmallGraph, hi: &[i64]) -> Option<Vec<i64>> {
    let n = sg.n();
    let a = sg.matrix();
    let antinef = |z: &[i64]| a.iter().all(|row| row.iter().zip(z).map(|(x, y)| x * y).sum::<i64>() <= 0);
    let mut best: Option<Vec<i64>> = None;
    let mut z = vec![0i64; n];
    loop {
        if z.iter().any(|&x| x > 0) && antinef(&z) {
            best = Some(match best {
                None => z.clone(),
                Some(b) => b.iter().zip(&z).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            if z[i] < hi[i] {
                z[i] += 1;
                break;
            }
            z[i] = 0;
            i += 1;
        }
    }
}

fn c5() -> Outcome {
    let start = Instant::now();
    let sweep = common::labelled_sweep(4);
    let mut extended = 0usize;
    for sg in &sweep {
        let n = sg.n();
        let mut expected = brute_zmin(sg, &vec![6; n]);
        if expected.is_none() {
            // No anti-nef point with entries ≤ 6. Any anti-nef point bounds
            // the minimum, so the implementation's answer, once checked to
            // be anti-nef and nonzero, is a valid box corner.
            extended += 1;
            let z = lipman::fundamental_cycle(&sg.build(&vec![0; n]));
            ensure(sg.apply(&z).iter().all(|&x| x <= 0) && z.iter().any(|&x| x > 0), || {
                format!("{sg:?}: Z = {z} not anti-nef")
            })?;
            expected = brute_zmin(sg, &z);
        }
        let expected = expected.ok_or_else(|| format!("{sg:?}: no anti-nef point"))?;
        for genus in [0, 1] {
            let z = lipman::fundamental_cycle(&sg.build(&vec![genus; n]));
            ensure(z.as_slice() == expected, || format!("{sg:?} g={genus}: {z} vs {expected:?}"))?;
        }
    }
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} graphs x 2 genera agree ({extended} needed a box beyond 6) in {took:.2?}",
        sweep.len()
    ))
}

/// Per-graph data for the bounded-cycle oracle.
struct Oracle<'a> {
    sg: &'a SmallGraph,
    a: Vec<Vec<i64>>,
    /// `det(-I)·(-I)⁻¹`, entrywise nonnegative, and `det(-I)`.
    adj: Vec<Vec<i64>>,
    det: i64,
}

impl<'a> Oracle<'a> {
    fn new(sg: &'a SmallGraph) -> Self {
        let n = sg.n();
        let a = sg.matrix();
        let neg: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let det = common::cofactor_det(&neg.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect::<Vec<_>>());
        let det = i64::try_from(det).unwrap();
        let mut adj = vec![vec![0i64; n]; n];
        for j in 0..n {
            let mut e = vec![0i64; n];
            e[j] = det;
            for (i, x) in common::rational_solve(&neg, &e).iter().enumerate() {
                assert!(x.is_integer(), "adjugate entry is integral");
                adj[i][j] = i64::try_from(x.to_integer()).unwrap();
            }
        }
        Oracle { sg, a, adj, det }
    }

    /// `ceil(-I⁻¹w)`. Every solution lies above it since `-I⁻¹ ≥ 0`.
    fn lower(&self, w: &[i64]) -> Vec<i64> {
        self.adj
            .iter()
            .map(|row| {
                let s: i64 = row.iter().zip(w).map(|(x, y)| x * y).sum();
                (s + self.det - 1).div_euclid(self.det).max(0)
            })
            .collect()
    }

    /// Least `Z` with `I·Z ≤ -w` inside `[lo, hi]`, found by scanning every
    /// prefix of the first `n - 1` coordinates and solving the last exactly.
    fn brute(&self, w: &[i64], lo: &[i64], hi: &[i64]) -> Option<Vec<i64>> {
        let n = self.sg.n();
        let a = &self.a;
        let last = n - 1;
        let mut best: Option<Vec<i64>> = None;
        let mut z = lo.to_vec();
        loop {
            // Row r reads a[r][last]·z_last ≤ -w_r - partial_r.
            let mut zl_min = lo[last];
            let mut zl_max = hi[last];
            for r in 0..n {
                let partial: i64 = (0..last).map(|c| a[r][c] * z[c]).sum();
                let rhs = -w[r] - partial;
                let coef = a[r][last];
                if coef > 0 {
                    zl_max = zl_max.min(rhs.div_euclid(coef));
                } else if coef < 0 {
                    let k = -coef;
                    zl_min = zl_min.max((-rhs + k - 1).div_euclid(k));
                } else if rhs < 0 {
                    zl_min = i64::MAX;
                }
            }
            if zl_min <= zl_max {
                z[last] = zl_min;
                best = Some(match best {
                    None => z.clone(),
                    Some(b) => b.iter().zip(&z).map(|(a, b)| *a.min(b)).collect(),
                });
            }
            let mut i = 0;
            loop {
                if i == last {
                    return best;
                }
                if z[i] < hi[i] {
                    z[i] += 1;
                    break;
                }
                z[i] = lo[i];
                i += 1;
            }
        }
    }

    fn check(&self, g: &WeightedGraph, w: &[i64]) -> Result<Cycle, String> {
        let sg = self.sg;
        let d = lipman::minimal_bounded_cycle(g, w).map_err(|e| e.to_string())?;
        let image = sg.apply(&d);
        ensure(image.iter().zip(w).all(|(x, wi)| *x <= -wi) && d.iter().all(|&x| x >= 0), || {
            format!("{sg:?} w={w:?}: {d} is not a solution")
        })?;
        let lo = self.lower(w);
        ensure(lo.iter().zip(d.iter()).all(|(a, b)| a <= b), || format!("{sg:?} w={w:?}: {d} below {lo:?}"))?;
        // The least solution lies in [lo, d], so the box minimum must be d.
        let expected = self.brute(w, &lo, &d).ok_or_else(|| format!("{sg:?} w={w:?}: empty box"))?;
        ensure(d.as_slice() == expected, || format!("{sg:?} w={w:?}: {d} vs {expected:?}"))?;
        Ok(d)
    }
}

fn c6() -> Outcome {
    let start = Instant::now();
    let sweep = common::canonical_sweep(4);
    let mut cases = 0usize;
    for sg in &sweep {
        let n = sg.n();
        let oracle = Oracle::new(sg);
        let g0 = sg.build(&vec![0; n]);
        let g1 = sg.build(&vec![1; n]);
        let mut w = vec![0i64; n];
        loop {
            let d0 = oracle.check(&g0, &w)?;
            let d1 = lipman::minimal_bounded_cycle(&g1, &w).map_err(|e| e.to_string())?;
            ensure(d0 == d1, || format!("{sg:?} w={w:?}: genus changes the answer"))?;
            cases += 1;
            let mut i = 0;
            while i < n && w[i] == 6 {
                w[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            w[i] += 1;
        }
    }
    let took = within(start, Duration::from_secs(120))?;
    Ok(format!("{} graphs up to relabelling, {cases} right-hand sides, both genera, in {took:.2?}", sweep.len()))
}

fn c7() -> Outcome {
    let single = lipman::multiplicity_bound(&fixtures::single(0, -3)).map_err(|e| e.to_string())?;
    ensure(single.value == 3, || format!("single vertex n_M = {}", single.value))?;
    let a2 = fixtures::a2();
    let z = lipman::fundamental_cycle(&a2);
    ensure(z.as_slice() == [1, 1], || format!("A2 Z_min = {z}"))?;
    let nm = lipman::multiplicity_bound(&a2).map_err(|e| e.to_string())?;
    ensure(nm.value == 2, || format!("A2 n_M = {}", nm.value))?;
    Ok("single (g=0, e=-3): n_M = 3; A2: Z_min = (1, 1), n_M = 2".into())
}

/// `I·M + L` computed straight from the vertex and edge lists.
fn residual(g: &WeightedGraph, m: &[i64], l: &[i64]) -> Vec<i64> {
    let mut r: Vec<i64> = (0..g.len()).map(|i| g.vertex(i).self_intersection * m[i] + l[i]).collect();
    for &(a, b) in g.edges() {
        r[a] += m[b];
        r[b] += m[a];
    }
    r
}

fn random_base(rng: &mut ChaCha8Rng) -> ResolutionState {
    loop {
        let n = rng.gen_range(1..=5);
        let g = common::random_graph(rng, n);
        let z = lipman::fundamental_cycle(&g);
        let scale = rng.gen_range(1..=2);
        let z: Vec<i64> = z.iter().map(|x| x * scale).collect();
        let l = LVector::new(g.apply(&z).iter().map(|&x| -x as i64).collect()).unwrap();
        if let Ok(state) = ResolutionState::base(g, l) {
            return state;
        }
    }
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut free, mut double) = (0, 0);
    for _ in 0..200 {
        let mut state = random_base(&mut rng);
        let steps = rng.gen_range(1..=6);
        for _ in 0..steps {
            let g = state.graph();
            let n = g.len();
            let use_edge = !g.edges().is_empty() && rng.gen_bool(0.5);
            let (next, parents) = if use_edge {
                let (v, u) = g.edges()[rng.gen_range(0..g.edges().len())];
                let avail = state.l_vector()[v].min(state.l_vector()[u]);
                let k = rng.gen_range(0..=avail);
                double += 1;
                let next = state
                    .blowup_double(&g.vertex(v).id, &g.vertex(u).id, k)
                    .map_err(|e| e.to_string())?;
                (next, vec![v, u])
            } else {
                let v = rng.gen_range(0..n);
                let k = rng.gen_range(0..=state.l_vector()[v]);
                free += 1;
                (state.blowup_free(&g.vertex(v).id, k).map_err(|e| e.to_string())?, vec![v])
            };
            let w = next.graph().len() - 1;
            ensure(w == n, || "new vertex is not appended".into())?;
            let nu = next.nu();
            let expected = parents.iter().map(|&p| state.nu()[p]).sum::<i64>() + 1;
            ensure(nu[w] == expected, || format!("nu_w = {}, expected {expected}", nu[w]))?;
            ensure(parents.iter().all(|&p| nu[w] > nu[p]), || "nu does not increase".into())?;
            let r = residual(next.graph(), next.multiplicities(), next.l_vector());
            ensure(r.iter().all(|&x| x == 0), || format!("I·M + L = {r:?}"))?;
            state = next;
        }
    }
    Ok(format!("200 sequences ({free} free, {double} double point blowups)"))
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let g = common::random_graph(&mut rng, n);
        let scale = rng.gen_range(1..=3);
        let z: Vec<i64> = lipman::fundamental_cycle(&g).iter().map(|x| x * scale).collect();
        let l = LVector::new(g.apply(&z).iter().map(|&x| -x as i64).collect()).unwrap();
        let p = PVector::new((0..n).map(|_| rng.gen_range(0..=5)).collect()).unwrap();
        let (a, _) = polar::laplacian_solve_a(&g, &l, &p).map_err(|e| e.to_string())?;
        let back = polar::laplacian_solve_p(&g, &l, &a).map_err(|e| e.to_string())?;
        ensure(back == RationalVector::from_integers(&p), || format!("P = {p}, round trip {back}"))?;
    }
    Ok("100 random (G, L, P) round trips exact".into())
}

fn c10() -> Outcome {
    let bounds = polar::hurwitz_leaf_bounds(&fixtures::mm(), &mm_l(), "v8").map_err(|e| e.to_string())?;
    ensure(bounds == BTreeSet::from([0, 1]), || format!("{bounds:?}"))?;
    Ok("p_v8 in {0, 1}".into())
}

fn c11() -> Outcome {
    let mut runs = 0;
    let path = |name: &str| fixture(name).to_str().unwrap().to_string();
    let mut invocations: Vec<Vec<String>> = Vec::new();
    for graph in ["mm.json", "mm-polar.json", "a2.json"] {
        for cmd in ["validate", "zmin", "multbound", "nu", "chi", "polarmult", "enum-l", "dot"] {
            for format in ["json", "text"] {
                invocations.push(
                    ["resgraph", cmd, "--graph", &path(graph), "--format", format].map(String::from).to_vec(),
                );
            }
        }
        let mut dot_nu: Vec<String> = ["resgraph", "dot", "--nu", "--graph", &path(graph)].map(String::from).to_vec();
        invocations.push(dot_nu.clone());
        dot_nu.extend(["--format".into(), "json".into()]);
        invocations.push(dot_nu);
    }
    for constraints in ["mm-constraints.json", "mm-constraints-route-b.json"] {
        invocations.push(
            ["resgraph", "explore", "--graph", &path("mm.json"), "--constraints", &path(constraints), "--format", "json"]
                .map(String::from)
                .to_vec(),
        );
    }
    for argv in &invocations {
        let first = run_command(argv);
        let second = run_command(argv);
        ensure(first == second, || format!("{argv:?} differs between runs"))?;
        ensure(!first.stdout.is_empty() || !first.stderr.is_empty(), || format!("{argv:?} printed nothing"))?;
        runs += 1;
    }
    Ok(format!("{runs} invocations byte-identical across two runs"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("MM multiplicities", c1),
        ("MM Euler characteristic and polar multiplicity", c2),
        ("MM polar exploration, route A", c3),
        ("MM polar exploration, route B", c4),
        ("Laufer oracle equivalence", c5),
        ("generalized Laufer oracle equivalence", c6),
        ("hand-checked bounds", c7),
        ("nu recursion under blowups", c8),
        ("Laplacian round trip", c9),
        ("Hurwitz leaf bound", c10),
        ("CLI determinism", c11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}


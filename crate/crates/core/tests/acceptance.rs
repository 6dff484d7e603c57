//! Acceptance gate: one PASS/FAIL line per criterion and a summary line. The
//! exit status stays zero so the rest of the workspace tests still run; read
//! the FAIL lines.

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyrigid::constructions::{
    build_flexible_with, build_hypercube, build_k2d, build_np_gadget, build_octahedron, double_banana,
    perturb_preserving_colouring, project_framework, randomize_rigid_realisation, GadgetSpec,
};
use polyrigid::framework::{colouring_matrix, rank_exact};
use polyrigid::global::{certify_generic_global, decide_generic_global_linf2};
use polyrigid::graph::{is_2_connected, is_connected};
use polyrigid::oracle::{congruence_check, numeric_witness_search, SearchParams};
use polyrigid::rational::{int, rat};
use polyrigid::sparsity::{is_mdd_connected, is_tight, pebble_rank};
use polyrigid::{
    decide_global_rigidity, DirectedColouring, Framework, GlobalOptions, Graph, Outcome, PolytopeNorm, Rational,
    SparsityParams, Vector,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn linf_dist(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(Rational::zero)
}

fn l1_norm(x: &[Rational]) -> Rational {
    x.iter().map(|v| v.abs()).sum()
}

/// Signed permutation matrices as `(perm, signs)`: `(Tx)_i = s_i x_{perm_i}`.
fn signed_permutations(d: usize) -> Vec<(Vec<usize>, Vec<i64>)> {
    fn perms(rest: Vec<usize>) -> Vec<Vec<usize>> {
        if rest.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..rest.len() {
            let mut r = rest.clone();
            let x = r.remove(i);
            for mut p in perms(r) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    let mut out = Vec::new();
    for p in perms((0..d).collect()) {
        for m in 0..1u32 << d {
            out.push((p.clone(), (0..d).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect()));
        }
    }
    out
}

/// ℓ∞ congruence from first principles: `q - q_0 = T (p - p_0)` for a signed
/// permutation `T`.
fn linf_congruent(p: &[Vector], q: &[Vector]) -> bool {
    let d = p[0].len();
    signed_permutations(d).iter().any(|(perm, signs)| {
        p.iter().zip(q).all(|(pv, qv)| {
            (0..d).all(|i| &qv[i] - &q[0][i] == (&pv[perm[i]] - &p[0][perm[i]]) * int(signs[i]))
        })
    })
}

/// Exact equivalence and non-congruence, checked without the library.
fn verify_linf_witness(fw: &Framework, q: &[Vector]) -> Result<(), String> {
    for &(a, b) in fw.graph().edges() {
        let want = linf_dist(fw.position(a), fw.position(b));
        let got = linf_dist(&q[a], &q[b]);
        ensure(want == got, || format!("edge {a}-{b}: length {got} instead of {want}"))?;
    }
    ensure(!linf_congruent(fw.positions(), q), || "witness is congruent".into())
}

fn union_find_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut c = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            c -= 1;
        }
    }
    c
}

/// Size of a largest `(d, k)`-sparse edge subset, by enumeration.
fn brute_force_rank(n: usize, edges: &[(usize, usize)], d: usize, k: usize) -> usize {
    let constraints: Vec<(u32, usize)> = (0u32..1 << n)
        .filter(|x| x.count_ones() as usize >= d)
        .map(|x| {
            let inside = edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| x >> a & 1 == 1 && x >> b & 1 == 1)
                .fold(0u32, |m, (i, _)| m | 1 << i);
            (inside, d * x.count_ones() as usize - k)
        })
        .collect();
    let mut best = 0;
    for s in 0u32..1 << edges.len() {
        let size = s.count_ones() as usize;
        if size > best && constraints.iter().all(|&(inside, bound)| (s & inside).count_ones() as usize <= bound) {
            best = size;
        }
    }
    best
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.random_bool(p)).collect();
    Graph::from_indices(n, &edges).unwrap()
}

fn c1_octahedron() -> Check {
    let o = build_octahedron();
    let expected = [(0, 9, 10), (1, 0, 1), (0, 0, 1), (1, 9, 10), (1, 9, 5), (0, 9, 5)];
    for (v, &(x, yn, yd)) in expected.iter().enumerate() {
        ensure(o.position(v) == &vec![int(x), rat(yn, yd)], || format!("position of {}", o.graph().name(v)))?;
    }
    ensure(o.is_well_positioned(), || "not well-positioned".into())?;
    let phi = o.induced_colouring().map_err(err)?;
    let rank = rank_exact(&o.colouring_matrix(&phi).map_err(err)?);
    ensure(rank == 10, || format!("rank {rank}"))?;
    ensure(o.is_infinitesimally_rigid().map_err(err)?, || "not rigid".into())?;
    ensure(o.is_redundantly_rigid().map_err(err)?, || "not redundantly rigid".into())?;
    let classes = o.monochromatic_subgraphs(&phi).map_err(err)?;
    ensure(classes.len() == 2 && classes.iter().all(is_2_connected), || "colour class not 2-connected".into())?;
    ensure(certify_generic_global(&o).map_err(err)?, || "certificate rejected".into())?;
    Ok("rank 10, both classes 2-connected, certified".into())
}

fn c2_k4() -> Check {
    let norm = PolytopeNorm::linf(2);
    let mut searched = 0;
    for seed in 0..20 {
        let fw = randomize_rigid_realisation(&Graph::complete(4), &norm, seed, 1_000_000).map_err(err)?;
        let v = decide_global_rigidity(&fw, GlobalOptions::default());
        ensure(v.outcome == Outcome::NotGloballyRigid, || format!("seed {seed}: {:?}", v.outcome))?;
        let q = v.witness.ok_or_else(|| format!("seed {seed}: no witness"))?;
        verify_linf_witness(&fw, &q).map_err(|e| format!("seed {seed}: {e}"))?;
        searched += v.certificate.search.complete;
    }
    Ok(format!("20/20 NotGloballyRigid with verified witnesses, {searched} complete colourings examined"))
}

fn c3_k5() -> Check {
    let g = Graph::complete(5);
    ensure(is_mdd_connected(&g, 2).map_err(err)?, || "K5 not M(2,2)-connected".into())?;
    let norm = PolytopeNorm::linf(2);
    for seed in 0..20 {
        let fw = randomize_rigid_realisation(&g, &norm, seed, 1_000_000).map_err(err)?;
        ensure(!fw.is_redundantly_rigid().map_err(err)?, || format!("seed {seed}: redundantly rigid"))?;
    }
    ensure(decide_generic_global_linf2(&g, None).map_err(err)?, || "generic criterion false".into())?;
    Ok("M(2,2)-connected, 20/20 not redundantly rigid, generic criterion true".into())
}

fn c4_pebble() -> Check {
    let params = [(2, 2), (2, 3), (3, 3)];
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 1..=5usize {
        let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        for mask in 0u32..1 << all.len() {
            let edges: Vec<_> = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            graphs.push(Graph::from_indices(n, &edges).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let p = rng.random_range(0.3..0.95);
        graphs.push(random_graph(&mut rng, 6, p));
    }
    for g in &graphs {
        for &(d, k) in &params {
            let fast = pebble_rank(g, SparsityParams::new(d, k).map_err(err)?).map_err(err)?;
            let slow = brute_force_rank(g.vertex_count(), g.edges(), d, k);
            ensure(fast == slow, || format!("({d},{k}) on {:?}: pebble {fast}, brute force {slow}", g.edges()))?;
        }
    }
    Ok(format!("{} graphs x 3 parameter pairs agree", graphs.len()))
}

fn c5_tightness() -> Check {
    let banana = double_banana();
    ensure(is_tight(&banana, SparsityParams::new(3, 6).map_err(err)?).map_err(err)?, || "double banana".into())?;
    // Counting check from the definition, independent of the library.
    let n = banana.vertex_count();
    let counted = banana.edge_count() == 3 * n - 6
        && (0u32..1 << n).filter(|x| x.count_ones() >= 3).all(|x| {
            let inside = banana.edges().iter().filter(|&&(a, b)| x >> a & 1 == 1 && x >> b & 1 == 1).count();
            inside <= 3 * x.count_ones() as usize - 6
        });
    ensure(counted, || "double banana fails the counting definition".into())?;
    ensure(is_tight(&Graph::complete(4), SparsityParams::new(2, 2).map_err(err)?).map_err(err)?, || "K4".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tree = SparsityParams::new(1, 1).map_err(err)?;
    for t in 0..50 {
        let n = rng.random_range(1..=12);
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
        let g = Graph::from_indices(n, &edges).unwrap();
        ensure(is_tight(&g, tree).map_err(err)?, || format!("tree {t}: {edges:?}"))?;
    }
    Ok("double banana (3,6)-tight, K4 (2,2)-tight, 50/50 trees (1,1)-tight".into())
}

fn c6_rank_formula() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..500 {
        let n = rng.random_range(2..=8);
        let d = rng.random_range(1..=3);
        let p = rng.random_range(0.2..0.9);
        let g = random_graph(&mut rng, n, p);
        let norm = PolytopeNorm::linf(d);
        let mut coords = Vec::new();
        let faces: Vec<usize> = (0..g.edge_count())
            .map(|_| {
                let i = rng.random_range(0..d);
                let mut f = vec![Rational::zero(); d];
                f[i] = int(if rng.random_bool(0.5) { 1 } else { -1 });
                coords.push(i);
                norm.face_index(&f).expect("±b_i is a face")
            })
            .collect();
        let phi = DirectedColouring::from_faces(faces);
        let rank = rank_exact(&colouring_matrix(&g, &phi, &norm).map_err(err)?);
        let expected: usize = (0..d)
            .map(|i| {
                let class: Vec<_> = g.edges().iter().zip(&coords).filter(|(_, &c)| c == i).map(|(&e, _)| e).collect();
                n - union_find_components(n, &class)
            })
            .sum();
        ensure(rank == expected, || format!("trial {trial}: rank {rank}, formula {expected}"))?;
    }
    Ok("500/500 colourings match".into())
}

fn c7_constructions() -> Check {
    let eps = rat(1, 4);
    for d in 2..=4 {
        let fw = build_k2d(d, &eps, 2 * d).map_err(err)?.complete;
        ensure(fw.is_rigid_linf_by_colour().map_err(err)?, || format!("d={d}: colour classes disconnected"))?;
        let g = fw.graph();
        let label = |v: usize| g.name(v).parse::<i64>().unwrap();
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            let (la, lb) = (label(a), label(b));
            let want = if (la > 0) == (lb > 0) { la.abs().min(lb.abs()) } else { la.abs().max(lb.abs()) };
            let ev = fw.edge_vector(e);
            let top = linf_dist(&ev, &vec![Rational::zero(); d]);
            let active: Vec<usize> = (0..d).filter(|&i| ev[i].abs() == top).collect();
            ensure(active == vec![want as usize - 1], || format!("d={d}: edge {la},{lb} coloured {active:?}"))?;
        }
    }
    for d in 1..=3 {
        let h = build_hypercube(d).map_err(err)?;
        let p = h.positions();
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                ensure(linf_dist(&p[a], &p[b]) == int(2), || format!("hypercube d={d}: {a},{b}"))?;
            }
        }
    }
    // The construction itself puts 3 and -3 on one point after projection,
    // so a colouring-preserving perturbation supplies the genericity the
    // projection statement assumes.
    let k6 = build_k2d(3, &eps, 6).map_err(err)?.complete;
    let moved = perturb_preserving_colouring(&k6, 7, &rat(1, 50)).map_err(err)?;
    ensure(moved.is_infinitesimally_rigid().map_err(err)?, || "perturbed K6 not rigid".into())?;
    let proj = project_framework(&moved).map_err(err)?;
    ensure(proj.is_well_positioned(), || "projection not well-positioned".into())?;
    ensure(is_mdd_connected(proj.graph(), 2).map_err(err)?, || "K6 not M(2,2)-connected".into())?;
    let classes = proj.monochromatic_subgraphs(&proj.induced_colouring().map_err(err)?).map_err(err)?;
    ensure(classes.iter().all(is_connected), || "projected colour class disconnected".into())?;
    Ok("k2d colour tables for d=2,3,4, hypercube distances 2, projected K6 M(2,2)-connected with connected classes".into())
}

fn c8_gadget() -> Check {
    let line = std::sync::Arc::new(PolytopeNorm::linf(1));
    let path = Framework::new(Graph::path(3), line.clone(), vec![vec![int(0)], vec![int(1)], vec![int(3)]]).map_err(err)?;
    let gadget = build_np_gadget(&GadgetSpec::new(path, 2)).map_err(err)?;
    // Reflect the last vertex through the middle one.
    let q = gadget.lift(&[vec![int(0)], vec![int(1)], vec![int(-1)]]).map_err(err)?;
    verify_linf_witness(&gadget.framework, &q)?;
    ensure(!congruence_check(&gadget.framework, &q), || "library calls the lift congruent".into())?;
    let k3 = Framework::new(Graph::complete(3), line, vec![vec![int(0)], vec![rat(3, 7)], vec![rat(11, 5)]])
        .map_err(err)?;
    let gadget = build_np_gadget(&GadgetSpec::new(k3, 2)).map_err(err)?;
    let counts = (gadget.framework.graph().vertex_count(), gadget.framework.graph().edge_count());
    ensure(counts == (7, 19), || format!("K3 gadget has {counts:?}"))?;
    let params = SearchParams { restarts: 10_000, ..SearchParams::default() };
    let r = numeric_witness_search(&gadget.framework, &params);
    if let Some(q) = &r.witness {
        let verified = verify_linf_witness(&gadget.framework, q).is_ok();
        let moved: Vec<&str> = (0..q.len()).filter(|&v| q[v] != gadget.framework.positions()[v]).map(|v| gadget.framework.graph().name(v)).collect();
        return Err(format!(
            "K3 gadget has an equivalent non-congruent realisation (independently verified: {verified}; moved vertices {moved:?}) after {} restarts",
            r.restarts_run
        ));
    }
    ensure(r.restarts_run == 10_000, || format!("only {} restarts ran", r.restarts_run))?;
    Ok(format!("path lift verified; K3 gadget: no witness in 10^4 restarts ({} converged, all congruent)", r.converged))
}

fn c9_groups() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases: [(PolytopeNorm, usize, fn(&[Rational]) -> Rational); 4] = [
        (PolytopeNorm::linf(1), 2, |x| linf_dist(x, &vec![Rational::zero(); x.len()])),
        (PolytopeNorm::linf(2), 8, |x| linf_dist(x, &vec![Rational::zero(); x.len()])),
        (PolytopeNorm::linf(3), 48, |x| linf_dist(x, &vec![Rational::zero(); x.len()])),
        (PolytopeNorm::l1(2), 8, |x| l1_norm(x)),
    ];
    for (norm, order, direct) in &cases {
        let group = norm.isometry_group();
        ensure(group.len() == *order, || format!("{:?}^{}: order {}", norm.kind(), norm.dim(), group.len()))?;
        for _ in 0..100 {
            let x: Vector = (0..norm.dim()).map(|_| rat(rng.random_range(-500..=500), rng.random_range(1..=97))).collect();
            let n = direct(&x);
            ensure(norm.eval(&x).map_err(err)? == n, || format!("norm of {x:?}"))?;
            for t in group {
                ensure(direct(&t.apply(&x)) == n, || format!("isometry moves the norm of {x:?}"))?;
            }
        }
    }
    Ok("orders 2, 8, 48, 8; norms preserved on 100 vectors each".into())
}

fn c10_consistency() -> Check {
    let linf2 = PolytopeNorm::linf(2);
    let mut suite: Vec<(String, Framework)> = Vec::new();
    for seed in 0..15 {
        suite.push((format!("K4#{seed}"), randomize_rigid_realisation(&Graph::complete(4), &linf2, 100 + seed, 1000).map_err(err)?));
    }
    for seed in 0..10 {
        suite.push((format!("K5#{seed}"), randomize_rigid_realisation(&Graph::complete(5), &linf2, 200 + seed, 1000).map_err(err)?));
    }
    let octahedron = build_octahedron();
    suite.push(("octahedron".into(), octahedron.clone()));
    for seed in 0..4 {
        suite.push((format!("octahedron~{seed}"), perturb_preserving_colouring(&octahedron, 300 + seed, &rat(1, 100)).map_err(err)?));
    }
    let flexible_graphs = [Graph::complete(4), Graph::complete(5), Graph::cycle(5), Graph::path(4), double_banana()];
    for (i, g) in flexible_graphs.iter().enumerate() {
        for j in 0..4i64 {
            let base = build_flexible_with(g, &linf2, &[int(1), rat(1, 3 + j)]).map_err(err)?;
            let fw = if j % 2 == 0 { base } else { perturb_preserving_colouring(&base, 400 + i as u64, &rat(1, 100)).map_err(err)? };
            suite.push((format!("flexible{i}.{j}"), fw));
        }
    }
    let mut found = 0;
    let mut exact_gr = 0;
    for (name, fw) in &suite {
        let params = SearchParams { restarts: 20, seed: 10, ..SearchParams::default() };
        let oracle = numeric_witness_search(fw, &params);
        let verdict = decide_global_rigidity(fw, GlobalOptions::default());
        if let Some(q) = &oracle.witness {
            found += 1;
            verify_linf_witness(fw, q).map_err(|e| format!("{name}: oracle witness: {e}"))?;
        }
        if let Some(q) = &verdict.witness {
            verify_linf_witness(fw, q).map_err(|e| format!("{name}: exact witness: {e}"))?;
        }
        exact_gr += usize::from(verdict.outcome == Outcome::GloballyRigid);
        ensure(!(oracle.witness.is_some() && verdict.outcome == Outcome::GloballyRigid), || {
            format!("{name}: oracle witness but exact verdict GloballyRigid")
        })?;
        ensure(verdict.outcome != Outcome::BudgetExceeded, || format!("{name}: budget exceeded"))?;
    }
    Ok(format!("{} instances, 0 violations ({found} oracle witnesses, {exact_gr} exact GloballyRigid)", suite.len()))
}

fn c11_stability() -> Check {
    let o = build_octahedron();
    let base = decide_global_rigidity(&o, GlobalOptions::default());
    ensure(base.outcome == Outcome::GloballyRigid, || format!("octahedron: {:?}", base.outcome))?;
    let phi = o.induced_colouring().map_err(err)?;
    for seed in 0..10 {
        let moved = perturb_preserving_colouring(&o, seed, &rat(1, 100)).map_err(err)?;
        ensure(moved.induced_colouring().map_err(err)? == phi, || format!("seed {seed}: colouring changed"))?;
        let v = decide_global_rigidity(&moved, GlobalOptions::default());
        ensure(v.outcome == Outcome::GloballyRigid, || format!("seed {seed}: {:?}", v.outcome))?;
    }
    Ok("octahedron and 10/10 perturbations GloballyRigid".into())
}

fn main() {
    let criteria: [(&str, Option<Duration>, fn() -> Check); 11] = [
        ("octahedron rigidity and certificate", Some(Duration::from_secs(1)), c1_octahedron),
        ("K4 in l_inf^2 never globally rigid", Some(Duration::from_secs(30)), c2_k4),
        ("K5 in l_inf^2", Some(Duration::from_secs(30)), c3_k5),
        ("pebble game against brute force", Some(Duration::from_secs(300)), c4_pebble),
        ("sparsity tightness", None, c5_tightness),
        ("l_inf rank formula", None, c6_rank_formula),
        ("constructions", Some(Duration::from_secs(30)), c7_constructions),
        ("hardness gadget round trip", None, c8_gadget),
        ("isometry groups", None, c9_groups),
        ("oracle and exact engine agree", None, c10_consistency),
        ("octahedron verdict stable under perturbation", None, c11_stability),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = check();
        let elapsed = started.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if elapsed > *limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
}

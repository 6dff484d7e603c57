//! Explicit frameworks: the rigid `K_{2d}` family, hypercubes, the planar
//! octahedron, the hardness gadget, open sets of flexible realisations and
//! seeded pseudo-random realisations.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::framework::Framework;
use crate::graph::{is_connected, Edge, Graph};
use crate::norm::{NormKind, PolytopeNorm};
use crate::rational::{int, rat, scale, Rational, Vector};

/// The `K_{2d}` realisation with `p(i) = (0,…,0,1,ε,…,ε)` (the `1` in slot
/// `i`) and `p(-i) = -p(i)`, extended to `n` vertices by points at the
/// origin.
#[derive(Debug, Clone)]
pub struct K2d {
    /// `K_n` on `1..d, -1..-d` followed by the origin vertices.
    pub complete: Framework,
    /// `K_{2d}` plus the edges from `1..d` to the origin vertices; this
    /// subframework is well-positioned.
    pub rigid_part: Framework,
    /// Per edge of `complete`: whether its edge vector is a smooth point.
    pub well_positioned: Vec<bool>,
}

pub fn build_k2d(d: usize, epsilon: &Rational, n: usize) -> Result<K2d> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    if !(epsilon.is_positive() && *epsilon < rat(1, 2)) {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1/2)".into()));
    }
    if n < 2 * d {
        return Err(Error::InvalidParameter(format!("n = {n} is below 2d = {}", 2 * d)));
    }
    let mut names = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    for i in 0..d {
        names.push((i + 1).to_string());
        positions.push((0..d).map(|j| if j < i { int(0) } else if j == i { int(1) } else { epsilon.clone() }).collect::<Vector>());
    }
    for i in 0..d {
        names.push(format!("-{}", i + 1));
        positions.push(scale(&positions[i], &int(-1)));
    }
    for w in d + 1..=n - d {
        names.push(w.to_string());
        positions.push(vec![int(0); d]);
    }
    let norm = Arc::new(PolytopeNorm::linf(d));
    let complete = Framework::new(Graph::with_names(names.clone(), &complete_edges(n))?, norm.clone(), positions.clone())?;
    let mut rigid_edges = complete_edges(2 * d);
    for w in 2 * d..n {
        rigid_edges.extend((0..d).map(|v| (v, w)));
    }
    let rigid_part = Framework::new(Graph::with_names(names, &rigid_edges)?, norm, positions)?;
    let well_positioned = (0..complete.graph().edge_count())
        .map(|e| complete.norm().is_smooth_point(&complete.edge_vector(e)).unwrap_or(false))
        .collect();
    Ok(K2d { complete, rigid_part, well_positioned })
}

fn complete_edges(n: usize) -> Vec<Edge> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Sign vectors of `{-1, 1}^d` in lexicographic order (`-1` first).
fn sign_vectors(d: usize) -> Vec<Vec<i64>> {
    (0..1usize << d).map(|m| (0..d).map(|i| if m >> (d - 1 - i) & 1 == 1 { 1 } else { -1 }).collect()).collect()
}

fn sign_name(x: &[i64]) -> String {
    std::iter::once('s').chain(x.iter().map(|&s| if s > 0 { '+' } else { '-' })).collect()
}

/// `K_{2^d}` on the vertices of the cube `{-1, 1}^d` in ℓ∞^d.
pub fn build_hypercube(d: usize) -> Result<Framework> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let signs = sign_vectors(d);
    let names = signs.iter().map(|x| sign_name(x)).collect();
    let positions = signs.iter().map(|x| x.iter().map(|&s| int(s)).collect()).collect();
    Framework::new(Graph::with_names(names, &complete_edges(signs.len()))?, Arc::new(PolytopeNorm::linf(d)), positions)
}

/// The octahedron graph (`v_i v_j` for `|i| ≠ |j|`) in ℓ∞², with both colour
/// classes 2-connected.
pub fn build_octahedron() -> Framework {
    let labels = [-1i64, -2, -3, 1, 2, 3];
    let names: Vec<String> = labels.iter().map(|i| format!("v{i}")).collect();
    let positions = vec![
        vec![int(0), rat(9, 10)],
        vec![int(1), int(0)],
        vec![int(0), int(0)],
        vec![int(1), rat(9, 10)],
        vec![int(1), rat(9, 5)],
        vec![int(0), rat(9, 5)],
    ];
    let edges: Vec<Edge> = complete_edges(6).into_iter().filter(|&(a, b)| labels[a].abs() != labels[b].abs()).collect();
    let graph = Graph::with_names(names, &edges).expect("octahedron is simple");
    Framework::new(graph, Arc::new(PolytopeNorm::linf(2)), positions).expect("positions match")
}

/// Two copies of `K_5` minus an edge glued along the missing edge's
/// endpoints: 8 vertices and 18 edges.
pub fn double_banana() -> Graph {
    let mut edges = Vec::new();
    for offset in [2, 5] {
        let banana = [0, 1, offset, offset + 1, offset + 2];
        for a in 0..5 {
            for b in a + 1..5 {
                if (a, b) != (0, 1) {
                    edges.push((banana[a], banana[b]));
                }
            }
        }
    }
    Graph::from_indices(8, &edges).expect("double banana is simple")
}

/// Input to [`build_np_gadget`].
#[derive(Debug, Clone)]
pub struct GadgetSpec {
    /// A framework in ℓ∞¹ on a connected graph with a nonzero-length edge.
    pub seed: Framework,
    pub d: usize,
    /// After normalisation every seed point lies within
    /// `epsilon / (2|E|)` of `1`; must lie in `(0, 1)`.
    pub epsilon: Rational,
}

impl GadgetSpec {
    pub fn new(seed: Framework, d: usize) -> Self {
        GadgetSpec { seed, d, epsilon: rat(1, 2) }
    }
}

/// The gadget framework together with the seed normalisation
/// `x ↦ 1 + s (x - p(v_0))`.
#[derive(Debug, Clone)]
pub struct Gadget {
    pub framework: Framework,
    /// `|p(v_1) - p(v_0)|` after normalisation.
    pub lambda: Rational,
    pub v0: usize,
    pub v1: usize,
    /// Signed scale `s` of the normalisation.
    pub scale: Rational,
    seed_vertices: usize,
}

impl Gadget {
    pub fn seed_vertex_count(&self) -> usize {
        self.seed_vertices
    }

    /// First coordinates of a normalised seed realisation.
    fn normalise(&self, seed_positions: &[Vector], anchor: &Rational) -> Vec<Rational> {
        seed_positions.iter().map(|x| Rational::one() + &self.scale * (&x[0] - anchor)).collect()
    }

    /// Lifts a seed realisation `q` equivalent to the seed to an equivalent
    /// realisation of the gadget: normalise, move `q(v_0)` to `1` and
    /// `q(v_1)` to `1 + λ`, embed on the first axis and keep the cube fixed.
    pub fn lift(&self, q: &[Vector]) -> Result<Vec<Vector>> {
        if q.len() != self.seed_vertices || q.iter().any(|x| x.len() != 1) {
            return Err(Error::InvalidParameter("lift expects a 1-dimensional seed realisation".into()));
        }
        let mut y = self.normalise(q, &q[self.v0][0]);
        if y[self.v1] < Rational::one() {
            for v in &mut y {
                *v = int(2) - &*v;
            }
        }
        let d = self.framework.dim();
        let mut out: Vec<Vector> = y
            .into_iter()
            .map(|t| std::iter::once(t).chain(std::iter::repeat_n(Rational::zero(), d - 1)).collect())
            .collect();
        out.extend(self.framework.positions()[self.seed_vertices..].iter().cloned());
        Ok(out)
    }
}

pub fn build_np_gadget(spec: &GadgetSpec) -> Result<Gadget> {
    let seed = &spec.seed;
    if seed.dim() != 1 || !seed.norm().is_linf() {
        return Err(Error::InvalidParameter("seed must live in ℓ∞¹".into()));
    }
    if spec.d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    if !(spec.epsilon.is_positive() && spec.epsilon < Rational::one()) {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1)".into()));
    }
    let g = seed.graph();
    if !is_connected(g) {
        return Err(Error::InvalidGraph("seed graph is disconnected".into()));
    }
    let lengths = seed.edge_lengths();
    let Some(e0) = lengths.iter().position(|l| !l.is_zero()) else {
        return Err(Error::InvalidParameter("every seed edge has length zero".into()));
    };
    let (v0, v1) = g.edges()[e0];
    let p = |v: usize| &seed.position(v)[0];
    let spread = (0..g.vertex_count()).map(|v| (p(v) - p(v0)).abs()).max().expect("nonempty");
    let radius = &spec.epsilon / Rational::from_integer(BigInt::from(2 * g.edge_count()));
    let mut s = radius / spread;
    if p(v1) < p(v0) {
        s = -s;
    }
    let lambda = &s * (p(v1) - p(v0));
    let n = g.vertex_count();
    let signs = sign_vectors(spec.d);
    let mut names: Vec<String> = g.names().to_vec();
    names.extend(signs.iter().map(|x| sign_name(x)));
    let mut positions: Vec<Vector> = (0..n)
        .map(|v| {
            let t = Rational::one() + &s * (p(v) - p(v0));
            std::iter::once(t).chain(std::iter::repeat_n(Rational::zero(), spec.d - 1)).collect()
        })
        .collect();
    positions.extend(signs.iter().map(|x| x.iter().map(|&c| int(c)).collect::<Vector>()));
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let cube: Vec<usize> = (n..n + signs.len()).collect();
    edges.extend(complete_edges(signs.len()).into_iter().map(|(a, b)| (n + a, n + b)));
    for &x in &cube {
        edges.push((v0, x));
        edges.push((v1, x));
    }
    for v in 0..n {
        for (&x, sx) in cube.iter().zip(&signs) {
            if sx[0] == 1 {
                edges.push((v, x));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::with_names(names, &edges)?;
    let framework = Framework::new(graph, Arc::new(PolytopeNorm::linf(spec.d)), positions)?;
    Ok(Gadget { framework, lambda, v0, v1, scale: s, seed_vertices: n })
}

/// A smooth point of the norm with small rational entries.
pub fn smooth_direction(norm: &PolytopeNorm) -> Result<Vector> {
    let d = norm.dim();
    for k in 2..200i64 {
        let x: Vector = (0..d).map(|i| if i == 0 { int(1) } else { rat(1, k.pow(i as u32) + i as i64) }).collect();
        if norm.is_smooth_point(&x)? {
            return Ok(x);
        }
    }
    Err(Error::InvalidParameter("no smooth direction found".into()))
}

/// `p(v_j) = j x` for a smooth `x`: every edge gets the same face, so the
/// framework is well-positioned and flexible, and so is every small
/// perturbation of it.
pub fn build_flexible_open(g: &Graph, norm: &PolytopeNorm) -> Result<Framework> {
    build_flexible_with(g, norm, &smooth_direction(norm)?)
}

pub fn build_flexible_with(g: &Graph, norm: &PolytopeNorm, x: &[Rational]) -> Result<Framework> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    if norm.dim() < 2 {
        return Err(Error::InvalidParameter("need dimension at least 2".into()));
    }
    if !norm.is_smooth_point(x)? {
        return Err(Error::InvalidParameter("direction is not a smooth point".into()));
    }
    let positions = (0..g.vertex_count()).map(|j| scale(x, &int(j as i64 + 1))).collect();
    Framework::new(g.clone(), Arc::new(norm.clone()), positions)
}

/// Drops the last coordinate of an ℓ∞^{d+1} framework.
pub fn project_framework(fw: &Framework) -> Result<Framework> {
    if !fw.norm().is_linf() {
        return Err(Error::NotLinf);
    }
    if fw.dim() < 2 {
        return Err(Error::InvalidParameter("cannot project below dimension 1".into()));
    }
    let d = fw.dim() - 1;
    let positions = fw.positions().iter().map(|p| p[..d].to_vec()).collect();
    Framework::new(fw.graph().clone(), Arc::new(PolytopeNorm::linf(d)), positions)
}

const MAX_ATTEMPTS: usize = 1000;

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let den = rng.random_range(1..=bound);
    let num = rng.random_range(-den..=den);
    rat(num, den)
}

/// Seeded pseudo-random positions in `[-1, 1]^d` with denominators at most
/// `denominator_bound`, redrawn until well-positioned. Rational points are
/// never generic; conclusions drawn from them only hold generically.
pub fn randomize_realisation(
    g: &Graph,
    norm: &PolytopeNorm,
    seed: u64,
    denominator_bound: i64,
) -> Result<Framework> {
    randomize_until(g, norm, seed, denominator_bound, |_| Ok(true))
}

/// As [`randomize_realisation`], also requiring infinitesimal rigidity.
pub fn randomize_rigid_realisation(
    g: &Graph,
    norm: &PolytopeNorm,
    seed: u64,
    denominator_bound: i64,
) -> Result<Framework> {
    randomize_until(g, norm, seed, denominator_bound, Framework::is_infinitesimally_rigid)
}

fn randomize_until(
    g: &Graph,
    norm: &PolytopeNorm,
    seed: u64,
    bound: i64,
    accept: impl Fn(&Framework) -> Result<bool>,
) -> Result<Framework> {
    if bound < 2 {
        return Err(Error::InvalidParameter("denominator bound must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm = Arc::new(norm.clone());
    for _ in 0..MAX_ATTEMPTS {
        let positions = (0..g.vertex_count()).map(|_| (0..norm.dim()).map(|_| random_rational(&mut rng, bound)).collect()).collect();
        let fw = Framework::new(g.clone(), norm.clone(), positions)?;
        if fw.is_well_positioned() && accept(&fw)? {
            return Ok(fw);
        }
    }
    Err(Error::InvalidParameter(format!("no suitable realisation after {MAX_ATTEMPTS} attempts")))
}

/// Moves every coordinate by a seeded rational of size at most `size`,
/// halving the size until the induced colouring is unchanged.
pub fn perturb_preserving_colouring(fw: &Framework, seed: u64, size: &Rational) -> Result<Framework> {
    let phi = fw.induced_colouring()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut size = size.clone();
    for _ in 0..64 {
        let positions = fw
            .positions()
            .iter()
            .map(|p| p.iter().map(|x| x + &size * random_rational(&mut rng, 997)).collect())
            .collect();
        let moved = fw.with_positions(positions)?;
        if moved.induced_colouring().ok().as_ref() == Some(&phi) {
            return Ok(moved);
        }
        size /= int(2);
    }
    Err(Error::InvalidParameter("could not perturb without changing the colouring".into()))
}

/// ℓ∞² and ℓ1² are isometric through `(x, y) ↦ (x + y, x - y)`; returns the
/// image of an ℓ1² framework in ℓ∞².
pub fn l1_plane_to_linf(fw: &Framework) -> Result<Framework> {
    if fw.norm().kind() != NormKind::L1 || fw.dim() != 2 {
        return Err(Error::InvalidParameter("expected an ℓ1² framework".into()));
    }
    let positions = fw.positions().iter().map(|p| vec![&p[0] + &p[1], &p[0] - &p[1]]).collect();
    Framework::new(fw.graph().clone(), Arc::new(PolytopeNorm::linf(2)), positions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_2_connected;
    use crate::rational::ints;

    #[test]
    fn k2d_small() {
        let k = build_k2d(2, &rat(1, 4), 4).unwrap();
        let p = k.complete.positions();
        assert_eq!(p[0], vec![int(1), rat(1, 4)]);
        assert_eq!(p[1], ints(&[0, 1]));
        assert_eq!(p[2], vec![int(-1), rat(-1, 4)]);
        assert_eq!(p[3], ints(&[0, -1]));
        assert!(k.well_positioned.iter().all(|&w| w));
        assert!(k.complete.is_rigid_linf_by_colour().unwrap());
        let classes = k.complete.monochromatic_subgraphs(&k.complete.induced_colouring().unwrap()).unwrap();
        assert_eq!(classes.iter().map(Graph::edge_count).collect::<Vec<_>>(), vec![3, 3]);
        assert!(build_k2d(2, &rat(1, 2), 4).is_err());
        assert!(build_k2d(2, &rat(1, 4), 3).is_err());
    }

    #[test]
    fn k2d_extensions() {
        let k5 = build_k2d(2, &rat(1, 4), 5).unwrap();
        assert_eq!(k5.complete.graph().edge_count(), 10);
        assert!(k5.complete.is_well_positioned());
        assert!(k5.complete.is_infinitesimally_rigid().unwrap());
        let k6 = build_k2d(2, &rat(1, 4), 6).unwrap();
        assert!(!k6.complete.is_well_positioned());
        assert_eq!(k6.well_positioned.iter().filter(|&&w| !w).count(), 1);
        assert!(k6.rigid_part.is_well_positioned());
        assert!(k6.rigid_part.is_infinitesimally_rigid().unwrap());
    }

    #[test]
    fn hypercube_distances() {
        for d in 1..=3 {
            let h = build_hypercube(d).unwrap();
            assert_eq!(h.graph().vertex_count(), 1 << d);
            assert!(h.edge_lengths().iter().all(|l| *l == int(2)));
        }
        assert!(!build_hypercube(2).unwrap().is_well_positioned());
    }

    #[test]
    fn octahedron() {
        let o = build_octahedron();
        assert_eq!(o.graph().edge_count(), 12);
        let phi = o.induced_colouring().unwrap();
        let classes = o.monochromatic_subgraphs(&phi).unwrap();
        assert!(classes.iter().all(|c| c.edge_count() == 6 && is_2_connected(c)));
    }

    #[test]
    fn gadget_counts() {
        let seed = Framework::new(
            Graph::complete(3),
            Arc::new(PolytopeNorm::linf(1)),
            vec![ints(&[0]), vec![rat(3, 7)], vec![rat(11, 5)]],
        )
        .unwrap();
        let g = build_np_gadget(&GadgetSpec::new(seed.clone(), 2)).unwrap();
        assert_eq!(g.framework.graph().vertex_count(), 7);
        assert_eq!(g.framework.graph().edge_count(), 19);
        assert!(g.lambda.is_positive());
        let bound = rat(1, 2 * 3);
        for v in 0..3 {
            assert!((&g.framework.position(v)[0] - int(1)).abs() < bound);
        }
        let lifted = g.lift(seed.positions()).unwrap();
        assert_eq!(&lifted[..], g.framework.positions());
    }

    #[test]
    fn flexible_and_projection() {
        let norm = PolytopeNorm::linf(2);
        let fw = build_flexible_with(&Graph::complete(4), &norm, &[int(1), rat(1, 3)]).unwrap();
        let phi = fw.induced_colouring().unwrap();
        assert!(phi.entries().iter().all(|f| *f == phi.get(0)));
        assert!(!fw.is_infinitesimally_rigid().unwrap());
        let auto = build_flexible_open(&Graph::path(2), &PolytopeNorm::l1(3)).unwrap();
        assert!(auto.is_well_positioned());
        let k6 = build_k2d(3, &rat(1, 4), 6).unwrap().complete;
        let proj = project_framework(&k6).unwrap();
        assert_eq!(proj.dim(), 2);
        assert!(project_framework(&build_hypercube(1).unwrap()).is_err());
    }

    #[test]
    fn random_realisations_are_reproducible() {
        let g = Graph::complete(5);
        let norm = PolytopeNorm::linf(2);
        let a = randomize_realisation(&g, &norm, 1, 1_000_000).unwrap();
        let b = randomize_realisation(&g, &norm, 1, 1_000_000).unwrap();
        assert_eq!(a.positions(), b.positions());
        assert!(a.is_well_positioned());
        let r = randomize_rigid_realisation(&Graph::complete(4), &norm, 7, 100).unwrap();
        assert!(r.is_infinitesimally_rigid().unwrap());
        let moved = perturb_preserving_colouring(&r, 3, &rat(1, 100)).unwrap();
        assert_eq!(moved.induced_colouring().unwrap(), r.induced_colouring().unwrap());
        assert_ne!(moved.positions(), r.positions());
    }

    #[test]
    fn l1_plane_map_preserves_lengths() {
        let fw = randomize_realisation(&Graph::complete(4), &PolytopeNorm::l1(2), 5, 50).unwrap();
        let image = l1_plane_to_linf(&fw).unwrap();
        assert_eq!(image.edge_lengths(), fw.edge_lengths());
        assert!(image.is_well_positioned());
    }
}

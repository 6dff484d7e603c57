//! Numeric falsifier for global rigidity and exact congruence testing.
//!
//! The search works in floating point; anything it reports has been rounded
//! to rationals and re-verified exactly, so a returned witness is a proof
//! that the framework is not globally rigid. Finding nothing proves nothing.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::framework::{lengths_of, Framework};
use crate::linalg::solve_affine;
use crate::rational::{add, approximate, common_denominator, sub, to_f64, Rational, Vector};

/// True iff `q = T p + t` for some linear isometry `T` and translation `t`.
pub fn congruence_check(fw: &Framework, q: &[Vector]) -> bool {
    let p = fw.positions();
    if q.len() != p.len() || q.iter().any(|x| x.len() != fw.dim()) {
        return false;
    }
    if p.is_empty() {
        return true;
    }
    fw.norm().isometry_group().iter().any(|t| {
        let shift = sub(&q[0], &t.apply(&p[0]));
        p.iter().zip(q).all(|(pv, qv)| add(&t.apply(pv), &shift) == *qv)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub restarts: u64,
    /// Local iterations per restart.
    pub steps: usize,
    /// Largest edge-length mismatch accepted before exact rounding.
    pub tolerance: Rational,
    pub seed: u64,
    /// Denominator bound for continued-fraction rounding.
    pub max_denominator: u64,
    pub threads: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            restarts: 1000,
            steps: 200,
            tolerance: Rational::new(BigInt::one(), BigInt::from(1_000_000_000u64)),
            seed: 0,
            max_denominator: 1_000_000,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WitnessSearch {
    pub witness: Option<Vec<Vector>>,
    pub restarts_run: u64,
    /// Restarts whose float solution met the tolerance.
    pub converged: u64,
    /// Converged candidates that were congruent to the input.
    pub congruent: u64,
    /// Converged candidates that no rounding strategy made exact.
    pub rounding_failures: u64,
}

struct Problem<'a> {
    fw: &'a Framework,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<f64>>,
    lengths: Vec<f64>,
    origin: Vec<f64>,
    d: usize,
    n: usize,
    scale: f64,
    tolerance: f64,
}

impl Problem<'_> {
    /// Vertex 0 is pinned at `p(v_0)`; `x` holds the other vertices.
    fn point(&self, x: &DVector<f64>, v: usize) -> Vec<f64> {
        if v == 0 {
            self.origin.clone()
        } else {
            (0..self.d).map(|i| x[(v - 1) * self.d + i]).collect()
        }
    }

    /// Residuals `‖q(v) - q(w)‖ - L_e` and the face attaining each norm.
    fn residuals(&self, x: &DVector<f64>) -> (DVector<f64>, Vec<usize>) {
        let mut r = DVector::zeros(self.edges.len());
        let mut active = Vec::with_capacity(self.edges.len());
        for (e, &(v, w)) in self.edges.iter().enumerate() {
            let (a, b) = (self.point(x, v), self.point(x, w));
            let diff: Vec<f64> = a.iter().zip(&b).map(|(s, t)| s - t).collect();
            let (best, val) = self
                .faces
                .iter()
                .map(|f| f.iter().zip(&diff).map(|(s, t)| s * t).sum::<f64>())
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
            r[e] = val - self.lengths[e];
            active.push(best);
        }
        (r, active)
    }

    fn jacobian(&self, active: &[usize]) -> DMatrix<f64> {
        let cols = self.d * (self.n - 1);
        let mut j = DMatrix::zeros(self.edges.len(), cols);
        for (e, &(v, w)) in self.edges.iter().enumerate() {
            for (i, &f) in self.faces[active[e]].iter().enumerate() {
                if v > 0 {
                    j[(e, (v - 1) * self.d + i)] = f;
                }
                j[(e, (w - 1) * self.d + i)] = -f;
            }
        }
        j
    }

    /// Gauss-Newton on the linear piece selected by the active faces, with
    /// backtracking; a subgradient step when the piece gives no descent.
    fn local_search(&self, mut x: DVector<f64>, steps: usize, rng: &mut ChaCha8Rng) -> Option<DVector<f64>> {
        let (mut r, mut active) = self.residuals(&x);
        let mut value = r.norm_squared();
        for _ in 0..steps {
            if r.amax() < self.tolerance {
                return Some(x);
            }
            let j = self.jacobian(&active);
            let mut moved = false;
            if let Ok(dx) = j.clone().svd(true, true).solve(&(-&r), 1e-12) {
                let mut alpha = 1.0;
                for _ in 0..30 {
                    let trial = &x + &dx * alpha;
                    let (tr, ta) = self.residuals(&trial);
                    let tv = tr.norm_squared();
                    if tv < value {
                        (x, r, active, value) = (trial, tr, ta, tv);
                        moved = true;
                        break;
                    }
                    alpha *= 0.5;
                }
            }
            if !moved {
                let g = j.transpose() * &r;
                let step = self.scale * 1e-3 * rng.random_range(0.5..1.5);
                let gn = g.norm();
                if gn == 0.0 {
                    return None;
                }
                x -= g * (step / gn);
                (r, active) = self.residuals(&x);
                value = r.norm_squared();
            }
        }
        (r.amax() < self.tolerance).then_some(x)
    }

    fn random_start(&self, rng: &mut ChaCha8Rng) -> DVector<f64> {
        DVector::from_fn(self.d * (self.n - 1), |k, _| self.origin[k % self.d] + rng.random_range(-self.scale..self.scale))
    }

    fn accept(&self, q: Vec<Vector>) -> Option<Vec<Vector>> {
        (lengths_of(self.fw.graph(), self.fw.norm(), &q) == self.fw.edge_lengths()).then_some(q)
    }

    /// Rounds a float candidate to an exact equivalent realisation.
    fn round(&self, x: &DVector<f64>, active: &[usize], max_den: u64) -> Option<Vec<Vector>> {
        let p0 = self.fw.position(0).clone();
        let den = common_denominator(self.fw.positions().iter().flatten());
        let grid = |t: f64| -> Rational {
            let scaled = (t * to_f64(&Rational::from_integer(den.clone()))).round();
            Rational::new(BigInt::from(scaled as i128), den.clone())
        };
        let with_origin = |rest: Vec<Vector>| -> Vec<Vector> { std::iter::once(p0.clone()).chain(rest).collect() };
        let blocks = |f: &dyn Fn(f64) -> Option<Rational>| -> Option<Vec<Vector>> {
            (1..self.n).map(|v| self.point(x, v).into_iter().map(f).collect::<Option<Vector>>()).collect()
        };
        if den.bits() < 50 {
            if let Some(q) = blocks(&|t| Some(grid(t))).and_then(|r| self.accept(with_origin(r))) {
                return Some(q);
            }
        }
        if let Some(q) = blocks(&|t| approximate(t, max_den)).and_then(|r| self.accept(with_origin(r))) {
            return Some(q);
        }
        self.round_affine(x, active, max_den)
    }

    /// Solves the exact system of the candidate's active faces and snaps
    /// the candidate's coordinates along the solution set.
    fn round_affine(&self, x: &DVector<f64>, active: &[usize], max_den: u64) -> Option<Vec<Vector>> {
        let d = self.d;
        let cols = d * (self.n - 1);
        let norm = self.fw.norm();
        let p0 = self.fw.position(0);
        let exact_lengths = self.fw.edge_lengths();
        let mut rows = Vec::with_capacity(self.edges.len());
        let mut rhs = Vec::with_capacity(self.edges.len());
        for (e, &(v, w)) in self.edges.iter().enumerate() {
            let face = norm.face(active[e]);
            let mut row = vec![Rational::zero(); cols];
            let mut b = exact_lengths[e].clone();
            for (i, f) in face.iter().enumerate() {
                if v > 0 {
                    row[(v - 1) * d + i] = f.clone();
                } else {
                    b -= f * &p0[i];
                }
                row[(w - 1) * d + i] = -f.clone();
            }
            rows.push(row);
            rhs.push(b);
        }
        let sol = solve_affine(&rows, &rhs, cols)?;
        let k = sol.kernel.len();
        let mut flat = sol.particular.clone();
        if k > 0 {
            let basis = DMatrix::from_fn(cols, k, |r, c| to_f64(&sol.kernel[c][r]));
            let offset = DVector::from_fn(cols, |r, _| x[r] - to_f64(&sol.particular[r]));
            let t = basis.svd(true, true).solve(&offset, 1e-12).ok()?;
            for (j, kv) in sol.kernel.iter().enumerate() {
                let tj = approximate(t[j], max_den)?;
                for (a, b) in flat.iter_mut().zip(kv) {
                    *a += b * &tj;
                }
            }
        }
        let rest: Vec<Vector> = flat.chunks(d).map(<[Rational]>::to_vec).collect();
        self.accept(std::iter::once(p0.clone()).chain(rest).collect())
    }
}

/// Multi-restart local search for an equivalent, non-congruent realisation.
pub fn numeric_witness_search(fw: &Framework, params: &SearchParams) -> WitnessSearch {
    let n = fw.graph().vertex_count();
    if n < 2 || fw.graph().edge_count() == 0 {
        return WitnessSearch::default();
    }
    let positions: Vec<Vec<f64>> = fw.positions().iter().map(|p| p.iter().map(to_f64).collect()).collect();
    let lengths: Vec<f64> = fw.edge_lengths().iter().map(to_f64).collect();
    let extent = positions
        .iter()
        .flat_map(|p| p.iter().zip(&positions[0]).map(|(a, b)| (a - b).abs()))
        .chain(lengths.iter().copied())
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let problem = Problem {
        fw,
        edges: fw.graph().edges().to_vec(),
        faces: fw.norm().faces().iter().map(|f| f.iter().map(to_f64).collect()).collect(),
        lengths,
        origin: positions[0].clone(),
        d: fw.dim(),
        n,
        scale: 2.0 * extent,
        tolerance: to_f64(&params.tolerance) * extent.max(1.0),
    };
    let next = AtomicU64::new(0);
    let latch = AtomicBool::new(false);
    let out = Mutex::new(WitnessSearch::default());
    let worker = || loop {
        let r = next.fetch_add(1, Ordering::Relaxed);
        if r >= params.restarts || latch.load(Ordering::Relaxed) {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(r);
        let start = problem.random_start(&mut rng);
        let found = problem.local_search(start, params.steps, &mut rng);
        let mut stats = out.lock().expect("no worker panics");
        stats.restarts_run += 1;
        let Some(x) = found else { continue };
        stats.converged += 1;
        drop(stats);
        let (_, active) = problem.residuals(&x);
        let exact = problem.round(&x, &active, params.max_denominator);
        let mut stats = out.lock().expect("no worker panics");
        match exact {
            None => stats.rounding_failures += 1,
            Some(q) if congruence_check(fw, &q) => stats.congruent += 1,
            Some(q) => {
                if stats.witness.is_none() {
                    stats.witness = Some(q);
                }
                latch.store(true, Ordering::Relaxed);
            }
        }
    };
    let threads = params.threads.clamp(1, params.restarts.max(1) as usize);
    if threads == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(worker);
            }
        });
    }
    out.into_inner().expect("no worker panics")
}

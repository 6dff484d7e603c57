//! Global rigidity: the exact decision procedure for well-positioned
//! frameworks, strong-colouring certificates and the planar ℓ∞ criterion.

mod search;
mod strong;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::framework::{lengths_of, ColouringMatrix, DirectedColouring, Framework};
use crate::graph::Graph;
use crate::linalg::{self, solve_affine};
use crate::norm::LinearIsometry;
use crate::oracle::congruence_check;
use crate::rational::{add, dot, integer_row, sub, Rational, Vector};
use crate::simplex::{feasible_point, Constraint};
use crate::sparsity::is_mdd_connected;

pub use crate::framework::is_strong_colouring_linf;
pub use search::SearchStats;
pub use strong::{is_strong_colouring_exhaustive, StrongCheck};

use search::{LeafOutcome, SearchSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    GloballyRigid,
    NotGloballyRigid,
    NotRigid,
    NotWellPositioned,
    BudgetExceeded,
}

/// The check that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Some edge vector is not a smooth point of the norm.
    WellPositioned,
    /// `rank M(G, φ_p) < d|V| - d`.
    RankDeficient,
    /// A colouring not isometric to `φ_p` admits an equivalent realisation.
    EquivalentRealisation,
    /// Every consistent colouring was examined without finding one.
    ExhaustiveSearch,
    /// Some search task ran out of budget.
    Budget,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub criterion: Criterion,
    pub search: SearchStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalVerdict {
    pub outcome: Outcome,
    /// An equivalent, non-congruent realisation; present iff the outcome is
    /// `NotGloballyRigid`.
    pub witness: Option<Vec<Vector>>,
    pub certificate: Certificate,
    /// Set when the verdict only holds for generic realisations.
    pub generic_caveat: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlobalOptions {
    /// Maximum partial colourings examined per search task.
    pub budget: u64,
    pub threads: usize,
}

impl Default for GlobalOptions {
    fn default() -> Self {
        GlobalOptions { budget: 10_000_000, threads: 1 }
    }
}

/// Some `T` in `group` with `φ = T ∘ ψ`.
pub fn is_isometric_colouring(phi: &DirectedColouring, psi: &DirectedColouring, group: &[LinearIsometry]) -> bool {
    phi.len() == psi.len()
        && group.iter().any(|t| phi.entries().iter().zip(psi.entries()).all(|(a, b)| *a == b.map(|i| t.face_map[i])))
}

/// `rank [M | b] = rank M`.
pub fn column_space_contains(m: &ColouringMatrix, b: &[Rational]) -> Result<bool> {
    if b.len() != m.row_count() {
        return Err(Error::DimensionMismatch { expected: m.row_count(), found: b.len() });
    }
    Ok(linalg::column_space_contains(m.rows(), b))
}

/// Rows of `M(G, φ)` with the columns of vertex 0 removed.
fn pinned_row(fw: &Framework, e: usize, face: Option<usize>) -> Vec<Rational> {
    let d = fw.dim();
    let n = fw.graph().vertex_count();
    let mut row = vec![Rational::zero(); d * n.saturating_sub(1)];
    let (v, w) = fw.graph().edges()[e];
    if let Some(f) = face {
        for (i, x) in fw.norm().face(f).iter().enumerate() {
            if v > 0 {
                row[(v - 1) * d + i] = x.clone();
            }
            row[(w - 1) * d + i] = -x.clone();
        }
    }
    row
}

/// Solves `M'(G, φ) q = f_G(p)` and looks for `q` in the solution set with
/// `f·(q(v) - q(w)) <= f_G(p)_e` for every face and edge. `None` when the
/// system is inconsistent or the program infeasible.
fn lp_witness(fw: &Framework, phi: &DirectedColouring, lengths: &[Rational]) -> Option<Vec<Vector>> {
    let d = fw.dim();
    let n = fw.graph().vertex_count();
    let rows: Vec<Vec<Rational>> = (0..phi.len()).map(|e| pinned_row(fw, e, phi.get(e))).collect();
    let sol = solve_affine(&rows, lengths, d * (n - 1))?;
    let block = |x: &[Rational], v: usize| -> Vector {
        if v == 0 {
            vec![Rational::zero(); d]
        } else {
            x[(v - 1) * d..v * d].to_vec()
        }
    };
    let mut constraints = Vec::new();
    for (e, &(v, w)) in fw.graph().edges().iter().enumerate() {
        let base = sub(&block(&sol.particular, v), &block(&sol.particular, w));
        let dirs: Vec<Vector> = sol.kernel.iter().map(|k| sub(&block(k, v), &block(k, w))).collect();
        for f in fw.norm().faces() {
            let coefficients = dirs.iter().map(|k| dot(f, k)).collect();
            constraints.push(Constraint::le(coefficients, &lengths[e] - dot(f, &base)));
        }
    }
    let t = if sol.kernel.is_empty() {
        constraints.iter().all(|c| c.bound >= Rational::zero()).then(Vec::new)?
    } else {
        feasible_point(sol.kernel.len(), &constraints)?
    };
    let mut flat = sol.particular.clone();
    for (k, tk) in sol.kernel.iter().zip(&t) {
        for (x, y) in flat.iter_mut().zip(k) {
            *x += y * tk;
        }
    }
    let origin = fw.position(0);
    Some((0..n).map(|v| add(&block(&flat, v), origin)).collect())
}

fn check_lp_preconditions(fw: &Framework, phi: &DirectedColouring) -> Result<()> {
    phi.check(fw.graph(), fw.norm())?;
    if let Some(e) = phi.entries().iter().position(Option::is_none) {
        return Err(Error::ZeroColour(e));
    }
    if !fw.is_infinitesimally_rigid()? {
        return Err(Error::Precondition("framework is not infinitesimally rigid".into()));
    }
    Ok(())
}

/// An equivalent realisation `q` with `φ ∈ Φ_q` and `q(v_0) = p(v_0)`, if one
/// exists. Errors with [`Error::Inconsistent`] when `M'(G, φ) q = f_G(p)` has
/// no solution.
pub fn equivalent_witness_lp(fw: &Framework, phi: &DirectedColouring) -> Result<Option<Vec<Vector>>> {
    check_lp_preconditions(fw, phi)?;
    if fw.graph().vertex_count() == 0 {
        return Ok(Some(Vec::new()));
    }
    let lengths = fw.edge_lengths();
    let rows: Vec<Vec<Rational>> = (0..phi.len()).map(|e| pinned_row(fw, e, phi.get(e))).collect();
    if !linalg::column_space_contains(&rows, &lengths) {
        return Err(Error::Inconsistent);
    }
    Ok(lp_witness(fw, phi, &lengths))
}

fn verdict(outcome: Outcome, criterion: Criterion, search: SearchStats) -> GlobalVerdict {
    GlobalVerdict { outcome, witness: None, certificate: Certificate { criterion, search }, generic_caveat: false }
}

/// Decides global rigidity of a well-positioned framework exactly, or
/// reports why it could not.
pub fn decide_global_rigidity(fw: &Framework, options: GlobalOptions) -> GlobalVerdict {
    let Ok(phi_p) = fw.induced_colouring() else {
        return verdict(Outcome::NotWellPositioned, Criterion::WellPositioned, SearchStats::default());
    };
    let m = fw.colouring_matrix(&phi_p).expect("induced colouring matches the graph");
    if linalg::rank(m.rows()) != fw.full_rank() {
        return verdict(Outcome::NotRigid, Criterion::RankDeficient, SearchStats::default());
    }
    let g = fw.graph();
    if g.vertex_count() <= 1 {
        return verdict(Outcome::GloballyRigid, Criterion::ExhaustiveSearch, SearchStats::default());
    }
    let lengths = fw.edge_lengths();
    // Consistency is unchanged by scaling the right-hand side, and integer
    // lengths keep the elimination in machine integers for longer.
    let scaled = integral_scaling(&lengths);
    let faces = fw.norm().faces().len();
    let cols = fw.dim() * (g.vertex_count() - 1);
    let space = SearchSpace::new(
        g,
        |_| (0..faces).map(Some).collect(),
        cols,
        |e, face| augmented_row(pinned_row(fw, e, face), &scaled[e]),
    );
    let group = fw.norm().isometry_group();
    let report = search::run(&space, options.budget, options.threads, |entries| {
        let phi = DirectedColouring::new(entries.to_vec());
        if is_isometric_colouring(&phi, &phi_p, group) {
            return LeafOutcome::Skip;
        }
        match lp_witness(fw, &phi, &lengths) {
            Some(q) if lengths_of(g, fw.norm(), &q) == lengths && !congruence_check(fw, &q) => LeafOutcome::Found(q),
            _ => LeafOutcome::Reject,
        }
    });
    match report.found {
        Some(q) => GlobalVerdict {
            witness: Some(q),
            ..verdict(Outcome::NotGloballyRigid, Criterion::EquivalentRealisation, report.stats)
        },
        None if report.stats.capped_tasks > 0 => verdict(Outcome::BudgetExceeded, Criterion::Budget, report.stats),
        None => verdict(Outcome::GloballyRigid, Criterion::ExhaustiveSearch, report.stats),
    }
}

fn integral_scaling(xs: &[Rational]) -> Vec<Rational> {
    let ints = integer_row(xs);
    ints.into_iter().map(Rational::from_integer).collect()
}

pub(crate) fn augmented_row(mut coefficients: Vec<Rational>, rhs: &Rational) -> Vec<BigInt> {
    coefficients.push(rhs.clone());
    integer_row(&coefficients)
}

/// Consequences of a strong induced colouring in ℓ∞, checked together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenericCertificate {
    /// Every monochromatic subgraph of `φ_p` is 2-connected.
    pub strong_colouring: bool,
    pub redundantly_rigid: bool,
    pub mdd_connected: bool,
}

impl GenericCertificate {
    /// A strong colouring must come with the other two properties.
    pub fn is_coherent(&self) -> bool {
        !self.strong_colouring || (self.redundantly_rigid && self.mdd_connected)
    }
}

pub fn generic_certificate(fw: &Framework) -> Result<GenericCertificate> {
    if !fw.norm().is_linf() {
        return Err(Error::NotLinf);
    }
    let phi = fw.induced_colouring()?;
    Ok(GenericCertificate {
        strong_colouring: is_strong_colouring_linf(fw.graph(), &phi, fw.norm())?,
        redundantly_rigid: fw.is_redundantly_rigid()?,
        mdd_connected: is_mdd_connected(fw.graph(), fw.dim())?,
    })
}

/// True when `φ_p` has 2-connected colour classes, which makes generic
/// realisations with this colouring globally rigid.
pub fn certify_generic_global(fw: &Framework) -> Result<bool> {
    let cert = generic_certificate(fw)?;
    if !cert.is_coherent() {
        return Err(Error::Precondition(format!("incoherent certificate {cert:?}")));
    }
    Ok(cert.strong_colouring)
}

/// Planar ℓ∞ criterion: `G` is `M(2,2)`-connected, and with a framework
/// also infinitesimally rigid.
pub fn decide_generic_global_linf2(g: &Graph, hint: Option<&Framework>) -> Result<bool> {
    let connected = is_mdd_connected(g, 2)?;
    let Some(fw) = hint else { return Ok(connected) };
    if !fw.norm().is_linf() {
        return Err(Error::NotLinf);
    }
    if fw.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: fw.dim() });
    }
    if fw.graph().edges() != g.edges() || fw.graph().vertex_count() != g.vertex_count() {
        return Err(Error::InvalidParameter("framework is on a different graph".into()));
    }
    Ok(connected && fw.is_infinitesimally_rigid()?)
}

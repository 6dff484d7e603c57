//! Frameworks `(G, p)` in a polyhedral normed space: edge lengths, induced
//! directed colourings, the colouring matrices `M(G, φ)` and rigidity tests.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{is_2_connected, is_connected, Graph};
use crate::linalg;
use crate::norm::{LinearIsometry, PolytopeNorm};
use crate::rational::{add, sub, Rational, Vector};

/// A graph with an exact rational realisation in a polyhedral normed space.
#[derive(Debug, Clone)]
pub struct Framework {
    graph: Graph,
    norm: Arc<PolytopeNorm>,
    positions: Vec<Vector>,
}

/// An assignment of a face (by index into the norm's face list) or the zero
/// vector (`None`) to every edge, in the graph's edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedColouring {
    entries: Vec<Option<usize>>,
}

impl DirectedColouring {
    pub fn new(entries: Vec<Option<usize>>) -> Self {
        DirectedColouring { entries }
    }

    pub fn from_faces(faces: Vec<usize>) -> Self {
        DirectedColouring { entries: faces.into_iter().map(Some).collect() }
    }

    pub fn entries(&self) -> &[Option<usize>] {
        &self.entries
    }

    pub fn get(&self, e: usize) -> Option<usize> {
        self.entries[e]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero_free(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// `T ∘ φ`, using the isometry's action on faces.
    pub fn transformed(&self, t: &LinearIsometry) -> Self {
        DirectedColouring { entries: self.entries.iter().map(|f| f.map(|i| t.face_map[i])).collect() }
    }

    pub fn without_edge(&self, e: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.remove(e);
        DirectedColouring { entries }
    }

    pub(crate) fn check(&self, g: &Graph, norm: &PolytopeNorm) -> Result<()> {
        if self.entries.len() != g.edge_count() {
            return Err(Error::InvalidColouring(format!(
                "{} entries for {} edges",
                self.entries.len(),
                g.edge_count()
            )));
        }
        if self.entries.iter().flatten().any(|&i| i >= norm.faces().len()) {
            return Err(Error::InvalidColouring("face index out of range".into()));
        }
        Ok(())
    }
}

/// `|E| × d|V|` matrix; the row of `e = vw` (`v < w`) holds `φ(e)` in the
/// block of `v` and `-φ(e)` in the block of `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColouringMatrix {
    rows: Vec<Vec<Rational>>,
    cols: usize,
}

impl ColouringMatrix {
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn without_row(&self, e: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.remove(e);
        ColouringMatrix { rows, cols: self.cols }
    }

    /// `M p` for a realisation flattened vertex by vertex.
    pub fn apply(&self, positions: &[Vector]) -> Vector {
        let flat: Vector = positions.iter().flatten().cloned().collect();
        linalg::mat_vec(&self.rows, &flat)
    }

    /// Drops the columns of vertex `v` (`d` columns starting at `v * d`).
    pub fn pinned(&self, v: usize, d: usize) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j / d != v).map(|(_, x)| x.clone()).collect())
            .collect()
    }
}

pub fn colouring_matrix(g: &Graph, phi: &DirectedColouring, norm: &PolytopeNorm) -> Result<ColouringMatrix> {
    phi.check(g, norm)?;
    let d = norm.dim();
    let cols = d * g.vertex_count();
    let rows = g
        .edges()
        .iter()
        .zip(phi.entries())
        .map(|(&(v, w), face)| {
            let mut row = vec![Rational::zero(); cols];
            if let Some(f) = face {
                for (i, x) in norm.face(*f).iter().enumerate() {
                    row[v * d + i] = x.clone();
                    row[w * d + i] = -x.clone();
                }
            }
            row
        })
        .collect();
    Ok(ColouringMatrix { rows, cols })
}

pub fn rank_exact(m: &ColouringMatrix) -> usize {
    linalg::rank(m.rows())
}

/// Per-edge candidate faces of `Φ_p`, kept factored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedColourings {
    candidates: Vec<Vec<Option<usize>>>,
}

impl InducedColourings {
    pub fn candidates(&self) -> &[Vec<Option<usize>>] {
        &self.candidates
    }

    /// Size of the product set, saturating.
    pub fn count(&self) -> u128 {
        self.candidates.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    /// The unique colouring when every edge has a single nonzero candidate.
    pub fn unique(&self) -> Option<DirectedColouring> {
        self.candidates
            .iter()
            .map(|c| match c.as_slice() {
                [Some(f)] => Some(*f),
                _ => None,
            })
            .collect::<Option<Vec<usize>>>()
            .map(DirectedColouring::from_faces)
    }

    /// Expands the product; only for small sets.
    pub fn expand(&self, limit: usize) -> Result<Vec<DirectedColouring>> {
        if self.count() > limit as u128 {
            return Err(Error::BudgetExceeded(limit as u64));
        }
        let mut out = vec![Vec::new()];
        for c in &self.candidates {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Option<usize>>| {
                    c.iter().map(move |f| {
                        let mut p = prefix.clone();
                        p.push(*f);
                        p
                    })
                })
                .collect();
        }
        Ok(out.into_iter().map(DirectedColouring::new).collect())
    }
}

impl Framework {
    pub fn new(graph: Graph, norm: Arc<PolytopeNorm>, positions: Vec<Vector>) -> Result<Self> {
        if positions.len() != graph.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "{} positions for {} vertices",
                positions.len(),
                graph.vertex_count()
            )));
        }
        if let Some(p) = positions.iter().find(|p| p.len() != norm.dim()) {
            return Err(Error::DimensionMismatch { expected: norm.dim(), found: p.len() });
        }
        Ok(Framework { graph, norm, positions })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn norm(&self) -> &PolytopeNorm {
        &self.norm
    }

    pub fn norm_handle(&self) -> Arc<PolytopeNorm> {
        Arc::clone(&self.norm)
    }

    pub fn dim(&self) -> usize {
        self.norm.dim()
    }

    pub fn positions(&self) -> &[Vector] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> &Vector {
        &self.positions[v]
    }

    /// Same graph and norm, new realisation.
    pub fn with_positions(&self, positions: Vec<Vector>) -> Result<Self> {
        Framework::new(self.graph.clone(), self.norm_handle(), positions)
    }

    pub fn with_graph(&self, graph: Graph) -> Result<Self> {
        Framework::new(graph, self.norm_handle(), self.positions.clone())
    }

    /// The subframework induced on `vertices`.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let graph = self.graph.induced(vertices)?;
        Framework::new(graph, self.norm_handle(), vertices.iter().map(|&v| self.positions[v].clone()).collect())
    }

    pub fn edge_vector(&self, e: usize) -> Vector {
        let (v, w) = self.graph.edges()[e];
        sub(&self.positions[v], &self.positions[w])
    }

    pub fn edge_lengths(&self) -> Vector {
        lengths_of(&self.graph, &self.norm, &self.positions)
    }

    pub fn induced_colourings(&self) -> InducedColourings {
        let candidates = (0..self.graph.edge_count())
            .map(|e| {
                let x = self.edge_vector(e);
                match self.norm.active_faces(&x) {
                    Ok(faces) => faces.into_iter().map(Some).collect(),
                    Err(_) => vec![None],
                }
            })
            .collect();
        InducedColourings { candidates }
    }

    pub fn is_well_positioned(&self) -> bool {
        self.induced_colourings().unique().is_some()
    }

    /// `φ_p` of a well-positioned framework.
    pub fn induced_colouring(&self) -> Result<DirectedColouring> {
        self.induced_colourings().unique().ok_or(Error::NotWellPositioned)
    }

    pub fn colouring_matrix(&self, phi: &DirectedColouring) -> Result<ColouringMatrix> {
        colouring_matrix(&self.graph, phi, &self.norm)
    }

    /// `M(G, φ_p)`.
    pub fn rigidity_matrix(&self) -> Result<ColouringMatrix> {
        self.colouring_matrix(&self.induced_colouring()?)
    }

    pub fn full_rank(&self) -> usize {
        let n = self.graph.vertex_count();
        self.dim() * n - self.dim().min(self.dim() * n)
    }

    /// `rank M(G, φ_p) = d|V| - d`.
    pub fn is_infinitesimally_rigid(&self) -> Result<bool> {
        Ok(rank_exact(&self.rigidity_matrix()?) == self.full_rank())
    }

    /// Rigid after deleting any single edge.
    pub fn is_redundantly_rigid(&self) -> Result<bool> {
        let m = self.rigidity_matrix()?;
        let target = self.full_rank();
        if rank_exact(&m) != target {
            return Ok(false);
        }
        Ok((0..m.row_count()).all(|e| rank_exact(&m.without_row(e)) == target))
    }

    /// Rank-based rigidity test over every colouring in `Φ_p`; a `true`
    /// result proves rigidity, `false` proves nothing.
    pub fn rigid_for_every_induced_colouring(&self, limit: usize) -> Result<bool> {
        let target = self.full_rank();
        for phi in self.induced_colourings().expand(limit)? {
            if rank_exact(&self.colouring_matrix(&phi)?) != target {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn monochromatic_subgraphs(&self, phi: &DirectedColouring) -> Result<Vec<Graph>> {
        monochromatic_subgraphs(&self.graph, phi, &self.norm)
    }

    /// For ℓ∞: rigid iff every monochromatic subgraph of `φ_p` is connected.
    pub fn is_rigid_linf_by_colour(&self) -> Result<bool> {
        let phi = self.induced_colouring()?;
        Ok(self.monochromatic_subgraphs(&phi)?.iter().all(is_connected))
    }

    /// Applies `x ↦ T x + t` to every position.
    pub fn transformed(&self, t: &LinearIsometry, shift: &[Rational]) -> Result<Self> {
        let positions = self.positions.iter().map(|p| add(&t.apply(p), shift)).collect();
        self.with_positions(positions)
    }
}

pub(crate) fn lengths_of(g: &Graph, norm: &PolytopeNorm, positions: &[Vector]) -> Vector {
    g.edges().iter().map(|&(v, w)| norm.eval_unchecked(&sub(&positions[v], &positions[w]))).collect()
}

/// Coordinate `i` of an ℓ∞ face `±b_i`.
pub(crate) fn linf_coordinate(face: &[Rational]) -> usize {
    face.iter().position(|x| !x.is_zero()).expect("faces are nonzero")
}

/// ℓ∞ colour classes: `G_i` keeps the edges coloured `±b_i`.
pub fn monochromatic_subgraphs(g: &Graph, phi: &DirectedColouring, norm: &PolytopeNorm) -> Result<Vec<Graph>> {
    if !norm.is_linf() {
        return Err(Error::NotLinf);
    }
    phi.check(g, norm)?;
    let mut colour = Vec::with_capacity(phi.len());
    for (e, f) in phi.entries().iter().enumerate() {
        let f = f.ok_or(Error::ZeroColour(e))?;
        colour.push(linf_coordinate(norm.face(f)));
    }
    Ok((0..norm.dim()).map(|i| g.spanning_subgraph(|e| colour[e] == i)).collect())
}

/// Every monochromatic subgraph (on the full vertex set) is 2-connected.
pub fn is_strong_colouring_linf(g: &Graph, phi: &DirectedColouring, norm: &PolytopeNorm) -> Result<bool> {
    Ok(monochromatic_subgraphs(g, phi, norm)?.iter().all(is_2_connected))
}

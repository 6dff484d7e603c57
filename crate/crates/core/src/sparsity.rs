//! The (d,k)-sparsity matroid: rank by the pebble game, tightness, circuits,
//! (d,d)-redundancy and M(d,d)-connectivity.

use crate::error::{Error, Result};
use crate::graph::{is_2_connected, Edge, Graph};

/// Sparsity counts `d|X| - k`.
///
/// Parameters with `0 <= k <= 2d - 1` give a matroid and support every
/// operation here. Larger `k` (up to `d(d+1)/2`) is accepted for counting
/// tests only, see [`is_tight`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparsityParams {
    d: usize,
    k: usize,
}

impl SparsityParams {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if d == 0 || k > (2 * d - 1).max(d * (d + 1) / 2) {
            return Err(Error::SparsityRange { d, k });
        }
        Ok(SparsityParams { d, k })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_matroidal(&self) -> bool {
        self.k < 2 * self.d
    }

    fn require_matroidal(&self) -> Result<()> {
        if self.is_matroidal() {
            Ok(())
        } else {
            Err(Error::SparsityRange { d: self.d, k: self.k })
        }
    }
}

/// State of the (d,k) pebble game: free pebbles per vertex and the
/// orientation of accepted edges (an edge `u -> v` holds a pebble of `u`).
#[derive(Debug, Clone)]
struct PebbleState {
    params: SparsityParams,
    pebbles: Vec<usize>,
    out: Vec<Vec<usize>>,
    accepted: usize,
}

impl PebbleState {
    fn new(n: usize, params: SparsityParams) -> Self {
        PebbleState { params, pebbles: vec![params.d; n], out: vec![Vec::new(); n], accepted: 0 }
    }

    /// Tries to move one free pebble to `root` without touching `blocked`.
    fn fetch(&mut self, root: usize, blocked: usize) -> bool {
        let n = self.pebbles.len();
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        seen[blocked] = true;
        let mut stack = vec![root];
        let mut found = None;
        'search: while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                prev[w] = v;
                if self.pebbles[w] > 0 {
                    found = Some(w);
                    break 'search;
                }
                stack.push(w);
            }
        }
        let Some(target) = found else { return false };
        // Reverse the path root -> ... -> target.
        let mut w = target;
        while w != root {
            let v = prev[w];
            let pos = self.out[v].iter().position(|&x| x == w).expect("path edge");
            self.out[v].swap_remove(pos);
            self.out[w].push(v);
            w = v;
        }
        self.pebbles[target] -= 1;
        self.pebbles[root] += 1;
        true
    }

    /// Runs the acceptance step for edge `uv`; returns whether it was
    /// independent of the edges accepted so far.
    fn insert(&mut self, u: usize, v: usize) -> bool {
        let need = self.params.k + 1;
        while self.pebbles[u] + self.pebbles[v] < need {
            if !self.fetch(u, v) && !self.fetch(v, u) {
                return false;
            }
        }
        let (from, to) = if self.pebbles[u] > 0 { (u, v) } else { (v, u) };
        self.pebbles[from] -= 1;
        self.out[from].push(to);
        self.accepted += 1;
        true
    }
}

/// Runs the pebble game over `edges` in order and returns which were accepted.
pub fn pebble_game(n: usize, edges: &[Edge], params: SparsityParams) -> Result<Vec<bool>> {
    params.require_matroidal()?;
    let mut state = PebbleState::new(n, params);
    Ok(edges.iter().map(|&(u, v)| state.insert(u, v)).collect())
}

pub fn pebble_rank_of(n: usize, edges: &[Edge], params: SparsityParams) -> Result<usize> {
    Ok(pebble_game(n, edges, params)?.into_iter().filter(|&b| b).count())
}

/// Rank of the edge set in the (d,k)-sparsity matroid.
pub fn pebble_rank(g: &Graph, params: SparsityParams) -> Result<usize> {
    pebble_rank_of(g.vertex_count(), g.edges(), params)
}

pub fn is_sparse(g: &Graph, params: SparsityParams) -> Result<bool> {
    if params.is_matroidal() {
        Ok(pebble_rank(g, params)? == g.edge_count())
    } else {
        is_sparse_by_count(g, params)
    }
}

/// Sparse with exactly `d|V| - k` edges.
///
/// For non-matroidal `k` (such as (3,6)) sparsity is checked by counting the
/// edges of every induced subgraph on at least `d` vertices, which is
/// exponential in `|V|` and limited to 24 vertices.
pub fn is_tight(g: &Graph, params: SparsityParams) -> Result<bool> {
    let target = (params.d * g.vertex_count()) as i64 - params.k as i64;
    if g.edge_count() as i64 != target {
        return Ok(false);
    }
    is_sparse(g, params)
}

fn is_sparse_by_count(g: &Graph, params: SparsityParams) -> Result<bool> {
    let n = g.vertex_count();
    if n > 24 {
        return Err(Error::InvalidParameter(format!(
            "subset counting for (d,k) = ({}, {}) is limited to 24 vertices",
            params.d, params.k
        )));
    }
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < params.d {
            continue;
        }
        let inside = g.edges().iter().filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1).count();
        if inside as i64 > (params.d * size) as i64 - params.k as i64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every edge lies in a (d,d)-circuit, i.e. no edge is a coloop.
pub fn is_dd_redundant(g: &Graph, d: usize) -> Result<bool> {
    let params = SparsityParams::new(d, d)?;
    let full = pebble_rank(g, params)?;
    for e in 0..g.edge_count() {
        if pebble_rank(&g.without_edge(e), params)? != full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// M(d,d)-connectivity, decided as 2-connected plus (d,d)-redundant.
pub fn is_mdd_connected(g: &Graph, d: usize) -> Result<bool> {
    Ok(is_2_connected(g) && is_dd_redundant(g, d)?)
}

/// A circuit of the matroid restricted to `E` containing edge `e`, as sorted
/// edge indices, or `None` when `e` is a coloop.
///
/// The circuit is the fundamental circuit of `e` with respect to a maximal
/// independent subset of `E - e` found by the pebble game.
pub fn fundamental_circuit(g: &Graph, params: SparsityParams, e: usize) -> Result<Option<Vec<usize>>> {
    params.require_matroidal()?;
    if e >= g.edge_count() {
        return Err(Error::InvalidParameter(format!("edge index {e} out of range")));
    }
    let n = g.vertex_count();
    let others: Vec<usize> = (0..g.edge_count()).filter(|&i| i != e).collect();
    let other_edges: Vec<Edge> = others.iter().map(|&i| g.edges()[i]).collect();
    let accepted = pebble_game(n, &other_edges, params)?;
    let basis: Vec<usize> = others.iter().zip(&accepted).filter(|(_, &a)| a).map(|(&i, _)| i).collect();

    let independent = |set: &[usize]| -> Result<bool> {
        let edges: Vec<Edge> = set.iter().map(|&i| g.edges()[i]).collect();
        Ok(pebble_rank_of(n, &edges, params)? == edges.len())
    };
    let mut with_e = basis.clone();
    with_e.push(e);
    if independent(&with_e)? {
        return Ok(None);
    }
    let mut circuit = vec![e];
    for (pos, &f) in basis.iter().enumerate() {
        let mut swapped: Vec<usize> = basis.clone();
        swapped[pos] = e;
        if independent(&swapped)? {
            circuit.push(f);
        }
    }
    circuit.sort_unstable();
    Ok(Some(circuit))
}

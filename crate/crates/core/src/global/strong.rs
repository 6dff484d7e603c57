//! Exhaustive strongness test: `col M(G, φ) ⊆ col M(G, φ')` only for `φ'`
//! isometric to `φ`.

use super::search::{self, LeafOutcome, SearchSpace, SearchStats};
use super::is_isometric_colouring;
use crate::error::{Error, Result};
use crate::framework::{colouring_matrix, DirectedColouring};
use crate::graph::Graph;
use crate::norm::PolytopeNorm;
use crate::rational::integer_row;

#[derive(Debug, Clone, PartialEq)]
pub struct StrongCheck {
    pub strong: bool,
    /// A non-isometric colouring whose column space contains that of `φ`.
    pub counterexample: Option<DirectedColouring>,
    pub search: SearchStats,
}

/// Enumerates every `φ'` (zero entries included) with
/// `rank [M(φ') | M(φ)] = rank M(φ')`. A colouring with a zero entry is
/// never strong: its zero row lies in every column space.
pub fn is_strong_colouring_exhaustive(
    g: &Graph,
    phi: &DirectedColouring,
    norm: &PolytopeNorm,
    budget: u64,
    threads: usize,
) -> Result<StrongCheck> {
    let m = colouring_matrix(g, phi, norm)?;
    if let Some(e) = phi.entries().iter().position(Option::is_none) {
        let mut other = phi.entries().to_vec();
        other[e] = Some(0);
        return Ok(StrongCheck {
            strong: false,
            counterexample: Some(DirectedColouring::new(other)),
            search: SearchStats::default(),
        });
    }
    let cols = m.col_count();
    let candidates: Vec<Option<usize>> = std::iter::once(None).chain((0..norm.faces().len()).map(Some)).collect();
    let space = SearchSpace::new(
        g,
        |_| candidates.clone(),
        cols,
        |e, face| {
            let single = DirectedColouring::new(vec![face]);
            let one_edge = Graph::from_indices(g.vertex_count(), &[g.edges()[e]]).expect("edge of g");
            let mut row = colouring_matrix(&one_edge, &single, norm).expect("valid face").rows()[0].clone();
            row.extend(m.rows()[e].iter().cloned());
            integer_row(&row)
        },
    );
    let group = norm.isometry_group();
    let report = search::run(&space, budget, threads, |entries| {
        let other = DirectedColouring::new(entries.to_vec());
        if is_isometric_colouring(&other, phi, group) {
            LeafOutcome::Skip
        } else {
            LeafOutcome::Found(other)
        }
    });
    if report.found.is_none() && report.stats.capped_tasks > 0 {
        return Err(Error::BudgetExceeded(budget));
    }
    Ok(StrongCheck { strong: report.found.is_none(), counterexample: report.found, search: report.stats })
}

//! Depth-first enumeration of directed colourings whose partial augmented
//! system `[A | B]` stays consistent, partitioned into independent tasks.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use serde::Serialize;

use crate::graph::Graph;
use crate::linalg::{ExactInt, IncrementalEchelon, RowStatus};

/// Minimum number of prefix tasks; the partition never depends on the
/// thread count.
const MIN_TASKS: usize = 64;

pub(crate) enum LeafOutcome<W> {
    /// Excluded up front (e.g. isometric to the reference colouring).
    Skip,
    /// Examined and discarded.
    Reject,
    Found(W),
}

/// Counters accumulated over a search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Partial colourings examined.
    pub nodes: u64,
    /// Partial colourings discarded because the augmented system became
    /// inconsistent.
    pub pruned: u64,
    /// Complete colourings with a consistent system.
    pub complete: u64,
    /// Complete colourings skipped as isometric to the reference colouring.
    pub isometric_skipped: u64,
    /// Complete colourings examined and rejected.
    pub rejected: u64,
    pub tasks: u64,
    /// Tasks that hit the node budget.
    pub capped_tasks: u64,
    /// Tasks rerun with arbitrary-precision integers after overflow.
    pub bignum_tasks: u64,
}

impl SearchStats {
    fn absorb(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.pruned += o.pruned;
        self.complete += o.complete;
        self.isometric_skipped += o.isometric_skipped;
        self.rejected += o.rejected;
        self.tasks += o.tasks;
        self.capped_tasks += o.capped_tasks;
        self.bignum_tasks += o.bignum_tasks;
    }
}

/// Per-position candidates and their integer rows `coefficients ++ augmented`.
pub(crate) struct SearchSpace {
    /// Search position to edge index.
    order: Vec<usize>,
    candidates: Vec<Vec<Option<usize>>>,
    big: Vec<Vec<Vec<BigInt>>>,
    small: Option<Vec<Vec<Vec<i128>>>>,
    coef_cols: usize,
}

impl SearchSpace {
    /// `row(e, candidate)` must return a primitive integer row.
    pub(crate) fn new(
        g: &Graph,
        candidates: impl Fn(usize) -> Vec<Option<usize>>,
        coef_cols: usize,
        row: impl Fn(usize, Option<usize>) -> Vec<BigInt>,
    ) -> Self {
        let order = search_order(g);
        let candidates: Vec<Vec<Option<usize>>> = order.iter().map(|&e| candidates(e)).collect();
        let big: Vec<Vec<Vec<BigInt>>> = order
            .iter()
            .zip(&candidates)
            .map(|(&e, cs)| cs.iter().map(|&c| row(e, c)).collect())
            .collect();
        let small = big
            .iter()
            .map(|cs| cs.iter().map(|r| r.iter().map(i128::from_big).collect::<Option<Vec<_>>>()).collect())
            .collect();
        SearchSpace { order, candidates, big, small, coef_cols }
    }

    fn prefix_len(&self) -> usize {
        let mut count = 1usize;
        for (i, cs) in self.candidates.iter().enumerate() {
            if count >= MIN_TASKS {
                return i;
            }
            count = count.saturating_mul(cs.len().max(1));
        }
        self.candidates.len()
    }

    fn colouring(&self, choice: &[usize]) -> Vec<Option<usize>> {
        let mut out = vec![None; self.order.len()];
        for (pos, &c) in choice.iter().enumerate() {
            out[self.order[pos]] = self.candidates[pos][c];
        }
        out
    }
}

/// Greedy edge order that closes cycles early: prefer edges whose endpoints
/// are both already reached, then the lowest index.
fn search_order(g: &Graph) -> Vec<usize> {
    let m = g.edge_count();
    let mut seen = vec![false; g.vertex_count()];
    let mut used = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for _ in 0..m {
        let score = |e: usize| {
            let (u, v) = g.edges()[e];
            seen[u] as u8 + seen[v] as u8
        };
        let best = (0..m).filter(|&e| !used[e]).max_by_key(|&e| (score(e), std::cmp::Reverse(e))).expect("edges left");
        used[best] = true;
        let (u, v) = g.edges()[best];
        seen[u] = true;
        seen[v] = true;
        order.push(best);
    }
    order
}

pub(crate) struct SearchReport<W> {
    pub stats: SearchStats,
    pub found: Option<W>,
}

enum Stop {
    Overflow,
    Capped,
    Cancelled,
    Found,
}

struct Task<'a, T: ExactInt, W, F> {
    space: &'a SearchSpace,
    rows: &'a [Vec<Vec<T>>],
    leaf: &'a F,
    /// Lowest task index that has found a witness.
    first_found: &'a AtomicUsize,
    index: usize,
    budget: u64,
    echelon: IncrementalEchelon<T>,
    choice: Vec<usize>,
    stats: SearchStats,
    found: Option<W>,
}

impl<T, W, F> Task<'_, T, W, F>
where
    T: ExactInt,
    F: Fn(&[Option<usize>]) -> LeafOutcome<W>,
{
    fn run(&mut self, prefix: &[usize]) -> Result<(), Stop> {
        self.stats.nodes += 1;
        for (pos, &c) in prefix.iter().enumerate() {
            if self.echelon.push(&self.rows[pos][c]).map_err(|_| Stop::Overflow)? == RowStatus::Inconsistent {
                self.stats.pruned += 1;
                return Ok(());
            }
            self.choice.push(c);
        }
        self.descend(prefix.len())
    }

    fn descend(&mut self, depth: usize) -> Result<(), Stop> {
        if depth == self.rows.len() {
            return self.visit_leaf();
        }
        for c in 0..self.rows[depth].len() {
            self.stats.nodes += 1;
            if self.stats.nodes > self.budget {
                return Err(Stop::Capped);
            }
            if self.first_found.load(Ordering::Relaxed) < self.index {
                return Err(Stop::Cancelled);
            }
            match self.echelon.push(&self.rows[depth][c]).map_err(|_| Stop::Overflow)? {
                RowStatus::Inconsistent => self.stats.pruned += 1,
                _ => {
                    self.choice.push(c);
                    self.descend(depth + 1)?;
                    self.choice.pop();
                    self.echelon.pop();
                }
            }
        }
        Ok(())
    }

    fn visit_leaf(&mut self) -> Result<(), Stop> {
        self.stats.complete += 1;
        match (self.leaf)(&self.space.colouring(&self.choice)) {
            LeafOutcome::Skip => self.stats.isometric_skipped += 1,
            LeafOutcome::Reject => self.stats.rejected += 1,
            LeafOutcome::Found(w) => {
                self.found = Some(w);
                self.first_found.fetch_min(self.index, Ordering::Relaxed);
                return Err(Stop::Found);
            }
        }
        Ok(())
    }
}

fn run_task<T, W, F>(
    space: &SearchSpace,
    rows: &[Vec<Vec<T>>],
    index: usize,
    prefix: &[usize],
    leaf: &F,
    first_found: &AtomicUsize,
    budget: u64,
) -> Result<(SearchStats, Option<W>), ()>
where
    T: ExactInt,
    F: Fn(&[Option<usize>]) -> LeafOutcome<W>,
{
    let mut task = Task {
        space,
        rows,
        leaf,
        first_found,
        index,
        budget,
        echelon: IncrementalEchelon::new(space.coef_cols),
        choice: Vec::with_capacity(rows.len()),
        stats: SearchStats { tasks: 1, ..SearchStats::default() },
        found: None,
    };
    match task.run(prefix) {
        Err(Stop::Overflow) => Err(()),
        Err(Stop::Capped) => {
            task.stats.capped_tasks = 1;
            Ok((task.stats, None))
        }
        Ok(()) | Err(Stop::Cancelled) | Err(Stop::Found) => Ok((task.stats, task.found)),
    }
}

type TaskResult<W> = (SearchStats, Option<W>);

/// Prefix assignments in lexicographic order.
fn prefixes(space: &SearchSpace, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for cs in &space.candidates[..len] {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..cs.len()).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Explores every task. Each task is capped at `budget` nodes. A leaf
/// reporting `Found` in task `k` cancels the tasks after `k`; the report
/// covers tasks `0..=k` only, so it does not depend on scheduling.
pub(crate) fn run<W, F>(space: &SearchSpace, budget: u64, threads: usize, leaf: F) -> SearchReport<W>
where
    W: Send,
    F: Fn(&[Option<usize>]) -> LeafOutcome<W> + Sync,
{
    let tasks = prefixes(space, space.prefix_len());
    let next = AtomicUsize::new(0);
    let first_found = AtomicUsize::new(usize::MAX);
    let results: Mutex<Vec<Option<TaskResult<W>>>> = Mutex::new((0..tasks.len()).map(|_| None).collect());
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= tasks.len() || first_found.load(Ordering::Relaxed) < i {
            break;
        }
        let small =
            space.small.as_ref().and_then(|rows| run_task(space, rows, i, &tasks[i], &leaf, &first_found, budget).ok());
        let result = small.unwrap_or_else(|| {
            let (mut stats, found) = run_task(space, &space.big, i, &tasks[i], &leaf, &first_found, budget)
                .expect("big integers do not overflow");
            stats.bignum_tasks = 1;
            (stats, found)
        });
        results.lock().expect("no worker panics")[i] = Some(result);
    };
    let threads = threads.clamp(1, tasks.len().max(1));
    if threads == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(worker);
            }
        });
    }
    let mut stats = SearchStats::default();
    let mut found = None;
    let last = first_found.into_inner();
    for (i, result) in results.into_inner().expect("no worker panics").into_iter().enumerate() {
        if i > last {
            break;
        }
        let (s, f) = result.expect("tasks up to the first witness complete");
        stats.absorb(&s);
        if i == last {
            found = f;
        }
    }
    SearchReport { stats, found }
}

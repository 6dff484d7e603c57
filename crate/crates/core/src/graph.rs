//! Finite simple graphs with a fixed vertex order.
//!
//! Vertices are referred to by their index in the input order. Edges are
//! stored as `(u, v)` with `u < v` and kept sorted, which fixes the row order
//! of every matrix built from the graph.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from named vertices and named edge pairs. The vertex
    /// order is the order given.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex {name:?}")));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("edge endpoint {s:?} is not a vertex")))
        };
        let mut pairs = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::build(names, index, pairs)
    }

    /// Builds a graph on vertices named `"0"`, `"1"`, ...
    pub fn from_indices(n: usize, edges: &[Edge]) -> Result<Self> {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::with_names(names, edges)
    }

    pub fn with_names(names: Vec<String>, edges: &[Edge]) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex {name:?}")));
            }
        }
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= names.len() || b >= names.len()) {
            return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
        }
        Self::build(names, index, edges.to_vec())
    }

    fn build(names: Vec<String>, index: HashMap<String, usize>, pairs: Vec<Edge>) -> Result<Self> {
        let mut edges = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {:?}", names[a])));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            let (a, b) = w[0];
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {:?}-{:?}",
                names[a], names[b]
            )));
        }
        Ok(Graph { names, index, edges })
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        Self::from_indices(n, &edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<Edge> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_indices(n, &edges).expect("cycle on at least 3 vertices")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<Edge> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_indices(n, &edges).expect("path is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// The spanning subgraph keeping the edges whose index satisfies `keep`.
    pub fn spanning_subgraph(&self, keep: impl Fn(usize) -> bool) -> Graph {
        Graph {
            names: self.names.clone(),
            index: self.index.clone(),
            edges: (0..self.edges.len()).filter(|&i| keep(i)).map(|i| self.edges[i]).collect(),
        }
    }

    pub fn without_edge(&self, e: usize) -> Graph {
        self.spanning_subgraph(|i| i != e)
    }

    /// The subgraph induced on `vertices`, renumbered in the order given.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut pos = vec![None; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= pos.len() || pos[v].replace(i).is_some() {
                return Err(Error::InvalidGraph(format!("bad vertex selection at {v}")));
            }
        }
        let edges: Vec<Edge> = self.edges.iter().filter_map(|&(a, b)| Some((pos[a]?, pos[b]?))).collect();
        Graph::with_names(vertices.iter().map(|&v| self.names[v].clone()).collect(), &edges)
    }

    /// The graph with vertex `v` deleted; the remaining order is preserved.
    pub fn without_vertex(&self, v: usize) -> Graph {
        let names: Vec<String> = self
            .names
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != v)
            .map(|(_, n)| n.clone())
            .collect();
        let shift = |u: usize| if u > v { u - 1 } else { u };
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != v && b != v)
            .map(|&(a, b)| (shift(a), shift(b)))
            .collect();
        Graph::with_names(names, &edges).expect("vertex deletion keeps the graph simple")
    }
}

/// Partition of the vertex set into maximal connected parts, each listed in
/// vertex order; parts are ordered by their smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in g.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        let i = *slot.entry(r).or_insert_with(|| {
            parts.push(Vec::new());
            parts.len() - 1
        });
        parts[i].push(v);
    }
    parts
}

pub fn component_count(g: &Graph) -> usize {
    connected_components(g).len()
}

pub fn is_connected(g: &Graph) -> bool {
    component_count(g) <= 1
}

struct Lowpoints {
    articulation: Vec<bool>,
    bridges: usize,
}

// Iterative DFS computing discovery times and low-links.
fn lowpoints(g: &Graph) -> Lowpoints {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut articulation = vec![false; n];
    let mut bridges = 0;
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbour position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, parent, pos) = *top;
            if pos < adj[v].len() {
                top.2 += 1;
                let w = adj[v][pos];
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        bridges += 1;
                    }
                    if parent != root && low[v] >= disc[parent] {
                        articulation[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            articulation[root] = true;
        }
    }
    Lowpoints { articulation, bridges }
}

pub fn articulation_points(g: &Graph) -> Vec<usize> {
    let lp = lowpoints(g);
    (0..g.vertex_count()).filter(|&v| lp.articulation[v]).collect()
}

/// At least three vertices, connected, and no cut vertex.
pub fn is_2_connected(g: &Graph) -> bool {
    g.vertex_count() >= 3 && is_connected(g) && articulation_points(g).is_empty()
}

/// At least two vertices, connected, and no bridge.
pub fn is_2_edge_connected(g: &Graph) -> bool {
    g.vertex_count() >= 2 && is_connected(g) && lowpoints(g).bridges == 0
}

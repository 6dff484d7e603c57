use std::path::Path;

use polyrigid::constructions::{build_octahedron, double_banana};
use polyrigid::io::{parse_framework, parse_graph};
use polyrigid::{Framework, Graph};

use crate::Failure;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

pub fn framework(path: &Path) -> Result<Framework, Failure> {
    parse_framework(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn named(name: &str) -> Option<Graph> {
    match name {
        "octahedron" => return Some(build_octahedron().graph().clone()),
        "double-banana" => return Some(double_banana()),
        _ => {}
    }
    let mut chars = name.chars();
    let kind = chars.next()?;
    let n: usize = chars.as_str().parse().ok()?;
    match kind {
        'K' => Some(Graph::complete(n)),
        'C' if n >= 3 => Some(Graph::cycle(n)),
        'P' if n >= 1 => Some(Graph::path(n)),
        _ => None,
    }
}

/// A named graph, or the graph of a graph or framework file.
pub fn graph(spec: &str) -> Result<Graph, Failure> {
    let path = Path::new(spec);
    if path.exists() {
        return parse_graph(&read(path)?).map_err(|e| Failure::Invalid(format!("{spec}: {e}")));
    }
    named(spec).ok_or_else(|| Failure::Invalid(format!("{spec:?} is neither a file nor a known graph")))
}

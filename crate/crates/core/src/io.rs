//! JSON framework files. Coordinates are rational strings (`"3/10"`, `"-1"`;
//! finite decimals such as `"0.9"` are accepted on input) and are always
//! written as reduced fractions.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::Framework;
use crate::graph::Graph;
use crate::norm::{NormKind, PolytopeNorm};
use crate::rational::{format_rational, parse_rational, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NormSpec {
    Named(String),
    Faces { faces: Vec<Vec<String>> },
}

/// On-disk form of a framework; field order is the canonical output order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkFile {
    pub dim: usize,
    pub norm: NormSpec,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub positions: IndexMap<String, Vec<String>>,
}

/// A graph-only file; framework files are accepted too.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

fn parse_json<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse(format!("line {} column {} at `{path}`: {inner}", inner.line(), inner.column()))
    })
}

fn parse_vector(field: &str, xs: &[String]) -> Result<Vector> {
    xs.iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|e| Error::Parse(format!("{field}[{i}]: {e}"))))
        .collect()
}

impl FrameworkFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_framework(&self) -> Result<Framework> {
        let norm = match &self.norm {
            NormSpec::Named(name) => match name.as_str() {
                "linf" => PolytopeNorm::linf(self.dim),
                "l1" => PolytopeNorm::l1(self.dim),
                other => return Err(Error::Parse(format!("norm: unknown norm {other:?}"))),
            },
            NormSpec::Faces { faces } => {
                let faces = faces
                    .iter()
                    .enumerate()
                    .map(|(i, f)| parse_vector(&format!("norm.faces[{i}]"), f))
                    .collect::<Result<Vec<_>>>()?;
                PolytopeNorm::new(faces)?
            }
        };
        if norm.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: norm.dim() });
        }
        let graph = Graph::new(&self.vertices, &self.edges)?;
        if let Some(extra) = self.positions.keys().find(|k| graph.vertex(k).is_none()) {
            return Err(Error::Parse(format!("positions: {extra:?} is not a vertex")));
        }
        let positions = self
            .vertices
            .iter()
            .map(|v| {
                let p = self.positions.get(v).ok_or_else(|| Error::Parse(format!("positions: missing {v:?}")))?;
                let x = parse_vector(&format!("positions.{v}"), p)?;
                if x.len() != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
                }
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        Framework::new(graph, Arc::new(norm), positions)
    }

    pub fn from_framework(fw: &Framework) -> Self {
        let g = fw.graph();
        let norm = fw.norm();
        let preset = match norm.kind() {
            NormKind::Custom => None,
            kind => PolytopeNorm::preset(kind, norm.dim()).ok(),
        };
        let norm_spec = match (norm.kind(), preset) {
            (NormKind::Linf, Some(p)) if p.faces() == norm.faces() => NormSpec::Named("linf".into()),
            (NormKind::L1, Some(p)) if p.faces() == norm.faces() => NormSpec::Named("l1".into()),
            _ => NormSpec::Faces { faces: norm.faces().iter().map(|f| f.iter().map(format_rational).collect()).collect() },
        };
        FrameworkFile {
            dim: fw.dim(),
            norm: norm_spec,
            vertices: g.names().to_vec(),
            edges: g.edges().iter().map(|&(a, b)| (g.name(a).to_string(), g.name(b).to_string())).collect(),
            positions: g
                .names()
                .iter()
                .zip(fw.positions())
                .map(|(v, p)| (v.clone(), p.iter().map(format_rational).collect()))
                .collect(),
        }
    }

    /// Pretty-printed canonical JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("file serializes");
        s.push('\n');
        s
    }
}

pub fn parse_framework(text: &str) -> Result<Framework> {
    FrameworkFile::parse(text)?.to_framework()
}

pub fn write_framework(fw: &Framework) -> String {
    FrameworkFile::from_framework(fw).to_json()
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let file: GraphFile = parse_json(text)?;
    Graph::new(&file.vertices, &file.edges)
}

/// Vertex name to coordinate strings, in vertex order.
pub fn positions_map(g: &Graph, positions: &[Vector]) -> IndexMap<String, Vec<String>> {
    g.names().iter().zip(positions).map(|(v, p)| (v.clone(), p.iter().map(format_rational).collect())).collect()
}

//! Rigidity, redundant rigidity and global rigidity of bar-joint frameworks
//! in polyhedral normed spaces, in exact rational arithmetic.
//!
//! A [`Framework`] pairs a [`Graph`] with rational positions in a space
//! normed by a centrally symmetric polytope ([`PolytopeNorm`]). Rigidity of a
//! well-positioned framework is a rank condition on its colouring matrix;
//! global rigidity is decided by [`decide_global_rigidity`], which either
//! returns an equivalent non-congruent realisation or proves none exists.

pub mod constructions;
pub mod error;
pub mod framework;
pub mod global;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod norm;
pub mod oracle;
pub mod rational;
pub mod simplex;
pub mod sparsity;

pub use error::{Error, Result};
pub use framework::{ColouringMatrix, DirectedColouring, Framework, InducedColourings};
pub use global::{decide_global_rigidity, GlobalOptions, GlobalVerdict, Outcome};
pub use graph::Graph;
pub use norm::{LinearIsometry, NormKind, PolytopeNorm};
pub use rational::{Rational, Vector};
pub use sparsity::SparsityParams;

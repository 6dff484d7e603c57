//! Norms whose unit ball is a centrally symmetric polytope, described by the
//! face normals `F`: `‖x‖ = max_{f ∈ F} f·x`.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{identity, invert, mat_mul, mat_vec, rank, transpose};
use crate::rational::{dot, int, is_zero_vector, Rational, Vector};
use crate::simplex::{solve, Constraint, LpOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    Linf,
    L1,
    Custom,
}

#[derive(Debug)]
pub struct PolytopeNorm {
    dim: usize,
    faces: Vec<Vector>,
    kind: NormKind,
    negation: Vec<usize>,
    group: OnceLock<Vec<LinearIsometry>>,
}

impl Clone for PolytopeNorm {
    fn clone(&self) -> Self {
        PolytopeNorm {
            dim: self.dim,
            faces: self.faces.clone(),
            kind: self.kind,
            negation: self.negation.clone(),
            group: self.group.clone(),
        }
    }
}

impl PartialEq for PolytopeNorm {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.faces == other.faces
    }
}

/// A linear isometry `T` together with its action on faces.
///
/// If `q = T p` then the face active on `T x` is `S f` with `S = T^{-T}`;
/// `face_map[i]` is the index of `S f_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearIsometry {
    pub matrix: Vec<Vec<Rational>>,
    pub face_map: Vec<usize>,
}

impl LinearIsometry {
    pub fn apply(&self, x: &[Rational]) -> Vector {
        mat_vec(&self.matrix, x)
    }
}

impl PolytopeNorm {
    /// Builds a norm from its face normals, checking central symmetry,
    /// spanning and that no face is redundant.
    pub fn new(faces: Vec<Vector>) -> Result<Self> {
        let mut norm = Self::unchecked(faces, NormKind::Custom)?;
        for kind in [NormKind::Linf, NormKind::L1] {
            let preset = Self::preset(kind, norm.dim)?;
            if preset.faces.len() == norm.faces.len() && preset.faces.iter().all(|f| norm.faces.contains(f)) {
                norm.kind = kind;
                return Ok(norm);
            }
        }
        for i in 0..norm.faces.len() {
            if norm.face_is_redundant(i) {
                return Err(Error::InvalidNorm(format!("face {i} is redundant")));
            }
        }
        Ok(norm)
    }

    fn unchecked(faces: Vec<Vector>, kind: NormKind) -> Result<Self> {
        let dim = faces.first().map(Vec::len).ok_or_else(|| Error::InvalidNorm("no faces".into()))?;
        if dim == 0 {
            return Err(Error::InvalidNorm("dimension 0".into()));
        }
        if let Some(f) = faces.iter().find(|f| f.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: f.len() });
        }
        if faces.iter().any(|f| is_zero_vector(f)) {
            return Err(Error::InvalidNorm("zero face".into()));
        }
        for (i, f) in faces.iter().enumerate() {
            if faces[..i].contains(f) {
                return Err(Error::InvalidNorm(format!("duplicate face {i}")));
            }
        }
        let mut negation = Vec::with_capacity(faces.len());
        for f in &faces {
            let neg: Vector = f.iter().map(|x| -x).collect();
            let j = faces
                .iter()
                .position(|g| *g == neg)
                .ok_or_else(|| Error::InvalidNorm("faces are not centrally symmetric".into()))?;
            negation.push(j);
        }
        if rank(&faces) != dim {
            return Err(Error::InvalidNorm("faces do not span".into()));
        }
        Ok(PolytopeNorm { dim, faces, kind, negation, group: OnceLock::new() })
    }

    /// `linf`: `±b_1, ..., ±b_d`; `l1`: all sign vectors.
    pub fn preset(kind: NormKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidNorm("dimension 0".into()));
        }
        let faces = match kind {
            NormKind::Linf => (0..dim)
                .flat_map(|i| {
                    [1, -1].map(|s| (0..dim).map(|j| if i == j { int(s) } else { Rational::zero() }).collect())
                })
                .collect(),
            NormKind::L1 => (0..1usize << dim)
                .map(|mask| (0..dim).map(|j| if mask >> (dim - 1 - j) & 1 == 0 { int(1) } else { int(-1) }).collect())
                .collect(),
            NormKind::Custom => return Err(Error::InvalidNorm("custom norms need explicit faces".into())),
        };
        Self::unchecked(faces, kind)
    }

    pub fn linf(dim: usize) -> Self {
        Self::preset(NormKind::Linf, dim).expect("positive dimension")
    }

    pub fn l1(dim: usize) -> Self {
        Self::preset(NormKind::L1, dim).expect("positive dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Vector] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Vector {
        &self.faces[i]
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn is_linf(&self) -> bool {
        self.kind == NormKind::Linf
    }

    pub fn negated_face(&self, i: usize) -> usize {
        self.negation[i]
    }

    pub fn face_index(&self, f: &[Rational]) -> Option<usize> {
        self.faces.iter().position(|g| g.as_slice() == f)
    }

    // f is redundant iff max f·x subject to the other faces is at most 1.
    fn face_is_redundant(&self, i: usize) -> bool {
        let cons: Vec<Constraint> = self
            .faces
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| Constraint::le(g.clone(), Rational::one()))
            .collect();
        match solve(self.dim, &cons, Some(&self.faces[i])) {
            LpOutcome::Optimal { value, .. } => value <= Rational::one(),
            LpOutcome::Unbounded => false,
            LpOutcome::Infeasible => unreachable!("origin is feasible"),
        }
    }

    fn check_dim(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[Rational]) -> Rational {
        self.faces.iter().map(|f| dot(f, x)).max().expect("faces are nonempty")
    }

    /// Indices of the faces attaining the norm of a nonzero `x`.
    pub fn active_faces(&self, x: &[Rational]) -> Result<Vec<usize>> {
        self.check_dim(x)?;
        if is_zero_vector(x) {
            return Err(Error::ZeroVector);
        }
        let values: Vec<Rational> = self.faces.iter().map(|f| dot(f, x)).collect();
        let max = values.iter().max().expect("faces are nonempty");
        Ok((0..values.len()).filter(|&i| values[i] == *max).collect())
    }

    pub fn is_smooth_point(&self, x: &[Rational]) -> Result<bool> {
        Ok(self.active_faces(x)?.len() == 1)
    }

    /// The finite group of linear isometries, computed once.
    ///
    /// Candidates send a fixed basis of faces to every tuple of faces; a
    /// candidate is kept when it permutes the whole face set.
    pub fn isometry_group(&self) -> &[LinearIsometry] {
        self.group.get_or_init(|| self.enumerate_isometries())
    }

    fn enumerate_isometries(&self) -> Vec<LinearIsometry> {
        let d = self.dim;
        let mut basis: Vec<usize> = Vec::new();
        for i in 0..self.faces.len() {
            let mut trial: Vec<Vector> = basis.iter().map(|&b| self.faces[b].clone()).collect();
            trial.push(self.faces[i].clone());
            if rank(&trial) == trial.len() {
                basis.push(i);
                if basis.len() == d {
                    break;
                }
            }
        }
        // B has the chosen faces as columns; S B = C gives S = C B^{-1}.
        let b_cols: Vec<Vector> = basis.iter().map(|&i| self.faces[i].clone()).collect();
        let b_inv = invert(&transpose(&b_cols)).expect("basis faces are independent");
        let n = self.faces.len();
        let mut out = Vec::new();
        let mut choice = vec![0usize; d];
        loop {
            let distinct = (0..d).all(|a| (0..a).all(|b| choice[a] != choice[b]));
            if distinct {
                let c_cols: Vec<Vector> = choice.iter().map(|&i| self.faces[i].clone()).collect();
                let s = mat_mul(&transpose(&c_cols), &b_inv);
                if let Some(face_map) = self.permutation_of(&s) {
                    let t = transpose(&invert(&s).expect("face permutation is invertible"));
                    out.push(LinearIsometry { matrix: t, face_map });
                }
            }
            let mut pos = 0;
            loop {
                if pos == d {
                    out.sort_by_key(|iso| iso.face_map.clone());
                    return out;
                }
                choice[pos] += 1;
                if choice[pos] < n {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    }

    fn permutation_of(&self, s: &[Vec<Rational>]) -> Option<Vec<usize>> {
        let mut image = Vec::with_capacity(self.faces.len());
        for f in &self.faces {
            let g = mat_vec(s, f);
            image.push(self.face_index(&g)?);
        }
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(image)
    }

    pub fn identity_isometry(&self) -> LinearIsometry {
        LinearIsometry { matrix: identity(self.dim), face_map: (0..self.faces.len()).collect() }
    }
}

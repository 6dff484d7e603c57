//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{integer_row, Rational, Vector};

/// Rank of a rational matrix given as rows.
///
/// Rows are scaled to integers and reduced with fraction-free (Bareiss)
/// elimination, so every intermediate entry is a minor of the input.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    bareiss_rank(&mut m)
}

pub fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let Some(cols) = m.first().map(Vec::len) else { return 0 };
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot) = (r..rows).find(|&i| !Zero::is_zero(&m[i][c])) else { continue };
        m.swap(r, pivot);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = <BigInt as Zero>::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Solution set `particular + span(kernel)` of a consistent linear system.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub particular: Vector,
    pub kernel: Vec<Vector>,
}

/// Solves `A x = b` exactly. Returns `None` when the system is inconsistent.
pub fn solve_affine(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<AffineSolution> {
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut particular = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

/// `rank([A | b]) == rank(A)`.
pub fn column_space_contains(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let augmented: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    rank(a) == rank(&augmented)
}

/// Integer scalars for the incremental eliminator. `i128` reports overflow
/// through `None`; `BigInt` never overflows.
pub trait ExactInt: Clone + std::fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_one(&self) -> bool;
}

impl ExactInt for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        // Leave headroom so products of two entries stay checkable.
        x.to_i128().filter(|v| v.unsigned_abs() < 1u128 << 100)
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// Outcome of pushing one row into an [`IncrementalEchelon`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    /// The coefficient part was independent; rank grew by one.
    Pivot,
    /// The row was a combination of earlier rows, augmented part included.
    Dependent,
    /// The coefficient part was dependent but the augmented part was not.
    Inconsistent,
}

/// Row echelon form built one row at a time, with undo.
///
/// Each row is `coefficients ++ augmented`; pivots are only taken in the
/// first `coef_cols` columns. A row whose coefficient part reduces to zero
/// while its augmented part does not witnesses `rank [A | B] > rank A`.
#[derive(Debug, Clone)]
pub struct IncrementalEchelon<T: ExactInt> {
    coef_cols: usize,
    pivots: Vec<(usize, Vec<T>)>,
    history: Vec<bool>,
}

impl<T: ExactInt> IncrementalEchelon<T> {
    pub fn new(coef_cols: usize) -> Self {
        IncrementalEchelon { coef_cols, pivots: Vec::new(), history: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn depth(&self) -> usize {
        self.history.len()
    }

    /// Reduces `row` and records it. Inconsistent rows are not recorded.
    pub fn push(&mut self, row: &[T]) -> Result<RowStatus, Overflow> {
        let mut r = row.to_vec();
        for (c, p) in &self.pivots {
            if r[*c].is_zero() {
                continue;
            }
            let (pc, rc) = (p[*c].clone(), r[*c].clone());
            let g = pc.gcd(&rc);
            let (pm, rm) = (pc.div_exact(&g), rc.div_exact(&g));
            for j in 0..r.len() {
                if p[j].is_zero() && r[j].is_zero() {
                    continue;
                }
                r[j] = T::mul_sub(&r[j], &pm, &p[j], &rm).ok_or(Overflow)?;
            }
            normalize(&mut r);
        }
        match (0..self.coef_cols).find(|&j| !r[j].is_zero()) {
            Some(c) => {
                self.pivots.push((c, r));
                self.history.push(true);
                Ok(RowStatus::Pivot)
            }
            None if r[self.coef_cols..].iter().all(T::is_zero) => {
                self.history.push(false);
                Ok(RowStatus::Dependent)
            }
            None => Ok(RowStatus::Inconsistent),
        }
    }

    /// Undoes the most recent successful `push`.
    pub fn pop(&mut self) {
        if self.history.pop() == Some(true) {
            self.pivots.pop();
        }
    }
}

fn normalize<T: ExactInt>(r: &mut [T]) {
    let mut g = T::zero();
    for x in r.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if !g.is_zero() {
        for x in r.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
}

/// Converts a rational row to primitive integer form in the given scalar type.
pub fn to_exact_row<T: ExactInt>(row: &[Rational]) -> Option<Vec<T>> {
    integer_row(row).iter().map(T::from_big).collect()
}

pub fn mat_vec(rows: &[Vec<Rational>], x: &[Rational]) -> Vector {
    rows.iter().map(|r| crate::rational::dot(r, x)).collect()
}

/// Inverse of a square rational matrix, if it exists.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let v = &a[c][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let Some(cols) = m.first().map(Vec::len) else { return Vec::new() };
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let bt = transpose(b);
    a.iter().map(|r| bt.iter().map(|c| crate::rational::dot(r, c)).collect()).collect()
}

pub fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn is_nonnegative(x: &Rational) -> bool {
    !x.is_negative()
}

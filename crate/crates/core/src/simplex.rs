//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Problems are stated over free variables with `a·x <= b` constraints,
//! which covers both the face-minimality check of polytope norms and the
//! feasibility programs of the global rigidity search.

use num_traits::{Signed, Zero};

use crate::rational::{Rational, Vector};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vector, value: Rational },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coefficients: Vector,
    pub bound: Rational,
}

impl Constraint {
    pub fn le(coefficients: Vector, bound: Rational) -> Self {
        Constraint { coefficients, bound }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, obj: &mut [Rational], r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in 0..=self.width {
                if !pivot_row[j].is_zero() {
                    row[j] -= &pivot_row[j] * &f;
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for j in 0..=self.width {
                if !pivot_row[j].is_zero() {
                    obj[j] -= &pivot_row[j] * &f;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes the objective whose reduced-cost row is `obj` (last entry is
    /// minus the current value). Columns with `allowed[j] == false` never
    /// enter. Returns false when unbounded.
    fn run(&mut self, obj: &mut [Rational], allowed: &[bool]) -> bool {
        loop {
            let Some(c) = (0..self.width).find(|&j| allowed[j] && obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(obj, r, c);
        }
    }
}

/// Maximizes `objective · x` subject to the constraints; `objective = None`
/// asks for any feasible point.
pub fn solve(vars: usize, constraints: &[Constraint], objective: Option<&[Rational]>) -> LpOutcome {
    let m = constraints.len();
    // Columns: x+ (vars), x- (vars), slacks (m), artificials (m).
    let slack0 = 2 * vars;
    let art0 = slack0 + m;
    let width = art0 + m;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut artificial_rows = Vec::new();
    for (i, con) in constraints.iter().enumerate() {
        debug_assert_eq!(con.coefficients.len(), vars);
        let mut row = vec![Rational::zero(); width + 1];
        let flip = con.bound.is_negative();
        let sign = if flip { -Rational::from_integer(1.into()) } else { Rational::from_integer(1.into()) };
        for (j, a) in con.coefficients.iter().enumerate() {
            row[j] = a * &sign;
            row[vars + j] = -(a * &sign);
        }
        row[slack0 + i] = sign.clone();
        row[width] = &con.bound * &sign;
        if flip {
            row[art0 + i] = Rational::from_integer(1.into());
            basis.push(art0 + i);
            artificial_rows.push(i);
        } else {
            basis.push(slack0 + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, width };
    let mut allowed: Vec<bool> = (0..width).map(|j| j < art0).collect();

    if !artificial_rows.is_empty() {
        let mut obj = vec![Rational::zero(); width + 1];
        for &i in &artificial_rows {
            for j in 0..=width {
                if j < art0 || j == width {
                    obj[j] -= &t.rows[i][j];
                }
            }
        }
        let mut phase_one_allowed = allowed.clone();
        for &i in &artificial_rows {
            phase_one_allowed[art0 + i] = true;
        }
        t.run(&mut obj, &phase_one_allowed);
        if !obj[width].is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if t.basis[r] >= art0 {
                if let Some(c) = (0..art0).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(&mut obj, r, c);
                }
            }
        }
    }
    for a in allowed.iter_mut().skip(art0) {
        *a = false;
    }

    let extract = |t: &Tableau| -> Vector {
        let mut full = vec![Rational::zero(); width];
        for (r, &b) in t.basis.iter().enumerate() {
            full[b] = t.rows[r][width].clone();
        }
        (0..vars).map(|j| &full[j] - &full[vars + j]).collect()
    };

    let Some(c) = objective else {
        return LpOutcome::Optimal { x: extract(&t), value: Rational::zero() };
    };
    // Minimize -c·x.
    let mut cost = vec![Rational::zero(); width + 1];
    for (j, cj) in c.iter().enumerate() {
        cost[j] = -cj.clone();
        cost[vars + j] = cj.clone();
    }
    let mut obj = cost.clone();
    for (r, &b) in t.basis.iter().enumerate() {
        if cost[b].is_zero() {
            continue;
        }
        let f = cost[b].clone();
        for j in 0..=width {
            if !t.rows[r][j].is_zero() {
                obj[j] -= &t.rows[r][j] * &f;
            }
        }
    }
    if !t.run(&mut obj, &allowed) {
        return LpOutcome::Unbounded;
    }
    let x = extract(&t);
    let value = crate::rational::dot(c, &x);
    LpOutcome::Optimal { x, value }
}

pub fn feasible_point(vars: usize, constraints: &[Constraint]) -> Option<Vector> {
    match solve(vars, constraints, None) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

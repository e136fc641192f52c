//! Dense two-phase tableau simplex over exact rationals.
//!
//! Bland's rule (lowest-index entering column, lowest-index leaving basic
//! variable on ratio ties) guarantees termination on degenerate problems.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rational,
    pub point: Vec<Rational>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    // reduced costs c_j - c_B B^-1 A_j and current objective value
    reduced: Vec<Rational>,
    objective: Rational,
}

impl Tableau {
    fn price(&mut self, costs: &[Rational]) {
        let width = costs.len();
        let mut reduced = costs.to_vec();
        let mut objective = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, entry) in self.rows[r].iter().enumerate().take(width) {
                if !entry.is_zero() {
                    reduced[j] -= cb * entry;
                }
            }
            objective += cb * &self.rhs[r];
        }
        self.reduced = reduced;
        self.objective = objective;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        if !pivot.is_one() {
            for entry in self.rows[row].iter_mut() {
                if !entry.is_zero() {
                    *entry /= &pivot;
                }
            }
            self.rhs[row] /= &pivot;
        }
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (entry, p) in self.rows[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *entry -= &factor * p;
                }
            }
            self.rhs[r] -= &factor * &pivot_rhs;
        }
        let factor = self.reduced[col].clone();
        if !factor.is_zero() {
            for (entry, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *entry -= &factor * p;
                }
            }
            self.objective += &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Maximizes over columns `< allowed`. Errors if unbounded.
    fn optimize(&mut self, allowed: usize) -> Result<(), SimplexError> {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.reduced[j].is_positive()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio || (ratio == *best_ratio && self.basis[r] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (row, _) = leave.ok_or(SimplexError::Unbounded)?;
            self.pivot(row, col);
        }
    }
}

/// Maximizes `objective · x` subject to `rows` and `x >= 0`.
pub fn maximize(objective: &[Rational], rows: &[Row]) -> Result<Optimum, SimplexError> {
    let n = objective.len();
    let m = rows.len();

    // Normalize to nonnegative right-hand sides.
    let normalized: Vec<Row> = rows
        .iter()
        .map(|row| {
            debug_assert_eq!(row.coefficients.len(), n);
            if row.rhs.is_negative() {
                Row {
                    coefficients: row.coefficients.iter().map(|c| -c).collect(),
                    relation: match row.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    },
                    rhs: -&row.rhs,
                }
            } else {
                row.clone()
            }
        })
        .collect();

    let slack_count = normalized.iter().filter(|r| r.relation != Relation::Eq).count();
    let artificial_count = normalized.iter().filter(|r| r.relation != Relation::Le).count();
    let first_artificial = n + slack_count;
    let width = first_artificial + artificial_count;

    let mut table = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        reduced: Vec::new(),
        objective: Rational::zero(),
    };
    let mut next_slack = n;
    let mut next_artificial = first_artificial;
    for row in &normalized {
        let mut entries = row.coefficients.clone();
        entries.resize(width, Rational::zero());
        match row.relation {
            Relation::Le => {
                entries[next_slack] = Rational::one();
                table.basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                entries[next_slack] = -Rational::one();
                next_slack += 1;
                entries[next_artificial] = Rational::one();
                table.basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                entries[next_artificial] = Rational::one();
                table.basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        table.rows.push(entries);
        table.rhs.push(row.rhs.clone());
    }

    // Phase 1: maximize minus the sum of artificials.
    if artificial_count > 0 {
        let mut costs = vec![Rational::zero(); width];
        for cost in &mut costs[first_artificial..] {
            *cost = -Rational::one();
        }
        table.price(&costs);
        table.optimize(width)?;
        if table.objective.is_negative() {
            return Err(SimplexError::Infeasible);
        }
        // Drive remaining (zero-level) artificials out of the basis.
        let mut r = 0;
        while r < table.rows.len() {
            if table.basis[r] >= first_artificial {
                match (0..first_artificial).find(|&j| !table.rows[r][j].is_zero()) {
                    Some(col) => table.pivot(r, col),
                    None => {
                        // Redundant constraint.
                        table.rows.remove(r);
                        table.rhs.remove(r);
                        table.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }
    for row in &mut table.rows {
        row.truncate(first_artificial);
    }

    let mut costs = objective.to_vec();
    costs.resize(first_artificial, Rational::zero());
    table.price(&costs);
    table.optimize(first_artificial)?;

    let mut point = vec![Rational::zero(); n];
    for (r, &b) in table.basis.iter().enumerate() {
        if b < n {
            point[b] = table.rhs[r].clone();
        }
    }
    Ok(Optimum {
        value: table.objective,
        point,
    })
}

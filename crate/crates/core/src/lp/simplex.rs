//! Dense exact-rational tableau simplex with Bland's anti-cycling rule.
//!
//! Solves `max cᵀx  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`, so the slack basis is
//! feasible from the start and no phase one is needed.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, Debug)]
pub struct Solution {
    pub value: Q,
    /// Optimal primal point.
    pub x: Vec<Q>,
    /// Optimal multipliers of the rows of `A` (the dual solution).
    pub duals: Vec<Q>,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Optimal,
    Unbounded,
}

/// Sparse row of the tableau: `(column, value)` sorted by column.
type Row = Vec<(usize, Q)>;

pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Result<(Outcome, Solution)> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("inconsistent LP dimensions".into()));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::InvalidParameter("right-hand side must be nonnegative".into()));
    }
    let width = n + m;
    let mut rows: Vec<Row> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Row = r
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect();
            row.push((n + i, Q::from_integer(1.into())));
            row
        })
        .collect();
    let mut rhs: Vec<Q> = b.to_vec();
    // reduced-cost row, stored as -c so that negative entries may enter
    let mut obj: Vec<Q> = c.iter().map(|v| -v.clone()).chain((0..m).map(|_| Q::zero())).collect();
    let mut obj_value = Q::zero();
    let mut basis: Vec<usize> = (n..width).collect();
    let mut pivots = 0;

    loop {
        let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for (i, row) in rows.iter().enumerate() {
            let Some(coef) = lookup(row, enter) else { continue };
            if !coef.is_positive() {
                continue;
            }
            let ratio = &rhs[i] / coef;
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return Ok((
                Outcome::Unbounded,
                Solution {
                    value: obj_value,
                    x: vec![],
                    duals: vec![],
                    pivots,
                },
            ));
        };
        pivot(&mut rows, &mut rhs, &mut obj, &mut obj_value, r, enter);
        basis[r] = enter;
        pivots += 1;
    }

    let mut x = vec![Q::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = rhs[i].clone();
        }
    }
    let duals = obj[n..].to_vec();
    Ok((
        Outcome::Optimal,
        Solution {
            value: obj_value,
            x,
            duals,
            pivots,
        },
    ))
}

fn lookup(row: &Row, col: usize) -> Option<&Q> {
    row.binary_search_by_key(&col, |(j, _)| *j)
        .ok()
        .map(|i| &row[i].1)
}

fn pivot(rows: &mut [Row], rhs: &mut [Q], obj: &mut [Q], obj_value: &mut Q, r: usize, enter: usize) {
    let p = lookup(&rows[r], enter).expect("pivot entry").clone();
    for (_, v) in rows[r].iter_mut() {
        *v = &*v / &p;
    }
    rhs[r] = &rhs[r] / &p;
    let prow = rows[r].clone();
    let prhs = rhs[r].clone();
    for i in 0..rows.len() {
        if i == r {
            continue;
        }
        let Some(f) = lookup(&rows[i], enter).cloned() else { continue };
        rows[i] = axpy(&rows[i], &f, &prow);
        rhs[i] = &rhs[i] - &f * &prhs;
    }
    let f = obj[enter].clone();
    if !f.is_zero() {
        for (j, v) in &prow {
            obj[*j] = &obj[*j] - &f * v;
        }
        *obj_value = &*obj_value - &f * &prhs;
    }
}

/// `row - f * prow`, dropping zeros.
fn axpy(row: &Row, f: &Q, prow: &Row) -> Row {
    let mut out = Vec::with_capacity(row.len() + prow.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < prow.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = prow.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(f * &prow[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - f * &prow[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn textbook_problem() {
        // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2, 6)
        let c = vec![q(3), q(5)];
        let a = vec![vec![q(1), q(0)], vec![q(0), q(2)], vec![q(3), q(2)]];
        let b = vec![q(4), q(12), q(18)];
        let (out, sol) = maximize(&c, &a, &b).unwrap();
        assert_eq!(out, Outcome::Optimal);
        assert_eq!(sol.value, q(36));
        assert_eq!(sol.x, vec![q(2), q(6)]);
        // duals: (0, 3/2, 1)
        assert_eq!(sol.duals, vec![q(0), frac(3, 2), q(1)]);
        let dual_obj: Q = sol.duals.iter().zip(&b).map(|(y, b)| y * b).sum();
        assert_eq!(dual_obj, sol.value);
    }

    #[test]
    fn unbounded_detected() {
        let c = vec![q(1), q(1)];
        let a = vec![vec![q(1), q(-1)]];
        let (out, _) = maximize(&c, &a, &[q(1)]).unwrap();
        assert_eq!(out, Outcome::Unbounded);
    }

    #[test]
    fn degenerate_cycle_prone_instance() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let c = vec![frac(3, 4), q(-150), frac(1, 50), q(-6)];
        let a = vec![
            vec![frac(1, 4), q(-60), frac(-1, 25), q(9)],
            vec![frac(1, 2), q(-90), frac(-1, 50), q(3)],
            vec![q(0), q(0), q(1), q(0)],
        ];
        let b = vec![q(0), q(0), q(1)];
        let (out, sol) = maximize(&c, &a, &b).unwrap();
        assert_eq!(out, Outcome::Optimal);
        assert_eq!(sol.value, frac(1, 20));
    }
}

//! Weighted fractional chromatic number by column generation over stable sets.
//!
//! The restricted master is solved in its dual form
//! `max Σ w(v)·y(v)  s.t.  Σ_{v∈S} y(v) ≤ 1 for each column S, y ≥ 0`,
//! whose slack basis is feasible, and the column weights are read off the
//! optimal multipliers. New columns come from the exact maximum-weight stable
//! set oracle while some stable set has dual weight above one.

use num::{One, Signed, Zero};

use crate::certificate::verify_certificate;
use crate::cliques::degeneracy_order;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::interval::StableSetWeighting;
use crate::lp::mwss::max_weight_stable_set;
use crate::lp::simplex::{maximize, Outcome};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
}

#[derive(Clone, Debug)]
pub struct LpResult {
    /// `χ_f^w(G)`.
    pub value: Q,
    /// Optimal stable-set weighting with `total == value`.
    pub primal: StableSetWeighting,
    /// Optimal fractional clique: per-vertex weights with every stable set
    /// summing to at most one.
    pub dual: Vec<Q>,
    pub status: LpStatus,
    pub iterations: usize,
}

/// Greedy maximal stable sets, one started from each vertex in degeneracy
/// order and grown in that order. Every vertex lies in at least one.
pub fn seed_columns(g: &Graph) -> Vec<Vec<usize>> {
    let order = degeneracy_order(g);
    let mut cols: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        let mut s = vec![v];
        for &u in &order {
            if u != v && s.iter().all(|&x| !g.has_edge(x, u)) {
                s.push(u);
            }
        }
        s.sort_unstable();
        if !cols.contains(&s) {
            cols.push(s);
        }
    }
    cols
}

fn extend_maximal(g: &Graph, s: &mut Vec<usize>) {
    for u in 0..g.n() {
        if !s.contains(&u) && s.iter().all(|&x| !g.has_edge(x, u)) {
            s.push(u);
        }
    }
    s.sort_unstable();
}

pub fn chi_f(g: &Graph) -> Result<LpResult> {
    chi_f_weighted(g, &vec![Q::one(); g.n()])
}

/// Exact `χ_f^w(G)` with primal and dual certificates, both checked before
/// returning.
pub fn chi_f_weighted(g: &Graph, w: &[Q]) -> Result<LpResult> {
    let n = g.n();
    if w.len() != n {
        return Err(Error::InvalidParameter(format!(
            "weight vector has length {} but graph has {n} vertices",
            w.len()
        )));
    }
    if let Some((v, x)) = w.iter().enumerate().find(|(_, x)| x.is_negative()) {
        return Err(Error::NegativeWeight {
            vertex: v,
            weight: x.to_string(),
        });
    }
    if n == 0 {
        return Ok(LpResult {
            value: Q::zero(),
            primal: StableSetWeighting::empty(),
            dual: vec![],
            status: LpStatus::Optimal,
            iterations: 0,
        });
    }

    let mut columns = seed_columns(g);
    let mut iterations = 0;
    loop {
        iterations += 1;
        let rows: Vec<Vec<Q>> = columns
            .iter()
            .map(|s| {
                let mut r = vec![Q::zero(); n];
                for &v in s {
                    r[v] = Q::one();
                }
                r
            })
            .collect();
        let ones = vec![Q::one(); columns.len()];
        let (outcome, sol) = maximize(w, &rows, &ones)?;
        if outcome != Outcome::Optimal {
            return Err(Error::InvalidParameter(
                "restricted master unbounded: seed columns do not cover every vertex".into(),
            ));
        }
        let (mut best, price) = max_weight_stable_set(g, &sol.x)?;
        if price > Q::one() {
            extend_maximal(g, &mut best);
            debug_assert!(!columns.contains(&best));
            columns.push(best);
            continue;
        }

        let dual = sol.x;
        let cols: Vec<(Vec<usize>, Q)> = columns
            .into_iter()
            .zip(sol.duals)
            .filter(|(_, x)| x.is_positive())
            .collect();
        let primal = StableSetWeighting::new(cols, sol.value.clone());
        let result = LpResult {
            value: sol.value,
            primal,
            dual,
            status: LpStatus::Optimal,
            iterations,
        };
        check_result(g, w, &result)?;
        return Ok(result);
    }
}

/// Re-checks primal feasibility, dual feasibility (via the stable set
/// oracle) and equality of the two objective values.
pub fn check_result(g: &Graph, w: &[Q], r: &LpResult) -> Result<()> {
    let report = verify_certificate(g, &r.primal, w);
    if !report.ok {
        return Err(Error::Certificate(report.diagnostics.join("; ")));
    }
    if r.primal.column_sum() != r.value || r.primal.total != r.value {
        return Err(Error::Certificate("primal total differs from value".into()));
    }
    if r.dual.iter().any(Signed::is_negative) {
        return Err(Error::Certificate("negative dual weight".into()));
    }
    let (_, heaviest) = max_weight_stable_set(g, &r.dual)?;
    if heaviest > Q::one() {
        return Err(Error::Certificate(format!(
            "dual infeasible: a stable set has dual weight {heaviest}"
        )));
    }
    let dual_value: Q = r.dual.iter().zip(w).map(|(y, x)| y * x).sum();
    if dual_value != r.value {
        return Err(Error::Certificate(format!(
            "duality gap: primal {} vs dual {dual_value}",
            r.value
        )));
    }
    Ok(())
}

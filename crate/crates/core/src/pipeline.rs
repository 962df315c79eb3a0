//! The initial colouring phase (capacity/leftover iteration over the
//! two-stage sampler), the check of its Reed-weight drop, and the end-to-end
//! composition with an exact LP finish.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{One, Signed, Zero};

use crate::bounds::{main_bound, mu_values, p_value, rate_for_clique, ytilde_values};
use crate::certificate::verify_certificate;
use crate::cliques::{reed_weight, CliqueStructure};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::interval::StableSetWeighting;
use crate::lp::chi_f_weighted;
use crate::lp::colgen::chi_f;
use crate::rational::{fmt_q, q, Q};
use crate::sampler::{hoeffding_band, run_trials, Sampler, HOEFFDING_DELTA};
use crate::structure::{pipeline_eligibility, require_eligible};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Probabilities from exact enumeration of the sampler.
    Exact,
    /// Probabilities estimated from seeded trials.
    MonteCarlo { trials: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct Iteration {
    /// Vertices of `H_i`.
    pub h: Vec<usize>,
    /// `prob_i(v)` for `v ∈ H_i`, zero elsewhere.
    pub prob: Vec<Q>,
    /// `capacity_i(v)` before this iteration.
    pub capacity: Vec<Q>,
    pub leftover: Q,
    pub y_prime: Option<Q>,
    pub y: Q,
    pub w: Vec<Q>,
    /// `U_i`: vertices whose capacity reaches zero.
    pub removed: Vec<usize>,
    /// Vertices of `H_i` whose estimated probability is zero; they are left
    /// out of the minimum defining `y'_i`.
    pub zero_prob: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PipelineTrace {
    pub mode: Mode,
    pub y: Q,
    pub iterations: Vec<Iteration>,
    pub final_w: Vec<Q>,
    pub y_total: Q,
}

impl PipelineTrace {
    pub fn flagged(&self) -> bool {
        self.iterations.iter().any(|it| !it.zero_prob.is_empty())
    }

    /// Plain-text dump, one block per iteration.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {:?}", self.mode);
        let _ = writeln!(out, "y: {}", fmt_q(&self.y));
        for (i, it) in self.iterations.iter().enumerate() {
            let _ = writeln!(out, "iteration {i}");
            let _ = writeln!(out, "  H: {:?}", it.h);
            let _ = writeln!(out, "  leftover: {}", fmt_q(&it.leftover));
            match &it.y_prime {
                Some(y) => {
                    let _ = writeln!(out, "  y_prime: {}", fmt_q(y));
                }
                None => {
                    let _ = writeln!(out, "  y_prime: none");
                }
            }
            let _ = writeln!(out, "  y_i: {}", fmt_q(&it.y));
            for &v in &it.h {
                let _ = writeln!(
                    out,
                    "  v {v}: prob {} capacity {} w {}",
                    fmt_q(&it.prob[v]),
                    fmt_q(&it.capacity[v]),
                    fmt_q(&it.w[v])
                );
            }
            let _ = writeln!(out, "  U: {:?}", it.removed);
            if !it.zero_prob.is_empty() {
                let _ = writeln!(out, "  zero_prob (flagged): {:?}", it.zero_prob);
            }
        }
        let _ = writeln!(out, "y_total: {}", fmt_q(&self.y_total));
        for (v, w) in self.final_w.iter().enumerate() {
            let _ = writeln!(out, "w {v}: {}", fmt_q(w));
        }
        out
    }
}

/// Per-vertex probabilities and the distribution (as weighted columns
/// summing to one) of the sampler on `G[h]`, in the labels of `g`.
fn round_distribution(
    g: &Graph,
    cs: &CliqueStructure,
    h: &[usize],
    mode: Mode,
    round: u64,
) -> Result<(Vec<Q>, Vec<(Vec<usize>, Q)>)> {
    let (sub, back) = g.induced(h)?;
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in back.iter().enumerate() {
        pos[v] = i;
    }
    let blocks: Vec<Vec<usize>> = cs
        .max_cliques
        .iter()
        .map(|b| b.iter().map(|&v| pos[v]).collect())
        .collect();
    if blocks.iter().flatten().any(|&i| i == usize::MAX) {
        return Err(Error::InvalidParameter("a block lost a vertex".into()));
    }
    let sampler = Sampler::with_blocks(&sub, blocks)?;
    let relabel = |s: &[usize]| -> Vec<usize> { s.iter().map(|&i| back[i]).collect() };
    let mut prob = vec![Q::zero(); g.n()];
    let dist: Vec<(Vec<usize>, Q)> = match mode {
        Mode::Exact => {
            let d = sampler.exact()?;
            for (i, p) in d.pr_s.iter().enumerate() {
                prob[back[i]] = p.clone();
            }
            d.s.iter().map(|(s, p)| (relabel(s), p.clone())).collect()
        }
        Mode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(Error::InvalidParameter("trials must be at least 1".into()));
            }
            // a fresh seed per iteration keeps the rounds independent
            let counts = run_trials(&sampler, trials, seed.wrapping_add(round), true)?;
            let nt = Q::from_integer(trials.into());
            for (i, c) in counts.in_s.iter().enumerate() {
                prob[back[i]] = Q::from_integer((*c).into()) / &nt;
            }
            counts
                .sets
                .iter()
                .map(|(s, c)| (relabel(s), Q::from_integer((*c).into()) / &nt))
                .collect()
        }
    };
    Ok((prob, dist))
}

/// Runs the capacity/leftover iteration with total weight `y` and returns
/// the trace with a fractional `y≀w`-colouring whose coverage is exactly `w`.
pub fn initial_colouring(g: &Graph, y: &Q, mode: Mode) -> Result<(PipelineTrace, StableSetWeighting)> {
    let cs = require_eligible(g)?;
    if y.is_negative() || y > &q(cs.omega as i64) {
        return Err(Error::InvalidParameter(format!(
            "y = {y} outside [0, ω = {}]",
            cs.omega
        )));
    }
    let n = g.n();
    let mut alive = vec![true; n];
    let mut capacity = vec![Q::one(); n];
    let mut leftover = y.clone();
    let mut final_w = vec![Q::zero(); n];
    let mut columns: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    let mut iterations = Vec::new();
    for round in 0..=n as u64 {
        let h: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        let (prob, dist) = round_distribution(g, &cs, &h, mode, round)?;
        let mut zero_prob = Vec::new();
        let mut y_prime: Option<Q> = None;
        for &v in &h {
            if prob[v].is_zero() {
                zero_prob.push(v);
                continue;
            }
            let r = &capacity[v] / &prob[v];
            if y_prime.as_ref().is_none_or(|m| &r < m) {
                y_prime = Some(r);
            }
        }
        let y_i = match &y_prime {
            Some(m) if m < &leftover => m.clone(),
            _ => leftover.clone(),
        };
        let w: Vec<Q> = prob.iter().map(|p| p * &y_i).collect();
        let before = capacity.clone();
        for &v in &h {
            capacity[v] -= &w[v];
            final_w[v] += &w[v];
        }
        for (s, p) in dist {
            let wt = p * &y_i;
            if !wt.is_zero() {
                *columns.entry(s).or_insert_with(Q::zero) += wt;
            }
        }
        let prev = leftover.clone();
        leftover -= &y_i;
        let removed: Vec<usize> = if leftover.is_zero() {
            Vec::new()
        } else {
            h.iter().copied().filter(|&v| capacity[v].is_zero()).collect()
        };
        for &v in &removed {
            alive[v] = false;
        }
        let done = leftover.is_zero();
        let stuck = !done && removed.is_empty();
        iterations.push(Iteration {
            h,
            prob,
            capacity: before,
            leftover: prev,
            y_prime,
            y: y_i,
            w,
            removed,
            zero_prob,
        });
        if done {
            let y_total = iterations.iter().fold(Q::zero(), |acc, it| acc + &it.y);
            let ssw = StableSetWeighting::new(columns.into_iter().collect(), y.clone());
            let trace = PipelineTrace {
                mode,
                y: y.clone(),
                iterations,
                final_w,
                y_total,
            };
            return Ok((trace, ssw));
        }
        if stuck {
            return Err(Error::InvalidParameter(
                "no vertex reached full capacity; iteration cannot progress".into(),
            ));
        }
    }
    Err(Error::InvalidParameter("iteration did not terminate within |V| rounds".into()))
}

/// Result of checking the five weight conditions on `w`.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    /// Failures keyed by condition letter.
    pub failures: Vec<(char, String)>,
    /// `true` when checked against estimated probabilities with a slack.
    pub statistical: bool,
}

impl ConditionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn holds(&self, cond: char) -> bool {
        self.failures.iter().all(|(c, _)| *c != cond)
    }
}

fn min1(x: Q) -> Q {
    if x > Q::one() {
        Q::one()
    } else {
        x
    }
}

/// Checks (a) `w = y/ω` on `V_ω`; (b) `w(v) ≥ min{p(Δ,ℓ)y, 1}` outside `V_ω`;
/// (c) `w(X) ≥ k·min{μy, 1}` for `k`-cliques, `k < ω`; (d) `w(X) ≥
/// k·min{μ_{Δ+1−k}y, 1}` for `4 ≤ k < ω`; (e) `w(Ñ(v)) ≥ y` whenever `w(v) < 1`.
/// Each bound is lowered by `slack` per vertex involved (zero for exact runs).
pub fn check_conditions(g: &Graph, y: &Q, w: &[Q], slack: &Q) -> Result<ConditionReport> {
    let cs = CliqueStructure::new(g);
    let delta = cs.delta;
    let mv = mu_values(delta)?;
    let omega = cs.omega;
    let mut failures = Vec::new();
    let target = y / q(omega as i64);
    for v in 0..g.n() {
        if cs.in_v_omega[v] {
            if (&w[v] - &target).abs() > *slack {
                failures.push(('a', format!("w({v}) = {} != y/ω = {target}", w[v])));
            }
        } else {
            let need = min1(p_value(delta, cs.d_omega[v])? * y) - slack;
            if w[v] < need {
                failures.push(('b', format!("w({v}) = {} < {need}", w[v])));
            }
        }
        if w[v] < Q::one() {
            let have: Q = g.closed_neighbourhood(v).iter().map(|&u| &w[u]).sum();
            let need = y - slack * q(g.degree(v) as i64 + 1);
            if have < need {
                failures.push(('e', format!("w(N[{v}]) = {have} < {need}")));
            }
        }
    }
    // every k-clique lies in a maximal clique; the lightest k-subset of one is
    // its k smallest weights
    for m in &cs.maximal_cliques {
        let mut ws: Vec<&Q> = m.iter().map(|&v| &w[v]).collect();
        ws.sort();
        let mut prefix = Q::zero();
        for (i, x) in ws.iter().enumerate() {
            prefix += *x;
            let k = i + 1;
            if k >= omega {
                break;
            }
            let kq = q(k as i64);
            let need_c = &kq * min1(&mv.mu * y) - &kq * slack;
            if prefix < need_c {
                failures.push(('c', format!("{k}-subset of {m:?} weighs {prefix} < {need_c}")));
            }
            if k >= 4 {
                let need_d = &kq * min1(rate_for_clique(delta, k, &mv) * y) - &kq * slack;
                if prefix < need_d {
                    failures.push(('d', format!("{k}-subset of {m:?} weighs {prefix} < {need_d}")));
                }
            }
        }
    }
    Ok(ConditionReport {
        failures,
        statistical: !slack.is_zero(),
    })
}

/// Trace invariants: leftovers decrease to zero, capacities stay in
/// `[0, 1]` and never increase, blocks stay in every `H_i`, `Σ y_i = y`, and
/// the weighting's coverage equals `w`.
pub fn check_trace(g: &Graph, trace: &PipelineTrace, ssw: &StableSetWeighting) -> Vec<String> {
    let cs = CliqueStructure::new(g);
    let mut out = Vec::new();
    if trace.y_total != trace.y {
        out.push(format!("Σ y_i = {} != y = {}", trace.y_total, trace.y));
    }
    if trace.iterations.len() > g.n() + 1 {
        out.push("more than |V| + 1 iterations".into());
    }
    for (i, it) in trace.iterations.iter().enumerate() {
        if it.leftover.is_negative() || it.y > it.leftover {
            out.push(format!("iteration {i}: y_i exceeds leftover"));
        }
        for &v in cs.v_omega().iter() {
            if it.h.binary_search(&v).is_err() {
                out.push(format!("iteration {i}: block vertex {v} missing from H"));
            }
        }
        for &v in &it.h {
            if it.capacity[v].is_negative() || it.capacity[v] > Q::one() {
                out.push(format!("iteration {i}: capacity({v}) = {}", it.capacity[v]));
            }
        }
    }
    let cov = ssw.coverage(g.n());
    if cov != trace.final_w {
        out.push("weighting coverage differs from w".into());
    }
    if ssw.column_sum() > trace.y {
        out.push(format!("column sum {} exceeds y", ssw.column_sum()));
    }
    let report = verify_certificate(g, ssw, &trace.final_w);
    out.extend(report.diagnostics);
    for (v, w) in trace.final_w.iter().enumerate() {
        if w > &Q::one() {
            out.push(format!("w({v}) = {w} exceeds 1"));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub y: Q,
    /// `Δ − (1 + μ)y`.
    pub bound: Q,
    /// `ρ_{1−w}(v)` per vertex.
    pub rho: Vec<Q>,
    pub rho_max: Q,
    pub conditions: ConditionReport,
    pub trace_failures: Vec<String>,
    pub holds: bool,
}

/// Runs the exact initial colouring at `y` and checks
/// `ρ_{1−w}(G) ≤ Δ − (1 + μ)y` with exact arithmetic.
pub fn verify_theorem_initial(g: &Graph, y: &Q) -> Result<(TheoremReport, PipelineTrace, StableSetWeighting)> {
    let cs = require_eligible(g)?;
    let yt = ytilde_values(cs.delta)?;
    if y.is_negative() || y > &yt.ytilde {
        return Err(Error::InvalidParameter(format!(
            "y = {y} outside [0, ỹ = {}]",
            yt.ytilde
        )));
    }
    let (trace, ssw) = initial_colouring(g, y, Mode::Exact)?;
    let conditions = check_conditions(g, y, &trace.final_w, &Q::zero())?;
    let trace_failures = check_trace(g, &trace, &ssw);
    let residual: Vec<Q> = trace.final_w.iter().map(|w| Q::one() - w).collect();
    let (rho, rho_max) = reed_weight(g, &cs, &residual)?;
    let mu = mu_values(cs.delta)?.mu;
    let bound = q(cs.delta as i64) - (Q::one() + mu) * y;
    let holds = rho_max <= bound && conditions.ok() && trace_failures.is_empty();
    Ok((
        TheoremReport {
            y: y.clone(),
            bound,
            rho,
            rho_max,
            conditions,
            trace_failures,
            holds,
        },
        trace,
        ssw,
    ))
}

/// The two-phase construction: the initial `y≀w` colouring plus an optimal
/// LP colouring of the residual weights `1 − w`.
#[derive(Clone, Debug)]
pub struct Composition {
    pub y: Q,
    pub theorem: TheoremReport,
    /// `χ_f^{1−w}(G)`.
    pub second_total: Q,
    pub combined: StableSetWeighting,
    pub combined_ok: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct EndToEndReport {
    pub delta: usize,
    pub epsilon: Q,
    /// `Δ − ε`.
    pub bound: Q,
    pub chi_f: Q,
    pub optimal: StableSetWeighting,
    pub composition: Option<Composition>,
    /// Why no composition was attempted.
    pub skipped: Option<String>,
}

impl EndToEndReport {
    pub fn ok(&self) -> bool {
        self.chi_f <= self.bound && self.composition.as_ref().is_none_or(|c| c.combined_ok)
    }
}

/// `χ_f(G) ≤ Δ − ε` exactly; on eligible graphs small enough for exact
/// enumeration also the composed certificate of total at most `Δ − ε`.
pub fn end_to_end(g: &Graph) -> Result<EndToEndReport> {
    let cs = CliqueStructure::new(g);
    if cs.delta < 6 || cs.omega + 1 > cs.delta {
        return Err(Error::InvalidParameter(format!(
            "need Δ ≥ 6 and ω ≤ Δ − 1, got Δ = {}, ω = {}",
            cs.delta, cs.omega
        )));
    }
    let br = main_bound(cs.delta)?;
    let lp = chi_f(g)?;
    if lp.value > br.bound {
        return Err(Error::BoundViolation(format!(
            "χ_f = {} exceeds Δ − ε = {}",
            lp.value, br.bound
        )));
    }
    let mut report = EndToEndReport {
        delta: cs.delta,
        epsilon: br.epsilon.clone(),
        bound: br.bound.clone(),
        chi_f: lp.value,
        optimal: lp.primal,
        composition: None,
        skipped: None,
    };
    let elig = pipeline_eligibility(g);
    if !elig.pass {
        report.skipped = Some("graph is not eligible for the initial colouring".into());
        return Ok(report);
    }
    let y = br.ytilde.clone();
    let (theorem, trace, initial) = match verify_theorem_initial(g, &y) {
        Ok(r) => r,
        Err(Error::SizeLimit(msg)) => {
            report.skipped = Some(format!("exact enumeration too large: {msg}"));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let residual: Vec<Q> = trace.final_w.iter().map(|w| Q::one() - w).collect();
    let second = chi_f_weighted(g, &residual)?;
    let mut diagnostics = Vec::new();
    if second.value > theorem.rho_max {
        diagnostics.push(format!(
            "χ_f^(1-w) = {} exceeds ρ_(1-w) = {}",
            second.value, theorem.rho_max
        ));
    }
    if !theorem.holds {
        diagnostics.push(format!(
            "ρ_(1-w) = {} vs bound {}; conditions {:?}; trace {:?}",
            theorem.rho_max, theorem.bound, theorem.conditions.failures, theorem.trace_failures
        ));
    }
    let combined = initial.combine(&second.primal);
    let check = verify_certificate(g, &combined, &vec![Q::one(); g.n()]);
    diagnostics.extend(check.diagnostics);
    if combined.total > br.bound {
        diagnostics.push(format!(
            "combined total {} exceeds Δ − ε = {}",
            combined.total, br.bound
        ));
    }
    report.composition = Some(Composition {
        y,
        second_total: second.value,
        combined_ok: diagnostics.is_empty(),
        combined,
        theorem,
        diagnostics,
    });
    Ok(report)
}

/// Slack for Monte Carlo condition checks: the per-vertex Hoeffding band
/// scaled by `y`, as a rational.
pub fn montecarlo_slack(y: &Q, trials: u64) -> Q {
    let band = hoeffding_band(trials, HOEFFDING_DELTA, 1.0);
    let b = Q::from_float(band).unwrap_or_else(Q::zero);
    b * y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::structure::two_block_instance;

    #[test]
    fn zero_spend_gives_empty_weighting() {
        let g = two_block_instance();
        let (trace, ssw) = initial_colouring(&g, &Q::zero(), Mode::Exact).unwrap();
        assert!(trace.final_w.iter().all(Q::is_zero));
        assert!(ssw.columns.is_empty());
    }

    #[test]
    fn small_spend_meets_conditions() {
        let g = two_block_instance();
        let y = frac(1, 10);
        let (trace, ssw) = initial_colouring(&g, &y, Mode::Exact).unwrap();
        assert!(check_trace(&g, &trace, &ssw).is_empty());
        let r = check_conditions(&g, &y, &trace.final_w, &Q::zero()).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn theorem_at_ytilde() {
        let g = two_block_instance();
        let y = ytilde_values(6).unwrap().ytilde;
        let (r, trace, _) = verify_theorem_initial(&g, &y).unwrap();
        assert!(r.holds, "{:?} {:?} {} {}", r.conditions.failures, r.trace_failures, r.rho_max, r.bound);
        // block vertices never fill up
        for it in &trace.iterations {
            for v in 0..10 {
                assert!(!it.removed.contains(&v));
            }
        }
    }

    #[test]
    fn rejects_spend_above_omega() {
        let g = two_block_instance();
        assert!(initial_colouring(&g, &q(6), Mode::Exact).is_err());
    }
}

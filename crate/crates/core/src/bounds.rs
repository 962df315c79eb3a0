//! Closed-form bound constants for a given maximum degree `Δ` (with
//! `ω = Δ − 1`): the outside-vertex probability `p(Δ, d)`, its prefix minima
//! `μ_k(Δ)`, the spend limits `ỹ_k(Δ)` and `ỹ(Δ)`, and the resulting bound
//! `Δ − min{½, ỹ(Δ)μ(Δ)}` on the fractional chromatic number.
//!
//! Everything is exact. Decimal output is fixed precision per column: `μ` is
//! truncated to 6 places, `μ(Δ+1)` and `ỹ` are rounded half-even to 3,
//! `ỹμ` half-even to 5 and the bound half-even to 6.

use std::fmt::Write as _;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, fmt_q, frac, q, round_half_even, truncate, Q};

pub const MU_PLACES: usize = 6;
pub const MU_DP1_PLACES: usize = 3;
pub const YTILDE_PLACES: usize = 3;
pub const YTILDE_MU_PLACES: usize = 5;
pub const BOUND_PLACES: usize = 6;

fn check_delta(delta: usize, min: usize) -> Result<()> {
    if delta < min {
        return Err(Error::InvalidParameter(format!("Δ = {delta} must be at least {min}")));
    }
    Ok(())
}

/// `Pr(Bin(d, 4/ω) = i)` for `i = 0..=3` (zero beyond `d`).
fn binomial_head(delta: usize, d: usize) -> [Q; 4] {
    let omega = delta as i64 - 1;
    let p = frac(4, omega);
    let one_minus = Q::one() - &p;
    let mut out: [Q; 4] = Default::default();
    for (i, slot) in out.iter_mut().enumerate() {
        if i > d {
            *slot = Q::zero();
            continue;
        }
        let coef = Q::from_integer(binomial(d as u64, i as u64));
        *slot = coef * num::pow(p.clone(), i) * num::pow(one_minus.clone(), d - i);
    }
    out
}

/// `Σ_{i=0}^{3} ¼·Pr(Bin(d, 4/ω) ≤ i)`: the lower bound on the probability that
/// an outside vertex with `d` neighbours in `V_ω` sees none of them chosen.
pub fn clear_probability(delta: usize, d: usize) -> Q {
    let head = binomial_head(delta, d);
    let quarter = frac(1, 4);
    let mut cdf = Q::zero();
    let mut acc = Q::zero();
    for h in head.iter() {
        cdf += h;
        acc += &quarter * &cdf;
    }
    acc
}

/// The same quantity in its rewritten form `Σ_{i=0}^{3} (4−i)/4 · Pr(Bin = i)`.
pub fn clear_probability_pmf_form(delta: usize, d: usize) -> Q {
    binomial_head(delta, d)
        .iter()
        .enumerate()
        .map(|(i, h)| frac(4 - i as i64, 4) * h)
        .sum()
}

/// `p(Δ, d)`.
pub fn p_value(delta: usize, d: usize) -> Result<Q> {
    check_delta(delta, 5)?;
    if d > delta {
        return Err(Error::InvalidParameter(format!("d = {d} exceeds Δ = {delta}")));
    }
    Ok(clear_probability(delta, d) / q((delta - d + 1) as i64))
}

#[derive(Clone, Debug)]
pub struct MuValues {
    /// `p(Δ, d)` for `d = 0..=Δ`.
    pub p_curve: Vec<Q>,
    /// `μ_k(Δ)` for `k = 0..=Δ`.
    pub mu_k: Vec<Q>,
    pub mu: Q,
    /// Smallest `d` with `p(Δ, d) = μ(Δ)`.
    pub argmin_d: usize,
}

pub fn mu_values(delta: usize) -> Result<MuValues> {
    check_delta(delta, 5)?;
    let p_curve = (0..=delta)
        .map(|d| p_value(delta, d))
        .collect::<Result<Vec<_>>>()?;
    let mut mu_k = Vec::with_capacity(delta + 1);
    let mut argmin_d = 0;
    for (d, p) in p_curve.iter().enumerate() {
        if p < &p_curve[argmin_d] {
            argmin_d = d;
        }
        mu_k.push(p_curve[argmin_d].clone());
    }
    let mu = mu_k[delta].clone();
    Ok(MuValues {
        p_curve,
        mu_k,
        mu,
        argmin_d,
    })
}

#[derive(Clone, Debug)]
pub struct YTildeValues {
    /// `(k, ỹ_k(Δ))` for `k = 1..=Δ−2`.
    pub ytilde_k: Vec<(usize, Q)>,
    pub ytilde: Q,
}

/// `ỹ_k = ½(Δ−1−k) / (½ + μ − ½kμ')` with `μ' = μ` for `k ≤ 3` and
/// `μ' = μ_{Δ+1−k}` otherwise; `ỹ = min{min_k ỹ_k, ω, (ω−3)/(1−3μ)}`.
pub fn ytilde_values(delta: usize) -> Result<YTildeValues> {
    check_delta(delta, 6)?;
    let mv = mu_values(delta)?;
    Ok(ytilde_from_mu(delta, &mv))
}

fn ytilde_from_mu(delta: usize, mv: &MuValues) -> YTildeValues {
    let half = frac(1, 2);
    let omega = q(delta as i64 - 1);
    let ytilde_k: Vec<(usize, Q)> = (1..=delta - 2)
        .map(|k| {
            let mu_prime = rate_for_clique(delta, k, mv);
            let num = &half * q((delta - 1 - k) as i64);
            let den = &half + &mv.mu - &half * q(k as i64) * mu_prime;
            (k, num / den)
        })
        .collect();
    let mut ytilde = omega.clone();
    for (_, y) in &ytilde_k {
        if y < &ytilde {
            ytilde = y.clone();
        }
    }
    let convenience = (&omega - q(3)) / (Q::one() - q(3) * &mv.mu);
    if convenience < ytilde {
        ytilde = convenience;
    }
    YTildeValues { ytilde_k, ytilde }
}

/// Per-vertex rate guaranteed on a `k`-clique: `μ` for `k ≤ 3`, `μ_{Δ+1−k}` for `k ≥ 4`.
pub fn rate_for_clique(delta: usize, k: usize, mv: &MuValues) -> &Q {
    if k <= 3 {
        &mv.mu
    } else {
        &mv.mu_k[delta + 1 - k]
    }
}

/// Whether `y` satisfies `(1+μ)y ≤ ½(Δ−1−k) + (½ + ½kμ')y` for clique size `k`.
pub fn spend_inequality_holds(delta: usize, k: usize, mv: &MuValues, y: &Q) -> bool {
    let half = frac(1, 2);
    let lhs = (Q::one() + &mv.mu) * y;
    let rhs = &half * q((delta - 1 - k) as i64)
        + (&half + &half * q(k as i64) * rate_for_clique(delta, k, mv)) * y;
    lhs <= rhs
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub delta: usize,
    pub omega: usize,
    pub p_curve: Vec<Q>,
    pub mu_k: Vec<Q>,
    pub mu: Q,
    pub argmin_d: usize,
    pub eps_prime: Q,
    pub ytilde_k: Vec<(usize, Q)>,
    pub ytilde: Q,
    /// `min{½, ỹμ}`.
    pub epsilon: Q,
    /// `Δ − epsilon`.
    pub bound: Q,
    /// `ỹμ < 1/5`, checked rather than assumed.
    pub product_below_one_fifth: bool,
}

impl BoundReport {
    pub fn ytilde_mu(&self) -> Q {
        &self.ytilde * &self.mu
    }

    pub fn mu_times_dp1(&self) -> Q {
        &self.mu * q(self.delta as i64 + 1)
    }
}

pub fn main_bound(delta: usize) -> Result<BoundReport> {
    check_delta(delta, 6)?;
    let mv = mu_values(delta)?;
    let yt = ytilde_from_mu(delta, &mv);
    let product = &yt.ytilde * &mv.mu;
    let half = frac(1, 2);
    let epsilon = if product < half { product.clone() } else { half };
    let bound = q(delta as i64) - &epsilon;
    Ok(BoundReport {
        delta,
        omega: delta - 1,
        eps_prime: mv.mu.clone(),
        p_curve: mv.p_curve,
        mu_k: mv.mu_k,
        mu: mv.mu,
        argmin_d: mv.argmin_d,
        ytilde_k: yt.ytilde_k,
        ytilde: yt.ytilde,
        epsilon,
        bound,
        product_below_one_fifth: product < frac(1, 5),
    })
}

pub const TABLE_HEADER: &str = "delta,d_argmin,mu,mu_times_dp1,ytilde,ytilde_mu,bound,mu_exact,ytilde_exact,bound_exact";

pub fn table_row(r: &BoundReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.delta,
        r.argmin_d,
        truncate(&r.mu, MU_PLACES),
        round_half_even(&r.mu_times_dp1(), MU_DP1_PLACES),
        round_half_even(&r.ytilde, YTILDE_PLACES),
        round_half_even(&r.ytilde_mu(), YTILDE_MU_PLACES),
        round_half_even(&r.bound, BOUND_PLACES),
        fmt_q(&r.mu),
        fmt_q(&r.ytilde),
        fmt_q(&r.bound),
    )
}

/// Table of bound constants, one row per `Δ`.
pub fn emit_table(deltas: &[usize]) -> Result<String> {
    let mut out = String::new();
    writeln!(
        out,
        "# exact values as p/q; mu truncated to {MU_PLACES} places; half-even: mu_times_dp1 {MU_DP1_PLACES}, ytilde {YTILDE_PLACES}, ytilde_mu {YTILDE_MU_PLACES}, bound {BOUND_PLACES} places"
    )
    .unwrap();
    writeln!(out, "{TABLE_HEADER}").unwrap();
    for &d in deltas {
        writeln!(out, "{}", table_row(&main_bound(d)?)).unwrap();
    }
    Ok(out)
}

/// `d, p(Δ, d)` rows (exact and rounded to 6 places).
pub fn emit_p_curve(delta: usize) -> Result<String> {
    let mv = mu_values(delta)?;
    let mut out = String::from("d,p,p_exact\n");
    for (d, p) in mv.p_curve.iter().enumerate() {
        writeln!(out, "{d},{},{}", round_half_even(p, MU_PLACES), fmt_q(p)).unwrap();
    }
    Ok(out)
}

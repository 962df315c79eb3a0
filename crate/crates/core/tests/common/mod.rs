// Independent oracles shared by the integration tests. Nothing here calls the
// library's solvers; graphs are handled as adjacency bit masks.
#![allow(dead_code)]

use fraccol::graph::Graph;
use fraccol::rational::{frac, q};
use fraccol::Q;
use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Weights `k/4` for `k ∈ 0..=8`, at least one positive.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<Q> {
    loop {
        let w: Vec<Q> = (0..n).map(|_| frac(rng.gen_range(0..=8), 4)).collect();
        if n == 0 || w.iter().any(|x| x.is_positive()) {
            return w;
        }
    }
}

pub fn adjacency(g: &Graph) -> Vec<u32> {
    assert!(g.n() <= 32);
    (0..g.n())
        .map(|v| g.neighbours(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect()
}

pub fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(vs: &[usize]) -> u32 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

/// Every nonempty stable set, by extension in increasing vertex order.
pub fn stable_sets(g: &Graph) -> Vec<u32> {
    let adj = adjacency(g);
    let n = g.n();
    let mut out = Vec::new();
    fn rec(adj: &[u32], n: usize, start: usize, cur: u32, out: &mut Vec<u32>) {
        for v in start..n {
            if adj[v] & cur == 0 {
                let next = cur | 1 << v;
                out.push(next);
                rec(adj, n, v + 1, next, out);
            }
        }
    }
    rec(&adj, n, 0, 0, &mut out);
    out
}

/// Every nonempty clique.
pub fn cliques(g: &Graph) -> Vec<u32> {
    let adj = adjacency(g);
    let n = g.n();
    let mut out = Vec::new();
    fn rec(adj: &[u32], n: usize, start: usize, cur: u32, out: &mut Vec<u32>) {
        for v in start..n {
            if adj[v] & cur == cur {
                let next = cur | 1 << v;
                out.push(next);
                rec(adj, n, v + 1, next, out);
            }
        }
    }
    rec(&adj, n, 0, 0, &mut out);
    out
}

pub fn clique_number(g: &Graph) -> usize {
    cliques(g).iter().map(|c| c.count_ones() as usize).max().unwrap_or(0)
}

/// Maximum cliques as sorted vertex lists in lexicographic order.
pub fn maximum_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let all = cliques(g);
    let omega = all.iter().map(|c| c.count_ones()).max().unwrap_or(0);
    let mut out: Vec<Vec<usize>> = all
        .into_iter()
        .filter(|c| c.count_ones() == omega)
        .map(bits)
        .collect();
    out.sort();
    out
}

/// `min Σ x_S` subject to `Σ_{S ∋ v} x_S ≥ w(v)`, `x ≥ 0`, over the given
/// columns, by a dense tableau simplex with Bland's rule. The columns must
/// include every singleton, whose basis is the starting point.
pub fn covering_lp(n: usize, columns: &[u32], w: &[Q]) -> Q {
    let m = columns.len();
    let width = m + n;
    // row v: Σ_j a_vj x_j − s_v = w_v
    let mut t: Vec<Vec<Q>> = (0..n)
        .map(|v| {
            let mut row: Vec<Q> = columns
                .iter()
                .map(|c| if c >> v & 1 == 1 { Q::one() } else { Q::zero() })
                .collect();
            row.extend((0..n).map(|s| if s == v { -Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    let mut rhs: Vec<Q> = w.to_vec();
    let mut basis: Vec<usize> = (0..n)
        .map(|v| columns.iter().position(|&c| c == 1 << v).expect("singleton column"))
        .collect();
    // the starting basis matrix is the identity permuted onto the singletons
    let cost = |j: usize| if j < m { Q::one() } else { Q::zero() };
    loop {
        // reduced costs c_j − c_B B⁻¹ A_j, with the tableau already B⁻¹ A
        let entering = (0..width).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut r = cost(j);
            for (i, &b) in basis.iter().enumerate() {
                r -= cost(b) * &t[i][j];
            }
            r.is_negative()
        });
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..n {
            if t[i][j].is_positive() {
                let ratio = &rhs[i] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("covering LP is bounded");
        let piv = t[r][j].clone();
        for x in t[r].iter_mut() {
            *x = &*x / &piv;
        }
        rhs[r] = &rhs[r] / &piv;
        for i in 0..n {
            if i != r && !t[i][j].is_zero() {
                let f = t[i][j].clone();
                for k in 0..width {
                    let d = &f * &t[r][k];
                    t[i][k] -= d;
                }
                let d = &f * &rhs[r];
                rhs[i] -= d;
            }
        }
        basis[r] = j;
    }
    basis
        .iter()
        .zip(&rhs)
        .filter(|(&b, _)| b < m)
        .fold(Q::zero(), |acc, (_, x)| acc + x)
}

/// Weighted fractional chromatic number over the full stable set polytope.
pub fn brute_chi_f(g: &Graph, w: &[Q]) -> Q {
    if g.n() == 0 {
        return Q::zero();
    }
    covering_lp(g.n(), &stable_sets(g), w)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `Σ_{i=0}^{3} ¼ Pr(Bin(d, 4/(Δ−1)) ≤ i)`.
pub fn clear_oracle(delta: usize, d: usize) -> Q {
    let p = frac(4, delta as i64 - 1);
    let one_minus = Q::one() - &p;
    let mut cdf = Q::zero();
    let mut total = Q::zero();
    for i in 0..4u64 {
        if i as usize <= d {
            let term = Q::from_integer(binomial(d as u64, i))
                * num::pow::pow(p.clone(), i as usize)
                * num::pow::pow(one_minus.clone(), d - i as usize);
            cdf += term;
        }
        total += &cdf * frac(1, 4);
    }
    total
}

pub fn p_oracle(delta: usize, d: usize) -> Q {
    clear_oracle(delta, d) / q((delta - d + 1) as i64)
}

/// `(μ_k for k = 0..=Δ, μ, argmin d)`.
pub fn mu_oracle(delta: usize) -> (Vec<Q>, Q, usize) {
    let mut best = 0;
    let mut best_val = p_oracle(delta, 0);
    let mut prefix = Vec::new();
    for d in 0..=delta {
        let p = p_oracle(delta, d);
        if p < best_val {
            best_val = p;
            best = d;
        }
        prefix.push(best_val.clone());
    }
    (prefix.clone(), prefix[delta].clone(), best)
}

/// Reed weight `max_v ½(w(Ñ(v)) + max_{C ∋ v} w(C))` over all cliques.
pub fn reed_oracle(g: &Graph, w: &[Q]) -> Q {
    let adj = adjacency(g);
    let all = cliques(g);
    let weight = |m: u32| bits(m).iter().fold(Q::zero(), |acc, &v| acc + &w[v]);
    (0..g.n())
        .map(|v| {
            let wd = weight(adj[v] | 1 << v);
            let wc = all
                .iter()
                .filter(|&&c| c >> v & 1 == 1)
                .map(|&c| weight(c))
                .max()
                .unwrap();
            (wd + wc) / q(2)
        })
        .max()
        .unwrap_or_else(Q::zero)
}

//! The two-stage random stable set: `S_ω` from a uniformly chosen 4-subset
//! of every block, then a greedy extension to `S` along a uniformly random
//! ordering of the remaining vertices.
//!
//! Exact marginals come from full enumeration on small graphs; elsewhere
//! `estimate` runs seeded Monte Carlo trials in parallel.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num::{One, ToPrimitive, Zero};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{clear_probability, clear_probability_pmf_form, mu_values, p_value};
use crate::cliques::CliqueStructure;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lp::chi_f;
use crate::rational::{frac, lcm_denominators, to_f64, Q};
use crate::structure::require_eligible;

/// Largest `|V ∖ V_ω|` accepted by exact enumeration.
pub const MAX_OUTSIDE: usize = 8;
/// Largest number of (4-subset choice, pool column) pairs exact enumeration visits.
pub const MAX_ENUMERATION: u64 = 10_000_000;
/// Largest multiset of columns realizing one exact-¼ distribution.
pub const MAX_POOL: u64 = 1_000_000;
/// Failure probability per statistical assertion.
pub const HOEFFDING_DELTA: f64 = 1e-3;

/// `range · sqrt(ln(2/δ) / 2N)`.
pub fn hoeffding_band(trials: u64, delta: f64, range: f64) -> f64 {
    range * ((2.0 / delta).ln() / (2.0 * trials as f64)).sqrt()
}

/// Multiset of stable sets of `G̃_ω` in which every vertex of `G̃_ω` lies in
/// exactly a quarter of the columns.
#[derive(Clone, Debug)]
pub struct Pool {
    /// Distinct columns (original labels) with multiplicities.
    pub columns: Vec<(Vec<usize>, u64)>,
    pub size: u64,
}

impl Pool {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> &[usize] {
        let mut r = rng.gen_range(0..self.size);
        for (s, c) in &self.columns {
            if r < *c {
                return s;
            }
            r -= c;
        }
        unreachable!("r < size")
    }
}

/// The sampler for a fixed graph and block family.
pub struct Sampler {
    g: Graph,
    blocks: Vec<Vec<usize>>,
    omega: usize,
    in_block: Vec<bool>,
    /// `V ∖ V_ω` in increasing order.
    outside: Vec<usize>,
    pools: Mutex<HashMap<Vec<usize>, Arc<Pool>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Draw {
    pub s_omega: Vec<usize>,
    pub s: Vec<usize>,
}

impl Sampler {
    /// Sampler over the maximum cliques of an eligible graph.
    pub fn new(g: &Graph) -> Result<Self> {
        let cs = require_eligible(g)?;
        Self::with_blocks(g, cs.max_cliques)
    }

    /// Sampler over explicit blocks: pairwise disjoint cliques of one common
    /// size at least 4. Vertices outside the blocks are extended greedily.
    pub fn with_blocks(g: &Graph, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut in_block = vec![false; g.n()];
        let omega = blocks.first().map_or(4, Vec::len);
        for b in &blocks {
            if b.len() != omega || omega < 4 {
                return Err(Error::Eligibility(format!(
                    "blocks must share one size of at least 4, got {}",
                    b.len()
                )));
            }
            if !g.is_clique(b) {
                return Err(Error::Eligibility(format!("block {b:?} is not a clique")));
            }
            for &v in b {
                if in_block[v] {
                    return Err(Error::Eligibility(format!("vertex {v} lies in two blocks")));
                }
                in_block[v] = true;
            }
        }
        let outside = (0..g.n()).filter(|&v| !in_block[v]).collect();
        let mut blocks = blocks;
        for b in &mut blocks {
            b.sort_unstable();
        }
        Ok(Sampler {
            g: g.clone(),
            blocks,
            omega,
            in_block,
            outside,
            pools: Mutex::new(HashMap::new()),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn outside(&self) -> &[usize] {
        &self.outside
    }

    /// The exact-¼ pool of `G̃_ω = G[tilde]`, built once per vertex set.
    pub fn pool(&self, tilde: &[usize]) -> Result<Arc<Pool>> {
        if let Some(p) = self.pools.lock().expect("pool cache").get(tilde) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(build_pool(&self.g, tilde)?);
        self.pools
            .lock()
            .expect("pool cache")
            .insert(tilde.to_vec(), Arc::clone(&p));
        Ok(p)
    }

    /// Uniform independent 4-subsets `B'_i`; returns their sorted union.
    pub fn choose_subsets<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut tilde = Vec::with_capacity(4 * self.blocks.len());
        for b in &self.blocks {
            for i in index::sample(rng, b.len(), 4).into_iter() {
                tilde.push(b[i]);
            }
        }
        tilde.sort_unstable();
        tilde
    }

    pub fn sample_s_omega<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<usize>> {
        let tilde = self.choose_subsets(rng);
        let pool = self.pool(&tilde)?;
        Ok(pool.draw(rng).to_vec())
    }

    /// Greedy insertion of the vertices outside the blocks in a uniformly
    /// random order.
    pub fn extend_to_s<R: Rng + ?Sized>(&self, s_omega: &[usize], rng: &mut R) -> Vec<usize> {
        let mut order = self.outside.clone();
        order.shuffle(rng);
        greedy_extend(&self.g, s_omega, &order)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Draw> {
        let s_omega = self.sample_s_omega(rng)?;
        let s = self.extend_to_s(&s_omega, rng);
        Ok(Draw { s_omega, s })
    }

    /// Every choice of the 4-subsets, as sorted unions, in lexicographic order
    /// of the per-block choices.
    fn all_choices(&self) -> Result<Vec<Vec<usize>>> {
        let per_block: Vec<Vec<Vec<usize>>> =
            self.blocks.iter().map(|b| four_subsets(b)).collect();
        let count = per_block
            .iter()
            .try_fold(1u64, |acc, s| acc.checked_mul(s.len() as u64))
            .filter(|&c| c <= MAX_ENUMERATION)
            .ok_or_else(|| Error::SizeLimit("too many 4-subset choices".into()))?;
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = vec![0usize; per_block.len()];
        loop {
            let mut tilde: Vec<usize> = digits
                .iter()
                .enumerate()
                .flat_map(|(b, &d)| per_block[b][d].iter().copied())
                .collect();
            tilde.sort_unstable();
            out.push(tilde);
            // mixed-radix increment, last block fastest
            let mut i = per_block.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < per_block[i].len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    /// Exact joint probability that both `x` and `y` land in `G̃_ω`, by
    /// enumerating every choice of 4-subsets.
    pub fn tilde_joint(&self, x: usize, y: usize) -> Result<Q> {
        let choices = self.all_choices()?;
        let hits = choices
            .iter()
            .filter(|t| t.binary_search(&x).is_ok() && t.binary_search(&y).is_ok())
            .count();
        Ok(frac(hits as i64, choices.len() as i64))
    }

    /// Full distribution of `(S_ω, S)` by enumeration.
    pub fn exact(&self) -> Result<ExactDistribution> {
        let n = self.g.n();
        let r = self.outside.len();
        if r > MAX_OUTSIDE {
            return Err(Error::SizeLimit(format!(
                "{r} vertices outside the blocks exceed {MAX_OUTSIDE}"
            )));
        }
        let choices = self.all_choices()?;
        let nchoices = Q::from_integer(choices.len().into());
        let pos: HashMap<usize, usize> =
            self.outside.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // closed neighbourhoods within the outside vertices, as bit masks
        let closed: Vec<u32> = self
            .outside
            .iter()
            .map(|&v| {
                self.g
                    .neighbours(v)
                    .iter()
                    .filter_map(|u| pos.get(u))
                    .fold(1u32 << pos[&v], |m, &i| m | 1 << i)
            })
            .collect();
        let mut memo: HashMap<u32, Arc<Vec<(u32, Q)>>> = HashMap::new();
        let full: u32 = if r == 0 { 0 } else { u32::MAX >> (32 - r) };

        let mut s_dist: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        let mut s_omega_dist: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        let mut in_tilde = vec![Q::zero(); n];
        let mut work = 0u64;
        for tilde in &choices {
            for &v in tilde {
                in_tilde[v] += Q::one() / &nchoices;
            }
            let pool = self.pool(tilde)?;
            work += pool.columns.len() as u64;
            if work > MAX_ENUMERATION {
                return Err(Error::SizeLimit("enumeration exceeds limit".into()));
            }
            let scale = &nchoices * Q::from_integer(pool.size.into());
            for (col, count) in &pool.columns {
                let p_col = Q::from_integer((*count).into()) / &scale;
                *s_omega_dist.entry(col.clone()).or_insert_with(Q::zero) += &p_col;
                let blocked = col.iter().fold(0u32, |m, &u| {
                    self.g
                        .neighbours(u)
                        .iter()
                        .filter_map(|x| pos.get(x))
                        .fold(m, |m, &i| m | 1 << i)
                });
                let outcomes = greedy_distribution(full & !blocked, &closed, &mut memo);
                for (chosen, p) in outcomes.iter() {
                    let mut s = col.clone();
                    s.extend((0..r).filter(|i| chosen >> i & 1 == 1).map(|i| self.outside[i]));
                    s.sort_unstable();
                    *s_dist.entry(s).or_insert_with(Q::zero) += &p_col * p;
                }
            }
        }
        Ok(ExactDistribution::from_parts(
            &self.g,
            &self.in_block,
            s_dist.into_iter().collect(),
            s_omega_dist.into_iter().collect(),
            in_tilde,
        ))
    }
}

/// Distribution of the set picked by random-order greedy on the vertices of
/// `mask`: the first vertex of a uniform ordering is uniform, joins the set,
/// and its closed neighbourhood leaves; the rest of the ordering stays uniform.
fn greedy_distribution(
    mask: u32,
    closed: &[u32],
    memo: &mut HashMap<u32, Arc<Vec<(u32, Q)>>>,
) -> Arc<Vec<(u32, Q)>> {
    if let Some(d) = memo.get(&mask) {
        return Arc::clone(d);
    }
    let out = if mask == 0 {
        vec![(0, Q::one())]
    } else {
        let k = Q::from_integer(mask.count_ones().into());
        let mut acc: BTreeMap<u32, Q> = BTreeMap::new();
        for i in 0..closed.len() {
            if mask >> i & 1 == 0 {
                continue;
            }
            let sub = greedy_distribution(mask & !closed[i], closed, memo);
            for (chosen, p) in sub.iter() {
                *acc.entry(chosen | 1 << i).or_insert_with(Q::zero) += p / &k;
            }
        }
        acc.into_iter().collect()
    };
    let out = Arc::new(out);
    memo.insert(mask, Arc::clone(&out));
    out
}

/// Adds each vertex of `order` in turn when it has no neighbour in the set so far.
pub fn greedy_extend(g: &Graph, start: &[usize], order: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.n()];
    for &v in start {
        inside[v] = true;
    }
    let mut s = start.to_vec();
    for &v in order {
        if !inside[v] && g.neighbours(v).iter().all(|&u| !inside[u]) {
            inside[v] = true;
            s.push(v);
        }
    }
    s.sort_unstable();
    s
}

fn four_subsets(b: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let m = b.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    out.push(vec![b[i], b[j], b[k], b[l]]);
                }
            }
        }
    }
    out
}

/// Optimal fractional 4-colouring of `G[tilde]` as a multiset, trimmed so
/// every vertex is in exactly a quarter of the columns. Removing a vertex
/// from a column keeps it stable.
pub fn build_pool(g: &Graph, tilde: &[usize]) -> Result<Pool> {
    let (h, back) = g.induced(tilde)?;
    if h.max_degree() > 5 {
        return Err(Error::AharoniHypothesis(format!(
            "G̃_ω on {tilde:?} has maximum degree {}",
            h.max_degree()
        )));
    }
    let lp = chi_f(&h)?;
    if lp.value != Q::from_integer(4.into()) {
        return Err(Error::AharoniHypothesis(format!(
            "χ_f(G̃_ω) = {} on {tilde:?}",
            lp.value
        )));
    }
    let c = lcm_denominators(lp.primal.columns.iter().map(|(_, w)| w));
    let c = c
        .to_u64()
        .filter(|&c| c.saturating_mul(4) <= MAX_POOL)
        .ok_or_else(|| Error::SizeLimit(format!("pool multiplier {c}")))?;
    let mut cols: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for (s, w) in &lp.primal.columns {
        let copies = (w * Q::from_integer(c.into()))
            .to_integer()
            .to_u64()
            .expect("bounded by pool size");
        let s: Vec<usize> = s.iter().map(|&i| back[i]).collect();
        *cols.entry(s).or_insert(0) += copies;
    }
    for &v in tilde {
        let cover: u64 = cols.iter().filter(|(s, _)| s.contains(&v)).map(|(_, c)| c).sum();
        let mut excess = cover - c;
        let holders: Vec<Vec<usize>> = cols.keys().filter(|s| s.contains(&v)).cloned().collect();
        for s in holders {
            if excess == 0 {
                break;
            }
            let have = cols[&s];
            let t = have.min(excess);
            if t == have {
                cols.remove(&s);
            } else {
                *cols.get_mut(&s).expect("present") -= t;
            }
            let trimmed: Vec<usize> = s.iter().copied().filter(|&u| u != v).collect();
            *cols.entry(trimmed).or_insert(0) += t;
            excess -= t;
        }
    }
    Ok(Pool {
        columns: cols.into_iter().collect(),
        size: 4 * c,
    })
}

/// Exact distribution of the two-stage sampler with the derived marginals.
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    /// `(S, Pr)` over every reachable `S`.
    pub s: Vec<(Vec<usize>, Q)>,
    /// `(S_ω, Pr)`.
    pub s_omega: Vec<(Vec<usize>, Q)>,
    pub pr_s: Vec<Q>,
    pub pr_s_omega: Vec<Q>,
    /// `Pr(v ∈ G̃_ω)`.
    pub pr_tilde: Vec<Q>,
    /// `Pr(N_ω(v) ∩ S_ω = ∅)` for vertices outside the blocks.
    pub pr_clear: Vec<Option<Q>>,
    /// `E|S ∩ Ñ(v)|`.
    pub expected_closed: Vec<Q>,
}

impl ExactDistribution {
    fn from_parts(
        g: &Graph,
        in_block: &[bool],
        s: Vec<(Vec<usize>, Q)>,
        s_omega: Vec<(Vec<usize>, Q)>,
        pr_tilde: Vec<Q>,
    ) -> Self {
        let n = g.n();
        let marginals = |d: &[(Vec<usize>, Q)]| {
            let mut m = vec![Q::zero(); n];
            for (set, p) in d {
                for &v in set {
                    m[v] += p;
                }
            }
            m
        };
        let pr_s = marginals(&s);
        let pr_s_omega = marginals(&s_omega);
        let pr_clear = (0..n)
            .map(|v| {
                (!in_block[v]).then(|| {
                    s_omega
                        .iter()
                        .filter(|(set, _)| set.iter().all(|&u| !g.has_edge(u, v)))
                        .fold(Q::zero(), |acc, (_, p)| acc + p)
                })
            })
            .collect();
        let expected_closed = (0..n)
            .map(|v| {
                g.closed_neighbourhood(v)
                    .iter()
                    .fold(Q::zero(), |acc, &u| acc + &pr_s[u])
            })
            .collect();
        ExactDistribution {
            s,
            s_omega,
            pr_s,
            pr_s_omega,
            pr_tilde,
            pr_clear,
            expected_closed,
        }
    }
}

pub fn sample_s_omega<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Vec<usize>> {
    Sampler::new(g)?.sample_s_omega(rng)
}

/// Greedy extension of `s_omega` over `V ∖ V_ω` in a uniformly random order.
pub fn extend_to_s<R: Rng + ?Sized>(
    g: &Graph,
    cs: &CliqueStructure,
    s_omega: &[usize],
    rng: &mut R,
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| !cs.in_v_omega[v]).collect();
    order.shuffle(rng);
    greedy_extend(g, s_omega, &order)
}

pub fn exact_marginals(g: &Graph) -> Result<ExactDistribution> {
    Sampler::new(g)?.exact()
}

/// Per-trial generator: the seed fixes the key, the trial index the stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Raw Monte Carlo counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    pub trials: u64,
    pub in_s: Vec<u64>,
    pub in_s_omega: Vec<u64>,
    /// `Σ_trials |S ∩ Ñ(v)|`.
    pub closed_hits: Vec<u64>,
    /// Draws that were not stable or not maximal.
    pub invalid_draws: u64,
    /// Tally of the drawn `S`, filled only when requested.
    pub sets: BTreeMap<Vec<usize>, u64>,
}

impl Counts {
    fn new(n: usize) -> Self {
        Counts {
            trials: 0,
            in_s: vec![0; n],
            in_s_omega: vec![0; n],
            closed_hits: vec![0; n],
            invalid_draws: 0,
            sets: BTreeMap::new(),
        }
    }

    fn merge(mut self, other: Counts) -> Counts {
        self.trials += other.trials;
        for (a, b) in self.in_s.iter_mut().zip(other.in_s) {
            *a += b;
        }
        for (a, b) in self.in_s_omega.iter_mut().zip(other.in_s_omega) {
            *a += b;
        }
        for (a, b) in self.closed_hits.iter_mut().zip(other.closed_hits) {
            *a += b;
        }
        self.invalid_draws += other.invalid_draws;
        for (s, c) in other.sets {
            *self.sets.entry(s).or_insert(0) += c;
        }
        self
    }
}

fn is_maximal_stable(g: &Graph, s: &[usize]) -> bool {
    let mut inside = vec![false; g.n()];
    for &v in s {
        inside[v] = true;
    }
    g.is_stable(s)
        && (0..g.n()).all(|v| inside[v] || g.neighbours(v).iter().any(|&u| inside[u]))
}

/// Runs `trials` draws, trial `i` using `trial_rng(seed, i)`. Results do not
/// depend on thread scheduling. With `keep_sets` the drawn `S` are tallied.
pub fn run_trials(sampler: &Sampler, trials: u64, seed: u64, keep_sets: bool) -> Result<Counts> {
    let g = sampler.graph();
    let n = g.n();
    (0..trials)
        .into_par_iter()
        .try_fold(
            || Counts::new(n),
            |mut acc, i| {
                let mut rng = trial_rng(seed, i);
                let d = sampler.sample(&mut rng)?;
                acc.trials += 1;
                for &v in &d.s {
                    acc.in_s[v] += 1;
                }
                for &v in &d.s_omega {
                    acc.in_s_omega[v] += 1;
                }
                let mut inside = vec![false; n];
                for &v in &d.s {
                    inside[v] = true;
                }
                for v in 0..n {
                    acc.closed_hits[v] += u64::from(inside[v])
                        + g.neighbours(v).iter().filter(|&&u| inside[u]).count() as u64;
                }
                if !is_maximal_stable(g, &d.s) || !d.s_omega.iter().all(|v| inside[*v]) {
                    acc.invalid_draws += 1;
                }
                if keep_sets {
                    *acc.sets.entry(d.s).or_insert(0) += 1;
                }
                Ok(acc)
            },
        )
        .try_reduce(|| Counts::new(n), |a, b| Ok(a.merge(b)))
}

/// Vertex class used in reports.
pub fn vertex_class(cs: &CliqueStructure, v: usize) -> String {
    if cs.in_v_omega_prime[v] {
        "V'_omega".into()
    } else if cs.in_v_omega[v] {
        "V_omega".into()
    } else {
        format!("V_{}", cs.omega_v[v])
    }
}

/// One statistical assertion `empirical ≥ lower − band` (or a two-sided
/// `|empirical − target| ≤ band` when `two_sided`).
#[derive(Clone, Debug)]
pub struct Check {
    pub vertex: usize,
    pub class: String,
    pub quantity: &'static str,
    pub empirical: f64,
    pub lower_bound: f64,
    pub band: f64,
    pub two_sided: bool,
}

impl Check {
    pub fn margin(&self) -> f64 {
        self.empirical - self.lower_bound
    }

    pub fn pass(&self) -> bool {
        if self.two_sided {
            self.margin().abs() <= self.band
        } else {
            self.margin() >= -self.band
        }
    }
}

#[derive(Clone, Debug)]
pub struct Estimate {
    pub seed: u64,
    pub counts: Counts,
    pub checks: Vec<Check>,
}

pub const ESTIMATE_HEADER: &str = "vertex,class,quantity,empirical,lower_bound,margin,band,pass";

impl Estimate {
    pub fn pass(&self) -> bool {
        self.counts.invalid_draws == 0 && self.checks.iter().all(Check::pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# trials={} seed={} hoeffding_delta={HOEFFDING_DELTA} invalid_draws={}\n{ESTIMATE_HEADER}\n",
            self.counts.trials, self.seed, self.counts.invalid_draws
        );
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6},{:.6},{:.6},{}\n",
                c.vertex,
                c.class,
                c.quantity,
                c.empirical,
                c.lower_bound,
                c.margin(),
                c.band,
                c.pass()
            ));
        }
        out
    }
}

/// Seeded Monte Carlo estimate on an eligible graph with the per-vertex
/// lower bounds:
/// `Pr(v ∈ S) ≥ μ` for all `v`; `Pr(v ∈ S) ≥ p(Δ, d_ω(v))` outside `V_ω`;
/// `Pr(v ∈ S) ≥ μ_{Δ+1−k}` on `V_k` for `4 ≤ k ≤ ω−1`;
/// `E|S ∩ Ñ(v)| ≥ 1 + 2μ` on `V'_ω`; and `Pr(v ∈ S_ω) = 1/ω` on `V_ω`
/// (two-sided).
pub fn estimate(g: &Graph, trials: u64, seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let sampler = Sampler::new(g)?;
    let cs = CliqueStructure::new(g);
    let counts = run_trials(&sampler, trials, seed, false)?;
    let delta = cs.delta;
    let mv = mu_values(delta)?;
    let mu = to_f64(&mv.mu);
    let band = hoeffding_band(trials, HOEFFDING_DELTA, 1.0);
    let band_closed = hoeffding_band(trials, HOEFFDING_DELTA, (delta + 1) as f64);
    let nt = trials as f64;
    let mut checks = Vec::new();
    for v in 0..g.n() {
        let class = vertex_class(&cs, v);
        let pr = counts.in_s[v] as f64 / nt;
        let mk = |quantity, empirical, lower_bound, band, two_sided| Check {
            vertex: v,
            class: class.clone(),
            quantity,
            empirical,
            lower_bound,
            band,
            two_sided,
        };
        checks.push(mk("pr_s_vs_mu", pr, mu, band, false));
        if cs.in_v_omega[v] {
            let pro = counts.in_s_omega[v] as f64 / nt;
            checks.push(mk("pr_s_omega", pro, 1.0 / cs.omega as f64, band, true));
        } else {
            let p = to_f64(&p_value(delta, cs.d_omega[v])?);
            checks.push(mk("pr_s_vs_p", pr, p, band, false));
            let k = cs.omega_v[v];
            if (4..cs.omega).contains(&k) {
                let m = to_f64(&mv.mu_k[delta + 1 - k]);
                checks.push(mk("pr_s_vs_mu_k", pr, m, band, false));
            }
        }
        if cs.in_v_omega_prime[v] {
            let e = counts.closed_hits[v] as f64 / nt;
            checks.push(mk("closed_expectation", e, 1.0 + 2.0 * mu, band_closed, false));
        }
    }
    Ok(Estimate {
        seed,
        counts,
        checks,
    })
}

/// Exact checks of the sampler's defining identities on a small eligible graph.
#[derive(Clone, Debug)]
pub struct ExactReport {
    pub dist: ExactDistribution,
    /// One line per failed identity.
    pub failures: Vec<String>,
}

impl ExactReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `Pr(v ∈ S_ω) = 1/ω` on `V_ω`; for `v ∉ V_ω`,
/// `Pr(N_ω(v) ∩ S_ω = ∅) ≥ Σ ¼ Pr(Bin(d_ω, 4/ω) ≤ i)` and
/// `Pr(v ∈ S) ≥ Pr(N_ω(v) ∩ S_ω = ∅)/(d(v) − d_ω(v) + 1) ≥ p(Δ, d_ω)·(Δ−d_ω+1)/(d(v)−d_ω+1)`;
/// `Pr(v ∈ S) ≥ μ` everywhere and `E|S ∩ Ñ(v)| ≥ 1 + 2μ` on `V'_ω`.
pub fn verify_exact(g: &Graph) -> Result<ExactReport> {
    let cs = require_eligible(g)?;
    let dist = Sampler::with_blocks(g, cs.max_cliques.clone())?.exact()?;
    let delta = cs.delta;
    let mv = mu_values(delta)?;
    let one_over_omega = frac(1, cs.omega as i64);
    let mut failures = Vec::new();
    let total: Q = dist.s.iter().map(|(_, p)| p).sum();
    if !total.is_one() {
        failures.push(format!("distribution of S sums to {total}"));
    }
    for v in 0..g.n() {
        if dist.pr_s[v] < mv.mu {
            failures.push(format!("vertex {v}: Pr(v in S) = {} < mu", dist.pr_s[v]));
        }
        if cs.in_v_omega[v] {
            if dist.pr_s_omega[v] != one_over_omega {
                failures.push(format!(
                    "vertex {v}: Pr(v in S_omega) = {} != 1/{}",
                    dist.pr_s_omega[v], cs.omega
                ));
            }
        } else {
            let d = cs.d_omega[v];
            let clear = dist.pr_clear[v].clone().expect("outside vertex");
            let rhs2 = clear_probability(delta, d);
            if clear < rhs2 {
                failures.push(format!("vertex {v}: clear probability {clear} < {rhs2}"));
            }
            let den = Q::from_integer((g.degree(v) - d + 1).into());
            let mid = &clear / &den;
            let rhs3 = clear_probability_pmf_form(delta, d) / &den;
            if dist.pr_s[v] < mid || mid < rhs3 {
                failures.push(format!(
                    "vertex {v}: Pr(v in S) = {} vs {mid} vs {rhs3}",
                    dist.pr_s[v]
                ));
            }
        }
        if cs.in_v_omega_prime[v] {
            let need = Q::one() + Q::from_integer(2.into()) * &mv.mu;
            if dist.expected_closed[v] < need {
                failures.push(format!(
                    "vertex {v}: E|S ∩ N[v]| = {} < {need}",
                    dist.expected_closed[v]
                ));
            }
        }
    }
    Ok(ExactReport { dist, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;
    use crate::structure::two_block_instance;

    #[test]
    fn pool_is_exact_quarter() {
        let g = two_block_instance();
        let s = Sampler::new(&g).unwrap();
        let tilde = vec![0, 1, 2, 3, 5, 6, 7, 8];
        let pool = s.pool(&tilde).unwrap();
        for &v in &tilde {
            let c: u64 = pool.columns.iter().filter(|(c, _)| c.contains(&v)).map(|(_, k)| k).sum();
            assert_eq!(4 * c, pool.size);
        }
        for (c, _) in &pool.columns {
            assert!(g.is_stable(c));
        }
    }

    #[test]
    fn single_block_marginals() {
        let g = complete_graph(5);
        let s = Sampler::with_blocks(&g, vec![(0..5).collect()]).unwrap();
        let d = s.exact().unwrap();
        for v in 0..5 {
            assert_eq!(d.pr_s_omega[v], frac(1, 5));
            assert_eq!(d.pr_tilde[v], frac(4, 5));
        }
    }

    #[test]
    fn outside_edge_splits_half() {
        // K_4 block with an outside edge 4-5 and no edges to the block
        let g = complete_graph(4).disjoint_union(&complete_graph(2));
        let s = Sampler::with_blocks(&g, vec![vec![0, 1, 2, 3]]).unwrap();
        let d = s.exact().unwrap();
        assert_eq!(d.pr_s[4], frac(1, 2));
        assert_eq!(d.pr_s[5], frac(1, 2));
    }

    #[test]
    fn isolated_outside_vertex_always_in() {
        let g = complete_graph(4).disjoint_union(&Graph::empty(1));
        let s = Sampler::with_blocks(&g, vec![vec![0, 1, 2, 3]]).unwrap();
        assert!(s.exact().unwrap().pr_s[4].is_one());
    }

    #[test]
    fn greedy_distribution_matches_permutations() {
        // path 0-1-2-3 plus isolated 4
        let closed = [0b00011u32, 0b00111, 0b01110, 0b01100, 0b10000];
        let mut memo = HashMap::new();
        let d = greedy_distribution(0b11111, &closed, &mut memo);
        let mut expect: BTreeMap<u32, Q> = BTreeMap::new();
        let perms = permutations(5);
        for p in &perms {
            let mut chosen = 0u32;
            let mut blocked = 0u32;
            for &i in p {
                if blocked >> i & 1 == 0 {
                    chosen |= 1 << i;
                    blocked |= closed[i];
                }
            }
            *expect.entry(chosen).or_insert_with(Q::zero) += frac(1, perms.len() as i64);
        }
        assert_eq!(d.as_slice(), expect.into_iter().collect::<Vec<_>>().as_slice());
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn draws_are_maximal_and_reproducible() {
        let g = two_block_instance();
        let s = Sampler::new(&g).unwrap();
        let a = run_trials(&s, 2000, 7, true).unwrap();
        let b = run_trials(&s, 2000, 7, true).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.invalid_draws, 0);
        let c = run_trials(&s, 2000, 8, true).unwrap();
        assert_ne!(a.in_s, c.in_s);
    }

    #[test]
    fn exact_identities_on_two_blocks() {
        let r = verify_exact(&two_block_instance()).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn rejects_ineligible() {
        assert!(matches!(Sampler::new(&complete_graph(6)), Err(Error::Eligibility(_))));
    }
}

//! Exact maximum-weight stable set by branch and bound.
//!
//! Branches on the heaviest remaining candidate and prunes with the weight of
//! a greedy clique cover of the candidates (each clique contributes its
//! heaviest member).

use num::bigint::BigInt;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{lcm_denominators, Q};

/// Returns a maximum-weight stable set (sorted) and its weight. Vertices of
/// weight zero are never included.
pub fn max_weight_stable_set(g: &Graph, weights: &[Q]) -> Result<(Vec<usize>, Q)> {
    if weights.len() != g.n() {
        return Err(Error::InvalidParameter("weight vector length".into()));
    }
    if let Some((v, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
        return Err(Error::NegativeWeight {
            vertex: v,
            weight: w.to_string(),
        });
    }
    let scale = Q::from_integer(lcm_denominators(weights));
    let iw: Vec<BigInt> = weights.iter().map(|w| (w * &scale).to_integer()).collect();
    let mut cand: Vec<usize> = (0..g.n()).filter(|&v| iw[v].is_positive()).collect();
    // heaviest first, ties by vertex id
    cand.sort_by(|&a, &b| iw[b].cmp(&iw[a]).then(a.cmp(&b)));
    let mut search = Search {
        g,
        w: &iw,
        best: Vec::new(),
        best_w: BigInt::zero(),
        current: Vec::new(),
    };
    search.run(&cand, BigInt::zero());
    let mut best = search.best;
    best.sort_unstable();
    let value = Q::new(search.best_w, scale.to_integer());
    Ok((best, value))
}

struct Search<'a> {
    g: &'a Graph,
    w: &'a [BigInt],
    best: Vec<usize>,
    best_w: BigInt,
    current: Vec<usize>,
}

impl Search<'_> {
    /// `cand` is sorted heaviest first.
    fn run(&mut self, cand: &[usize], cur_w: BigInt) {
        if cand.is_empty() {
            if cur_w > self.best_w {
                self.best_w = cur_w;
                self.best = self.current.clone();
            }
            return;
        }
        if &cur_w + self.cover_bound(cand) <= self.best_w {
            return;
        }
        let v = cand[0];
        let rest = &cand[1..];
        let with: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|&u| !self.g.has_edge(u, v))
            .collect();
        self.current.push(v);
        self.run(&with, &cur_w + &self.w[v]);
        self.current.pop();
        self.run(rest, cur_w);
    }

    fn cover_bound(&self, cand: &[usize]) -> BigInt {
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        let mut bound = BigInt::zero();
        for &v in cand {
            match cliques
                .iter_mut()
                .find(|c| c.iter().all(|&u| self.g.has_edge(u, v)))
            {
                Some(c) => c.push(v),
                None => {
                    bound += &self.w[v];
                    cliques.push(vec![v]);
                }
            }
        }
        bound
    }
}

//! Extending a partial fractional colouring to an uncoloured vertex set
//! under Hall's condition, via bipartite matching over the colour pieces.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::interval::{alpha, IntervalColouring, IntervalSet};
use crate::rational::{lcm_denominators, Q};

/// Largest `|X|` for which Hall's condition is checked by subset enumeration.
pub const MAX_HALL_SET: usize = 20;
/// Largest number of unit colour pieces `c · k` the matching is built over.
pub const MAX_PIECES: usize = 200_000;

/// Maximum bipartite matching by repeated augmenting paths.
///
/// `adj[a]` lists the right vertices adjacent to left vertex `a`. Returns
/// `mate[a]` for each left vertex.
pub fn max_bipartite_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let mut mate_left = vec![None; adj.len()];
    let mut mate_right: Vec<Option<usize>> = vec![None; right];
    for a in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(a, adj, &mut seen, &mut mate_left, &mut mate_right);
    }
    mate_left
}

fn augment(
    a: usize,
    adj: &[Vec<usize>],
    seen: &mut [bool],
    mate_left: &mut [Option<usize>],
    mate_right: &mut [Option<usize>],
) -> bool {
    // iterative DFS over alternating paths
    let mut stack: Vec<(usize, usize)> = vec![(a, 0)];
    let mut path: Vec<usize> = Vec::new();
    while let Some(&mut (u, ref mut next)) = stack.last_mut() {
        if *next >= adj[u].len() {
            stack.pop();
            path.pop();
            continue;
        }
        let b = adj[u][*next];
        *next += 1;
        if seen[b] {
            continue;
        }
        seen[b] = true;
        path.push(b);
        match mate_right[b] {
            None => {
                // flip the path
                let lefts: Vec<usize> = stack.iter().map(|&(l, _)| l).collect();
                for (l, r) in lefts.into_iter().zip(path.iter().copied()) {
                    mate_left[l] = Some(r);
                    mate_right[r] = Some(l);
                }
                return true;
            }
            Some(other) => stack.push((other, 0)),
        }
    }
    false
}

/// Uncolours `xs`, checks Hall's condition
/// `|∪_{v∈X'} α(v)| ≥ Σ_{v∈X'} w(v)` for every `X' ⊆ X`, and extends the
/// colouring so that each `v ∈ X` receives colour measure exactly `w(v)`.
/// Coverage of every vertex outside `X` is unchanged.
pub fn hall_extend(
    g: &Graph,
    kc: &IntervalColouring,
    xs: &[usize],
    w: &[Q],
) -> Result<IntervalColouring> {
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if xs.len() > MAX_HALL_SET {
        return Err(Error::SizeLimit(format!(
            "|X| = {} exceeds {MAX_HALL_SET}",
            xs.len()
        )));
    }
    if w.len() != g.n() {
        return Err(Error::InvalidParameter("weight vector length".into()));
    }
    for &v in &xs {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
        if w[v] < Q::zero() {
            return Err(Error::NegativeWeight {
                vertex: v,
                weight: w[v].to_string(),
            });
        }
    }
    let base = kc.uncolour(&xs);
    let avail: Vec<IntervalSet> = xs.iter().map(|&v| alpha(g, &base, v)).collect();
    check_hall(&xs, &avail, w)?;

    let c = lcm_denominators(
        std::iter::once(&base.k)
            .chain(xs.iter().map(|&v| &w[v]))
            .chain(
                base.assignment()
                    .iter()
                    .flat_map(|(_, s)| s.intervals().iter().flat_map(|(a, b)| [a, b])),
            ),
    );
    let cq = Q::from_integer(c.clone());
    let pieces = (&base.k * &cq)
        .to_integer()
        .to_usize()
        .filter(|&p| p <= MAX_PIECES)
        .ok_or_else(|| Error::SizeLimit(format!("c·k pieces with c = {c}")))?;
    let to_index = |x: &Q| -> usize { (x * &cq).to_integer().to_usize().expect("bounded") };

    // stable set occupying each unit piece
    let mut piece_set: Vec<Vec<usize>> = vec![Vec::new(); pieces];
    for (s, colours) in base.assignment() {
        for (lo, hi) in colours.intervals() {
            for slot in &mut piece_set[to_index(lo)..to_index(hi)] {
                *slot = s.clone();
            }
        }
    }

    let mut left_owner = Vec::new();
    let mut adj = Vec::new();
    for &v in &xs {
        let copies = (&w[v] * &cq).to_integer().to_usize().expect("bounded by pieces");
        let ok: Vec<usize> = (0..pieces)
            .filter(|&j| piece_set[j].iter().all(|&u| !g.has_edge(u, v)))
            .collect();
        for _ in 0..copies {
            left_owner.push(v);
            adj.push(ok.clone());
        }
    }
    let mate = max_bipartite_matching(&adj, pieces);
    if mate.iter().any(Option::is_none) {
        return Err(Error::HallViolation {
            witness: xs.clone(),
            available: "matching".into(),
            demand: "unsaturated".into(),
        });
    }
    for (a, m) in mate.iter().enumerate() {
        let j = m.expect("saturated");
        let s = &mut piece_set[j];
        let at = s.binary_search(&left_owner[a]).unwrap_err();
        s.insert(at, left_owner[a]);
    }

    let mut grouped: BTreeMap<Vec<usize>, Vec<(Q, Q)>> = BTreeMap::new();
    for (j, s) in piece_set.into_iter().enumerate() {
        if s.is_empty() {
            continue;
        }
        let lo = Q::new(BigInt::from(j), c.clone());
        let hi = Q::new(BigInt::from(j + 1), c.clone());
        grouped.entry(s).or_default().push((lo, hi));
    }
    let mut out = IntervalColouring::new(base.k.clone());
    for (s, raw) in grouped {
        out.assign(s, IntervalSet::from_intervals(raw))?;
    }
    Ok(out)
}

fn check_hall(xs: &[usize], avail: &[IntervalSet], w: &[Q]) -> Result<()> {
    let m = xs.len();
    let mut masks: Vec<u32> = (1u32..1 << m).collect();
    masks.sort_by_key(|s| (s.count_ones(), *s));
    for mask in masks {
        let members: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let union = members
            .iter()
            .fold(IntervalSet::empty(), |acc, &i| acc.union(&avail[i]));
        let demand = members.iter().fold(Q::zero(), |acc, &i| acc + &w[xs[i]]);
        let have = union.measure();
        if have < demand {
            return Err(Error::HallViolation {
                witness: members.iter().map(|&i| xs[i]).collect(),
                available: have.to_string(),
                demand: demand.to_string(),
            });
        }
    }
    Ok(())
}

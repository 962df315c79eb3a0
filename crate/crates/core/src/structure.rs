//! Detectors for the clique configurations a minimal counterexample cannot
//! contain, and the eligibility check gating the sampler and pipeline.
//!
//! Every detector is exhaustive and returns the lexicographically least
//! witness, so results are reproducible.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::cliques::CliqueStructure;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Two maximum cliques that share a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectingCliques {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub shared: Vec<usize>,
}

/// A vertex outside a maximum clique with at least two neighbours in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalNeighbours {
    pub vertex: usize,
    pub clique: Vec<usize>,
    pub neighbours: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bump {
    pub clique: Vec<usize>,
    pub y1: usize,
    pub y2: usize,
    pub y3: usize,
    pub v1: usize,
    pub v2: usize,
}

/// Pairs of maximum cliques in index order; the first intersecting pair wins.
pub fn check_disjoint_max_cliques(cs: &CliqueStructure) -> Option<IntersectingCliques> {
    let mc = &cs.max_cliques;
    for i in 0..mc.len() {
        for j in i + 1..mc.len() {
            let shared: Vec<usize> = mc[i]
                .iter()
                .copied()
                .filter(|v| mc[j].binary_search(v).is_ok())
                .collect();
            if !shared.is_empty() {
                return Some(IntersectingCliques {
                    first: mc[i].clone(),
                    second: mc[j].clone(),
                    shared,
                });
            }
        }
    }
    None
}

pub fn check_external_neighbours(g: &Graph, cs: &CliqueStructure) -> Option<ExternalNeighbours> {
    for c in &cs.max_cliques {
        for v in 0..g.n() {
            if c.binary_search(&v).is_ok() {
                continue;
            }
            let nb = clique_neighbours(g, v, c);
            if nb.len() >= 2 {
                return Some(ExternalNeighbours {
                    vertex: v,
                    clique: c.clone(),
                    neighbours: nb,
                });
            }
        }
    }
    None
}

fn clique_neighbours(g: &Graph, v: usize, c: &[usize]) -> Vec<usize> {
    c.iter().copied().filter(|&u| g.has_edge(u, v)).collect()
}

/// A maximum clique `C`, adjacent `v1, v2` outside it and `y1, y2, y3 ∈ C`
/// with `N(v1) ∩ Y = {y1, y2}` and `N(v2) ∩ Y = {y2, y3}`.
///
/// Least by `(C, y1, y2, y3, v1, v2)`.
pub fn find_bump(g: &Graph, cs: &CliqueStructure) -> Option<Bump> {
    for c in &cs.max_cliques {
        let mut best: Option<(usize, usize, usize, usize, usize)> = None;
        for v1 in 0..g.n() {
            if c.binary_search(&v1).is_ok() {
                continue;
            }
            let a1 = clique_neighbours(g, v1, c);
            if a1.len() < 2 {
                continue;
            }
            for &v2 in g.neighbours(v1) {
                if c.binary_search(&v2).is_ok() {
                    continue;
                }
                let a2 = clique_neighbours(g, v2, c);
                let y1 = a1.iter().find(|y| !a2.contains(y));
                let y2 = a1.iter().find(|y| a2.contains(y));
                let y3 = a2.iter().find(|y| !a1.contains(y));
                if let (Some(&y1), Some(&y2), Some(&y3)) = (y1, y2, y3) {
                    let t = (y1, y2, y3, v1, v2);
                    if best.is_none_or(|b| t < b) {
                        best = Some(t);
                    }
                }
            }
        }
        if let Some((y1, y2, y3, v1, v2)) = best {
            return Some(Bump {
                clique: c.clone(),
                y1,
                y2,
                y3,
                v1,
                v2,
            });
        }
    }
    None
}

/// Complement patterns of the near-cliques: the missing edges inside the set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NearCliquePattern {
    /// Two disjoint missing edges.
    Matching2,
    /// A missing edge and a disjoint missing two-edge path.
    P2P3,
    /// Two disjoint missing two-edge paths.
    TwoP3,
    /// A missing three-edge path.
    P4,
}

pub const ALL_PATTERNS: [NearCliquePattern; 4] = [
    NearCliquePattern::Matching2,
    NearCliquePattern::P2P3,
    NearCliquePattern::TwoP3,
    NearCliquePattern::P4,
];

impl NearCliquePattern {
    /// Edge counts of the nontrivial complement components, sorted; each
    /// component is a path.
    pub fn path_lengths(self) -> &'static [usize] {
        match self {
            NearCliquePattern::Matching2 => &[1, 1],
            NearCliquePattern::P2P3 => &[1, 2],
            NearCliquePattern::TwoP3 => &[2, 2],
            NearCliquePattern::P4 => &[3],
        }
    }

    /// Smallest `Δ` for which the configuration is excluded.
    pub fn min_delta(self) -> usize {
        match self {
            NearCliquePattern::Matching2 => 5,
            NearCliquePattern::P2P3 => 6,
            NearCliquePattern::TwoP3 | NearCliquePattern::P4 => 7,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            NearCliquePattern::Matching2 => "matching2",
            NearCliquePattern::P2P3 => "p2+p3",
            NearCliquePattern::TwoP3 => "2xp3",
            NearCliquePattern::P4 => "p4",
        }
    }

    fn vertices(self) -> usize {
        self.path_lengths().iter().map(|e| e + 1).sum()
    }
}

impl fmt::Display for NearCliquePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for NearCliquePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "matching2" => Ok(NearCliquePattern::Matching2),
            "p2+p3" | "p2p3" => Ok(NearCliquePattern::P2P3),
            "2xp3" | "2×p3" => Ok(NearCliquePattern::TwoP3),
            "p4" => Ok(NearCliquePattern::P4),
            other => Err(Error::InvalidParameter(format!(
                "unsupported near-clique pattern '{other}'"
            ))),
        }
    }
}

/// Whether the complement of `g[set]` is exactly `pattern` plus isolated vertices.
pub fn matches_pattern(g: &Graph, set: &[usize], pattern: NearCliquePattern) -> bool {
    let m = set.len();
    let mut deg = vec![0usize; m];
    let mut missing = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if !g.has_edge(set[i], set[j]) {
                deg[i] += 1;
                deg[j] += 1;
                missing.push((i, j));
            }
        }
    }
    let want = pattern.path_lengths();
    if missing.len() != want.iter().sum::<usize>() || deg.iter().any(|&d| d > 2) {
        return false;
    }
    // components by union-find over the missing edges
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(i, j) in &missing {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        parent[a] = b;
    }
    let mut edges = vec![0usize; m];
    let mut verts = vec![0usize; m];
    for &(i, _) in &missing {
        let r = find(&mut parent, i);
        edges[r] += 1;
    }
    for i in 0..m {
        if deg[i] > 0 {
            let r = find(&mut parent, i);
            verts[r] += 1;
        }
    }
    let mut lengths = Vec::new();
    for r in 0..m {
        if edges[r] > 0 {
            // max degree 2 and a tree: a path
            if verts[r] != edges[r] + 1 {
                return false;
            }
            lengths.push(edges[r]);
        }
    }
    lengths.sort_unstable();
    lengths == want
}

/// A `delta`-vertex set whose induced complement is exactly `pattern`;
/// lexicographically least.
///
/// Every pattern has a two-vertex cover of its missing edges, so such a set
/// is a `(delta − 2)`-clique plus two vertices. Candidate cores are drawn
/// from the maximal cliques of size at least `delta − 2`, which keeps the
/// search exhaustive.
pub fn find_near_clique(g: &Graph, delta: usize, pattern: NearCliquePattern) -> Option<Vec<usize>> {
    if delta < pattern.vertices() || delta > g.n() {
        return None;
    }
    let core = delta - 2;
    let cs = CliqueStructure::new(g);
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut seen_cores: BTreeSet<Vec<usize>> = BTreeSet::new();
    for m in cs.maximal_cliques.iter().filter(|m| m.len() >= core) {
        for k in subsets(m, core) {
            if !seen_cores.insert(k.clone()) {
                continue;
            }
            // an extra vertex misses at most two core vertices
            let cand: Vec<usize> = (0..g.n())
                .filter(|v| k.binary_search(v).is_err())
                .filter(|&v| k.iter().filter(|&&u| !g.has_edge(u, v)).count() <= 2)
                .collect();
            for (i, &a) in cand.iter().enumerate() {
                for &b in &cand[i + 1..] {
                    let mut x = k.clone();
                    x.push(a);
                    x.push(b);
                    x.sort_unstable();
                    if matches_pattern(g, &x, pattern) {
                        found.insert(x);
                    }
                }
            }
        }
    }
    found.into_iter().next()
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct EligibilityReport {
    pub delta: usize,
    pub omega: usize,
    pub delta_ok: bool,
    pub omega_ok: bool,
    pub intersecting: Option<IntersectingCliques>,
    pub external: Option<ExternalNeighbours>,
    pub pass: bool,
}

impl EligibilityReport {
    /// One `key: value` line per check.
    pub fn lines(&self) -> Vec<String> {
        let verdict = |ok: bool| if ok { "pass" } else { "fail" };
        let mut out = vec![
            format!("delta: {} ({})", self.delta, verdict(self.delta_ok)),
            format!(
                "omega: {} ({}, need {})",
                self.omega,
                verdict(self.omega_ok),
                self.delta.saturating_sub(1)
            ),
        ];
        match &self.intersecting {
            None => out.push("disjoint_max_cliques: pass".into()),
            Some(w) => out.push(format!(
                "disjoint_max_cliques: fail {:?} {:?} share {:?}",
                w.first, w.second, w.shared
            )),
        }
        match &self.external {
            None => out.push("external_neighbours: pass".into()),
            Some(w) => out.push(format!(
                "external_neighbours: fail vertex {} has neighbours {:?} in {:?}",
                w.vertex, w.neighbours, w.clique
            )),
        }
        out.push(format!("eligible: {}", verdict(self.pass)));
        out
    }
}

/// `Δ ≥ 6`, `ω = Δ − 1`, maximum cliques pairwise disjoint, and no vertex
/// outside a maximum clique with two neighbours in it.
pub fn pipeline_eligibility(g: &Graph) -> EligibilityReport {
    let cs = CliqueStructure::new(g);
    let delta = cs.delta;
    let omega = cs.omega;
    let delta_ok = delta >= 6;
    let omega_ok = delta >= 1 && omega == delta - 1;
    let intersecting = check_disjoint_max_cliques(&cs);
    let external = check_external_neighbours(g, &cs);
    let pass = delta_ok && omega_ok && intersecting.is_none() && external.is_none();
    EligibilityReport {
        delta,
        omega,
        delta_ok,
        omega_ok,
        intersecting,
        external,
        pass,
    }
}

/// `Ok(())` when eligible, otherwise an `Eligibility` error naming the first failure.
pub fn require_eligible(g: &Graph) -> Result<CliqueStructure> {
    let r = pipeline_eligibility(g);
    if !r.pass {
        let first = r
            .lines()
            .into_iter()
            .find(|l| l.contains("fail"))
            .unwrap_or_default();
        return Err(Error::Eligibility(first));
    }
    Ok(CliqueStructure::new(g))
}

/// Two disjoint `K_5` blocks `{0..4}`, `{5..9}` joined by the edges `0–5`
/// and `1–6`, plus adjacent outside vertices `10 ~ 0, 5` and `11 ~ 1, 6`.
/// `Δ = 6`, `ω = 5`, eligible.
pub fn two_block_instance() -> Graph {
    let mut g = Graph::empty(12);
    for b in [0usize, 5] {
        for i in b..b + 5 {
            for j in i + 1..b + 5 {
                g.add_edge(i, j);
            }
        }
    }
    for (u, v) in [(0, 5), (1, 6), (10, 0), (10, 5), (11, 1), (11, 6), (10, 11)] {
        g.add_edge(u, v);
    }
    g
}

/// `blocks` disjoint `K_ω` blocks (`ω = block_size`) with block `i` occupying
/// `i·ω .. (i+1)·ω`. `links` joins vertex `a` of block `i` to vertex `a` of block
/// `i+1` for `a < links`; each of `outside` extra vertices `x_j` is joined to
/// vertex `links + j` of every block, and consecutive extra vertices are
/// adjacent. The caller checks eligibility.
pub fn block_instance(blocks: usize, block_size: usize, links: usize, outside: usize) -> Graph {
    let base = blocks * block_size;
    let mut g = Graph::empty(base + outside);
    for b in 0..blocks {
        let off = b * block_size;
        for i in 0..block_size {
            for j in i + 1..block_size {
                g.add_edge(off + i, off + j);
            }
        }
    }
    for b in 0..blocks.saturating_sub(1) {
        for a in 0..links.min(block_size) {
            g.add_edge(b * block_size + a, (b + 1) * block_size + a);
        }
    }
    for j in 0..outside {
        let x = base + j;
        let a = links + j;
        if a < block_size {
            for b in 0..blocks {
                g.add_edge(x, b * block_size + a);
            }
        }
        if j > 0 {
            g.add_edge(x - 1, x);
        }
    }
    g
}

/// Four `K_5` blocks (block `b` on `5b .. 5b+5`) chained by the edges
/// `5b ~ 5(b+1)`, a `K_4` on `20..24` whose vertices each see one vertex in
/// two different blocks, and a path `24 – 25` hanging off `20`. `Δ = 6`,
/// `ω = 5`, eligible, with vertices in `V_4`.
pub fn medium_block_instance() -> Graph {
    let mut g = block_instance(4, 5, 1, 0);
    let mut h = Graph::empty(26);
    for (u, v) in g.edges() {
        h.add_edge(u, v);
    }
    g = h;
    for i in 20..24 {
        for j in i + 1..24 {
            g.add_edge(i, j);
        }
    }
    for (u, v) in [
        (20, 1),
        (20, 6),
        (21, 11),
        (21, 16),
        (22, 2),
        (22, 12),
        (23, 7),
        (23, 17),
        (24, 3),
        (24, 8),
        (25, 13),
        (25, 18),
        (24, 25),
        (24, 20),
    ] {
        g.add_edge(u, v);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle, cycle_power, strong_product};

    fn c5k2() -> Graph {
        strong_product(&cycle(5).unwrap(), &complete_graph(2))
    }

    #[test]
    fn c5k2_has_intersecting_cliques() {
        let g = c5k2();
        let w = check_disjoint_max_cliques(&CliqueStructure::new(&g)).unwrap();
        assert_eq!(w.shared.len(), 2);
        assert_eq!(w.first.len(), 4);
    }

    #[test]
    fn disjoint_blocks_pass() {
        let g = complete_graph(4).disjoint_union(&complete_graph(4));
        let cs = CliqueStructure::new(&g);
        assert!(check_disjoint_max_cliques(&cs).is_none());
        assert!(check_external_neighbours(&g, &cs).is_none());
    }

    #[test]
    fn clique_minus_edge_intersects_in_omega_minus_one() {
        let mut g = Graph::empty(8);
        for i in 0..6 {
            for j in i + 1..6 {
                if (i, j) != (0, 1) {
                    g.add_edge(i, j);
                }
            }
        }
        g.add_edge(5, 6);
        g.add_edge(6, 7);
        let cs = CliqueStructure::new(&g);
        let w = check_disjoint_max_cliques(&cs).unwrap();
        assert_eq!(w.shared.len(), cs.omega - 1);
    }

    #[test]
    fn external_vertex_with_two_neighbours() {
        let mut g = complete_graph(4).disjoint_union(&complete_graph(4));
        let mut h = Graph::empty(9);
        for (u, v) in g.edges() {
            h.add_edge(u, v);
        }
        h.add_edge(8, 0);
        h.add_edge(8, 1);
        g = h;
        let w = check_external_neighbours(&g, &CliqueStructure::new(&g)).unwrap();
        assert_eq!((w.vertex, w.neighbours), (8, vec![0, 1]));
    }

    #[test]
    fn matching_between_blocks_passes() {
        let mut g = Graph::empty(8);
        for b in [0, 4] {
            for i in b..b + 4 {
                for j in i + 1..b + 4 {
                    g.add_edge(i, j);
                }
            }
        }
        for i in 0..4 {
            g.add_edge(i, i + 4);
        }
        assert!(check_external_neighbours(&g, &CliqueStructure::new(&g)).is_none());
    }

    #[test]
    fn c5k3_has_external_witness() {
        let g = strong_product(&cycle(5).unwrap(), &complete_graph(3));
        assert!(check_external_neighbours(&g, &CliqueStructure::new(&g)).is_some());
    }

    #[test]
    fn constructed_bump_found() {
        // C = K_5 on 0..4, Y = {0, 1, 2}; v1 = 5 ~ 0, 1; v2 = 6 ~ 1, 2
        let mut g = complete_graph(5);
        let mut h = Graph::empty(7);
        for (u, v) in g.edges() {
            h.add_edge(u, v);
        }
        for (u, v) in [(5, 0), (5, 1), (6, 1), (6, 2), (5, 6)] {
            h.add_edge(u, v);
        }
        g = h;
        let b = find_bump(&g, &CliqueStructure::new(&g)).unwrap();
        assert_eq!((b.y1, b.y2, b.y3, b.v1, b.v2), (0, 1, 2, 5, 6));
    }

    #[test]
    fn no_bump_in_blocks() {
        let g = two_block_instance();
        assert!(find_bump(&g, &CliqueStructure::new(&g)).is_none());
    }

    #[test]
    fn near_clique_matching2() {
        let mut g = Graph::empty(8);
        for i in 0..6 {
            for j in i + 1..6 {
                if (i, j) != (0, 1) && (i, j) != (2, 3) {
                    g.add_edge(i, j);
                }
            }
        }
        g.add_edge(5, 6);
        g.add_edge(6, 7);
        assert_eq!(
            find_near_clique(&g, 6, NearCliquePattern::Matching2),
            Some(vec![0, 1, 2, 3, 4, 5])
        );
        assert_eq!(find_near_clique(&g, 6, NearCliquePattern::P4), None);
    }

    #[test]
    fn near_clique_p2p3() {
        let mut g = complete_graph(7);
        let mut h = Graph::empty(7);
        for (u, v) in g.edges() {
            if ![(0, 1), (1, 2), (3, 4)].contains(&(u, v)) {
                h.add_edge(u, v);
            }
        }
        g = h;
        assert_eq!(
            find_near_clique(&g, 7, NearCliquePattern::P2P3),
            Some((0..7).collect())
        );
    }

    #[test]
    fn disjoint_cliques_have_no_near_cliques() {
        for d in 5..8 {
            let g = complete_graph(d).disjoint_union(&complete_graph(d));
            for p in ALL_PATTERNS {
                assert_eq!(find_near_clique(&g, d, p), None, "{p} at {d}");
            }
        }
    }

    #[test]
    fn pattern_parse() {
        for p in ALL_PATTERNS {
            assert_eq!(p.id().parse::<NearCliquePattern>().unwrap(), p);
        }
        assert!("k4".parse::<NearCliquePattern>().is_err());
    }

    #[test]
    fn eligibility_examples() {
        assert!(pipeline_eligibility(&two_block_instance()).pass);
        let r = pipeline_eligibility(&c5k2());
        assert!(!r.pass && !r.delta_ok && r.intersecting.is_some());
        assert!(!pipeline_eligibility(&complete_graph(7)).pass);
        assert!(!pipeline_eligibility(&cycle_power(8, 2).unwrap()).pass);
    }

    #[test]
    fn medium_instance_eligible() {
        let g = medium_block_instance();
        let r = pipeline_eligibility(&g);
        assert!(r.pass, "{:?}", r.lines());
        let cs = CliqueStructure::new(&g);
        assert_eq!(cs.max_cliques.len(), 4);
        assert!((20..24).all(|v| cs.omega_v[v] == 4));
    }

    #[test]
    fn block_instances_eligible() {
        let g = block_instance(4, 5, 1, 2);
        let r = pipeline_eligibility(&g);
        assert!(r.pass, "{:?}", r.lines());
        assert_eq!(r.delta, 6);
    }
}

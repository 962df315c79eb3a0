//! Simple undirected graphs on vertex set `0..n`, the generators for every
//! named graph used by the toolkit, and the plain-text edge-list format.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Simple undirected graph with vertices `0..n` and sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::Parse(format!("self-loop on vertex {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(Error::Parse(format!("duplicate edge {u} {v}"))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(())
            }
        }
    }

    /// Adds `uv` if absent. Panics on a loop or an out-of-range vertex.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n() && v < self.n(), "bad edge {u} {v}");
        if !self.has_edge(u, v) {
            self.try_add_edge(u, v).expect("checked above");
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Closed neighbourhood, sorted.
    pub fn closed_neighbourhood(&self, v: usize) -> Vec<usize> {
        let mut out = self.adj[v].clone();
        let pos = out.binary_search(&v).unwrap_err();
        out.insert(pos, v);
        out
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_stable(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| {
            u < self.n() && set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v))
        })
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| {
            u < self.n() && set[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v))
        })
    }

    /// Induced subgraph on `keep` (any order, duplicates ignored). Returns the
    /// graph and the new-to-old vertex map; vertex order is preserved.
    pub fn induced(&self, keep: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let set: BTreeSet<usize> = keep.iter().copied().collect();
        if let Some(&bad) = set.iter().find(|&&v| v >= self.n()) {
            return Err(Error::VertexOutOfRange {
                vertex: bad,
                n: self.n(),
            });
        }
        let new_to_old: Vec<usize> = set.into_iter().collect();
        let mut old_to_new = vec![usize::MAX; self.n()];
        for (i, &v) in new_to_old.iter().enumerate() {
            old_to_new[v] = i;
        }
        let adj = new_to_old
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&u| (old_to_new[u] != usize::MAX).then_some(old_to_new[u]))
                    .collect()
            })
            .collect();
        Ok((Graph { adj }, new_to_old))
    }

    /// Deletes `vs` and relabels the rest compactly in increasing order.
    /// Also returns the old-to-new map (`None` for deleted vertices).
    pub fn delete_vertices(&self, vs: &[usize]) -> Result<(Graph, Vec<Option<usize>>)> {
        if let Some(&bad) = vs.iter().find(|&&v| v >= self.n()) {
            return Err(Error::VertexOutOfRange {
                vertex: bad,
                n: self.n(),
            });
        }
        let gone: BTreeSet<usize> = vs.iter().copied().collect();
        let keep: Vec<usize> = (0..self.n()).filter(|v| !gone.contains(v)).collect();
        let (h, new_to_old) = self.induced(&keep)?;
        let mut map = vec![None; self.n()];
        for (i, &v) in new_to_old.iter().enumerate() {
            map[v] = Some(i);
        }
        Ok((h, map))
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|nb| nb.iter().map(|&u| u + off).collect()),
        );
        Graph { adj }
    }

    /// Canonical edge-list text: `"n m"` then one `"u v"` line per edge, `u < v`.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let nums = parse_pair(header)?;
        let (n, m) = (nums.0, nums.1);
        let mut g = Graph::empty(n);
        let mut count = 0;
        for line in lines {
            let (u, v) = parse_pair(line)?;
            g.try_add_edge(u, v)?;
            count += 1;
        }
        if count != m {
            return Err(Error::Parse(format!(
                "header declares {m} edges but {count} were listed"
            )));
        }
        Ok(g)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("expected two integers, got '{line}'")));
    }
    let p = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Parse(format!("invalid integer '{s}'")))
    };
    Ok((p(parts[0])?, p(parts[1])?))
}

pub fn complete_graph(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    g
}

pub fn cycle(n: usize) -> Result<Graph> {
    cycle_power(n, 1)
}

/// `C_n^k`: `i ~ j` iff their circular distance is at most `k`.
pub fn cycle_power(n: usize, k: usize) -> Result<Graph> {
    if n < 3 || k < 1 || 2 * k >= n {
        return Err(Error::InvalidParameter(format!(
            "cycle power needs n >= 3 and 1 <= k < n/2, got n={n}, k={k}"
        )));
    }
    let mut g = Graph::empty(n);
    for i in 0..n {
        for s in 1..=k {
            g.add_edge(i, (i + s) % n);
        }
    }
    Ok(g)
}

/// Strong product; vertex `(u, v)` is numbered `u * h.n() + v`.
pub fn strong_product(g: &Graph, h: &Graph) -> Graph {
    let m = h.n();
    let mut p = Graph::empty(g.n() * m);
    let close_g = |a: usize, b: usize| a == b || g.has_edge(a, b);
    let close_h = |a: usize, b: usize| a == b || h.has_edge(a, b);
    for u1 in 0..g.n() {
        for v1 in 0..m {
            for u2 in 0..g.n() {
                for v2 in 0..m {
                    let (a, b) = (u1 * m + v1, u2 * m + v2);
                    if a < b && close_g(u1, u2) && close_h(v1, v2) {
                        p.add_edge(a, b);
                    }
                }
            }
        }
    }
    p
}

/// `P(n, k)`: outer cycle `0..n`, inner star polygon `n..2n`, spokes `i ~ n+i`.
pub fn generalized_petersen(n: usize, k: usize) -> Result<Graph> {
    if n < 3 || k < 1 || 2 * k >= n {
        return Err(Error::InvalidParameter(format!(
            "generalized Petersen graph needs n >= 3 and 1 <= k < n/2, got n={n}, k={k}"
        )));
    }
    let mut g = Graph::empty(2 * n);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n);
        g.add_edge(n + i, n + (i + k) % n);
        g.add_edge(i, n + i);
    }
    Ok(g)
}

/// Lexicographically first `count`-subset whose deletion leaves maximum
/// degree exactly `target_delta` and clique number at most `max_omega`.
pub fn search_deletion_set(
    g: &Graph,
    count: usize,
    target_delta: usize,
    max_omega: usize,
) -> Option<Vec<usize>> {
    let n = g.n();
    let mut subset: Vec<usize> = (0..count).collect();
    if count > n {
        return None;
    }
    loop {
        let (h, _) = g.delete_vertices(&subset).expect("in range");
        if h.max_degree() == target_delta && crate::cliques::clique_number(&h) <= max_omega {
            return Some(subset);
        }
        // next combination in lexicographic order
        let mut i = count;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if subset[i] < n - count + i {
                subset[i] += 1;
                for j in i + 1..count {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `C_5 ⊠ K_3` with two vertices removed so that `Δ = 7` and `ω = 6`.
pub fn c5_k3_minus_2v() -> Graph {
    let g = strong_product(&cycle(5).unwrap(), &complete_graph(3));
    let del = search_deletion_set(&g, 2, 7, 6).expect("deletion pair exists");
    g.delete_vertices(&del).unwrap().0
}

/// `C_5 ⊠ K_3` with four vertices removed so that `Δ = 6` and `ω = 5`.
pub fn c5_k3_minus_4v() -> Graph {
    let g = strong_product(&cycle(5).unwrap(), &complete_graph(3));
    let del = search_deletion_set(&g, 4, 6, 5).expect("deletion set exists");
    g.delete_vertices(&del).unwrap().0
}

/// Named graphs understood by the `gen` command.
pub fn named_graph(family: &str, params: &[usize]) -> Result<Graph> {
    let need = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "family '{family}' takes {k} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match family {
        "complete" => {
            need(1)?;
            Ok(complete_graph(params[0]))
        }
        "cycle" => {
            need(1)?;
            cycle(params[0])
        }
        "cycle-power" => {
            need(2)?;
            cycle_power(params[0], params[1])
        }
        "petersen" => {
            need(2)?;
            generalized_petersen(params[0], params[1])
        }
        "cycle-x-complete" => {
            need(2)?;
            Ok(strong_product(&cycle(params[0])?, &complete_graph(params[1])))
        }
        "c8-2" => {
            need(0)?;
            cycle_power(8, 2)
        }
        "c11-2" => {
            need(0)?;
            cycle_power(11, 2)
        }
        "p7-2" => {
            need(0)?;
            generalized_petersen(7, 2)
        }
        "c5xk2" => {
            need(0)?;
            Ok(strong_product(&cycle(5)?, &complete_graph(2)))
        }
        "c7xk2" => {
            need(0)?;
            Ok(strong_product(&cycle(7)?, &complete_graph(2)))
        }
        "c5xk3" => {
            need(0)?;
            Ok(strong_product(&cycle(5)?, &complete_graph(3)))
        }
        "c5xk3-2v" => {
            need(0)?;
            Ok(c5_k3_minus_2v())
        }
        "c5xk3-4v" => {
            need(0)?;
            Ok(c5_k3_minus_4v())
        }
        "two-block" => {
            need(0)?;
            Ok(crate::structure::two_block_instance())
        }
        "blocks" => {
            need(4)?;
            Ok(crate::structure::block_instance(
                params[0], params[1], params[2], params[3],
            ))
        }
        "blocks-medium" => {
            need(0)?;
            Ok(crate::structure::medium_block_instance())
        }
        other => Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
    }
}

pub const NAMED_FAMILIES: &[&str] = &[
    "complete",
    "cycle",
    "cycle-power",
    "petersen",
    "cycle-x-complete",
    "c8-2",
    "c11-2",
    "p7-2",
    "c5xk2",
    "c7xk2",
    "c5xk3",
    "c5xk3-2v",
    "c5xk3-4v",
    "two-block",
    "blocks",
    "blocks-medium",
];

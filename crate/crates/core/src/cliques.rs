//! Maximal clique enumeration and the clique-derived structure every other
//! module consumes: maximum cliques, `V_ω`, `V'_ω`, per-vertex clique levels,
//! and the Reed weight.

use num::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Q;

/// All maximal cliques, each sorted, the list sorted lexicographically.
///
/// Pivoting Bron–Kerbosch run from each vertex of a degeneracy ordering.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let order = degeneracy_order(g);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut out = Vec::new();
    for &v in &order {
        let p: Vec<usize> = g
            .neighbours(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        let x: Vec<usize> = g
            .neighbours(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] < pos[v])
            .collect();
        let mut r = vec![v];
        bron_kerbosch(g, &mut r, p, x, &mut out);
    }
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| (intersect_count(&p, g.neighbours(u)), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    let candidates: Vec<usize> = p
        .iter()
        .copied()
        .filter(|&v| !g.has_edge(pivot, v))
        .collect();
    for v in candidates {
        let nv = g.neighbours(v);
        r.push(v);
        bron_kerbosch(g, r, intersect(&p, nv), intersect(&x, nv), out);
        r.pop();
        p.retain(|&u| u != v);
        let at = x.binary_search(&v).unwrap_err();
        x.insert(at, v);
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn intersect_count(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|v| b.binary_search(v).is_ok()).count()
}

/// Smallest-last ordering; ties go to the smaller vertex id.
pub fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertices remain");
        removed[v] = true;
        order.push(v);
        for &u in g.neighbours(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    order
}

pub fn clique_number(g: &Graph) -> usize {
    maximal_cliques(g).iter().map(Vec::len).max().unwrap_or(0)
}

/// Clique-derived structure of a graph.
#[derive(Clone, Debug)]
pub struct CliqueStructure {
    /// Every maximal clique, sorted lexicographically.
    pub maximal_cliques: Vec<Vec<usize>>,
    /// The maximum cliques `B_1..B_ℓ`.
    pub max_cliques: Vec<Vec<usize>>,
    pub omega: usize,
    pub delta: usize,
    /// Size of the largest clique containing each vertex. This is also the
    /// level `k` with `v ∈ V_k`.
    pub omega_v: Vec<usize>,
    pub in_v_omega: Vec<bool>,
    pub in_v_omega_prime: Vec<bool>,
    /// `|N(v) ∩ V_ω|`.
    pub d_omega: Vec<usize>,
    /// For each vertex, indices into `maximal_cliques` of the cliques containing it.
    pub containing: Vec<Vec<usize>>,
}

impl CliqueStructure {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let maximal = maximal_cliques(g);
        let omega = maximal.iter().map(Vec::len).max().unwrap_or(0);
        let delta = g.max_degree();
        let mut omega_v = vec![0; n];
        let mut containing = vec![Vec::new(); n];
        for (i, c) in maximal.iter().enumerate() {
            for &v in c {
                omega_v[v] = omega_v[v].max(c.len());
                containing[v].push(i);
            }
        }
        let max_cliques: Vec<Vec<usize>> = maximal
            .iter()
            .filter(|c| c.len() == omega)
            .cloned()
            .collect();
        let mut in_v_omega = vec![false; n];
        for c in &max_cliques {
            for &v in c {
                in_v_omega[v] = true;
            }
        }
        let in_v_omega_prime = (0..n)
            .map(|v| in_v_omega[v] && g.degree(v) == delta)
            .collect();
        let d_omega = (0..n)
            .map(|v| g.neighbours(v).iter().filter(|&&u| in_v_omega[u]).count())
            .collect();
        CliqueStructure {
            maximal_cliques: maximal,
            max_cliques,
            omega,
            delta,
            omega_v,
            in_v_omega,
            in_v_omega_prime,
            d_omega,
            containing,
        }
    }

    pub fn v_omega(&self) -> Vec<usize> {
        mask_to_vec(&self.in_v_omega)
    }

    pub fn v_omega_prime(&self) -> Vec<usize> {
        mask_to_vec(&self.in_v_omega_prime)
    }

    pub fn level(&self, v: usize) -> usize {
        self.omega_v[v]
    }
}

fn mask_to_vec(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(v, &b)| b.then_some(v))
        .collect()
}

/// Per-vertex Reed weight `½(w(Ñ(v)) + max_{C ∋ v} w(C))` and its maximum.
pub fn reed_weight(g: &Graph, cs: &CliqueStructure, w: &[Q]) -> Result<(Vec<Q>, Q)> {
    if w.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "weight vector has length {} but graph has {} vertices",
            w.len(),
            g.n()
        )));
    }
    if let Some((v, x)) = w.iter().enumerate().find(|(_, x)| *x < &Q::zero()) {
        return Err(Error::NegativeWeight {
            vertex: v,
            weight: x.to_string(),
        });
    }
    let half = Q::new(1.into(), 2.into());
    let per: Vec<Q> = (0..g.n())
        .map(|v| {
            let wd = w[v].clone()
                + g.neighbours(v)
                    .iter()
                    .fold(Q::zero(), |acc, &u| acc + &w[u]);
            let wc = cs.containing[v]
                .iter()
                .map(|&i| {
                    cs.maximal_cliques[i]
                        .iter()
                        .fold(Q::zero(), |acc, &u| acc + &w[u])
                })
                .max()
                .unwrap_or_else(|| w[v].clone());
            (wd + wc) * &half
        })
        .collect();
    let max = per.iter().max().cloned().unwrap_or_else(Q::zero);
    Ok((per, max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle, cycle_power, strong_product};
    use crate::rational::{frac, q};

    /// ω by brute force over all vertex subsets.
    fn omega_brute(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|m| {
                let s: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
                g.is_clique(&s)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn c5_k2_structure() {
        let g = strong_product(&cycle(5).unwrap(), &complete_graph(2));
        let cs = CliqueStructure::new(&g);
        assert_eq!(cs.omega, 4);
        assert_eq!(cs.max_cliques.len(), 5);
        assert_eq!(cs.v_omega().len(), 10);
        for c in &cs.max_cliques {
            assert!(g.is_clique(c));
        }
    }

    #[test]
    fn small_structures() {
        let k5 = complete_graph(5);
        let cs = CliqueStructure::new(&k5);
        assert_eq!((cs.omega, cs.max_cliques.len()), (5, 1));
        let c5 = cycle(5).unwrap();
        let cs = CliqueStructure::new(&c5);
        assert_eq!(cs.omega, 2);
        assert_eq!(
            cs.max_cliques,
            vec![vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]
        );
        let c82 = cycle_power(8, 2).unwrap();
        assert_eq!(clique_number(&c82), 3);
    }

    #[test]
    fn omega_agrees_with_brute_force() {
        let graphs = [
            cycle_power(11, 2).unwrap(),
            strong_product(&cycle(5).unwrap(), &complete_graph(2)),
            crate::graph::generalized_petersen(5, 2).unwrap(),
            complete_graph(6),
            Graph::empty(4),
        ];
        for g in &graphs {
            assert_eq!(clique_number(g), omega_brute(g));
        }
    }

    #[test]
    fn reed_weights() {
        let ones = |n| vec![q(1); n];
        let k3 = complete_graph(3);
        let (per, max) = reed_weight(&k3, &CliqueStructure::new(&k3), &ones(3)).unwrap();
        assert!(per.iter().all(|x| *x == q(3)));
        assert_eq!(max, q(3));

        let c5 = cycle(5).unwrap();
        let (_, max) = reed_weight(&c5, &CliqueStructure::new(&c5), &ones(5)).unwrap();
        assert_eq!(max, frac(5, 2));

        let g = strong_product(&cycle(5).unwrap(), &complete_graph(2));
        let (per, max) = reed_weight(&g, &CliqueStructure::new(&g), &ones(10)).unwrap();
        assert_eq!(max, q(5));
        assert!(per.iter().all(|x| *x == q(5)));

        let mut bad = ones(3);
        bad[1] = q(-1);
        assert!(reed_weight(&k3, &CliqueStructure::new(&k3), &bad).is_err());
    }

    #[test]
    fn isolated_vertex_reed_weight() {
        let g = Graph::empty(1);
        let (per, _) = reed_weight(&g, &CliqueStructure::new(&g), &[q(2)]).unwrap();
        assert_eq!(per[0], q(2));
    }
}

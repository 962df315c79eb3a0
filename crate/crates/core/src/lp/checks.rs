//! Instance-wise checks of the Reed-type upper bounds and of the
//! clique-partition theorem, each backed by an exact LP solve.

use num::{One, Zero};

use crate::cliques::{reed_weight, CliqueStructure};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lp::colgen::{chi_f, chi_f_weighted, LpResult};
use crate::rational::{frac, Q};

#[derive(Clone, Debug)]
pub struct ReedReport {
    pub chi_f: Q,
    /// `ρ_w(G)`.
    pub reed: Q,
    /// `½(Δ + 1 + ω)`, only for unit weights.
    pub global_bound: Option<Q>,
    /// `max_v ½(d(v) + 1 + ω(v))`, only for unit weights.
    pub local_bound: Option<Q>,
    pub holds: bool,
    pub violations: Vec<String>,
    pub lp: LpResult,
}

pub fn verify_reed_bounds(g: &Graph, w: &[Q]) -> Result<ReedReport> {
    let cs = CliqueStructure::new(g);
    let (_, reed) = reed_weight(g, &cs, w)?;
    let lp = chi_f_weighted(g, w)?;
    let mut violations = Vec::new();
    if lp.value > reed {
        violations.push(format!("chi_f^w = {} > rho_w = {reed}", lp.value));
    }
    let unit = w.iter().all(|x| x.is_one());
    let (global_bound, local_bound) = if unit && g.n() > 0 {
        let half = frac(1, 2);
        let global = Q::from_integer((cs.delta + 1 + cs.omega).into()) * &half;
        let local = (0..g.n())
            .map(|v| Q::from_integer((g.degree(v) + 1 + cs.omega_v[v]).into()) * &half)
            .max()
            .unwrap_or_else(Q::zero);
        if lp.value > global {
            violations.push(format!("chi_f = {} > (Δ+1+ω)/2 = {global}", lp.value));
        }
        if lp.value > local {
            violations.push(format!("chi_f = {} > max_v (d+1+ω(v))/2 = {local}", lp.value));
        }
        (Some(global), Some(local))
    } else {
        (None, None)
    };
    Ok(ReedReport {
        chi_f: lp.value.clone(),
        reed,
        global_bound,
        local_bound,
        holds: violations.is_empty(),
        violations,
        lp,
    })
}

#[derive(Clone, Debug)]
pub struct AharoniReport {
    pub omega: usize,
    pub chi_f: Q,
    pub holds: bool,
}

/// Checks the hypotheses (the parts partition `V` into cliques of a common
/// size `ω ≥ 2k` and `Δ ≤ ω + k − 1`) and then that `χ_f = ω` exactly.
pub fn verify_aharoni(g: &Graph, partition: &[Vec<usize>], k: usize) -> Result<AharoniReport> {
    let mut seen = vec![false; g.n()];
    for part in partition {
        for &v in part {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if seen[v] {
                return Err(Error::HypothesisViolated(format!("vertex {v} lies in two parts")));
            }
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::HypothesisViolated(format!("vertex {v} is in no part")));
    }
    let omega = partition.first().map_or(0, Vec::len);
    if let Some(p) = partition.iter().find(|p| p.len() != omega) {
        return Err(Error::HypothesisViolated(format!(
            "part {p:?} has size {} but the first part has size {omega}",
            p.len()
        )));
    }
    if let Some(p) = partition.iter().find(|p| !g.is_clique(p)) {
        return Err(Error::HypothesisViolated(format!("part {p:?} is not a clique")));
    }
    if k == 0 || omega < 2 * k {
        return Err(Error::HypothesisViolated(format!(
            "clique size {omega} is below 2k = {}",
            2 * k
        )));
    }
    if g.max_degree() > omega + k - 1 {
        return Err(Error::HypothesisViolated(format!(
            "maximum degree {} exceeds ω + k − 1 = {}",
            g.max_degree(),
            omega + k - 1
        )));
    }
    let lp = chi_f(g)?;
    let holds = lp.value == Q::from_integer(omega.into());
    if !holds {
        return Err(Error::BoundViolation(format!(
            "clique-partitioned graph has chi_f = {} ≠ {omega}",
            lp.value
        )));
    }
    Ok(AharoniReport {
        omega,
        chi_f: lp.value,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle, strong_product};
    use crate::rational::q;

    #[test]
    fn reed_tight_cases() {
        let r = verify_reed_bounds(&cycle(5).unwrap(), &vec![q(1); 5]).unwrap();
        assert_eq!((r.chi_f.clone(), r.reed.clone()), (frac(5, 2), frac(5, 2)));
        assert!(r.holds);
        let g = strong_product(&cycle(5).unwrap(), &complete_graph(2));
        let r = verify_reed_bounds(&g, &vec![q(1); 10]).unwrap();
        assert_eq!((r.chi_f.clone(), r.reed.clone()), (q(5), q(5)));
        assert_eq!(r.global_bound, Some(q(5)));
        assert!(r.holds);
    }

    #[test]
    fn aharoni_disjoint_blocks() {
        let g = complete_graph(4).disjoint_union(&complete_graph(4));
        let parts = vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]];
        assert_eq!(verify_aharoni(&g, &parts, 2).unwrap().chi_f, q(4));
    }

    #[test]
    fn aharoni_block_instance_with_two_external_neighbours() {
        // three K_4 blocks; vertex i of each block is joined to vertex i of the
        // other two blocks, so every vertex has exactly two external neighbours
        let mut g = complete_graph(4)
            .disjoint_union(&complete_graph(4))
            .disjoint_union(&complete_graph(4));
        for i in 0..4 {
            g.add_edge(i, 4 + i);
            g.add_edge(4 + i, 8 + i);
            g.add_edge(i, 8 + i);
        }
        assert_eq!(g.max_degree(), 5);
        let parts = vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9, 10, 11]];
        assert_eq!(verify_aharoni(&g, &parts, 2).unwrap().chi_f, q(4));
    }

    #[test]
    fn aharoni_hypothesis_errors() {
        let g = complete_graph(4).disjoint_union(&complete_graph(4));
        assert!(matches!(
            verify_aharoni(&g, &[vec![0, 1, 2, 3]], 2),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            verify_aharoni(&g, &[vec![0, 1, 2, 3], vec![4, 5, 6, 7]], 3),
            Err(Error::HypothesisViolated(_))
        ));
        let c = cycle(6).unwrap();
        assert!(matches!(
            verify_aharoni(&c, &[vec![0, 2], vec![1, 3], vec![4, 5]], 1),
            Err(Error::HypothesisViolated(_))
        ));
    }
}

mod common;

use fraccol::bounds::{mu_values, p_value, ytilde_values};
use fraccol::certificate::Certificate;
use fraccol::cliques::CliqueStructure;
use fraccol::graph::Graph;
use fraccol::lp::chi_f_weighted;
use fraccol::pipeline::{check_conditions, check_trace, initial_colouring, Mode};
use fraccol::rational::{frac, q};
use fraccol::sampler::{trial_rng, Sampler};
use fraccol::structure::two_block_instance;
use fraccol::Q;
use num::{One, Zero};
use proptest::prelude::*;

use common::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn arb_weighted(max_n: usize) -> impl Strategy<Value = (Graph, Vec<Q>)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        prop::collection::vec(0i64..=6, n).prop_map(move |ws| {
            let w = ws.into_iter().map(|x| frac(x, 3)).collect();
            (g.clone(), w)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(g in arb_graph(9)) {
        let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn certificate_json_round_trip((g, w) in arb_weighted(8)) {
        let lp = chi_f_weighted(&g, &w).unwrap();
        let cert = Certificate::new(g.n(), w.clone(), lp.primal.clone());
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert!(back.verify(&g).ok);
        prop_assert_eq!(back.weighting.total, lp.value);
    }

    #[test]
    fn dropping_a_needed_column_is_rejected((g, w) in arb_weighted(8)) {
        let lp = chi_f_weighted(&g, &w).unwrap();
        let mut ssw = lp.primal.clone();
        if let Some(pos) = ssw.columns.iter().position(|(s, x)| {
            !x.is_zero() && s.iter().any(|&v| !w[v].is_zero())
        }) {
            ssw.columns.remove(pos);
            // removing positive weight from an optimal cover leaves a gap
            let cert = Certificate::new(g.n(), w.clone(), ssw);
            prop_assert!(!cert.verify(&g).ok);
        }
    }

    #[test]
    fn chi_f_sandwiched((g, w) in arb_weighted(8)) {
        // max clique weight ≤ χ_f^w ≤ total weight
        let lp = chi_f_weighted(&g, &w).unwrap();
        let heaviest = cliques(&g)
            .iter()
            .map(|&c| bits(c).iter().map(|&v| &w[v]).sum::<Q>())
            .max()
            .unwrap_or_else(Q::zero);
        let total: Q = w.iter().sum();
        prop_assert!(heaviest <= lp.value);
        prop_assert!(lp.value <= total);
    }

    #[test]
    fn sampler_draws_are_stable_and_maximal_outside(seed in any::<u64>(), trial in 0u64..1000) {
        let g = two_block_instance();
        let cs = CliqueStructure::new(&g);
        let sampler = Sampler::new(&g).unwrap();
        let d = sampler.sample(&mut trial_rng(seed, trial)).unwrap();
        prop_assert!(g.is_stable(&d.s));
        prop_assert!(d.s_omega.iter().all(|v| d.s.contains(v)));
        prop_assert!(d.s_omega.iter().all(|&v| cs.in_v_omega[v]));
        for v in (0..g.n()).filter(|&v| !cs.in_v_omega[v]) {
            let blocked = g.neighbours(v).iter().any(|u| d.s.contains(u));
            prop_assert!(d.s.contains(&v) || blocked);
        }
    }
}

#[test]
fn mu_prefix_minima_are_monotone() {
    for delta in 6..=40 {
        let mv = mu_values(delta).unwrap();
        assert_eq!(p_value(delta, 0).unwrap(), frac(1, delta as i64 + 1));
        assert!(mv.mu <= frac(1, delta as i64 + 1));
        for k in 1..mv.mu_k.len() {
            assert!(mv.mu_k[k] <= mv.mu_k[k - 1]);
        }
        assert_eq!(mv.mu_k[delta], mv.mu);
        let (prefix, mu, d) = mu_oracle(delta);
        assert_eq!(prefix, mv.mu_k);
        assert_eq!(mu, mv.mu);
        assert_eq!(d, mv.argmin_d);
    }
}

#[test]
fn ytilde_within_clique_bounds() {
    for delta in 6..=30 {
        let yt = ytilde_values(delta).unwrap();
        let omega = q(delta as i64 - 1);
        assert!(yt.ytilde > Q::zero());
        assert!(yt.ytilde <= omega);
    }
}

#[test]
fn initial_colouring_invariants_at_small_spends() {
    let g = two_block_instance();
    for k in [1, 3, 7, 12] {
        let y = frac(k, 10);
        let (trace, ssw) = initial_colouring(&g, &y, Mode::Exact).unwrap();
        assert!(check_trace(&g, &trace, &ssw).is_empty(), "y = {y}");
        let rep = check_conditions(&g, &y, &trace.final_w, &Q::zero()).unwrap();
        assert!(rep.ok(), "y = {y}: {:?}", rep.failures);
        assert_eq!(trace.y_total, y);
        assert!(trace.final_w.iter().all(|x| x <= &Q::one()));
    }
}

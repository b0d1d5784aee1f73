mod common;

use bottleneck_arena::budget::Budget;
use bottleneck_arena::dynamics::{best_response, is_nash};
use bottleneck_arena::equilibria::{enumerate_nash, measure_poa};
use bottleneck_arena::game::{player_cost, CostModel};
use bottleneck_arena::generators::gen_linear_counterexample;
use bottleneck_arena::graph::{all_simple_paths, min_bottleneck_path, min_weight_path};
use bottleneck_arena::optimal::min_bottleneck_routing;
use bottleneck_arena::rng::ShiftRng;
use num_bigint::BigUint;

use common::*;

#[test]
fn simple_path_enumeration_matches_oracle() {
    for f in fixtures().iter().filter(|f| f.name.ends_with("/exp_sum")) {
        let sets = f.inst.strategy_sets(&Budget::default()).unwrap();
        for (i, set) in sets.iter().enumerate() {
            let mut ours: Vec<Vec<usize>> = set.iter().map(|p| p.edges().to_vec()).collect();
            let mut theirs: Vec<Vec<usize>> = strategy_set(&f.inst, i).iter().map(|p| p.edges().to_vec()).collect();
            let sorted = ours.windows(2).all(|w| w[0] < w[1]);
            ours.sort();
            theirs.sort();
            assert_eq!(ours, theirs, "{} player {i}", f.name);
            if matches!(f.inst.players()[i].strategies, bottleneck_arena::game::Strategies::AllPaths { .. }) {
                assert!(sorted, "{} player {i}: paths not in lexicographic order", f.name);
            }
        }
    }
}

#[test]
fn unconstrained_path_searches_match_enumeration() {
    let base = fixtures();
    let mut rng = ShiftRng::new(11);
    for f in base.iter().filter(|f| f.name.starts_with("random") && f.name.ends_with("/exp_sum")) {
        let g = f.inst.graph();
        let n = g.node_count();
        for _ in 0..10 {
            let s = rng.index(n);
            let t = (s + 1 + rng.index(n - 1)) % n;
            let paths = simple_paths(&f.inst, s, t, n);
            let w: Vec<BigUint> = (0..g.edge_count()).map(|_| BigUint::from(1 + rng.below(9))).collect();
            let load: Vec<u64> = (0..g.edge_count()).map(|_| rng.below(5)).collect();
            let best_w = paths
                .iter()
                .map(|p| p.edges().iter().map(|&e| w[e].clone()).sum::<BigUint>())
                .min()
                .unwrap();
            let got = min_weight_path(g, s, t, &w).unwrap();
            assert_eq!(got.edges().iter().map(|&e| w[e].clone()).sum::<BigUint>(), best_w);
            let best_b = paths
                .iter()
                .map(|p| p.edges().iter().map(|&e| load[e]).max().unwrap())
                .min()
                .unwrap();
            let got = min_bottleneck_path(g, s, t, &load).unwrap();
            assert_eq!(got.edges().iter().map(|&e| load[e]).max().unwrap(), best_b);
            assert_eq!(
                all_simple_paths(g, s, t, n, u64::MAX).unwrap().len(),
                paths.len(),
                "{} {s}->{t}",
                f.name
            );
        }
    }
}

#[test]
fn nash_enumeration_matches_brute_force() {
    for f in fixtures() {
        let e = enumerate_nash(&f.inst, &Budget::default()).unwrap();
        assert!(!e.truncated);
        let mut ours = e.nash.clone();
        let mut theirs = brute_nash(&f.inst);
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs, "{}", f.name);
    }
}

#[test]
fn library_nash_check_matches_oracle() {
    let budget = Budget::default();
    for f in fixtures() {
        for seed in 0..5 {
            let r = f.inst.random_routing(seed, &budget).unwrap();
            assert_eq!(is_nash(&f.inst, &r).unwrap().0, oracle_is_nash(&f.inst, &r), "{} seed {seed}", f.name);
            for i in 0..r.len() {
                let q = best_response(&f.inst, &r, i).unwrap();
                assert!(f.inst.allows(i, &q));
                assert_eq!(deviation_cost(&f.inst, &r, i, &q), min_deviation(&f.inst, &r, i), "{}", f.name);
                let pc = player_cost(&f.inst, &r, i).unwrap();
                assert_eq!(pc.raw(), &deviation_cost(&f.inst, &r, i, r.path(i)));
            }
        }
    }
}

#[test]
fn optimum_matches_brute_force() {
    for f in fixtures().iter().filter(|f| f.name.ends_with("/linear_sum")) {
        let opt = min_bottleneck_routing(&f.inst, &Budget::default()).unwrap();
        assert_eq!(opt.c_star, brute_c_star(&f.inst), "{}", f.name);
        assert_eq!(bottleneck(&f.inst, &opt.witness), opt.c_star);
    }
}

#[test]
fn counterexample_poa_grows_linearly() {
    for k in 2..=5 {
        let inst = gen_linear_counterexample(k, CostModel::LinearSum).unwrap();
        let rep = measure_poa(&inst, &Budget::default()).unwrap();
        let worst = brute_nash(&inst).iter().map(|r| bottleneck(&inst, r)).max().unwrap();
        assert_eq!(rep.worst_nash_cost, Some(worst));
        assert_eq!(worst, k as u64);
    }
}

#[test]
fn fixture_corpus_is_not_empty() {
    let all = fixtures();
    assert!(all.len() >= 100, "{} fixtures", all.len());
    assert!(all.iter().any(|f| f.name.starts_with("grid-3x3")));
}

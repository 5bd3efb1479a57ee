//! Degree additivity and forest enumeration against brute force.

use itertools::Itertools;
use parafeyn::fixtures::{self, random_connected};
use parafeyn::power_counting::{
    compatible, divergence_forests, divergent_subgraphs, forest_quotients, subgraph_degree, superficial_degree,
};
use parafeyn::{EdgeSet, Graph, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graphs() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out: Vec<Graph> = fixtures::all().into_iter().map(|(_, g)| g).collect();
    for _ in 0..60 {
        let v = rng.random_range(1..=5);
        let e = rng.random_range((v - 1).max(1)..=8);
        out.push(random_connected(&mut rng, v, e, 2));
    }
    out
}

#[test]
fn degree_is_additive_over_nested_pairs() {
    let dims = [Rational::from_integer(4), Rational::from_integer(2), Rational::new(7, 2)];
    let mut pairs = 0;
    for g in graphs() {
        let cores = g.core_subgraphs();
        for (a, b) in cores.iter().tuple_combinations() {
            if !a.is_proper_subset(b) {
                continue;
            }
            let outer = g.restrict(b);
            let quotient = outer.contract(a);
            for &d in &dims {
                let lhs = subgraph_degree(&g, b, d);
                let rhs = subgraph_degree(&g, a, d) + superficial_degree(&quotient, d);
                assert_eq!(lhs, rhs);
            }
            pairs += 1;
        }
    }
    assert!(pairs > 10, "only {pairs} nested pairs");
}

#[test]
fn forests_match_power_set_filter() {
    let d = Rational::from_integer(4);
    for g in graphs() {
        let divergent: Vec<EdgeSet> = divergent_subgraphs(&g, d).into_iter().map(|s| s.edges).collect();
        if divergent.len() > 12 {
            continue;
        }
        let brute: Vec<Vec<EdgeSet>> = divergent
            .iter()
            .powerset()
            .filter(|f| f.iter().tuple_combinations().all(|(a, b)| compatible(a, b)))
            .map(|f| f.into_iter().cloned().collect())
            .collect();
        let mut found: Vec<Vec<EdgeSet>> =
            divergence_forests(&g, d, false).unwrap().iter().map(|f| f.members().to_vec()).collect();
        let mut brute: Vec<Vec<EdgeSet>> = brute
            .into_iter()
            .map(|mut f| {
                f.sort_by(|a, b| a.shortlex_cmp(b));
                f
            })
            .collect();
        found.sort();
        brute.sort();
        assert_eq!(found, brute);
    }
}

#[test]
fn pairwise_overlapping_divergents_give_singletons() {
    // the massless sunrise and fatter banana graphs
    for n in 3..=5u32 {
        let edges = (1..=n).map(|i| parafeyn::Edge { id: i, ends: [0, 1], colour: i }).collect();
        let legs = vec![parafeyn::Leg { label: 1, at: 0 }, parafeyn::Leg { label: 2, at: 1 }];
        let g = Graph::new(vec![0, 1], edges, legs).unwrap();
        let d = Rational::from_integer(4);
        let divergent = divergent_subgraphs(&g, d);
        let overlapping = divergent.iter().tuple_combinations().all(|(a, b)| !compatible(&a.edges, &b.edges));
        if overlapping {
            assert_eq!(divergence_forests(&g, d, false).unwrap().len(), 1 + divergent.len());
        }
    }
    let sunrise = fixtures::sunrise();
    assert_eq!(divergent_subgraphs(&sunrise, Rational::from_integer(4)).len(), 3);
}

#[test]
fn quotient_ranks_telescope() {
    let d = Rational::from_integer(4);
    for g in graphs() {
        if divergent_subgraphs(&g, d).len() > 12 {
            continue;
        }
        for f in divergence_forests(&g, d, false).unwrap() {
            let pieces = forest_quotients(&g, &f);
            for (gamma, piece) in f.members().iter().zip(&pieces) {
                let inner = f
                    .members()
                    .iter()
                    .filter(|eta| eta.is_proper_subset(gamma))
                    .fold(EdgeSet::new(), |acc, eta| acc.union(eta));
                assert_eq!(piece.rank() + g.subgraph_rank(&inner), g.subgraph_rank(gamma));
            }
            // along a chain the graded ranks telescope
            let chain = f.members().windows(2).all(|w| w[0].is_proper_subset(&w[1]));
            if chain && !f.is_empty() {
                let total: usize = pieces.iter().map(|p| p.rank()).sum();
                assert_eq!(total, g.subgraph_rank(f.members().last().unwrap()));
            }
        }
    }
}

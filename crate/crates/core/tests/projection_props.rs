mod common;

use common::hypergraph;
use hyperorder_core::combinatorics::{binomial, subsets};
use hyperorder_core::projection::{expand, project, project_bruteforce, BRUTE_FORCE_PAIR_BOUND};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn matches_pairwise_enumeration(hg in hypergraph(8, 10, 5), n in 2usize..=5) {
        let fast = project(&hg, n).unwrap();
        let slow = project_bruteforce(&hg, n, BRUTE_FORCE_PAIR_BOUND).unwrap();
        prop_assert_eq!(&fast, &slow);
        prop_assert_eq!(fast.edge_count(), binomial(n as u64, 2) as u64 * fast.subset_count() as u64);
    }

    #[test]
    fn weight_is_conserved(hg in hypergraph(9, 12, 6), n in 2usize..=6) {
        let pg = project(&hg, n).unwrap();
        let expected: u64 = hg.hyperedges().iter().map(|e| binomial(e.len() as u64, n as u64) as u64 * e.weight).sum();
        prop_assert_eq!(pg.total_weight(), expected);
    }

    #[test]
    fn pairwise_projection_is_the_weighted_clique_expansion(hg in hypergraph(9, 12, 6)) {
        let pg = project(&hg, 2).unwrap();
        let mut clique = std::collections::BTreeMap::<Vec<u32>, u64>::new();
        for e in hg.hyperedges() {
            for pair in subsets(&e.nodes, 2) {
                *clique.entry(pair).or_default() += e.weight;
            }
        }
        let got: Vec<(Vec<u32>, u64)> = pg.iter().map(|(s, w)| (s.to_vec(), w)).collect();
        prop_assert_eq!(got, clique.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn higher_orders_shrink_support(hg in hypergraph(9, 12, 6)) {
        let exp = expand(&hg, 5).unwrap();
        for w in exp.graphs().windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            // every active (n+1)-subset has all of its n-subsets active
            for (s, _) in hi.iter() {
                for sub in subsets(s, lo.order()) {
                    prop_assert!(lo.weight_of(&sub) > 0);
                }
            }
        }
    }

    #[test]
    fn facet_neighbourhoods_are_symmetric(hg in hypergraph(8, 10, 5), n in 2usize..=4) {
        let pg = project(&hg, n).unwrap();
        for f in pg.facets() {
            let f = f.to_vec();
            let nbrs = pg.facet_neighbors(&f).unwrap();
            prop_assert_eq!(pg.facet_degree(&f), nbrs.len());
            for g in &nbrs {
                prop_assert!(pg.facet_neighbors(g).unwrap().contains(&f));
            }
        }
    }
}

use kneser_sandpile::formulas::order_valuation;
use kneser_sandpile::{
    critical_group, critical_group_order, determinant, invariant_factors_from_profiles,
    kneser_graph, laplacian_matrix, p_elementary_divisors, predict_with_branch,
    predicted_critical_group, prime_divisors, spanning_tree_count, spectral_data, BigInt, Graph,
};
use num_traits::Zero;
use rand::{seq::SliceRandom, SeedableRng};

fn order_primes(n: u64) -> Vec<u64> {
    let mut ps: Vec<u64> = [n, n - 1, n - 3, n - 4]
        .iter()
        .flat_map(|&m| prime_divisors(m))
        .filter(|&p| order_valuation(n, p).unwrap() > 0)
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

#[test]
fn kneser_graph_is_vertex_transitive_under_relabeling() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for n in 4..=9usize {
        let g = kneser_graph(n, 2).unwrap();
        let index = |s: &[usize]| {
            g.labels()
                .iter()
                .position(|l| *l == kneser_sandpile::VertexLabel::Subset(s.to_vec()))
                .unwrap()
        };
        for _ in 0..5 {
            let mut sigma: Vec<usize> = (1..=n).collect();
            sigma.shuffle(&mut rng);
            let image = |v: usize| {
                let kneser_sandpile::VertexLabel::Subset(s) = &g.labels()[v] else {
                    unreachable!()
                };
                let mut t: Vec<usize> = s.iter().map(|&x| sigma[x - 1]).collect();
                t.sort_unstable();
                index(&t)
            };
            let relabeled = Graph::from_edges(
                g.vertex_count(),
                g.edges().map(|(a, b)| (image(a), image(b))),
            )
            .unwrap();
            assert_eq!(
                relabeled,
                Graph::from_edges(g.vertex_count(), g.edges()).unwrap()
            );
        }
    }
}

#[test]
fn laplacian_shape_invariants() {
    for n in 2..=12usize {
        let g = kneser_graph(n, 2).unwrap();
        let l = laplacian_matrix(&g);
        assert!(l.is_symmetric());
        assert!(l.row_sums().iter().all(Zero::is_zero));
        let degrees: Vec<BigInt> = g.degrees().into_iter().map(BigInt::from).collect();
        assert_eq!(l.diagonal(), degrees);
    }
}

#[test]
fn closed_forms_are_consistent_up_to_forty() {
    for n in 5..=40u64 {
        let predicted = predicted_critical_group(n).unwrap();
        let chain = predicted.normalized();
        let order = critical_group_order(n).unwrap();
        assert_eq!(chain.iter().product::<BigInt>(), order, "order, n={n}");
        assert_eq!(predicted.order(), order);
        assert!(
            chain.windows(2).all(|w| (&w[1] % &w[0]).is_zero()),
            "chain, n={n}"
        );

        let sd = spectral_data(n).unwrap();
        let profiles: Vec<_> = order_primes(n)
            .into_iter()
            .map(|p| {
                let (_, profile) = predict_with_branch(n, p).unwrap();
                assert_eq!(
                    profile.valuation_sum() as u64,
                    order_valuation(n, p).unwrap()
                );
                assert_eq!(profile.total() as u64, sd.f + sd.g);
                assert_eq!(profile.columns() as u64, sd.vertex_count());
                profile
            })
            .collect();
        assert_eq!(
            invariant_factors_from_profiles(&profiles),
            chain,
            "regrouping, n={n}"
        );
    }
}

#[test]
fn prime_beyond_three_divides_exactly_one_factor() {
    for n in 5..=200u64 {
        for p in order_primes(n).into_iter().filter(|&p| p > 3) {
            let hits = [n, n - 1, n - 3, n - 4]
                .iter()
                .filter(|&&m| m % p == 0)
                .count();
            assert_eq!(hits, 1, "n={n} p={p}");
        }
    }
}

#[test]
fn computed_profiles_regroup_into_computed_group() {
    for n in 5..=10usize {
        let l = laplacian_matrix(&kneser_graph(n, 2).unwrap());
        let group = critical_group(&l);
        let profiles: Vec<_> = order_primes(n as u64)
            .into_iter()
            .map(|p| p_elementary_divisors(&l, p).unwrap())
            .collect();
        for p in &profiles {
            assert_eq!(p.columns(), n * (n - 1) / 2);
        }
        assert_eq!(
            invariant_factors_from_profiles(&profiles),
            group.invariant_factors
        );
    }
}

#[test]
fn critical_group_ignores_vertex_order() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for n in 5..=8usize {
        let l = laplacian_matrix(&kneser_graph(n, 2).unwrap());
        let reference = critical_group(&l);
        for _ in 0..3 {
            let mut perm: Vec<usize> = (0..l.rows()).collect();
            perm.shuffle(&mut rng);
            assert_eq!(
                critical_group(&l.permute_symmetric(&perm).unwrap()),
                reference
            );
        }
    }
}

#[test]
fn spanning_tree_count_ignores_cofactor_choice() {
    for n in 5..=8usize {
        let g = kneser_graph(n, 2).unwrap();
        let l = laplacian_matrix(&g);
        let reference = spanning_tree_count(&g);
        for k in [1, l.rows() / 2, l.rows() - 1] {
            assert_eq!(determinant(&l.minor_matrix(k, k)).unwrap(), reference);
        }
    }
}

#[test]
fn disconnected_small_cases() {
    for (n, components) in [(2usize, 1usize), (3, 3), (4, 3)] {
        let g = kneser_graph(n, 2).unwrap();
        let group = critical_group(&laplacian_matrix(&g));
        assert!(group.invariant_factors.is_empty());
        assert_eq!(group.free_rank, components);
        assert_eq!(g.connected_components(), components);
    }
    assert_eq!(
        spanning_tree_count(&kneser_graph(3, 2).unwrap()),
        BigInt::zero()
    );
    assert_eq!(
        spanning_tree_count(&kneser_graph(2, 2).unwrap()),
        BigInt::from(1)
    );
}

#[test]
fn higher_kneser_graphs_are_constructible() {
    // KG(7,3): 35 vertices, each 3-subset is disjoint from C(4,3) = 4 others
    let g = kneser_graph(7, 3).unwrap();
    assert_eq!(g.vertex_count(), 35);
    assert!(g.degrees().iter().all(|&d| d == 4));
    let group = critical_group(&laplacian_matrix(&g));
    assert_eq!(group.free_rank, 1);
    assert_eq!(group.torsion_order(), spanning_tree_count(&g));
}

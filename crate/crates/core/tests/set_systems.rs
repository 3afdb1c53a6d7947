mod common;

use chainfold::constructions::{koivisto_parviainen, powerset, random_system, tower_of_cubes};
use chainfold::rng::{random_permutation, seeded};
use chainfold::{Permutation, SetSystem};
use common::*;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn system(max_n: usize) -> impl Strategy<Value = SetSystem> {
    (1..=max_n, 0.2f64..0.95, any::<u64>())
        .prop_map(|(n, d, seed)| random_system(n, d, seed).unwrap())
}

proptest! {
    #[test]
    fn union_product_identities(f1 in system(5), f2 in system(5)) {
        let (n1, n2) = (f1.n(), f2.n());
        let u = f1.union_product(&f2).unwrap();
        prop_assert_eq!(u.n(), n1 + n2);
        prop_assert_eq!(u.len(), f1.len() * f2.len());
        let want = binomial(n1 + n2, n1) * chain_count(n1, &bits(&f1)) * chain_count(n2, &bits(&f2));
        prop_assert_eq!(u.count_chains().0, want);
    }

    #[test]
    fn split_equivalence(f1 in system(4), f2 in system(4), rank in any::<prop::sample::Index>()) {
        let (n1, n2) = (f1.n(), f2.n());
        let u = f1.union_product(&f2).unwrap();
        let order = perms(n1 + n2).swap_remove(rank.index(common::factorial(n1 + n2).to_usize().unwrap()));
        let p = Permutation::new(order).unwrap();
        let parts = p.induced_split(&[n1, n2]).unwrap();
        prop_assert_eq!(
            u.supports(&p).unwrap(),
            f1.supports(&parts[0]).unwrap() && f2.supports(&parts[1]).unwrap()
        );
    }

    #[test]
    fn relabeling_preserves_size_and_chains(f in system(7), seed in any::<u64>()) {
        let sigma = random_permutation(&mut seeded(seed), f.n());
        let g = f.relabel(&sigma).unwrap();
        prop_assert_eq!(g.len(), f.len());
        prop_assert_eq!(g.count_chains(), f.count_chains());
        prop_assert_eq!(g.relabel(&sigma.inverse()).unwrap(), f);
    }

    #[test]
    fn chain_count_matches_enumeration(f in system(7)) {
        let sets = bits(&f);
        let brute = perms(f.n()).iter().filter(|o| supports(&sets, o)).count();
        prop_assert_eq!(f.supported_permutation_count().unwrap().0, BigUint::from(brute));
        prop_assert_eq!(f.count_chains().0, chain_count(f.n(), &sets));
        prop_assert_eq!(f.supported_permutations().len(), brute);
    }

    #[test]
    fn closure_supports_its_generators(n in 1usize..7, seeds in prop::collection::vec(any::<u64>(), 1..5)) {
        let gens: Vec<Permutation> = seeds.iter().map(|&s| random_permutation(&mut seeded(s), n)).collect();
        let f = SetSystem::closure_from_permutations(n, &gens).unwrap();
        for p in &gens {
            prop_assert!(f.supports(p).unwrap());
        }
        prop_assert!(f.len() <= 1 + n * gens.len());
    }

    #[test]
    fn text_round_trip(f in system(8)) {
        prop_assert_eq!(SetSystem::from_text(&f.to_text()).unwrap(), f);
    }
}

#[test]
fn chain_count_oracle_on_constructions() {
    for f in [
        powerset(8).unwrap(),
        tower_of_cubes(3, 3).unwrap(),
        koivisto_parviainen(),
    ] {
        assert_eq!(f.count_chains().value(), &chain_count(f.n(), &bits(&f)));
    }
}

#[test]
fn support_frequency_under_random_relabeling() {
    let f = random_system(6, 0.6, 4).unwrap();
    let n = f.n();
    let fixed = Permutation::new(vec![3, 1, 6, 2, 5, 4]).unwrap();
    let p = f.count_chains().to_u64().unwrap() as f64 / common::factorial(n).to_f64().unwrap();
    assert!(p > 0.0);
    let trials = 20_000;
    let mut rng = seeded(99);
    let hits = (0..trials)
        .filter(|_| {
            f.relabel(&random_permutation(&mut rng, n))
                .unwrap()
                .supports(&fixed)
                .unwrap()
        })
        .count();
    let freq = hits as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    assert!(
        (freq - p).abs() <= 3.0 * se,
        "frequency {freq} vs {p} (se {se})"
    );
}

mod common;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use hsforge::ray_order::{in_s, primitive, s_set, sorted_rays_box2};
use hsforge::{ray_compare, ray_data, sorted_rays, CoIdeal, MultiIndex};

fn coideal_from_corners(q: usize, corners: &[Vec<u32>]) -> CoIdeal {
    let mut members = BTreeSet::new();
    for c in corners {
        for m in CoIdeal::boxed(&MultiIndex::new(c[..q].to_vec())).unwrap().members() {
            members.insert(m.clone());
        }
    }
    CoIdeal::from_members(q, members.into_iter().collect()).unwrap()
}

fn corners() -> impl Strategy<Value = Vec<Vec<u32>>> {
    proptest::collection::vec(proptest::collection::vec(0u32..5, 3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rays_partition_the_coideal(q in 2usize..4, cs in corners()) {
        let delta = coideal_from_corners(q, &cs);
        prop_assume!(!delta.is_trivial());
        let mut seen = BTreeSet::new();
        for beta in sorted_rays(&delta).unwrap() {
            let data = ray_data(&delta, &beta).unwrap();
            prop_assert_eq!(data.orbit.len() as u32, data.multiplicity);
            for g in data.orbit {
                prop_assert!(seen.insert(g.clone()), "{} in two orbits", g);
            }
        }
        let nonzero: BTreeSet<_> = delta.members().iter().filter(|m| !m.is_zero()).cloned().collect();
        prop_assert_eq!(seen, nonzero);
    }

    #[test]
    fn s_sets_hold_exactly_the_lower_rays(q in 2usize..4, cs in corners()) {
        let delta = coideal_from_corners(q, &cs);
        prop_assume!(!delta.is_trivial());
        for beta in sorted_rays(&delta).unwrap() {
            let s: BTreeSet<_> = s_set(&delta, &beta).into_iter().collect();
            for g in delta.members().iter().filter(|m| !m.is_zero()) {
                let below = ray_compare(g, &beta).unwrap() == Ordering::Less;
                prop_assert_eq!(s.contains(g), below);
                prop_assert_eq!(in_s(&beta, g), below);
            }
        }
    }

    #[test]
    fn sum_dominates_the_least_summand(
        q in 2usize..5,
        raw in proptest::collection::vec(proptest::collection::vec(0u32..7, 4), 2..6),
    ) {
        let mut chain: Vec<MultiIndex> = raw
            .iter()
            .map(|v| MultiIndex::new(v[..q].to_vec()))
            .filter(|v| !v.is_zero())
            .collect();
        chain.sort_by(|a, b| ray_compare(a, b).unwrap());
        chain.dedup_by(|a, b| ray_compare(a, b).unwrap() == Ordering::Equal);
        prop_assume!(chain.len() >= 2);
        let sum = chain[1..].iter().fold(chain[0].clone(), |acc, x| &acc + x);
        prop_assert_eq!(ray_compare(&chain[0], &sum).unwrap(), Ordering::Less);
        prop_assert_eq!(ray_compare(&sum, &chain[chain.len() - 1]).unwrap(), Ordering::Less);
    }

    #[test]
    fn smaller_coideals_give_subsequences(q in 2usize..4, big in corners(), small in corners()) {
        let delta = coideal_from_corners(q, &big);
        let sub = delta.intersect(&coideal_from_corners(q, &small)).unwrap();
        prop_assume!(!sub.is_trivial());
        let all = sorted_rays(&delta).unwrap();
        let part = sorted_rays(&sub).unwrap();
        let restricted: Vec<_> = all.iter().filter(|b| part.contains(b)).cloned().collect();
        prop_assert_eq!(&restricted, &part);
        for beta in &part {
            prop_assert!(ray_data(&sub, beta).unwrap().multiplicity <= ray_data(&delta, beta).unwrap().multiplicity);
        }
    }

    #[test]
    fn box_enumeration_matches_generic_sort(b1 in 0u32..9, b2 in 0u32..9) {
        prop_assume!(b1 + b2 > 0);
        let delta = CoIdeal::boxed(&MultiIndex::from([b1, b2])).unwrap();
        prop_assert_eq!(sorted_rays_box2(b1, b2), sorted_rays(&delta).unwrap());
    }

    #[test]
    fn multiples_share_a_class(v in proptest::collection::vec(0u32..7, 3), k in 1u32..5) {
        let b = MultiIndex::new(v);
        prop_assume!(!b.is_zero());
        prop_assert_eq!(ray_compare(&b, &b.scaled(k)).unwrap(), Ordering::Equal);
        prop_assert_eq!(primitive(&b.scaled(k)).unwrap(), primitive(&b).unwrap());
    }
}

#[test]
fn worked_example_rays() {
    let rays = sorted_rays(&boxed(&[2, 2])).unwrap();
    let shown: Vec<String> = rays.iter().map(|r| r.to_string()).collect();
    assert_eq!(shown, ["(0,1)", "(1,2)", "(1,1)", "(2,1)", "(1,0)"]);
}

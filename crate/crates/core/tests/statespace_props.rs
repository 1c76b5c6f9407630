use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;
use tftwb_core::statespace::{state_space_dim, CohomologyModel};

/// Counts basis vectors of `⊕ₚ Hᵖ(O) ⊗ (∧ℂⁿ)^{⊗g}` one by one: a cohomology
/// class together with a g-tuple of subsets of `{1..n}`.
fn enumerate(h: &[u64], n: usize, g: u32) -> u64 {
    let subsets = 1u64 << n;
    let mut tuples = 0u64;
    let mut stack = vec![0u32];
    while let Some(depth) = stack.pop() {
        if depth == g {
            tuples += 1;
            continue;
        }
        for _ in 0..subsets {
            stack.push(depth + 1);
        }
    }
    h.iter().sum::<u64>() * tuples
}

#[test]
fn torus_matches_enumeration() {
    let torus = CohomologyModel::complex_torus(2);
    let expect = [4u64, 16, 64, 256, 1024];
    for (g, e) in expect.iter().enumerate() {
        let got = state_space_dim(&torus, g as u32).unwrap().total;
        assert_eq!(got, BigUint::from(*e));
        assert_eq!(got, BigUint::from(enumerate(&[1, 2, 1], 2, g as u32)));
    }
}

#[test]
fn torus_hodge_numbers_are_binomial() {
    for n in 0..=6 {
        let t = CohomologyModel::complex_torus(n);
        assert_eq!(t.hodge().iter().sum::<u64>(), 1 << n);
    }
}

proptest! {
    #[test]
    fn trivial_tangent_is_multiplicative(n in 0usize..5, h in proptest::collection::vec(0u64..20, 5), g in 0u32..12) {
        let model = CohomologyModel::new(n, h[..=n].to_vec(), true, BTreeMap::new()).unwrap();
        let now = state_space_dim(&model, g).unwrap();
        let next = state_space_dim(&model, g + 1).unwrap();
        prop_assert_eq!(next.total, now.total << n);
        let genus0: u64 = h[..=n].iter().sum();
        prop_assert_eq!(state_space_dim(&model, 0).unwrap().total, BigUint::from(genus0));
    }

    #[test]
    fn small_models_match_enumeration(n in 0usize..3, h in proptest::collection::vec(0u64..5, 3), g in 0u32..4) {
        let model = CohomologyModel::new(n, h[..=n].to_vec(), true, BTreeMap::new()).unwrap();
        prop_assert_eq!(state_space_dim(&model, g).unwrap().total, BigUint::from(enumerate(&h[..=n], n, g)));
    }
}

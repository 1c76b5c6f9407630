mod common;

use proptest::prelude::*;
use tftwb_core::bordism::{
    apply_move, canonical_closed_surface, evaluate, parse, random_equivalent_decomposition, BordismWord, Move,
};
use tftwb_core::RatMatrix;

fn open_words() -> Vec<BordismWord> {
    [
        "pants",
        "down",
        "pants | wire ; down",
        "wire | cup ; pants",
        "swap ; pants",
        "up ; pants",
        "wire | up ; pants | wire",
    ]
    .iter()
    .map(|s| parse(s).unwrap())
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decompositions_agree_on_closed_surfaces(seed in any::<u64>(), genus in 0usize..=3, which in 0usize..8) {
        let algebras = common::test_algebras();
        let a = &algebras[which];
        let w = canonical_closed_surface(genus);
        let v = random_equivalent_decomposition(&w, seed);
        prop_assert_eq!(evaluate(&v, a), evaluate(&w, a));
        let z = evaluate(&w, a);
        prop_assert_eq!(z.get(0, 0), &a.closed_partition_function(genus));
    }

    #[test]
    fn decompositions_agree_on_open_words(seed in any::<u64>(), which in 0usize..8, word in 0usize..7) {
        let algebras = common::test_algebras();
        let a = &algebras[which];
        let w = &open_words()[word];
        let v = random_equivalent_decomposition(w, seed);
        prop_assert_eq!(v.source_circles(), w.source_circles());
        prop_assert_eq!(v.target_circles(), w.target_circles());
        prop_assert_eq!(evaluate(&v, a), evaluate(w, a));
    }

    #[test]
    fn every_applicable_move_is_sound(seed in any::<u64>(), at in 0usize..12, which in 0usize..8) {
        let algebras = common::test_algebras();
        let a = &algebras[which];
        let w = random_equivalent_decomposition(&canonical_closed_surface(2), seed);
        for mv in Move::ALL {
            if let Some(v) = apply_move(&w, mv, at) {
                prop_assert_eq!(evaluate(&v, a), evaluate(&w, a), "{:?} at {}", mv, at);
            }
        }
    }
}

#[test]
fn composition_is_matrix_product() {
    for a in common::test_algebras() {
        let words = open_words();
        for f in &words {
            for g in &words {
                let Ok(gf) = f.compose(g) else { continue };
                let expect = evaluate(g, &a).try_mul(&evaluate(f, &a)).unwrap();
                assert_eq!(evaluate(&gf, &a), expect, "{f} then {g}");
            }
        }
    }
}

#[test]
fn identities_are_units_for_composition() {
    let a = &common::test_algebras()[6];
    for w in open_words() {
        let left = BordismWord::identity(w.source_circles()).compose(&w).unwrap();
        let right = w.compose(&BordismWord::identity(w.target_circles())).unwrap();
        assert_eq!(evaluate(&left, a), evaluate(&w, a));
        assert_eq!(evaluate(&right, a), evaluate(&w, a));
    }
}

#[test]
fn side_by_side_words_evaluate_to_kronecker_products() {
    let a = &common::test_algebras()[3];
    let pairs = [("pants", "down"), ("up", "wire"), ("swap", "cup"), ("wire", "pants")];
    for (x, y) in pairs {
        let joint = parse(&format!("{x} | {y}")).unwrap();
        let expect: RatMatrix = evaluate(&parse(x).unwrap(), a).kronecker(&evaluate(&parse(y).unwrap(), a));
        assert_eq!(evaluate(&joint, a), expect);
    }
}

#[test]
fn genus_formula_oracles() {
    let algebras = common::test_algebras();
    for a in &algebras {
        for g in 0..=4 {
            assert_eq!(
                evaluate(&canonical_closed_surface(g), a).get(0, 0),
                &a.closed_partition_function(g)
            );
        }
    }
    let qx2 = &algebras[1];
    for (g, v) in [(0, 0), (1, 2), (2, 0), (3, 0), (4, 0)] {
        assert_eq!(
            evaluate(&canonical_closed_surface(g), qx2).get(0, 0),
            &tftwb_core::Rat::from_int(v)
        );
    }
    let z2 = &algebras[2];
    for g in 0..=4u32 {
        assert_eq!(
            evaluate(&canonical_closed_surface(g as usize), z2).get(0, 0),
            &tftwb_core::Rat::from_int(1 << g)
        );
    }
}

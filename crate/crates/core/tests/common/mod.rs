#![allow(dead_code)]

use proptest::prelude::*;
use tftwb_core::exactlin::Vars;
use tftwb_core::frobenius::FrobeniusAlgebra;
use tftwb_core::{Poly, Rat, RatMatrix};

pub fn rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Rat::new(n, d))
}

pub fn small_int() -> impl Strategy<Value = Rat> {
    (-2i64..=2).prop_map(Rat::from_int)
}

/// All exponent vectors of total degree `<= deg` in `n` variables.
pub fn exponents(n: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=deg - used).map(move |k| {
                    let mut e2 = e.clone();
                    e2.push(k);
                    e2
                })
            })
            .collect();
    }
    out
}

/// Polynomials of degree `<= deg` with small integer coefficients.
pub fn poly(vars: Vars, deg: u32) -> impl Strategy<Value = Poly> {
    let monos = exponents(vars.len(), deg);
    proptest::collection::vec(small_int(), monos.len())
        .prop_map(move |cs| Poly::from_terms(&vars, monos.iter().cloned().zip(cs)))
}

/// The validated algebras used throughout: dimensions 1 to 5.
pub fn test_algebras() -> Vec<FrobeniusAlgebra> {
    let qx2 = FrobeniusAlgebra::truncated_polynomial(2);
    let z2 = FrobeniusAlgebra::cyclic_group(2);
    let p = RatMatrix::from_i64(3, 3, &[1, 1, 0, 0, 1, 2, 1, 0, 1]);
    vec![
        FrobeniusAlgebra::scalar(Rat::new(2, 3)),
        qx2.clone(),
        z2.clone(),
        FrobeniusAlgebra::truncated_polynomial(3).change_basis(&p).unwrap(),
        FrobeniusAlgebra::cyclic_group(3),
        z2.direct_sum(&FrobeniusAlgebra::scalar(Rat::from_int(-5))),
        qx2.direct_sum(&FrobeniusAlgebra::cyclic_group(3)),
        FrobeniusAlgebra::truncated_polynomial(4)
            .with_counit(vec![
                Rat::from_int(1),
                Rat::new(1, 2),
                Rat::from_int(3),
                Rat::from_int(-1),
            ])
            .unwrap(),
    ]
}

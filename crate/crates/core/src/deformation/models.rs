//! Small dg Lie algebras built as `L ⊗ A` for a Lie algebra `L` in degree 0
//! and a graded-commutative dg algebra `A`: `[l⊗a, m⊗b] = [l,m]⊗ab` and
//! `d(l⊗a) = l⊗da`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{validate_dgla, DGLAModel, DeformationError, RawDgla};
use crate::exactlin::{Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub names: Vec<String>,
    /// Full table, both orders: `[xᵢ, xⱼ]` has coefficient `c` on `xₖ`.
    pub bracket: Vec<(usize, usize, usize, Rat)>,
}

impl LieAlgebra {
    /// Fills in `[xⱼ, xᵢ] = −[xᵢ, xⱼ]` for each listed pair.
    fn from_pairs(names: &[&str], pairs: &[(usize, usize, usize, i64)]) -> Self {
        let mut bracket = Vec::new();
        for &(i, j, k, c) in pairs {
            bracket.push((i, j, k, Rat::from_int(c)));
            bracket.push((j, i, k, Rat::from_int(-c)));
        }
        LieAlgebra {
            names: names.iter().map(|s| String::from(*s)).collect(),
            bracket,
        }
    }

    pub fn sl2() -> Self {
        Self::from_pairs(&["e", "f", "h"], &[(0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, -2)])
    }

    pub fn so3() -> Self {
        Self::from_pairs(&["j1", "j2", "j3"], &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)])
    }

    pub fn heisenberg() -> Self {
        Self::from_pairs(&["p", "q", "z"], &[(0, 1, 2, 1)])
    }

    /// The two-dimensional non-abelian Lie algebra `[u, v] = v`.
    pub fn affine_line() -> Self {
        Self::from_pairs(&["u", "v"], &[(0, 1, 1, 1)])
    }

    pub fn abelian(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("a{}", i + 1)).collect();
        LieAlgebra {
            names,
            bracket: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }
}

/// A finite-dimensional graded-commutative dg algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cdga {
    pub names: Vec<String>,
    pub degrees: Vec<i32>,
    pub d: Vec<(usize, usize, Rat)>,
    /// Full table, both orders.
    pub mult: Vec<(usize, usize, usize, Rat)>,
}

impl Cdga {
    fn new(names: &[(&str, i32)], d: &[(usize, usize, Rat)], mult: Vec<(usize, usize, usize, Rat)>) -> Self {
        Cdga {
            names: names.iter().map(|(s, _)| String::from(*s)).collect(),
            degrees: names.iter().map(|(_, g)| *g).collect(),
            d: d.to_vec(),
            mult,
        }
    }

    /// Unit products `1·x = x·1 = x` for basis element 0 acting as the unit.
    fn unit_products(n: usize) -> Vec<(usize, usize, usize, Rat)> {
        let mut m = vec![(0, 0, 0, Rat::one())];
        for i in 1..n {
            m.push((0, i, i, Rat::one()));
            m.push((i, 0, i, Rat::one()));
        }
        m
    }

    /// The ground field.
    pub fn point() -> Self {
        Self::new(&[("1", 0)], &[], Self::unit_products(1))
    }

    /// The exterior algebra on two generators of degree 1.
    pub fn exterior2() -> Self {
        let mut mult = Self::unit_products(4);
        mult.push((1, 2, 3, Rat::one()));
        mult.push((2, 1, 3, Rat::from_int(-1)));
        Self::new(&[("1", 0), ("xi1", 1), ("xi2", 1), ("xi12", 2)], &[], mult)
    }

    /// `Q[t]/(t²) ⊕ Q dt` with `d t = dt` and all products of `t, dt` zero.
    pub fn interval() -> Self {
        Self::new(
            &[("1", 0), ("t", 0), ("dt", 1)],
            &[(1, 2, Rat::one())],
            Self::unit_products(3),
        )
    }

    /// Generators in degrees 1 and 2 with `d ξ = η`, products zero.
    pub fn shifted_pair() -> Self {
        Self::new(
            &[("1", 0), ("xi", 1), ("eta", 2)],
            &[(1, 2, Rat::one())],
            Self::unit_products(3),
        )
    }

    /// Čech cochains of a two-set cover with trivial coefficients, made
    /// graded commutative: `e0, e1` in degree 0 with unit `e0 + e1`, `f` in
    /// degree 1, `d e0 = −f`, `d e1 = f`. In terms of `s = e1 − e0` this is
    /// `Q[s]/(s²) ⊕ Q f` with `d s = 2f`, `s f = f² = 0`.
    pub fn two_chart() -> Self {
        let q = |n, d| Rat::new(n, d);
        let mult = vec![
            (0, 0, 0, q(3, 4)),
            (0, 0, 1, q(-1, 4)),
            (1, 1, 0, q(-1, 4)),
            (1, 1, 1, q(3, 4)),
            (0, 1, 0, q(1, 4)),
            (0, 1, 1, q(1, 4)),
            (1, 0, 0, q(1, 4)),
            (1, 0, 1, q(1, 4)),
            (0, 2, 2, q(1, 2)),
            (2, 0, 2, q(1, 2)),
            (1, 2, 2, q(1, 2)),
            (2, 1, 2, q(1, 2)),
        ];
        Self::new(
            &[("e0", 0), ("e1", 0), ("f", 1)],
            &[(0, 2, Rat::from_int(-1)), (1, 2, Rat::one())],
            mult,
        )
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }
}

/// `L ⊗ A`, validated. Basis `xᵢ*aᵤ` is indexed `i·dim A + u`.
pub fn current_algebra(l: &LieAlgebra, a: &Cdga) -> Result<DGLAModel, DeformationError> {
    let na = a.dim();
    let idx = |i: usize, u: usize| i * na + u;
    let mut raw = RawDgla::default();
    for li in &l.names {
        for (an, deg) in a.names.iter().zip(&a.degrees) {
            raw.basis.push((format!("{li}*{an}"), *deg));
        }
    }
    for i in 0..l.dim() {
        for (u, v, c) in &a.d {
            raw.d.push((idx(i, *u), idx(i, *v), c.clone()));
        }
    }
    for (i, j, k, c) in &l.bracket {
        for (u, v, w, m) in &a.mult {
            raw.bracket.push((idx(*i, *u), idx(*j, *v), idx(*k, *w), c * m));
        }
    }
    validate_dgla(&raw)
}

fn random_block<R: Rng>(rng: &mut R, k: usize) -> RatMatrix {
    loop {
        let vals: Vec<i64> = (0..k * k).map(|_| rng.random_range(-2..=2)).collect();
        let m = RatMatrix::from_i64(k, k, &vals);
        if m.rank() == k {
            return m;
        }
    }
}

/// A random `L ⊗ A` of dimension at most 12, presented in a random basis
/// that mixes elements of equal degree.
pub fn random_model<R: Rng>(rng: &mut R) -> DGLAModel {
    let lies = [
        LieAlgebra::sl2(),
        LieAlgebra::so3(),
        LieAlgebra::heisenberg(),
        LieAlgebra::affine_line(),
        LieAlgebra::abelian(2),
    ];
    let cdgas = [
        Cdga::point(),
        Cdga::exterior2(),
        Cdga::interval(),
        Cdga::shifted_pair(),
        Cdga::two_chart(),
    ];
    let l = &lies[rng.random_range(0..lies.len())];
    let a = &cdgas[rng.random_range(0..cdgas.len())];
    let model = current_algebra(l, a).expect("tensor of a Lie algebra and a cdga");
    let n = model.dim();
    let mut p = RatMatrix::zeros(n, n);
    let mut degrees: Vec<i32> = model.degrees().to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    for deg in degrees {
        let block = model.basis_of_degree(deg);
        let m = random_block(rng, block.len());
        for (r, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate() {
                p.set(i, j, m.get(r, c).clone());
            }
        }
    }
    model.change_basis(&p).expect("degree-preserving invertible change")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{mc_residual, DGLAElement};
    use alloc::sync::Arc;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_combination_is_a_dgla() {
        for l in [
            LieAlgebra::sl2(),
            LieAlgebra::so3(),
            LieAlgebra::heisenberg(),
            LieAlgebra::affine_line(),
        ] {
            for a in [
                Cdga::point(),
                Cdga::exterior2(),
                Cdga::interval(),
                Cdga::shifted_pair(),
                Cdga::two_chart(),
            ] {
                current_algebra(&l, &a).unwrap();
            }
        }
    }

    #[test]
    fn odd_element_with_nonzero_self_bracket() {
        let m = Arc::new(current_algebra(&LieAlgebra::sl2(), &Cdga::exterior2()).unwrap());
        // β = e⊗ξ1 + f⊗ξ2, [β, β] = 2 h⊗ξ1ξ2
        let mut c = vec![Rat::zero(); 12];
        c[1] = Rat::one();
        c[4 + 2] = Rat::one();
        let beta = DGLAElement::new(&m, c).unwrap();
        let bb = beta.bracket(&beta).unwrap();
        let mut expect = vec![Rat::zero(); 12];
        expect[2 * 4 + 3] = Rat::from_int(2);
        assert_eq!(bb.coeffs(), &expect[..]);
        assert_eq!(mc_residual(&beta), bb.scale(&Rat::new(1, 2)));
    }

    #[test]
    fn random_models_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let m = random_model(&mut rng);
            assert!(m.dim() <= 12);
        }
    }
}

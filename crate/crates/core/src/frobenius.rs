//! Commutative Frobenius algebras over the rationals.
//!
//! An algebra is given by structure constants `c[i][j][k]` with
//! `e_i · e_j = Σ_k c[i][j][k] e_k`, a unit vector and a counit covector.
//! These are exactly the data a closed 2d TFT assigns to the circle and to
//! the generating bordisms.

use alloc::vec;
use alloc::vec::Vec;

use crate::exactlin::{Rat, RatMatrix};

/// Structure constants, unit and counit before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawFrobenius {
    pub dim: usize,
    /// `mult[i][j][k]`: coefficient of `e_k` in `e_i · e_j`.
    pub mult: Vec<Vec<Vec<Rat>>>,
    pub unit: Vec<Rat>,
    pub counit: Vec<Rat>,
}

/// One failed axiom, with the index tuple that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `(e_i e_j) e_l ≠ e_i (e_j e_l)` in coordinate `m`.
    NotAssociative {
        i: usize,
        j: usize,
        l: usize,
        m: usize,
    },
    NotCommutative {
        i: usize,
        j: usize,
        k: usize,
    },
    /// `u · e_j` differs from `e_j` in coordinate `k`.
    NoUnit {
        j: usize,
        k: usize,
    },
    /// `g = [ε(e_i e_j)]` is singular.
    DegeneratePairing,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FrobeniusError {
    #[error("{what} has the wrong shape for dimension {dim}")]
    Shape { what: &'static str, dim: usize },
    #[error("not a commutative Frobenius algebra: {0:?}")]
    Invalid(Vec<Violation>),
}

/// A validated commutative Frobenius algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    dim: usize,
    mult: Vec<Rat>,
    unit: Vec<Rat>,
    counit: Vec<Rat>,
    pairing: RatMatrix,
    copairing: RatMatrix,
}

/// `H = Σ_{i,j} (g⁻¹)_{ij} e_i e_j`, the image of the copairing under
/// multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleElement {
    pub vector: Vec<Rat>,
}

impl RawFrobenius {
    fn check_shapes(&self) -> Result<(), FrobeniusError> {
        let n = self.dim;
        let bad = |what| Err(FrobeniusError::Shape { what, dim: n });
        if self.unit.len() != n {
            return bad("unit");
        }
        if self.counit.len() != n {
            return bad("counit");
        }
        if self.mult.len() != n || self.mult.iter().any(|a| a.len() != n || a.iter().any(|b| b.len() != n)) {
            return bad("mult");
        }
        Ok(())
    }
}

/// Checks every axiom and returns either the algebra or all violations.
pub fn validate(raw: &RawFrobenius) -> Result<FrobeniusAlgebra, FrobeniusError> {
    raw.check_shapes()?;
    let n = raw.dim;
    let c = |i: usize, j: usize, k: usize| &raw.mult[i][j][k];
    let mut violations = Vec::new();

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if c(i, j, k) != c(j, i, k) && i < j {
                    violations.push(Violation::NotCommutative { i, j, k });
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for m in 0..n {
                    let lhs: Rat = (0..n).map(|k| c(i, j, k) * c(k, l, m)).sum();
                    let rhs: Rat = (0..n).map(|k| c(j, l, k) * c(i, k, m)).sum();
                    if lhs != rhs {
                        violations.push(Violation::NotAssociative { i, j, l, m });
                    }
                }
            }
        }
    }
    for j in 0..n {
        for k in 0..n {
            let left: Rat = (0..n).map(|i| &raw.unit[i] * c(i, j, k)).sum();
            let right: Rat = (0..n).map(|i| &raw.unit[i] * c(j, i, k)).sum();
            let delta = if j == k { Rat::one() } else { Rat::zero() };
            if left != delta || right != delta {
                violations.push(Violation::NoUnit { j, k });
            }
        }
    }

    let mut pairing = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v: Rat = (0..n).map(|k| c(i, j, k) * &raw.counit[k]).sum();
            pairing.set(i, j, v);
        }
    }
    let copairing = match pairing.inverse() {
        Ok(inv) => Some(inv),
        Err(_) => {
            violations.push(Violation::DegeneratePairing);
            None
        }
    };

    if !violations.is_empty() {
        return Err(FrobeniusError::Invalid(violations));
    }
    let mut mult = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            mult.extend(raw.mult[i][j].iter().cloned());
        }
    }
    Ok(FrobeniusAlgebra {
        dim: n,
        mult,
        unit: raw.unit.clone(),
        counit: raw.counit.clone(),
        pairing,
        copairing: copairing.unwrap(),
    })
}

impl FrobeniusAlgebra {
    /// `Q[x]/(x^n)` in the basis `1, x, …, x^{n-1}` with the residue counit
    /// `ε(x^{n-1}) = 1`.
    pub fn truncated_polynomial(n: usize) -> Self {
        assert!(n >= 1);
        let mut mult = vec![vec![vec![Rat::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    mult[i][j][i + j] = Rat::one();
                }
            }
        }
        let mut unit = vec![Rat::zero(); n];
        unit[0] = Rat::one();
        let mut counit = vec![Rat::zero(); n];
        counit[n - 1] = Rat::one();
        validate(&RawFrobenius {
            dim: n,
            mult,
            unit,
            counit,
        })
        .expect("truncated polynomial ring is Frobenius")
    }

    /// Group algebra of `Z/k` with `ε(σ^i) = δ_{i0}`.
    pub fn cyclic_group(k: usize) -> Self {
        assert!(k >= 1);
        let mut mult = vec![vec![vec![Rat::zero(); k]; k]; k];
        for i in 0..k {
            for j in 0..k {
                mult[i][j][(i + j) % k] = Rat::one();
            }
        }
        let mut unit = vec![Rat::zero(); k];
        unit[0] = Rat::one();
        let counit = unit.clone();
        validate(&RawFrobenius {
            dim: k,
            mult,
            unit,
            counit,
        })
        .expect("group algebra is Frobenius")
    }

    /// The rationals with `ε(1) = λ`. Panics if `λ = 0`.
    pub fn scalar(lambda: Rat) -> Self {
        assert!(!lambda.is_zero(), "counit must be nonzero");
        validate(&RawFrobenius {
            dim: 1,
            mult: vec![vec![vec![Rat::one()]]],
            unit: vec![Rat::one()],
            counit: vec![lambda],
        })
        .unwrap()
    }

    /// Product algebra `A × B` with counit `ε_A + ε_B`.
    pub fn direct_sum(&self, other: &FrobeniusAlgebra) -> Self {
        let (a, b) = (self.dim, other.dim);
        let n = a + b;
        let mut raw = RawFrobenius {
            dim: n,
            mult: vec![vec![vec![Rat::zero(); n]; n]; n],
            unit: self.unit.iter().chain(&other.unit).cloned().collect(),
            counit: self.counit.iter().chain(&other.counit).cloned().collect(),
        };
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    raw.mult[i][j][k] = self.structure_constant(i, j, k).clone();
                }
            }
        }
        for i in 0..b {
            for j in 0..b {
                for k in 0..b {
                    raw.mult[a + i][a + j][a + k] = other.structure_constant(i, j, k).clone();
                }
            }
        }
        validate(&raw).expect("product of Frobenius algebras")
    }

    /// Same algebra with a different counit, if that one is still nondegenerate.
    pub fn with_counit(&self, counit: Vec<Rat>) -> Result<Self, FrobeniusError> {
        let mut raw = self.to_raw();
        raw.counit = counit;
        validate(&raw)
    }

    /// Re-expresses the algebra in the basis `f_a = Σ_i p[i][a] e_i`.
    pub fn change_basis(&self, p: &RatMatrix) -> Result<Self, FrobeniusError> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(FrobeniusError::Shape {
                what: "change of basis",
                dim: n,
            });
        }
        let p_inv = p
            .inverse()
            .map_err(|_| FrobeniusError::Invalid(vec![Violation::DegeneratePairing]))?;
        let mut raw = RawFrobenius {
            dim: n,
            mult: vec![vec![vec![Rat::zero(); n]; n]; n],
            unit: p_inv.mul_vec(&self.unit).unwrap(),
            counit: p.transpose().mul_vec(&self.counit).unwrap(),
        };
        for a in 0..n {
            let fa = p.column(a);
            for b in 0..n {
                let prod = self.multiply(&fa, &p.column(b));
                raw.mult[a][b] = p_inv.mul_vec(&prod).unwrap();
            }
        }
        validate(&raw)
    }

    pub fn to_raw(&self) -> RawFrobenius {
        let n = self.dim;
        RawFrobenius {
            dim: n,
            mult: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| self.structure_constant(i, j, k).clone()).collect())
                        .collect()
                })
                .collect(),
            unit: self.unit.clone(),
            counit: self.counit.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.mult[(i * self.dim + j) * self.dim + k]
    }

    pub fn unit(&self) -> &[Rat] {
        &self.unit
    }

    pub fn counit(&self) -> &[Rat] {
        &self.counit
    }

    /// `g[i][j] = ε(e_i e_j)`.
    pub fn pairing(&self) -> &RatMatrix {
        &self.pairing
    }

    /// `g⁻¹`, the coefficients of the copairing `Σ γ_{ij} e_i ⊗ e_j`.
    pub fn copairing(&self) -> &RatMatrix {
        &self.copairing
    }

    pub fn multiply(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = self.dim;
        let mut out = vec![Rat::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let ab = &a[i] * &b[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        *o += &(&ab * c);
                    }
                }
            }
        }
        out
    }

    pub fn apply_counit(&self, v: &[Rat]) -> Rat {
        v.iter().zip(&self.counit).map(|(a, b)| a * b).sum()
    }

    pub fn handle_element(&self) -> HandleElement {
        let n = self.dim;
        let mut vector = vec![Rat::zero(); n];
        for i in 0..n {
            for j in 0..n {
                let g = self.copairing.get(i, j);
                if g.is_zero() {
                    continue;
                }
                for (k, v) in vector.iter_mut().enumerate() {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        *v += &(g * c);
                    }
                }
            }
        }
        HandleElement { vector }
    }

    /// `ε(H^genus)`; `H^0` is the unit.
    pub fn closed_partition_function(&self, genus: usize) -> Rat {
        let h = self.handle_element().vector;
        let mut acc = self.unit.clone();
        for _ in 0..genus {
            acc = self.multiply(&acc, &h);
        }
        self.apply_counit(&acc)
    }
}

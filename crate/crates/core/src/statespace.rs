//! Genus-`g` state spaces `⊕ₚ Hᵖ(X, (∧T)^{⊗g})` from supplied cohomology
//! numbers. Nothing here computes sheaf cohomology; with a trivial tangent
//! bundle `∧T` is a trivial bundle of rank `2ⁿ`, and otherwise the caller
//! provides the dimensions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StateSpaceError {
    #[error("no cohomology data for p = {p} at genus {genus}")]
    MissingData { p: usize, genus: u32 },
    #[error("expected {expected} Hodge numbers for complex dimension {dim}, found {found}")]
    HodgeLength { dim: usize, expected: usize, found: usize },
    #[error("table entry p = {p} exceeds complex dimension {dim}")]
    TableOutOfRange { p: usize, dim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyModel {
    dim: usize,
    h: Vec<u64>,
    tangent_trivial: bool,
    table: BTreeMap<(usize, u32), u64>,
}

impl CohomologyModel {
    /// `h[p] = dim Hᵖ(X, O)` for `p = 0..=n`; `table[(p, g)] = dim Hᵖ(X, (∧T)^{⊗g})`.
    pub fn new(
        dim: usize,
        h: Vec<u64>,
        tangent_trivial: bool,
        table: BTreeMap<(usize, u32), u64>,
    ) -> Result<Self, StateSpaceError> {
        if h.len() != dim + 1 {
            return Err(StateSpaceError::HodgeLength {
                dim,
                expected: dim + 1,
                found: h.len(),
            });
        }
        if let Some(&(p, _)) = table.keys().find(|(p, _)| *p > dim) {
            return Err(StateSpaceError::TableOutOfRange { p, dim });
        }
        Ok(CohomologyModel {
            dim,
            h,
            tangent_trivial,
            table,
        })
    }

    /// A complex torus of dimension `n`: `h[p] = C(n, p)`, trivial tangent bundle.
    pub fn complex_torus(n: usize) -> Self {
        let mut h = Vec::with_capacity(n + 1);
        let mut c = 1u64;
        for p in 0..=n {
            h.push(c);
            c = c * (n - p) as u64 / (p + 1) as u64;
        }
        CohomologyModel {
            dim: n,
            h,
            tangent_trivial: true,
            table: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hodge(&self) -> &[u64] {
        &self.h
    }

    pub fn tangent_trivial(&self) -> bool {
        self.tangent_trivial
    }

    pub fn table(&self) -> &BTreeMap<(usize, u32), u64> {
        &self.table
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    pub total: BigUint,
    /// Indexed by `p`.
    pub by_degree: Vec<BigUint>,
}

pub fn state_space_dim(model: &CohomologyModel, genus: u32) -> Result<StateSpace, StateSpaceError> {
    let by_degree: Vec<BigUint> = if model.tangent_trivial {
        let rank = BigUint::one() << (model.dim as u64 * genus as u64);
        model.h.iter().map(|&h| &rank * h).collect()
    } else {
        (0..=model.dim)
            .map(|p| {
                model
                    .table
                    .get(&(p, genus))
                    .map(|&v| BigUint::from(v))
                    .ok_or(StateSpaceError::MissingData { p, genus })
            })
            .collect::<Result<_, _>>()?
    };
    let total = by_degree.iter().fold(BigUint::zero(), |a, b| a + b);
    Ok(StateSpace { total, by_degree })
}

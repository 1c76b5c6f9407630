//! Polynomial polyvector fields `Σ c · x^α θ_S` with odd `θᵢ` paired to the
//! coordinates `xᵢ`, and the Schouten bracket
//!
//! `[P, Q] = Σᵢ (P ∂⃖/∂θᵢ) · ∂Q/∂xᵢ − ∂P/∂xᵢ · (∂⃗/∂θᵢ Q)`
//!
//! with right and left odd derivatives. On vector fields this is the Lie
//! bracket. With the shifted degree `|P| − 1` it is graded antisymmetric and
//! satisfies the graded Jacobi identity.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::DeformationError;
use crate::exactlin::{Exponent, Poly, Rat, Vars};

/// Odd monomials are bit masks: bit `i` stands for `θᵢ`, written in
/// increasing order.
type Key = (Exponent, u32);

#[derive(Clone, PartialEq, Eq)]
pub struct Polyvector {
    vars: Vars,
    terms: BTreeMap<Key, Rat>,
}

fn popcount_below(mask: u32, i: usize) -> u32 {
    (mask & ((1u32 << i) - 1)).count_ones()
}

fn popcount_above(mask: u32, i: usize) -> u32 {
    (mask >> (i + 1)).count_ones()
}

/// Sign of `θ_S θ_T` rewritten in increasing order; `None` if they overlap.
fn merge_sign(s: u32, t: u32) -> Option<bool> {
    if s & t != 0 {
        return None;
    }
    let mut inversions = 0;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        inversions += popcount_above(s, j);
        rest &= rest - 1;
    }
    Some(inversions % 2 == 1)
}

impl Polyvector {
    pub fn zero(vars: &Vars) -> Self {
        Polyvector {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `c · x^α θ_{i₁} ⋯ θ_{iₖ}` with the odd factors in the given order.
    pub fn term(vars: &Vars, coef: Rat, alpha: Exponent, thetas: &[usize]) -> Result<Self, DeformationError> {
        let n = vars.len();
        if alpha.len() != n {
            return Err(DeformationError::VariableMismatch);
        }
        let mut out = Polyvector::zero(vars);
        let mut mask = 0u32;
        let mut negative = false;
        for &t in thetas {
            if t >= n || n > 32 {
                return Err(DeformationError::IndexOutOfRange {
                    what: "theta",
                    index: t,
                });
            }
            match merge_sign(mask, 1 << t) {
                None => return Ok(out),
                Some(s) => negative ^= s,
            }
            mask |= 1 << t;
        }
        let c = if negative { -coef } else { coef };
        out.add_term(alpha, mask, c);
        Ok(out)
    }

    /// Coefficient polynomial times `θ_S` for a function `f` over the same
    /// variables.
    pub fn from_function(f: &Poly, thetas: &[usize]) -> Result<Self, DeformationError> {
        let mut out = Polyvector::zero(f.vars());
        for (e, c) in f.terms() {
            out = out.try_add(&Self::term(f.vars(), c.clone(), e.clone(), thetas)?)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, alpha: Exponent, mask: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let key = (alpha, mask);
        let v = self.terms.remove(&key).map_or(c.clone(), |old| &old + &c);
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// `((α, θ-mask), coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, u32, &Rat)> {
        self.terms.iter().map(|((e, m), c)| (e, *m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The exterior degree, if all terms share one.
    pub fn exterior_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|(_, m)| m.count_ones());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    fn check(&self, other: &Polyvector) -> Result<(), DeformationError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(DeformationError::VariableMismatch)
        }
    }

    pub fn try_add(&self, other: &Polyvector) -> Result<Polyvector, DeformationError> {
        self.check(other)?;
        let mut out = self.clone();
        for ((e, m), c) in &other.terms {
            out.add_term(e.clone(), *m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polyvector) -> Result<Polyvector, DeformationError> {
        self.try_add(&other.scale(&Rat::from_int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Polyvector {
        let mut out = Polyvector::zero(&self.vars);
        for ((e, m), v) in &self.terms {
            out.add_term(e.clone(), *m, v * c);
        }
        out
    }

    /// The graded-commutative product.
    pub fn try_mul(&self, other: &Polyvector) -> Result<Polyvector, DeformationError> {
        self.check(other)?;
        let mut out = Polyvector::zero(&self.vars);
        for ((e1, m1), c1) in &self.terms {
            for ((e2, m2), c2) in &other.terms {
                let Some(neg) = merge_sign(*m1, *m2) else {
                    continue;
                };
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                out.add_term(e, m1 | m2, if neg { -c } else { c });
            }
        }
        Ok(out)
    }

    /// `∂/∂xᵢ`.
    pub fn derivative_x(&self, i: usize) -> Polyvector {
        let mut out = Polyvector::zero(&self.vars);
        for ((e, m), c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, *m, c * &Rat::from_int(e[i] as i64));
        }
        out
    }

    /// `∂⃗/∂θᵢ`, acting from the left.
    pub fn left_theta(&self, i: usize) -> Polyvector {
        self.theta_derivative(i, popcount_below)
    }

    /// `∂⃖/∂θᵢ`, acting from the right.
    pub fn right_theta(&self, i: usize) -> Polyvector {
        self.theta_derivative(i, popcount_above)
    }

    fn theta_derivative(&self, i: usize, passes: fn(u32, usize) -> u32) -> Polyvector {
        let mut out = Polyvector::zero(&self.vars);
        for ((e, m), c) in &self.terms {
            if m & (1 << i) == 0 {
                continue;
            }
            let neg = passes(*m, i) % 2 == 1;
            out.add_term(e.clone(), m & !(1 << i), if neg { -c } else { c.clone() });
        }
        out
    }
}

impl fmt::Display for Polyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, ((e, m), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let mono = Poly::monomial(&self.vars, e.clone(), c.clone());
            write!(f, "({mono})")?;
            if *m != 0 {
                f.write_str(" θ(")?;
                let names: Vec<&str> = (0..self.vars.len())
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| self.vars.names()[i].as_str())
                    .collect();
                write!(f, "{})", names.join(","))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn schouten_bracket(p: &Polyvector, q: &Polyvector) -> Result<Polyvector, DeformationError> {
    p.check(q)?;
    let mut out = Polyvector::zero(&p.vars);
    for i in 0..p.vars.len() {
        let a = p.right_theta(i).try_mul(&q.derivative_x(i))?;
        let b = p.derivative_x(i).try_mul(&q.left_theta(i))?;
        out = out.try_add(&a)?.try_sub(&b)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonReport {
    pub passed: bool,
    /// `[P, P]`; zero exactly when the check passes.
    pub obstruction: Polyvector,
}

/// `[P, P] = 0` for a bivector `P`.
pub fn poisson_bivector_check(p: &Polyvector) -> Result<PoissonReport, DeformationError> {
    if !p.is_zero() && p.exterior_degree() != Some(2) {
        return Err(DeformationError::NotBivector);
    }
    let obstruction = schouten_bracket(p, p)?;
    Ok(PoissonReport {
        passed: obstruction.is_zero(),
        obstruction,
    })
}

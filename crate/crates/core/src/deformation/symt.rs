//! Truncated models of polynomial functions on a cotangent fibre: monomials
//! `x^α π^β` with `p = |β|` the symmetric power, under the Poisson bracket
//!
//! `{f, g} = Σᵢ (∂f/∂πᵢ · ∂g/∂xᵢ − ∂f/∂xᵢ · ∂g/∂πᵢ)`.
//!
//! The retained window is `min_p ≤ p ≤ max_p`, `|α| ≤ max_deg` and
//! `2 ≤ |α| + p ≤ K`; the dropped monomials must form an ideal so that the
//! projected bracket is again a Lie bracket. `K` starts at `max_p + max_deg`
//! and is lowered until that holds. With two charts the Lie algebra is
//! tensored with [`Cdga::two_chart`], whose degree is the Čech degree `q`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::models::{current_algebra, Cdga, LieAlgebra};
use super::{DGLAModel, DeformationError};
use crate::exactlin::{Exponent, Poly, Rat, Vars};

/// Variables `x₁..x_m, π₁..π_m`, named `x, p` when `m = 1`.
pub fn phase_space_vars(m: usize) -> Vars {
    if m == 1 {
        return Vars::new(["x", "p"]);
    }
    let xs = (1..=m).map(|i| format!("x{i}"));
    let ps = (1..=m).map(|i| format!("p{i}"));
    Vars::new(xs.chain(ps))
}

/// The Poisson bracket on polynomials over [`phase_space_vars`]-style
/// variables (first half positions, second half momenta).
pub fn poisson_bracket(f: &Poly, g: &Poly) -> Result<Poly, DeformationError> {
    let vars = f.vars();
    if g.vars() != vars || !vars.len().is_multiple_of(2) {
        return Err(DeformationError::VariableMismatch);
    }
    let m = vars.len() / 2;
    let mut out = Poly::zero(vars);
    for i in 0..m {
        out = &out + &(&f.derivative(m + i) * &g.derivative(i));
        out = &out - &(&f.derivative(i) * &g.derivative(m + i));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymTBounds {
    pub m: usize,
    pub min_p: u32,
    pub max_p: u32,
    pub max_deg: u32,
    pub charts: u8,
}

impl SymTBounds {
    /// Symmetric powers `p ≥ 2`.
    pub fn new(m: usize, max_p: u32, max_deg: u32, charts: u8) -> Self {
        SymTBounds {
            m,
            min_p: 2,
            max_p,
            max_deg,
            charts,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SymTModel {
    bounds: SymTBounds,
    cutoff: u32,
    monomials: Vec<(Exponent, Exponent)>,
    chart: Cdga,
    labels: Vec<(i32, u32)>,
}

fn in_window(b: &SymTBounds, cutoff: u32, a: u32, p: u32) -> bool {
    p >= b.min_p && p <= b.max_p && a <= b.max_deg && a + p >= 2 && a + p <= cutoff
}

/// Whether bracketing a retained monomial with a dropped one can land back
/// in the window, judged on `(|α|, p)` labels. Dropped monomials with
/// `p > max_p` or `|α| + p > K` only produce dropped results, so only the
/// `|α| > max_deg` ones need checking.
fn window_is_closed(b: &SymTBounds, cutoff: u32) -> bool {
    for a_g in b.max_deg + 1..=cutoff {
        for p_g in b.min_p..=b.max_p {
            if a_g + p_g > cutoff {
                continue;
            }
            for a_f in 0..=b.max_deg {
                for p_f in b.min_p..=b.max_p {
                    if !in_window(b, cutoff, a_f, p_f) || a_f + a_g == 0 || p_f + p_g == 0 {
                        continue;
                    }
                    if in_window(b, cutoff, a_f + a_g - 1, p_f + p_g - 1) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All exponent vectors of length `n` with entries summing to `total`.
fn compositions(n: usize, total: u32) -> Vec<Exponent> {
    if n == 0 {
        return if total == 0 {
            alloc::vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn build_sym_t_model(bounds: SymTBounds) -> Result<SymTModel, DeformationError> {
    let too_small = |reason| Err(DeformationError::BoundsTooSmall { reason });
    if bounds.m == 0 {
        return too_small("m must be at least 1");
    }
    if bounds.min_p == 0 || bounds.max_p < bounds.min_p {
        return too_small("no symmetric power in range");
    }
    let chart = match bounds.charts {
        1 => Cdga::point(),
        2 => Cdga::two_chart(),
        _ => return too_small("charts must be 1 or 2"),
    };
    let mut cutoff = bounds.max_p + bounds.max_deg;
    while !window_is_closed(&bounds, cutoff) {
        cutoff -= 1;
    }
    let mut monomials = Vec::new();
    for p in bounds.min_p..=bounds.max_p {
        for a in 0..=bounds.max_deg {
            if !in_window(&bounds, cutoff, a, p) {
                continue;
            }
            for alpha in compositions(bounds.m, a) {
                for beta in compositions(bounds.m, p) {
                    monomials.push((alpha.clone(), beta));
                }
            }
        }
    }
    if monomials.is_empty() {
        return too_small("window is empty");
    }
    let mut labels = Vec::new();
    for (_, beta) in &monomials {
        let p: u32 = beta.iter().sum();
        for q in &chart.degrees {
            labels.push((*q, p));
        }
    }
    Ok(SymTModel {
        bounds,
        cutoff,
        monomials,
        chart,
        labels,
    })
}

impl SymTModel {
    pub fn bounds(&self) -> &SymTBounds {
        &self.bounds
    }

    /// The total degree cutoff `K` that was settled on.
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn window_size(&self) -> usize {
        self.monomials.len()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `(q, p)` for each basis element of [`SymTModel::dgla`], in order.
    pub fn labels(&self) -> &[(i32, u32)] {
        &self.labels
    }

    /// The weight `q + 2p` of basis element `i`.
    pub fn physical_degree(&self, i: usize) -> i32 {
        let (q, p) = self.labels[i];
        q + 2 * p as i32
    }

    /// Basis elements with `q + 2p = total` and `p ≥ min_p`.
    pub fn label_count(&self, total: i32, min_p: u32) -> usize {
        self.labels
            .iter()
            .filter(|&&(q, p)| p >= min_p && q + 2 * p as i32 == total)
            .count()
    }

    pub fn monomial(&self, i: usize) -> Poly {
        let (alpha, beta) = &self.monomials[i];
        let mut e = alpha.clone();
        e.extend_from_slice(beta);
        Poly::monomial(&phase_space_vars(self.bounds.m), e, Rat::one())
    }

    /// The window with the projected Poisson bracket.
    pub fn lie_algebra(&self) -> LieAlgebra {
        let index: BTreeMap<(&Exponent, &Exponent), usize> = self
            .monomials
            .iter()
            .enumerate()
            .map(|(i, (a, b))| ((a, b), i))
            .collect();
        let m = self.bounds.m;
        let mut bracket = Vec::new();
        for (i, (a, b)) in self.monomials.iter().enumerate() {
            for (j, (c, d)) in self.monomials.iter().enumerate() {
                let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
                for t in 0..m {
                    let coef = b[t] as i64 * c[t] as i64 - a[t] as i64 * d[t] as i64;
                    if coef == 0 {
                        continue;
                    }
                    let mut alpha: Exponent = a.iter().zip(c).map(|(x, y)| x + y).collect();
                    let mut beta: Exponent = b.iter().zip(d).map(|(x, y)| x + y).collect();
                    alpha[t] -= 1;
                    beta[t] -= 1;
                    if let Some(&k) = index.get(&(&alpha, &beta)) {
                        *terms.entry(k).or_insert(0) += coef;
                    }
                }
                for (k, c) in terms {
                    if c != 0 {
                        bracket.push((i, j, k, Rat::from_int(c)));
                    }
                }
            }
        }
        LieAlgebra {
            names: (0..self.monomials.len())
                .map(|i| self.monomial(i).to_string())
                .collect(),
            bracket,
        }
    }

    /// The dg Lie algebra `window ⊗ A`, with `A` the chart algebra.
    pub fn dgla(&self) -> Result<DGLAModel, DeformationError> {
        current_algebra(&self.lie_algebra(), &self.chart)
    }
}

/// Basis elements with `q + 2p = 3` and `p ≥ 2`.
pub fn degree3_solution_space(model: &SymTModel) -> usize {
    model.label_count(3, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{mc_residual, DGLAElement};
    use alloc::sync::Arc;

    fn p1(s: &str) -> Poly {
        Poly::parse(&phase_space_vars(1), s).unwrap()
    }

    #[test]
    fn canonical_relations() {
        assert_eq!(poisson_bracket(&p1("x*p"), &p1("x^2")).unwrap(), p1("2x^2"));
        assert_eq!(poisson_bracket(&p1("p"), &p1("x")).unwrap(), p1("1"));
        assert!(poisson_bracket(&p1("x"), &p1("x")).unwrap().is_zero());
        let v = phase_space_vars(2);
        let x1 = Poly::var(&v, 0);
        let x2 = Poly::var(&v, 1);
        let p1v = Poly::var(&v, 2);
        let p2v = Poly::var(&v, 3);
        assert!(poisson_bracket(&p1v, &x2).unwrap().is_zero());
        assert!(poisson_bracket(&p1v, &p2v).unwrap().is_zero());
        assert_eq!(poisson_bracket(&p2v, &x2).unwrap(), Poly::one(&v));
        assert!(poisson_bracket(&x1, &x2).unwrap().is_zero());
    }

    #[test]
    fn small_models_are_dglas() {
        for bounds in [
            SymTBounds::new(1, 3, 2, 1),
            SymTBounds::new(1, 3, 2, 2),
            SymTBounds::new(2, 2, 1, 2),
            SymTBounds {
                min_p: 1,
                ..SymTBounds::new(1, 2, 2, 2)
            },
        ] {
            let model = build_sym_t_model(bounds).unwrap();
            model.dgla().unwrap();
        }
    }

    #[test]
    fn projected_bracket_matches_poisson_inside_window() {
        let model = build_sym_t_model(SymTBounds::new(1, 4, 3, 1)).unwrap();
        let l = model.lie_algebra();
        let names: Vec<_> = (0..model.window_size()).map(|i| model.monomial(i)).collect();
        for (i, j, k, c) in &l.bracket {
            let full = poisson_bracket(&names[*i], &names[*j]).unwrap();
            let e = names[*k].terms().keys().next().unwrap();
            assert_eq!(&full.coefficient(e), c);
        }
    }

    #[test]
    fn window_shrinks_until_closed() {
        let model = build_sym_t_model(SymTBounds::new(1, 4, 6, 1)).unwrap();
        assert_eq!(model.cutoff(), 8);
        assert!(matches!(
            build_sym_t_model(SymTBounds::new(1, 1, 3, 1)),
            Err(DeformationError::BoundsTooSmall { .. })
        ));
        assert!(build_sym_t_model(SymTBounds::new(0, 2, 3, 1)).is_err());
        assert!(build_sym_t_model(SymTBounds::new(1, 2, 3, 3)).is_err());
    }

    #[test]
    fn two_chart_differential() {
        let model = build_sym_t_model(SymTBounds::new(1, 2, 1, 2)).unwrap();
        let m = Arc::new(model.dgla().unwrap());
        // basis i*3 + {e0, e1, f}
        let global = DGLAElement::basis(&m, 0).add(&DGLAElement::basis(&m, 1)).unwrap();
        assert!(global.d().is_zero());
        let local = DGLAElement::basis(&m, 0);
        assert_eq!(local.d(), DGLAElement::basis(&m, 2).scale(&Rat::from_int(-1)));
        for i in 0..m.dim() {
            if m.degree(i) == 1 {
                assert!(DGLAElement::basis(&m, i).d().is_zero());
            }
        }
        let beta = DGLAElement::basis(&m, 2).add(&DGLAElement::basis(&m, 5)).unwrap();
        assert!(mc_residual(&beta).is_zero());
    }

    #[test]
    fn label_counts() {
        for charts in [1, 2] {
            for m in [1, 2] {
                let model = build_sym_t_model(SymTBounds::new(m, 4, 6, charts)).unwrap();
                assert_eq!(degree3_solution_space(&model), 0);
            }
        }
        let relaxed = build_sym_t_model(SymTBounds {
            min_p: 1,
            ..SymTBounds::new(1, 3, 2, 2)
        })
        .unwrap();
        let q1p1 = relaxed.labels().iter().filter(|&&l| l == (1, 1)).count();
        assert!(q1p1 > 0);
        assert_eq!(relaxed.label_count(3, 1), q1p1);
        let q1p2 = relaxed.labels().iter().filter(|&&l| l == (1, 2)).count();
        assert_eq!(relaxed.label_count(5, 2), q1p2);
    }
}

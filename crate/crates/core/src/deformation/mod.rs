//! Differential graded Lie algebras and the Maurer-Cartan equation.
//!
//! Conventions, used everywhere in this module:
//!
//! - `d` has degree `+1`, the bracket degree `0`;
//! - antisymmetry `[x, y] = −(−1)^{|x||y|} [y, x]`;
//! - Jacobi `[x, [y, z]] = [[x, y], z] + (−1)^{|x||y|} [y, [x, z]]`;
//! - Leibniz `d[x, y] = [dx, y] + (−1)^{|x|} [x, dy]`;
//! - the Maurer-Cartan residual of `β` is `dβ + ½[β, β]`;
//! - the infinitesimal gauge action of a degree 0 element `a` is
//!   `β ↦ β + ε(da + [β, a])` with `ε² = 0`.

mod models;
mod polyvector;
mod symt;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::exactlin::{Rat, RatMatrix};

pub use models::{current_algebra, random_model, Cdga, LieAlgebra};
pub use polyvector::{poisson_bivector_check, schouten_bracket, PoissonReport, Polyvector};
pub use symt::{build_sym_t_model, degree3_solution_space, phase_space_vars, poisson_bracket, SymTBounds, SymTModel};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DeformationError {
    #[error("basis index {index} out of range in {what}")]
    IndexOutOfRange { what: &'static str, index: usize },
    #[error("d e{i} has a component on e{j} of the wrong degree")]
    DifferentialDegree { i: usize, j: usize },
    #[error("[e{i}, e{j}] has a component on e{k} of the wrong degree")]
    BracketDegree { i: usize, j: usize, k: usize },
    #[error("d² e{i} ≠ 0")]
    NotSquareZero { i: usize },
    #[error("bracket is not graded antisymmetric on (e{i}, e{j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("Jacobi identity fails on (e{i}, e{j}, e{k})")]
    JacobiFailure { i: usize, j: usize, k: usize },
    #[error("Leibniz rule fails on (e{i}, e{j})")]
    LeibnizFailure { i: usize, j: usize },
    #[error("expected an element of degree {expected}, found {found}")]
    DegreeMismatch { expected: i32, found: ElementDegree },
    #[error("elements belong to different models")]
    ModelMismatch,
    #[error("expected {expected} coefficients, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("truncation bounds leave no consistent window: {reason}")]
    BoundsTooSmall { reason: &'static str },
    #[error("polyvectors use different variables")]
    VariableMismatch,
    #[error("expected a polyvector of pure exterior degree 2")]
    NotBivector,
    #[error("basis change does not preserve degrees or is singular")]
    BadBasisChange,
}

/// Unvalidated model data; `d` and `bracket` are sparse coefficient lists,
/// repeated entries add up.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawDgla {
    pub basis: Vec<(String, i32)>,
    /// `(i, j, c)`: `d eᵢ` has coefficient `c` on `eⱼ`.
    pub d: Vec<(usize, usize, Rat)>,
    /// `(i, j, k, c)`: `[eᵢ, eⱼ]` has coefficient `c` on `eₖ`.
    pub bracket: Vec<(usize, usize, usize, Rat)>,
}

type Sparse = Vec<(usize, Rat)>;

fn collect_sparse(entries: impl IntoIterator<Item = (usize, Rat)>) -> Sparse {
    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
    for (k, c) in entries {
        *acc.entry(k).or_insert_with(Rat::zero) += &c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// A validated finite-dimensional dg Lie algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct DGLAModel {
    names: Vec<String>,
    degrees: Vec<i32>,
    d: Vec<Sparse>,
    bracket: Vec<BTreeMap<usize, Sparse>>,
}

fn sign(odd: bool) -> Rat {
    if odd {
        Rat::from_int(-1)
    } else {
        Rat::one()
    }
}

fn is_odd(deg: i32) -> bool {
    deg.rem_euclid(2) == 1
}

impl DGLAModel {
    fn from_raw_unchecked(raw: &RawDgla) -> Result<Self, DeformationError> {
        let n = raw.basis.len();
        let check = |what, index: usize| {
            if index < n {
                Ok(())
            } else {
                Err(DeformationError::IndexOutOfRange { what, index })
            }
        };
        let mut d_rows: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); n];
        for (i, j, c) in &raw.d {
            check("d", *i)?;
            check("d", *j)?;
            d_rows[*i].push((*j, c.clone()));
        }
        let mut br: Vec<BTreeMap<usize, Vec<(usize, Rat)>>> = vec![BTreeMap::new(); n];
        for (i, j, k, c) in &raw.bracket {
            check("bracket", *i)?;
            check("bracket", *j)?;
            check("bracket", *k)?;
            br[*i].entry(*j).or_default().push((*k, c.clone()));
        }
        Ok(DGLAModel {
            names: raw.basis.iter().map(|(s, _)| s.clone()).collect(),
            degrees: raw.basis.iter().map(|(_, g)| *g).collect(),
            d: d_rows.into_iter().map(collect_sparse).collect(),
            bracket: br
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|(j, v)| (j, collect_sparse(v)))
                        .filter(|(_, v)| !v.is_empty())
                        .collect()
                })
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    /// Basis indices of the given degree.
    pub fn basis_of_degree(&self, deg: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == deg).collect()
    }

    pub fn to_raw(&self) -> RawDgla {
        let mut raw = RawDgla {
            basis: self.names.iter().cloned().zip(self.degrees.iter().copied()).collect(),
            ..RawDgla::default()
        };
        for (i, row) in self.d.iter().enumerate() {
            for (j, c) in row {
                raw.d.push((i, *j, c.clone()));
            }
        }
        for (i, row) in self.bracket.iter().enumerate() {
            for (j, v) in row {
                for (k, c) in v {
                    raw.bracket.push((i, *j, *k, c.clone()));
                }
            }
        }
        raw
    }

    /// `d v` for a coefficient vector.
    pub fn apply_d(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, c) in &self.d[i] {
                out[*j] += &(vi * c);
            }
        }
        out
    }

    /// `[u, v]`, bilinear in coefficient vectors.
    pub fn apply_bracket(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, terms) in &self.bracket[i] {
                let vj = &v[*j];
                if vj.is_zero() {
                    continue;
                }
                let s = ui * vj;
                for (k, c) in terms {
                    out[*k] += &(&s * c);
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim()];
        v[i] = Rat::one();
        v
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        if let Some(terms) = self.bracket[i].get(&j) {
            for (k, c) in terms {
                out[*k] = c.clone();
            }
        }
        out
    }

    fn validate(&self) -> Result<(), DeformationError> {
        let n = self.dim();
        let deg = &self.degrees;
        for i in 0..n {
            for (j, _) in &self.d[i] {
                if deg[*j] != deg[i] + 1 {
                    return Err(DeformationError::DifferentialDegree { i, j: *j });
                }
            }
            for (j, terms) in &self.bracket[i] {
                for (k, _) in terms {
                    if deg[*k] != deg[i] + deg[*j] {
                        return Err(DeformationError::BracketDegree { i, j: *j, k: *k });
                    }
                }
            }
        }
        for i in 0..n {
            let dd = self.apply_d(&self.apply_d(&self.unit(i)));
            if dd.iter().any(|c| !c.is_zero()) {
                return Err(DeformationError::NotSquareZero { i });
            }
        }
        for i in 0..n {
            for j in i..n {
                let s = sign(is_odd(deg[i]) && is_odd(deg[j]));
                let a = self.bracket_basis(i, j);
                let b = self.bracket_basis(j, i);
                if a.iter().zip(&b).any(|(x, y)| !(x + &(&s * y)).is_zero()) {
                    return Err(DeformationError::NotAntisymmetric { i, j });
                }
            }
        }
        // with antisymmetry in place the Jacobiator is graded antisymmetric
        // too, so sorted triples suffice
        let brackets: Vec<Vec<Vec<Rat>>> = (0..n)
            .map(|i| (0..n).map(|j| self.bracket_basis(i, j)).collect())
            .collect();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let lhs = self.apply_bracket(&self.unit(i), &brackets[j][k]);
                    let r1 = self.apply_bracket(&brackets[i][j], &self.unit(k));
                    let r2 = self.apply_bracket(&self.unit(j), &brackets[i][k]);
                    let s = sign(is_odd(deg[i]) && is_odd(deg[j]));
                    let bad = (0..n).any(|t| lhs[t] != &r1[t] + &(&s * &r2[t]));
                    if bad {
                        return Err(DeformationError::JacobiFailure { i, j, k });
                    }
                }
            }
        }
        let d_units: Vec<Vec<Rat>> = (0..n).map(|i| self.apply_d(&self.unit(i))).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.apply_d(&brackets[i][j]);
                let a = self.apply_bracket(&d_units[i], &self.unit(j));
                let b = self.apply_bracket(&self.unit(i), &d_units[j]);
                let s = sign(is_odd(deg[i]));
                if (0..n).any(|t| lhs[t] != &a[t] + &(&s * &b[t])) {
                    return Err(DeformationError::LeibnizFailure { i, j });
                }
            }
        }
        Ok(())
    }

    /// The same algebra in the basis `f_a = Σᵢ P[i][a] eᵢ`; `P` must be
    /// invertible and only mix basis vectors of equal degree.
    pub fn change_basis(&self, p: &RatMatrix) -> Result<DGLAModel, DeformationError> {
        let n = self.dim();
        if (p.rows(), p.cols()) != (n, n) {
            return Err(DeformationError::BadBasisChange);
        }
        for i in 0..n {
            for a in 0..n {
                if !p.get(i, a).is_zero() && self.degrees[i] != self.degrees[a] {
                    return Err(DeformationError::BadBasisChange);
                }
            }
        }
        let q = p.inverse().map_err(|_| DeformationError::BadBasisChange)?;
        // old coordinates v ↦ new coordinates q v
        let to_new = |v: &[Rat]| q.mul_vec(v).expect("square");
        let mut raw = RawDgla {
            basis: self.names.iter().cloned().zip(self.degrees.iter().copied()).collect(),
            ..RawDgla::default()
        };
        let cols: Vec<Vec<Rat>> = (0..n).map(|a| p.column(a)).collect();
        for a in 0..n {
            for (b, c) in to_new(&self.apply_d(&cols[a])).into_iter().enumerate() {
                if !c.is_zero() {
                    raw.d.push((a, b, c));
                }
            }
            for b in 0..n {
                let br = to_new(&self.apply_bracket(&cols[a], &cols[b]));
                for (k, c) in br.into_iter().enumerate() {
                    if !c.is_zero() {
                        raw.bracket.push((a, b, k, c));
                    }
                }
            }
        }
        validate_dgla(&raw)
    }
}

impl fmt::Debug for DGLAModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DGLAModel")
            .field("names", &self.names)
            .field("degrees", &self.degrees)
            .finish_non_exhaustive()
    }
}

/// Checks degrees, `d² = 0`, antisymmetry, Jacobi and Leibniz in that order
/// and reports the first failure with its basis tuple.
pub fn validate_dgla(raw: &RawDgla) -> Result<DGLAModel, DeformationError> {
    let m = DGLAModel::from_raw_unchecked(raw)?;
    m.validate()?;
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementDegree {
    Zero,
    Homogeneous(i32),
    Mixed,
}

impl fmt::Display for ElementDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementDegree::Zero => f.write_str("zero"),
            ElementDegree::Homogeneous(d) => write!(f, "{d}"),
            ElementDegree::Mixed => f.write_str("mixed"),
        }
    }
}

fn degree_of(model: &DGLAModel, v: &[Rat]) -> ElementDegree {
    let mut found = None;
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match found {
            None => found = Some(model.degrees[i]),
            Some(d) if d != model.degrees[i] => return ElementDegree::Mixed,
            _ => {}
        }
    }
    found.map_or(ElementDegree::Zero, ElementDegree::Homogeneous)
}

#[derive(Clone, PartialEq, Eq)]
pub struct DGLAElement {
    model: Arc<DGLAModel>,
    coeffs: Vec<Rat>,
}

impl DGLAElement {
    pub fn new(model: &Arc<DGLAModel>, coeffs: Vec<Rat>) -> Result<Self, DeformationError> {
        if coeffs.len() != model.dim() {
            return Err(DeformationError::LengthMismatch {
                expected: model.dim(),
                found: coeffs.len(),
            });
        }
        Ok(DGLAElement {
            model: model.clone(),
            coeffs,
        })
    }

    pub fn zero(model: &Arc<DGLAModel>) -> Self {
        DGLAElement {
            model: model.clone(),
            coeffs: vec![Rat::zero(); model.dim()],
        }
    }

    pub fn basis(model: &Arc<DGLAModel>, i: usize) -> Self {
        DGLAElement {
            model: model.clone(),
            coeffs: model.unit(i),
        }
    }

    pub fn model(&self) -> &Arc<DGLAModel> {
        &self.model
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn degree(&self) -> ElementDegree {
        degree_of(&self.model, &self.coeffs)
    }

    fn same_model(&self, other: &DGLAElement) -> Result<(), DeformationError> {
        if Arc::ptr_eq(&self.model, &other.model) || self.model == other.model {
            Ok(())
        } else {
            Err(DeformationError::ModelMismatch)
        }
    }

    fn with(&self, coeffs: Vec<Rat>) -> DGLAElement {
        DGLAElement {
            model: self.model.clone(),
            coeffs,
        }
    }

    pub fn d(&self) -> DGLAElement {
        self.with(self.model.apply_d(&self.coeffs))
    }

    pub fn bracket(&self, other: &DGLAElement) -> Result<DGLAElement, DeformationError> {
        self.same_model(other)?;
        Ok(self.with(self.model.apply_bracket(&self.coeffs, &other.coeffs)))
    }

    pub fn add(&self, other: &DGLAElement) -> Result<DGLAElement, DeformationError> {
        self.same_model(other)?;
        Ok(self.with(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect()))
    }

    pub fn scale(&self, c: &Rat) -> DGLAElement {
        self.with(self.coeffs.iter().map(|a| a * c).collect())
    }
}

impl fmt::Debug for DGLAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}·{}", self.model.names[i])?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `dβ + ½[β, β]`.
pub fn mc_residual(beta: &DGLAElement) -> DGLAElement {
    let m = &beta.model;
    let d = m.apply_d(&beta.coeffs);
    let half = Rat::new(1, 2);
    let b = m.apply_bracket(&beta.coeffs, &beta.coeffs);
    beta.with(d.iter().zip(&b).map(|(x, y)| x + &(&half * y)).collect())
}

/// `re + ε·eps` with `ε² = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualElement {
    pub re: DGLAElement,
    pub eps: DGLAElement,
}

impl DualElement {
    pub fn new(re: DGLAElement, eps: DGLAElement) -> Result<Self, DeformationError> {
        re.same_model(&eps)?;
        Ok(DualElement { re, eps })
    }

    pub fn pure(re: DGLAElement) -> Self {
        let eps = DGLAElement::zero(&re.model);
        DualElement { re, eps }
    }
}

/// `β + ε(da + [β, a])`; `a` must have degree 0.
pub fn gauge_transform(beta: &DGLAElement, a: &DGLAElement) -> Result<DualElement, DeformationError> {
    beta.same_model(a)?;
    match a.degree() {
        ElementDegree::Zero | ElementDegree::Homogeneous(0) => {}
        found => return Err(DeformationError::DegreeMismatch { expected: 0, found }),
    }
    let eps = a.d().add(&beta.bracket(a)?)?;
    Ok(DualElement { re: beta.clone(), eps })
}

/// The residual extended to dual numbers:
/// `R(x + εy) = R(x) + ε(dy + ½([x, y] + [y, x]))`.
pub fn mc_residual_dual(x: &DualElement) -> DualElement {
    let m = &x.re.model;
    let re = mc_residual(&x.re);
    let dy = m.apply_d(&x.eps.coeffs);
    let xy = m.apply_bracket(&x.re.coeffs, &x.eps.coeffs);
    let yx = m.apply_bracket(&x.eps.coeffs, &x.re.coeffs);
    let half = Rat::new(1, 2);
    let eps = (0..m.dim()).map(|i| &dy[i] + &(&half * &(&xy[i] + &yx[i]))).collect();
    DualElement {
        eps: x.re.with(eps),
        re,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2_raw(flip: bool) -> RawDgla {
        let r = |n| Rat::from_int(n);
        let he = if flip { -2 } else { 2 };
        RawDgla {
            basis: vec![("e".into(), 0), ("f".into(), 0), ("h".into(), 0)],
            d: vec![],
            bracket: vec![
                (0, 1, 2, r(1)),
                (1, 0, 2, r(-1)),
                (2, 0, 0, r(he)),
                (0, 2, 0, r(-he)),
                (2, 1, 1, r(-2)),
                (1, 2, 1, r(2)),
            ],
        }
    }

    #[test]
    fn validates_sl2() {
        assert!(validate_dgla(&sl2_raw(false)).is_ok());
        assert!(matches!(
            validate_dgla(&sl2_raw(true)),
            Err(DeformationError::JacobiFailure { .. })
        ));
    }

    #[test]
    fn abelian_model_residual_is_differential() {
        let raw = RawDgla {
            basis: vec![("a".into(), 0), ("b".into(), 1), ("c".into(), 2)],
            d: vec![(0, 1, Rat::one()), (1, 2, Rat::zero())],
            bracket: vec![],
        };
        let m = Arc::new(validate_dgla(&raw).unwrap());
        let beta = DGLAElement::new(&m, vec![Rat::zero(), Rat::from_int(3), Rat::zero()]).unwrap();
        assert_eq!(mc_residual(&beta), beta.d());
        assert!(mc_residual(&DGLAElement::zero(&m)).is_zero());
    }

    #[test]
    fn reports_structural_failures() {
        let mut raw = RawDgla {
            basis: vec![("a".into(), 0), ("b".into(), 1), ("c".into(), 2)],
            d: vec![(0, 1, Rat::one()), (1, 2, Rat::one())],
            bracket: vec![],
        };
        assert_eq!(validate_dgla(&raw), Err(DeformationError::NotSquareZero { i: 0 }));
        raw.d = vec![(0, 2, Rat::one())];
        assert_eq!(
            validate_dgla(&raw),
            Err(DeformationError::DifferentialDegree { i: 0, j: 2 })
        );
        raw.d = vec![];
        raw.bracket = vec![(1, 1, 2, Rat::one())];
        assert!(validate_dgla(&raw).is_ok());
        raw.bracket = vec![(0, 1, 1, Rat::one())];
        assert_eq!(
            validate_dgla(&raw),
            Err(DeformationError::NotAntisymmetric { i: 0, j: 1 })
        );
        let leibniz = RawDgla {
            basis: vec![("a".into(), 0), ("a2".into(), 0), ("b".into(), 1)],
            d: vec![(0, 2, Rat::one())],
            bracket: vec![(0, 1, 0, Rat::one()), (1, 0, 0, Rat::from_int(-1))],
        };
        assert_eq!(
            validate_dgla(&leibniz),
            Err(DeformationError::LeibnizFailure { i: 0, j: 1 })
        );
        raw.d = vec![(5, 1, Rat::one())];
        assert!(matches!(
            validate_dgla(&raw),
            Err(DeformationError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn gauge_requires_degree_zero() {
        let m = Arc::new(
            validate_dgla(&RawDgla {
                basis: vec![("a".into(), 0), ("b".into(), 1)],
                d: vec![(0, 1, Rat::one())],
                bracket: vec![],
            })
            .unwrap(),
        );
        let beta = DGLAElement::basis(&m, 1);
        let err = gauge_transform(&beta, &beta).unwrap_err();
        assert_eq!(
            err,
            DeformationError::DegreeMismatch {
                expected: 0,
                found: ElementDegree::Homogeneous(1)
            }
        );
        let g = gauge_transform(&beta, &DGLAElement::zero(&m)).unwrap();
        assert_eq!(g.re, beta);
        assert!(g.eps.is_zero());
        let a = DGLAElement::basis(&m, 0);
        let g = gauge_transform(&DGLAElement::zero(&m), &a).unwrap();
        assert_eq!(g.eps, a.d());
        assert!(mc_residual_dual(&g).eps.is_zero());
    }

    #[test]
    fn basis_change_round_trip() {
        let m = validate_dgla(&sl2_raw(false)).unwrap();
        let p = RatMatrix::from_i64(3, 3, &[1, 1, 0, 0, 1, 2, 1, 0, 1]);
        let m2 = m.change_basis(&p).unwrap();
        let back = m2.change_basis(&p.inverse().unwrap()).unwrap();
        assert_eq!(back, m);
    }
}

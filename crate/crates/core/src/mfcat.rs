//! Matrix factorizations over a polynomial ring with rational coefficients.
//!
//! An object is a free ℤ₂-graded module with basis ordered even first, then
//! odd, and an odd matrix `D` with `D² = (w + c)·Id`. Morphism spaces are the
//! cohomology of
//!
//! `D₁₂(φ) = D_B·φ − (−1)^{|φ|} φ·D_A`,
//!
//! computed on matrices whose entries have total degree below a truncation
//! bound. A bound is accepted once doubling it leaves the dimensions fixed.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::exactlin::{
    kernel_basis, primitive, quotient_dim, solve, Exponent, LinError, Poly, PolyMatrix, Rat, RatMatrix, Subspace, Vars,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Parity of a product or composite.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// The potential difference `W₂ − W₁` shared by the objects in one Hom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    w: Poly,
}

impl Potential {
    pub fn new(w: Poly) -> Self {
        Potential { w }
    }

    pub fn poly(&self) -> &Poly {
        &self.w
    }

    pub fn vars(&self) -> &Vars {
        self.w.vars()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    EvenEven,
    OddOdd,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Block::EvenEven => "even→even",
            Block::OddOdd => "odd→odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MfError {
    #[error("D is not odd: nonzero {block} entry at ({row}, {col})")]
    NotOdd { block: Block, row: usize, col: usize },
    #[error("D² ≠ (w + c)·Id at ({row}, {col}): expected {expected}, found {found}")]
    SquareMismatch {
        row: usize,
        col: usize,
        expected: Poly,
        found: Poly,
    },
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("the factorizations have different potentials")]
    PotentialMismatch,
    #[error(
        "hom dimensions did not stabilize: {first:?} at truncation {truncation}, \
         {doubled:?} at truncation {}", 2 * truncation
    )]
    NotStabilized {
        truncation: usize,
        first: (usize, usize),
        doubled: (usize, usize),
    },
    #[error("morphisms are not composable: target and source objects differ")]
    NotComposable,
    #[error("matrix has a nonzero entry of the wrong parity at ({row}, {col})")]
    WrongParity { row: usize, col: usize },
    #[error("representative is not a cocycle")]
    NotCocycle,
    #[error("class does not belong to this hom table")]
    ForeignClass,
    #[error("associator witness failed")]
    WitnessFailed,
}

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixFactorization {
    rank_even: usize,
    rank_odd: usize,
    d: PolyMatrix,
    c: Rat,
    potential: Potential,
}

impl MatrixFactorization {
    pub fn new(
        rank_even: usize,
        rank_odd: usize,
        d: PolyMatrix,
        c: Rat,
        potential: Potential,
    ) -> Result<Self, MfError> {
        let n = rank_even + rank_odd;
        if (d.rows(), d.cols()) != (n, n) {
            return Err(LinError::ShapeMismatch {
                expected: (n, n),
                found: (d.rows(), d.cols()),
            }
            .into());
        }
        if d.vars() != potential.vars() {
            return Err(LinError::VariableMismatch.into());
        }
        for i in 0..n {
            for j in 0..n {
                if (i < rank_even) == (j < rank_even) && !d.get(i, j).is_zero() {
                    let block = if i < rank_even { Block::EvenEven } else { Block::OddOdd };
                    return Err(MfError::NotOdd { block, row: i, col: j });
                }
            }
        }
        let sq = d.try_mul(&d)?;
        let diag = potential.poly() + &Poly::constant(d.vars(), c.clone());
        let zero = Poly::zero(d.vars());
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { &diag } else { &zero };
                if sq.get(i, j) != expected {
                    return Err(MfError::SquareMismatch {
                        row: i,
                        col: j,
                        expected: expected.clone(),
                        found: sq.get(i, j).clone(),
                    });
                }
            }
        }
        Ok(MatrixFactorization {
            rank_even,
            rank_odd,
            d,
            c,
            potential,
        })
    }

    pub fn rank_even(&self) -> usize {
        self.rank_even
    }

    pub fn rank_odd(&self) -> usize {
        self.rank_odd
    }

    pub fn rank(&self) -> usize {
        self.rank_even + self.rank_odd
    }

    pub fn d(&self) -> &PolyMatrix {
        &self.d
    }

    pub fn c(&self) -> &Rat {
        &self.c
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn vars(&self) -> &Vars {
        self.d.vars()
    }

    pub fn parity_of(&self, i: usize) -> Parity {
        if i < self.rank_even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The grading operator: `+1` on even basis vectors, `−1` on odd ones.
    pub fn parity_involution(&self) -> RatMatrix {
        let mut s = RatMatrix::identity(self.rank());
        for i in self.rank_even..self.rank() {
            s.set(i, i, Rat::from_int(-1));
        }
        s
    }
}

impl fmt::Debug for MatrixFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MF(rank {}|{}, D = {:?}, c = {}, w = {})",
            self.rank_even,
            self.rank_odd,
            self.d,
            self.c,
            self.potential.poly()
        )
    }
}

pub fn mf_new(
    rank_even: usize,
    rank_odd: usize,
    d: PolyMatrix,
    c: Rat,
    w: Potential,
) -> Result<MatrixFactorization, MfError> {
    MatrixFactorization::new(rank_even, rank_odd, d, c, w)
}

/// The rank (1|1) factorization `D = [[0, f], [g, 0]]` of `w = f·g − c`.
pub fn koszul(f: &Poly, g: &Poly, c: Rat) -> Result<MatrixFactorization, MfError> {
    let vars = f.vars();
    if g.vars() != vars {
        return Err(LinError::VariableMismatch.into());
    }
    let zero = Poly::zero(vars);
    let d = PolyMatrix::new(2, 2, vars, vec![zero.clone(), f.clone(), g.clone(), zero])?;
    let w = &(f * g) - &Poly::constant(vars, c.clone());
    MatrixFactorization::new(1, 1, d, c, Potential::new(w))
}

fn check_pair(a: &MatrixFactorization, b: &MatrixFactorization) -> Result<(), MfError> {
    if a.vars() != b.vars() {
        return Err(LinError::VariableMismatch.into());
    }
    if a.potential != b.potential {
        return Err(MfError::PotentialMismatch);
    }
    Ok(())
}

fn check_parity(
    a: &MatrixFactorization,
    b: &MatrixFactorization,
    phi: &PolyMatrix,
    parity: Parity,
) -> Result<(), MfError> {
    if (phi.rows(), phi.cols()) != (b.rank(), a.rank()) {
        return Err(LinError::ShapeMismatch {
            expected: (b.rank(), a.rank()),
            found: (phi.rows(), phi.cols()),
        }
        .into());
    }
    for r in 0..b.rank() {
        for c in 0..a.rank() {
            if b.parity_of(r).add(a.parity_of(c)) != parity && !phi.get(r, c).is_zero() {
                return Err(MfError::WrongParity { row: r, col: c });
            }
        }
    }
    Ok(())
}

/// `D₁₂(φ) = D_B·φ − (−1)^{|φ|} φ·D_A` for `φ: A → B` of the given parity.
pub fn d12(
    a: &MatrixFactorization,
    b: &MatrixFactorization,
    phi: &PolyMatrix,
    parity: Parity,
) -> Result<PolyMatrix, MfError> {
    if a.vars() != b.vars() || phi.vars() != a.vars() {
        return Err(LinError::VariableMismatch.into());
    }
    check_parity(a, b, phi, parity)?;
    let left = b.d.try_mul(phi)?;
    let right = phi.try_mul(&a.d)?;
    Ok(match parity {
        Parity::Even => left.try_sub(&right)?,
        Parity::Odd => left.try_add(&right)?,
    })
}

/// Monomials of total degree `< bound`, highest degree first.
fn monomials(nvars: usize, bound: u32) -> Vec<Exponent> {
    fn rec(prefix: &mut Exponent, left: usize, budget: u32, out: &mut Vec<Exponent>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for e in (0..=budget).rev() {
            prefix.push(e);
            rec(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if bound == 0 {
        return out;
    }
    for deg in (0..bound).rev() {
        let mut all = Vec::new();
        rec(&mut Vec::new(), nvars, deg, &mut all);
        out.extend(all.into_iter().filter(|e| e.iter().sum::<u32>() == deg));
    }
    out
}

/// Coordinates on matrices `A → B` of one parity with entries of degree
/// `< bound`. Index `mono · positions + pos`, so high degrees come first.
struct Grid {
    positions: Vec<(usize, usize)>,
    pos_index: BTreeMap<(usize, usize), usize>,
    monos: Vec<Exponent>,
    mono_index: BTreeMap<Exponent, usize>,
    rows: usize,
    cols: usize,
    vars: Vars,
}

impl Grid {
    fn new(a: &MatrixFactorization, b: &MatrixFactorization, parity: Parity, bound: u32) -> Self {
        let mut positions = Vec::new();
        for r in 0..b.rank() {
            for c in 0..a.rank() {
                if b.parity_of(r).add(a.parity_of(c)) == parity {
                    positions.push((r, c));
                }
            }
        }
        let monos = monomials(a.vars().len(), bound);
        Grid {
            pos_index: positions.iter().enumerate().map(|(i, &p)| (p, i)).collect(),
            mono_index: monos.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect(),
            positions,
            monos,
            rows: b.rank(),
            cols: a.rank(),
            vars: a.vars().clone(),
        }
    }

    fn len(&self) -> usize {
        self.positions.len() * self.monos.len()
    }

    fn index(&self, pos: (usize, usize), mono: &[u32]) -> Option<usize> {
        let p = self.pos_index.get(&pos)?;
        let m = self.mono_index.get(mono)?;
        Some(m * self.positions.len() + p)
    }

    fn degree(&self, idx: usize) -> u32 {
        self.monos[idx / self.positions.len()].iter().sum()
    }

    fn coords(&self, m: &PolyMatrix) -> Option<Vec<Rat>> {
        let mut v = vec![Rat::zero(); self.len()];
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                for (e, coef) in m.get(r, c).terms() {
                    v[self.index((r, c), e)?] = coef.clone();
                }
            }
        }
        Some(v)
    }

    fn matrix(&self, v: &[Rat]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(self.rows, self.cols, &self.vars);
        for (pi, &(r, c)) in self.positions.iter().enumerate() {
            let terms = self.monos.iter().enumerate().filter_map(|(mi, e)| {
                let coef = &v[mi * self.positions.len() + pi];
                (!coef.is_zero()).then(|| (e.clone(), coef.clone()))
            });
            m.set(r, c, Poly::from_terms(&self.vars, terms));
        }
        m
    }
}

fn add_exp(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Matrix of `D₁₂` from `src` (parity p) to `tgt` (parity p + 1), which must
/// allow degrees up to the source bound plus the degree of the differentials.
fn d12_matrix(a: &MatrixFactorization, b: &MatrixFactorization, parity: Parity, src: &Grid, tgt: &Grid) -> RatMatrix {
    let mut m = RatMatrix::zeros(tgt.len(), src.len());
    let sign = if parity.is_odd() { Rat::one() } else { Rat::from_int(-1) };
    let mut bump = |row: usize, col: usize, v: Rat| {
        let cur = m.get(row, col) + &v;
        m.set(row, col, cur);
    };
    for (mi, e) in src.monos.iter().enumerate() {
        for (pi, &(r, c)) in src.positions.iter().enumerate() {
            let col = mi * src.positions.len() + pi;
            for i in 0..b.rank() {
                for (f, coef) in b.d.get(i, r).terms() {
                    let row = tgt.index((i, c), &add_exp(e, f)).expect("target grid too small");
                    bump(row, col, coef.clone());
                }
            }
            for j in 0..a.rank() {
                for (f, coef) in a.d.get(c, j).terms() {
                    let row = tgt.index((r, j), &add_exp(e, f)).expect("target grid too small");
                    bump(row, col, &sign * coef);
                }
            }
        }
    }
    m
}

fn d_degree(a: &MatrixFactorization, b: &MatrixFactorization) -> u32 {
    a.d.max_degree().unwrap_or(0).max(b.d.max_degree().unwrap_or(0))
}

fn parity_index(p: Parity) -> usize {
    match p {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

/// Truncated cocycles and coboundaries of both parities at one bound.
struct Truncated {
    grids: [Grid; 2],
    cocycles: [Vec<Vec<Rat>>; 2],
    coboundaries: [Vec<Vec<Rat>>; 2],
}

impl Truncated {
    fn compute(a: &MatrixFactorization, b: &MatrixFactorization, bound: u32) -> Self {
        let delta = d_degree(a, b);
        let mut cocycles: [Vec<Vec<Rat>>; 2] = [Vec::new(), Vec::new()];
        let mut coboundaries: [Vec<Vec<Rat>>; 2] = [Vec::new(), Vec::new()];
        for p in [Parity::Even, Parity::Odd] {
            let src = Grid::new(a, b, p, bound);
            let tgt = Grid::new(a, b, p.flip(), bound + delta);
            let m = d12_matrix(a, b, p, &src, &tgt);
            cocycles[parity_index(p)] = kernel_basis(&m);

            // D₁₂(φ) counts as a coboundary at this bound only when it stays
            // below the bound itself
            let high: Vec<usize> = (0..tgt.len()).filter(|&r| tgt.degree(r) >= bound).collect();
            let low_start = high.len();
            let mut mh = RatMatrix::zeros(high.len(), src.len());
            for (i, &r) in high.iter().enumerate() {
                for c in 0..src.len() {
                    mh.set(i, c, m.get(r, c).clone());
                }
            }
            let image = kernel_basis(&mh)
                .into_iter()
                .map(|k| m.mul_vec(&k).expect("shapes agree")[low_start..].to_vec())
                .collect();
            coboundaries[parity_index(p.flip())] = image;
        }
        Truncated {
            grids: [
                Grid::new(a, b, Parity::Even, bound),
                Grid::new(a, b, Parity::Odd, bound),
            ],
            cocycles,
            coboundaries,
        }
    }

    fn dims(&self) -> Result<(usize, usize), MfError> {
        Ok((
            quotient_dim(&self.cocycles[0], &self.coboundaries[0])?,
            quotient_dim(&self.cocycles[1], &self.coboundaries[1])?,
        ))
    }

    /// Cocycles independent modulo coboundaries, each reduced against the
    /// coboundaries and the earlier picks.
    fn representatives(&self, p: Parity) -> Vec<PolyMatrix> {
        let i = parity_index(p);
        let grid = &self.grids[i];
        let mut sub = Subspace::spanned_by(grid.len(), &self.coboundaries[i]);
        let mut out = Vec::new();
        for z in &self.cocycles[i] {
            let r = sub.reduce(z);
            if r.iter().all(Rat::is_zero) {
                continue;
            }
            sub.insert(&r);
            out.push(grid.matrix(&primitive(r)));
        }
        out
    }
}

/// A cohomology class, stored as a cocycle representative.
#[derive(Clone, Debug)]
pub struct MFMorphismClass {
    source: Arc<MatrixFactorization>,
    target: Arc<MatrixFactorization>,
    representative: PolyMatrix,
    parity: Parity,
    truncation_degree: usize,
}

impl MFMorphismClass {
    /// Checks that `representative` has the stated parity and is a cocycle.
    pub fn new(
        source: Arc<MatrixFactorization>,
        target: Arc<MatrixFactorization>,
        representative: PolyMatrix,
        parity: Parity,
        truncation_degree: usize,
    ) -> Result<Self, MfError> {
        if !d12(&source, &target, &representative, parity)?.is_zero() {
            return Err(MfError::NotCocycle);
        }
        Ok(MFMorphismClass {
            source,
            target,
            representative,
            parity,
            truncation_degree,
        })
    }

    pub fn identity(a: Arc<MatrixFactorization>, truncation_degree: usize) -> Self {
        let id = PolyMatrix::identity(a.rank(), a.vars());
        MFMorphismClass {
            source: a.clone(),
            target: a,
            representative: id,
            parity: Parity::Even,
            truncation_degree,
        }
    }

    pub fn source(&self) -> &Arc<MatrixFactorization> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MatrixFactorization> {
        &self.target
    }

    pub fn representative(&self) -> &PolyMatrix {
        &self.representative
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn truncation_degree(&self) -> usize {
        self.truncation_degree
    }

    /// Whether the representative is `D₁₂` of something within the class's
    /// truncation (raised if the representative itself needs more room).
    pub fn is_exact(&self) -> Result<bool, MfError> {
        Ok(exact_preimage(
            &self.source,
            &self.target,
            &self.representative,
            self.parity,
            self.truncation_degree,
        )?
        .is_some())
    }
}

/// The composite `g ∘ f`.
pub fn mf_compose(g: &MFMorphismClass, f: &MFMorphismClass) -> Result<MFMorphismClass, MfError> {
    if f.target != g.source {
        return Err(MfError::NotComposable);
    }
    let rep = g.representative.try_mul(&f.representative)?;
    MFMorphismClass::new(
        f.source.clone(),
        g.target.clone(),
        rep,
        g.parity.add(f.parity),
        g.truncation_degree.max(f.truncation_degree),
    )
}

/// Some `h` of the opposite parity with `D₁₂(h) = φ`, searching entries of
/// degree below `max(truncation, deg φ + 1)`.
pub fn exact_preimage(
    a: &MatrixFactorization,
    b: &MatrixFactorization,
    phi: &PolyMatrix,
    parity: Parity,
    truncation: usize,
) -> Result<Option<PolyMatrix>, MfError> {
    check_pair(a, b)?;
    check_parity(a, b, phi, parity)?;
    let bound = (truncation as u32).max(phi.max_degree().map_or(0, |d| d + 1));
    let src = Grid::new(a, b, parity.flip(), bound);
    let tgt = Grid::new(a, b, parity, bound + d_degree(a, b));
    let m = d12_matrix(a, b, parity.flip(), &src, &tgt);
    let v = tgt.coords(phi).expect("target grid covers φ");
    Ok(solve(&m, &v).map(|h| src.matrix(&h)))
}

#[derive(Clone, Debug)]
pub struct HomTable {
    source: Arc<MatrixFactorization>,
    target: Arc<MatrixFactorization>,
    dim_even: usize,
    dim_odd: usize,
    basis: Vec<MFMorphismClass>,
    stabilized: bool,
    truncation_degree: usize,
}

impl HomTable {
    pub fn dim_even(&self) -> usize {
        self.dim_even
    }

    pub fn dim_odd(&self) -> usize {
        self.dim_odd
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_even, self.dim_odd)
    }

    /// Even classes first, then odd.
    pub fn basis(&self) -> &[MFMorphismClass] {
        &self.basis
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn truncation_degree(&self) -> usize {
        self.truncation_degree
    }

    pub fn source(&self) -> &Arc<MatrixFactorization> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MatrixFactorization> {
        &self.target
    }

    /// Coefficients of `class` in [`HomTable::basis`], modulo exact terms.
    pub fn coordinates(&self, class: &MFMorphismClass) -> Result<Vec<Rat>, MfError> {
        if *class.source != *self.source || *class.target != *self.target {
            return Err(MfError::ForeignClass);
        }
        let mut out = vec![Rat::zero(); self.basis.len()];
        if self.basis.is_empty() {
            return Ok(out);
        }
        let rep_bound = class.representative.max_degree().map_or(0, |d| d as usize + 1);
        let bound = self.truncation_degree.max(class.truncation_degree).max(rep_bound);
        let t = Truncated::compute(&self.source, &self.target, bound as u32);
        let i = parity_index(class.parity);
        let grid = &t.grids[i];
        let offset = if class.parity.is_odd() { self.dim_even } else { 0 };
        let members: Vec<&MFMorphismClass> = self.basis.iter().filter(|b| b.parity == class.parity).collect();
        let mut columns: Vec<Vec<Rat>> = members
            .iter()
            .map(|b| grid.coords(&b.representative).expect("basis fits the grid"))
            .collect();
        columns.extend(t.coboundaries[i].iter().cloned());
        let mut m = RatMatrix::zeros(grid.len(), columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m.set(r, j, v.clone());
            }
        }
        let v = grid.coords(&class.representative).expect("grid covers the class");
        let x = solve(&m, &v).ok_or(MfError::NotCocycle)?;
        out[offset..offset + members.len()].clone_from_slice(&x[..members.len()]);
        Ok(out)
    }
}

/// Hom from `a` to `b` at truncation `truncation`, confirmed at twice that.
pub fn mf_hom(
    a: &Arc<MatrixFactorization>,
    b: &Arc<MatrixFactorization>,
    truncation: usize,
) -> Result<HomTable, MfError> {
    check_pair(a, b)?;
    let mut table = HomTable {
        source: a.clone(),
        target: b.clone(),
        dim_even: 0,
        dim_odd: 0,
        basis: Vec::new(),
        stabilized: true,
        truncation_degree: truncation,
    };
    if a.c != b.c {
        return Ok(table);
    }
    let first = Truncated::compute(a, b, truncation as u32);
    let dims = first.dims()?;
    let doubled = Truncated::compute(a, b, 2 * truncation as u32).dims()?;
    if dims != doubled {
        return Err(MfError::NotStabilized {
            truncation,
            first: dims,
            doubled,
        });
    }
    for p in [Parity::Even, Parity::Odd] {
        for rep in first.representatives(p) {
            table.basis.push(MFMorphismClass {
                source: a.clone(),
                target: b.clone(),
                representative: rep,
                parity: p,
                truncation_degree: truncation,
            });
        }
    }
    (table.dim_even, table.dim_odd) = dims;
    Ok(table)
}

/// Basis pairs `(i, j)` of `E_A ⊗ E_B` in the order used by [`mf_tensor`]:
/// even pairs first, each group in lexicographic order.
pub fn tensor_order(a_ranks: (usize, usize), b_ranks: (usize, usize)) -> Vec<(usize, usize)> {
    let ra = a_ranks.0 + a_ranks.1;
    let rb = b_ranks.0 + b_ranks.1;
    let odd = |i: usize, r0: usize| i >= r0;
    let mut even = Vec::new();
    let mut oddp = Vec::new();
    for i in 0..ra {
        for j in 0..rb {
            if odd(i, a_ranks.0) == odd(j, b_ranks.0) {
                even.push((i, j));
            } else {
                oddp.push((i, j));
            }
        }
    }
    even.extend(oddp);
    even
}

fn ranks(a: &MatrixFactorization) -> (usize, usize) {
    (a.rank_even, a.rank_odd)
}

/// `D = D_A ⊗ Id + σ_A ⊗ D_B` over `w_A + w_B` with `c = c_A + c_B`.
pub fn mf_tensor(a: &MatrixFactorization, b: &MatrixFactorization) -> Result<MatrixFactorization, MfError> {
    if a.vars() != b.vars() {
        return Err(LinError::VariableMismatch.into());
    }
    let vars = a.vars();
    let order = tensor_order(ranks(a), ranks(b));
    let n = order.len();
    let mut d = PolyMatrix::zeros(n, n, vars);
    for (r, &(i, j)) in order.iter().enumerate() {
        for (s, &(k, l)) in order.iter().enumerate() {
            let mut e = Poly::zero(vars);
            if j == l {
                e = &e + a.d.get(i, k);
            }
            if i == k {
                let db = b.d.get(j, l);
                e = if a.parity_of(i).is_odd() { &e - db } else { &e + db };
            }
            d.set(r, s, e);
        }
    }
    let w = a.potential.poly() + b.potential.poly();
    let rank_even = order.iter().filter(|&&(i, j)| a.parity_of(i) == b.parity_of(j)).count();
    MatrixFactorization::new(rank_even, n - rank_even, d, &a.c + &b.c, Potential::new(w))
}

/// The permutation relating `(A ⊗ B) ⊗ C` to `A ⊗ (B ⊗ C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatorWitness {
    /// `perm[n]` is the position in `A ⊗ (B ⊗ C)` of basis vector `n` of
    /// `(A ⊗ B) ⊗ C`.
    pub perm: Vec<usize>,
    /// The signed permutation matrix `P` with `P·D₁·P⁻¹ = D₂`.
    pub matrix: RatMatrix,
}

fn regroup_left(ra: (usize, usize), rb: (usize, usize), rc: (usize, usize)) -> Vec<[usize; 3]> {
    let ab = tensor_order(ra, rb);
    let ab_ranks = (
        ab.iter().filter(|&&(i, j)| (i < ra.0) == (j < rb.0)).count(),
        ab.iter().filter(|&&(i, j)| (i < ra.0) != (j < rb.0)).count(),
    );
    tensor_order(ab_ranks, rc)
        .into_iter()
        .map(|(m, k)| [ab[m].0, ab[m].1, k])
        .collect()
}

fn regroup_right(ra: (usize, usize), rb: (usize, usize), rc: (usize, usize)) -> Vec<[usize; 3]> {
    let bc = tensor_order(rb, rc);
    let bc_ranks = (
        bc.iter().filter(|&&(j, k)| (j < rb.0) == (k < rc.0)).count(),
        bc.iter().filter(|&&(j, k)| (j < rb.0) != (k < rc.0)).count(),
    );
    tensor_order(ra, bc_ranks)
        .into_iter()
        .map(|(i, m)| [i, bc[m].0, bc[m].1])
        .collect()
}

fn associator_perm(ra: (usize, usize), rb: (usize, usize), rc: (usize, usize)) -> Vec<usize> {
    let right: BTreeMap<[usize; 3], usize> = regroup_right(ra, rb, rc)
        .into_iter()
        .enumerate()
        .map(|(n, t)| (t, n))
        .collect();
    regroup_left(ra, rb, rc).iter().map(|t| right[t]).collect()
}

fn perm_matrix(perm: &[usize]) -> RatMatrix {
    let mut p = RatMatrix::zeros(perm.len(), perm.len());
    for (n, &m) in perm.iter().enumerate() {
        p.set(m, n, Rat::one());
    }
    p
}

pub fn associator_check(
    a: &MatrixFactorization,
    b: &MatrixFactorization,
    c: &MatrixFactorization,
) -> Result<AssociatorWitness, MfError> {
    let left = mf_tensor(&mf_tensor(a, b)?, c)?;
    let right = mf_tensor(a, &mf_tensor(b, c)?)?;
    let perm = associator_perm(ranks(a), ranks(b), ranks(c));
    let matrix = perm_matrix(&perm);
    let p = PolyMatrix::from_rat(&matrix, a.vars());
    let pt = PolyMatrix::from_rat(&matrix.transpose(), a.vars());
    let conj = p.try_mul(&left.d)?.try_mul(&pt)?;
    if conj != right.d || left.c != right.c || left.potential != right.potential || ranks(&left) != ranks(&right) {
        return Err(MfError::WitnessFailed);
    }
    Ok(AssociatorWitness { perm, matrix })
}

/// `f ⊗ g` for even maps `f: X → X'`, `g: Y → Y'` between tensor factors
/// with the given ranks; even maps pick up no Koszul sign.
fn tensor_even_maps(
    f: &RatMatrix,
    x: ((usize, usize), (usize, usize)),
    g: &RatMatrix,
    y: ((usize, usize), (usize, usize)),
) -> RatMatrix {
    let cols = tensor_order(x.0, y.0);
    let rows = tensor_order(x.1, y.1);
    let mut m = RatMatrix::zeros(rows.len(), cols.len());
    for (r, &(i2, j2)) in rows.iter().enumerate() {
        for (s, &(i, j)) in cols.iter().enumerate() {
            let v = f.get(i2, i) * g.get(j2, j);
            if !v.is_zero() {
                m.set(r, s, v);
            }
        }
    }
    m
}

fn tensor_ranks(x: (usize, usize), y: (usize, usize)) -> (usize, usize) {
    (x.0 * y.0 + x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

/// Both regroupings `((AB)C)D → A(B(CD))` as explicit matrices; they must
/// agree. Returns the common composite.
pub fn pentagon_check(
    a: &MatrixFactorization,
    b: &MatrixFactorization,
    c: &MatrixFactorization,
    d: &MatrixFactorization,
) -> Result<RatMatrix, MfError> {
    let ab = mf_tensor(a, b)?;
    let bc = mf_tensor(b, c)?;
    let cd = mf_tensor(c, d)?;
    let (ra, rb, rc, rd) = (ranks(a), ranks(b), ranks(c), ranks(d));
    let (rab, rbc, rcd) = (tensor_ranks(ra, rb), tensor_ranks(rb, rc), tensor_ranks(rc, rd));
    let r_a_bc = tensor_ranks(ra, rbc);
    let r_ab_c = tensor_ranks(rab, rc);
    let r_bc_d = tensor_ranks(rbc, rd);
    let r_b_cd = tensor_ranks(rb, rcd);

    let abc = associator_check(a, b, c)?.matrix;
    let a_bc_d = associator_check(a, &bc, d)?.matrix;
    let bcd = associator_check(b, c, d)?.matrix;
    let ab_c_d = associator_check(&ab, c, d)?.matrix;
    let a_b_cd = associator_check(a, b, &cd)?.matrix;

    let step1 = tensor_even_maps(&abc, (r_ab_c, r_a_bc), &RatMatrix::identity(rd.0 + rd.1), (rd, rd));
    let step3 = tensor_even_maps(&RatMatrix::identity(ra.0 + ra.1), (ra, ra), &bcd, (r_bc_d, r_b_cd));
    let path1 = step3.try_mul(&a_bc_d)?.try_mul(&step1)?;
    let path2 = a_b_cd.try_mul(&ab_c_d)?;
    if path1 != path2 {
        return Err(MfError::WitnessFailed);
    }
    Ok(path1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> (Vars, Poly) {
        let v = Vars::new(["x"]);
        let x = Poly::var(&v, 0);
        (v, x)
    }

    fn p(v: &Vars, s: &str) -> Poly {
        Poly::parse(v, s).unwrap()
    }

    fn kxx() -> Arc<MatrixFactorization> {
        let (_, x) = x();
        Arc::new(koszul(&x, &x, Rat::zero()).unwrap())
    }

    #[test]
    fn constructor_examples() {
        let (v, x) = x();
        let z = Poly::zero(&v);
        let d = PolyMatrix::new(2, 2, &v, vec![z.clone(), x.clone(), x.clone(), z.clone()]).unwrap();
        let w = Potential::new(p(&v, "x^2"));
        assert!(mf_new(1, 1, d.clone(), Rat::zero(), w.clone()).is_ok());
        assert!(matches!(
            mf_new(1, 1, d, Rat::one(), w),
            Err(MfError::SquareMismatch { row: 0, col: 0, .. })
        ));
        let d3 = PolyMatrix::new(2, 2, &v, vec![z.clone(), Poly::one(&v), p(&v, "x^3"), z]).unwrap();
        assert!(mf_new(1, 1, d3, Rat::zero(), Potential::new(p(&v, "x^3"))).is_ok());
    }

    #[test]
    fn even_blocks_must_vanish() {
        let (v, x) = x();
        let d = PolyMatrix::new(2, 2, &v, vec![x.clone(), Poly::zero(&v), Poly::zero(&v), x]).unwrap();
        assert_eq!(
            mf_new(1, 1, d, Rat::zero(), Potential::new(p(&v, "x^2"))).unwrap_err(),
            MfError::NotOdd {
                block: Block::EvenEven,
                row: 0,
                col: 0
            }
        );
    }

    #[test]
    fn koszul_builders() {
        let (v, x) = x();
        let k = koszul(&x, &p(&v, "x^2"), Rat::zero()).unwrap();
        assert_eq!(k.potential().poly(), &p(&v, "x^3"));
        let k = koszul(&Poly::one(&v), &p(&v, "x^3 + 2"), Rat::new(1, 2)).unwrap();
        assert_eq!(k.potential().poly(), &p(&v, "x^3 + 3/2"));
        assert!(koszul(&x, &Poly::var(&Vars::new(["y"]), 0), Rat::zero()).is_err());
    }

    #[test]
    fn end_of_kxx() {
        let k = kxx();
        let t = mf_hom(&k, &k, 8).unwrap();
        assert_eq!(t.dims(), (1, 1));
        assert!(t.stabilized());
        let (v, _) = x();
        let reps: Vec<_> = t.basis().iter().map(|c| c.representative().clone()).collect();
        assert_eq!(reps[0], PolyMatrix::identity(2, &v));
        let anti = PolyMatrix::new(
            2,
            2,
            &v,
            vec![Poly::zero(&v), Poly::one(&v), p(&v, "-1"), Poly::zero(&v)],
        )
        .unwrap();
        assert_eq!(reps[1], anti);
        assert_eq!(mf_hom(&k, &k, 12).unwrap().dims(), (1, 1));
    }

    #[test]
    fn contractible_object() {
        let (v, _) = x();
        let k = Arc::new(koszul(&Poly::one(&v), &p(&v, "x^3"), Rat::zero()).unwrap());
        assert_eq!(mf_hom(&k, &k, 8).unwrap().dims(), (0, 0));
        let id = PolyMatrix::identity(2, &v);
        let h = exact_preimage(&k, &k, &id, Parity::Even, 8).unwrap().unwrap();
        assert_eq!(d12(&k, &k, &h, Parity::Odd).unwrap(), id);
    }

    #[test]
    fn different_constants_give_zero() {
        let (v, x) = x();
        let a = Arc::new(koszul(&x, &x, Rat::zero()).unwrap());
        let w = p(&v, "x^2");
        let b = Arc::new(koszul(&Poly::one(&v), &p(&v, "x^2 + 1"), Rat::one()).unwrap());
        assert_eq!(b.potential().poly(), &w);
        let t = mf_hom(&a, &b, 8).unwrap();
        assert_eq!(t.dims(), (0, 0));
        assert!(t.stabilized());
    }

    #[test]
    fn zero_differential_does_not_stabilize() {
        let (v, _) = x();
        let zero = Arc::new(
            mf_new(
                1,
                1,
                PolyMatrix::zeros(2, 2, &v),
                Rat::zero(),
                Potential::new(Poly::zero(&v)),
            )
            .unwrap(),
        );
        assert!(matches!(
            mf_hom(&zero, &zero, 4),
            Err(MfError::NotStabilized {
                truncation: 4,
                first: (8, 8),
                doubled: (16, 16)
            })
        ));
    }

    #[test]
    fn composition_in_end_kxx() {
        let k = kxx();
        let t = mf_hom(&k, &k, 8).unwrap();
        let odd = &t.basis()[1];
        let sq = mf_compose(odd, odd).unwrap();
        assert_eq!(sq.parity(), Parity::Even);
        assert_eq!(t.coordinates(&sq).unwrap(), vec![Rat::from_int(-1), Rat::zero()]);
        let id = MFMorphismClass::identity(k.clone(), 8);
        let f = mf_compose(&id, odd).unwrap();
        assert_eq!(f.representative(), odd.representative());
        assert_eq!(t.coordinates(&id).unwrap(), vec![Rat::one(), Rat::zero()]);
    }

    #[test]
    fn exact_class_reduces_to_zero() {
        let k = kxx();
        let (v, x) = x();
        let t = mf_hom(&k, &k, 8).unwrap();
        // D₁₂(antidiag(x, 0)) is exact by construction
        let h = PolyMatrix::new(
            2,
            2,
            &v,
            vec![Poly::zero(&v), x.clone(), Poly::zero(&v), Poly::zero(&v)],
        )
        .unwrap();
        let e = d12(&k, &k, &h, Parity::Odd).unwrap();
        let exact = MFMorphismClass::new(k.clone(), k.clone(), e, Parity::Even, 8).unwrap();
        assert!(exact.is_exact().unwrap());
        assert_eq!(t.coordinates(&exact).unwrap(), vec![Rat::zero(), Rat::zero()]);
        let composed = mf_compose(&t.basis()[1], &exact).unwrap();
        assert_eq!(t.coordinates(&composed).unwrap(), vec![Rat::zero(), Rat::zero()]);
    }

    #[test]
    fn d12_squares_to_constant_difference() {
        let (v, x) = x();
        let a = koszul(&x, &x, Rat::zero()).unwrap();
        let b = koszul(&Poly::one(&v), &p(&v, "x^2 + 3"), Rat::from_int(3)).unwrap();
        let phi = PolyMatrix::new(
            2,
            2,
            &v,
            vec![p(&v, "x + 2"), Poly::zero(&v), Poly::zero(&v), p(&v, "x^3")],
        )
        .unwrap();
        let once = d12(&a, &b, &phi, Parity::Even).unwrap();
        let twice = d12(&a, &b, &once, Parity::Odd).unwrap();
        assert_eq!(twice, phi.scale(&Rat::from_int(3)));
    }

    #[test]
    fn tensor_of_kxx() {
        let k = kxx();
        let t = mf_tensor(&k, &k).unwrap();
        assert_eq!((t.rank_even(), t.rank_odd()), (2, 2));
        let (v, _) = x();
        assert_eq!(t.potential().poly(), &p(&v, "2x^2"));
        let sq = t.d().try_mul(t.d()).unwrap();
        assert_eq!(sq, PolyMatrix::scalar(4, &p(&v, "2x^2")));
    }

    #[test]
    fn tensor_with_unit_like_object() {
        let (v, x) = x();
        let a = koszul(&x, &p(&v, "x^2 + 1"), Rat::new(1, 3)).unwrap();
        let u = koszul(&Poly::one(&v), &Poly::zero(&v), Rat::zero()).unwrap();
        let t = mf_tensor(&a, &u).unwrap();
        assert_eq!(t.potential(), a.potential());
        assert_eq!(t.c(), a.c());
        assert!(associator_check(&a, &u, &a).is_ok());
    }

    #[test]
    fn associator_and_pentagon() {
        let (v, x) = x();
        let a = koszul(&x, &x, Rat::zero()).unwrap();
        let b = koszul(&p(&v, "x + 1"), &p(&v, "x^2"), Rat::one()).unwrap();
        let c = koszul(&Poly::one(&v), &p(&v, "x^3"), Rat::zero()).unwrap();
        let w = associator_check(&a, &b, &c).unwrap();
        assert_eq!(w.perm.len(), 8);
        let bc = mf_tensor(&b, &c).unwrap();
        assert!(associator_check(&a, &bc, &b).is_ok());
        assert!(pentagon_check(&a, &b, &c, &a).is_ok());
        assert!(pentagon_check(&bc, &a, &c, &b).is_ok());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(1, 3), vec![vec![2], vec![1], vec![0]]);
        assert_eq!(monomials(2, 2), vec![vec![1, 0], vec![0, 1], vec![0, 0]]);
        assert_eq!(monomials(0, 2), vec![Vec::<u32>::new()]);
        assert!(monomials(2, 0).is_empty());
    }
}

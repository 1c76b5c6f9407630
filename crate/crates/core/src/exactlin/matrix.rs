use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{LinError, Rat};

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self, LinError> {
        if entries.len() != rows * cols {
            return Err(LinError::ShapeMismatch {
                expected: (rows, cols),
                found: (entries.len(), 1),
            });
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<Rat>]) -> Result<Self, LinError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinError::ShapeMismatch {
                    expected: (1, cols),
                    found: (1, r.len()),
                });
            }
            entries.extend(r.iter().cloned());
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        Self::new(rows, cols, vals.iter().map(|&v| Rat::from_int(v)).collect()).expect("entry count")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, other: &RatMatrix) -> Result<RatMatrix, LinError> {
        if self.cols != other.rows {
            return Err(LinError::ShapeMismatch {
                expected: (self.cols, other.cols),
                found: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &RatMatrix) -> Result<RatMatrix, LinError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinError::ShapeMismatch {
                expected: (self.rows, self.cols),
                found: (other.rows, other.cols),
            });
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, c: &Rat) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>, LinError> {
        if v.len() != self.cols {
            return Err(LinError::ShapeMismatch {
                expected: (self.cols, 1),
                found: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Kronecker product; the left factor indexes the most significant block.
    pub fn kronecker(&self, other: &RatMatrix) -> RatMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        Echelon::of(self).pivots.len()
    }

    pub fn determinant(&self) -> Result<Rat, LinError> {
        if self.rows != self.cols {
            return Err(LinError::ShapeMismatch {
                expected: (self.rows, self.rows),
                found: (self.rows, self.cols),
            });
        }
        let ech = Echelon::of(self);
        if ech.pivots.len() < self.rows {
            return Ok(Rat::zero());
        }
        if self.rows == 0 {
            return Ok(Rat::one());
        }
        // Bareiss leaves the determinant of the row-scaled matrix in the last pivot.
        let last = &ech.rows[self.rows - 1][self.cols - 1];
        let mut det = Rat::from_bigint(last.clone());
        if ech.swaps % 2 == 1 {
            det = -det;
        }
        Ok(&det / &ech.row_scale)
    }

    pub fn inverse(&self) -> Result<RatMatrix, LinError> {
        if self.rows != self.cols {
            return Err(LinError::ShapeMismatch {
                expected: (self.rows, self.rows),
                found: (self.rows, self.cols),
            });
        }
        let n = self.rows;
        if self.rank() < n {
            return Err(LinError::Singular);
        }
        let mut out = Self::zeros(n, n);
        for j in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[j] = Rat::one();
            let x = solve(self, &e).ok_or(LinError::Singular)?;
            for (i, v) in x.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Fraction-free row echelon form (Bareiss elimination on the integer
/// matrix obtained by clearing denominators row by row).
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
    /// Product of the per-row denominators that were cleared.
    row_scale: Rat,
}

fn clear_denominators(row: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints = row.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    (ints, l)
}

impl Echelon {
    fn of(m: &RatMatrix) -> Echelon {
        let mut rows = Vec::with_capacity(m.rows);
        let mut row_scale = Rat::one();
        for i in 0..m.rows {
            let (r, l) = clear_denominators(m.row(i));
            row_scale = row_scale * Rat::from_bigint(l);
            rows.push(r);
        }
        let (pivots, swaps) = bareiss(&mut rows, m.cols);
        Echelon {
            rows,
            pivots,
            swaps,
            row_scale,
        }
    }
}

/// In-place Bareiss elimination. Returns pivot columns and the number of
/// row swaps performed. Every division is exact.
fn bareiss(rows: &mut [Vec<BigInt>], cols: usize) -> (Vec<usize>, usize) {
    let n = rows.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let lead = core::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    (pivots, swaps)
}

/// Back substitution on an echelon form; free variables take `free_values`.
fn back_substitute(
    rows: &[Vec<BigInt>],
    pivots: &[usize],
    cols: usize,
    rhs: Option<&[BigInt]>,
    free_values: &[(usize, Rat)],
) -> Vec<Rat> {
    let mut x = vec![Rat::zero(); cols];
    for (j, v) in free_values {
        x[*j] = v.clone();
    }
    for (i, &p) in pivots.iter().enumerate().rev() {
        let mut acc = match rhs {
            Some(b) => Rat::from_bigint(b[i].clone()),
            None => Rat::zero(),
        };
        for j in p + 1..cols {
            if !rows[i][j].is_zero() && !x[j].is_zero() {
                acc -= &(Rat::from_bigint(rows[i][j].clone()) * &x[j]);
            }
        }
        x[p] = &acc / &Rat::from_bigint(rows[i][p].clone());
    }
    x
}

/// Scales a vector to primitive integer entries with a positive leading entry.
pub fn primitive(v: Vec<Rat>) -> Vec<Rat> {
    let Some(lead) = v.iter().find(|r| !r.is_zero()) else {
        return v;
    };
    let neg = lead.is_negative();
    let (ints, _) = clear_denominators(&v);
    let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    ints.into_iter()
        .map(|a| {
            let a = a / &g;
            Rat::from_bigint(if neg { -a } else { a })
        })
        .collect()
}

/// Basis of `{v : m v = 0}` with `cols - rank` vectors, each scaled to
/// primitive integers.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let ech = Echelon::of(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let x = back_substitute(&ech.rows, &ech.pivots, m.cols, None, &[(f, Rat::one())]);
            primitive(x)
        })
        .collect()
}

/// Basis of the column span: the columns of `m` at the pivot positions.
pub fn image_basis(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let ech = Echelon::of(m);
    ech.pivots.iter().map(|&c| m.column(c)).collect()
}

/// Rank of a family of vectors of common length `dim`.
pub fn span_rank(dim: usize, vectors: &[Vec<Rat>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(dim, vectors)
        .expect("vectors share a length")
        .rank()
}

/// `dim span(big) - dim span(small)`, checking `span(small) ⊆ span(big)`.
pub fn quotient_dim(big: &[Vec<Rat>], small: &[Vec<Rat>]) -> Result<usize, LinError> {
    let dim = big.iter().chain(small).map(Vec::len).next().unwrap_or(0);
    if big.iter().chain(small).any(|v| v.len() != dim) {
        return Err(LinError::ShapeMismatch {
            expected: (dim, 1),
            found: (0, 1),
        });
    }
    let mut space = Subspace::new(dim);
    for v in big {
        space.insert(v);
    }
    for (index, v) in small.iter().enumerate() {
        if !space.contains(v) {
            return Err(LinError::SubspaceViolation { index });
        }
    }
    Ok(space.dim() - span_rank(dim, small))
}

/// One solution of `a x = b`, or `None` if the system is inconsistent.
pub fn solve(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), a.rows, "right-hand side length");
    let mut aug = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let mut row: Vec<Rat> = a.row(i).to_vec();
        row.push(b[i].clone());
        aug.push(clear_denominators(&row).0);
    }
    let (pivots, _) = bareiss(&mut aug, a.cols + 1);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let rhs: Vec<BigInt> = aug.iter().map(|r| r[a.cols].clone()).collect();
    let rows: Vec<Vec<BigInt>> = aug
        .into_iter()
        .map(|mut r| {
            r.pop();
            r
        })
        .collect();
    Some(back_substitute(&rows, &pivots, a.cols, Some(&rhs), &[]))
}

/// A subspace kept in reduced row echelon form, for incremental membership
/// tests and reduction of vectors modulo the subspace.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim: usize,
    /// Reduced rows with a unit at the pivot and zeros in other pivot columns.
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            dim: ambient,
            rows: Vec::new(),
        }
    }

    pub fn spanned_by(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        let mut s = Self::new(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the
    /// subspace, and is otherwise unique for the coset `v + W`.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (j, r) in row.iter().enumerate() {
                if !r.is_zero() {
                    v[j] -= &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Rat::is_zero)
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip().unwrap();
        for x in r.iter_mut() {
            *x = &*x * &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    row[j] -= &(&f * x);
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, r));
        true
    }

    /// Reduced basis vectors, ordered by pivot column.
    pub fn basis(&self) -> impl Iterator<Item = &Vec<Rat>> {
        self.rows.iter().map(|(_, r)| r)
    }
}

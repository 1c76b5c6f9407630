use alloc::vec::Vec;
use core::fmt;

use super::{LinError, Poly, Rat, RatMatrix, Vars};

/// Dense row-major matrix of polynomials over one shared variable list.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: Vars,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, vars: &Vars, entries: Vec<Poly>) -> Result<Self, LinError> {
        if entries.len() != rows * cols {
            return Err(LinError::ShapeMismatch {
                expected: (rows, cols),
                found: (entries.len(), 1),
            });
        }
        if entries.iter().any(|p| p.vars() != vars) {
            return Err(LinError::VariableMismatch);
        }
        Ok(PolyMatrix {
            rows,
            cols,
            vars: vars.clone(),
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize, vars: &Vars) -> Self {
        PolyMatrix {
            rows,
            cols,
            vars: vars.clone(),
            entries: (0..rows * cols).map(|_| Poly::zero(vars)).collect(),
        }
    }

    pub fn identity(n: usize, vars: &Vars) -> Self {
        Self::scalar(n, &Poly::one(vars))
    }

    /// `p · Id_n`.
    pub fn scalar(n: usize, p: &Poly) -> Self {
        let mut m = Self::zeros(n, n, p.vars());
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_rat(m: &RatMatrix, vars: &Vars) -> Self {
        PolyMatrix {
            rows: m.rows(),
            cols: m.cols(),
            vars: vars.clone(),
            entries: m.entries().iter().map(|c| Poly::constant(vars, c.clone())).collect(),
        }
    }

    /// The constant matrix, if no entry depends on the variables.
    pub fn to_rat(&self) -> Option<RatMatrix> {
        let e = self.entries.iter().map(Poly::as_constant).collect::<Option<Vec<_>>>()?;
        RatMatrix::new(self.rows, self.cols, e).ok()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    /// Panics if `p` is over a different variable list.
    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert!(p.vars() == &self.vars, "variable lists differ");
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Largest total degree among the entries; `None` if all are zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.entries.iter().filter_map(Poly::total_degree).max()
    }

    fn check(&self, other: &PolyMatrix) -> Result<(), LinError> {
        if self.vars != other.vars {
            Err(LinError::VariableMismatch)
        } else {
            Ok(())
        }
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, LinError> {
        self.check(other)?;
        if self.cols != other.rows {
            return Err(LinError::ShapeMismatch {
                expected: (self.cols, other.cols),
                found: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols, &self.vars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &PolyMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<PolyMatrix, LinError> {
        self.check(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinError::ShapeMismatch {
                expected: (self.rows, self.cols),
                found: (other.rows, other.cols),
            });
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &PolyMatrix) -> Result<PolyMatrix, LinError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, LinError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rat) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = Self::zeros(self.cols, self.rows, &self.vars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Kronecker product; the left factor indexes the most significant block.
    pub fn try_kronecker(&self, other: &PolyMatrix) -> Result<PolyMatrix, LinError> {
        self.check(other)?;
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols, &self.vars);
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
        Ok(out)
    }

    /// Rows and columns reindexed: `out[i][j] = self[row_of[i]][col_of[j]]`.
    pub fn permuted(&self, row_of: &[usize], col_of: &[usize]) -> PolyMatrix {
        let mut out = Self::zeros(row_of.len(), col_of.len(), &self.vars);
        for (i, &r) in row_of.iter().enumerate() {
            for (j, &c) in col_of.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_left_unit() {
        let v = Vars::new(["x"]);
        let m = PolyMatrix::new(
            2,
            2,
            &v,
            ["x", "1", "x^2 - 3", "0"]
                .iter()
                .map(|s| Poly::parse(&v, s).unwrap())
                .collect(),
        )
        .unwrap();
        assert_eq!(PolyMatrix::identity(2, &v).try_mul(&m).unwrap(), m);
    }

    #[test]
    fn antidiagonal_x_squares_to_x_squared() {
        let v = Vars::new(["x"]);
        let x = Poly::var(&v, 0);
        let z = Poly::zero(&v);
        let d = PolyMatrix::new(2, 2, &v, alloc::vec![z.clone(), x.clone(), x.clone(), z]).unwrap();
        let sq = d.try_mul(&d).unwrap();
        assert_eq!(sq, PolyMatrix::scalar(2, &(&x * &x)));
    }

    #[test]
    fn shape_and_variable_errors() {
        let v = Vars::new(["x"]);
        let w = Vars::new(["y"]);
        let a = PolyMatrix::zeros(2, 3, &v);
        assert!(matches!(a.try_mul(&a), Err(LinError::ShapeMismatch { .. })));
        assert_eq!(a.try_add(&PolyMatrix::zeros(2, 3, &w)), Err(LinError::VariableMismatch));
    }
}

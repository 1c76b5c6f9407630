use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::{LinError, Rat};

/// An ordered, shared list of variable names.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Self {
        Vars(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    pub fn none() -> Self {
        Vars::new(core::iter::empty::<String>())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector of a monomial, one entry per variable.
pub type Exponent = Vec<u32>;

/// A multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so `terms().is_empty()` iff the
/// polynomial is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Exponent, Rat>,
}

/// Graded order: total degree first, then lexicographic on exponents.
pub fn graded_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The variable with index `i`. Panics if out of range.
    pub fn var(vars: &Vars, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rat::one())
    }

    pub fn monomial(vars: &Vars, exponent: Exponent, coef: Rat) -> Self {
        assert_eq!(exponent.len(), vars.len(), "exponent length");
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exponent, coef);
        }
        Poly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rat)>>(vars: &Vars, terms: I) -> Self {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length");
            p.add_term(e, &c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The constant value if this polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: &Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    fn check_vars(&self, other: &Poly) -> Result<(), LinError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(LinError::VariableMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, LinError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, LinError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, LinError> {
        self.check_vars(other)?;
        let mut out = Poly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a point; `point` has one value per variable.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat, LinError> {
        if point.len() != self.vars.len() {
            return Err(LinError::ShapeMismatch {
                expected: (self.vars.len(), 1),
                found: (point.len(), 1),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * x.pow(k)))
            .sum())
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, &(c * &Rat::from_int(e[i] as i64)));
        }
        out
    }

    /// Drops every term of total degree `>= bound`.
    pub fn truncate(&self, bound: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() < bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms in printing order: highest graded monomial first.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, &Rat)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| graded_cmp(b.0, a.0));
        t
    }

    /// Parses the text grammar used in documents: a sum of terms, each an
    /// optional rational coefficient followed by `var` or `var^k` factors.
    /// `*` between factors is optional.
    pub fn parse(vars: &Vars, text: &str) -> Result<Poly, PolyParseError> {
        Parser {
            vars,
            src: text.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

/// Where and why a polynomial string failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("polynomial syntax error at byte {position}: {reason}")]
pub struct PolyParseError {
    pub position: usize,
    pub reason: String,
}

struct Parser<'a> {
    vars: &'a Vars,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, reason: &str) -> Result<T, PolyParseError> {
        Err(PolyParseError {
            position: self.pos,
            reason: reason.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| core::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn parse(mut self) -> Result<Poly, PolyParseError> {
        let mut out = Poly::zero(self.vars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.err("empty polynomial"),
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    Rat::one()
                }
                Some(b'-') => {
                    self.pos += 1;
                    -Rat::one()
                }
                Some(_) if first => Rat::one(),
                Some(_) => return self.err("expected `+` or `-`"),
            };
            first = false;
            let (e, c) = self.term()?;
            out.add_term(e, &(sign * c));
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Exponent, Rat), PolyParseError> {
        let mut coef = Rat::one();
        let mut exp = vec![0u32; self.vars.len()];
        let mut any = false;
        if let Some(b'0'..=b'9') = self.peek() {
            let num: num_bigint::BigInt = self.digits().unwrap().parse().unwrap();
            let mut den = num_bigint::BigInt::from(1);
            if self.peek() == Some(b'/') {
                self.pos += 1;
                self.skip_ws();
                den = match self.digits() {
                    Some(d) => d.parse().unwrap(),
                    None => return self.err("expected denominator"),
                };
            }
            coef = match Rat::from_bigints(num, den) {
                Some(c) => c,
                None => return self.err("zero denominator"),
            };
            any = true;
        }
        loop {
            let save = self.pos;
            let had_star = self.peek() == Some(b'*');
            if had_star {
                if !any {
                    return self.err("unexpected `*`");
                }
                self.pos += 1;
                self.skip_ws();
            }
            match self.src.get(self.pos) {
                Some(b) if b.is_ascii_alphabetic() || *b == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let Some(idx) = self.vars.index_of(name) else {
                        self.pos = start;
                        return self.err("unknown variable");
                    };
                    let mut k = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        k = match self.digits().map(str::parse::<u32>) {
                            Some(Ok(k)) => k,
                            _ => return self.err("expected exponent"),
                        };
                    }
                    exp[idx] += k;
                    any = true;
                }
                _ if had_star => return self.err("expected variable after `*`"),
                _ => {
                    self.pos = save;
                    break;
                }
            }
        }
        if !any {
            return self.err("expected term");
        }
        Ok((exp, coef))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (name, &k) in self.vars.names().iter().zip(e) {
                match k {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(alloc::format!("{name}^{k}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Operator forms panic on mismatched variable lists; use the `try_*`
/// methods where that can happen.
impl core::ops::Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("variable lists differ")
    }
}

impl core::ops::Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("variable lists differ")
    }
}

impl core::ops::Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("variable lists differ")
    }
}

impl core::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn x() -> Vars {
        Vars::new(["x"])
    }

    #[test]
    fn difference_of_squares() {
        let v = x();
        let xp = Poly::var(&v, 0);
        let one = Poly::one(&v);
        let prod = &(&xp + &one) * &(&xp - &one);
        assert_eq!(prod, Poly::parse(&v, "x^2 - 1").unwrap());
    }

    #[test]
    fn parses_grammar_examples() {
        let v = x();
        let p = Poly::parse(&v, "x^2 + 1/2 x").unwrap();
        let expected = Poly::from_terms(&v, [(vec![2], Rat::one()), (vec![1], Rat::new(1, 2))]);
        assert_eq!(p, expected);
        assert_eq!(Poly::parse(&v, "2*x*x").unwrap(), Poly::parse(&v, "2x^2").unwrap());
        assert_eq!(Poly::parse(&v, "-x + x").unwrap(), Poly::zero(&v));
    }

    #[test]
    fn rejects_malformed() {
        let v = x();
        assert!(Poly::parse(&v, "").is_err());
        assert!(Poly::parse(&v, "y").is_err());
        assert!(Poly::parse(&v, "x +").is_err());
        assert!(Poly::parse(&v, "1/0 x").is_err());
        assert!(Poly::parse(&v, "x^").is_err());
        assert!(Poly::parse(&v, "x x + * 2").is_err());
    }

    #[test]
    fn display_round_trips() {
        let v = Vars::new(["x", "y"]);
        for s in ["x^2*y - 3/4*y + 1", "0", "-x", "2*x*y^3 + x"] {
            let p = Poly::parse(&v, s).unwrap();
            let printed = p.to_string();
            assert_eq!(Poly::parse(&v, &printed).unwrap(), p, "{printed}");
        }
        assert_eq!(Poly::parse(&v, "1 + y*x").unwrap().to_string(), "x*y + 1");
    }

    #[test]
    fn derivative_and_eval() {
        let v = Vars::new(["x", "y"]);
        let p = Poly::parse(&v, "x^3*y + 2*y^2").unwrap();
        assert_eq!(p.derivative(0), Poly::parse(&v, "3x^2 y").unwrap());
        assert_eq!(p.derivative(1), Poly::parse(&v, "x^3 + 4y").unwrap());
        let val = p.eval(&[Rat::from_int(2), Rat::new(1, 2)]).unwrap();
        assert_eq!(val, Rat::new(9, 2));
    }

    #[test]
    fn mismatched_vars_error() {
        let a = Poly::one(&Vars::new(["x"]));
        let b = Poly::one(&Vars::new(["y"]));
        assert_eq!(a.try_mul(&b), Err(LinError::VariableMismatch));
    }
}

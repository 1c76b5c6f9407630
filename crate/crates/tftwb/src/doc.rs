//! JSON documents. Rationals are `"p/q"` strings and polynomials use the
//! text grammar of [`Poly::parse`], so nothing passes through floats.
//!
//! Every `*_to_json` writes the canonical form: fixed key order, sparse
//! lists sorted, zero entries dropped, two-space indentation and a trailing
//! newline. Loading and saving a document twice gives identical bytes.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use tftwb_core::deformation::{DGLAModel, Polyvector, RawDgla};
use tftwb_core::exactlin::Vars;
use tftwb_core::frobenius::{FrobeniusAlgebra, RawFrobenius};
use tftwb_core::mfcat::{MatrixFactorization, Potential};
use tftwb_core::statespace::CohomologyModel;
use tftwb_core::{Poly, PolyMatrix, Rat};

/// A document that does not match its schema. `path` is a JSON-pointer-like
/// location inside the document.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {reason}")]
pub struct SchemaError {
    pub path: String,
    pub reason: String,
}

impl SchemaError {
    fn new(path: impl Into<String>, reason: impl ToString) -> Self {
        SchemaError {
            path: path.into(),
            reason: reason.to_string(),
        }
    }
}

fn from_text<T: DeserializeOwned>(text: &str) -> Result<T, SchemaError> {
    serde_json::from_str(text).map_err(|e| SchemaError::new("$", e))
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn rat(path: &str, s: &str) -> Result<Rat, SchemaError> {
    s.parse().map_err(|e| SchemaError::new(path, e))
}

fn rats(path: &str, v: &[String]) -> Result<Vec<Rat>, SchemaError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| rat(&format!("{path}[{i}]"), s))
        .collect()
}

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(Rat::to_string).collect()
}

fn poly(path: &str, vars: &Vars, s: &str) -> Result<Poly, SchemaError> {
    Poly::parse(vars, s).map_err(|e| SchemaError::new(path, e))
}

fn vars(path: &str, names: &[String]) -> Result<Vars, SchemaError> {
    for (i, n) in names.iter().enumerate() {
        let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(SchemaError::new(
                format!("{path}[{i}]"),
                "variable names are identifiers",
            ));
        }
        if names[..i].contains(n) {
            return Err(SchemaError::new(format!("{path}[{i}]"), "duplicate variable"));
        }
    }
    Ok(Vars::new(names.iter().cloned()))
}

// ---- frobenius-algebra.json

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrobeniusDoc {
    dim: usize,
    mult: Vec<Vec<Vec<String>>>,
    unit: Vec<String>,
    counit: Vec<String>,
}

/// Reads the structure constants. Axioms are checked by
/// [`tftwb_core::frobenius::validate`], not here.
pub fn frobenius_from_json(text: &str) -> Result<RawFrobenius, SchemaError> {
    let doc: FrobeniusDoc = from_text(text)?;
    let n = doc.dim;
    let shape = |path: String, len: usize| {
        if len == n {
            Ok(())
        } else {
            Err(SchemaError::new(path, format!("expected {n} entries, found {len}")))
        }
    };
    shape("$.mult".into(), doc.mult.len())?;
    let mut mult = Vec::with_capacity(n);
    for (i, plane) in doc.mult.iter().enumerate() {
        shape(format!("$.mult[{i}]"), plane.len())?;
        let mut rows = Vec::with_capacity(n);
        for (j, row) in plane.iter().enumerate() {
            let path = format!("$.mult[{i}][{j}]");
            shape(path.clone(), row.len())?;
            rows.push(rats(&path, row)?);
        }
        mult.push(rows);
    }
    shape("$.unit".into(), doc.unit.len())?;
    shape("$.counit".into(), doc.counit.len())?;
    Ok(RawFrobenius {
        dim: n,
        mult,
        unit: rats("$.unit", &doc.unit)?,
        counit: rats("$.counit", &doc.counit)?,
    })
}

pub fn frobenius_to_json(a: &FrobeniusAlgebra) -> String {
    let raw = a.to_raw();
    to_text(&FrobeniusDoc {
        dim: raw.dim,
        mult: raw
            .mult
            .iter()
            .map(|plane| plane.iter().map(|row| strings(row)).collect())
            .collect(),
        unit: strings(&raw.unit),
        counit: strings(&raw.counit),
    })
}

// ---- mf-object.json

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MfDoc {
    vars: Vec<String>,
    rank: [usize; 2],
    #[serde(rename = "D")]
    d: Vec<Vec<String>>,
    c: String,
    w: String,
}

/// The pieces of a factorization before `D² = (w + c)·Id` is checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MfParts {
    pub rank_even: usize,
    pub rank_odd: usize,
    pub d: PolyMatrix,
    pub c: Rat,
    pub w: Potential,
}

impl MfParts {
    pub fn build(self) -> Result<MatrixFactorization, tftwb_core::mfcat::MfError> {
        MatrixFactorization::new(self.rank_even, self.rank_odd, self.d, self.c, self.w)
    }
}

pub fn mf_from_json(text: &str) -> Result<MfParts, SchemaError> {
    let doc: MfDoc = from_text(text)?;
    let vars = vars("$.vars", &doc.vars)?;
    let [e, o] = doc.rank;
    let n = e + o;
    if doc.d.len() != n {
        return Err(SchemaError::new(
            "$.D",
            format!("expected {n} rows, found {}", doc.d.len()),
        ));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in doc.d.iter().enumerate() {
        if row.len() != n {
            return Err(SchemaError::new(
                format!("$.D[{i}]"),
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        for (j, s) in row.iter().enumerate() {
            entries.push(poly(&format!("$.D[{i}][{j}]"), &vars, s)?);
        }
    }
    let d = PolyMatrix::new(n, n, &vars, entries).map_err(|err| SchemaError::new("$.D", err))?;
    Ok(MfParts {
        rank_even: e,
        rank_odd: o,
        d,
        c: rat("$.c", &doc.c)?,
        w: Potential::new(poly("$.w", &vars, &doc.w)?),
    })
}

fn mf_doc(m: &MatrixFactorization) -> MfDoc {
    let n = m.rank();
    MfDoc {
        vars: m.vars().names().to_vec(),
        rank: [m.rank_even(), m.rank_odd()],
        d: (0..n)
            .map(|i| (0..n).map(|j| m.d().get(i, j).to_string()).collect())
            .collect(),
        c: m.c().to_string(),
        w: m.potential().poly().to_string(),
    }
}

pub fn mf_to_json(m: &MatrixFactorization) -> String {
    to_text(&mf_doc(m))
}

pub fn mf_to_value(m: &MatrixFactorization) -> Value {
    serde_json::to_value(mf_doc(m)).expect("documents serialize")
}

// ---- dgla.json

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisEntry {
    name: String,
    degree: i32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DglaDoc {
    basis: Vec<BasisEntry>,
    d: Vec<(usize, usize, String)>,
    bracket: Vec<(usize, usize, usize, String)>,
}

pub fn dgla_from_json(text: &str) -> Result<RawDgla, SchemaError> {
    let doc: DglaDoc = from_text(text)?;
    let n = doc.basis.len();
    let index = |path: String, i: usize| {
        if i < n {
            Ok(i)
        } else {
            Err(SchemaError::new(
                path,
                format!("index {i} out of range for {n} basis elements"),
            ))
        }
    };
    let mut raw = RawDgla {
        basis: doc.basis.into_iter().map(|b| (b.name, b.degree)).collect(),
        ..RawDgla::default()
    };
    for (t, (i, j, c)) in doc.d.iter().enumerate() {
        let path = format!("$.d[{t}]");
        raw.d
            .push((index(path.clone(), *i)?, index(path.clone(), *j)?, rat(&path, c)?));
    }
    for (t, (i, j, k, c)) in doc.bracket.iter().enumerate() {
        let path = format!("$.bracket[{t}]");
        raw.bracket.push((
            index(path.clone(), *i)?,
            index(path.clone(), *j)?,
            index(path.clone(), *k)?,
            rat(&path, c)?,
        ));
    }
    Ok(raw)
}

pub fn dgla_to_json(m: &DGLAModel) -> String {
    let raw = m.to_raw();
    let mut d: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
    for (i, j, c) in raw.d {
        *d.entry((i, j)).or_insert_with(Rat::zero) += &c;
    }
    let mut bracket: BTreeMap<(usize, usize, usize), Rat> = BTreeMap::new();
    for (i, j, k, c) in raw.bracket {
        *bracket.entry((i, j, k)).or_insert_with(Rat::zero) += &c;
    }
    to_text(&DglaDoc {
        basis: raw
            .basis
            .into_iter()
            .map(|(name, degree)| BasisEntry { name, degree })
            .collect(),
        d: d.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| (i, j, c.to_string()))
            .collect(),
        bracket: bracket
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j, k), c)| (i, j, k, c.to_string()))
            .collect(),
    })
}

// ---- elements: {"coeffs": ["1", "0", ...]}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    coeffs: Vec<String>,
}

pub fn element_from_json(text: &str) -> Result<Vec<Rat>, SchemaError> {
    let doc: ElementDoc = from_text(text)?;
    rats("$.coeffs", &doc.coeffs)
}

pub fn element_to_value(coeffs: &[Rat]) -> Value {
    Value::from(strings(coeffs))
}

// ---- polyvectors: {"vars": [...], "terms": [{"theta": [0, 1], "coef": "x3"}]}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyvectorTerm {
    theta: Vec<usize>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyvectorDoc {
    vars: Vec<String>,
    terms: Vec<PolyvectorTerm>,
}

/// `θ` indices are 0-based positions in `vars`; repeated terms add up.
pub fn polyvector_from_json(text: &str) -> Result<Polyvector, SchemaError> {
    let doc: PolyvectorDoc = from_text(text)?;
    let vars = vars("$.vars", &doc.vars)?;
    let mut p = Polyvector::zero(&vars);
    for (t, term) in doc.terms.iter().enumerate() {
        let path = format!("$.terms[{t}]");
        let f = poly(&format!("{path}.coef"), &vars, &term.coef)?;
        let q = Polyvector::from_function(&f, &term.theta).map_err(|e| SchemaError::new(format!("{path}.theta"), e))?;
        p = p.try_add(&q).expect("same variables");
    }
    Ok(p)
}

fn polyvector_doc(p: &Polyvector) -> PolyvectorDoc {
    let vars = p.vars();
    let mut by_mask: BTreeMap<u32, Vec<(Vec<u32>, Rat)>> = BTreeMap::new();
    for (e, m, c) in p.terms() {
        by_mask.entry(m).or_default().push((e.clone(), c.clone()));
    }
    // Lower exterior degree first, then lexicographic in the θ indices.
    let mut masks: Vec<(Vec<usize>, Poly)> = by_mask
        .into_iter()
        .map(|(m, terms)| {
            let theta = (0..vars.len()).filter(|i| m & (1 << i) != 0).collect();
            (theta, Poly::from_terms(vars, terms))
        })
        .collect();
    masks.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    PolyvectorDoc {
        vars: vars.names().to_vec(),
        terms: masks
            .into_iter()
            .map(|(theta, f)| PolyvectorTerm {
                theta,
                coef: f.to_string(),
            })
            .collect(),
    }
}

pub fn polyvector_to_json(p: &Polyvector) -> String {
    to_text(&polyvector_doc(p))
}

pub fn polyvector_to_value(p: &Polyvector) -> Value {
    serde_json::to_value(polyvector_doc(p)).expect("documents serialize")
}

// ---- cohomology tables

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntry {
    p: usize,
    genus: u32,
    dim: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CohomologyDoc {
    dim: usize,
    hodge: Vec<u64>,
    #[serde(default)]
    tangent_trivial: bool,
    #[serde(default)]
    table: Vec<TableEntry>,
}

pub fn cohomology_from_json(text: &str) -> Result<CohomologyModel, SchemaError> {
    let doc: CohomologyDoc = from_text(text)?;
    let mut table = BTreeMap::new();
    for (t, e) in doc.table.iter().enumerate() {
        if table.insert((e.p, e.genus), e.dim).is_some() {
            return Err(SchemaError::new(format!("$.table[{t}]"), "duplicate (p, genus) entry"));
        }
    }
    CohomologyModel::new(doc.dim, doc.hodge, doc.tangent_trivial, table).map_err(|e| SchemaError::new("$", e))
}

pub fn cohomology_to_json(m: &CohomologyModel) -> String {
    to_text(&CohomologyDoc {
        dim: m.dim(),
        hodge: m.hodge().to_vec(),
        tangent_trivial: m.tangent_trivial(),
        table: m
            .table()
            .iter()
            .map(|(&(p, genus), &dim)| TableEntry { p, genus, dim })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tftwb_core::frobenius::validate;

    const QX2: &str = r#"{
  "dim": 2,
  "mult": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]],
  "unit": ["1", "0"],
  "counit": ["0", "1"]
}"#;

    #[test]
    fn frobenius_round_trip_is_canonical() {
        let a = validate(&frobenius_from_json(QX2).unwrap()).unwrap();
        assert_eq!(a, FrobeniusAlgebra::truncated_polynomial(2));
        let once = frobenius_to_json(&a);
        let twice = frobenius_to_json(&validate(&frobenius_from_json(&once).unwrap()).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn bad_rationals_and_shapes() {
        let e = frobenius_from_json(&QX2.replace(r#""unit": ["1", "0"]"#, r#""unit": ["1/0", "0"]"#)).unwrap_err();
        assert_eq!(e.path, "$.unit[0]");
        let e = frobenius_from_json(&QX2.replace(r#""counit": ["0", "1"]"#, r#""counit": ["0"]"#)).unwrap_err();
        assert_eq!(e.path, "$.counit");
        assert!(frobenius_from_json("{\"dim\": 1}").is_err());
    }

    #[test]
    fn mf_round_trip() {
        let text = r#"{"vars": ["x"], "rank": [1, 1], "D": [["0", "x"], ["x", "0"]], "c": "0", "w": "x^2"}"#;
        let m = mf_from_json(text).unwrap().build().unwrap();
        let once = mf_to_json(&m);
        assert_eq!(once, mf_to_json(&mf_from_json(&once).unwrap().build().unwrap()));
        let bad = text.replace(r#""w": "x^2""#, r#""w": "x^2 +""#);
        assert_eq!(mf_from_json(&bad).unwrap_err().path, "$.w");
    }

    #[test]
    fn polynomial_strings() {
        let v = Vars::new(["x"]);
        let p = poly("$", &v, "x^2 + 1/2 x").unwrap();
        let expect = Poly::from_terms(&v, [(vec![2], Rat::one()), (vec![1], Rat::new(1, 2))]);
        assert_eq!(p, expect);
    }

    #[test]
    fn dgla_round_trip_sorts_and_merges() {
        let text = r#"{"basis": [{"name": "a", "degree": 0}, {"name": "b", "degree": 0}],
                       "d": [],
                       "bracket": [[1, 0, 1, "-1"], [0, 1, 1, "1/2"], [0, 1, 1, "1/2"]]}"#;
        let m = tftwb_core::deformation::validate_dgla(&dgla_from_json(text).unwrap()).unwrap();
        let once = dgla_to_json(&m);
        let again = tftwb_core::deformation::validate_dgla(&dgla_from_json(&once).unwrap()).unwrap();
        assert_eq!(once, dgla_to_json(&again));
        assert!(once.find("[\n      0,").unwrap() < once.find("[\n      1,").unwrap());
        let bad = text.replace("[1, 0, 1,", "[1, 0, 7,");
        assert_eq!(dgla_from_json(&bad).unwrap_err().path, "$.bracket[0]");
    }

    #[test]
    fn polyvector_round_trip() {
        let text = r#"{"vars": ["x1", "x2", "x3"],
                       "terms": [{"theta": [1, 2], "coef": "x1"}, {"theta": [2, 0], "coef": "x2"},
                                 {"theta": [0, 1], "coef": "x3"}]}"#;
        let p = polyvector_from_json(text).unwrap();
        let once = polyvector_to_json(&p);
        assert_eq!(polyvector_from_json(&once).unwrap(), p);
        assert_eq!(once, polyvector_to_json(&polyvector_from_json(&once).unwrap()));
        let bad = text.replace("[2, 0]", "[2, 5]");
        assert_eq!(polyvector_from_json(&bad).unwrap_err().path, "$.terms[1].theta");
    }

    #[test]
    fn cohomology_tables() {
        let text =
            r#"{"dim": 1, "hodge": [1, 1], "table": [{"p": 0, "genus": 1, "dim": 2}, {"p": 1, "genus": 1, "dim": 2}]}"#;
        let m = cohomology_from_json(text).unwrap();
        let once = cohomology_to_json(&m);
        assert_eq!(cohomology_from_json(&once).unwrap(), m);
        assert!(cohomology_from_json(r#"{"dim": 2, "hodge": [1]}"#).is_err());
    }
}

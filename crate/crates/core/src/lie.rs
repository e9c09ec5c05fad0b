//! Finite-dimensional Lie algebras given by structure constants, with a
//! symmetric invariant bilinear form.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{LieError, ParseError};
use crate::rational::{self, Rational};

/// Dense coordinate vector of an element of `g`.
pub type GVector = Vec<Rational>;

/// Raw JSON shape of a Lie algebra file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieSpec {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    pub form: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: Value,
    pub j: Value,
    pub coeffs: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    names: Vec<String>,
    /// `brackets[i][j]` is `[b_i, b_j]` as a sparse list of `(index, coeff)`.
    brackets: Vec<Vec<Vec<(usize, Rational)>>>,
    form: Vec<Vec<Rational>>,
}

/// First violated identity found by [`LieAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Antisymmetry { i: String, j: String },
    Jacobi { i: String, j: String, k: String },
    FormSymmetry { i: String, j: String },
    Invariance { i: String, j: String, k: String, lhs: String, rhs: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j } => write!(f, "[{i},{j}] != -[{j},{i}]"),
            Violation::Jacobi { i, j, k } => write!(f, "Jacobi identity fails on ({i},{j},{k})"),
            Violation::FormSymmetry { i, j } => write!(f, "<{i},{j}> != <{j},{i}>"),
            Violation::Invariance { i, j, k, lhs, rhs } => {
                write!(f, "invariance fails at ({i},{j},{k}): <[{i},{j}],{k}> = {lhs} but <{i},[{j},{k}]> = {rhs}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn resolve_index(v: &Value, names: &[String]) -> Result<usize, LieError> {
    match v {
        Value::Number(n) => {
            let i = n.as_u64().ok_or_else(|| ParseError::UnknownBasis(n.to_string()))? as usize;
            if i >= names.len() {
                return Err(LieError::IndexOutOfRange { index: i, dim: names.len() });
            }
            Ok(i)
        }
        Value::String(s) => index_of(names, s),
        other => Err(ParseError::UnknownBasis(other.to_string()).into()),
    }
}

fn index_of(names: &[String], s: &str) -> Result<usize, LieError> {
    if let Some(i) = names.iter().position(|n| n == s) {
        return Ok(i);
    }
    match s.parse::<usize>() {
        Ok(i) if i < names.len() => Ok(i),
        Ok(i) => Err(LieError::IndexOutOfRange { index: i, dim: names.len() }),
        Err(_) => Err(ParseError::UnknownBasis(s.to_string()).into()),
    }
}

impl LieAlgebra {
    /// Builds an algebra from explicit data. `brackets` lists `(i, j, [b_i,b_j])`;
    /// a missing `(j, i)` entry is completed by antisymmetry.
    pub fn new(
        names: Vec<String>,
        brackets: &[(usize, usize, Vec<(usize, Rational)>)],
        form: Vec<Vec<Rational>>,
    ) -> Result<Self, LieError> {
        let dim = names.len();
        if dim == 0 {
            return Err(LieError::EmptyAlgebra);
        }
        for (idx, n) in names.iter().enumerate() {
            if n.is_empty()
                || n == "1"
                || n == "vac"
                || !n.chars().all(|c| c.is_alphanumeric() || c == '_')
                || n.chars().next().is_some_and(|c| c.is_ascii_digit())
                || names[..idx].contains(n)
            {
                return Err(LieError::BadName(n.clone()));
            }
        }
        if form.len() != dim || form.iter().any(|row| row.len() != dim) {
            return Err(LieError::FormShape {
                dim,
                rows: form.len(),
                cols: form.iter().map(Vec::len).max().unwrap_or(0),
            });
        }
        let mut given = vec![vec![None::<Vec<(usize, Rational)>>; dim]; dim];
        for (i, j, v) in brackets {
            for &x in [i, j].into_iter().chain(v.iter().map(|(k, _)| k)) {
                if x >= dim {
                    return Err(LieError::IndexOutOfRange { index: x, dim });
                }
            }
            let mut acc = vec![Rational::zero(); dim];
            for (k, c) in v {
                acc[*k] += c;
            }
            given[*i][*j] = Some(sparse(&acc));
        }
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                table[i][j] = match (&given[i][j], &given[j][i]) {
                    (Some(v), _) => v.clone(),
                    (None, Some(v)) => v.iter().map(|(k, c)| (*k, -c)).collect(),
                    (None, None) => Vec::new(),
                };
            }
        }
        Ok(LieAlgebra { names, brackets: table, form })
    }

    pub fn from_spec(spec: &LieSpec) -> Result<Self, LieError> {
        if spec.basis.len() != spec.dim {
            return Err(LieError::BasisNames { dim: spec.dim, names: spec.basis.len() });
        }
        let names = spec.basis.clone();
        let mut brackets = Vec::with_capacity(spec.brackets.len());
        for entry in &spec.brackets {
            let i = resolve_index(&entry.i, &names)?;
            let j = resolve_index(&entry.j, &names)?;
            let mut v = Vec::new();
            for (k, c) in &entry.coeffs {
                v.push((index_of(&names, k)?, rational::from_json(c)?));
            }
            brackets.push((i, j, v));
        }
        let form = spec
            .form
            .iter()
            .map(|row| row.iter().map(rational::from_json).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(names, &brackets, form)
    }

    pub fn from_json_str(s: &str) -> Result<Self, LieError> {
        let spec: LieSpec =
            serde_json::from_str(s).map_err(|e| ParseError::Json(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> LieSpec {
        let dim = self.dim();
        let mut brackets = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if self.brackets[i][j].is_empty() {
                    continue;
                }
                let coeffs = self.brackets[i][j]
                    .iter()
                    .map(|(k, c)| (self.names[*k].clone(), Value::String(rational::format(c))))
                    .collect();
                brackets.push(BracketEntry {
                    i: Value::String(self.names[i].clone()),
                    j: Value::String(self.names[j].clone()),
                    coeffs,
                });
            }
        }
        let form = self
            .form
            .iter()
            .map(|row| row.iter().map(|c| Value::String(rational::format(c))).collect())
            .collect();
        LieSpec { dim, basis: self.names.clone(), brackets, form }
    }

    /// `sl_2` with basis `e, f, h` and the trace form of the defining representation.
    pub fn sl2() -> Self {
        let q = rational::int;
        Self::new(
            vec!["e".into(), "f".into(), "h".into()],
            &[
                (0, 1, vec![(2, q(1))]),
                (2, 0, vec![(0, q(2))]),
                (2, 1, vec![(1, q(-2))]),
            ],
            vec![
                vec![q(0), q(1), q(0)],
                vec![q(1), q(0), q(0)],
                vec![q(0), q(0), q(2)],
            ],
        )
        .expect("sl2 data is well formed")
    }

    /// Abelian algebra of dimension `dim` with the identity form.
    pub fn abelian(dim: usize) -> Self {
        let names = (0..dim).map(|i| format!("a{i}")).collect();
        let form = (0..dim)
            .map(|i| (0..dim).map(|j| rational::int((i == j) as i64)).collect())
            .collect();
        Self::new(names, &[], form).expect("abelian data is well formed")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize, ParseError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ParseError::UnknownBasis(name.to_string()))
    }

    /// `[b_i, b_j]` as a sparse list.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.brackets[i][j]
    }

    pub fn form(&self, i: usize, j: usize) -> &Rational {
        &self.form[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> GVector {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = rational::one();
        v
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, a: &[Rational], b: &[Rational]) -> GVector {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (k, c) in &self.brackets[i][j] {
                    out[*k] += ai * bj * c;
                }
            }
        }
        out
    }

    pub fn pairing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                acc += ai * bj * &self.form[i][j];
            }
        }
        acc
    }

    /// Checks antisymmetry, the Jacobi identity, symmetry and invariance of the
    /// form, in that order, over all basis pairs and triples.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let e = |i| self.basis_vector(i);
        let nm = |i: usize| self.names[i].clone();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.bracket(&e(i), &e(j));
                let rhs: GVector = self.bracket(&e(j), &e(i)).into_iter().map(|c| -c).collect();
                if lhs != rhs {
                    return ValidationReport { violation: Some(Violation::Antisymmetry { i: nm(i), j: nm(j) }) };
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t1 = self.bracket(&self.bracket(&e(i), &e(j)), &e(k));
                    let t2 = self.bracket(&self.bracket(&e(j), &e(k)), &e(i));
                    let t3 = self.bracket(&self.bracket(&e(k), &e(i)), &e(j));
                    if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return ValidationReport {
                            violation: Some(Violation::Jacobi { i: nm(i), j: nm(j), k: nm(k) }),
                        };
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.form[i][j] != self.form[j][i] {
                    return ValidationReport { violation: Some(Violation::FormSymmetry { i: nm(i), j: nm(j) }) };
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.pairing(&self.bracket(&e(i), &e(j)), &e(k));
                    let rhs = self.pairing(&e(i), &self.bracket(&e(j), &e(k)));
                    if lhs != rhs {
                        return ValidationReport {
                            violation: Some(Violation::Invariance {
                                i: nm(i),
                                j: nm(j),
                                k: nm(k),
                                lhs: rational::format(&lhs),
                                rhs: rational::format(&rhs),
                            }),
                        };
                    }
                }
            }
        }
        ValidationReport { violation: None }
    }

    /// Replaces the coefficient of `b_k` in `[b_i, b_j]` without touching `[b_j, b_i]`.
    pub fn with_structure_constant(&self, i: usize, j: usize, k: usize, value: Rational) -> Self {
        let mut out = self.clone();
        let mut dense = vec![Rational::zero(); self.dim()];
        for (x, c) in &self.brackets[i][j] {
            dense[*x] = c.clone();
        }
        dense[k] = value;
        out.brackets[i][j] = sparse(&dense);
        out
    }

    /// Replaces a single form entry `<b_i, b_j>` (and only that entry).
    pub fn with_form_entry(&self, i: usize, j: usize, value: Rational) -> Self {
        let mut out = self.clone();
        out.form[i][j] = value;
        out
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.brackets[i][j]
            .iter()
            .find(|(x, _)| *x == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }
}

fn sparse(v: &[Rational]) -> Vec<(usize, Rational)> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Validates a raw spec: shape errors are returned as `Err`, identity
/// violations as a failing report.
pub fn validate_lie_spec(spec: &LieSpec) -> Result<ValidationReport, LieError> {
    Ok(LieAlgebra::from_spec(spec)?.validate())
}

//! PBW monomials and exact state vectors of the vacuum module.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::ParseError;
use crate::index::TorIndex;
use crate::lie::LieAlgebra;
use crate::rational::{self, Rational};

/// The creation mode `b_basis ⊗ t0^{-k} t^m`, `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CreationMode {
    pub basis: usize,
    pub k: i64,
    pub m: TorIndex,
}

impl CreationMode {
    pub fn new(basis: usize, k: i64, m: TorIndex) -> Self {
        debug_assert!(k >= 1);
        CreationMode { basis, k, m }
    }
}

/// PBW order: `k` descending, then basis index ascending, then `m` lexicographic.
impl Ord for CreationMode {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .k
            .cmp(&self.k)
            .then(self.basis.cmp(&other.basis))
            .then_with(|| self.m.cmp(&other.m))
    }
}

impl PartialOrd for CreationMode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the base space `g ⊕ C`: either the vacuum `1` or a basis vector of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tail {
    Vacuum,
    Basis(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    /// Creation modes in canonical (non-decreasing) PBW order.
    pub word: Vec<CreationMode>,
    pub tail: Tail,
}

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial { word: Vec::new(), tail: Tail::Vacuum }
    }

    pub fn tail(b: usize) -> Self {
        Monomial { word: Vec::new(), tail: Tail::Basis(b) }
    }

    pub fn is_canonical(&self) -> bool {
        self.word.windows(2).all(|w| w[0] <= w[1]) && self.word.iter().all(|c| c.k >= 1)
    }

    /// `Σ k_i`, plus one when the tail lies in `g`.
    pub fn degree(&self) -> i64 {
        self.word.iter().map(|c| c.k).sum::<i64>() + matches!(self.tail, Tail::Basis(_)) as i64
    }

    /// Number of creation modes plus one for a `g` tail.
    pub fn depth(&self) -> usize {
        self.word.len() + matches!(self.tail, Tail::Basis(_)) as usize
    }

    /// Total `t`-multidegree `Σ m_i` of the creation modes.
    pub fn multidegree(&self, rank: usize) -> TorIndex {
        self.word.iter().fold(TorIndex::zero(rank), |acc, c| &acc + &c.m)
    }

    /// Splits off the leftmost creation mode.
    pub fn split_first(&self) -> Option<(&CreationMode, Monomial)> {
        let (first, rest) = self.word.split_first()?;
        Some((first, Monomial { word: rest.to_vec(), tail: self.tail }))
    }

    pub fn display<'a>(&'a self, lie: &'a LieAlgebra) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, lie }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    lie: &'a LieAlgebra,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.mono.word {
            write!(f, "{}({},{})", self.lie.name(c.basis), -c.k, c.m)?;
        }
        match self.mono.tail {
            Tail::Vacuum => write!(f, "|1⟩"),
            Tail::Basis(b) => write!(f, "|{}⟩", self.lie.name(b)),
        }
    }
}

/// Finite exact linear combination of PBW monomials. Never stores zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StateVector {
    terms: BTreeMap<Monomial, Rational>,
}

impl StateVector {
    pub fn zero() -> Self {
        StateVector::default()
    }

    pub fn vacuum() -> Self {
        Self::from_monomial(Monomial::vacuum())
    }

    pub fn tail(b: usize) -> Self {
        Self::from_monomial(Monomial::tail(b))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut s = Self::zero();
        s.add_term(m, rational::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &StateVector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &StateVector) {
        self.add_scaled(other, &rational::one());
    }

    pub fn scaled(&self, c: &Rational) -> StateVector {
        let mut out = StateVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        let mut out = self.clone();
        out.add_scaled(other, &rational::int(-1));
        out
    }

    /// Set of homogeneous degrees present.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(Monomial::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn display<'a>(&'a self, lie: &'a LieAlgebra) -> StateDisplay<'a> {
        StateDisplay { state: self, lie }
    }

    /// Deterministic JSON form: a list of `{word, tail, coeff}` records in monomial order.
    pub fn to_json(&self, lie: &LieAlgebra) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let word: Vec<Value> = m
                        .word
                        .iter()
                        .map(|cm| {
                            let mut v = vec![json!(lie.name(cm.basis)), json!(cm.k)];
                            v.extend(cm.m.as_slice().iter().map(|x| json!(x)));
                            Value::Array(v)
                        })
                        .collect();
                    let tail = match m.tail {
                        Tail::Vacuum => "1".to_string(),
                        Tail::Basis(b) => lie.name(b).to_string(),
                    };
                    json!({"word": word, "tail": tail, "coeff": rational::format(c)})
                })
                .collect(),
        )
    }

    /// Inverse of [`StateVector::to_json`]; words are re-checked for canonical order.
    pub fn from_json(lie: &LieAlgebra, rank: usize, v: &Value) -> Result<Self, ParseError> {
        let bad = |reason: &str| ParseError::State { expr: v.to_string(), reason: reason.to_string() };
        let items = v.as_array().ok_or_else(|| bad("expected a list of terms"))?;
        let mut out = StateVector::zero();
        for item in items {
            let word_v = item.get("word").and_then(Value::as_array).ok_or_else(|| bad("missing word"))?;
            let mut word = Vec::with_capacity(word_v.len());
            for cm in word_v {
                let parts = cm.as_array().ok_or_else(|| bad("creation mode must be a list"))?;
                if parts.len() != rank + 2 {
                    return Err(bad("creation mode has wrong arity"));
                }
                let basis = match &parts[0] {
                    Value::String(s) => lie.index(s)?,
                    Value::Number(n) => n.as_u64().map(|x| x as usize).filter(|&x| x < lie.dim()).ok_or_else(|| bad("basis index"))?,
                    _ => return Err(bad("basis")),
                };
                let k = parts[1].as_i64().filter(|&k| k >= 1).ok_or_else(|| bad("k must be an integer >= 1"))?;
                let m: Vec<i64> = parts[2..].iter().map(|x| x.as_i64().ok_or_else(|| bad("m"))).collect::<Result<_, _>>()?;
                word.push(CreationMode::new(basis, k, m.into()));
            }
            let tail = match item.get("tail").and_then(Value::as_str) {
                Some("1") | Some("vac") | None => Tail::Vacuum,
                Some(name) => Tail::Basis(lie.index(name)?),
            };
            let coeff = rational::from_json(item.get("coeff").ok_or_else(|| bad("missing coeff"))?)?;
            let mono = Monomial { word, tail };
            if !mono.is_canonical() {
                return Err(bad("word is not in canonical PBW order"));
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

pub struct StateDisplay<'a> {
    state: &'a StateVector,
    lie: &'a LieAlgebra,
}

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.state.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.state.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·{}", c, m.display(self.lie))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn cm(b: usize, k: i64, m: i64) -> CreationMode {
        CreationMode::new(b, k, TorIndex::from_slice(&[m]))
    }

    #[test]
    fn canonical_order_puts_high_k_first() {
        assert!(cm(2, 3, 0) < cm(0, 1, 0));
        assert!(cm(0, 1, 5) < cm(1, 1, -5));
        assert!(cm(0, 1, -1) < cm(0, 1, 0));
    }

    #[test]
    fn degrees() {
        let m = Monomial { word: vec![cm(0, 2, 1), cm(1, 1, 0)], tail: Tail::Vacuum };
        assert_eq!(m.degree(), 3);
        assert_eq!(StateVector::vacuum().degrees(), vec![0]);
        assert_eq!(StateVector::tail(1).degrees(), vec![1]);
        let mut s = StateVector::from_monomial(m);
        s.add_term(Monomial::tail(0), int(2));
        assert_eq!(s.degrees(), vec![1, 3]);
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut s = StateVector::tail(0);
        s.add_term(Monomial::tail(0), int(-1));
        assert!(s.is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let g = LieAlgebra::sl2();
        let mut s = StateVector::zero();
        s.add_term(Monomial { word: vec![cm(0, 2, 1), cm(1, 1, 0)], tail: Tail::Basis(2) }, int(3) / int(4));
        s.add_term(Monomial::vacuum(), int(-1));
        let v = s.to_json(&g);
        assert_eq!(StateVector::from_json(&g, 1, &v).unwrap(), s);
        assert_eq!(s.display(&g).to_string(), "-1·|1⟩ + 3/4·e(-2,1)f(-1,0)|h⟩");
    }

    #[test]
    fn non_canonical_json_is_rejected() {
        let g = LieAlgebra::sl2();
        let v = serde_json::json!([{"word": [["f", 1, 0], ["e", 2, 0]], "tail": "1", "coeff": "1"}]);
        assert!(StateVector::from_json(&g, 1, &v).is_err());
    }
}

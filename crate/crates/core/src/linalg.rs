//! Incremental row echelon form over Q for sparse state vectors.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::pbw::{Monomial, StateVector};
use crate::rational::Rational;

/// Rows keyed by pivot monomial; every row has coefficient 1 at its pivot and
/// zero at all other pivots (reduced echelon form).
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<Monomial, StateVector>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &StateVector> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.keys()
    }

    /// Remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &StateVector) -> StateVector {
        let mut out = v.clone();
        for (p, row) in &self.rows {
            let c = out.coeff(p);
            if !c.is_zero() {
                out.add_scaled(row, &-c);
            }
        }
        out
    }

    pub fn contains(&self, v: &StateVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &StateVector) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.terms().next().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        let row = r.scaled(&(Rational::from_integer(1.into()) / lead));
        for other in self.rows.values_mut() {
            let c = other.coeff(&pivot);
            if !c.is_zero() {
                other.add_scaled(&row, &-c);
            }
        }
        self.rows.insert(pivot, row);
        true
    }
}

/// Rank of a list of vectors.
pub fn rank(vs: &[StateVector]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sv(entries: &[(usize, i64)]) -> StateVector {
        let mut s = StateVector::zero();
        for &(b, c) in entries {
            s.add_term(Monomial::tail(b), int(c));
        }
        s
    }

    #[test]
    fn rank_of_dependent_set() {
        let vs = [sv(&[(0, 1), (1, 2)]), sv(&[(1, 1), (2, 1)]), sv(&[(0, 1), (1, 4), (2, 2)])];
        assert_eq!(rank(&vs), 2);
    }

    #[test]
    fn reduce_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&sv(&[(0, 2), (1, 1)])));
        assert!(e.insert(&sv(&[(1, 3)])));
        assert!(!e.insert(&sv(&[(0, 1)])));
        assert!(e.contains(&sv(&[(0, 5), (1, -7)])));
        assert!(!e.contains(&sv(&[(2, 1)])));
        for row in e.rows() {
            assert_eq!(row.len(), 1);
        }
    }
}

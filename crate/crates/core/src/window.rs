//! Finite coefficient boxes over which formal identities are checked.

use serde_json::{json, Value};

use crate::error::FieldError;
use crate::index::{box_points, MultiIndex, TorIndex};
use crate::lie::LieAlgebra;
use crate::pbw::StateVector;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModeWindow {
    pub m0: (i64, i64),
    pub m: Vec<(i64, i64)>,
    pub states: Vec<StateVector>,
}

impl ModeWindow {
    pub fn new(m0: (i64, i64), m: Vec<(i64, i64)>, states: Vec<StateVector>) -> Result<Self, FieldError> {
        let w = ModeWindow { m0, m, states };
        if w.is_empty() {
            return Err(FieldError::EmptyWindow);
        }
        Ok(w)
    }

    /// Symmetric box `|m0| <= a`, `|m_i| <= b` in rank `rank`.
    pub fn symmetric(rank: usize, a: i64, b: i64, states: Vec<StateVector>) -> Result<Self, FieldError> {
        Self::new((-a, a), vec![(-b, b); rank], states)
    }

    pub fn is_empty(&self) -> bool {
        self.m0.0 > self.m0.1 || self.m.iter().any(|(lo, hi)| lo > hi) || self.states.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn m0_values(&self) -> std::ops::RangeInclusive<i64> {
        self.m0.0..=self.m0.1
    }

    pub fn tor_points(&self) -> Vec<TorIndex> {
        box_points(&self.m)
    }

    pub fn indices(&self) -> Vec<MultiIndex> {
        let pts = self.tor_points();
        self.m0_values()
            .flat_map(|m0| pts.iter().map(move |m| MultiIndex::new(m0, m.clone())))
            .collect()
    }

    /// Number of (index, state) cells.
    pub fn cardinality(&self) -> u64 {
        let mut n = (self.m0.1 - self.m0.0 + 1).max(0) as u64;
        for (lo, hi) in &self.m {
            n *= (hi - lo + 1).max(0) as u64;
        }
        n * self.states.len() as u64
    }

    pub fn with_states(&self, states: Vec<StateVector>) -> Self {
        ModeWindow { m0: self.m0, m: self.m.clone(), states }
    }

    pub fn to_json(&self, lie: &LieAlgebra) -> Value {
        json!({
            "m0": [self.m0.0, self.m0.1],
            "m": self.m.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "states": self.states.iter().map(|s| s.display(lie).to_string()).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_windows_are_rejected() {
        assert_eq!(ModeWindow::new((1, 0), vec![(0, 0)], vec![StateVector::vacuum()]), Err(FieldError::EmptyWindow));
        assert!(ModeWindow::new((0, 0), vec![(0, 0)], vec![]).is_err());
    }

    #[test]
    fn cardinality_counts_cells() {
        let w = ModeWindow::symmetric(2, 1, 1, vec![StateVector::vacuum(), StateVector::tail(0)]).unwrap();
        assert_eq!(w.cardinality(), 3 * 9 * 2);
        assert_eq!(w.indices().len(), 27);
    }
}

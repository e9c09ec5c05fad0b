use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// A toroidal multi-index `m in Z^r`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorIndex(pub SmallVec<[i64; 3]>);

impl TorIndex {
    pub fn zero(rank: usize) -> Self {
        TorIndex(SmallVec::from_elem(0, rank))
    }

    pub fn from_slice(m: &[i64]) -> Self {
        TorIndex(SmallVec::from_slice(m))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for TorIndex {
    fn from(v: Vec<i64>) -> Self {
        TorIndex(SmallVec::from_vec(v))
    }
}

impl Add for &TorIndex {
    type Output = TorIndex;
    fn add(self, rhs: &TorIndex) -> TorIndex {
        debug_assert_eq!(self.rank(), rhs.rank());
        TorIndex(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TorIndex {
    type Output = TorIndex;
    fn sub(self, rhs: &TorIndex) -> TorIndex {
        debug_assert_eq!(self.rank(), rhs.rank());
        TorIndex(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &TorIndex {
    type Output = TorIndex;
    fn neg(self) -> TorIndex {
        TorIndex(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for TorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// A full mode index `(m0, m) in Z x Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex {
    pub m0: i64,
    pub m: TorIndex,
}

impl MultiIndex {
    pub fn new(m0: i64, m: TorIndex) -> Self {
        MultiIndex { m0, m }
    }

    pub fn rank(&self) -> usize {
        self.m.rank()
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        MultiIndex::new(self.m0 + rhs.m0, &self.m + &rhs.m)
    }
}

impl Neg for &MultiIndex {
    type Output = MultiIndex;
    fn neg(self) -> MultiIndex {
        MultiIndex::new(-self.m0, -&self.m)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.m0, self.m)
    }
}

/// All points of the integer box `prod [lo_i, hi_i]`, in lexicographic order.
pub fn box_points(ranges: &[(i64, i64)]) -> Vec<TorIndex> {
    let mut out = vec![TorIndex::default()];
    for &(lo, hi) in ranges {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1).max(0) as usize);
        for p in &out {
            for x in lo..=hi {
                let mut q = p.clone();
                q.0.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_enumeration_is_lexicographic() {
        let pts = box_points(&[(0, 1), (-1, 0)]);
        let flat: Vec<Vec<i64>> = pts.iter().map(|p| p.0.to_vec()).collect();
        assert_eq!(flat, vec![vec![0, -1], vec![0, 0], vec![1, -1], vec![1, 0]]);
        assert_eq!(box_points(&[]).len(), 1);
        assert!(box_points(&[(1, 0)]).is_empty());
    }

    #[test]
    fn arithmetic_is_componentwise() {
        let a = TorIndex::from_slice(&[1, -2]);
        let b = TorIndex::from_slice(&[3, 5]);
        assert_eq!((&a + &b).0.to_vec(), vec![4, 3]);
        assert_eq!((&a - &b).0.to_vec(), vec![-2, -7]);
        assert!((&a + &(-&a)).is_zero());
    }
}

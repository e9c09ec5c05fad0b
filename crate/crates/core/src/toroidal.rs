//! The toroidal Lie algebra `g ⊗ C[t0^±, t1^±, .., tr^±] ⊕ Ck`, extended by the
//! degree derivations `d0 = -∂/∂t0` and `di = -ti ∂/∂ti`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::LieError;
use crate::index::{MultiIndex, TorIndex};
use crate::lie::LieAlgebra;
use crate::rational::{self, Rational};

/// `b_basis ⊗ t0^{m0} t^m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LoopMode {
    pub basis: usize,
    pub index: MultiIndex,
}

impl LoopMode {
    pub fn new(basis: usize, m0: i64, m: TorIndex) -> Self {
        LoopMode { basis, index: MultiIndex::new(m0, m) }
    }

    pub fn m0(&self) -> i64 {
        self.index.m0
    }

    pub fn m(&self) -> &TorIndex {
        &self.index.m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToroidalElement {
    rank: usize,
    loops: BTreeMap<LoopMode, Rational>,
    central: Rational,
    der: Vec<Rational>,
}

impl ToroidalElement {
    pub fn zero(rank: usize) -> Self {
        ToroidalElement {
            rank,
            loops: BTreeMap::new(),
            central: Rational::zero(),
            der: vec![Rational::zero(); rank + 1],
        }
    }

    pub fn loop_mode(mode: LoopMode) -> Self {
        let mut x = Self::zero(mode.index.rank());
        x.add_loop(mode, rational::one());
        x
    }

    pub fn central(rank: usize) -> Self {
        let mut x = Self::zero(rank);
        x.central = rational::one();
        x
    }

    pub fn derivation(rank: usize, i: usize) -> Self {
        let mut x = Self::zero(rank);
        x.der[i] = rational::one();
        x
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn loops(&self) -> &BTreeMap<LoopMode, Rational> {
        &self.loops
    }

    pub fn central_coeff(&self) -> &Rational {
        &self.central
    }

    pub fn der_coeffs(&self) -> &[Rational] {
        &self.der
    }

    pub fn is_zero(&self) -> bool {
        self.loops.is_empty() && self.central.is_zero() && self.der.iter().all(Zero::is_zero)
    }

    pub fn add_loop(&mut self, mode: LoopMode, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.loops.entry(mode).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.loops.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_central(&mut self, c: Rational) {
        self.central += c;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.rank);
        out.add_scaled(self, c);
        out
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (m, v) in &other.loops {
            self.add_loop(m.clone(), v * c);
        }
        self.central += &other.central * c;
        for (d, v) in self.der.iter_mut().zip(&other.der) {
            *d += v * c;
        }
    }
}

impl fmt::Display for ToroidalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (m, c) in &self.loops {
            terms.push(format!("{}·b{}{}", c, m.basis, m.index));
        }
        if !self.central.is_zero() {
            terms.push(format!("{}·k", self.central));
        }
        for (i, c) in self.der.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            terms.push(format!("{c}·d{i}"));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `[a ⊗ t0^{m0} t^m, b ⊗ t0^{n0} t^n] = [a,b] ⊗ t0^{m0+n0} t^{m+n} + m0 <a,b> δ k`.
pub fn bracket_loop_modes(lie: &LieAlgebra, x: &LoopMode, y: &LoopMode) -> ToroidalElement {
    let rank = x.index.rank();
    let mut out = ToroidalElement::zero(rank);
    let sum = &x.index + &y.index;
    for (k, c) in lie.bracket_basis(x.basis, y.basis) {
        out.add_loop(LoopMode { basis: *k, index: sum.clone() }, c.clone());
    }
    if sum.m0 == 0 && sum.m.is_zero() {
        out.central = rational::int(x.index.m0) * lie.form(x.basis, y.basis);
    }
    out
}

/// `[d_i, a ⊗ t0^{m0} t^m]`: `-m0 · a ⊗ t0^{m0-1} t^m` for `i = 0`, `-m_i · a ⊗ t0^{m0} t^m` otherwise.
pub fn derivation_on_mode(i: usize, x: &LoopMode) -> ToroidalElement {
    let mut out = ToroidalElement::zero(x.index.rank());
    if i == 0 {
        let shifted = LoopMode::new(x.basis, x.index.m0 - 1, x.index.m.clone());
        out.add_loop(shifted, rational::int(-x.index.m0));
    } else {
        out.add_loop(x.clone(), rational::int(-x.index.m.get(i - 1)));
    }
    out
}

/// The toroidal bracket extended bilinearly, including the derivations.
pub fn toroidal_bracket(
    lie: &LieAlgebra,
    x: &ToroidalElement,
    y: &ToroidalElement,
) -> Result<ToroidalElement, LieError> {
    if x.rank != y.rank {
        return Err(LieError::RankMismatch { left: x.rank, right: y.rank });
    }
    let mut out = ToroidalElement::zero(x.rank);
    for (mx, cx) in &x.loops {
        for (my, cy) in &y.loops {
            out.add_scaled(&bracket_loop_modes(lie, mx, my), &(cx * cy));
        }
    }
    for (i, di) in x.der.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (my, cy) in &y.loops {
            out.add_scaled(&derivation_on_mode(i, my), &(di * cy));
        }
    }
    for (i, di) in y.der.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (mx, cx) in &x.loops {
            out.add_scaled(&derivation_on_mode(i, mx), &-(di * cx));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn mode(b: usize, m0: i64, m: &[i64]) -> ToroidalElement {
        ToroidalElement::loop_mode(LoopMode::new(b, m0, TorIndex::from_slice(m)))
    }

    #[test]
    fn e_f_bracket_has_central_term() {
        let g = LieAlgebra::sl2();
        let z = toroidal_bracket(&g, &mode(0, 1, &[1]), &mode(1, -1, &[-1])).unwrap();
        let mut expected = mode(2, 0, &[0]);
        expected.add_central(int(1));
        assert_eq!(z, expected);
    }

    #[test]
    fn central_element_is_central() {
        let g = LieAlgebra::sl2();
        let k = ToroidalElement::central(1);
        for x in [mode(0, 2, &[1]), ToroidalElement::derivation(1, 0), k.clone()] {
            assert!(toroidal_bracket(&g, &k, &x).unwrap().is_zero());
        }
    }

    #[test]
    fn derivation_signs() {
        let g = LieAlgebra::sl2();
        let x = mode(0, 3, &[2, -1]);
        let d0 = toroidal_bracket(&g, &ToroidalElement::derivation(2, 0), &x).unwrap();
        assert_eq!(d0, mode(0, 2, &[2, -1]).scale(&int(-3)));
        let d2 = toroidal_bracket(&g, &ToroidalElement::derivation(2, 2), &x).unwrap();
        assert_eq!(d2, x.scale(&int(1)));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let g = LieAlgebra::sl2();
        assert!(toroidal_bracket(&g, &mode(0, 0, &[0]), &mode(0, 0, &[0, 0])).is_err());
    }
}

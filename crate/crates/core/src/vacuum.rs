//! The induced vacuum module `V(ℓ,0) = U(L̂₋) ⊗ (g ⊕ C)` on its PBW basis.

use std::sync::Arc;

use num_traits::Zero;

use crate::cache::{CacheStats, ShardedLru};
use crate::error::ParseError;
use crate::index::TorIndex;
use crate::lie::LieAlgebra;
use crate::pbw::{CreationMode, Monomial, StateVector, Tail};
use crate::rational::{self, Rational};

/// A loop mode `a ⊗ t0^{n0} t^n` acting on the module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub basis: usize,
    pub n0: i64,
    pub n: TorIndex,
}

impl Mode {
    pub fn new(basis: usize, n0: i64, n: TorIndex) -> Self {
        Mode { basis, n0, n }
    }
}

type ActKey = (Mode, Monomial);

pub struct VacuumModule {
    lie: Arc<LieAlgebra>,
    rank: usize,
    level: Rational,
    central: Rational,
    cache: Option<ShardedLru<ActKey, StateVector>>,
}

impl VacuumModule {
    pub fn new(lie: Arc<LieAlgebra>, rank: usize, level: Rational, cache_capacity: usize) -> Self {
        let central = level.clone();
        VacuumModule {
            lie,
            rank,
            level,
            central,
            cache: (cache_capacity > 0).then(|| ShardedLru::new(cache_capacity)),
        }
    }

    /// A deliberately inconsistent module in which the central element acts by
    /// `ℓ + shift` inside commutators but by `ℓ` on the tail space.
    pub fn with_central_shift(mut self, shift: Rational) -> Self {
        self.central = &self.level + shift;
        self
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn lie_arc(&self) -> &Arc<LieAlgebra> {
        &self.lie
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }

    pub fn cache_stats(&self) -> Option<CacheStats> {
        self.cache.as_ref().map(ShardedLru::stats)
    }

    /// `(a ⊗ t0^k t^m) · tail` for `k >= 0`: zero on `1`; on `b ∈ g`, `[a,b]` for
    /// `k = 0`, `ℓ<a,b> 1` for `k = 1` and zero beyond.
    pub fn base_action(&self, a: usize, k: i64, tail: Tail) -> StateVector {
        assert!(k >= 0, "base action is defined for nonnegative t0-degree only");
        let mut out = StateVector::zero();
        if let Tail::Basis(b) = tail {
            match k {
                0 => {
                    for (c, coeff) in self.lie.bracket_basis(a, b) {
                        out.add_term(Monomial::tail(*c), coeff.clone());
                    }
                }
                1 => out.add_term(Monomial::vacuum(), self.lie.form(a, b) * &self.level),
                _ => {}
            }
        }
        out
    }

    pub fn act(&self, mode: &Mode, state: &StateVector) -> StateVector {
        let mut out = StateVector::zero();
        for (m, c) in state.terms() {
            out.add_scaled(&self.act_mono(mode, m), c);
        }
        out
    }

    /// Applies `modes` right to left: `modes[0] · (modes[1] · (... · state))`.
    pub fn act_word(&self, modes: &[Mode], state: &StateVector) -> StateVector {
        modes.iter().rev().fold(state.clone(), |s, m| self.act(m, &s))
    }

    pub fn act_mono(&self, mode: &Mode, mono: &Monomial) -> Arc<StateVector> {
        debug_assert_eq!(mode.n.rank(), self.rank);
        match &self.cache {
            Some(cache) => {
                let key = (mode.clone(), mono.clone());
                if let Some(v) = cache.get(&key) {
                    return v;
                }
                let v = Arc::new(self.act_mono_uncached(mode, mono));
                cache.insert(key, v.clone());
                v
            }
            None => Arc::new(self.act_mono_uncached(mode, mono)),
        }
    }

    fn act_mono_uncached(&self, mode: &Mode, mono: &Monomial) -> StateVector {
        if mode.n0 < 0 {
            return self.create(CreationMode::new(mode.basis, -mode.n0, mode.n.clone()), mono);
        }
        let Some((first, rest)) = mono.split_first() else {
            return self.base_action(mode.basis, mode.n0, mono.tail);
        };
        // X · f · R = f · (X · R) + [X, f] · R
        let mut out = self.prepend_all(first, &self.act_mono(mode, &rest));
        let n0 = mode.n0 - first.k;
        let n = &mode.n + &first.m;
        for (c, coeff) in self.lie.bracket_basis(mode.basis, first.basis) {
            let shifted = Mode::new(*c, n0, n.clone());
            out.add_scaled(&self.act_mono(&shifted, &rest), coeff);
        }
        if n0 == 0 && n.is_zero() {
            let central = rational::int(mode.n0) * self.lie.form(mode.basis, first.basis) * &self.central;
            if !central.is_zero() {
                out.add_term(rest, central);
            }
        }
        out
    }

    /// `c · mono` rewritten into canonical order.
    fn create(&self, c: CreationMode, mono: &Monomial) -> StateVector {
        let Some(first) = mono.word.first() else {
            return StateVector::from_monomial(Monomial { word: vec![c], tail: mono.tail });
        };
        if c <= *first {
            let mut word = Vec::with_capacity(mono.word.len() + 1);
            word.push(c);
            word.extend_from_slice(&mono.word);
            return StateVector::from_monomial(Monomial { word, tail: mono.tail });
        }
        // c · f · R = f · (c · R) + [c, f] · R; the bracket lands in t0-degree <= -2
        // so no central term appears.
        let rest = Monomial { word: mono.word[1..].to_vec(), tail: mono.tail };
        let c_mode = Mode::new(c.basis, -c.k, c.m.clone());
        let mut out = self.prepend_all(first, &self.act_mono(&c_mode, &rest));
        let bracket_mode_n0 = -c.k - first.k;
        let n = &c.m + &first.m;
        for (b, coeff) in self.lie.bracket_basis(c.basis, first.basis) {
            let m = Mode::new(*b, bracket_mode_n0, n.clone());
            out.add_scaled(&self.act_mono(&m, &rest), coeff);
        }
        out
    }

    fn prepend_all(&self, c: &CreationMode, state: &StateVector) -> StateVector {
        let m = Mode::new(c.basis, -c.k, c.m.clone());
        self.act(&m, state)
    }

    /// Largest `n0` for which some mode may act nontrivially on `state`:
    /// `a(n0, n) · state = 0` whenever `n0` exceeds the returned value.
    pub fn restricted_witness(&self, state: &StateVector) -> i64 {
        state.max_degree().unwrap_or(0)
    }

    /// Parses a state expression such as `e(-1,2)*f(-2,0)*vac` or
    /// `3/4*h(-1,0)*e + f`. Factors act right to left on the final tail, which
    /// is `vac`/`1` or a basis name.
    pub fn parse_state(&self, expr: &str) -> Result<StateVector, ParseError> {
        let bad = |reason: &str| ParseError::State { expr: expr.to_string(), reason: reason.to_string() };
        let mut out = StateVector::zero();
        let expr = expr.trim();
        if expr.is_empty() {
            return Err(bad("empty expression"));
        }
        if expr == "0" {
            return Ok(out);
        }
        for term in split_terms(expr) {
            let (negate, term) = match term.strip_prefix('-') {
                Some(t) => (true, t.trim()),
                None => (false, term.trim()),
            };
            let factors: Vec<&str> = term.split('*').map(str::trim).collect();
            let (tail_str, rest) = factors.split_last().ok_or_else(|| bad("empty term"))?;
            let mut coeff = rational::one();
            let mut modes = Vec::new();
            for (i, f) in rest.iter().enumerate() {
                if let Some(open) = f.find('(') {
                    modes.push(self.parse_mode(f, open).map_err(|r| bad(&r))?);
                } else if i == 0 {
                    coeff = rational::parse(f)?;
                } else {
                    return Err(bad("coefficient must come first"));
                }
            }
            let tail = match *tail_str {
                "vac" | "1" => StateVector::vacuum(),
                name if !name.contains('(') => StateVector::tail(self.lie.index(name)?),
                _ => return Err(bad("the rightmost factor must be vac, 1 or a basis name")),
            };
            if negate {
                coeff = -coeff;
            }
            out.add_scaled(&self.act_word(&modes, &tail), &coeff);
        }
        Ok(out)
    }

    fn parse_mode(&self, f: &str, open: usize) -> Result<Mode, String> {
        let name = f[..open].trim();
        let inner = f[open + 1..].strip_suffix(')').ok_or("unbalanced parenthesis")?;
        let nums: Vec<i64> = inner
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad integer `{x}`")))
            .collect::<Result<_, _>>()?;
        if nums.len() != self.rank + 1 {
            return Err(format!("mode `{f}` needs {} indices", self.rank + 1));
        }
        let basis = self.lie.index(name).map_err(|e| e.to_string())?;
        Ok(Mode::new(basis, nums[0], nums[1..].to_vec().into()))
    }
}

/// Splits on top-level `+` and `-` (outside parentheses), keeping the sign with the term.
fn split_terms(expr: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = expr.as_bytes();
    for (i, &ch) in bytes.iter().enumerate() {
        match ch {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 => {
                let prev = expr[..i].trim_end();
                if !prev.ends_with('*') && !prev.ends_with('/') && !prev.is_empty() {
                    out.push(expr[start..i].trim());
                    start = if ch == b'+' { i + 1 } else { i };
                }
            }
            _ => {}
        }
    }
    out.push(expr[start..].trim());
    out.into_iter().filter(|t| !t.is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sl2(level: i64) -> VacuumModule {
        VacuumModule::new(Arc::new(LieAlgebra::sl2()), 1, int(level), 1 << 12)
    }

    fn md(b: usize, n0: i64, n: i64) -> Mode {
        Mode::new(b, n0, TorIndex::from_slice(&[n]))
    }

    #[test]
    fn base_action_table() {
        let v = sl2(5);
        assert_eq!(v.base_action(0, 0, Tail::Basis(1)), StateVector::tail(2));
        assert_eq!(v.base_action(0, 1, Tail::Basis(1)), StateVector::vacuum().scaled(&int(5)));
        assert!(v.base_action(0, 2, Tail::Basis(1)).is_zero());
        assert!(v.base_action(2, 0, Tail::Vacuum).is_zero());
    }

    #[test]
    fn annihilation_through_one_creation() {
        let v = sl2(3);
        let w = v.act(&md(1, -1, -2), &StateVector::vacuum());
        assert_eq!(v.act(&md(0, 1, 2), &w), StateVector::vacuum().scaled(&int(3)));
        let w = v.act(&md(1, -2, 1), &StateVector::vacuum());
        let expected = v.act(&md(2, -2, 3), &StateVector::vacuum());
        assert_eq!(v.act(&md(0, 0, 2), &w), expected);
    }

    #[test]
    fn creation_reorders() {
        let v = sl2(1);
        // f(-1) e(-1) 1 = e(-1) f(-1) 1 - h(-2) 1
        let fe = v.act_word(&[md(1, -1, 0), md(0, -1, 0)], &StateVector::vacuum());
        let ef = v.act_word(&[md(0, -1, 0), md(1, -1, 0)], &StateVector::vacuum());
        let h2 = v.act(&md(2, -2, 0), &StateVector::vacuum());
        assert_eq!(fe, ef.sub(&h2));
        assert_eq!(fe.len(), 2);
    }

    #[test]
    fn parse_matches_direct_action() {
        let v = sl2(1);
        let s = v.parse_state("e(-1,2)*f(-2,0)*vac - 1/2*h").unwrap();
        let mut expected = v.act_word(&[md(0, -1, 2), md(1, -2, 0)], &StateVector::vacuum());
        expected.add_term(Monomial::tail(2), int(-1) / int(2));
        assert_eq!(s, expected);
        assert!(v.parse_state("e(-1)*vac").is_err());
        assert!(v.parse_state("e(-1,0)").is_err());
        assert!(v.parse_state("q(-1,0)*vac").is_err());
    }

    #[test]
    fn degrees_and_witness() {
        let v = sl2(1);
        let s = v.parse_state("e(-2,1)*f(-1,0)*vac").unwrap();
        assert_eq!(s.degrees(), vec![3]);
        assert_eq!(v.restricted_witness(&StateVector::tail(1)), 1);
        assert_eq!(v.restricted_witness(&StateVector::vacuum()), 0);
    }

    #[test]
    fn cached_and_uncached_agree() {
        let lie = Arc::new(LieAlgebra::sl2());
        let a = VacuumModule::new(lie.clone(), 1, int(2), 1024);
        let b = VacuumModule::new(lie, 1, int(2), 0);
        let s = "e(-2,1)*f(-1,-1)*h(-1,0)*e";
        let (sa, sb) = (a.parse_state(s).unwrap(), b.parse_state(s).unwrap());
        assert_eq!(sa, sb);
        for m in [md(0, 1, 0), md(1, 2, -1), md(2, 0, 1), md(1, 3, 0)] {
            assert_eq!(a.act(&m, &sa), b.act(&m, &sb));
        }
    }
}

//! The vertex operator map `Y` on `V(ℓ,0)`, state-level products, and the
//! vacuum ideal `V⁰` with its ordinary vertex operators `Y⁰`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::Mutex;

use crate::error::{FieldError, VertexError};
use crate::field::{Field, FieldEngine, Mismatch};
use crate::index::{MultiIndex, TorIndex};
use crate::lie::LieAlgebra;
use crate::linalg::Echelon;
use crate::pbw::{CreationMode, Monomial, StateVector, Tail};
use crate::rational::{self, Rational};
use crate::vacuum::{Mode, VacuumModule};
use crate::window::ModeWindow;

#[derive(Clone, Copy, Debug)]
pub struct SessionOptions {
    pub cache_capacity: usize,
    pub termination_bound: i64,
}

impl Default for SessionOptions {
    fn default() -> Self {
        SessionOptions { cache_capacity: 1 << 18, termination_bound: 256 }
    }
}

/// `V(ℓ,0)` together with its vertex operator map. `Y(v)` is realized as a
/// field on the module by peeling the leftmost creation mode:
/// `Y(a(-k,m) R) = Y(a)_{(-k,m)} Y(R)`, with `Y(b) = b(x0,x)` and `Y(1) = 1_W`.
pub struct Session {
    engine: FieldEngine,
    psi: Mutex<HashMap<Monomial, Field>>,
}

impl Session {
    pub fn new(lie: Arc<LieAlgebra>, rank: usize, level: Rational, opts: SessionOptions) -> Self {
        Self::from_module(VacuumModule::new(lie, rank, level, opts.cache_capacity), opts)
    }

    pub fn from_module(module: VacuumModule, opts: SessionOptions) -> Self {
        Session {
            engine: FieldEngine::new(Arc::new(module), opts.cache_capacity, opts.termination_bound),
            psi: Mutex::new(HashMap::new()),
        }
    }

    pub fn module(&self) -> &VacuumModule {
        self.engine.module()
    }

    pub fn engine(&self) -> &FieldEngine {
        &self.engine
    }

    pub fn lie(&self) -> &LieAlgebra {
        self.engine.lie()
    }

    pub fn rank(&self) -> usize {
        self.engine.rank()
    }

    pub fn level(&self) -> &Rational {
        self.module().level()
    }

    pub fn parse_state(&self, expr: &str) -> Result<StateVector, crate::error::ParseError> {
        self.module().parse_state(expr)
    }

    /// The field `Y(mono; x0, x)` on the module.
    pub fn field_of_monomial(&self, mono: &Monomial) -> Field {
        if let Some(f) = self.psi.lock().get(mono) {
            return f.clone();
        }
        let f = match mono.split_first() {
            None => match mono.tail {
                Tail::Vacuum => self.engine.identity(),
                Tail::Basis(b) => self.engine.generator(b),
            },
            Some((first, rest)) => {
                let inner = self.field_of_monomial(&rest);
                self.engine.product(&self.engine.generator(first.basis), -first.k, first.m.clone(), &inner)
            }
        };
        self.psi.lock().entry(mono.clone()).or_insert(f).clone()
    }

    /// The field `Y(v; x0, x)` as a linear combination.
    pub fn field_of(&self, v: &StateVector) -> Field {
        self.engine.linear(v.terms().map(|(m, c)| (c.clone(), self.field_of_monomial(m))).collect())
    }

    /// `v_{(n0,n)} w`.
    pub fn y_mode(&self, v: &StateVector, n0: i64, n: &TorIndex, w: &StateVector) -> Result<StateVector, FieldError> {
        let mut out = StateVector::zero();
        for (mono, c) in v.terms() {
            let f = self.field_of_monomial(mono);
            out.add_scaled(&self.engine.mode(&f, n0, n, w)?, c);
        }
        Ok(out)
    }

    /// The state-level product `u_{(m0,m)} v`.
    pub fn product(&self, u: &StateVector, m0: i64, m: &TorIndex, v: &StateVector) -> Result<StateVector, FieldError> {
        self.y_mode(u, m0, m, v)
    }

    /// First window index with `n0 >= 0` at which `v_{(n0,n)} 1` is nonzero.
    pub fn creation_check(&self, v: &StateVector, win: &ModeWindow) -> Result<Option<(MultiIndex, StateVector)>, FieldError> {
        let one = StateVector::vacuum();
        for idx in win.indices().into_iter().filter(|i| i.m0 >= 0) {
            let out = self.y_mode(v, idx.m0, &idx.m, &one)?;
            if !out.is_zero() {
                return Ok(Some((idx, out)));
            }
        }
        Ok(None)
    }

    /// x-degrees on which `Y(u; x0, x)` can be supported. Finite exactly when
    /// every PBW component of `u` has a vacuum tail.
    pub fn x_support(&self, u: &StateVector) -> Result<BTreeSet<TorIndex>, VertexError> {
        let mut out = BTreeSet::new();
        for (m, _) in u.terms() {
            if let Tail::Basis(b) = m.tail {
                return Err(VertexError::NotInVacuumIdeal(self.lie().name(b).to_string()));
            }
            out.insert(m.multidegree(self.rank()));
        }
        Ok(out)
    }

    /// `Y⁰(u, x0) = Y(u; x0, x)|_{x=1}`, mode `n0`.
    pub fn y0_mode(&self, u: &StateVector, n0: i64, w: &StateVector) -> Result<StateVector, VertexError> {
        let mut out = StateVector::zero();
        for n in self.x_support(u)? {
            out.add_assign(&self.y_mode(u, n0, &n, w)?);
        }
        Ok(out)
    }

    /// Translation operator on `V⁰` computed from the `d0` action:
    /// `a(-k,m) ↦ k a(-k-1,m)` extended as a derivation, killing `1`.
    pub fn d0_leibniz(&self, u: &StateVector) -> Result<StateVector, VertexError> {
        self.x_support(u)?;
        let module = self.module();
        let mut out = StateVector::zero();
        for (mono, c) in u.terms() {
            let modes: Vec<Mode> = mono.word.iter().map(|cm| Mode::new(cm.basis, -cm.k, cm.m.clone())).collect();
            for i in 0..modes.len() {
                let mut shifted = modes.clone();
                shifted[i].n0 -= 1;
                let term = module.act_word(&shifted, &StateVector::vacuum());
                out.add_scaled(&term, &(c * rational::int(mono.word[i].k)));
            }
        }
        Ok(out)
    }

    /// Spans `V⁰` by products `u_{(m0,M)} 1` with `u` running over PBW monomials
    /// with `g`-tails of length `<= depth` (and `u = 1`), then measures the
    /// graded pieces against the window's `t`-degree box.
    pub fn build_v0(&self, depth: usize, max_degree: i64, win: &ModeWindow) -> Result<V0Subspace, VertexError> {
        let lie = self.lie();
        let boxpts = win.tor_points();
        let rank = self.rank();
        let one = StateVector::vacuum();
        let mut us = vec![Monomial::vacuum()];
        let mut words: Vec<Vec<CreationMode>> = vec![Vec::new()];
        let mut frontier = words.clone();
        for _ in 1..depth {
            let mut next = Vec::new();
            for w in &frontier {
                let used: i64 = w.iter().map(|c| c.k).sum();
                for k in 1..=(max_degree - 1 - used) {
                    for a in 0..lie.dim() {
                        for m in &boxpts {
                            let c = CreationMode::new(a, k, m.clone());
                            if w.last().is_some_and(|l| *l > c) {
                                continue;
                            }
                            let mut w2 = w.clone();
                            w2.push(c);
                            next.push(w2);
                        }
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        for w in &words {
            for b in 0..lie.dim() {
                us.push(Monomial { word: w.clone(), tail: Tail::Basis(b) });
            }
        }
        let mut spanning = Vec::new();
        let mut tails_absent = true;
        for u in &us {
            let du = u.degree();
            let shift = u.multidegree(rank);
            let ms: Vec<TorIndex> = if u.tail == Tail::Vacuum {
                vec![TorIndex::zero(rank)]
            } else {
                boxpts.iter().map(|p| &shift + p).collect()
            };
            let us = StateVector::from_monomial(u.clone());
            for m0 in (du - 1 - max_degree)..=-1 {
                for m in &ms {
                    let s = self.product(&us, m0, m, &one)?;
                    if s.is_zero() {
                        continue;
                    }
                    if s.terms().any(|(mono, _)| mono.tail != Tail::Vacuum) {
                        tails_absent = false;
                    }
                    spanning.push(V0Generator { u: u.clone(), index: MultiIndex::new(m0, m.clone()), state: s });
                }
            }
        }
        let in_box = |mono: &Monomial| mono.word.iter().all(|c| boxpts.contains(&c.m));
        let mut by_degree: BTreeMap<i64, (Echelon, Echelon)> = BTreeMap::new();
        let mut basis = Echelon::new();
        for g in &spanning {
            basis.insert(&g.state);
            for d in g.state.degrees() {
                let (span, out) = by_degree.entry(d).or_default();
                let mut piece = StateVector::zero();
                let mut outside = StateVector::zero();
                for (mono, c) in g.state.terms().filter(|(m, _)| m.degree() == d) {
                    piece.add_term(mono.clone(), c.clone());
                    if !in_box(mono) {
                        outside.add_term(mono.clone(), c.clone());
                    }
                }
                span.insert(&piece);
                out.insert(&outside);
            }
        }
        let types = (lie.dim() * boxpts.len()) as u64;
        let graded = (0..=max_degree)
            .map(|d| {
                let (span_rank, out_rank) = by_degree.get(&d).map(|(s, o)| (s.rank(), o.rank())).unwrap_or((0, 0));
                GradedPiece { degree: d, span_rank, dim_in_box: span_rank - out_rank, pbw_count: affine_pbw_count(types, d) }
            })
            .collect();
        Ok(V0Subspace { spanning, basis, graded, tails_absent })
    }

    /// Checks that `Y(u; x0, x)` is supported on the single x-degree `λ(u)` and
    /// agrees there with `Y⁰(u, x0)`.
    pub fn precover_roundtrip(&self, u: &StateVector, win: &ModeWindow) -> Result<Option<Mismatch>, VertexError> {
        let support = self.x_support(u)?;
        if support.len() > 1 {
            return Err(VertexError::Inhomogeneous);
        }
        let lambda = support.into_iter().next();
        for idx in win.indices() {
            for (s, w) in win.states.iter().enumerate() {
                let lhs = self.y_mode(u, idx.m0, &idx.m, w)?;
                let rhs = if Some(&idx.m) == lambda.as_ref() { self.y0_mode(u, idx.m0, w)? } else { StateVector::zero() };
                if lhs != rhs {
                    return Ok(Some(Mismatch { index: idx, state: s, lhs, rhs }));
                }
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug)]
pub struct V0Generator {
    pub u: Monomial,
    pub index: MultiIndex,
    pub state: StateVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub degree: i64,
    /// Rank of the degree-`d` parts of all spanning products.
    pub span_rank: usize,
    /// Dimension of that span intersected with the box-monomial subspace.
    pub dim_in_box: usize,
    /// Number of PBW monomials of the loop affine vacuum module with modes in the box.
    pub pbw_count: u64,
}

#[derive(Clone, Debug)]
pub struct V0Subspace {
    pub spanning: Vec<V0Generator>,
    pub basis: Echelon,
    pub graded: Vec<GradedPiece>,
    pub tails_absent: bool,
}

impl V0Subspace {
    pub fn dimensions_match(&self) -> bool {
        self.graded.iter().all(|g| g.dim_in_box as u64 == g.pbw_count)
    }
}

/// Coefficient of `q^d` in `Π_{k>=1} (1 - q^k)^{-types}`: the number of
/// multisets of creation modes of total degree `d` when each `k` offers
/// `types` distinct modes.
pub fn affine_pbw_count(types: u64, d: i64) -> u64 {
    if d < 0 {
        return 0;
    }
    let d = d as usize;
    let mut ways = vec![BigInt::zero(); d + 1];
    ways[0] = BigInt::one();
    for k in 1..=d {
        let mut next = vec![BigInt::zero(); d + 1];
        for (base, w) in ways.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
            let mut j = 0usize;
            while base + k * j <= d {
                // multisets of size j from `types` kinds
                let c = rational::binomial(types as i64 + j as i64 - 1, j as i64);
                next[base + k * j] += w * c;
                j += 1;
            }
        }
        ways = next;
    }
    u64::try_from(&ways[d]).expect("count fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn session(level: i64) -> Session {
        Session::new(Arc::new(LieAlgebra::sl2()), 1, int(level), SessionOptions::default())
    }

    fn t(m: i64) -> TorIndex {
        TorIndex::from_slice(&[m])
    }

    #[test]
    fn identity_and_generator_modes() {
        let s = session(1);
        let w = s.parse_state("e(-1,1)*h").unwrap();
        let one = StateVector::vacuum();
        assert_eq!(s.y_mode(&one, -1, &t(0), &w).unwrap(), w);
        assert!(s.y_mode(&one, -2, &t(0), &w).unwrap().is_zero());
        assert!(s.y_mode(&one, -1, &t(1), &w).unwrap().is_zero());
        let f = StateVector::tail(1);
        assert_eq!(s.y_mode(&f, 0, &t(2), &w).unwrap(), s.module().act(&Mode::new(1, 0, t(2)), &w));
    }

    #[test]
    fn generator_product_table() {
        let s = session(1);
        let (e, f) = (StateVector::tail(0), StateVector::tail(1));
        assert_eq!(s.product(&e, 0, &t(1), &f).unwrap(), StateVector::tail(2));
        assert_eq!(s.product(&e, 1, &t(1), &f).unwrap(), StateVector::vacuum());
        assert!(s.product(&e, 2, &t(0), &f).unwrap().is_zero());
        let u = s.parse_state("e(-1,1)*h").unwrap();
        assert!(s.product(&u, 0, &t(1), &StateVector::vacuum()).unwrap().is_zero());
    }

    #[test]
    fn creation_monomial_field_is_shifted_current() {
        let s = session(2);
        let u = s.parse_state("e(-1,1)*vac").unwrap();
        let w = s.parse_state("f(-1,0)*h").unwrap();
        for n in -1..=2 {
            for n0 in -2..=2 {
                let expected = if n == 1 { s.module().act(&Mode::new(0, n0, t(1)), &w) } else { StateVector::zero() };
                assert_eq!(s.y_mode(&u, n0, &t(n), &w).unwrap(), expected);
            }
        }
    }

    #[test]
    fn support_rejects_tails() {
        let s = session(1);
        assert!(matches!(s.x_support(&StateVector::tail(0)), Err(VertexError::NotInVacuumIdeal(_))));
        let u = s.parse_state("e(-1,1)*f(-2,-3)*vac").unwrap();
        assert_eq!(s.x_support(&u).unwrap().into_iter().collect::<Vec<_>>(), vec![t(-2)]);
    }

    #[test]
    fn translation_matches_leibniz() {
        let s = session(1);
        let u = s.parse_state("e(-1,1)*f(-2,0)*vac").unwrap();
        let d = s.y0_mode(&u, -2, &StateVector::vacuum()).unwrap();
        assert_eq!(d, s.d0_leibniz(&u).unwrap());
    }

    #[test]
    fn pbw_count_small_cases() {
        assert_eq!(affine_pbw_count(3, 0), 1);
        assert_eq!(affine_pbw_count(3, 1), 3);
        // degree 2: pairs of k=1 modes (6) plus single k=2 modes (3)
        assert_eq!(affine_pbw_count(3, 2), 9);
    }
}

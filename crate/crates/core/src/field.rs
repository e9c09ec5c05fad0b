//! Fields on the vacuum module presented as mode oracles, with locality
//! detection, the mode products between local fields, the derivative
//! operators, and bounded-depth closure generation.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::Zero;
use parking_lot::Mutex;

use crate::cache::{CacheStats, ShardedLru};
use crate::error::FieldError;
use crate::exec;
use crate::index::{MultiIndex, TorIndex};
use crate::lie::LieAlgebra;
use crate::pbw::{Monomial, StateVector};
use crate::rational::{self, Rational};
use crate::vacuum::{Mode, VacuumModule};
use crate::window::ModeWindow;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug)]
pub enum FieldExpr {
    Generator(usize),
    Identity,
    /// `a_{(m0,m)} b`.
    Product { a: Field, m0: i64, m: TorIndex, b: Field },
    /// `D_dir a`: `∂/∂x0` for `dir = 0`, `x_dir ∂/∂x_dir` otherwise.
    Derivative { dir: usize, a: Field },
    Linear(Vec<(Rational, Field)>),
}

#[derive(Debug)]
struct FieldNode {
    id: u64,
    expr: FieldExpr,
    /// Conformal-type weight: a mode `(n0, n)` raises the degree by `weight - n0 - 1`.
    weight: i64,
}

/// Shared handle to a field; cloning is cheap.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldNode>);

impl Field {
    fn new(expr: FieldExpr) -> Self {
        let weight = match &expr {
            FieldExpr::Generator(_) => 1,
            FieldExpr::Identity => 0,
            FieldExpr::Product { a, m0, b, .. } => a.weight() + b.weight() - m0 - 1,
            FieldExpr::Derivative { dir: 0, a } => a.weight() + 1,
            FieldExpr::Derivative { a, .. } => a.weight(),
            FieldExpr::Linear(parts) => parts.iter().map(|(_, f)| f.weight()).max().unwrap_or(0),
        };
        Field(Arc::new(FieldNode { id: NEXT_ID.fetch_add(1, Ordering::Relaxed), expr, weight }))
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn expr(&self) -> &FieldExpr {
        &self.0.expr
    }

    pub fn weight(&self) -> i64 {
        self.0.weight
    }

    /// Nesting depth of products in the provenance tree.
    pub fn depth(&self) -> usize {
        match self.expr() {
            FieldExpr::Generator(_) | FieldExpr::Identity => 0,
            FieldExpr::Product { a, b, .. } => 1 + a.depth().max(b.depth()),
            FieldExpr::Derivative { a, .. } => a.depth(),
            FieldExpr::Linear(parts) => parts.iter().map(|(_, f)| f.depth()).max().unwrap_or(0),
        }
    }

    pub fn display<'a>(&'a self, lie: &'a LieAlgebra) -> FieldDisplay<'a> {
        FieldDisplay { field: self, lie }
    }
}

pub struct FieldDisplay<'a> {
    field: &'a Field,
    lie: &'a LieAlgebra,
}

impl fmt::Display for FieldDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field.expr() {
            FieldExpr::Generator(a) => write!(f, "{}", self.lie.name(*a)),
            FieldExpr::Identity => write!(f, "1_W"),
            FieldExpr::Product { a, m0, m, b } => {
                write!(f, "({})_({};{})({})", a.display(self.lie), m0, m, b.display(self.lie))
            }
            FieldExpr::Derivative { dir, a } => write!(f, "D{}({})", dir, a.display(self.lie)),
            FieldExpr::Linear(parts) if parts.is_empty() => write!(f, "0"),
            FieldExpr::Linear(parts) => {
                for (i, (c, x)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}·{}", c, x.display(self.lie))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalityOrder {
    Order(u32),
    ExceedsBound,
}

/// A window cell at which two sides of an identity differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub index: MultiIndex,
    pub state: usize,
    pub lhs: StateVector,
    pub rhs: StateVector,
}

/// A nonvanishing coefficient of `(x0 - y0)^k [a(x0,x), b(y0,y)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityWitness {
    pub k: u32,
    pub p: MultiIndex,
    pub q: MultiIndex,
    pub state: usize,
    pub value: StateVector,
}

type ModeKey = (u64, i64, TorIndex, Monomial);

pub struct FieldEngine {
    module: Arc<VacuumModule>,
    identity: Field,
    generators: Vec<Field>,
    cache: Option<ShardedLru<ModeKey, StateVector>>,
    termination_bound: i64,
    locality: Mutex<HashMap<(u64, u64, u64, u32), LocalityOrder>>,
}

impl FieldEngine {
    pub fn new(module: Arc<VacuumModule>, cache_capacity: usize, termination_bound: i64) -> Self {
        let generators = (0..module.lie().dim()).map(|a| Field::new(FieldExpr::Generator(a))).collect();
        FieldEngine {
            module,
            identity: Field::new(FieldExpr::Identity),
            generators,
            cache: (cache_capacity > 0).then(|| ShardedLru::new(cache_capacity)),
            termination_bound,
            locality: Mutex::new(HashMap::new()),
        }
    }

    pub fn module(&self) -> &Arc<VacuumModule> {
        &self.module
    }

    pub fn lie(&self) -> &LieAlgebra {
        self.module.lie()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn cache_stats(&self) -> Option<CacheStats> {
        self.cache.as_ref().map(ShardedLru::stats)
    }

    pub fn identity(&self) -> Field {
        self.identity.clone()
    }

    /// The current `a(x0, x) = Σ a(n0, n) x0^{-n0-1} x^{-n}`.
    pub fn generator(&self, a: usize) -> Field {
        self.generators[a].clone()
    }

    pub fn generators(&self) -> &[Field] {
        &self.generators
    }

    pub fn linear(&self, parts: Vec<(Rational, Field)>) -> Field {
        Field::new(FieldExpr::Linear(parts.into_iter().filter(|(c, _)| !c.is_zero()).collect()))
    }

    pub fn zero_field(&self) -> Field {
        self.linear(Vec::new())
    }

    /// The current of a general element `Σ v_i b_i` of `g`.
    pub fn current(&self, v: &[Rational]) -> Field {
        self.linear(v.iter().enumerate().map(|(i, c)| (c.clone(), self.generator(i))).collect())
    }

    /// `a_{(m0,m)} b` without checking locality; callers that cannot vouch for
    /// locality should use [`FieldEngine::e_product`].
    pub fn product(&self, a: &Field, m0: i64, m: TorIndex, b: &Field) -> Field {
        debug_assert_eq!(m.rank(), self.rank());
        Field::new(FieldExpr::Product { a: a.clone(), m0, m, b: b.clone() })
    }

    /// `a_{(m0,m)} b` after establishing locality of `a` and `b` on `win`.
    pub fn e_product(
        &self,
        a: &Field,
        m0: i64,
        m: TorIndex,
        b: &Field,
        win: &ModeWindow,
        bound: u32,
    ) -> Result<Field, FieldError> {
        match self.locality_order(a, b, win, bound)? {
            LocalityOrder::Order(_) => Ok(self.product(a, m0, m, b)),
            LocalityOrder::ExceedsBound => Err(FieldError::NotLocal { a: a.id(), b: b.id(), bound }),
        }
    }

    pub fn apply_d(&self, dir: usize, a: &Field) -> Result<Field, FieldError> {
        if dir > self.rank() {
            return Err(FieldError::Direction { dir, rank: self.rank() });
        }
        Ok(Field::new(FieldExpr::Derivative { dir, a: a.clone() }))
    }

    pub fn mode(&self, f: &Field, n0: i64, n: &TorIndex, w: &StateVector) -> Result<StateVector, FieldError> {
        let mut out = StateVector::zero();
        for (mono, c) in w.terms() {
            out.add_scaled(&*self.mode_mono(f, n0, n, mono)?, c);
        }
        Ok(out)
    }

    pub fn mode_mono(&self, f: &Field, n0: i64, n: &TorIndex, mono: &Monomial) -> Result<Arc<StateVector>, FieldError> {
        if n0 >= mono.degree() + f.weight() {
            return Ok(Arc::new(StateVector::zero()));
        }
        match f.expr() {
            FieldExpr::Identity => {
                return Ok(Arc::new(if n0 == -1 && n.is_zero() {
                    StateVector::from_monomial(mono.clone())
                } else {
                    StateVector::zero()
                }));
            }
            FieldExpr::Generator(a) => return Ok(self.module.act_mono(&Mode::new(*a, n0, n.clone()), mono)),
            _ => {}
        }
        let Some(cache) = &self.cache else {
            return self.compute(f, n0, n, mono).map(Arc::new);
        };
        let key = (f.id(), n0, n.clone(), mono.clone());
        if let Some(v) = cache.get(&key) {
            return Ok(v);
        }
        let v = Arc::new(self.compute(f, n0, n, mono)?);
        cache.insert(key, v.clone());
        Ok(v)
    }

    fn compute(&self, f: &Field, n0: i64, n: &TorIndex, mono: &Monomial) -> Result<StateVector, FieldError> {
        let mut out = StateVector::zero();
        match f.expr() {
            FieldExpr::Generator(_) | FieldExpr::Identity => unreachable!("handled without caching"),
            FieldExpr::Linear(parts) => {
                for (c, g) in parts {
                    out.add_scaled(&*self.mode_mono(g, n0, n, mono)?, c);
                }
            }
            FieldExpr::Derivative { dir, a } => {
                if *dir == 0 {
                    out.add_scaled(&*self.mode_mono(a, n0 - 1, n, mono)?, &rational::int(-n0));
                } else {
                    out.add_scaled(&*self.mode_mono(a, n0, n, mono)?, &rational::int(-n.get(dir - 1)));
                }
            }
            FieldExpr::Product { a, m0, m, b } => {
                // (a_{(m0,m)} b)_{(k0,k)} w = Σ_i (-1)^i C(m0,i) [ a_{(m0-i,m)} b_{(k0+i,k-m)} w
                //                                             - (-1)^{m0} b_{(m0+k0-i,k-m)} a_{(i,m)} w ]
                let (m0, k0) = (*m0, n0);
                let km = n - m;
                let d = mono.degree();
                let cap = |upper: i64| if m0 >= 0 { upper.min(m0) } else { upper };
                let first_last = cap(d + b.weight() - k0 - 1);
                let second_last = cap(d + a.weight() - 1);
                for last in [first_last, second_last] {
                    if last + 1 > self.termination_bound {
                        return Err(FieldError::TerminationBound { handle: f.id(), needed: last + 1, bound: self.termination_bound });
                    }
                }
                for i in 0..=first_last {
                    let c = rational::int(rational::sign(i)) * rational::binomial_q(m0, i);
                    let inner = self.mode_mono(b, k0 + i, &km, mono)?;
                    if !inner.is_zero() {
                        out.add_scaled(&self.mode(a, m0 - i, m, &inner)?, &c);
                    }
                }
                for i in 0..=second_last {
                    let c = rational::int(-rational::sign(i) * rational::sign(m0)) * rational::binomial_q(m0, i);
                    let inner = self.mode_mono(a, i, m, mono)?;
                    if !inner.is_zero() {
                        out.add_scaled(&self.mode(b, m0 + k0 - i, &km, &inner)?, &c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of `x0^{-p0-1} x^{-p} y0^{-q0-1} y^{-q}` in `(x0 - y0)^k [a(x0,x), b(y0,y)] w`.
    pub fn locality_coefficient(
        &self,
        a: &Field,
        b: &Field,
        k: u32,
        p: &MultiIndex,
        q: &MultiIndex,
        w: &StateVector,
    ) -> Result<StateVector, FieldError> {
        let k = k as i64;
        let mut out = StateVector::zero();
        for i in 0..=k {
            let c = rational::int(rational::sign(i)) * rational::binomial_q(k, i);
            let bw = self.mode(b, q.m0 + i, &q.m, w)?;
            let abw = self.mode(a, p.m0 + k - i, &p.m, &bw)?;
            let aw = self.mode(a, p.m0 + k - i, &p.m, w)?;
            let baw = self.mode(b, q.m0 + i, &q.m, &aw)?;
            out.add_scaled(&abw.sub(&baw), &c);
        }
        Ok(out)
    }

    /// First window cell (in window order) where the order-`k` locality coefficient is nonzero.
    pub fn locality_witness(
        &self,
        a: &Field,
        b: &Field,
        k: u32,
        win: &ModeWindow,
    ) -> Result<Option<LocalityWitness>, FieldError> {
        if win.is_empty() {
            return Err(FieldError::EmptyWindow);
        }
        let idx = win.indices();
        let cells: Vec<(usize, usize, usize)> = (0..idx.len())
            .flat_map(|p| (0..idx.len()).flat_map(move |q| (0..win.states.len()).map(move |s| (p, q, s))))
            .collect();
        let found = exec::find_first(&cells, |&(p, q, s)| {
            match self.locality_coefficient(a, b, k, &idx[p], &idx[q], &win.states[s]) {
                Ok(v) if v.is_zero() => None,
                Ok(v) => Some(Ok(LocalityWitness { k, p: idx[p].clone(), q: idx[q].clone(), state: s, value: v })),
                Err(e) => Some(Err(e)),
            }
        });
        found.transpose()
    }

    /// Least `k <= bound` for which the order-`k` locality coefficients all vanish on `win`.
    pub fn locality_order(&self, a: &Field, b: &Field, win: &ModeWindow, bound: u32) -> Result<LocalityOrder, FieldError> {
        if win.is_empty() {
            return Err(FieldError::EmptyWindow);
        }
        let mut h = DefaultHasher::new();
        win.hash(&mut h);
        let key = (a.id(), b.id(), h.finish(), bound);
        if let Some(o) = self.locality.lock().get(&key) {
            return Ok(*o);
        }
        let mut order = LocalityOrder::ExceedsBound;
        for k in 0..=bound {
            if self.locality_witness(a, b, k, win)?.is_none() {
                order = LocalityOrder::Order(k);
                break;
            }
        }
        self.locality.lock().insert(key, order);
        Ok(order)
    }

    /// Mode table of `f` over the window cells, in window order.
    pub fn mode_table(&self, f: &Field, win: &ModeWindow) -> Result<Vec<StateVector>, FieldError> {
        let idx = win.indices();
        let cells: Vec<(usize, usize)> =
            (0..idx.len()).flat_map(|i| (0..win.states.len()).map(move |s| (i, s))).collect();
        exec::map(&cells, |&(i, s)| self.mode(f, idx[i].m0, &idx[i].m, &win.states[s]))
            .into_iter()
            .collect()
    }

    /// First cell where the two fields differ on `win`.
    pub fn compare(&self, lhs: &Field, rhs: &Field, win: &ModeWindow) -> Result<Option<Mismatch>, FieldError> {
        let idx = win.indices();
        let cells: Vec<(usize, usize)> =
            (0..idx.len()).flat_map(|i| (0..win.states.len()).map(move |s| (i, s))).collect();
        exec::find_first(&cells, |&(i, s)| {
            let w = &win.states[s];
            let l = match self.mode(lhs, idx[i].m0, &idx[i].m, w) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            let r = match self.mode(rhs, idx[i].m0, &idx[i].m, w) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            (l != r).then(|| Ok(Mismatch { index: idx[i].clone(), state: s, lhs: l, rhs: r }))
        })
        .transpose()
    }

    /// Checks `a_{(j,m)} b = c_j` for `j < cs.len()` and `a_{(j,m)} b = 0` for the next two `j`.
    /// Returns the first failing `j` with its mismatch.
    pub fn transfer_check(
        &self,
        a: &Field,
        b: &Field,
        cs: &[Field],
        m: &TorIndex,
        win: &ModeWindow,
    ) -> Result<Option<(i64, Mismatch)>, FieldError> {
        let zero = self.zero_field();
        let top = cs.len() as i64 + 2;
        for j in 0..top {
            let expected = cs.get(j as usize).unwrap_or(&zero);
            let p = self.product(a, j, m.clone(), b);
            if let Some(mm) = self.compare(&p, expected, win)? {
                return Ok(Some((j, mm)));
            }
        }
        Ok(None)
    }

    /// Closure of `u ∪ {1_W}` under products `u_{(m0,m)} h` up to `depth`.
    pub fn generate(
        &self,
        u: &[Field],
        depth: usize,
        win: &ModeWindow,
        opts: &GenerateOptions,
    ) -> Result<GeneratedSpace, FieldError> {
        let lie = self.lie();
        let mut space = GeneratedSpace { fields: vec![self.identity()], depth, log: Vec::new(), failures: Vec::new() };
        let mut seen: HashMap<Vec<StateVector>, usize> = HashMap::new();
        seen.insert(self.mode_table(&self.identity, win)?, 0);
        let mut layer = Vec::new();
        for f in u {
            let table = self.mode_table(f, win)?;
            if let Some(&j) = seen.get(&table) {
                space.log.push(format!("{} coincides with {} on the window", f.display(lie), space.fields[j].display(lie)));
                continue;
            }
            seen.insert(table, space.fields.len());
            space.fields.push(f.clone());
            layer.push(f.clone());
        }
        self.verify_pairs(&mut space, 0, opts.locality_bound, win)?;
        layer.push(self.identity());
        for _ in 0..depth {
            let checked = space.fields.len();
            let mut next = Vec::new();
            for g in u {
                for h in &layer {
                    let order = match self.locality_order(g, h, win, opts.locality_bound)? {
                        LocalityOrder::Order(k) => k as i64,
                        LocalityOrder::ExceedsBound => continue,
                    };
                    for m0 in opts.m0_min..order {
                        for m in &opts.m {
                            let p = self.product(g, m0, m.clone(), h);
                            let table = self.mode_table(&p, win)?;
                            if table.iter().all(StateVector::is_zero) {
                                space.log.push(format!("skipped {}: zero on the window", p.display(lie)));
                            } else if let Some(&j) = seen.get(&table) {
                                space.log.push(format!(
                                    "skipped {}: coincides with {} on the window",
                                    p.display(lie),
                                    space.fields[j].display(lie)
                                ));
                            } else {
                                seen.insert(table, space.fields.len());
                                space.fields.push(p.clone());
                                next.push(p);
                            }
                        }
                    }
                }
            }
            self.verify_pairs(&mut space, checked, opts.locality_bound, win)?;
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        Ok(space)
    }

    /// Re-verifies locality for every pair involving a field at position `>= from`.
    fn verify_pairs(&self, space: &mut GeneratedSpace, from: usize, bound: u32, win: &ModeWindow) -> Result<(), FieldError> {
        let n = space.fields.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i.max(from)..n).map(move |j| (i, j))).collect();
        let fields = &space.fields;
        let orders = exec::map(&pairs, |&(i, j)| self.locality_order(&fields[i], &fields[j], win, bound));
        for ((i, j), o) in pairs.into_iter().zip(orders) {
            if o? == LocalityOrder::ExceedsBound {
                let lie = self.lie();
                space.failures.push(format!(
                    "{} and {} are not local up to order {bound}",
                    space.fields[i].display(lie),
                    space.fields[j].display(lie)
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GenerateOptions {
    pub m0_min: i64,
    pub m: Vec<TorIndex>,
    pub locality_bound: u32,
}

impl GenerateOptions {
    pub fn new(rank: usize, locality_bound: u32) -> Self {
        GenerateOptions { m0_min: -1, m: vec![TorIndex::zero(rank)], locality_bound }
    }
}

#[derive(Debug)]
pub struct GeneratedSpace {
    pub fields: Vec<Field>,
    pub depth: usize,
    pub log: Vec<String>,
    /// Pairs that failed the locality re-check.
    pub failures: Vec<String>,
}

impl GeneratedSpace {
    pub fn max_pair_order(&self, engine: &FieldEngine, win: &ModeWindow, bound: u32) -> Result<LocalityOrder, FieldError> {
        let mut best = 0;
        for (i, a) in self.fields.iter().enumerate() {
            for b in &self.fields[i..] {
                match engine.locality_order(a, b, win, bound)? {
                    LocalityOrder::Order(k) => best = best.max(k),
                    LocalityOrder::ExceedsBound => return Ok(LocalityOrder::ExceedsBound),
                }
            }
        }
        Ok(LocalityOrder::Order(best))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn engine(level: i64) -> FieldEngine {
        let v = VacuumModule::new(Arc::new(LieAlgebra::sl2()), 1, int(level), 1 << 14);
        FieldEngine::new(Arc::new(v), 1 << 14, 64)
    }

    fn window(e: &FieldEngine) -> ModeWindow {
        let v = e.module();
        let states = vec![
            StateVector::vacuum(),
            StateVector::tail(1),
            v.parse_state("e(-1,1)*vac").unwrap(),
            v.parse_state("f(-1,0)*h").unwrap(),
        ];
        ModeWindow::symmetric(1, 2, 1, states).unwrap()
    }

    fn t(m: i64) -> TorIndex {
        TorIndex::from_slice(&[m])
    }

    #[test]
    fn locality_orders_of_currents() {
        let e = engine(1);
        let w = window(&e);
        let (ge, gf, gh) = (e.generator(0), e.generator(1), e.generator(2));
        assert_eq!(e.locality_order(&ge, &gf, &w, 4).unwrap(), LocalityOrder::Order(2));
        assert_eq!(e.locality_order(&ge, &ge, &w, 4).unwrap(), LocalityOrder::Order(0));
        assert_eq!(e.locality_order(&ge, &gh, &w, 4).unwrap(), LocalityOrder::Order(1));
        assert_eq!(e.locality_order(&e.identity(), &gh, &w, 4).unwrap(), LocalityOrder::Order(0));
        let e0 = engine(0);
        let w0 = window(&e0);
        assert_eq!(e0.locality_order(&e0.generator(0), &e0.generator(1), &w0, 4).unwrap(), LocalityOrder::Order(1));
    }

    #[test]
    fn generator_products() {
        let e = engine(3);
        let w = window(&e);
        let (ge, gf, gh) = (e.generator(0), e.generator(1), e.generator(2));
        let p0 = e.e_product(&ge, 0, t(1), &gf, &w, 4).unwrap();
        assert_eq!(e.compare(&p0, &gh, &w).unwrap(), None);
        let p1 = e.product(&ge, 1, t(1), &gf);
        let scaled = e.linear(vec![(int(3), e.identity())]);
        assert_eq!(e.compare(&p1, &scaled, &w).unwrap(), None);
        let p2 = e.product(&ge, 2, t(0), &gf);
        assert_eq!(e.compare(&p2, &e.zero_field(), &w).unwrap(), None);
        let id = e.product(&e.identity(), -1, t(0), &gh);
        assert_eq!(e.compare(&id, &gh, &w).unwrap(), None);
        let not_id = e.product(&e.identity(), -1, t(1), &gh);
        assert_eq!(e.compare(&not_id, &e.zero_field(), &w).unwrap(), None);
    }

    #[test]
    fn derivative_shifts() {
        let e = engine(1);
        let w = window(&e);
        let ge = e.generator(0);
        let d0 = e.apply_d(0, &e.apply_d(0, &ge).unwrap()).unwrap();
        let s = &w.states[1];
        for n0 in -3..3 {
            let lhs = e.mode(&d0, n0, &t(1), s).unwrap();
            let rhs = e.mode(&ge, n0 - 2, &t(1), s).unwrap().scaled(&int(n0 * (n0 - 1)));
            assert_eq!(lhs, rhs);
        }
        let d1 = e.apply_d(1, &ge).unwrap();
        assert_eq!(e.mode(&d1, -1, &t(2), s).unwrap(), e.mode(&ge, -1, &t(2), s).unwrap().scaled(&int(-2)));
        assert!(matches!(e.apply_d(2, &ge), Err(FieldError::Direction { .. })));
        let did = e.apply_d(0, &e.identity()).unwrap();
        assert_eq!(e.compare(&did, &e.zero_field(), &w).unwrap(), None);
    }

    #[test]
    fn transfer_check_detects_wrong_central_term() {
        let e = engine(1);
        let w = window(&e);
        let (ge, gf, gh) = (e.generator(0), e.generator(1), e.generator(2));
        let ok = [gh.clone(), e.linear(vec![(int(1), e.identity())])];
        assert_eq!(e.transfer_check(&ge, &gf, &ok, &t(0), &w).unwrap(), None);
        let bad = [gh, e.linear(vec![(int(2), e.identity())])];
        assert_eq!(e.transfer_check(&ge, &gf, &bad, &t(0), &w).unwrap().map(|(j, _)| j), Some(1));
        assert_eq!(e.transfer_check(&ge, &ge, &[], &t(0), &w).unwrap(), None);
    }

    #[test]
    fn empty_window_is_an_error() {
        let e = engine(1);
        let w = ModeWindow { m0: (0, -1), m: vec![(0, 0)], states: vec![StateVector::vacuum()] };
        assert_eq!(e.locality_order(&e.generator(0), &e.generator(1), &w, 2), Err(FieldError::EmptyWindow));
    }

    #[test]
    fn generate_identity_only() {
        let e = engine(1);
        let w = window(&e);
        let opts = GenerateOptions::new(1, 4);
        let s = e.generate(&[e.identity()], 3, &w, &opts).unwrap();
        assert_eq!(s.fields.len(), 1);
        assert!(s.failures.is_empty());
    }

    #[test]
    fn generate_depth_one_contains_bracket_currents() {
        let e = engine(1);
        let w = ModeWindow::symmetric(1, 1, 0, vec![StateVector::vacuum(), StateVector::tail(1)]).unwrap();
        let opts = GenerateOptions::new(1, 4);
        let s = e.generate(e.generators(), 1, &w, &opts).unwrap();
        assert!(s.failures.is_empty());
        // h = e_(0) f and 1_W = e_(1) f coincide with existing fields and are logged, not added.
        assert!(s.log.iter().any(|l| l.contains("(e)_(0;0)(f)") && l.contains("coincides with h")));
        assert!(s.log.iter().any(|l| l.contains("(e)_(1;0)(f)") && l.contains("coincides with 1_W")));
        assert!(s.fields.len() > 4);
    }
}

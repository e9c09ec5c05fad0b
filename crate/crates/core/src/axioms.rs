//! Coefficientwise verification of the vertex algebra axioms and derived
//! identities on finite windows.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{FieldError, VertexError};
use crate::exec;
use crate::index::{MultiIndex, TorIndex};
use crate::lie::LieAlgebra;
use crate::pbw::{CreationMode, Monomial, StateVector, Tail};
use crate::rational::{self, Rational};
use crate::vertex::Session;
use crate::window::ModeWindow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A searched-for order (locality or associativity exponent) exceeded the cap.
    CapExceeded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub identity: String,
    pub paper_ref: String,
    pub subject: String,
    pub window: Value,
    pub status: Status,
    pub witness: Option<Value>,
    pub wall_ms: u64,
}

impl Finding {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Report record; `wall_ms` is the only nondeterministic field.
    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.identity,
            "paper_ref": self.paper_ref,
            "subject": self.subject,
            "window": self.window,
            "status": self.status,
            "witness": self.witness,
            "wall_ms": self.wall_ms,
        })
    }
}

/// Descriptive reference for each identity id.
pub fn identity_ref(id: &str) -> &'static str {
    match id {
        "lie_validation" => "antisymmetry, Jacobi identity and invariance of the form on g",
        "weak_commutativity" => "(x0-y0)^k Y(u;x0,x)Y(v;y0,y) = (x0-y0)^k Y(v;y0,y)Y(u;x0,x)",
        "weak_associativity" => "(z0+y0)^l Y(Y(u;z0,z)v;y0,y)w = (z0+y0)^l Y(u;z0+y0,zy)Y(v;y0,y)w",
        "jacobi" => "Jacobi identity via weak commutativity and weak associativity, with direct coefficient spot checks",
        "commutator_formula" => "[Y(u;x0,m),Y(v;y0,n)] = Res_z0 y0^-1 delta((x0-z0)/y0) Y(Y(u;z0,m)v;y0,m+n)",
        "skew_symmetry" => "Y(Y(u;z0,z)v;y0,y) = e^{z0 d/dy0} z^{y d/dy} Y(Y(v;-z0,z^-1)u;y0,y)",
        "skew_symmetry_involution" => "applying the skew symmetry map twice gives back Y(Y(u;z0,z)v;y0,y)",
        "vacuum_annihilation" => "Y(u_{k,m}1) = 0 and u_{k,m}1 = 0 for k >= 0",
        "vacuum_derivative" => "Y(u_{-k-1,m}1;x0,x) = (1/k!) (d/dx0)^k Y(u;x0,m) x^-m",
        "vacuum_slices" => "Y(u;x0,x) = sum_m Y(u_{-1,m}1;x0,x)",
        "current_shift" => "Y(a_{-1,m}1;x0,x) = x^-m Y(a;x0,m) for generators a",
        "creation" => "Y(v;x0,x)1 has no negative powers of x0",
        "product_table" => "a_{m0,m}b = [a,b] for m0 = 0, l<a,b>1 for m0 = 1, 0 for m0 >= 2",
        "restrictedness" => "a(n0,n)w = 0 for n0 above the degree of w",
        "v0_dimensions" => "graded dimensions of the vacuum ideal against the loop affine PBW count",
        "v0_tails_absent" => "the vacuum ideal contains no g-tail components",
        "v0_affine_commutator" => "[a(x0,m), b(y0,n)] with the loop affinization bracket and form <a,b>delta_{m+n,0}",
        "v0_reconstruction" => "Y(u;x0,x) = sum_m Y0(u_{-1,m}1, x0) x^-m",
        "v0_creation" => "Y0(u,x0)1 in V0[[x0]] with constant term u",
        "v0_translation" => "D0 on the vacuum ideal equals the translation operator u -> u_{-2}1",
        "v0_jacobi" => "ordinary Jacobi identity for Y0, checked coefficientwise",
        "v0_single_support" => "Y(u;x0,x) is supported on the single x-degree of u and equals Y0 there",
        "module_jacobi" => "module Jacobi identity for Y_W on a restricted module W",
        _ => "",
    }
}

fn finding(id: &str, subject: String, window: Value, status: Status, witness: Option<Value>, start: Instant) -> Finding {
    Finding {
        identity: id.to_string(),
        paper_ref: identity_ref(id).to_string(),
        subject,
        window,
        status,
        witness,
        wall_ms: start.elapsed().as_millis() as u64,
    }
}

fn status_of(witness: &Option<Value>) -> Status {
    if witness.is_some() {
        Status::Fail
    } else {
        Status::Pass
    }
}

fn error_finding(id: &str, subject: String, window: Value, e: impl std::fmt::Display, start: Instant) -> Finding {
    finding(id, subject, window, Status::Fail, Some(json!({ "error": e.to_string() })), start)
}

/// Vertex operators of an algebra `V` on a module `W`. For the algebra itself
/// both sessions are the same.
#[derive(Clone, Copy)]
pub struct Realization<'a> {
    pub algebra: &'a Session,
    pub module: &'a Session,
}

impl<'a> Realization<'a> {
    pub fn algebra(s: &'a Session) -> Self {
        Realization { algebra: s, module: s }
    }

    pub fn lie(&self) -> &LieAlgebra {
        self.algebra.lie()
    }

    fn y(&self, u: &StateVector, n0: i64, n: &TorIndex, w: &StateVector) -> Result<StateVector, FieldError> {
        self.module.y_mode(u, n0, n, w)
    }

    fn product(&self, u: &StateVector, m0: i64, m: &TorIndex, v: &StateVector) -> Result<StateVector, FieldError> {
        self.algebra.product(u, m0, m, v)
    }

    fn show(&self, s: &StateVector) -> String {
        s.display(self.lie()).to_string()
    }

    fn subject(&self, parts: &[(&str, &StateVector)]) -> String {
        parts.iter().map(|(k, v)| format!("{k}={}", self.show(v))).collect::<Vec<_>>().join(", ")
    }
}

/// `Y(v)_{(n)} w` vanishes for `n >= vanishing(v, w)`.
fn vanishing(v: &StateVector, w: &StateVector) -> i64 {
    v.max_degree().unwrap_or(0) + w.max_degree().unwrap_or(0)
}

fn sign(n: i64) -> Rational {
    rational::int(rational::sign(n))
}

fn idx_json(i: &MultiIndex) -> Value {
    json!([i.m0, i.m.as_slice()])
}

/// `(k0..) x (k..) x states` cells of a window pair.
fn pair_cells(win: &ModeWindow) -> (Vec<MultiIndex>, Vec<(usize, usize, usize)>) {
    let idx = win.indices();
    let n = idx.len();
    let s = win.states.len();
    let cells = (0..n).flat_map(|p| (0..n).flat_map(move |q| (0..s).map(move |w| (p, q, w)))).collect();
    (idx, cells)
}

/// First failing cell of a two-index identity `lhs(p, q, w) = rhs(p, q, w)`.
fn first_failure<F>(real: &Realization, win: &ModeWindow, f: F) -> Result<Option<Value>, FieldError>
where
    F: Fn(&MultiIndex, &MultiIndex, &StateVector) -> Result<(StateVector, StateVector), FieldError> + Sync + Send,
{
    let (idx, cells) = pair_cells(win);
    exec::find_first(&cells, |&(p, q, s)| match f(&idx[p], &idx[q], &win.states[s]) {
        Ok((l, r)) if l == r => None,
        Ok((l, r)) => Some(Ok(json!({
            "p": idx_json(&idx[p]),
            "q": idx_json(&idx[q]),
            "state": real.show(&win.states[s]),
            "lhs": real.show(&l),
            "rhs": real.show(&r),
        }))),
        Err(e) => Some(Err(e)),
    })
    .transpose()
}

/// Window cell where `(x0-y0)^k [Y(u;x0,x), Y(v;y0,y)] w` has a nonzero coefficient.
pub fn commutativity_witness(real: &Realization, u: &StateVector, v: &StateVector, k: u32, win: &ModeWindow) -> Result<Option<Value>, FieldError> {
    let eng = real.module.engine();
    let (fu, fv) = (real.module.field_of(u), real.module.field_of(v));
    Ok(eng.locality_witness(&fu, &fv, k, win)?.map(|w| {
        json!({
            "k": w.k,
            "p": idx_json(&w.p),
            "q": idx_json(&w.q),
            "state": real.show(&win.states[w.state]),
            "coefficient": real.show(&w.value),
        })
    }))
}

pub fn check_weak_commutativity(real: &Realization, u: &StateVector, v: &StateVector, k: u32, win: &ModeWindow) -> Finding {
    let start = Instant::now();
    let subject = format!("{}, k={k}", real.subject(&[("u", u), ("v", v)]));
    match commutativity_witness(real, u, v, k, win) {
        Ok(w) => finding("weak_commutativity", subject, win.to_json(real.lie()), status_of(&w), w, start),
        Err(e) => error_finding("weak_commutativity", subject, win.to_json(real.lie()), e, start),
    }
}

/// Least `k <= cap` for which weak commutativity holds on the window.
pub fn find_commutativity_order(real: &Realization, u: &StateVector, v: &StateVector, cap: u32, win: &ModeWindow) -> Result<Option<u32>, FieldError> {
    for k in 0..=cap {
        if commutativity_witness(real, u, v, k, win)?.is_none() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Coefficient of `z0^{-a-1} z^{-m} y0^{-b-1} y^{-q}` on both sides of
/// `(z0+y0)^l Y(Y(u;z0,z)v;y0,y)w = (z0+y0)^l Y(u;z0+y0,zy)Y(v;y0,y)w`.
pub fn associativity_sides(
    real: &Realization,
    u: &StateVector,
    v: &StateVector,
    l: u32,
    a: &MultiIndex,
    b: &MultiIndex,
    w: &StateVector,
) -> Result<(StateVector, StateVector), FieldError> {
    let l = l as i64;
    let mut lhs = StateVector::zero();
    for j in 0..=l {
        let uv = real.product(u, a.m0 + l - j, &a.m, v)?;
        if !uv.is_zero() {
            lhs.add_scaled(&real.y(&uv, b.m0 + j, &b.m, w)?, &rational::binomial_q(l, j));
        }
    }
    let mut rhs = StateVector::zero();
    let qm = &b.m - &a.m;
    for j in 0..(vanishing(v, w) - b.m0).max(0) {
        let vw = real.y(v, b.m0 + j, &qm, w)?;
        if !vw.is_zero() {
            rhs.add_scaled(&real.y(u, l + a.m0 - j, &a.m, &vw)?, &rational::binomial_q(j - a.m0 - 1, j));
        }
    }
    Ok((lhs, rhs))
}

pub fn associativity_witness(real: &Realization, u: &StateVector, v: &StateVector, l: u32, win: &ModeWindow) -> Result<Option<Value>, FieldError> {
    let w = first_failure(real, win, |a, b, w| associativity_sides(real, u, v, l, a, b, w))?;
    Ok(w.map(|mut x| {
        x["l"] = json!(l);
        x
    }))
}

pub fn check_weak_associativity(real: &Realization, u: &StateVector, v: &StateVector, l: u32, win: &ModeWindow) -> Finding {
    let start = Instant::now();
    let subject = format!("{}, l={l}", real.subject(&[("u", u), ("v", v)]));
    match associativity_witness(real, u, v, l, win) {
        Ok(w) => finding("weak_associativity", subject, win.to_json(real.lie()), status_of(&w), w, start),
        Err(e) => error_finding("weak_associativity", subject, win.to_json(real.lie()), e, start),
    }
}

pub fn find_associativity_order(real: &Realization, u: &StateVector, v: &StateVector, cap: u32, win: &ModeWindow) -> Result<Option<u32>, FieldError> {
    for l in 0..=cap {
        if associativity_witness(real, u, v, l, win)?.is_none() {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// One coefficient of the Jacobi identity in component form:
/// `Σ_i C(p,i) (u_{(r+i,n)}v)_{(p+q-i,Q)} w =
///  Σ_i (-1)^i C(r,i) [u_{(p+r-i,n)} v_{(q+i,Q-n)} w - (-1)^r v_{(q+r-i,Q-n)} u_{(p+i,n)} w]`.
#[allow(clippy::too_many_arguments)]
pub fn jacobi_sides(
    real: &Realization,
    u: &StateVector,
    v: &StateVector,
    w: &StateVector,
    p: i64,
    r: i64,
    q: i64,
    n: &TorIndex,
    big_q: &TorIndex,
) -> Result<(StateVector, StateVector), FieldError> {
    let cap = |hi: i64, top: i64| if top >= 0 { hi.min(top) } else { hi };
    let mut lhs = StateVector::zero();
    for i in 0..=cap(vanishing(u, v) - r - 1, p) {
        let uv = real.product(u, r + i, n, v)?;
        if !uv.is_zero() {
            lhs.add_scaled(&real.y(&uv, p + q - i, big_q, w)?, &rational::binomial_q(p, i));
        }
    }
    let qn = big_q - n;
    let mut rhs = StateVector::zero();
    for i in 0..=cap(vanishing(v, w) - q - 1, r) {
        let vw = real.y(v, q + i, &qn, w)?;
        if !vw.is_zero() {
            rhs.add_scaled(&real.y(u, p + r - i, n, &vw)?, &(sign(i) * rational::binomial_q(r, i)));
        }
    }
    for i in 0..=cap(vanishing(u, w) - p - 1, r) {
        let uw = real.y(u, p + i, n, w)?;
        if !uw.is_zero() {
            rhs.add_scaled(&real.y(v, q + r - i, &qn, &uw)?, &(-sign(i) * sign(r) * rational::binomial_q(r, i)));
        }
    }
    Ok((lhs, rhs))
}

#[derive(Clone, Copy, Debug)]
pub struct JacobiOptions {
    pub cap: u32,
    pub spot_checks: usize,
    pub seed: u64,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        JacobiOptions { cap: 8, spot_checks: 10, seed: 0x7015 }
    }
}

/// Jacobi identity for `(u, v)` against every window state: weak commutativity
/// at a discovered `k`, weak associativity at a discovered `l`, and direct
/// coefficient spot checks.
pub fn check_jacobi(real: &Realization, u: &StateVector, v: &StateVector, win: &ModeWindow, opts: &JacobiOptions) -> Finding {
    check_jacobi_as("jacobi", real, u, v, win, opts)
}

fn check_jacobi_as(id: &str, real: &Realization, u: &StateVector, v: &StateVector, win: &ModeWindow, opts: &JacobiOptions) -> Finding {
    let start = Instant::now();
    let subject = real.subject(&[("u", u), ("v", v)]);
    let wj = win.to_json(real.lie());
    let run = || -> Result<(Status, Option<Value>), FieldError> {
        let Some(k) = find_commutativity_order(real, u, v, opts.cap, win)? else {
            let w = commutativity_witness(real, u, v, opts.cap, win)?;
            return Ok((Status::CapExceeded, Some(json!({ "weak_commutativity": w }))));
        };
        let Some(l) = find_associativity_order(real, u, v, opts.cap, win)? else {
            let w = associativity_witness(real, u, v, opts.cap, win)?;
            return Ok((Status::CapExceeded, Some(json!({ "k": k, "weak_associativity": w }))));
        };
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let idx = win.indices();
        let pts = win.tor_points();
        for _ in 0..opts.spot_checks {
            let (pi, ri, qi) = (idx.choose(&mut rng).unwrap(), idx.choose(&mut rng).unwrap(), idx.choose(&mut rng).unwrap());
            let n = pts.choose(&mut rng).unwrap();
            let s = rng.gen_range(0..win.states.len());
            let (l_side, r_side) = jacobi_sides(real, u, v, &win.states[s], pi.m0, ri.m0, qi.m0, n, &qi.m)?;
            if l_side != r_side {
                return Ok((
                    Status::Fail,
                    Some(json!({
                        "k": k, "l": l,
                        "spot_check": {"p": pi.m0, "r": ri.m0, "q": qi.m0, "n": n.as_slice(), "Q": qi.m.as_slice(),
                                       "state": real.show(&win.states[s]), "lhs": real.show(&l_side), "rhs": real.show(&r_side)}
                    })),
                ));
            }
        }
        Ok((Status::Pass, None))
    };
    match run() {
        Ok((status, witness)) => finding(id, subject, wj, status, witness, start),
        Err(e) => error_finding(id, subject, wj, e, start),
    }
}

/// `[u_{(p0,m)}, v_{(q0,n)}] w = Σ_i C(p0,i) (u_{(i,m)} v)_{(p0+q0-i, m+n)} w` on the window.
pub fn check_commutator_formula(real: &Realization, u: &StateVector, v: &StateVector, win: &ModeWindow) -> Finding {
    let start = Instant::now();
    let subject = real.subject(&[("u", u), ("v", v)]);
    let res = first_failure(real, win, |p, q, w| {
        let vw = real.y(v, q.m0, &q.m, w)?;
        let uw = real.y(u, p.m0, &p.m, w)?;
        let lhs = real.y(u, p.m0, &p.m, &vw)?.sub(&real.y(v, q.m0, &q.m, &uw)?);
        let total = &p.m + &q.m;
        let mut rhs = StateVector::zero();
        let top = vanishing(u, v) - 1;
        let top = if p.m0 >= 0 { top.min(p.m0) } else { top };
        for i in 0..=top {
            let uv = real.product(u, i, &p.m, v)?;
            if !uv.is_zero() {
                rhs.add_scaled(&real.y(&uv, p.m0 + q.m0 - i, &total, w)?, &rational::binomial_q(p.m0, i));
            }
        }
        Ok((lhs, rhs))
    });
    match res {
        Ok(w) => finding("commutator_formula", subject, win.to_json(real.lie()), status_of(&w), w, start),
        Err(e) => error_finding("commutator_formula", subject, win.to_json(real.lie()), e, start),
    }
}

/// Right-hand side of skew symmetry at `z0^{-m0-1} z^{-m} y0^{-q0-1} y^{-q}`:
/// `Σ_j (-1)^{m0+j+1} C(j-q0-1, j) (v_{(m0+j, q-m)} u)_{(q0-j, q)} w`.
fn skew_rhs(real: &Realization, u: &StateVector, v: &StateVector, m0: i64, m: &TorIndex, q0: i64, q: &TorIndex, w: &StateVector) -> Result<StateVector, FieldError> {
    let qm = q - m;
    let mut out = StateVector::zero();
    for j in 0..(vanishing(u, v) - m0).max(0) {
        let vu = real.product(v, m0 + j, &qm, u)?;
        if !vu.is_zero() {
            let c = sign(m0 + j + 1) * rational::binomial_q(j - q0 - 1, j);
            out.add_scaled(&real.y(&vu, q0 - j, q, w)?, &c);
        }
    }
    Ok(out)
}

pub fn check_skew_symmetry(real: &Realization, u: &StateVector, v: &StateVector, win: &ModeWindow) -> Finding {
    let start = Instant::now();
    let subject = real.subject(&[("u", u), ("v", v)]);
    let res = first_failure(real, win, |a, b, w| {
        let uv = real.product(u, a.m0, &a.m, v)?;
        let lhs = real.y(&uv, b.m0, &b.m, w)?;
        Ok((lhs, skew_rhs(real, u, v, a.m0, &a.m, b.m0, &b.m, w)?))
    });
    match res {
        Ok(w) => finding("skew_symmetry", subject, win.to_json(real.lie()), status_of(&w), w, start),
        Err(e) => error_finding("skew_symmetry", subject, win.to_json(real.lie()), e, start),
    }
}

/// Applies the skew symmetry expansion twice (`(u,v) -> (v,u) -> (u,v)`) and
/// compares with the untouched left-hand side.
pub fn check_skew_involution(real: &Realization, u: &StateVector, v: &StateVector, win: &ModeWindow) -> Finding {
    let start = Instant::now();
    let subject = real.subject(&[("u", u), ("v", v)]);
    let res = first_failure(real, win, |a, b, w| {
        let uv = real.product(u, a.m0, &a.m, v)?;
        let lhs = real.y(&uv, b.m0, &b.m, w)?;
        let qm = &b.m - &a.m;
        let mut rhs = StateVector::zero();
        for j in 0..(vanishing(u, v) - a.m0).max(0) {
            let outer = sign(a.m0 + j + 1) * rational::binomial_q(j - b.m0 - 1, j);
            // (v_{(m0+j, q-m)} u)_{(q0-j, q)} expanded once more with the roles swapped
            let inner = skew_rhs(real, v, u, a.m0 + j, &qm, b.m0 - j, &b.m, w)?;
            rhs.add_scaled(&inner, &outer);
        }
        Ok((lhs, rhs))
    });
    match res {
        Ok(w) => finding("skew_symmetry_involution", subject, win.to_json(real.lie()), status_of(&w), w, start),
        Err(e) => error_finding("skew_symmetry_involution", subject, win.to_json(real.lie()), e, start),
    }
}

/// The vacuum identities for a single state `u`, for `0 <= k <= max_k`.
pub fn check_vacuum_identities(s: &Session, u: &StateVector, max_k: i64, win: &ModeWindow) -> Vec<Finding> {
    let real = Realization::algebra(s);
    let lie = s.lie();
    let wj = win.to_json(lie);
    let subject = real.subject(&[("u", u)]);
    let one = StateVector::vacuum();
    let pts = win.tor_points();
    let idx = win.indices();
    let mut out = Vec::new();

    let start = Instant::now();
    let res = (|| -> Result<Option<Value>, FieldError> {
        for m in &pts {
            for k in 0..=max_k {
                let p = s.product(u, k, m, &one)?;
                if !p.is_zero() {
                    return Ok(Some(json!({"k": k, "m": m.as_slice(), "state": real.show(&p)})));
                }
            }
        }
        Ok(None)
    })();
    out.push(match res {
        Ok(w) => finding("vacuum_annihilation", subject.clone(), wj.clone(), status_of(&w), w, start),
        Err(e) => error_finding("vacuum_annihilation", subject.clone(), wj.clone(), e, start),
    });

    let start = Instant::now();
    let res = (|| -> Result<Option<Value>, FieldError> {
        for m in &pts {
            for k in 0..=max_k {
                let x = s.product(u, -k - 1, m, &one)?;
                for i in &idx {
                    for (si, w) in win.states.iter().enumerate() {
                        let lhs = s.y_mode(&x, i.m0, &i.m, w)?;
                        let rhs = if i.m == *m {
                            s.y_mode(u, i.m0 - k, m, w)?.scaled(&(sign(k) * rational::binomial_q(i.m0, k)))
                        } else {
                            StateVector::zero()
                        };
                        if lhs != rhs {
                            return Ok(Some(json!({"k": k, "m": m.as_slice(), "mode": idx_json(i),
                                "state": real.show(&win.states[si]), "lhs": real.show(&lhs), "rhs": real.show(&rhs)})));
                        }
                    }
                }
            }
        }
        Ok(None)
    })();
    out.push(match res {
        Ok(w) => finding("vacuum_derivative", subject.clone(), wj.clone(), status_of(&w), w, start),
        Err(e) => error_finding("vacuum_derivative", subject.clone(), wj.clone(), e, start),
    });

    let start = Instant::now();
    let res = (|| -> Result<Option<Value>, FieldError> {
        let slices: Vec<StateVector> = pts.iter().map(|m| s.product(u, -1, m, &one)).collect::<Result<_, _>>()?;
        for i in &idx {
            for (si, w) in win.states.iter().enumerate() {
                let lhs = s.y_mode(u, i.m0, &i.m, w)?;
                let mut rhs = StateVector::zero();
                for x in &slices {
                    rhs.add_assign(&s.y_mode(x, i.m0, &i.m, w)?);
                }
                if lhs != rhs {
                    return Ok(Some(json!({"mode": idx_json(i), "state": real.show(&win.states[si]),
                        "lhs": real.show(&lhs), "rhs": real.show(&rhs)})));
                }
            }
        }
        Ok(None)
    })();
    out.push(match res {
        Ok(w) => finding("vacuum_slices", subject, wj, status_of(&w), w, start),
        Err(e) => error_finding("vacuum_slices", subject, wj, e, start),
    });
    out
}

/// `Y(a(-1,m)1)_{(n0,n)} = δ_{n,m} a(n0, m)` for every generator `a` and `m` in the window.
pub fn check_current_shift(s: &Session, win: &ModeWindow) -> Finding {
    let start = Instant::now();
    let real = Realization::algebra(s);
    let res = (|| -> Result<Option<Value>, FieldError> {
        for a in 0..s.lie().dim() {
            for m in win.tor_points() {
                let x = s.module().act(&crate::vacuum::Mode::new(a, -1, m.clone()), &StateVector::vacuum());
                for i in win.indices() {
                    for w in &win.states {
                        let lhs = s.y_mode(&x, i.m0, &i.m, w)?;
                        let rhs = if i.m == m { s.module().act(&crate::vacuum::Mode::new(a, i.m0, m.clone()), w) } else { StateVector::zero() };
                        if lhs != rhs {
                            return Ok(Some(json!({"generator": s.lie().name(a), "m": m.as_slice(), "mode": idx_json(&i),
                                "state": real.show(w), "lhs": real.show(&lhs), "rhs": real.show(&rhs)})));
                        }
                    }
                }
            }
        }
        Ok(None)
    })();
    let wj = win.to_json(s.lie());
    match res {
        Ok(w) => finding("current_shift", "all generators".into(), wj, status_of(&w), w, start),
        Err(e) => error_finding("current_shift", "all generators".into(), wj, e, start),
    }
}

pub fn check_creation(s: &Session, v: &StateVector, win: &ModeWindow) -> Finding {
    let start = Instant::now();
    let real = Realization::algebra(s);
    let subject = real.subject(&[("v", v)]);
    let wj = win.to_json(s.lie());
    match s.creation_check(v, win) {
        Ok(None) => finding("creation", subject, wj, Status::Pass, None, start),
        Ok(Some((i, st))) => {
            let w = json!({"mode": idx_json(&i), "value": real.show(&st)});
            finding("creation", subject, wj, Status::Fail, Some(w), start)
        }
        Err(e) => error_finding("creation", subject, wj, e, start),
    }
}

/// The generator product table: `a_{(0,m)} b = [a,b]`, `a_{(1,m)} b = ℓ<a,b> 1`, zero beyond.
pub fn check_product_table(s: &Session, win: &ModeWindow, top: i64) -> Finding {
    let start = Instant::now();
    let lie = s.lie();
    let res = (|| -> Result<Option<Value>, FieldError> {
        for a in 0..lie.dim() {
            for b in 0..lie.dim() {
                for m in win.tor_points() {
                    for m0 in 0..=top {
                        let got = s.product(&StateVector::tail(a), m0, &m, &StateVector::tail(b))?;
                        let mut want = StateVector::zero();
                        match m0 {
                            0 => {
                                for (c, x) in lie.bracket_basis(a, b) {
                                    want.add_term(Monomial::tail(*c), x.clone());
                                }
                            }
                            1 => want.add_term(Monomial::vacuum(), lie.form(a, b) * s.level()),
                            _ => {}
                        }
                        if got != want {
                            return Ok(Some(json!({"a": lie.name(a), "b": lie.name(b), "m0": m0, "m": m.as_slice(),
                                "got": got.display(lie).to_string(), "expected": want.display(lie).to_string()})));
                        }
                    }
                }
            }
        }
        Ok(None)
    })();
    let wj = win.to_json(lie);
    match res {
        Ok(w) => finding("product_table", "all generator pairs".into(), wj, status_of(&w), w, start),
        Err(e) => error_finding("product_table", "all generator pairs".into(), wj, e, start),
    }
}

/// `a(n0, n) w = 0` for `restricted_witness(w) < n0 <= restricted_witness(w) + extra`.
pub fn check_restrictedness(s: &Session, win: &ModeWindow, extra: i64) -> Finding {
    let start = Instant::now();
    let lie = s.lie();
    let module = s.module();
    let mut witness = None;
    'outer: for w in &win.states {
        let n0_min = module.restricted_witness(w) + 1;
        for a in 0..lie.dim() {
            for n in win.tor_points() {
                for n0 in n0_min..=n0_min + extra {
                    let out = module.act(&crate::vacuum::Mode::new(a, n0, n.clone()), w);
                    if !out.is_zero() {
                        witness = Some(json!({"generator": lie.name(a), "n0": n0, "n": n.as_slice(),
                            "state": w.display(lie).to_string(), "value": out.display(lie).to_string()}));
                        break 'outer;
                    }
                }
            }
        }
    }
    finding("restrictedness", "window states".into(), win.to_json(lie), status_of(&witness), witness, start)
}

pub fn check_lie(lie: &LieAlgebra) -> Finding {
    let start = Instant::now();
    let report = lie.validate();
    let witness = report.violation.as_ref().map(|v| json!({"violation": v, "message": v.to_string()}));
    finding("lie_validation", "g".into(), Value::Null, status_of(&witness), witness, start)
}

/// Random PBW monomial of depth (word length plus one for a `g` tail) at most
/// `depth`, with `k <= max_k` and `m` in `pts`, in canonical form.
pub fn random_state(rng: &mut impl Rng, s: &Session, depth: usize, max_k: i64, pts: &[TorIndex]) -> StateVector {
    let dim = s.lie().dim();
    let tail = if rng.gen_bool(0.5) { Tail::Vacuum } else { Tail::Basis(rng.gen_range(0..dim)) };
    let room = depth - matches!(tail, Tail::Basis(_)) as usize;
    let len = rng.gen_range(if tail == Tail::Vacuum { 1 } else { 0 }..=room);
    let mut word: Vec<CreationMode> = (0..len)
        .map(|_| CreationMode::new(rng.gen_range(0..dim), rng.gen_range(1..=max_k), pts.choose(rng).unwrap().clone()))
        .collect();
    word.sort();
    StateVector::from_monomial(Monomial { word, tail })
}

/// Checks on the vacuum ideal and its vertex operators `Y⁰`.
pub fn check_v0(s: &Session, depth: usize, max_degree: i64, win: &ModeWindow, samples: &[StateVector]) -> Vec<Finding> {
    let lie = s.lie();
    let real = Realization::algebra(s);
    let wj = win.to_json(lie);
    let mut out = Vec::new();
    let one = StateVector::vacuum();

    let start = Instant::now();
    match s.build_v0(depth, max_degree, win) {
        Ok(v0) => {
            let dims: Vec<Value> = v0
                .graded
                .iter()
                .map(|g| json!({"degree": g.degree, "dim": g.dim_in_box, "pbw_count": g.pbw_count, "span_rank": g.span_rank}))
                .collect();
            let status = if v0.dimensions_match() { Status::Pass } else { Status::Fail };
            let mut f = finding("v0_dimensions", format!("depth={depth}, degree<={max_degree}"), wj.clone(), status, None, start);
            f.witness = Some(json!({ "graded": dims }));
            out.push(f);
            let status = if v0.tails_absent { Status::Pass } else { Status::Fail };
            out.push(finding("v0_tails_absent", format!("depth={depth}"), wj.clone(), status, None, start));
        }
        Err(e) => out.push(error_finding("v0_dimensions", format!("depth={depth}"), wj.clone(), e, start)),
    }

    // [Y⁰(a(-1,m)1)_{p0}, Y⁰(b(-1,n)1)_{q0}] = Y⁰([a,b](-1,m+n)1)_{p0+q0} + p0 <a,b> δ_{m+n,0} δ_{p0+q0,0} ℓ
    let start = Instant::now();
    let res = (|| -> Result<Option<Value>, VertexError> {
        let m0s: Vec<i64> = win.m0_values().collect();
        for a in 0..lie.dim() {
            for b in 0..lie.dim() {
                for m in win.tor_points() {
                    for n in win.tor_points() {
                        let ua = s.module().act(&crate::vacuum::Mode::new(a, -1, m.clone()), &one);
                        let ub = s.module().act(&crate::vacuum::Mode::new(b, -1, n.clone()), &one);
                        let mut ab = StateVector::zero();
                        for (c, x) in lie.bracket_basis(a, b) {
                            ab.add_scaled(&s.module().act(&crate::vacuum::Mode::new(*c, -1, &m + &n), &one), x);
                        }
                        for &p0 in &m0s {
                            for &q0 in &m0s {
                                for w in &win.states {
                                    if w.terms().any(|(mm, _)| mm.tail != Tail::Vacuum) {
                                        continue;
                                    }
                                    let lhs = s.y0_mode(&ua, p0, &s.y0_mode(&ub, q0, w)?)?.sub(&s.y0_mode(&ub, q0, &s.y0_mode(&ua, p0, w)?)?);
                                    let mut rhs = s.y0_mode(&ab, p0 + q0, w)?;
                                    if p0 + q0 == 0 && (&m + &n).is_zero() {
                                        rhs.add_scaled(w, &(rational::int(p0) * lie.form(a, b) * s.level()));
                                    }
                                    if lhs != rhs {
                                        return Ok(Some(json!({"a": lie.name(a), "b": lie.name(b), "m": m.as_slice(), "n": n.as_slice(),
                                            "p0": p0, "q0": q0, "state": real.show(w), "lhs": real.show(&lhs), "rhs": real.show(&rhs)})));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    })();
    out.push(match res {
        Ok(w) => finding("v0_affine_commutator", "all generator pairs".into(), wj.clone(), status_of(&w), w, start),
        Err(e) => error_finding("v0_affine_commutator", "all generator pairs".into(), wj.clone(), e, start),
    });

    for u in samples {
        let subject = real.subject(&[("u", u)]);
        // reconstruction: u_{(n0,n)} w = Y⁰(u_{(-1,n)} 1)_{n0} w
        let start = Instant::now();
        let res = (|| -> Result<Option<Value>, VertexError> {
            for i in win.indices() {
                let slice = s.product(u, -1, &i.m, &one)?;
                for w in &win.states {
                    let lhs = s.y_mode(u, i.m0, &i.m, w)?;
                    let rhs = s.y0_mode(&slice, i.m0, w)?;
                    if lhs != rhs {
                        return Ok(Some(json!({"mode": idx_json(&i), "state": real.show(w), "lhs": real.show(&lhs), "rhs": real.show(&rhs)})));
                    }
                }
            }
            Ok(None)
        })();
        out.push(match res {
            Ok(w) => finding("v0_reconstruction", subject.clone(), wj.clone(), status_of(&w), w, start),
            Err(e) => error_finding("v0_reconstruction", subject.clone(), wj.clone(), e, start),
        });

        // the remaining checks need u in the vacuum ideal
        if s.x_support(u).is_err() {
            continue;
        }
        let start = Instant::now();
        let res = (|| -> Result<Option<Value>, VertexError> {
            for n0 in 0..=win.m0.1.max(2) {
                let x = s.y0_mode(u, n0, &one)?;
                if !x.is_zero() {
                    return Ok(Some(json!({"n0": n0, "value": real.show(&x)})));
                }
            }
            let c = s.y0_mode(u, -1, &one)?;
            Ok((c != *u).then(|| json!({"n0": -1, "value": real.show(&c)})))
        })();
        out.push(match res {
            Ok(w) => finding("v0_creation", subject.clone(), wj.clone(), status_of(&w), w, start),
            Err(e) => error_finding("v0_creation", subject.clone(), wj.clone(), e, start),
        });

        let start = Instant::now();
        let res = (|| -> Result<Option<Value>, VertexError> {
            let d = s.y0_mode(u, -2, &one)?;
            let l = s.d0_leibniz(u)?;
            Ok((d != l).then(|| json!({"translation": real.show(&d), "leibniz": real.show(&l)})))
        })();
        out.push(match res {
            Ok(w) => finding("v0_translation", subject.clone(), wj.clone(), status_of(&w), w, start),
            Err(e) => error_finding("v0_translation", subject.clone(), wj.clone(), e, start),
        });

        let start = Instant::now();
        out.push(match s.precover_roundtrip(u, win) {
            Ok(None) => finding("v0_single_support", subject.clone(), wj.clone(), Status::Pass, None, start),
            Ok(Some(mm)) => {
                let w = json!({"mode": idx_json(&mm.index), "state": real.show(&win.states[mm.state]),
                    "lhs": real.show(&mm.lhs), "rhs": real.show(&mm.rhs)});
                finding("v0_single_support", subject.clone(), wj.clone(), Status::Fail, Some(w), start)
            }
            Err(e) => error_finding("v0_single_support", subject.clone(), wj.clone(), e, start),
        });
    }

    // ordinary Jacobi identity for Y⁰ on pairs of samples in the vacuum ideal
    let v0_samples: Vec<&StateVector> = samples.iter().filter(|u| s.x_support(u).is_ok()).collect();
    let v0_states: Vec<&StateVector> = win.states.iter().filter(|w| s.x_support(w).is_ok()).collect();
    let start = Instant::now();
    let res = (|| -> Result<Option<Value>, VertexError> {
        let m0s: Vec<i64> = win.m0_values().collect();
        for (i, u) in v0_samples.iter().enumerate() {
            for v in v0_samples.iter().skip(i) {
                for w in &v0_states {
                    for &p in &m0s {
                        for &r in &m0s {
                            for &q in &m0s {
                                let (l, rr) = v0_jacobi_sides(s, u, v, w, p, r, q)?;
                                if l != rr {
                                    return Ok(Some(json!({"u": real.show(u), "v": real.show(v), "state": real.show(w),
                                        "p": p, "r": r, "q": q, "lhs": real.show(&l), "rhs": real.show(&rr)})));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    })();
    out.push(match res {
        Ok(w) => finding("v0_jacobi", format!("{} samples", v0_samples.len()), wj.clone(), status_of(&w), w, start),
        Err(e) => error_finding("v0_jacobi", format!("{} samples", v0_samples.len()), wj, e, start),
    });
    out
}

fn v0_jacobi_sides(s: &Session, u: &StateVector, v: &StateVector, w: &StateVector, p: i64, r: i64, q: i64) -> Result<(StateVector, StateVector), VertexError> {
    let cap = |hi: i64, top: i64| if top >= 0 { hi.min(top) } else { hi };
    let mut lhs = StateVector::zero();
    for i in 0..=cap(vanishing(u, v) - r - 1, p) {
        let uv = s.y0_mode(u, r + i, v)?;
        if !uv.is_zero() {
            lhs.add_scaled(&s.y0_mode(&uv, p + q - i, w)?, &rational::binomial_q(p, i));
        }
    }
    let mut rhs = StateVector::zero();
    for i in 0..=cap(vanishing(v, w) - q - 1, r) {
        let vw = s.y0_mode(v, q + i, w)?;
        if !vw.is_zero() {
            rhs.add_scaled(&s.y0_mode(u, p + r - i, &vw)?, &(sign(i) * rational::binomial_q(r, i)));
        }
    }
    for i in 0..=cap(vanishing(u, w) - p - 1, r) {
        let uw = s.y0_mode(u, p + i, w)?;
        if !uw.is_zero() {
            rhs.add_scaled(&s.y0_mode(v, q + r - i, &uw)?, &(-sign(i) * sign(r) * rational::binomial_q(r, i)));
        }
    }
    Ok((lhs, rhs))
}

/// The module Jacobi identity for `Y_W`, plus restrictedness of `W`.
pub fn check_module(real: &Realization, pairs: &[(StateVector, StateVector)], win: &ModeWindow, opts: &JacobiOptions) -> Vec<Finding> {
    let mut out: Vec<Finding> = exec::map(pairs, |(u, v)| check_jacobi_as("module_jacobi", real, u, v, win, opts));
    out.push(check_restrictedness(real.module, win, 3));
    out
}

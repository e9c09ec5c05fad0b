//! Brute-force residue calculus: truncated multivariate Laurent series with
//! state-valued coefficients, binomial expansions under the fixed conventions,
//! and residues as plain coefficient extraction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use toroidal_core::index::box_points;
use toroidal_core::{Rational, StateVector, TorIndex};

/// Exponent vector over `(x0, x1..xr, y0, y1..yr)`.
type Exp = Vec<i64>;

/// Independent generalized binomial coefficient, via the multiplicative formula
/// on rationals.
pub fn binom(n: i64, j: i64) -> Rational {
    let mut acc = Rational::one();
    for t in 0..j {
        acc = acc * Rational::from_integer(BigInt::from(n - t)) / Rational::from_integer(BigInt::from(t + 1));
    }
    acc
}

#[derive(Clone, Debug, Default)]
pub struct Series {
    pub terms: BTreeMap<Exp, StateVector>,
}

#[derive(Clone, Debug, Default)]
pub struct Poly {
    pub terms: BTreeMap<Exp, Rational>,
}

impl Poly {
    fn add(&mut self, e: Exp, c: Rational) {
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
    }

    /// `(s0 * x0 + s1 * y0)^n` in `2(r+1)` variables, expanded in nonnegative
    /// powers of the variable named by `small` (0 for x0, 1 for y0), to `terms` terms.
    pub fn binomial(rank: usize, n: i64, s0: i64, s1: i64, small: usize, terms: i64) -> Poly {
        let mut p = Poly::default();
        let y0 = rank + 1;
        for j in 0..terms {
            let c = binom(n, j);
            let mut e = vec![0; 2 * (rank + 1)];
            let (big_var, small_var, big_sign, small_sign) = if small == 1 { (0, y0, s0, s1) } else { (y0, 0, s1, s0) };
            e[big_var] = n - j;
            e[small_var] = j;
            let sign = Rational::from_integer(BigInt::from(big_sign)).pow((n - j) as i32)
                * Rational::from_integer(BigInt::from(small_sign)).pow(j as i32);
            p.add(e, c * sign);
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }
}

impl Series {
    fn add(&mut self, e: Exp, s: &StateVector, c: &Rational) {
        if s.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_default();
        slot.add_scaled(s, c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        let mut out = self.clone();
        let minus = -Rational::one();
        for (e, s) in &other.terms {
            out.add(e.clone(), s, &minus);
        }
        out
    }

    pub fn shift(&self, by: &[i64]) -> Series {
        Series {
            terms: self
                .terms
                .iter()
                .map(|(e, s)| (e.iter().zip(by).map(|(a, b)| a + b).collect(), s.clone()))
                .collect(),
        }
    }

    pub fn coeff(&self, e: &[i64]) -> StateVector {
        self.terms.get(e).cloned().unwrap_or_default()
    }
}

/// `a(x0,x) b(y0,y) w` (or `b(y0,y) a(x0,x) w` when `b_first` is false),
/// truncated to `x0`/`y0` modes in `[-l, l]` and toroidal modes in `tbox`.
pub fn operator_product<A, B>(a: &A, b: &B, w: &StateVector, rank: usize, l: i64, boxes: (&[(i64, i64)], &[(i64, i64)]), b_first: bool) -> Series
where
    A: Fn(i64, &TorIndex, &StateVector) -> StateVector,
    B: Fn(i64, &TorIndex, &StateVector) -> StateVector,
{
    let (apts, bpts) = (box_points(boxes.0), box_points(boxes.1));
    let one = Rational::one();
    let mut s = Series::default();
    for p0 in -l..=l {
        for p in &apts {
            for q0 in -l..=l {
                for q in &bpts {
                    let v = if b_first { a(p0, p, &b(q0, q, w)) } else { b(q0, q, &a(p0, p, w)) };
                    let mut e = vec![-p0 - 1];
                    e.extend(p.as_slice().iter().map(|x| -x));
                    e.push(-q0 - 1);
                    e.extend(q.as_slice().iter().map(|x| -x));
                    debug_assert_eq!(e.len(), 2 * (rank + 1));
                    s.add(e, &v, &one);
                }
            }
        }
    }
    s
}

/// Precomputed `a b w` and `b a w` series from which the modes of every
/// product `a_{(m0,m)} b` can be read off.
pub struct ProductOracle {
    rank: usize,
    l: i64,
    ab: Series,
    ba: Series,
}

impl ProductOracle {
    pub fn new<A, B>(a: &A, b: &B, w: &StateVector, rank: usize, l: i64, tbox: &[(i64, i64)]) -> Self
    where
        A: Fn(i64, &TorIndex, &StateVector) -> StateVector,
        B: Fn(i64, &TorIndex, &StateVector) -> StateVector,
    {
        Self::with_boxes(a, b, w, rank, l, tbox, tbox)
    }

    /// Separate toroidal truncation boxes for the modes of `a` and of `b`.
    #[allow(clippy::too_many_arguments)]
    pub fn with_boxes<A, B>(a: &A, b: &B, w: &StateVector, rank: usize, l: i64, abox: &[(i64, i64)], bbox: &[(i64, i64)]) -> Self
    where
        A: Fn(i64, &TorIndex, &StateVector) -> StateVector,
        B: Fn(i64, &TorIndex, &StateVector) -> StateVector,
    {
        ProductOracle {
            rank,
            l,
            ab: operator_product(a, b, w, rank, l, (abox, bbox), true),
            ba: operator_product(a, b, w, rank, l, (abox, bbox), false),
        }
    }

    /// `Res_{x0} Res_x x^{m-1} y^{-m} ((x0-y0)^{m0} a b - (-y0+x0)^{m0} b a) w`
    /// as a series in `y0, y`. The `x` residue is taken first (the binomial
    /// factors do not involve `x`), and only products landing on `x0^{-1}` are formed.
    pub fn product(&self, m0: i64, m: &TorIndex) -> Series {
        let r = self.rank;
        let terms = 4 * self.l + 4 + m0.abs();
        let p = Poly::binomial(r, m0, 1, -1, 1, terms);
        let q = Poly::binomial(r, m0, 1, -1, 0, terms);
        let mut by = vec![0; 2 * (r + 1)];
        for i in 0..r {
            by[1 + i] = m.get(i) - 1;
            by[r + 2 + i] = -m.get(i);
        }
        let x_residue = |s: &Series| Series {
            terms: s.shift(&by).terms.into_iter().filter(|(e, _)| e[1..=r].iter().all(|&x| x == -1)).collect(),
        };
        let x0_residue = |s: &Series, p: &Poly| {
            let mut out = Series::default();
            for (e1, c) in &p.terms {
                for (e2, v) in &s.terms {
                    if e1[0] + e2[0] == -1 {
                        out.add(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), v, c);
                    }
                }
            }
            out
        };
        x0_residue(&x_residue(&self.ab), &p).sub(&x0_residue(&x_residue(&self.ba), &q))
    }

    /// Coefficient of `y0^{-k0-1} y^{-k}` in a series returned by [`ProductOracle::product`].
    pub fn mode(&self, product: &Series, k0: i64, k: &TorIndex) -> StateVector {
        let mut e = vec![-1; self.rank + 1];
        e.push(-k0 - 1);
        e.extend(k.as_slice().iter().map(|x| -x));
        product.coeff(&e)
    }
}

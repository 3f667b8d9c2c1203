//! Real root isolation for univariate polynomials over ℚ via Sturm sequences,
//! plus exact sign evaluation at the isolated (real algebraic) roots.
//!
//! Univariate polynomials are handled densely as coefficient vectors
//! `[a_0, ..., a_d]` without trailing zeros.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::{rat_int, Interval, MPoly, Rat};
use crate::{Error, Result};

pub(crate) fn dense_from_mpoly(p: &MPoly, v: usize) -> Vec<Rat> {
    let mut out = vec![rat_int(0); p.degree_in(v) as usize + 1];
    for (e, c) in p.terms() {
        debug_assert!(
            e.iter().enumerate().all(|(i, &k)| i == v || k == 0),
            "polynomial is not univariate in the chosen variable"
        );
        out[e[v] as usize] += c.clone();
    }
    trim(&mut out);
    out
}

fn trim(p: &mut Vec<Rat>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

pub(crate) fn dense_eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = rat_int(0);
    for c in p.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

pub(crate) fn dense_deriv(p: &[Rat]) -> Vec<Rat> {
    if p.len() <= 1 {
        return Vec::new();
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.clone() * rat_int(k as i64))
        .collect()
}

fn dense_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!den.is_empty(), "division by zero polynomial");
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![rat_int(0); rem.len() - dd];
    let lead = den[dd].clone();
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = rem.last().unwrap().clone() / lead.clone();
        quot[k] = c.clone();
        for (i, dc) in den.iter().enumerate() {
            let idx = k + i;
            let sub = c.clone() * dc.clone();
            rem[idx] -= sub;
        }
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    trim(&mut quot);
    (quot, rem)
}

pub(crate) fn dense_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    trim(&mut f);
    trim(&mut g);
    while !g.is_empty() {
        let (_, r) = dense_divmod(&f, &g);
        f = g;
        g = r;
    }
    // monic normalization
    if let Some(lc) = f.last().cloned() {
        for c in f.iter_mut() {
            *c /= lc.clone();
        }
    }
    f
}

/// `p / gcd(p, p')`: same real roots, all simple.
pub fn squarefree_part(p: &[Rat]) -> Vec<Rat> {
    let g = dense_gcd(p, &dense_deriv(p));
    if g.len() <= 1 {
        return p.to_vec();
    }
    let (q, r) = dense_divmod(p, &g);
    debug_assert!(r.is_empty());
    q
}

/// Sturm chain of a squarefree polynomial: `f, f', -rem(...), ...`.
pub fn sturm_chain(p: &[Rat]) -> Vec<Vec<Rat>> {
    let mut chain = vec![p.to_vec()];
    let d = dense_deriv(p);
    if !d.is_empty() {
        chain.push(d);
    }
    while chain.last().map(|f| f.len() > 1).unwrap_or(false) {
        let n = chain.len();
        let (_, r) = dense_divmod(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.iter().map(|c| -c.clone()).collect());
    }
    chain
}

/// Sign variation count of the chain at `x`; `x = None` means +∞ when
/// `at_plus_inf`, −∞ otherwise.
pub fn sign_variations(chain: &[Vec<Rat>], x: Option<&Rat>, at_plus_inf: bool) -> usize {
    let mut signs: Vec<i8> = Vec::new();
    for f in chain {
        let s: i8 = match x {
            Some(x) => {
                let v = dense_eval(f, x);
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            }
            None => {
                if f.is_empty() {
                    0
                } else {
                    let lc = f.last().unwrap();
                    let base: i8 = if lc.is_positive() { 1 } else { -1 };
                    if at_plus_inf || (f.len() - 1) % 2 == 0 {
                        base
                    } else {
                        -base
                    }
                }
            }
        };
        if s != 0 {
            signs.push(s);
        }
    }
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of roots of the (squarefree) chain owner in the open interval
/// `(a, b)`, assuming neither endpoint is a root.
pub fn sturm_count(chain: &[Vec<Rat>], a: &Rat, b: &Rat) -> usize {
    sign_variations(chain, Some(a), false) - sign_variations(chain, Some(b), false)
}

/// Cauchy bound `1 + max|a_i| / |a_d|`: every real root has absolute value
/// strictly below it.
pub fn cauchy_bound(p: &[Rat]) -> Rat {
    let lc = p.last().expect("zero polynomial").abs();
    let mx = p[..p.len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(|| rat_int(0));
    rat_int(1) + mx / lc
}

/// Attempts to find a rational root of `p` inside `iv` with denominator up
/// to 64, scanning outward from the midpoint. Corpus roots have small
/// denominators; irrational roots simply stay interval-represented.
fn rational_root_in(p: &[Rat], iv: &Interval) -> Option<Rat> {
    for denom in 1i64..=64 {
        let d = rat_int(denom);
        let lo_n = (iv.lo.clone() * d.clone()).ceil();
        let hi_n = (iv.hi.clone() * d.clone()).floor();
        let mut n = lo_n.clone();
        let mut steps = 0;
        while n <= hi_n && steps < 256 {
            let cand = n.clone() / d.clone();
            if iv.contains(&cand) && dense_eval(p, &cand).is_zero() {
                return Some(cand);
            }
            n += rat_int(1);
            steps += 1;
        }
    }
    None
}

/// Isolates all real roots of a nonzero univariate polynomial. Output
/// intervals are pairwise disjoint and sorted increasingly; each contains
/// exactly one real root. Rational roots with small denominators collapse
/// to point intervals.
pub fn isolate_real_roots(p: &MPoly) -> Result<Vec<Interval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let v = p.max_var().unwrap_or(0);
    isolate_real_roots_dense(&dense_from_mpoly(p, v))
}

pub(crate) fn isolate_real_roots_dense(p: &[Rat]) -> Result<Vec<Interval>> {
    if p.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if p.len() == 1 {
        return Ok(Vec::new());
    }
    let q = squarefree_part(p);
    let chain = sturm_chain(&q);
    let bound = cauchy_bound(&q);
    let mut out = Vec::new();
    let lo = -bound.clone();
    let total = sturm_count(&chain, &lo, &bound);
    isolate_rec(&q, &chain, &lo, &bound, total, &mut out);
    Ok(out)
}

fn isolate_rec(
    q: &[Rat],
    chain: &[Vec<Rat>],
    a: &Rat,
    b: &Rat,
    count: usize,
    out: &mut Vec<Interval>,
) {
    if count == 0 {
        return;
    }
    if count == 1 {
        let iv = Interval::open(a.clone(), b.clone());
        if let Some(r) = rational_root_in(q, &iv) {
            out.push(Interval::point(r));
        } else {
            out.push(iv);
        }
        return;
    }
    // pick a bisection point that is not itself a root
    let mid = pick_non_root(q, a, b);
    if dense_eval(q, &mid).is_zero() {
        unreachable!("pick_non_root returned a root");
    }
    let left = sturm_count(chain, a, &mid);
    isolate_rec(q, chain, a, &mid, left, out);
    isolate_rec(q, chain, &mid, b, count - left, out);
}

fn pick_non_root(q: &[Rat], a: &Rat, b: &Rat) -> Rat {
    let w = b.clone() - a.clone();
    for (num, den) in [(1i64, 2i64), (1, 4), (3, 4), (1, 8), (3, 8), (5, 8), (7, 8), (1, 16), (15, 16)] {
        let cand = a.clone() + w.clone() * rat_int(num) / rat_int(den);
        if !dense_eval(q, &cand).is_zero() {
            return cand;
        }
    }
    // a polynomial has finitely many roots; walk dyadics until clear
    let mut den = rat_int(32);
    loop {
        let cand = a.clone() + w.clone() / den.clone();
        if !dense_eval(q, &cand).is_zero() {
            return cand;
        }
        den *= rat_int(2);
    }
}

/// All rational roots (small denominators) of `p`, sorted.
pub fn find_rational_roots(p: &MPoly) -> Vec<Rat> {
    match isolate_real_roots(p) {
        Ok(ivs) => ivs
            .into_iter()
            .filter(|iv| iv.is_point())
            .map(|iv| iv.lo)
            .collect(),
        Err(_) => Vec::new(),
    }
}

/// A real algebraic number: the unique root of `poly` inside `interval`.
/// Point intervals are exact rationals.
#[derive(Clone, Debug)]
pub struct AlgNumber {
    poly: Vec<Rat>,
    interval: Interval,
}

impl AlgNumber {
    pub fn from_rat(x: Rat) -> Self {
        let poly = vec![-x.clone(), rat_int(1)];
        AlgNumber { poly, interval: Interval::point(x) }
    }

    /// `poly` must be squarefree with exactly one root in `interval`, the
    /// endpoints of which must not be roots (unless the interval is a point).
    pub fn new(poly: Vec<Rat>, interval: Interval) -> Self {
        AlgNumber { poly, interval }
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn defining(&self) -> &[Rat] {
        &self.poly
    }

    pub fn to_rat(&self) -> Option<Rat> {
        if self.interval.is_point() {
            Some(self.interval.lo.clone())
        } else {
            None
        }
    }

    /// One bisection step keeping the root inside.
    pub fn refine(&mut self) {
        if self.interval.is_point() {
            return;
        }
        let mid = pick_non_root(&self.poly, &self.interval.lo, &self.interval.hi);
        let sa = dense_eval(&self.poly, &self.interval.lo);
        let sm = dense_eval(&self.poly, &mid);
        if sa.is_positive() != sm.is_positive() {
            self.interval = Interval::open(self.interval.lo.clone(), mid);
        } else {
            self.interval = Interval::open(mid, self.interval.hi.clone());
        }
    }

    /// Refines until the interval is narrower than `width`.
    pub fn refine_below(&mut self, width: &Rat) {
        while !self.interval.is_point() && self.interval.width() >= *width {
            self.refine();
        }
    }

    /// Rational approximation within `width` of the root.
    pub fn approx(&self, width: &Rat) -> Rat {
        let mut me = self.clone();
        me.refine_below(width);
        me.interval.midpoint()
    }

    /// Exact sign of the univariate polynomial `q` at this number.
    pub fn sign_of(&self, q: &[Rat]) -> i32 {
        if q.is_empty() {
            return 0;
        }
        if let Some(r) = self.to_rat() {
            return rat_sign(&dense_eval(q, &r));
        }
        // zero test: q vanishes at the root iff gcd(poly, q) does
        let g = dense_gcd(&self.poly, q);
        if g.len() > 1 {
            let chain = sturm_chain(&g);
            if sturm_count(&chain, &self.interval.lo, &self.interval.hi) > 0 {
                return 0;
            }
        }
        // q(α) ≠ 0: refine until q has no root in the interval, then the
        // sign at the midpoint is the sign at α
        let qs = squarefree_part(q);
        let chain_q = sturm_chain(&qs);
        let mut me = self.clone();
        loop {
            if let Some(r) = me.to_rat() {
                return rat_sign(&dense_eval(q, &r));
            }
            let lo_z = dense_eval(q, &me.interval.lo).is_zero();
            let hi_z = dense_eval(q, &me.interval.hi).is_zero();
            if !lo_z && !hi_z && sturm_count(&chain_q, &me.interval.lo, &me.interval.hi) == 0 {
                return rat_sign(&dense_eval(q, &me.interval.midpoint()));
            }
            me.refine();
        }
    }

    pub fn cmp_alg(&self, other: &AlgNumber) -> Ordering {
        if let (Some(a), Some(b)) = (self.to_rat(), other.to_rat()) {
            return a.cmp(&b);
        }
        // equality iff the gcd of the defining polynomials has a root in the
        // overlap of the isolating intervals
        let mut a = self.clone();
        let mut b = other.clone();
        if a.interval.intersects(&b.interval) {
            let g = dense_gcd(&a.poly, &b.poly);
            if g.len() > 1 {
                let chain = sturm_chain(&g);
                let lo = if a.interval.lo >= b.interval.lo { a.interval.lo.clone() } else { b.interval.lo.clone() };
                let hi = if a.interval.hi <= b.interval.hi { a.interval.hi.clone() } else { b.interval.hi.clone() };
                if lo < hi && sturm_count(&chain, &lo, &hi) > 0 {
                    // the common root lies in both isolating intervals
                    let point_ok = |n: &AlgNumber, x: &Rat, y: &Rat| -> bool {
                        n.interval.contains(x) || n.interval.contains(y)
                    };
                    let _ = point_ok;
                    return Ordering::Equal;
                }
                if lo == hi && a.interval.contains(&lo) && b.interval.contains(&lo) && dense_eval(&g, &lo).is_zero() {
                    return Ordering::Equal;
                }
            }
        }
        loop {
            if !a.interval.intersects(&b.interval) {
                return if a.interval.hi <= b.interval.lo { Ordering::Less } else { Ordering::Greater };
            }
            if let (Some(x), Some(y)) = (a.to_rat(), b.to_rat()) {
                return x.cmp(&y);
            }
            a.refine();
            b.refine();
        }
    }
}

pub(crate) fn rat_sign(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn upoly(coeffs: &[i64]) -> MPoly {
        MPoly::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (vec![k as u32], rat_int(c))),
        )
    }

    // x^2 - 2: Sturm sign-variation difference at ±bound must be 2.
    #[test]
    fn isolates_sqrt2() {
        let p = upoly(&[-2, 0, 1]);
        let dense = dense_from_mpoly(&p, 0);
        let chain = sturm_chain(&dense);
        let b = cauchy_bound(&dense);
        assert_eq!(sturm_count(&chain, &-b.clone(), &b), 2);
        let ivs = isolate_real_roots(&p).unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].hi <= ivs[1].lo);
        // refining keeps exactly one sign change per interval
        for iv in &ivs {
            let mut a = AlgNumber::new(dense.clone(), iv.clone());
            for _ in 0..8 {
                a.refine();
                assert_eq!(sturm_count(&chain, &a.interval().lo, &a.interval().hi), 1);
            }
        }
    }

    #[test]
    fn no_real_roots() {
        let p = upoly(&[1, 0, 1]);
        assert!(isolate_real_roots(&p).unwrap().is_empty());
    }

    #[test]
    fn rational_roots_become_points() {
        // x(x-1)(x-2) = x^3 - 3x^2 + 2x
        let p = upoly(&[0, 2, -3, 1]);
        let ivs = isolate_real_roots(&p).unwrap();
        assert_eq!(ivs.len(), 3);
        let pts: Vec<Rat> = ivs.iter().map(|iv| iv.lo.clone()).collect();
        assert_eq!(pts, vec![rat_int(0), rat_int(1), rat_int(2)]);
        assert!(ivs.iter().all(|iv| iv.is_point()));
    }

    #[test]
    fn zero_poly_is_an_error() {
        assert!(isolate_real_roots(&MPoly::zero(1)).is_err());
    }

    #[test]
    fn repeated_roots_are_isolated_once() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let p = upoly(&[2, -3, 0, 1]);
        let ivs = isolate_real_roots(&p).unwrap();
        assert_eq!(ivs.len(), 2);
    }

    #[test]
    fn sign_at_algebraic_number() {
        let dense = vec![rat_int(-2), rat_int(0), rat_int(1)]; // x^2-2
        let ivs = isolate_real_roots_dense(&dense).unwrap();
        let sqrt2 = AlgNumber::new(dense.clone(), ivs[1].clone());
        // sign of x^2 - 2 at sqrt2 is 0
        assert_eq!(sqrt2.sign_of(&dense), 0);
        // sign of x - 1 at sqrt2 is +1
        assert_eq!(sqrt2.sign_of(&[rat_int(-1), rat_int(1)]), 1);
        // sign of x - 3/2 at sqrt2: sqrt2 < 3/2? no: sqrt2 ≈ 1.414 < 1.5 → negative
        assert_eq!(sqrt2.sign_of(&[rat(-3, 2), rat_int(1)]), -1);
        let minus = AlgNumber::new(dense.clone(), ivs[0].clone());
        assert_eq!(minus.cmp_alg(&sqrt2), Ordering::Less);
        assert_eq!(sqrt2.cmp_alg(&sqrt2), Ordering::Equal);
    }
}

//! Sparse multivariate polynomials over ℚ.
//!
//! Variables are indices `0..nvars` under a single global total order;
//! exponent vectors always have length `nvars` and no zero coefficient is
//! ever stored. Values are immutable once built, so sharing across threads
//! is unrestricted.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{rat_int, rat_string, Rat};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, rat_int(1))
    }

    pub fn int(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, rat_int(n))
    }

    /// The monomial `x_v`.
    pub fn var(nvars: usize, v: usize) -> Self {
        assert!(v < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[v] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, rat_int(1));
        p
    }

    pub fn monomial(nvars: usize, exps: &[(usize, u32)], c: Rat) -> Self {
        let mut e = vec![0; nvars];
        for &(v, k) in exps {
            assert!(v < nvars);
            e[v] += k;
        }
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length must equal nvars");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// The constant value if `self` is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(rat_int(0))
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree in variable `v`; -1 as `None` would be awkward, so returns 0 for
    /// polynomials free of `v` and panics on out-of-range `v`.
    pub fn degree_in(&self, v: usize) -> u32 {
        assert!(v < self.nvars);
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn occurs(&self, v: usize) -> bool {
        v < self.nvars && self.terms.keys().any(|e| e[v] > 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Coefficient of `x_v^k` as a polynomial (same variable count, `v`-free).
    pub fn coeff_of(&self, v: usize, k: u32) -> MPoly {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == k {
                let mut e2 = e.clone();
                e2[v] = 0;
                p.add_term(e2, c.clone());
            }
        }
        p
    }

    /// Leading coefficient with respect to `v`.
    pub fn leading_coeff(&self, v: usize) -> MPoly {
        self.coeff_of(v, self.degree_in(v))
    }

    /// All coefficients `[c_0, ..., c_d]` with respect to `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v);
        (0..=d).map(|k| self.coeff_of(v, k)).collect()
    }

    /// Partial derivative with respect to `x_v`.
    pub fn deriv(&self, v: usize) -> MPoly {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                p.add_term(e2, c.clone() * rat_int(e[v] as i64));
            }
        }
        p
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut p = Self::zero(self.nvars);
        for (e, k) in &self.terms {
            p.terms.insert(e.clone(), k.clone() * c.clone());
        }
        p
    }

    pub fn pow(&self, mut n: u32) -> MPoly {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Exact evaluation; `vals` must supply one rational per variable.
    pub fn eval(&self, vals: &[Rat]) -> Rat {
        assert_eq!(vals.len(), self.nvars, "evaluation arity mismatch");
        let mut acc = rat_int(0);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= vals[v].clone();
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes polynomial `q` for variable `v`.
    pub fn subst(&self, v: usize, q: &MPoly) -> MPoly {
        assert_eq!(q.nvars, self.nvars);
        let d = self.degree_in(v);
        // Horner in v.
        let mut acc = Self::zero(self.nvars);
        for k in (0..=d).rev() {
            acc = &(&acc * q) + &self.coeff_of(v, k);
        }
        acc
    }

    /// Reinterprets the polynomial in a space with `new_nvars` variables,
    /// sending old variable `i` to `map[i]`.
    pub fn remap(&self, new_nvars: usize, map: &[usize]) -> MPoly {
        assert_eq!(map.len(), self.nvars);
        let mut p = Self::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; new_nvars];
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    assert!(map[v] < new_nvars, "remap target out of range");
                    e2[map[v]] += k;
                }
            }
            p.add_term(e2, c.clone());
        }
        p
    }

    /// Largest variable index that actually occurs, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&k| k > 0))
            .max()
    }

    /// Divides out the rational content and makes the leading coefficient
    /// (in the exponent order) positive. Zero stays zero.
    pub fn normalized(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut num_gcd = num_bigint::BigInt::from(0);
        let mut den_lcm = num_bigint::BigInt::from(1);
        for c in self.terms.values() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let scale = Rat::new(den_lcm, num_gcd);
        let mut p = self.scale(&scale);
        // sign: the leading term under the jet order (highest variable
        // dominant) gets a positive coefficient
        let lead = p
            .terms
            .iter()
            .max_by(|(ea, _), (eb, _)| {
                let ra: Vec<_> = ea.iter().rev().collect();
                let rb: Vec<_> = eb.iter().rev().collect();
                ra.cmp(&rb)
            })
            .map(|(_, c)| c.clone());
        if let Some(c) = lead {
            if c.is_negative() {
                p = -&p;
            }
        }
        p
    }

    /// Exact division: returns `Some(q)` with `self = q * d` when the
    /// division is exact, `None` otherwise.
    pub fn checked_div(&self, d: &MPoly) -> Option<MPoly> {
        assert_eq!(self.nvars, d.nvars);
        if d.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        let (de, dc) = d.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        while !rem.is_zero() {
            let (re, rc) = {
                let (e, c) = rem.terms.iter().next_back().unwrap();
                (e.clone(), c.clone())
            };
            let mut qe = vec![0u32; self.nvars];
            for v in 0..self.nvars {
                if re[v] < de[v] {
                    return None;
                }
                qe[v] = re[v] - de[v];
            }
            let qc = rc / dc.clone();
            let mono = MPoly::from_terms(self.nvars, [(qe, qc)]);
            quot = &quot + &mono;
            rem = &rem - &(&mono * d);
        }
        Some(quot)
    }

    /// Renders with a caller-supplied variable namer; terms are listed with
    /// the highest variable (the top jet, under the blocked layout) first.
    pub fn display_with(&self, namer: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut ordered: Vec<(&Vec<u32>, &Rat)> = self.terms.iter().collect();
        ordered.sort_by(|(ea, _), (eb, _)| {
            let ra = ea.iter().rev().collect::<Vec<_>>();
            let rb = eb.iter().rev().collect::<Vec<_>>();
            rb.cmp(&ra)
        });
        let mut out = String::new();
        for (i, (e, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.iter().all(|&k| k == 0) {
                factors.push(rat_string(&mag));
            }
            for (v, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(namer(v));
                } else if k > 1 {
                    factors.push(format!("{}^{}", namer(v), k));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&|v| format!("x{v}")))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in +");
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in -");
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        let mut p = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            p.terms.insert(e.clone(), -c.clone());
        }
        p
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in *");
        let mut p = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2.clone());
            }
        }
        p
    }
}

/// Pseudo-division of `q` by `p` with respect to variable `v`:
/// `lc_v(p)^ell * q = quot * p + rem` with `deg_v(rem) < deg_v(p)`, where
/// `ell` counts only the reduction steps actually taken.
pub fn pseudo_div(q: &MPoly, p: &MPoly, v: usize) -> Result<(u32, MPoly, MPoly)> {
    if p.nvars() != q.nvars() {
        return Err(Error::ArityMismatch(format!(
            "pseudo_div: {} vs {} variables",
            q.nvars(),
            p.nvars()
        )));
    }
    let dp = p.degree_in(v);
    if p.is_zero() || dp == 0 {
        return Err(Error::DegenerateDivisor);
    }
    let lc = p.leading_coeff(v);
    let lc_is_one = lc.as_constant().map(|c| c.is_one()).unwrap_or(false);
    let mut rem = q.clone();
    let mut quot = MPoly::zero(q.nvars());
    let mut ell = 0u32;
    while !rem.is_zero() && rem.occurs(v) && rem.degree_in(v) >= dp {
        let dr = rem.degree_in(v);
        let rc = rem.leading_coeff(v);
        let shift = MPoly::monomial(q.nvars(), &[(v, dr - dp)], rat_int(1));
        if lc_is_one {
            rem = &rem - &(&(&rc * &shift) * p);
            quot = &quot + &(&rc * &shift);
        } else {
            rem = &(&lc * &rem) - &(&(&rc * &shift) * p);
            quot = &(&lc * &quot) + &(&rc * &shift);
            ell += 1;
        }
        debug_assert!(rem.is_zero() || !rem.occurs(v) || rem.degree_in(v) < dr);
    }
    Ok((ell, quot, rem))
}

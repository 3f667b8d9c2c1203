//! Truncated power series ℚ[[t]] / t^N and Newton–Hensel root lifting.

use std::fmt;

use num_traits::Zero;

use super::{rat_int, rat_string, Rat};
use crate::{Error, Result};

/// A power series known exactly modulo `t^prec`; always stores exactly
/// `prec` coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rat>,
    prec: usize,
}

impl TruncSeries {
    pub fn new(mut coeffs: Vec<Rat>, prec: usize) -> Self {
        assert!(prec >= 1);
        coeffs.resize(prec, rat_int(0));
        TruncSeries { coeffs, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::new(Vec::new(), prec)
    }

    pub fn constant(c: Rat, prec: usize) -> Self {
        Self::new(vec![c], prec)
    }

    /// The series `t`.
    pub fn t(prec: usize) -> Self {
        Self::new(vec![rat_int(0), rat_int(1)], prec)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Explicit precision change; extending pads with zeros (the extra
    /// coefficients are only meaningful for iteration bookkeeping).
    pub fn with_prec(&self, prec: usize) -> Self {
        Self::new(self.coeffs[..self.prec.min(prec)].to_vec(), prec)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        Self::new(
            (0..prec)
                .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
                .collect(),
            prec,
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        Self::new(
            (0..prec)
                .map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
                .collect(),
            prec,
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect(), self.prec)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        let mut out = vec![rat_int(0); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(prec - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a.clone() * b.clone();
                }
            }
        }
        Self::new(out, prec)
    }

    /// Multiplicative inverse; requires the constant term to be a unit.
    pub fn invert(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::SeparantVanishesAtReduction);
        }
        let mut inv = Self::constant(rat_int(1) / self.coeffs[0].clone(), 1);
        let mut k = 1;
        while k < self.prec {
            k = (2 * k).min(self.prec);
            let me = self.with_prec(k);
            let two = Self::constant(rat_int(2), k);
            inv = inv.with_prec(k);
            inv = inv.mul(&two.sub(&me.mul(&inv)));
        }
        Ok(inv.with_prec(self.prec))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = match k {
                0 => String::new(),
                1 => "*t".into(),
                _ => format!("*t^{k}"),
            };
            let c = rat_string(c);
            parts.push(if k == 0 { c } else { format!("{c}{t}") });
        }
        if parts.is_empty() {
            write!(f, "0 + O(t^{})", self.prec)
        } else {
            write!(f, "{} + O(t^{})", parts.join(" + ").replace("+ -", "- "), self.prec)
        }
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Univariate polynomial with series coefficients: `Σ coeffs[k] · x^k`.
#[derive(Clone, Debug)]
pub struct SeriesPoly {
    pub coeffs: Vec<TruncSeries>,
}

impl SeriesPoly {
    pub fn new(coeffs: Vec<TruncSeries>) -> Self {
        assert!(!coeffs.is_empty());
        SeriesPoly { coeffs }
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        SeriesPoly { coeffs: self.coeffs.iter().map(|c| c.with_prec(prec)).collect() }
    }

    pub fn eval(&self, x: &TruncSeries) -> TruncSeries {
        let prec = x.prec();
        let mut acc = TruncSeries::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&c.with_prec(prec));
        }
        acc
    }

    pub fn deriv(&self) -> SeriesPoly {
        if self.coeffs.len() == 1 {
            return SeriesPoly::new(vec![TruncSeries::zero(self.coeffs[0].prec())]);
        }
        SeriesPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| {
                    let k = TruncSeries::constant(rat_int(k as i64), c.prec());
                    c.mul(&k)
                })
                .collect(),
        )
    }
}

/// Newton–Hensel lifting: starting from a rational `a0` with
/// `Q(a0) ≡ 0 mod t` and `Q'(a0)` a unit mod `t`, produces the unique series
/// root `c ≡ a0 mod t` of `Q` modulo `t^n`. Precision doubles per Newton
/// step; the step count is returned alongside the root.
pub fn hensel_lift(q: &SeriesPoly, a0: &Rat, n: usize) -> Result<(TruncSeries, usize)> {
    if n == 0 {
        return Err(Error::PrecisionTooSmall);
    }
    let x0 = TruncSeries::constant(a0.clone(), 1);
    let qx = q.eval(&x0);
    if !qx.coeff(0).is_zero() {
        return Err(Error::Invalid("initial value is not a root of the reduction".into()));
    }
    let dq = q.deriv();
    if dq.eval(&x0).coeff(0).is_zero() {
        return Err(Error::SeparantVanishesAtReduction);
    }
    let mut c = x0;
    let mut k = 1usize;
    let mut steps = 0usize;
    while k < n {
        k = (2 * k).min(n);
        let ck = c.with_prec(k);
        let num = q.with_prec(k).eval(&ck);
        let den = dq.with_prec(k).eval(&ck).invert()?;
        c = ck.sub(&num.mul(&den));
        steps += 1;
    }
    Ok((c.with_prec(n), steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn sqrt_problem(prec: usize) -> SeriesPoly {
        // x^2 - (1+t)
        let one_plus_t = TruncSeries::new(vec![rat_int(1), rat_int(1)], prec);
        SeriesPoly::new(vec![
            one_plus_t.neg(),
            TruncSeries::zero(prec),
            TruncSeries::constant(rat_int(1), prec),
        ])
    }

    // Newton oracle: the square of the lift must be 1 + t mod t^4; the
    // binomial-series coefficients are frozen below after verifying the
    // residual vanishes.
    #[test]
    fn hensel_sqrt_one_plus_t() {
        let q = sqrt_problem(4);
        let (c, _steps) = hensel_lift(&q, &rat_int(1), 4).unwrap();
        assert!(q.eval(&c).is_zero(), "residual must vanish mod t^4");
        assert_eq!(
            c.coeffs().to_vec(),
            vec![rat_int(1), rat(1, 2), rat(-1, 8), rat(1, 16)]
        );
    }

    #[test]
    fn hensel_linear_and_constant() {
        // x - t from a0 = 0
        let q = SeriesPoly::new(vec![TruncSeries::t(3).neg(), TruncSeries::constant(rat_int(1), 3)]);
        let (c, _) = hensel_lift(&q, &rat_int(0), 3).unwrap();
        assert_eq!(c, TruncSeries::t(3));

        // x^2 - 1 from a0 = 1
        let q = SeriesPoly::new(vec![
            TruncSeries::constant(rat_int(-1), 5),
            TruncSeries::zero(5),
            TruncSeries::constant(rat_int(1), 5),
        ]);
        let (c, _) = hensel_lift(&q, &rat_int(1), 5).unwrap();
        assert_eq!(c, TruncSeries::constant(rat_int(1), 5));
    }

    #[test]
    fn hensel_rejects_singular_start() {
        // x^2 - t at 0: derivative vanishes
        let q = SeriesPoly::new(vec![
            TruncSeries::t(4).neg(),
            TruncSeries::zero(4),
            TruncSeries::constant(rat_int(1), 4),
        ]);
        assert_eq!(
            hensel_lift(&q, &rat_int(0), 4).unwrap_err(),
            Error::SeparantVanishesAtReduction
        );
    }

    // Lifting to 2N agrees with the N-truncation, and precision doubles.
    #[test]
    fn lift_consistency_and_step_count() {
        let (c8, s8) = hensel_lift(&sqrt_problem(8), &rat_int(1), 8).unwrap();
        let (c16, s16) = hensel_lift(&sqrt_problem(16), &rat_int(1), 16).unwrap();
        assert_eq!(c16.with_prec(8), c8);
        assert_eq!(s8, 3);
        assert_eq!(s16, 4);
    }

    #[test]
    fn inversion_round_trip() {
        let u = TruncSeries::new(vec![rat_int(2), rat_int(1), rat(1, 3)], 6);
        let v = u.invert().unwrap();
        let mut prod = u.mul(&v);
        let one = TruncSeries::constant(rat_int(1), 6);
        assert_eq!(prod, one);
        prod = v.mul(&u);
        assert_eq!(prod, one);
    }
}

//! Exact coefficient arithmetic and the polynomial substrate.

mod interval;
mod mpoly;
mod roots;
mod series;

pub use interval::Interval;
pub use mpoly::{pseudo_div, MPoly};
pub use roots::{
    cauchy_bound, find_rational_roots, isolate_real_roots, sign_variations, squarefree_part,
    sturm_chain, AlgNumber,
};
pub use series::{hensel_lift, SeriesPoly, TruncSeries};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number: arbitrary-precision, always in lowest terms with a
/// positive denominator. The coefficient field is ℚ throughout (Ω = ∅), so
/// the derivation vanishes on all scalars.
pub type Rat = BigRational;

/// Convenience constructor from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer rational.
pub fn rat_int(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

/// Renders `p/q` with the `/q` part omitted for integers.
pub fn rat_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p`, or `p/q`.
pub fn rat_parse(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from(n))
    }
}

/// Exact conversion of an `f64` (every finite float is a dyadic rational).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    BigRational::from_float(x)
}

/// Round-to-nearest conversion used only inside Newton iterations; all
/// accept/reject decisions re-evaluate exactly at the dyadic preimage.
pub fn rat_to_f64(x: &Rat) -> f64 {
    let n = x.numer();
    let d = x.denom();
    // Avoid overflow for big operands by scaling both sides down together.
    let nb = n.bits().max(d.bits());
    if nb > 900 {
        let shift = (nb - 900) as u64;
        let n2 = n >> shift;
        let d2 = d >> shift;
        bigint_f64(&n2) / bigint_f64(&d2)
    } else {
        bigint_f64(n) / bigint_f64(d)
    }
}

fn bigint_f64(x: &BigInt) -> f64 {
    let mut out = 0.0f64;
    for digit in x.magnitude().to_u64_digits().iter().rev() {
        out = out * 1.8446744073709552e19 + *digit as f64;
    }
    if x.is_negative() {
        -out
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_string_forms() {
        assert_eq!(rat_string(&rat(3, 1)), "3");
        assert_eq!(rat_string(&rat(-1, 2)), "-1/2");
        assert_eq!(rat_parse("7/2"), Some(rat(7, 2)));
        assert_eq!(rat_parse("-5"), Some(rat_int(-5)));
        assert_eq!(rat_parse("1/0"), None);
    }

    #[test]
    fn f64_round_trip_is_exact_on_dyadics() {
        let x = rat(-13, 64);
        assert_eq!(rat_from_f64(rat_to_f64(&x)).unwrap(), x);
    }
}

//! Rational intervals with per-endpoint open/closed flags.

use std::fmt;

use super::{rat_string, Rat};

/// An interval with rational endpoints. An isolating interval for a root
/// contains exactly one real root of its associated polynomial; the
/// degenerate case `lo == hi` (both endpoints closed) pins a rational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn open(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi);
        Interval { lo, hi, lo_open: true, hi_open: true }
    }

    pub fn closed(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi);
        Interval { lo, hi, lo_open: false, hi_open: false }
    }

    pub fn point(x: Rat) -> Self {
        Interval { lo: x.clone(), hi: x, lo_open: false, hi_open: false }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rat {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> Rat {
        (self.lo.clone() + self.hi.clone()) / super::rat_int(2)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let lo_ok = if self.lo_open { *x > self.lo } else { *x >= self.lo };
        let hi_ok = if self.hi_open { *x < self.hi } else { *x <= self.hi };
        lo_ok && hi_ok
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        !(self.hi < other.lo
            || other.hi < self.lo
            || (self.hi == other.lo && (self.hi_open || other.lo_open))
            || (other.hi == self.lo && (other.hi_open || self.lo_open)))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { "(" } else { "[" },
            rat_string(&self.lo),
            rat_string(&self.hi),
            if self.hi_open { ")" } else { "]" },
        )
    }
}

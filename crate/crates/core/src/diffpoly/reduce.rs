//! Ritt reduction of a differential polynomial modulo a single P and its
//! derivatives, with a fully replayable combination trace.
//!
//! Rank order: first the order in the distinguished (last) variable, then
//! the degree in its top jet. Reduction eliminates higher jets by
//! pseudo-division by δ^k(P) — always linear in its leader with leading
//! coefficient s_P — and then reduces the leader degree by pseudo-division
//! by P itself, whose leading coefficient is the initial I_P.

use super::DiffPoly;
use crate::algebra::pseudo_div;
use crate::{Error, Result};

/// One reduction step, for diagnostics: which derivative of P divided and
/// which power of its leading coefficient was used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub derivative: usize,
    pub lc_power: u32,
}

/// Outcome of [`ritt_reduce`]: the exact identity
/// `s_P^sep_power · I_P^init_power · Q = Σ_k combination[k] · δ^k(P) + remainder`
/// holds and is replayable via [`RittReduction::verify`].
#[derive(Clone, Debug)]
pub struct RittReduction {
    pub sep_power: u32,
    pub init_power: u32,
    pub remainder: DiffPoly,
    /// Pairs (k, C_k) with C_k multiplying δ^k(P).
    pub combination: Vec<(usize, DiffPoly)>,
    pub steps: Vec<TraceStep>,
}

impl RittReduction {
    /// Replays the recorded combination and checks the reduction identity
    /// by exact expansion.
    pub fn verify(&self, q: &DiffPoly, p: &DiffPoly) -> bool {
        let s = match p.separant() {
            Ok(s) => s,
            Err(_) => return false,
        };
        let i = match p.initial() {
            Ok(i) => i,
            Err(_) => return false,
        };
        let mut lhs = q.clone();
        lhs = lhs.mul(&s.pow(self.sep_power));
        lhs = lhs.mul(&i.pow(self.init_power));
        let mut rhs = self.remainder.clone();
        for (k, c) in &self.combination {
            rhs = rhs.add(&c.mul(&p.derive_n(*k)));
        }
        lhs == rhs
    }
}

fn pseudo_div_jet(
    q: &DiffPoly,
    p: &DiffPoly,
    var: usize,
    jet: usize,
) -> Result<(u32, DiffPoly, DiffPoly)> {
    let depth = q.depth().max(p.depth()).max(jet + 1);
    let qq = q.lift(depth);
    let pp = p.lift(depth);
    let col = var * depth + jet;
    let (ell, quot, rem) = pseudo_div(qq.mpoly(), pp.mpoly(), col)?;
    let vars = q.vars();
    Ok((
        ell,
        DiffPoly::from_ordinary(&quot, vars, depth - 1)?,
        DiffPoly::from_ordinary(&rem, vars, depth - 1)?,
    ))
}

/// Reduces `q` modulo the differential ideal data of `p`. The remainder has
/// order < ord_y(p) in the distinguished variable, or equal order and
/// smaller leader degree.
pub fn ritt_reduce(q: &DiffPoly, p: &DiffPoly) -> Result<RittReduction> {
    if q.vars() != p.vars() {
        return Err(Error::ArityMismatch("ritt_reduce: differential rings differ".into()));
    }
    let (y, m) = p.leader()?; // errors when p is constant in the last variable
    let s = p.separant()?;
    let initial = p.initial()?;
    let p_deg = p.leader_degree()?;

    let mut work = q.clone();
    let mut sep_power = 0u32;
    let mut init_power = 0u32;
    let mut combination: Vec<(usize, DiffPoly)> = Vec::new();
    let mut steps = Vec::new();

    let scale_combination = |comb: &mut Vec<(usize, DiffPoly)>, by: &DiffPoly, pow: u32| {
        if pow == 0 {
            return;
        }
        let f = by.pow(pow);
        for (_, c) in comb.iter_mut() {
            *c = c.mul(&f);
        }
    };

    // eliminate jets above the order of p
    loop {
        let h = work.order_in(y);
        if h <= m as i64 || work.is_zero() {
            break;
        }
        let h = h as usize;
        let k = h - m;
        let divisor = p.derive_n(k);
        debug_assert_eq!(divisor.order_in(y), h as i64);
        let (ell, quot, rem) = pseudo_div_jet(&work, &divisor, y, h)?;
        scale_combination(&mut combination, &s, ell);
        sep_power += ell;
        add_combination(&mut combination, k, quot);
        steps.push(TraceStep { derivative: k, lc_power: ell });
        work = rem;
    }

    // reduce the degree in the leader of p
    if !work.is_zero() && work.order_in(y) == m as i64 {
        let wdeg = work.degree_in_jet(y, m);
        if wdeg >= p_deg {
            let (ell, quot, rem) = pseudo_div_jet(&work, p, y, m)?;
            scale_combination(&mut combination, &initial, ell);
            init_power += ell;
            add_combination(&mut combination, 0, quot);
            steps.push(TraceStep { derivative: 0, lc_power: ell });
            work = rem;
        }
    }

    let red = RittReduction {
        sep_power,
        init_power,
        remainder: work,
        combination,
        steps,
    };
    debug_assert!(red.verify(q, p), "reduction trace failed to replay");
    Ok(red)
}

fn add_combination(comb: &mut Vec<(usize, DiffPoly)>, k: usize, c: DiffPoly) {
    if c.is_zero() {
        return;
    }
    for (kk, cc) in comb.iter_mut() {
        if *kk == k {
            *cc = cc.add(&c);
            return;
        }
    }
    comb.push((k, c));
}

/// Membership in I(P) = {Q : s_P^ℓ Q ∈ ⟨P⟩}: true exactly when the Ritt
/// remainder vanishes.
pub fn in_ideal(q: &DiffPoly, p: &DiffPoly) -> Result<bool> {
    Ok(ritt_reduce(q, p)?.remainder.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x0() -> DiffPoly {
        DiffPoly::var(1, 0)
    }
    fn dx0() -> DiffPoly {
        DiffPoly::jet(1, 0, 1)
    }

    // Reduction chain δ²x ≡ δx ≡ x modulo ⟨δx − x⟩.
    #[test]
    fn reduce_worked_examples() {
        let p = dx0().sub(&x0());
        let q = DiffPoly::jet(1, 0, 2).sub(&x0());
        let r = ritt_reduce(&q, &p).unwrap();
        assert!(r.remainder.is_zero());
        assert!(r.verify(&q, &p));

        let q = DiffPoly::jet(1, 0, 2);
        let r = ritt_reduce(&q, &p).unwrap();
        assert_eq!(r.remainder, x0());
        assert!(r.verify(&q, &p));

        let q = x0();
        let r = ritt_reduce(&q, &dx0()).unwrap();
        assert_eq!(r.remainder, x0());
        assert!(r.steps.is_empty());
    }

    #[test]
    fn ideal_membership() {
        let p = dx0().sub(&x0());
        assert!(in_ideal(&DiffPoly::jet(1, 0, 2).sub(&x0()), &p).unwrap());
        assert!(!in_ideal(&x0(), &p).unwrap());
        assert!(in_ideal(&p, &p).unwrap());
    }

    #[test]
    fn rejects_constant_divisor() {
        let p = DiffPoly::int(1, 2);
        assert!(ritt_reduce(&x0(), &p).is_err());
        // free of the last variable
        let p = DiffPoly::jet(2, 0, 1);
        assert!(ritt_reduce(&DiffPoly::var(2, 1), &p).is_err());
    }

    // Nontrivial separant powers: P = (δx)² − x has s = 2δx.
    #[test]
    fn separant_powers_recorded() {
        let p = dx0().pow(2).sub(&x0());
        // δP = 2 δx δ²x − δx, so reducing δ²x multiplies by s once
        let q = DiffPoly::jet(1, 0, 2);
        let r = ritt_reduce(&q, &p).unwrap();
        assert!(r.sep_power >= 1);
        assert!(r.verify(&q, &p));
        // the remainder has order ≤ 1 and degree < 2 in δx
        assert!(r.remainder.order_in(0) <= 1);
        assert!(r.remainder.degree_in_jet(0, 1) < 2);
    }
}

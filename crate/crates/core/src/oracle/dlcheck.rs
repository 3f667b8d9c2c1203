//! Premise checking for the genericity axiom scheme: does P* admit a
//! regular zero (P* = 0 with nonvanishing separant) in the search box?
//!
//! The axiom's conclusion — a differential element arbitrarily close to the
//! regular zero — is not checkable without a model of the extended theory;
//! only the premise and its prolongation-determined surrogate (envelope
//! density) are verified here and in the envelope module.

use num_traits::{Signed, Zero};

use super::{dense_of, RatSampler, SampleConfig, Verdict, Witness};
use crate::algebra::{isolate_real_roots, rat_int, squarefree_part, AlgNumber, MPoly, Rat};
use crate::diffpoly::DiffPoly;
use crate::{Error, Result};

/// Exact interval arithmetic helper: the image of a box under a polynomial.
#[derive(Clone, Debug)]
struct RBox {
    lo: Rat,
    hi: Rat,
}

impl RBox {
    fn point(x: Rat) -> Self {
        RBox { lo: x.clone(), hi: x }
    }

    fn add(&self, o: &RBox) -> RBox {
        RBox { lo: self.lo.clone() + o.lo.clone(), hi: self.hi.clone() + o.hi.clone() }
    }

    fn mul(&self, o: &RBox) -> RBox {
        let cands = [
            self.lo.clone() * o.lo.clone(),
            self.lo.clone() * o.hi.clone(),
            self.hi.clone() * o.lo.clone(),
            self.hi.clone() * o.hi.clone(),
        ];
        RBox {
            lo: cands.iter().min().unwrap().clone(),
            hi: cands.iter().max().unwrap().clone(),
        }
    }

    fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }
}

fn eval_box(p: &MPoly, coords: &[RBox]) -> RBox {
    let mut acc = RBox::point(rat_int(0));
    for (e, c) in p.terms() {
        let mut t = RBox::point(c.clone());
        for (v, &k) in e.iter().enumerate() {
            for _ in 0..k {
                t = t.mul(&coords[v]);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// The checkable premise of the axiom scheme for a unary differential
/// polynomial of order ≥ 1:
///
/// * `pass` with a witness when a regular zero of (P*, s_P* ≠ 0) is found in
///   the box (exact slice solving on a structured grid);
/// * `fail` with an exact certificate when no regular zero can exist in the
///   box — either s_P*^k = q·P* exactly (every zero is singular), or
///   interval arithmetic excludes zeros of P* on the whole box;
/// * `inconclusive` otherwise.
pub fn dl_premise_check(p: &DiffPoly, cfg: &SampleConfig) -> Result<Verdict> {
    if p.vars() != 1 {
        return Err(Error::ArityMismatch("premise check wants one differential variable".into()));
    }
    let m = p.order_in(0);
    if m < 1 {
        return Err(Error::Invalid("premise check needs order >= 1".into()));
    }
    let m = m as usize;
    let star = p.to_ordinary(m)?;
    let sep = p.separant()?.to_ordinary(m)?;
    let nv = m + 1;

    // search: freeze the lower jets on anchors plus sampled values, isolate
    // the slice roots in the leader, and test the separant sign exactly
    let mut lows: Vec<Vec<Rat>> = Vec::new();
    let anchors = [
        rat_int(0),
        rat_int(1),
        rat_int(-1),
        rat_int(2),
        rat_int(-2),
        Rat::new(1.into(), 2.into()),
        Rat::new((-1).into(), 2.into()),
    ];
    for a in &anchors {
        for b in &anchors {
            let mut v = vec![a.clone(); nv - 1];
            if nv >= 2 {
                v[0] = a.clone();
            }
            if nv >= 3 {
                v[1] = b.clone();
            }
            if !lows.contains(&v) {
                lows.push(v.clone());
            }
            if nv == 2 {
                break;
            }
        }
    }
    let mut sampler = RatSampler::with_seed(cfg, 0xD7);
    for _ in 0..cfg.count.min(256) {
        lows.push((0..nv - 1).map(|_| sampler.rat()).collect());
    }

    let mut checked = 0usize;
    for low in &lows {
        checked += 1;
        let mut slice = star.clone();
        for (j, v) in low.iter().enumerate() {
            slice = slice.subst(j, &MPoly::constant(nv, v.clone()));
        }
        let uni = slice.remap(1, &vec![0; nv]);
        if uni.is_zero() {
            // the whole leader line consists of zeros of P*; a regular one
            // requires s* ≠ 0 somewhere on it
            let mut s_slice = sep.clone();
            for (j, v) in low.iter().enumerate() {
                s_slice = s_slice.subst(j, &MPoly::constant(nv, v.clone()));
            }
            let s_uni = s_slice.remap(1, &vec![0; nv]);
            if let Some(c) = s_uni.as_constant() {
                if !c.is_zero() {
                    let mut w = low.clone();
                    w.push(rat_int(0));
                    return Ok(Verdict {
                        status: super::VerdictStatus::Pass,
                        checked,
                        witnesses: vec![Witness { point: w, note: "regular zero (slice identically zero)".into() }],
                        reason: None,
                    });
                }
            } else {
                // s* is a nonzero polynomial on the line: pick a non-root
                let mut t = rat_int(0);
                while s_uni.eval(std::slice::from_ref(&t)).is_zero() {
                    t += rat_int(1);
                }
                let mut w = low.clone();
                w.push(t);
                return Ok(Verdict {
                    status: super::VerdictStatus::Pass,
                    checked,
                    witnesses: vec![Witness { point: w, note: "regular zero (slice identically zero)".into() }],
                    reason: None,
                });
            }
            continue;
        }
        if uni.as_constant().is_some() {
            continue;
        }
        let roots = isolate_real_roots(&uni)?;
        for iv in roots {
            // exact separant sign at the algebraic root
            let mut s_slice = sep.clone();
            for (j, v) in low.iter().enumerate() {
                s_slice = s_slice.subst(j, &MPoly::constant(nv, v.clone()));
            }
            let s_uni = s_slice.remap(1, &vec![0; nv]);
            let alg = AlgNumber::new(squarefree_part(&dense_of(&uni)), iv.clone());
            let s_sign = alg.sign_of(&dense_of(&s_uni));
            if s_sign != 0 {
                let approx = alg.approx(&Rat::new(1.into(), 4096.into()));
                let mut w = low.clone();
                w.push(approx);
                return Ok(Verdict {
                    status: super::VerdictStatus::Pass,
                    checked,
                    witnesses: vec![Witness {
                        point: w,
                        note: format!("regular zero, separant sign {s_sign}"),
                    }],
                    reason: None,
                });
            }
        }
    }

    // exact fail certificate 1: s*^k = q · P* implies every zero of P* kills
    // the separant
    let deg_bound = star.total_degree().max(1);
    let mut s_pow = MPoly::one(nv);
    for k in 1..=deg_bound {
        s_pow = &s_pow * &sep;
        if let Some(q) = s_pow.checked_div(&star) {
            let w = vec![rat_int(0); nv];
            return Ok(Verdict {
                status: super::VerdictStatus::Fail,
                checked,
                witnesses: vec![Witness {
                    point: w,
                    note: format!(
                        "certificate: s*^{k} = ({}) * P*, so every zero of P* is singular",
                        q
                    ),
                }],
                reason: None,
            });
        }
    }

    // exact fail certificate 2: interval arithmetic excludes zeros of P* on
    // the whole box (branch & bound)
    let full = vec![RBox { lo: cfg.box_lo.clone(), hi: cfg.box_hi.clone() }; nv];
    let mut stack = vec![full];
    let mut nodes = 0usize;
    let max_nodes = 4096usize;
    let mut excluded = true;
    while let Some(bx) = stack.pop() {
        nodes += 1;
        if nodes > max_nodes {
            excluded = false;
            break;
        }
        let img = eval_box(&star, &bx);
        if !img.contains_zero() {
            continue;
        }
        // split the widest coordinate
        let (widest, width) = bx
            .iter()
            .enumerate()
            .map(|(i, b)| (i, b.hi.clone() - b.lo.clone()))
            .max_by(|a, b| a.1.cmp(&b.1))
            .unwrap();
        if width < cfg.epsilon.clone() / rat_int(16) {
            excluded = false;
            break;
        }
        let mid = (bx[widest].lo.clone() + bx[widest].hi.clone()) / rat_int(2);
        let mut left = bx.clone();
        left[widest].hi = mid.clone();
        let mut right = bx;
        right[widest].lo = mid;
        stack.push(left);
        stack.push(right);
    }
    if excluded {
        return Ok(Verdict {
            status: super::VerdictStatus::Fail,
            checked,
            witnesses: vec![Witness {
                point: vec![cfg.box_lo.clone(), cfg.box_hi.clone()],
                note: format!(
                    "certificate: interval arithmetic excludes zeros of P* on the box after {nodes} subdivisions"
                ),
            }],
            reason: None,
        });
    }

    Ok(Verdict::inconclusive(
        checked,
        "no regular zero found and no exclusion certificate within budget",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::VerdictStatus;

    fn dy() -> DiffPoly {
        DiffPoly::jet(1, 0, 1)
    }
    fn y0() -> DiffPoly {
        DiffPoly::var(1, 0)
    }

    // (δy)² + y² − 1: the unit circle has regular zeros.
    #[test]
    fn circle_passes() {
        let p = dy().pow(2).add(&y0().pow(2)).sub(&DiffPoly::int(1, 1));
        let v = dl_premise_check(&p, &SampleConfig::default()).unwrap();
        assert_eq!(v.status, VerdictStatus::Pass);
        assert!(!v.witnesses.is_empty());
    }

    // (δy)² + y² + 1: interval exclusion on any box.
    #[test]
    fn positive_definite_fails() {
        let p = dy().pow(2).add(&y0().pow(2)).add(&DiffPoly::int(1, 1));
        let v = dl_premise_check(&p, &SampleConfig::default()).unwrap();
        assert_eq!(v.status, VerdictStatus::Fail);
        assert!(v.witnesses[0].note.contains("interval"));
    }

    // (δy)²: every zero forces s = 2δy = 0 — the divisibility certificate.
    #[test]
    fn square_fails_by_divisibility() {
        let p = dy().pow(2);
        let v = dl_premise_check(&p, &SampleConfig::default()).unwrap();
        assert_eq!(v.status, VerdictStatus::Fail);
        assert!(v.witnesses[0].note.contains("singular"));
    }
}

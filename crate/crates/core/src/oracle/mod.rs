//! Numeric and sampling semantics over ℝ.
//!
//! Every pass/fail decision on a polynomial sign is made in exact rational
//! arithmetic; floating point only appears inside Newton iteration, and every
//! Newton candidate is re-verified exactly at its dyadic preimage. Sampled
//! verdicts are three-valued: a `fail` always carries a counterexample, an
//! `inconclusive` always carries a reason, and identical configurations
//! (seed included) produce identical verdicts.

mod dim;
mod dlcheck;
mod newton;
mod sample;
mod setcmp;

pub use dim::dimension_probe;
pub use dlcheck::dl_premise_check;
pub use newton::newton_regular_zero;
pub use sample::{sample_points, sample_solutions, structured_slice_points, RatSampler};
pub use setcmp::{closure_density_sampled, sets_equal_sampled};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{rat, rat_int, rat_string, AlgNumber, MPoly, Rat};
use crate::algebra::{isolate_real_roots, Interval};
use crate::logic::PlainFormula;
use crate::logic::QfFormula;
use crate::{Error, Result};

/// A tuple of real sample coordinates for jet variables: `blocks` blocks of
/// `depth` rationals, coordinate (i, j) standing for δ^j(x_i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoint {
    pub blocks: usize,
    pub depth: usize,
    pub coords: Vec<Rat>,
}

impl JetPoint {
    pub fn new(blocks: usize, depth: usize, coords: Vec<Rat>) -> Self {
        assert_eq!(coords.len(), blocks * depth, "jet point shape mismatch");
        JetPoint { blocks, depth, coords }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.coords[i * self.depth + j]
    }

    /// π_m^d: truncates every block to its first `m + 1` coordinates.
    pub fn project(&self, m: usize) -> Result<JetPoint> {
        if m + 1 > self.depth {
            return Err(Error::DepthMismatch { needed: m, available: self.depth - 1 });
        }
        let mut coords = Vec::with_capacity(self.blocks * (m + 1));
        for i in 0..self.blocks {
            for j in 0..=m {
                coords.push(self.get(i, j).clone());
            }
        }
        Ok(JetPoint::new(self.blocks, m + 1, coords))
    }

    pub fn flat(&self) -> &[Rat] {
        &self.coords
    }
}

impl fmt::Display for JetPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(rat_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Sampling configuration; identical configurations give bit-identical
/// verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub box_lo: Rat,
    pub box_hi: Rat,
    pub count: usize,
    pub seed: u64,
    pub epsilon: Rat,
    pub newton_tol: Rat,
    pub max_iter: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            box_lo: rat_int(-3),
            box_hi: rat_int(3),
            count: 512,
            seed: 0xD1FF,
            epsilon: rat(1, 16),
            newton_tol: rat(1, 1_000_000_000),
            max_iter: 64,
        }
    }
}

impl SampleConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "box": [rat_string(&self.box_lo), rat_string(&self.box_hi)],
            "count": self.count,
            "seed": self.seed,
            "epsilon": rat_string(&self.epsilon),
            "newton_tol": rat_string(&self.newton_tol),
            "max_iter": self.max_iter,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::Pass => "pass",
            VerdictStatus::Fail => "fail",
            VerdictStatus::Inconclusive => "inconclusive",
        }
    }
}

/// A sampled-check outcome with per-point diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub checked: usize,
    pub witnesses: Vec<Witness>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: Vec<Rat>,
    pub note: String,
}

impl Verdict {
    pub fn pass(checked: usize) -> Self {
        Verdict { status: VerdictStatus::Pass, checked, witnesses: Vec::new(), reason: None }
    }

    pub fn fail(checked: usize, witnesses: Vec<Witness>) -> Self {
        assert!(!witnesses.is_empty(), "fail verdicts carry a counterexample");
        Verdict { status: VerdictStatus::Fail, checked, witnesses, reason: None }
    }

    pub fn inconclusive(checked: usize, reason: impl Into<String>) -> Self {
        Verdict {
            status: VerdictStatus::Inconclusive,
            checked,
            witnesses: Vec::new(),
            reason: Some(reason.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == VerdictStatus::Pass
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "checked": self.checked,
            "witnesses": self
                .witnesses
                .iter()
                .map(|w| json!({
                    "point": w.point.iter().map(rat_string).collect::<Vec<_>>(),
                    "note": w.note,
                }))
                .collect::<Vec<_>>(),
            "reason": self.reason,
        })
    }
}

/// Exact sign of a rational.
pub fn sign_of(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Restricts a plain formula by substituting exact values for some
/// coordinates; returns the formula over the remaining coordinates (in
/// their original relative order) and the list of remaining column indices.
pub fn restrict_formula(
    phi: &PlainFormula,
    assigns: &BTreeMap<usize, Rat>,
) -> (QfFormula<MPoly>, Vec<usize>) {
    let n = phi.nvars();
    let remaining: Vec<usize> = (0..n).filter(|c| !assigns.contains_key(c)).collect();
    let map: Vec<usize> = {
        let mut m = vec![0usize; n];
        for (new_idx, &old) in remaining.iter().enumerate() {
            m[old] = new_idx;
        }
        m
    };
    let k = remaining.len();
    let body = phi.body.map_polys(&|p: &MPoly| {
        let mut q = p.clone();
        for (&c, v) in assigns {
            q = q.subst(c, &MPoly::constant(n, v.clone()));
        }
        q.remap(k.max(1), &map)
    });
    (body, remaining)
}

/// Exact satisfiability of a univariate formula over ℝ: evaluates at every
/// isolated root of the atom polynomials (algebraic sign computation), at
/// gap midpoints and outside the root bound.
pub fn univariate_sat(body: &QfFormula<MPoly>) -> Result<Option<Vec<Rat>>> {
    let atoms = body.atoms();
    if atoms.is_empty() {
        return Ok(match body {
            QfFormula::Bool(true) => Some(vec![rat_int(0)]),
            _ => None,
        });
    }
    let mut polys: Vec<MPoly> = Vec::new();
    for (_, p) in &atoms {
        if p.as_constant().is_none() && !polys.contains(*p) {
            polys.push((*p).clone());
        }
    }
    if polys.is_empty() {
        // all atoms constant: the body is already a Bool after construction
        return Ok(match body {
            QfFormula::Bool(true) => Some(vec![rat_int(0)]),
            _ => None,
        });
    }
    let mut product = MPoly::one(1);
    for p in &polys {
        product = &product * p;
    }
    let roots = isolate_real_roots(&product)?;
    let candidates = candidate_points(&product, &roots);
    for cand in candidates {
        let ok = match &cand {
            Candidate::Rational(x) => body.eval_signs(&|p: &MPoly| sign_of(&p.eval(std::slice::from_ref(x)))),
            Candidate::Algebraic(a) => body.eval_signs(&|p: &MPoly| {
                a.sign_of(&dense_of(p))
            }),
        };
        if ok {
            return Ok(Some(vec![match cand {
                Candidate::Rational(x) => x,
                Candidate::Algebraic(a) => a.approx(&rat(1, 1024)),
            }]));
        }
    }
    Ok(None)
}

enum Candidate {
    Rational(Rat),
    Algebraic(AlgNumber),
}

pub(crate) fn dense_of(p: &MPoly) -> Vec<Rat> {
    let d = p.degree_in(0);
    let mut out = vec![rat_int(0); d as usize + 1];
    for (e, c) in p.terms() {
        out[e[0] as usize] += c.clone();
    }
    while out.last().map(|c| c.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

/// Root points, gap midpoints, and outer points for the zero set of a
/// univariate polynomial with the given isolating intervals.
fn candidate_points(product: &MPoly, roots: &[Interval]) -> Vec<Candidate> {
    let dense = dense_of(product);
    let bound = crate::algebra::cauchy_bound(&dense);
    let mut out = Vec::new();
    // separate the isolating intervals so gaps are genuine
    let mut alg: Vec<AlgNumber> = roots
        .iter()
        .map(|iv| AlgNumber::new(crate::algebra::squarefree_part(&dense), iv.clone()))
        .collect();
    let sixteenth = rat(1, 16);
    loop {
        let mut disjoint = true;
        for w in alg.windows(2) {
            if w[0].interval().hi > w[1].interval().lo {
                disjoint = false;
            }
        }
        if disjoint {
            break;
        }
        for a in alg.iter_mut() {
            a.refine();
        }
    }
    for a in alg.iter_mut() {
        a.refine_below(&sixteenth);
    }
    out.push(Candidate::Rational(-bound.clone() - rat_int(1)));
    for (i, a) in alg.iter().enumerate() {
        if i > 0 {
            let prev_hi = alg[i - 1].interval().hi.clone();
            let lo = a.interval().lo.clone();
            out.push(Candidate::Rational((prev_hi + lo) / rat_int(2)));
        }
        out.push(Candidate::Algebraic(a.clone()));
    }
    out.push(Candidate::Rational(bound + rat_int(1)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Rel;

    #[test]
    fn jet_point_projection() {
        let p = JetPoint::new(1, 3, vec![rat_int(1), rat_int(2), rat_int(3)]);
        let q = p.project(1).unwrap();
        assert_eq!(q.coords, vec![rat_int(1), rat_int(2)]);
        let two = JetPoint::new(
            2,
            3,
            vec![rat_int(1), rat_int(2), rat_int(3), rat_int(4), rat_int(5), rat_int(6)],
        );
        let q = two.project(0).unwrap();
        assert_eq!(q.coords, vec![rat_int(1), rat_int(4)]);
    }

    #[test]
    fn univariate_sat_mixed() {
        let x = MPoly::var(1, 0);
        // x^2 = 2 is satisfiable at an irrational point
        let body = QfFormula::atom(Rel::Eq, &(&x * &x) - &MPoly::int(1, 2));
        assert!(univariate_sat(&body).unwrap().is_some());
        // x^2 = -1 is not
        let body = QfFormula::atom(Rel::Eq, &(&x * &x) + &MPoly::int(1, 1));
        assert!(univariate_sat(&body).unwrap().is_none());
        // x^2 = 2 and x > 2 is not
        let body = QfFormula::and(vec![
            QfFormula::atom(Rel::Eq, &(&x * &x) - &MPoly::int(1, 2)),
            QfFormula::atom(Rel::Gt, &x - &MPoly::int(1, 2)),
        ]);
        assert!(univariate_sat(&body).unwrap().is_none());
        // x^2 = 2 and x > 0 picks the positive root
        let body = QfFormula::and(vec![
            QfFormula::atom(Rel::Eq, &(&x * &x) - &MPoly::int(1, 2)),
            QfFormula::atom(Rel::Gt, x.clone()),
        ]);
        assert!(univariate_sat(&body).unwrap().is_some());
    }
}

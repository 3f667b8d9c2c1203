//! Sampled set equality and closure comparison.

use num_traits::Zero;

use super::{
    sample_points, sample_solutions, structured_slice_points, SampleConfig, Verdict, Witness,
};
use crate::algebra::Rat;
use crate::logic::PlainFormula;
use crate::{Error, Result};

/// Exact pointwise comparison of two formulas over the same blocked space at
/// deterministic uniform points plus structured points: near-root slices of
/// every atom polynomial and exact solutions of either formula's equational
/// parts. A disagreement at any point is a definitive `fail`; `pass` means
/// no disagreement was found (sound for fail, sampled for pass).
pub fn sets_equal_sampled(
    phi1: &PlainFormula,
    phi2: &PlainFormula,
    cfg: &SampleConfig,
) -> Result<Verdict> {
    if phi1.nvars() != phi2.nvars() {
        return Err(Error::ArityMismatch(format!(
            "{} vs {} coordinates",
            phi1.nvars(),
            phi2.nvars()
        )));
    }
    let n = phi1.nvars();
    let mut points = sample_points(n, cfg);
    points.extend(structured_slice_points(phi1, cfg, cfg.count));
    points.extend(structured_slice_points(phi2, cfg, cfg.count));
    points.extend(sample_solutions(phi1, cfg, 48, true));
    points.extend(sample_solutions(phi2, cfg, 48, true));

    let mut witnesses = Vec::new();
    let mut checked = 0usize;
    for p in &points {
        checked += 1;
        let a = phi1.eval(p)?;
        let b = phi2.eval(p)?;
        if a != b {
            witnesses.push(Witness {
                point: p.clone(),
                note: format!("lhs = {a}, rhs = {b}"),
            });
            if witnesses.len() >= 5 {
                break;
            }
        }
    }
    Ok(if witnesses.is_empty() {
        Verdict::pass(checked)
    } else {
        Verdict::fail(checked, witnesses)
    })
}

/// Symmetric ε-net comparison of two finite point clouds (in the max norm,
/// exact): every A-point must be within epsilon of some B-point and vice
/// versa. An empty side while the other is inhabited is `inconclusive`
/// (generator starvation), empty-vs-empty passes.
pub fn closure_density_sampled(
    gen_a: &[Vec<Rat>],
    gen_b: &[Vec<Rat>],
    cfg: &SampleConfig,
) -> Verdict {
    if gen_a.is_empty() && gen_b.is_empty() {
        return Verdict::pass(0);
    }
    if gen_a.is_empty() || gen_b.is_empty() {
        return Verdict::inconclusive(
            gen_a.len() + gen_b.len(),
            "a point generator starved; cannot compare closures",
        );
    }
    let mut witnesses = Vec::new();
    let checked = gen_a.len() + gen_b.len();
    for (cloud, other, tag) in [(gen_a, gen_b, "A"), (gen_b, gen_a, "B")] {
        for p in cloud {
            let ok = other.iter().any(|q| max_dist(p, q) <= cfg.epsilon);
            if !ok {
                witnesses.push(Witness {
                    point: p.clone(),
                    note: format!("{tag}-point farther than epsilon from the other cloud"),
                });
                if witnesses.len() >= 5 {
                    break;
                }
            }
        }
    }
    if witnesses.is_empty() {
        Verdict::pass(checked)
    } else {
        Verdict::fail(checked, witnesses)
    }
}

fn max_dist(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x.clone() - y.clone();
            if d < Rat::zero() {
                -d
            } else {
                d
            }
        })
        .max()
        .unwrap_or_else(Rat::zero)
}

//! Topological dimension probe: the largest ℓ such that some coordinate
//! projection of the solution set contains a full ε-grid of an ℓ-box.

use std::collections::BTreeMap;

use super::{restrict_formula, sample_solutions, univariate_sat, SampleConfig};
use crate::algebra::{rat_int, Rat};
use crate::logic::PlainFormula;
use crate::{Error, Result};

/// Returns `(dim estimate, witnessing projection)`. Membership of grid
/// points in the projected set is decided exactly: full projections by
/// direct evaluation; codimension-1 projections by exact univariate
/// satisfiability of the fiber; deeper fibers by the solution sampler
/// (a miss then simply fails the grid, keeping the estimate conservative).
pub fn dimension_probe(phi: &PlainFormula, cfg: &SampleConfig) -> Result<(usize, Vec<usize>)> {
    let n = phi.nvars();
    if n > 4 {
        return Err(Error::OutOfFragment("dimension probe is desk-scale (n <= 4)".into()));
    }
    let anchors = {
        let mut pts = sample_solutions(phi, cfg, 24, false);
        pts.truncate(12);
        pts
    };
    if anchors.is_empty() {
        return Ok((0, Vec::new()));
    }
    let grid_half = 2i64;
    let spacing = cfg.epsilon.clone() * rat_int(2);

    for ell in (1..=n).rev() {
        for subset in subsets(n, ell) {
            for anchor in &anchors {
                if grid_covered(phi, anchor, &subset, grid_half, &spacing, cfg)? {
                    return Ok((ell, subset));
                }
            }
        }
    }
    Ok((0, Vec::new()))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn grid_covered(
    phi: &PlainFormula,
    anchor: &[Rat],
    subset: &[usize],
    half: i64,
    spacing: &Rat,
    cfg: &SampleConfig,
) -> Result<bool> {
    let ell = subset.len();
    let mut idx = vec![-half; ell];
    loop {
        // grid point in the projected coordinates
        let mut assigns: BTreeMap<usize, Rat> = BTreeMap::new();
        for (pos, &coord) in subset.iter().enumerate() {
            assigns.insert(coord, anchor[coord].clone() + spacing.clone() * rat_int(idx[pos]));
        }
        if !in_projection(phi, &assigns, cfg)? {
            return Ok(false);
        }
        // advance the multi-index
        let mut pos = 0;
        loop {
            if pos == ell {
                return Ok(true);
            }
            idx[pos] += 1;
            if idx[pos] <= half {
                break;
            }
            idx[pos] = -half;
            pos += 1;
        }
    }
}

/// Is the grid point in the projection of the solution set?
fn in_projection(
    phi: &PlainFormula,
    assigns: &BTreeMap<usize, Rat>,
    cfg: &SampleConfig,
) -> Result<bool> {
    let n = phi.nvars();
    if assigns.len() == n {
        let coords: Vec<Rat> = (0..n).map(|c| assigns[&c].clone()).collect();
        return phi.eval(&coords);
    }
    let (body, remaining) = restrict_formula(phi, assigns);
    match remaining.len() {
        0 => unreachable!("assignment size checked above"),
        1 => Ok(univariate_sat(&body)?.is_some()),
        _ => {
            // sampled fiber check
            let sub = PlainFormula::new(remaining.len(), 1, body);
            let cfg2 = SampleConfig { count: cfg.count / 4 + 32, ..cfg.clone() };
            Ok(!sample_solutions(&sub, &cfg2, 1, false).is_empty())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MPoly;
    use crate::logic::{QfFormula, Rel};

    fn cfg() -> SampleConfig {
        SampleConfig::default()
    }

    // unit disk -> 2, unit circle -> 1, a single point -> 0.
    #[test]
    fn disk_circle_point() {
        let y0 = MPoly::var(2, 0);
        let y1 = MPoly::var(2, 1);
        let rho2 = &(&y0 * &y0) + &(&y1 * &y1);
        let disk = PlainFormula::new(
            2,
            1,
            QfFormula::atom(Rel::Gt, &MPoly::one(2) - &rho2),
        );
        assert_eq!(dimension_probe(&disk, &cfg()).unwrap().0, 2);

        let circle = PlainFormula::new(
            2,
            1,
            QfFormula::atom(Rel::Eq, &rho2 - &MPoly::one(2)),
        );
        let (d, proj) = dimension_probe(&circle, &cfg()).unwrap();
        assert_eq!(d, 1);
        assert_eq!(proj.len(), 1);

        let origin = PlainFormula::new(
            2,
            1,
            QfFormula::and(vec![
                QfFormula::atom(Rel::Eq, y0.clone()),
                QfFormula::atom(Rel::Eq, y1.clone()),
            ]),
        );
        assert_eq!(dimension_probe(&origin, &cfg()).unwrap().0, 0);
    }

    #[test]
    fn empty_set_reports_zero() {
        let y0 = MPoly::var(1, 0);
        let phi = PlainFormula::new(
            1,
            1,
            QfFormula::and(vec![
                QfFormula::atom(Rel::Gt, y0.clone()),
                QfFormula::atom(Rel::Gt, -&y0),
            ]),
        );
        assert_eq!(dimension_probe(&phi, &cfg()).unwrap().0, 0);
    }
}

//! Newton search for regular zeros with exact re-certification.

use num_traits::Zero;

use super::{sign_of, SampleConfig};
use crate::algebra::{rat_from_f64, rat_to_f64, MPoly, Rat};

/// Searches for a zero of the square system `system` (solving for the
/// coordinates in `solve_vars`, all others held fixed at the start values)
/// subject to the nonvanishing guard.
///
/// Floating point drives the iteration; the candidate is accepted only if,
/// at its exact dyadic preimage, every |P_i| < newton_tol and
/// |guard| > newton_tol hold in exact rational arithmetic. Divergence
/// returns `None` — a failure of the search, not of the underlying claim.
pub fn newton_regular_zero(
    system: &[MPoly],
    guard: &MPoly,
    start: &[Rat],
    solve_vars: &[usize],
    cfg: &SampleConfig,
) -> Option<Vec<Rat>> {
    if system.len() != solve_vars.len() || system.is_empty() {
        return None;
    }
    let k = solve_vars.len();
    let n = start.len();
    let jac: Vec<Vec<MPoly>> = system
        .iter()
        .map(|p| solve_vars.iter().map(|&v| p.deriv(v)).collect())
        .collect();

    let mut x: Vec<f64> = start.iter().map(rat_to_f64).collect();
    let tol = rat_to_f64(&cfg.newton_tol);
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let fx: Vec<f64> = system.iter().map(|p| eval_f64(p, &x)).collect();
        if fx.iter().all(|v| v.abs() < tol * 0.5) {
            converged = true;
            break;
        }
        let mut a = vec![vec![0.0f64; k]; k];
        for (i, row) in jac.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                a[i][j] = eval_f64(d, &x);
            }
        }
        let step = match solve_linear(&mut a, &fx) {
            Some(s) => s,
            None => return None,
        };
        for (j, &v) in solve_vars.iter().enumerate() {
            x[v] -= step[j];
        }
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
    }
    if !converged {
        let fx: Vec<f64> = system.iter().map(|p| eval_f64(p, &x)).collect();
        if !fx.iter().all(|v| v.abs() < tol * 0.5) {
            return None;
        }
    }

    // exact certification at the dyadic point
    let mut exact: Vec<Rat> = Vec::with_capacity(n);
    for (i, xi) in x.iter().enumerate() {
        if solve_vars.contains(&i) {
            exact.push(rat_from_f64(*xi)?);
        } else {
            exact.push(start[i].clone());
        }
    }
    for p in system {
        let v = p.eval(&exact);
        if abs_rat(&v) >= cfg.newton_tol {
            return None;
        }
    }
    let g = guard.eval(&exact);
    if abs_rat(&g) <= cfg.newton_tol || sign_of(&g) == 0 {
        return None;
    }
    Some(exact)
}

fn abs_rat(x: &Rat) -> Rat {
    if x < &Rat::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}

pub(crate) fn eval_f64(p: &MPoly, x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (e, c) in p.terms() {
        let mut t = rat_to_f64(c);
        for (v, &k) in e.iter().enumerate() {
            for _ in 0..k {
                t *= x[v];
            }
        }
        acc += t;
    }
    acc
}

fn solve_linear(a: &mut [Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let k = b.len();
    let mut aug: Vec<Vec<f64>> = a.iter().zip(b).map(|(row, &rhs)| {
        let mut r = row.clone();
        r.push(rhs);
        r
    }).collect();
    for col in 0..k {
        let (pivot, mag) = (col..k)
            .map(|r| (r, aug[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(std::cmp::Ordering::Equal))?;
        if mag < 1e-14 {
            return None;
        }
        aug.swap(col, pivot);
        for r in 0..k {
            if r != col {
                let f = aug[r][col] / aug[col][col];
                for c in col..=k {
                    aug[r][c] -= f * aug[col][c];
                }
            }
        }
    }
    Some((0..k).map(|r| aug[r][k] / aug[r][r]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    // y0² + y1² − 1 from (1/10, 9/10), solving for y1: lands on the circle
    // with the guard 2·y1 clear of zero.
    #[test]
    fn circle_point() {
        let y0 = MPoly::var(2, 0);
        let y1 = MPoly::var(2, 1);
        let circle = &(&(&y0 * &y0) + &(&y1 * &y1)) - &MPoly::one(2);
        let guard = y1.scale(&rat(2, 1));
        let cfg = SampleConfig::default();
        let pt = newton_regular_zero(
            &[circle.clone()],
            &guard,
            &[rat(1, 10), rat(9, 10)],
            &[1],
            &cfg,
        )
        .expect("newton should converge");
        assert_eq!(pt[0], rat(1, 10));
        let residual = circle.eval(&pt);
        assert!(abs_rat(&residual) < cfg.newton_tol);
        assert!(guard.eval(&pt) > cfg.newton_tol);
    }

    // y1 − y0² from (1, 9/10) solving y1: one exact Newton step to (1, 1).
    #[test]
    fn parabola_one_step() {
        let y0 = MPoly::var(2, 0);
        let y1 = MPoly::var(2, 1);
        let p = &y1 - &(&y0 * &y0);
        let cfg = SampleConfig::default();
        let pt = newton_regular_zero(&[p.clone()], &MPoly::one(2), &[rat(1, 1), rat(9, 10)], &[1], &cfg)
            .expect("linear system solves in one step");
        assert_eq!(pt[1], rat(1, 1));
    }

    #[test]
    fn no_real_zero_diverges() {
        let y0 = MPoly::var(1, 0);
        let p = &(&y0 * &y0) + &MPoly::one(1);
        let cfg = SampleConfig::default();
        assert!(newton_regular_zero(&[p], &MPoly::one(1), &[rat(3, 1)], &[0], &cfg).is_none());
    }
}

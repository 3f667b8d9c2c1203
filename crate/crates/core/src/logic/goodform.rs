//! Decomposition of a locally Zariski closed set Z_𝒜^R into good-form pieces
//! Z_ℬ^S with either ℬ free of the last variable, or ℬ^y = {P} and ∂P/∂y
//! dividing S.
//!
//! The algorithm is a pseudo-division cascade on degrees in y, branching on
//! the vanishing of leading coefficients and separants. Branch guards are
//! folded into the inequation side S as factors, so divisibility of S by the
//! final separant is witnessed by construction. The nonvanishing branch is
//! always emitted first, keeping outputs reproducible.

use crate::algebra::{pseudo_div, MPoly};
use crate::{Error, Result};

const NODE_BUDGET: usize = 100_000;

/// Z_𝒜^R(K) = ⋃ Z_ℬ^S(K) with the good-form side conditions; `y` is the
/// column index of the distinguished variable.
pub fn goodform_decompose(
    a: &[MPoly],
    r: &MPoly,
    y: usize,
) -> Result<Vec<(Vec<MPoly>, MPoly)>> {
    if r.is_zero() {
        return Err(Error::ZeroInequation);
    }
    let mut out = Vec::new();
    let mut budget = NODE_BUDGET;
    work(a.to_vec(), r.clone(), y, &mut out, &mut budget)?;
    dedup(&mut out);
    Ok(out)
}

fn prepare(a: Vec<MPoly>) -> Option<Vec<MPoly>> {
    let mut cleaned: Vec<MPoly> = Vec::new();
    for p in a {
        if p.is_zero() {
            continue;
        }
        if p.as_constant().is_some() {
            // nonzero constant equation: the piece is empty
            return None;
        }
        let n = p.normalized();
        if !cleaned.contains(&n) {
            cleaned.push(n);
        }
    }
    cleaned.sort();
    Some(cleaned)
}

/// Conjoins the guard `g ≠ 0` into the side polynomial. Constant guards are
/// vacuous and constant sides collapse to 1, so the product stays tidy while
/// divisibility by the final separant is preserved literally.
fn fold_guard(r: &MPoly, g: &MPoly) -> MPoly {
    if g.as_constant().is_some() {
        return normalize_side(r);
    }
    if r.as_constant().is_some() {
        return g.clone();
    }
    r * g
}

fn normalize_side(r: &MPoly) -> MPoly {
    if r.as_constant().is_some() {
        MPoly::one(r.nvars())
    } else {
        r.clone()
    }
}

fn work(
    a: Vec<MPoly>,
    r: MPoly,
    y: usize,
    out: &mut Vec<(Vec<MPoly>, MPoly)>,
    budget: &mut usize,
) -> Result<()> {
    if *budget == 0 {
        return Err(Error::Invalid("good-form cascade exceeded its node budget".into()));
    }
    *budget -= 1;
    if r.is_zero() {
        return Ok(());
    }
    let a = match prepare(a) {
        Some(a) => a,
        None => return Ok(()),
    };
    let ay: Vec<usize> = (0..a.len()).filter(|&i| a[i].degree_in(y) > 0).collect();

    if ay.is_empty() {
        let side = normalize_side(&r);
        out.push((a, side));
        return Ok(());
    }

    if ay.len() == 1 {
        let p = &a[ay[0]];
        let s = p.deriv(y);
        // nonvanishing branch: s divides the side polynomial by construction
        out.push((a.clone(), fold_guard(&r, &s)));
        // vanishing branch
        if s.as_constant().is_none() {
            let mut a2 = a.clone();
            if p.degree_in(y) == 1 {
                // P = s·y + c0 degenerates to c0 when s vanishes
                let c0 = p.coeff_of(y, 0);
                a2.remove(ay[0]);
                a2.push(s);
                a2.push(c0);
            } else {
                a2.push(s);
            }
            work(a2, r, y, out, budget)?;
        }
        return Ok(());
    }

    // two or more polynomials involve y: reduce the highest degree by the
    // lowest degree
    let hi = *ay
        .iter()
        .max_by_key(|&&i| (a[i].degree_in(y), a[i].clone()))
        .unwrap();
    let lo = *ay
        .iter()
        .filter(|&&i| i != hi)
        .min_by_key(|&&i| (a[i].degree_in(y), a[i].clone()))
        .unwrap();
    let (p, q) = (a[hi].clone(), a[lo].clone());
    let lc = q.leading_coeff(y);
    let lc_constant = lc.as_constant().is_some();

    // branch: lc(q) ≠ 0
    {
        let (_, _, rem) = pseudo_div(&p, &q, y)?;
        let mut a1 = a.clone();
        a1[hi] = rem;
        let r1 = if lc_constant { r.clone() } else { fold_guard(&r, &lc) };
        work(a1, r1, y, out, budget)?;
    }
    // branch: lc(q) = 0 — drop q's leading term and record the equation
    if !lc_constant {
        let dq = q.degree_in(y);
        let mono = MPoly::monomial(q.nvars(), &[(y, dq)], crate::algebra::rat_int(1));
        let q_trunc = &q - &(&lc * &mono);
        let mut a2 = a.clone();
        a2[lo] = q_trunc;
        a2.push(lc);
        work(a2, r, y, out, budget)?;
    }
    Ok(())
}

fn dedup(out: &mut Vec<(Vec<MPoly>, MPoly)>) {
    let mut seen: Vec<(Vec<MPoly>, MPoly)> = Vec::new();
    for piece in out.drain(..) {
        if !seen.contains(&piece) {
            seen.push(piece);
        }
    }
    *out = seen;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;

    fn xv() -> MPoly {
        MPoly::var(2, 0)
    }
    fn yv() -> MPoly {
        MPoly::var(2, 1)
    }

    // A = {y² − x}: branch on 2y ≠ 0 vs y = 0.
    #[test]
    fn parabola_decomposition() {
        let a = vec![&(&yv() * &yv()) - &xv()];
        let pieces = goodform_decompose(&a, &MPoly::one(2), 1).unwrap();
        assert_eq!(pieces.len(), 2);
        // nonvanishing branch first: ({y²−x}, 2y)
        assert_eq!(pieces[0].0, vec![(&(&yv() * &yv()) - &xv()).normalized()]);
        assert_eq!(pieces[0].1, yv().scale(&rat_int(2)));
        // vanishing branch: ({x, y}, 1)
        assert_eq!(pieces[1].0, vec![yv(), xv()]);
        assert!(pieces[1].1.as_constant().is_some());
    }

    #[test]
    fn linear_is_one_piece() {
        let a = vec![&yv() - &xv()];
        let pieces = goodform_decompose(&a, &MPoly::one(2), 1).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].0, vec![(&yv() - &xv()).normalized()]);
        assert!(pieces[0].1.as_constant().is_some());
    }

    #[test]
    fn empty_system_passes_through() {
        let pieces = goodform_decompose(&[], &MPoly::one(2), 1).unwrap();
        assert_eq!(pieces, vec![(vec![], MPoly::one(2))]);
    }

    // Every piece satisfies the good-form side condition, with an exact
    // quotient witnessing the divisibility.
    #[test]
    fn side_conditions_hold() {
        let sys = vec![
            vec![&(&yv() * &yv()) - &xv(), &xv() * &yv()],
            vec![&(&yv() * &(&yv() * &yv())) - &xv(), &yv() - &(&xv() * &xv())],
        ];
        for a in sys {
            let pieces = goodform_decompose(&a, &MPoly::one(2), 1).unwrap();
            assert!(!pieces.is_empty());
            for (b, s) in pieces {
                let by: Vec<&MPoly> = b.iter().filter(|p| p.degree_in(1) > 0).collect();
                assert!(by.len() <= 1, "good form has at most one y-polynomial");
                if let Some(p) = by.first() {
                    let sep = p.deriv(1);
                    assert!(
                        s.checked_div(&sep).is_some(),
                        "separant {sep} must divide side {s}"
                    );
                }
            }
        }
    }
}

//! Decomposition of a locally Kolchin closed set 𝒵_𝒜^R into pieces 𝒵_ℬ^S
//! with either ℬ free of the distinguished variable y, or a unique P ∈ ℬ of
//! non-negative order in y whose separant divides S.
//!
//! The cascade works by induction on orders and degrees: a polynomial of
//! higher order in y is reduced by the matching derivative δ^k(Q) of a
//! lower-order one (linear in its top jet with leading coefficient s_Q);
//! equal orders reduce degrees by ordinary pseudo-division in the top jet.
//! Every guard branches into a nonvanishing case (folded into S) and a
//! vanishing case (adjoined as an equation), nonvanishing first.
//!
//! Order bounds are enforced on every output piece: with the input spanning
//! orders (o_x, o_y), each piece satisfies ord_y(S_ℬ) ≤ o_y and
//! ord_{x_i}(ℬ, S_ℬ) ≤ o_x(i) + o_y.

use crate::algebra::pseudo_div;
use crate::diffpoly::DiffPoly;
use crate::{Error, Result};

const NODE_BUDGET: usize = 100_000;

/// 𝒵_𝒜^R(K) = ⋃ 𝒵_ℬ^S(K); `y` must be the last differential variable.
pub fn kolchin_decompose(
    a: &[DiffPoly],
    r: &DiffPoly,
    y: usize,
) -> Result<Vec<(Vec<DiffPoly>, DiffPoly)>> {
    if r.is_zero() {
        return Err(Error::ZeroInequation);
    }
    let vars = r.vars();
    if y + 1 != vars {
        return Err(Error::ArityMismatch(
            "kolchin_decompose expects the distinguished variable to be the last one".into(),
        ));
    }
    let ord_y_in = bound_ord(a, r, y);
    let mut out = Vec::new();
    let mut budget = NODE_BUDGET;
    work(a.to_vec(), r.clone(), y, &mut out, &mut budget)?;
    dedup(&mut out);

    // lem:minord3-style order bounds, checked on every emitted piece
    for (b, s) in &out {
        if s.order_in(y) > ord_y_in {
            return Err(Error::Invalid(format!(
                "order bound violated: ord_y(S) = {} > {}",
                s.order_in(y),
                ord_y_in
            )));
        }
        for i in 0..y {
            let bound = bound_ord(a, r, i) + ord_y_in.max(0);
            let got = b
                .iter()
                .map(|p| p.order_in(i))
                .chain(std::iter::once(s.order_in(i)))
                .max()
                .unwrap_or(-1);
            if got > bound {
                return Err(Error::Invalid(format!(
                    "order bound violated in x{i}: {got} > {bound}"
                )));
            }
        }
    }
    Ok(out)
}

fn bound_ord(a: &[DiffPoly], r: &DiffPoly, i: usize) -> i64 {
    a.iter()
        .map(|p| p.order_in(i))
        .chain(std::iter::once(r.order_in(i)))
        .max()
        .unwrap_or(-1)
}

fn prepare(a: Vec<DiffPoly>) -> Option<Vec<DiffPoly>> {
    let mut cleaned: Vec<DiffPoly> = Vec::new();
    for p in a {
        if p.is_zero() {
            continue;
        }
        if p.as_constant().is_some() {
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

fn fold_guard(r: &DiffPoly, g: &DiffPoly) -> DiffPoly {
    if g.as_constant().is_some() {
        return normalize_side(r);
    }
    if r.as_constant().is_some() {
        return g.clone();
    }
    r.mul(g)
}

fn normalize_side(r: &DiffPoly) -> DiffPoly {
    if r.as_constant().is_some() {
        DiffPoly::int(r.vars(), 1)
    } else {
        r.clone()
    }
}

/// Separant with respect to the distinguished variable `y` (the top y-jet).
fn sep_in(p: &DiffPoly, y: usize) -> Option<DiffPoly> {
    let o = p.order_in(y);
    if o < 0 {
        None
    } else {
        Some(p.jet_deriv(y, o as usize))
    }
}

fn pseudo_div_jet(
    q: &DiffPoly,
    d: &DiffPoly,
    var: usize,
    jet: usize,
) -> Result<(u32, DiffPoly, DiffPoly)> {
    let depth = q.depth().max(d.depth()).max(jet + 1);
    let qq = q.lift(depth);
    let dd = d.lift(depth);
    let col = var * depth + jet;
    let (ell, quot, rem) = pseudo_div(qq.mpoly(), dd.mpoly(), col)?;
    let vars = q.vars();
    Ok((
        ell,
        DiffPoly::from_ordinary(&quot, vars, depth - 1)?,
        DiffPoly::from_ordinary(&rem, vars, depth - 1)?,
    ))
}

fn work(
    a: Vec<DiffPoly>,
    r: DiffPoly,
    y: usize,
    out: &mut Vec<(Vec<DiffPoly>, DiffPoly)>,
    budget: &mut usize,
) -> Result<()> {
    if *budget == 0 {
        return Err(Error::Invalid("kolchin cascade exceeded its node budget".into()));
    }
    *budget -= 1;
    if r.is_zero() {
        return Ok(());
    }
    let a = match prepare(a) {
        Some(a) => a,
        None => return Ok(()),
    };
    let ay: Vec<usize> = (0..a.len()).filter(|&i| a[i].order_in(y) >= 0).collect();

    if ay.is_empty() {
        out.push((a, normalize_side(&r)));
        return Ok(());
    }

    if ay.len() == 1 {
        let p = &a[ay[0]];
        let s = sep_in(p, y).unwrap();
        // nonvanishing branch
        out.push((a.clone(), fold_guard(&r, &s)));
        // vanishing branch
        if s.as_constant().is_none() {
            let o = p.order_in(y) as usize;
            let deg = p.degree_in_jet(y, o);
            let mut a2 = a.clone();
            if deg == 1 {
                // P = s·δ^o(y) + c0 degenerates to c0
                let lead = DiffPoly::jet(p.vars(), y, o);
                let c0 = p.sub(&s.mul(&lead));
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

    // several polynomials involve y: reduce the top-ranked one
    let rank = |p: &DiffPoly| -> (i64, u32) {
        let o = p.order_in(y);
        (o, p.degree_in_jet(y, o.max(0) as usize))
    };
    let hi = *ay.iter().max_by_key(|&&i| (rank(&a[i]), a[i].clone())).unwrap();
    let lo = *ay
        .iter()
        .filter(|&&i| i != hi)
        .min_by_key(|&&i| (rank(&a[i]), a[i].clone()))
        .unwrap();
    let p = a[hi].clone();
    let q = a[lo].clone();
    let (op, oq) = (p.order_in(y) as usize, q.order_in(y) as usize);

    if op > oq {
        // reduce with the derivative δ^{op-oq}(q), linear in δ^{op}(y) with
        // leading coefficient s_q
        let s_q = sep_in(&q, y).unwrap();
        let divisor = q.derive_n(op - oq);
        // branch: s_q ≠ 0
        {
            let (_, _, rem) = pseudo_div_jet(&p, &divisor, y, op)?;
            let mut a1 = a.clone();
            a1[hi] = rem;
            work(a1, fold_guard(&r, &s_q), y, out, budget)?;
        }
        // branch: s_q = 0
        if s_q.as_constant().is_none() {
            let deg = q.degree_in_jet(y, oq);
            let mut a2 = a.clone();
            if deg == 1 {
                let lead = DiffPoly::jet(q.vars(), y, oq);
                let c0 = q.sub(&s_q.mul(&lead));
                a2.remove(lo);
                a2.push(s_q);
                a2.push(c0);
            } else {
                a2.push(s_q);
            }
            work(a2, r, y, out, budget)?;
        }
    } else {
        // equal order: ordinary degree reduction in the top jet
        let lc = q.leader_coeff_in(y, oq);
        let lc_constant = lc.as_constant().is_some();
        // branch: lc ≠ 0
        {
            let (_, _, rem) = pseudo_div_jet(&p, &q, y, op)?;
            let mut a1 = a.clone();
            a1[hi] = rem;
            let r1 = if lc_constant { r.clone() } else { fold_guard(&r, &lc) };
            work(a1, r1, y, out, budget)?;
        }
        // branch: lc = 0
        if !lc_constant {
            let deg = q.degree_in_jet(y, oq);
            let lead_pow = DiffPoly::jet(q.vars(), y, oq).pow(deg);
            let q_trunc = q.sub(&lc.mul(&lead_pow));
            let mut a2 = a.clone();
            a2[lo] = q_trunc;
            a2.push(lc);
            work(a2, r, y, out, budget)?;
        }
    }
    Ok(())
}

trait LeaderCoeffExt {
    fn leader_coeff_in(&self, y: usize, o: usize) -> DiffPoly;
}

impl LeaderCoeffExt for DiffPoly {
    fn leader_coeff_in(&self, y: usize, o: usize) -> DiffPoly {
        let deg = self.degree_in_jet(y, o);
        let depth = self.depth().max(o + 1);
        let lifted = self.lift(depth);
        let col = y * depth + o;
        DiffPoly::from_ordinary(&lifted.mpoly().coeff_of(col, deg), self.vars(), depth - 1)
            .expect("arity preserved")
    }
}

fn dedup(out: &mut Vec<(Vec<DiffPoly>, DiffPoly)>) {
    let mut seen: Vec<(Vec<DiffPoly>, DiffPoly)> = Vec::new();
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

    fn xv() -> DiffPoly {
        DiffPoly::var(2, 0)
    }
    fn yv() -> DiffPoly {
        DiffPoly::var(2, 1)
    }
    fn dy() -> DiffPoly {
        DiffPoly::jet(2, 1, 1)
    }

    // A = {(δy)² − x}: differential analogue of the parabola example.
    #[test]
    fn dy_squared_equals_x() {
        let a = vec![dy().pow(2).sub(&xv())];
        let one = DiffPoly::int(2, 1);
        let pieces = kolchin_decompose(&a, &one, 1).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].0, vec![dy().pow(2).sub(&xv())]);
        assert_eq!(pieces[0].1, dy().scale(&rat_int(2)));
        // vanishing branch reduces to {x, δy}
        assert_eq!(pieces[1].0, vec![xv(), dy()]);
        assert!(pieces[1].1.as_constant().is_some());
    }

    #[test]
    fn linear_single_piece() {
        let a = vec![dy().sub(&yv())];
        let one = DiffPoly::int(2, 1);
        let pieces = kolchin_decompose(&a, &one, 1).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].0, vec![dy().sub(&yv())]);
        assert!(pieces[0].1.as_constant().is_some());
    }

    // Differential reduction; δy reduces to zero against δ(y), leaving {y}.
    #[test]
    fn single_variable_branching() {
        let y0 = DiffPoly::var(1, 0);
        let d1 = DiffPoly::jet(1, 0, 1);
        let a = vec![d1.pow(2).sub(&y0)];
        let one = DiffPoly::int(1, 1);
        let pieces = kolchin_decompose(&a, &one, 0).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].0, vec![d1.pow(2).sub(&y0)]);
        assert_eq!(pieces[0].1, d1.scale(&rat_int(2)));
        assert_eq!(pieces[1].0, vec![y0.clone()]);
    }

    // Mixed order and degree: A = {y², δy·y − 1} exercises the reduction
    // chain; every piece must satisfy the uniqueness and order bounds.
    #[test]
    fn mixed_chain_respects_bounds() {
        let y0 = DiffPoly::var(1, 0);
        let d1 = DiffPoly::jet(1, 0, 1);
        let a = vec![y0.pow(2), d1.mul(&y0).sub(&DiffPoly::int(1, 1))];
        let one = DiffPoly::int(1, 1);
        let pieces = kolchin_decompose(&a, &one, 0).unwrap();
        for (b, s) in &pieces {
            let involved: Vec<_> = b.iter().filter(|p| p.order_in(0) >= 0).collect();
            assert!(involved.len() <= 1, "unique y-polynomial per piece");
            if let Some(p) = involved.first() {
                let sep = sep_in(p, 0).unwrap();
                if sep.as_constant().is_none() {
                    assert!(s.checked_div(&sep).is_some(), "{sep} must divide {s}");
                }
            }
        }
    }
}

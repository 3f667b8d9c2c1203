//! Nice normal forms: every plain formula becomes a disjunction of
//! Z_𝒜^S ∧ θ pieces in good form; every δ-formula becomes a disjunction of
//! 𝒵_𝒜^S ∧ θ(δ̄^m·) pieces with the analogous differential side conditions.

use super::{
    goodform_decompose, kolchin_decompose, AtomPoly, DeltaFormula, PlainFormula, QfFormula, Rel,
};
use crate::algebra::MPoly;
use crate::diffpoly::DiffPoly;
use crate::{Error, Result};

/// One disjunct of a nice form: equations 𝒜, a single nonvanishing side
/// polynomial S, and an open part of strict inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDisjunct<P> {
    pub equations: Vec<P>,
    pub side: P,
    pub open: QfFormula<P>,
}

impl<P: AtomPoly> NiceDisjunct<P> {
    /// The defining formula Z_𝒜^S ∧ θ of the disjunct.
    pub fn to_formula(&self) -> QfFormula<P> {
        let mut cs: Vec<QfFormula<P>> = self
            .equations
            .iter()
            .map(|p| QfFormula::atom(Rel::Eq, p.clone()))
            .collect();
        if self.side.constant_value().is_none() {
            cs.push(QfFormula::atom(Rel::Neq, self.side.clone()));
        }
        cs.push(self.open.clone());
        QfFormula::and(cs)
    }
}

fn open_part<P: AtomPoly>(gts: &[P]) -> QfFormula<P> {
    QfFormula::and(
        gts.iter()
            .map(|p| QfFormula::atom(Rel::Gt, p.clone()))
            .collect(),
    )
}

/// Corollary-style normal form for a plain formula with respect to its last
/// coordinate: a list of good-form disjuncts whose union is semantically
/// equal to the input (checked by the sampling oracle, not here).
pub fn normalize_l(phi: &PlainFormula) -> Result<Vec<NiceDisjunct<MPoly>>> {
    let n = phi.nvars();
    if n == 0 {
        return Err(Error::ArityMismatch("formula has no variables".into()));
    }
    let y = n - 1;
    let mut out: Vec<NiceDisjunct<MPoly>> = Vec::new();
    for conj in phi.body.to_dnf() {
        // the single inequation is the product of all ≠-atoms
        let mut r = MPoly::one(n);
        for q in &conj.neqs {
            if q.is_zero() {
                r = MPoly::zero(n);
                break;
            }
            r = &r * q;
        }
        if r.is_zero() {
            continue; // this disjunct is empty
        }
        let theta = open_part(&conj.gts);
        if theta == QfFormula::Bool(false) {
            continue;
        }
        for (b, s) in goodform_decompose(&conj.eqs, &r, y)? {
            let piece = NiceDisjunct { equations: b, side: s, open: theta.clone() };
            if !out.contains(&piece) {
                out.push(piece);
            }
        }
    }
    Ok(out)
}

/// Differential nice form at the formula's syntactic order m: each disjunct
/// is 𝒵_𝒜^S(x,y) ∧ θ with 𝒜 either free of the last variable or containing
/// a unique P of non-negative order in it, s_P | S, and the lem:minord3-style
/// order bounds ord_{x_i}(𝒜,S) ≤ 2m, ord_y(𝒜,S) ≤ m. Returns `(m, pieces)`.
pub fn delta_nice_form(phi: &DeltaFormula) -> Result<(usize, Vec<NiceDisjunct<DiffPoly>>)> {
    let m = phi.order();
    let vars = phi.vars;
    let y = vars - 1;
    let mut out: Vec<NiceDisjunct<DiffPoly>> = Vec::new();
    for conj in phi.body.to_dnf() {
        let mut r = DiffPoly::int(vars, 1);
        for q in &conj.neqs {
            if q.is_zero() {
                r = DiffPoly::zero(vars);
                break;
            }
            r = r.mul(q);
        }
        if r.is_zero() {
            continue;
        }
        let theta = open_part(&conj.gts);
        if theta == QfFormula::Bool(false) {
            continue;
        }
        for (b, s) in kolchin_decompose(&conj.eqs, &r, y)? {
            // order bounds from the decomposition lemma instance
            let oy = b
                .iter()
                .map(|p| p.order_in(y))
                .chain(std::iter::once(s.order_in(y)))
                .max()
                .unwrap_or(-1);
            if oy > m as i64 {
                return Err(Error::Invalid(format!(
                    "nice form broke the order bound in y: {oy} > {m}"
                )));
            }
            for i in 0..y {
                let oi = b
                    .iter()
                    .map(|p| p.order_in(i))
                    .chain(std::iter::once(s.order_in(i)))
                    .max()
                    .unwrap_or(-1);
                if oi > 2 * m as i64 {
                    return Err(Error::Invalid(format!(
                        "nice form broke the order bound in x{i}: {oi} > {}",
                        2 * m
                    )));
                }
            }
            let piece = NiceDisjunct { equations: b, side: s, open: theta.clone() };
            if !out.contains(&piece) {
                out.push(piece);
            }
        }
    }
    Ok((m, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;

    fn xv1() -> MPoly {
        MPoly::var(1, 0)
    }

    // (x>0 ∧ x²=1) ∨ x<−2: two disjuncts, the first carrying separant 2x.
    #[test]
    fn univariate_example() {
        let x = xv1();
        let f = PlainFormula::new(
            1,
            1,
            QfFormula::or(vec![
                QfFormula::and(vec![
                    QfFormula::atom(Rel::Gt, x.clone()),
                    QfFormula::atom(Rel::Eq, &(&x * &x) - &MPoly::one(1)),
                ]),
                // x < -2 as -2 - x > 0
                QfFormula::atom(Rel::Gt, &MPoly::int(1, -2) - &x),
            ]),
        );
        let pieces = normalize_l(&f).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].equations, vec![(&(&x * &x) - &MPoly::one(1)).normalized()]);
        assert_eq!(pieces[0].side, x.scale(&rat_int(2)));
        assert_eq!(pieces[0].open, QfFormula::Atom(Rel::Gt, x.clone()));
        assert!(pieces[1].equations.is_empty());
        assert_eq!(pieces[1].open, QfFormula::Atom(Rel::Gt, &MPoly::int(1, -2) - &x));
    }

    // y² = x over (x, y): parabola piece plus the origin branch.
    #[test]
    fn parabola_two_pieces() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let f = PlainFormula::new(2, 1, QfFormula::atom(Rel::Eq, &(&y * &y) - &x));
        let pieces = normalize_l(&f).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].side, y.scale(&rat_int(2)));
        assert_eq!(pieces[1].equations, vec![y.clone(), x.clone()]);
    }

    #[test]
    fn open_formula_single_disjunct() {
        let x = xv1();
        let f = PlainFormula::new(1, 1, QfFormula::atom(Rel::Gt, x.clone()));
        let pieces = normalize_l(&f).unwrap();
        assert_eq!(pieces.len(), 1);
        assert!(pieces[0].equations.is_empty());
    }

    // δ-mode: (δy)² = x decomposes like the ordinary parabola; orders obey
    // the bounds.
    #[test]
    fn delta_nice_form_mirrors_kolchin() {
        let x = DiffPoly::var(2, 0);
        let dy = DiffPoly::jet(2, 1, 1);
        let f = DeltaFormula::new(2, QfFormula::atom(Rel::Eq, dy.pow(2).sub(&x)));
        let (m, pieces) = delta_nice_form(&f).unwrap();
        assert_eq!(m, 1);
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].side, dy.scale(&rat_int(2)));

        // δy = y: single piece, trivially-true open part
        let y = DiffPoly::var(1, 0);
        let d1 = DiffPoly::jet(1, 0, 1);
        let f = DeltaFormula::new(1, QfFormula::atom(Rel::Eq, d1.sub(&y)));
        let (_, pieces) = delta_nice_form(&f).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].open, QfFormula::Bool(true));

        // δy > y: single open disjunct with no equations
        let f = DeltaFormula::new(1, QfFormula::atom(Rel::Gt, d1.sub(&y)));
        let (_, pieces) = delta_nice_form(&f).unwrap();
        assert_eq!(pieces.len(), 1);
        assert!(pieces[0].equations.is_empty());
    }
}

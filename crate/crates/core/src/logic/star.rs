//! The * transform between δ-mode and plain-mode formulas.

use super::{DeltaFormula, PlainFormula};
use crate::diffpoly::DiffPoly;
use crate::Result;

/// Renames every jet δ^j(x_i) to the blocked plain variable (i, j) at the
/// uniform depth of the formula's syntactic order `m`, returning `(φ*, m)`.
/// `φ(x) ≡ φ*(δ̄^m(x))` holds by construction and [`unstar`] recovers the
/// input exactly.
pub fn star_transform(phi: &DeltaFormula) -> (PlainFormula, usize) {
    let m = phi.order();
    let body = phi
        .body
        .map_polys(&|p: &DiffPoly| p.to_ordinary(m).expect("order bound is the formula order"));
    (PlainFormula::new(phi.vars, m + 1, body), m)
}

/// Substitutes jets back for the blocked plain variables.
pub fn unstar(phi: &PlainFormula) -> Result<DeltaFormula> {
    let m = phi.depth - 1;
    let body = phi
        .body
        .try_map_polys(&|p| DiffPoly::from_ordinary(p, phi.blocks, m))?;
    Ok(DeltaFormula::new(phi.blocks, body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{QfFormula, Rel};
    use crate::diffpoly::DiffPoly;

    fn x0() -> DiffPoly {
        DiffPoly::var(1, 0)
    }

    #[test]
    fn star_renames_jets() {
        // δ²x > 0 -> (x0_2 > 0, m = 2)
        let f = DeltaFormula::new(1, QfFormula::atom(Rel::Gt, DiffPoly::jet(1, 0, 2)));
        let (star, m) = star_transform(&f);
        assert_eq!(m, 2);
        assert_eq!(star.to_string(), "x0_2 > 0");

        // x = 0 -> (x0 = 0, m = 0)
        let f = DeltaFormula::new(1, QfFormula::atom(Rel::Eq, x0()));
        let (star, m) = star_transform(&f);
        assert_eq!(m, 0);
        assert_eq!(star.to_string(), "x0 = 0");
    }

    #[test]
    fn star_uses_one_uniform_order() {
        // δx = x² ∧ x > 1 -> x0_1 - x0_0² = 0 ∧ x0_0 - 1 > 0 at m = 1
        let f = DeltaFormula::new(
            1,
            QfFormula::and(vec![
                QfFormula::atom(Rel::Eq, DiffPoly::jet(1, 0, 1).sub(&x0().pow(2))),
                QfFormula::atom(Rel::Gt, x0().sub(&DiffPoly::int(1, 1))),
            ]),
        );
        let (star, m) = star_transform(&f);
        assert_eq!(m, 1);
        assert_eq!(star.to_string(), "x0_1 - x0_0^2 = 0 & x0_0 - 1 > 0");
        let back = unstar(&star).unwrap();
        assert_eq!(back.canon(), f.canon());
    }
}

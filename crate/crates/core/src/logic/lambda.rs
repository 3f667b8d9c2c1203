//! λ_P^d: the plain formula pinning d prolongation steps along P.

use super::{PlainFormula, QfFormula, Rel};
use crate::algebra::MPoly;
use crate::diffpoly::{prolong_seq, DiffPoly};
use crate::Result;

/// The pieces of a λ-formula, kept separately for envelope certificates.
#[derive(Clone, Debug)]
pub struct LambdaParts {
    /// Number of differential indeterminates (blocks).
    pub vars: usize,
    /// Uniform block depth of the starred polynomials.
    pub depth: usize,
    /// Order of P in the distinguished variable.
    pub k: usize,
    /// P* = 0.
    pub p_star: MPoly,
    /// s_P* ≠ 0.
    pub s_star: MPoly,
    /// Cleared prolongation equations s*^{ℓ_i}·y_{k+i} − Q_i* = 0, i = 1..d.
    pub prolong_eqs: Vec<MPoly>,
    /// The separant powers ℓ_i matching `prolong_eqs`.
    pub sep_powers: Vec<u32>,
}

impl LambdaParts {
    pub fn formula(&self) -> PlainFormula {
        let mut cs = vec![QfFormula::atom(Rel::Eq, self.p_star.clone())];
        cs.push(QfFormula::Atom(Rel::Neq, self.s_star.clone()));
        for e in &self.prolong_eqs {
            cs.push(QfFormula::atom(Rel::Eq, e.clone()));
        }
        PlainFormula::new(self.vars, self.depth, QfFormula::and(cs))
    }

    /// Same conjunction with trivially-true constant atoms dropped.
    pub fn formula_simplified(&self) -> PlainFormula {
        let mut cs = vec![QfFormula::atom(Rel::Eq, self.p_star.clone())];
        cs.push(QfFormula::atom(Rel::Neq, self.s_star.clone()));
        for e in &self.prolong_eqs {
            cs.push(QfFormula::atom(Rel::Eq, e.clone()));
        }
        PlainFormula::new(self.vars, self.depth, QfFormula::and(cs))
    }
}

/// Builds λ_P^d over uniform blocks of depth `ord(P) + d + 1`:
/// `P* = 0 ∧ s_P* ≠ 0 ∧ ⋀_{i=1..d} s*^{ℓ_i}·y_{k+i} = Q_i*`, the prolongation
/// equalities emitted polynomially (valid under the s* ≠ 0 guard). The
/// literal `s* ≠ 0` conjunct is kept even when trivial, matching the
/// displayed form.
pub fn lambda_formula(p: &DiffPoly, d: usize) -> Result<PlainFormula> {
    Ok(lambda_parts(p, d)?.formula())
}

pub(crate) fn lambda_parts(p: &DiffPoly, d: usize) -> Result<LambdaParts> {
    lambda_parts_at_depth(p, d, None)
}

/// As [`lambda_parts`] but embedding into a caller-chosen uniform block
/// depth (the envelope wants depth 2m+1 exactly).
pub(crate) fn lambda_parts_at_depth(
    p: &DiffPoly,
    d: usize,
    depth_override: Option<usize>,
) -> Result<LambdaParts> {
    let (n, k) = p.leader()?;
    let vars = p.vars();
    let s = p.separant()?;

    let fs = if d > 0 { prolong_seq(p, d as u32)? } else { Vec::new() };

    // uniform depth: enough for P*, s*, every cleared prolongation equation
    // and the pinned jets y_{k+1..k+d}
    let mut need = (p.order().max(0) as usize).max(k + d);
    for (i, f) in fs.iter().enumerate() {
        need = need.max(f.num.order().max(0) as usize).max(k + i + 1);
    }
    let depth_cols = match depth_override {
        Some(dc) => {
            if need + 1 > dc {
                return Err(crate::Error::OutOfFragment(format!(
                    "prolongation needs jets of depth {need}, blocks allow {}",
                    dc - 1
                )));
            }
            dc
        }
        None => need + 1,
    };
    let m_embed = depth_cols - 1;

    let p_star = p.to_ordinary(m_embed)?;
    let s_star = s.to_ordinary(m_embed)?;
    let mut prolong_eqs = Vec::new();
    let mut sep_powers = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        // s^{ℓ}·δ^{k+i+1}(x_n) − Q_{i+1}, starred
        let jet = DiffPoly::jet(vars, n, k + i + 1);
        let cleared = f.sep.pow(f.sep_power).mul(&jet).sub(&f.num);
        prolong_eqs.push(cleared.to_ordinary(m_embed)?);
        sep_powers.push(f.sep_power);
    }
    Ok(LambdaParts {
        vars,
        depth: depth_cols,
        k,
        p_star,
        s_star,
        prolong_eqs,
        sep_powers,
    })
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

    // P = δx − x², d = 1: y₁ − y₀² = 0 ∧ 1 ≠ 0 ∧ y₂ − 2y₀y₁ = 0.
    #[test]
    fn lambda_of_riccati() {
        let p = dx0().sub(&x0().pow(2));
        let f = lambda_formula(&p, 1).unwrap();
        assert_eq!(
            f.to_string(),
            "x0_1 - x0_0^2 = 0 & 1 != 0 & x0_2 - 2*x0_0*x0_1 = 0"
        );
        // d = 0: no prolongation conjuncts
        let f = lambda_formula(&p, 0).unwrap();
        assert_eq!(f.to_string(), "x0_1 - x0_0^2 = 0 & 1 != 0");
    }

    // Two variables: P = x·δy − 1; the blocks extend together.
    #[test]
    fn lambda_two_vars_extends_blocks() {
        let x = DiffPoly::var(2, 0);
        let p = x.mul(&DiffPoly::jet(2, 1, 1)).sub(&DiffPoly::int(2, 1));
        let parts = lambda_parts(&p, 1).unwrap();
        assert_eq!(parts.k, 1);
        // ord_x(Q_1) = ord_x(P) + 1 = 1, within depth
        assert_eq!(parts.depth, 3);
        let f = parts.formula();
        // the prolongation equation pins x1_2 using the x0-block jets
        assert!(f.to_string().contains("x1_2"));
        assert!(f.to_string().contains("x0_1"));
    }
}

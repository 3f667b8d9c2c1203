//! The differential polynomial ring K{x₀,…,xₙ} over ℚ.
//!
//! A [`DiffPoly`] is an ordinary sparse polynomial in the jet variables
//! δ^j(x_i), stored block-major: the jets of x_i occupy one contiguous block,
//! ordered by derivative depth. This realises the total order
//! (i,j) < (i′,j′) iff i < i′ or (i = i′ and j < j′), so the distinguished
//! (highest) variable of a polynomial is the top jet of the last indeterminate
//! in which it actually occurs.

mod reduce;

pub use reduce::{in_ideal, ritt_reduce, RittReduction, TraceStep};

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{rat_int, MPoly, Rat};
use crate::{Error, Result};

/// Differential polynomial in `vars` differential indeterminates.
///
/// `depth` is the number of jet columns per indeterminate (max order + 1,
/// at least 1); the underlying [`MPoly`] has `vars * depth` variables and
/// values are kept normalized so that equal polynomials compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffPoly {
    vars: usize,
    depth: usize,
    mp: MPoly,
}

impl DiffPoly {
    pub fn zero(vars: usize) -> Self {
        assert!(vars >= 1);
        DiffPoly { vars, depth: 1, mp: MPoly::zero(vars) }
    }

    pub fn constant(vars: usize, c: Rat) -> Self {
        DiffPoly { vars, depth: 1, mp: MPoly::constant(vars, c) }
    }

    pub fn int(vars: usize, n: i64) -> Self {
        Self::constant(vars, rat_int(n))
    }

    /// The jet variable δ^j(x_i).
    pub fn jet(vars: usize, i: usize, j: usize) -> Self {
        assert!(i < vars);
        let depth = j + 1;
        let mp = MPoly::var(vars * depth, i * depth + j);
        DiffPoly { vars, depth, mp }.normalized_depth()
    }

    /// x_i itself.
    pub fn var(vars: usize, i: usize) -> Self {
        Self::jet(vars, i, 0)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn mpoly(&self) -> &MPoly {
        &self.mp
    }

    pub fn is_zero(&self) -> bool {
        self.mp.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.mp.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        self.mp.as_constant()
    }

    fn col(&self, i: usize, j: usize) -> usize {
        i * self.depth + j
    }

    fn jet_of_col(&self, col: usize) -> (usize, usize) {
        (col / self.depth, col % self.depth)
    }

    /// Re-embeds into `new_depth` columns per variable (never loses data;
    /// panics if shrinking below an occurring jet).
    pub fn lift(&self, new_depth: usize) -> Self {
        if new_depth == self.depth {
            return self.clone();
        }
        let map: Vec<usize> = (0..self.vars * self.depth)
            .map(|c| {
                let (i, j) = self.jet_of_col(c);
                assert!(j < new_depth, "lift would drop an occurring jet");
                i * new_depth + j
            })
            .collect();
        DiffPoly {
            vars: self.vars,
            depth: new_depth,
            mp: self.mp.remap(self.vars * new_depth, &map),
        }
    }

    fn normalized_depth(self) -> Self {
        let mut need = 1usize;
        for i in 0..self.vars {
            let o = self.order_in(i);
            if o >= 0 {
                need = need.max(o as usize + 1);
            }
        }
        if need == self.depth {
            self
        } else {
            self.lift_trunc(need)
        }
    }

    fn lift_trunc(&self, new_depth: usize) -> Self {
        let map: Vec<usize> = (0..self.vars * self.depth)
            .map(|c| {
                let (i, j) = self.jet_of_col(c);
                if j < new_depth {
                    i * new_depth + j
                } else {
                    // column cannot occur; map arbitrarily (checked by caller)
                    i * new_depth
                }
            })
            .collect();
        DiffPoly {
            vars: self.vars,
            depth: new_depth,
            mp: self.mp.remap(self.vars * new_depth, &map),
        }
    }

    fn unify(&self, rhs: &Self) -> (Self, Self) {
        assert_eq!(self.vars, rhs.vars, "differential ring mismatch");
        let d = self.depth.max(rhs.depth);
        (self.lift(d), rhs.lift(d))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b) = self.unify(rhs);
        DiffPoly { vars: a.vars, depth: a.depth, mp: &a.mp + &b.mp }.normalized_depth()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let (a, b) = self.unify(rhs);
        DiffPoly { vars: a.vars, depth: a.depth, mp: &a.mp - &b.mp }.normalized_depth()
    }

    pub fn neg(&self) -> Self {
        DiffPoly { vars: self.vars, depth: self.depth, mp: -&self.mp }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = self.unify(rhs);
        DiffPoly { vars: a.vars, depth: a.depth, mp: &a.mp * &b.mp }.normalized_depth()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        DiffPoly { vars: self.vars, depth: self.depth, mp: self.mp.scale(c) }.normalized_depth()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::int(self.vars, 1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Content-normalized copy (integer primitive, positive leading term).
    pub fn normalized(&self) -> Self {
        DiffPoly { vars: self.vars, depth: self.depth, mp: self.mp.normalized() }
    }

    /// Order of `self` with respect to x_i: the maximal j such that δ^j(x_i)
    /// occurs, and −1 if none does.
    pub fn order_in(&self, i: usize) -> i64 {
        assert!(i < self.vars);
        let mut best = -1i64;
        for (e, _) in self.mp.terms() {
            for j in (0..self.depth).rev() {
                if e[self.col(i, j)] > 0 {
                    best = best.max(j as i64);
                    break;
                }
            }
        }
        best
    }

    /// Overall order: max over variables; −1 for constants.
    pub fn order(&self) -> i64 {
        (0..self.vars).map(|i| self.order_in(i)).max().unwrap_or(-1)
    }

    /// Index of the distinguished (last) variable of the ring.
    pub fn last_var(&self) -> usize {
        self.vars - 1
    }

    /// The leader δ^m(x_n) where n is the last ring variable and
    /// m = ord_{x_n}(self); errors when the last variable does not occur.
    pub fn leader(&self) -> Result<(usize, usize)> {
        let n = self.last_var();
        let m = self.order_in(n);
        if m < 0 {
            Err(Error::UndefinedSeparant)
        } else {
            Ok((n, m as usize))
        }
    }

    /// Degree in the leader jet variable.
    pub fn leader_degree(&self) -> Result<u32> {
        let (i, j) = self.leader()?;
        Ok(self.mp.degree_in(self.col(i, j)))
    }

    /// Degree in an arbitrary jet variable.
    pub fn degree_in_jet(&self, i: usize, j: usize) -> u32 {
        if j >= self.depth {
            return 0;
        }
        self.mp.degree_in(self.col(i, j))
    }

    /// Partial derivative with respect to the jet δ^j(x_i).
    pub fn jet_deriv(&self, i: usize, j: usize) -> Self {
        if j >= self.depth {
            return Self::zero(self.vars);
        }
        DiffPoly {
            vars: self.vars,
            depth: self.depth,
            mp: self.mp.deriv(self.col(i, j)),
        }
        .normalized_depth()
    }

    /// The separant s_P = ∂P/∂δ^m(x_n) with respect to the distinguished
    /// variable.
    pub fn separant(&self) -> Result<Self> {
        let (i, j) = self.leader()?;
        Ok(self.jet_deriv(i, j))
    }

    /// Initial: the leading coefficient with respect to the leader.
    pub fn initial(&self) -> Result<Self> {
        let (i, j) = self.leader()?;
        let d = self.mp.degree_in(self.col(i, j));
        Ok(DiffPoly {
            vars: self.vars,
            depth: self.depth,
            mp: self.mp.coeff_of(self.col(i, j), d),
        }
        .normalized_depth())
    }

    /// Coefficient of the k-th power of the leader.
    pub fn leader_coeff(&self, k: u32) -> Result<Self> {
        let (i, j) = self.leader()?;
        Ok(DiffPoly {
            vars: self.vars,
            depth: self.depth,
            mp: self.mp.coeff_of(self.col(i, j), k),
        }
        .normalized_depth())
    }

    /// The Leibniz extension of δ: δ(δ^j(x_i)) = δ^{j+1}(x_i), δ(c) = 0.
    pub fn derive(&self) -> Self {
        let lifted = self.lift(self.depth + 1);
        let ncols = lifted.vars * lifted.depth;
        let mut acc = MPoly::zero(ncols);
        for (e, c) in lifted.mp.terms() {
            for col in 0..ncols {
                if e[col] == 0 {
                    continue;
                }
                let (i, j) = lifted.jet_of_col(col);
                let up = lifted.col(i, j + 1);
                let mut e2 = e.clone();
                e2[col] -= 1;
                e2[up] += 1;
                acc = &acc
                    + &MPoly::from_terms(ncols, [(e2, c.clone() * rat_int(e[col] as i64))]);
            }
        }
        DiffPoly { vars: lifted.vars, depth: lifted.depth, mp: acc }.normalized_depth()
    }

    /// Iterated derivation.
    pub fn derive_n(&self, k: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derive();
        }
        p
    }

    /// P ↦ P^δ: with P = Σ c_i(x)·(δ^m(x_n))^i, returns Σ δ(c_i)·(δ^m(x_n))^i.
    /// Satisfies derive(P) = p_delta(P) + separant(P)·δ^{m+1}(x_n) exactly.
    pub fn p_delta(&self) -> Result<Self> {
        let (n, m) = self.leader()?;
        let deg = self.leader_degree()?;
        let mut acc = Self::zero(self.vars);
        for k in 0..=deg {
            let ck = self.leader_coeff(k)?;
            let dck = ck.derive();
            let lead_pow = Self::jet(self.vars, n, m).pow(k);
            acc = acc.add(&dck.mul(&lead_pow));
        }
        Ok(acc)
    }

    /// Star transform at uniform jet depth `m`: renames δ^j(x_i) to the
    /// ordinary variable in block i, position j. Errors when `m` is smaller
    /// than the order of `self` in some variable.
    pub fn to_ordinary(&self, m: usize) -> Result<MPoly> {
        if self.order() > m as i64 {
            return Err(Error::DepthMismatch {
                needed: self.order() as usize,
                available: m,
            });
        }
        Ok(self.lift(m + 1).mp)
    }

    /// Inverse of [`DiffPoly::to_ordinary`]: reinterprets a blocked ordinary
    /// polynomial (blocks of `depth = m+1` columns per variable).
    pub fn from_ordinary(p: &MPoly, vars: usize, m: usize) -> Result<Self> {
        let depth = m + 1;
        if p.nvars() != vars * depth {
            return Err(Error::ArityMismatch(format!(
                "expected {} blocked variables, got {}",
                vars * depth,
                p.nvars()
            )));
        }
        Ok(DiffPoly { vars, depth, mp: p.clone() }.normalized_depth())
    }

    /// Exact evaluation at a blocked jet tuple: `coords` holds `vars`
    /// blocks of `point_depth` rationals, coordinate (i,j) standing for
    /// δ^j(x_i).
    pub fn eval_jets(&self, coords: &[Rat], point_depth: usize) -> Result<Rat> {
        if coords.len() != self.vars * point_depth {
            return Err(Error::ArityMismatch(format!(
                "jet point has {} coordinates, ring wants {} blocks",
                coords.len(),
                self.vars
            )));
        }
        if point_depth < self.depth {
            let needed = self.order().max(0) as usize;
            if needed + 1 > point_depth {
                return Err(Error::DepthMismatch { needed, available: point_depth.saturating_sub(1) });
            }
        }
        let vals: Vec<Rat> = (0..self.vars * self.depth)
            .map(|c| {
                let (i, j) = self.jet_of_col(c);
                if j < point_depth {
                    coords[i * point_depth + j].clone()
                } else {
                    rat_int(0) // unreachable: normalized depth ≤ point depth
                }
            })
            .collect();
        Ok(self.mp.eval(&vals))
    }

    /// Exact division check on the underlying polynomial.
    pub fn checked_div(&self, d: &Self) -> Option<Self> {
        let (a, b) = self.unify(d);
        a.mp.checked_div(&b.mp).map(|q| {
            DiffPoly { vars: a.vars, depth: a.depth, mp: q }.normalized_depth()
        })
    }

    pub fn display_jet(i: usize, j: usize) -> String {
        match j {
            0 => format!("x{i}"),
            1 => format!("d(x{i})"),
            _ => format!("d^{j}(x{i})"),
        }
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let depth = self.depth;
        write!(
            f,
            "{}",
            self.mp.display_with(&|c| {
                let (i, j) = (c / depth, c % depth);
                DiffPoly::display_jet(i, j)
            })
        )
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A rational differential function Q_i / s_P^{ℓ_i} produced by the
/// prolongation construction; the denominator is kept factored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatDiffFun {
    pub num: DiffPoly,
    pub sep: DiffPoly,
    pub sep_power: u32,
}

impl RatDiffFun {
    /// Exact evaluation; errors if the separant vanishes at the point.
    pub fn eval_jets(&self, coords: &[Rat], point_depth: usize) -> Result<Rat> {
        let s = self.sep.eval_jets(coords, point_depth)?;
        if s.is_zero() {
            return Err(Error::Invalid("separant vanishes at evaluation point".into()));
        }
        let q = self.num.eval_jets(coords, point_depth)?;
        let mut den = rat_int(1);
        for _ in 0..self.sep_power {
            den *= s.clone();
        }
        Ok(q / den)
    }
}

impl fmt::Display for RatDiffFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sep.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})^{}", self.num, self.sep, self.sep_power)
        }
    }
}

/// Rational prolongation along `p`: the sequence f_1, …, f_i with
/// δ^{m+i}(x_n) = f_i on the regular locus {P = 0, s_P ≠ 0}.
///
/// f_1 = −P^δ / s_P; thereafter Q_{i+1} = s_P·D(Q_i) − ℓ_i·Q_i·D(s_P) and
/// ℓ_{i+1} = ℓ_i + 2, where D(G) = s_P·δ(G) − (∂G/∂δ^m x_n)·δ(P) clears the
/// substitution of f_1 for δ^{m+1}(x_n).
pub fn prolong(p: &DiffPoly, i: u32) -> Result<RatDiffFun> {
    if i == 0 {
        return Err(Error::Invalid("prolongation index must be >= 1".into()));
    }
    let seq = prolong_seq(p, i)?;
    Ok(seq.into_iter().last().unwrap())
}

/// All prolongations f_1..f_k at once (they are computed incrementally).
pub fn prolong_seq(p: &DiffPoly, k: u32) -> Result<Vec<RatDiffFun>> {
    let (n, m) = p.leader()?;
    let s = p.separant()?;
    if s.is_zero() {
        return Err(Error::UndefinedSeparant);
    }
    let dp = p.derive();
    let d_op = |g: &DiffPoly| -> DiffPoly {
        let dg = g.derive();
        let pd = g.jet_deriv(n, m);
        s.mul(&dg).sub(&pd.mul(&dp))
    };
    let mut out = Vec::with_capacity(k as usize);
    let mut q = p.p_delta()?.neg();
    let mut ell = 1u32;
    out.push(RatDiffFun { num: q.clone(), sep: s.clone(), sep_power: ell });
    for _ in 1..k {
        let dq = d_op(&q);
        let ds = d_op(&s);
        q = s.mul(&dq).sub(&q.mul(&ds).scale(&rat_int(ell as i64)));
        ell += 2;
        out.push(RatDiffFun { num: q.clone(), sep: s.clone(), sep_power: ell });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn x0() -> DiffPoly {
        DiffPoly::var(1, 0)
    }
    fn dx0() -> DiffPoly {
        DiffPoly::jet(1, 0, 1)
    }

    #[test]
    fn orders_read_off_monomials() {
        // d^2(x0)*x1 - 3
        let p = DiffPoly::jet(2, 0, 2)
            .mul(&DiffPoly::var(2, 1))
            .sub(&DiffPoly::int(2, 3));
        assert_eq!(p.order_in(0), 2);
        assert_eq!(p.order_in(1), 0);
        let c = DiffPoly::int(2, 5);
        assert_eq!(c.order_in(0), -1);
        assert_eq!(c.order_in(1), -1);
        let q = dx0().pow(3).sub(&x0());
        assert_eq!(q.order_in(0), 1);
    }

    #[test]
    fn separant_examples() {
        // (dx)^3 - x -> 3 (dx)^2
        let p = dx0().pow(3).sub(&x0());
        assert_eq!(p.separant().unwrap(), dx0().pow(2).scale(&rat(3, 1)));
        // d^2 x + x*dx -> 1
        let p = DiffPoly::jet(1, 0, 2).add(&x0().mul(&dx0()));
        assert_eq!(p.separant().unwrap(), DiffPoly::int(1, 1));
        // x0 * d(x1)^2 over (x0, x1) -> 2 x0 d(x1)
        let p = DiffPoly::var(2, 0).mul(&DiffPoly::jet(2, 1, 1).pow(2));
        assert_eq!(
            p.separant().unwrap(),
            DiffPoly::var(2, 0).mul(&DiffPoly::jet(2, 1, 1)).scale(&rat(2, 1))
        );
        // a polynomial free of the last variable has no separant
        let p = DiffPoly::jet(2, 0, 2);
        assert!(p.separant().is_err());
    }

    #[test]
    fn derivation_is_leibniz() {
        // δ(x·δx) = (δx)^2 + x·δ²x
        let p = x0().mul(&dx0());
        let expect = dx0().pow(2).add(&x0().mul(&DiffPoly::jet(1, 0, 2)));
        assert_eq!(p.derive(), expect);
        assert!(DiffPoly::int(1, 7).derive().is_zero());
        // δ(x^3) = 3x^2 δx
        let p = x0().pow(3);
        assert_eq!(p.derive(), x0().pow(2).scale(&rat(3, 1)).mul(&dx0()));
    }

    #[test]
    fn p_delta_examples() {
        // P = x0*x1 over 2 vars (x1 is the distinguished variable of the pair)
        let p = DiffPoly::var(2, 0).mul(&DiffPoly::var(2, 1));
        // P^δ = δ(x0)·x1 since the x1-coefficient is differentiated
        let pd = p.p_delta().unwrap();
        assert_eq!(pd, DiffPoly::jet(2, 0, 1).mul(&DiffPoly::var(2, 1)));
        // P = δx - x^2: P^δ = -2 x δx
        let p = dx0().sub(&x0().pow(2));
        assert_eq!(p.p_delta().unwrap(), x0().mul(&dx0()).scale(&rat(-2, 1)));
        // P = δx: P^δ = 0
        assert!(dx0().p_delta().unwrap().is_zero());
    }

    // eq. (2.2): δP = P^δ + s_P · δ^{m+1}(x_n), an exact identity.
    #[test]
    fn derivation_decomposition_identity() {
        let polys = vec![
            dx0().sub(&x0().pow(2)),
            dx0().pow(3).sub(&x0()),
            DiffPoly::jet(1, 0, 2).add(&x0().mul(&dx0())),
            DiffPoly::var(2, 0).mul(&DiffPoly::jet(2, 1, 1).pow(2)).sub(&DiffPoly::int(2, 1)),
        ];
        for p in polys {
            let (n, m) = p.leader().unwrap();
            let lhs = p.derive();
            let rhs = p
                .p_delta()
                .unwrap()
                .add(&p.separant().unwrap().mul(&DiffPoly::jet(p.vars(), n, m + 1)));
            assert_eq!(lhs, rhs, "eq. (2.2) failed for {p}");
        }
    }

    #[test]
    fn prolongation_worked_examples() {
        // P = δx - x^2: f_1 = 2 x0 x1 with trivial separant
        let p = dx0().sub(&x0().pow(2));
        let f1 = prolong(&p, 1).unwrap();
        assert_eq!(f1.num, x0().mul(&dx0()).scale(&rat(2, 1)));
        assert_eq!(f1.sep, DiffPoly::int(1, 1));
        assert_eq!(f1.sep_power, 1);
        // f_2 = 2 x1^2 + 4 x0^2 x1
        let f2 = prolong(&p, 2).unwrap();
        assert_eq!(
            f2.num,
            dx0().pow(2).scale(&rat(2, 1)).add(&x0().pow(2).mul(&dx0()).scale(&rat(4, 1)))
        );
        // P = δx - 1: all prolongations vanish
        let p = dx0().sub(&DiffPoly::int(1, 1));
        for i in 1..=4 {
            assert!(prolong(&p, i).unwrap().num.is_zero());
        }
        assert!(prolong(&p, 0).is_err());
    }

    #[test]
    fn star_round_trip() {
        let p = dx0().sub(&x0().pow(2));
        let star = p.to_ordinary(1).unwrap();
        assert_eq!(star.nvars(), 2);
        let back = DiffPoly::from_ordinary(&star, 1, 1).unwrap();
        assert_eq!(back, p);
        // m too small
        assert!(p.to_ordinary(0).is_err());
        // constant at m = 0
        let c = DiffPoly::int(1, 3);
        assert_eq!(c.to_ordinary(0).unwrap(), MPoly::int(1, 3));
    }

    #[test]
    fn jet_evaluation() {
        let p = dx0().sub(&x0().pow(2));
        assert!(p.eval_jets(&[rat(2, 1), rat(4, 1)], 2).unwrap().is_zero());
        assert_eq!(p.eval_jets(&[rat(2, 1), rat(5, 1)], 2).unwrap(), rat(1, 1));
        assert!(p.eval_jets(&[rat(2, 1)], 1).is_err());
    }

    #[test]
    fn display_names_jets() {
        let p = DiffPoly::jet(1, 0, 2).add(&x0().mul(&dx0()));
        assert_eq!(p.to_string(), "d^2(x0) + x0*d(x0)");
    }
}

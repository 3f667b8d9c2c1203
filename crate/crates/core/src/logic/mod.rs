//! Quantifier-free formulas over the ordered-field signature, in plain (𝓛)
//! and differential (𝓛_δ) modes, plus the normal-form rewrites.
//!
//! Atoms are `p = 0`, `p ≠ 0`, `p > 0`; negation is pushed to atoms eagerly
//! (`¬(p>0)` becomes `−p>0 ∨ p=0`), so trees only carry ∧/∨. Plain formulas
//! live over a blocked variable space (`blocks` variables × `depth` jet
//! columns each); differential formulas live over `vars` differential
//! indeterminates. The valued-field atom (`div`) is an extension point that
//! the tree reserves but nothing here evaluates.

mod goodform;
mod kolchin;
pub(crate) mod lambda;
mod niceform;
mod star;

pub use goodform::goodform_decompose;
pub use kolchin::kolchin_decompose;
pub use lambda::{lambda_formula, LambdaParts};
pub use niceform::{delta_nice_form, normalize_l, NiceDisjunct};
pub use star::{star_transform, unstar};

use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{MPoly, Rat};
use crate::diffpoly::DiffPoly;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Neq,
    Gt,
}

impl Rel {
    pub fn holds(&self, sign: i32) -> bool {
        match self {
            Rel::Eq => sign == 0,
            Rel::Neq => sign != 0,
            Rel::Gt => sign > 0,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Rel::Eq => "= 0",
            Rel::Neq => "!= 0",
            Rel::Gt => "> 0",
        }
    }
}

/// Polynomial atoms need a handful of shared operations.
pub trait AtomPoly: Clone + PartialEq + Eq + Ord + std::hash::Hash {
    fn zero_poly(&self) -> bool;
    fn constant_value(&self) -> Option<Rat>;
    fn negated(&self) -> Self;
}

impl AtomPoly for MPoly {
    fn zero_poly(&self) -> bool {
        self.is_zero()
    }
    fn constant_value(&self) -> Option<Rat> {
        self.as_constant()
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl AtomPoly for DiffPoly {
    fn zero_poly(&self) -> bool {
        self.is_zero()
    }
    fn constant_value(&self) -> Option<Rat> {
        self.as_constant()
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QfFormula<P> {
    Bool(bool),
    Atom(Rel, P),
    And(Vec<QfFormula<P>>),
    Or(Vec<QfFormula<P>>),
}

/// One conjunction of a disjunctive normal form.
#[derive(Clone, Debug, Default)]
pub struct Conjunct<P> {
    pub eqs: Vec<P>,
    pub neqs: Vec<P>,
    pub gts: Vec<P>,
}

impl<P: AtomPoly> QfFormula<P> {
    pub fn truth(b: bool) -> Self {
        QfFormula::Bool(b)
    }

    pub fn atom(rel: Rel, p: P) -> Self {
        if let Some(c) = p.constant_value() {
            let sign = if c.is_zero() {
                0
            } else if c.is_positive() {
                1
            } else {
                -1
            };
            return QfFormula::Bool(rel.holds(sign));
        }
        QfFormula::Atom(rel, p)
    }

    pub fn and(children: Vec<Self>) -> Self {
        let mut out = Vec::new();
        for c in children {
            match c {
                QfFormula::Bool(true) => {}
                QfFormula::Bool(false) => return QfFormula::Bool(false),
                QfFormula::And(cs) => out.extend(cs),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => QfFormula::Bool(true),
            1 => out.pop().unwrap(),
            _ => QfFormula::And(out),
        }
    }

    pub fn or(children: Vec<Self>) -> Self {
        let mut out = Vec::new();
        for c in children {
            match c {
                QfFormula::Bool(false) => {}
                QfFormula::Bool(true) => return QfFormula::Bool(true),
                QfFormula::Or(cs) => out.extend(cs),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => QfFormula::Bool(false),
            1 => out.pop().unwrap(),
            _ => QfFormula::Or(out),
        }
    }

    /// Negation pushed to atoms.
    pub fn negate(&self) -> Self {
        match self {
            QfFormula::Bool(b) => QfFormula::Bool(!b),
            QfFormula::Atom(Rel::Eq, p) => QfFormula::atom(Rel::Neq, p.clone()),
            QfFormula::Atom(Rel::Neq, p) => QfFormula::atom(Rel::Eq, p.clone()),
            QfFormula::Atom(Rel::Gt, p) => QfFormula::or(vec![
                QfFormula::atom(Rel::Gt, p.negated()),
                QfFormula::atom(Rel::Eq, p.clone()),
            ]),
            QfFormula::And(cs) => QfFormula::or(cs.iter().map(|c| c.negate()).collect()),
            QfFormula::Or(cs) => QfFormula::and(cs.iter().map(|c| c.negate()).collect()),
        }
    }

    /// Canonical form: flattened, constant-simplified, deduplicated children
    /// in a fixed structural order.
    pub fn canon(&self) -> Self {
        match self {
            QfFormula::Bool(b) => QfFormula::Bool(*b),
            QfFormula::Atom(rel, p) => QfFormula::atom(*rel, p.clone()),
            QfFormula::And(cs) => {
                let f = QfFormula::and(cs.iter().map(|c| c.canon()).collect());
                sort_children(f)
            }
            QfFormula::Or(cs) => {
                let f = QfFormula::or(cs.iter().map(|c| c.canon()).collect());
                sort_children(f)
            }
        }
    }

    pub fn atoms(&self) -> Vec<(&Rel, &P)> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |r, p| out.push((r, p)));
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Rel, &'a P)) {
        match self {
            QfFormula::Bool(_) => {}
            QfFormula::Atom(r, p) => f(r, p),
            QfFormula::And(cs) | QfFormula::Or(cs) => {
                for c in cs {
                    c.visit_atoms(f);
                }
            }
        }
    }

    pub fn map_polys<Q: AtomPoly>(&self, f: &impl Fn(&P) -> Q) -> QfFormula<Q> {
        match self {
            QfFormula::Bool(b) => QfFormula::Bool(*b),
            QfFormula::Atom(r, p) => QfFormula::atom(*r, f(p)),
            QfFormula::And(cs) => QfFormula::and(cs.iter().map(|c| c.map_polys(f)).collect()),
            QfFormula::Or(cs) => QfFormula::or(cs.iter().map(|c| c.map_polys(f)).collect()),
        }
    }

    pub fn try_map_polys<Q: AtomPoly>(
        &self,
        f: &impl Fn(&P) -> Result<Q>,
    ) -> Result<QfFormula<Q>> {
        Ok(match self {
            QfFormula::Bool(b) => QfFormula::Bool(*b),
            QfFormula::Atom(r, p) => QfFormula::atom(*r, f(p)?),
            QfFormula::And(cs) => QfFormula::and(
                cs.iter().map(|c| c.try_map_polys(f)).collect::<Result<_>>()?,
            ),
            QfFormula::Or(cs) => QfFormula::or(
                cs.iter().map(|c| c.try_map_polys(f)).collect::<Result<_>>()?,
            ),
        })
    }

    /// Truth value under an exact sign assignment for the atoms.
    pub fn eval_signs(&self, sign: &impl Fn(&P) -> i32) -> bool {
        match self {
            QfFormula::Bool(b) => *b,
            QfFormula::Atom(r, p) => r.holds(sign(p)),
            QfFormula::And(cs) => cs.iter().all(|c| c.eval_signs(sign)),
            QfFormula::Or(cs) => cs.iter().any(|c| c.eval_signs(sign)),
        }
    }

    /// Disjunctive normal form as conjunct records; `[]` means false and a
    /// single empty conjunct means true.
    pub fn to_dnf(&self) -> Vec<Conjunct<P>> {
        match self {
            QfFormula::Bool(true) => vec![Conjunct::new()],
            QfFormula::Bool(false) => vec![],
            QfFormula::Atom(r, p) => {
                let mut c = Conjunct::new();
                match r {
                    Rel::Eq => c.eqs.push(p.clone()),
                    Rel::Neq => c.neqs.push(p.clone()),
                    Rel::Gt => c.gts.push(p.clone()),
                }
                vec![c]
            }
            QfFormula::Or(cs) => cs.iter().flat_map(|c| c.to_dnf()).collect(),
            QfFormula::And(cs) => {
                let mut acc = vec![Conjunct::new()];
                for c in cs {
                    let parts = c.to_dnf();
                    let mut next = Vec::new();
                    for a in &acc {
                        for p in &parts {
                            let mut m = Conjunct {
                                eqs: a.eqs.clone(),
                                neqs: a.neqs.clone(),
                                gts: a.gts.clone(),
                            };
                            m.eqs.extend(p.eqs.iter().cloned());
                            m.neqs.extend(p.neqs.iter().cloned());
                            m.gts.extend(p.gts.iter().cloned());
                            next.push(m);
                        }
                    }
                    acc = next;
                }
                acc
            }
        }
    }
}

impl<P> Conjunct<P> {
    pub fn new() -> Self {
        Conjunct { eqs: Vec::new(), neqs: Vec::new(), gts: Vec::new() }
    }
}

fn sort_children<P: AtomPoly>(f: QfFormula<P>) -> QfFormula<P> {
    match f {
        QfFormula::And(mut cs) => {
            cs.sort();
            cs.dedup();
            QfFormula::and(cs)
        }
        QfFormula::Or(mut cs) => {
            cs.sort();
            cs.dedup();
            QfFormula::or(cs)
        }
        other => other,
    }
}

/// Plain-mode (𝓛) formula over a blocked variable space: `blocks` variables
/// with `depth` jet columns each; every atom polynomial has
/// `blocks * depth` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainFormula {
    pub blocks: usize,
    pub depth: usize,
    pub body: QfFormula<MPoly>,
}

impl PlainFormula {
    pub fn new(blocks: usize, depth: usize, body: QfFormula<MPoly>) -> Self {
        let f = PlainFormula { blocks, depth, body };
        f.assert_arity();
        f
    }

    fn assert_arity(&self) {
        let n = self.blocks * self.depth;
        for (_, p) in self.body.atoms() {
            assert_eq!(p.nvars(), n, "atom polynomial has wrong arity for the block shape");
        }
    }

    pub fn nvars(&self) -> usize {
        self.blocks * self.depth
    }

    pub fn var_name(&self, col: usize) -> String {
        if self.depth == 1 {
            format!("x{col}")
        } else {
            format!("x{}_{}", col / self.depth, col % self.depth)
        }
    }

    /// Exact evaluation at a flat coordinate tuple.
    pub fn eval(&self, coords: &[Rat]) -> Result<bool> {
        if coords.len() != self.nvars() {
            return Err(Error::ArityMismatch(format!(
                "formula over {} coordinates evaluated at {}",
                self.nvars(),
                coords.len()
            )));
        }
        Ok(self.body.eval_signs(&|p: &MPoly| {
            let v = p.eval(coords);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        }))
    }

    pub fn canon(&self) -> Self {
        PlainFormula { blocks: self.blocks, depth: self.depth, body: self.body.canon() }
    }

    pub fn render_poly(&self, p: &MPoly) -> String {
        p.display_with(&|c| self.var_name(c))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": "plain",
            "blocks": self.blocks,
            "depth": self.depth,
            "tree": formula_json(&self.body, &|p| self.render_poly(p)),
        })
    }
}

impl fmt::Display for PlainFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(&self.body, &|p| self.render_poly(p), false))
    }
}

/// Differential-mode (𝓛_δ) formula over `vars` differential indeterminates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaFormula {
    pub vars: usize,
    pub body: QfFormula<DiffPoly>,
}

impl DeltaFormula {
    pub fn new(vars: usize, body: QfFormula<DiffPoly>) -> Self {
        let f = DeltaFormula { vars, body };
        for (_, p) in f.body.atoms() {
            assert_eq!(p.vars(), vars, "atom in the wrong differential ring");
        }
        f
    }

    /// Syntactic order: the maximal jet depth occurring (0 for constants and
    /// empty formulas). This is an upper bound for the semantic order and is
    /// sound wherever only `m ≥ o(X)` is needed.
    pub fn order(&self) -> usize {
        self.body
            .atoms()
            .iter()
            .map(|(_, p)| p.order().max(0) as usize)
            .max()
            .unwrap_or(0)
    }

    /// Exact evaluation at a blocked jet tuple of the given depth.
    pub fn eval_jets(&self, coords: &[Rat], point_depth: usize) -> Result<bool> {
        if coords.len() != self.vars * point_depth {
            return Err(Error::ArityMismatch(format!(
                "jet point with {} coords for {} blocks of depth {}",
                coords.len(),
                self.vars,
                point_depth
            )));
        }
        let err = std::cell::RefCell::new(None);
        let v = self.body.eval_signs(&|p: &DiffPoly| match p.eval_jets(coords, point_depth) {
            Ok(v) => {
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Err(e) => {
                *err.borrow_mut() = Some(e);
                0
            }
        });
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    pub fn canon(&self) -> Self {
        DeltaFormula { vars: self.vars, body: self.body.canon() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": "delta",
            "vars": self.vars,
            "tree": formula_json(&self.body, &|p| p.to_string()),
        })
    }
}

impl fmt::Display for DeltaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(&self.body, &|p| p.to_string(), false))
    }
}

fn render<P: AtomPoly>(
    f: &QfFormula<P>,
    poly: &impl Fn(&P) -> String,
    parenthesize: bool,
) -> String {
    let s = match f {
        QfFormula::Bool(true) => "true".to_string(),
        QfFormula::Bool(false) => "false".to_string(),
        QfFormula::Atom(r, p) => format!("{} {}", poly(p), r.symbol()),
        QfFormula::And(cs) => cs
            .iter()
            .map(|c| render(c, poly, true))
            .collect::<Vec<_>>()
            .join(" & "),
        QfFormula::Or(cs) => cs
            .iter()
            .map(|c| render(c, poly, true))
            .collect::<Vec<_>>()
            .join(" | "),
    };
    if parenthesize && matches!(f, QfFormula::And(_) | QfFormula::Or(_)) {
        format!("({s})")
    } else {
        s
    }
}

fn formula_json<P: AtomPoly>(f: &QfFormula<P>, poly: &impl Fn(&P) -> String) -> Value {
    match f {
        QfFormula::Bool(b) => json!({"kind": "bool", "value": b}),
        QfFormula::Atom(r, p) => json!({"kind": "atom", "rel": r.symbol(), "poly": poly(p)}),
        QfFormula::And(cs) => json!({
            "kind": "and",
            "children": cs.iter().map(|c| formula_json(c, poly)).collect::<Vec<_>>(),
        }),
        QfFormula::Or(cs) => json!({
            "kind": "or",
            "children": cs.iter().map(|c| formula_json(c, poly)).collect::<Vec<_>>(),
        }),
    }
}

/// Z_𝒜^R: ⋀_{P∈𝒜} P = 0 ∧ R ≠ 0 over a blocked plain space. `R = 1` (or any
/// nonzero constant) omits the inequation; `R = 0` is rejected since the set
/// would be empty.
pub fn mk_z(a: &[MPoly], r: &MPoly, blocks: usize, depth: usize) -> Result<PlainFormula> {
    if r.is_zero() {
        return Err(Error::ZeroInequation);
    }
    let mut cs: Vec<QfFormula<MPoly>> =
        a.iter().map(|p| QfFormula::atom(Rel::Eq, p.clone())).collect();
    if r.as_constant().is_none() {
        cs.push(QfFormula::atom(Rel::Neq, r.clone()));
    }
    Ok(PlainFormula::new(blocks, depth, QfFormula::and(cs)))
}

/// 𝒵_𝒜^R: the differential analogue of [`mk_z`].
pub fn mk_zcal(a: &[DiffPoly], r: &DiffPoly, vars: usize) -> Result<DeltaFormula> {
    if r.is_zero() {
        return Err(Error::ZeroInequation);
    }
    let mut cs: Vec<QfFormula<DiffPoly>> =
        a.iter().map(|p| QfFormula::atom(Rel::Eq, p.clone())).collect();
    if r.as_constant().is_none() {
        cs.push(QfFormula::atom(Rel::Neq, r.clone()));
    }
    Ok(DeltaFormula::new(vars, QfFormula::and(cs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};

    fn xv() -> MPoly {
        MPoly::var(2, 0)
    }
    fn yv() -> MPoly {
        MPoly::var(2, 1)
    }

    #[test]
    fn mk_z_examples() {
        // A = {y^2 - x}, R = 1 -> single equation
        let a = vec![&(&yv() * &yv()) - &xv()];
        let f = mk_z(&a, &MPoly::one(2), 2, 1).unwrap();
        assert_eq!(f.to_string(), "x1^2 - x0 = 0");

        // A = {}, R = x -> x != 0
        let f = mk_z(&[], &xv(), 2, 1).unwrap();
        assert_eq!(f.to_string(), "x0 != 0");

        // A = {x, y}, R = 2y keeps the redundant inequation
        let two_y = yv().scale(&rat_int(2));
        let f = mk_z(&[xv(), yv()], &two_y, 2, 1).unwrap();
        assert_eq!(f.to_string(), "x0 = 0 & x1 = 0 & 2*x1 != 0");
        assert!(!f.eval(&[rat_int(0), rat_int(0)]).unwrap());

        // R = 0 is an error
        assert_eq!(mk_z(&[], &MPoly::zero(2), 2, 1).unwrap_err(), Error::ZeroInequation);
    }

    #[test]
    fn negation_pushes_to_atoms() {
        let f: QfFormula<MPoly> = QfFormula::atom(Rel::Gt, xv());
        let n = f.negate();
        assert_eq!(
            n,
            QfFormula::Or(vec![
                QfFormula::Atom(Rel::Gt, -&xv()),
                QfFormula::Atom(Rel::Eq, xv()),
            ])
        );
    }

    #[test]
    fn constant_atoms_simplify() {
        let t: QfFormula<MPoly> = QfFormula::atom(Rel::Neq, MPoly::int(1, 1));
        assert_eq!(t, QfFormula::Bool(true));
        let f: QfFormula<MPoly> = QfFormula::atom(Rel::Gt, MPoly::int(1, -3));
        assert_eq!(f, QfFormula::Bool(false));
        let z: QfFormula<MPoly> = QfFormula::atom(Rel::Eq, MPoly::zero(1));
        assert_eq!(z, QfFormula::Bool(true));
    }

    #[test]
    fn dnf_distributes() {
        // (x=0 | y=0) & y>0 -> two conjuncts
        let f = QfFormula::and(vec![
            QfFormula::or(vec![
                QfFormula::atom(Rel::Eq, xv()),
                QfFormula::atom(Rel::Eq, yv()),
            ]),
            QfFormula::atom(Rel::Gt, yv()),
        ]);
        let dnf = f.to_dnf();
        assert_eq!(dnf.len(), 2);
        assert_eq!(dnf[0].eqs, vec![xv()]);
        assert_eq!(dnf[0].gts, vec![yv()]);
    }

    #[test]
    fn delta_formula_order_and_eval() {
        let p = DiffPoly::jet(1, 0, 1).sub(&DiffPoly::var(1, 0).pow(2));
        let f = DeltaFormula::new(1, QfFormula::atom(Rel::Eq, p));
        assert_eq!(f.order(), 1);
        assert!(f.eval_jets(&[rat(2, 1), rat(4, 1)], 2).unwrap());
        assert!(!f.eval_jets(&[rat(2, 1), rat(5, 1)], 2).unwrap());
    }
}

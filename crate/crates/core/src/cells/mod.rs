//! Cell and δ-cell certificates with sampling checkers, plus the exact 1-D
//! cell decomposition.
//!
//! A cell is the graph along a coordinate projection of a continuous finite
//! correspondence whose projected image is open; the projection π onto the
//! initial coordinates of a cell is again a cell. General-dimension cells
//! are certificate-checked, never computed: only the one-variable case is
//! decomposed exactly. Continuity and openness are probed, so those verdicts
//! are three-valued; set-membership, fiber counting and the 1-D
//! decomposition itself are exact.

mod decompose1d;
mod delta;

pub use decompose1d::decompose_1d;
pub use delta::{check_delta_cell, delta_decompose_1var, DeltaCellCertificate};

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{rat_int, AlgNumber, MPoly, Rat};
use crate::logic::{PlainFormula, QfFormula, Rel};
use crate::oracle::{
    restrict_formula, sample_solutions, sign_of, univariate_sat, SampleConfig, Verdict, Witness,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// ρ = id: a definable nonempty open set.
    Open,
    /// Graph over the base projection (finite fibers of size `mult`).
    Graph,
    /// ρ = (ρ_base, last coordinate): open nonempty fibers in the last
    /// coordinate, correspondence inherited from the base.
    OpenFiber,
}

impl CellKind {
    fn as_str(&self) -> &'static str {
        match self {
            CellKind::Open => "open",
            CellKind::Graph => "graph",
            CellKind::OpenFiber => "open-fiber",
        }
    }
}

/// Claimed cell structure over `set.nvars()` plain coordinates.
#[derive(Clone, Debug)]
pub struct CellCertificate {
    pub set: PlainFormula,
    pub dim: usize,
    pub rho: Vec<usize>,
    pub kind: CellKind,
    pub base: Option<Box<CellCertificate>>,
    pub mult: usize,
}

impl CellCertificate {
    pub fn nvars(&self) -> usize {
        self.set.nvars()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "set": self.set.to_string(),
            "dim": self.dim,
            "rho": self.rho,
            "kind": self.kind.as_str(),
            "mult": self.mult,
            "base": self.base.as_ref().map(|b| b.to_json()),
        })
    }
}

/// Exact membership of a rational point.
pub fn cell_member(c: &CellCertificate, pt: &[Rat]) -> Result<bool> {
    c.set.eval(pt)
}

/// Is `base_pt` in ρ(X)? Exact whenever at most one coordinate remains
/// unassigned (direct evaluation or univariate satisfiability); deeper
/// fibers fall back to the rational solver and answer `None` when it
/// starves (the caller decides how to treat that).
fn in_projection(
    c: &CellCertificate,
    base_pt: &[Rat],
    cfg: &SampleConfig,
) -> Result<Option<bool>> {
    let n = c.nvars();
    let mut assigns: BTreeMap<usize, Rat> = BTreeMap::new();
    for (pos, &col) in c.rho.iter().enumerate() {
        assigns.insert(col, base_pt[pos].clone());
    }
    if assigns.len() == n {
        return Ok(Some(c.set.eval(&(0..n).map(|i| assigns[&i].clone()).collect::<Vec<_>>())?));
    }
    let (body, remaining) = restrict_formula(&c.set, &assigns);
    match remaining.len() {
        1 => Ok(Some(univariate_sat(&body)?.is_some())),
        _ => {
            // try a triangular exact enumeration first
            if let Some(f) = enumerate_fiber(&body, remaining.len())? {
                return Ok(Some(!f.is_empty()));
            }
            let sub = PlainFormula::new(remaining.len(), 1, body);
            let pts = sample_solutions(&sub, cfg, 1, false);
            if pts.is_empty() {
                Ok(None)
            } else {
                Ok(Some(true))
            }
        }
    }
}

/// Exact fiber description for a 1-D fiber: `Finite(points)` or `Infinite`
/// (some open region is contained in the fiber).
enum Fiber1D {
    Finite(Vec<FiberPoint>),
    Infinite,
}

#[derive(Clone)]
enum FiberPoint {
    Rational(Rat),
    Algebraic(AlgNumber),
}

impl FiberPoint {
    fn approx(&self, width: &Rat) -> Rat {
        match self {
            FiberPoint::Rational(r) => r.clone(),
            FiberPoint::Algebraic(a) => a.approx(width),
        }
    }
}

/// Exact region analysis of a univariate formula: which isolated points and
/// which open regions satisfy it.
fn fiber_1d(body: &QfFormula<MPoly>) -> Result<Fiber1D> {
    match body {
        QfFormula::Bool(true) => return Ok(Fiber1D::Infinite),
        QfFormula::Bool(false) => return Ok(Fiber1D::Finite(Vec::new())),
        _ => {}
    }
    let mut polys: Vec<MPoly> = Vec::new();
    for (_, p) in body.atoms() {
        if p.as_constant().is_none() && !polys.contains(p) {
            polys.push(p.clone());
        }
    }
    if polys.is_empty() {
        return Ok(Fiber1D::Infinite);
    }
    let mut product = MPoly::one(1);
    for p in &polys {
        product = &product * p;
    }
    let dense = crate::oracle::dense_of(&product);
    let sqf = crate::algebra::squarefree_part(&dense);
    let roots = crate::algebra::isolate_real_roots(&product)?;
    let mut alg: Vec<AlgNumber> = roots
        .iter()
        .map(|iv| AlgNumber::new(sqf.clone(), iv.clone()))
        .collect();
    // separate
    loop {
        let mut ok = true;
        for w in alg.windows(2) {
            if w[0].interval().hi > w[1].interval().lo {
                ok = false;
            }
        }
        if ok {
            break;
        }
        for a in alg.iter_mut() {
            a.refine();
        }
    }
    let bound = crate::algebra::cauchy_bound(&dense);
    // region sample points
    let mut regions: Vec<Rat> = Vec::new();
    regions.push(-bound.clone() - rat_int(1));
    for i in 1..alg.len() {
        let m = (alg[i - 1].interval().hi.clone() + alg[i].interval().lo.clone()) / rat_int(2);
        regions.push(m);
    }
    regions.push(bound + rat_int(1));
    for r in &regions {
        if body.eval_signs(&|p: &MPoly| sign_of(&p.eval(std::slice::from_ref(r)))) {
            return Ok(Fiber1D::Infinite);
        }
    }
    let mut pts = Vec::new();
    for a in &alg {
        let holds = body.eval_signs(&|p: &MPoly| a.sign_of(&crate::oracle::dense_of(p)));
        if holds {
            match a.to_rat() {
                Some(r) => pts.push(FiberPoint::Rational(r)),
                None => pts.push(FiberPoint::Algebraic(a.clone())),
            }
        }
    }
    Ok(Fiber1D::Finite(pts))
}

/// Triangular exact enumeration of a small fiber: repeatedly finds an
/// equation univariate in one remaining coordinate with rational roots and
/// substitutes. Returns `None` when the structure is not triangular-rational.
fn enumerate_fiber(body: &QfFormula<MPoly>, k: usize) -> Result<Option<Vec<Vec<Rat>>>> {
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    if k == 1 {
        return match fiber_1d(body)? {
            Fiber1D::Infinite => Ok(None),
            Fiber1D::Finite(pts) => {
                let mut out = Vec::new();
                for p in pts {
                    match p {
                        FiberPoint::Rational(r) => out.push(vec![r]),
                        FiberPoint::Algebraic(_) => return Ok(None),
                    }
                }
                Ok(Some(out))
            }
        };
    }
    // find an equation mentioning exactly one coordinate
    let dnf = body.to_dnf();
    if dnf.len() != 1 {
        return Ok(None);
    }
    let conj = &dnf[0];
    for (ei, e) in conj.eqs.iter().enumerate() {
        let occurring: Vec<usize> = (0..k).filter(|&c| e.occurs(c)).collect();
        if occurring.len() != 1 {
            continue;
        }
        let v = occurring[0];
        let uni = e.remap(1, &vec![0; k]);
        let roots = crate::algebra::find_rational_roots(&uni);
        let total = crate::algebra::isolate_real_roots(&uni)?;
        if roots.len() != total.len() {
            return Ok(None); // irrational branching: out of the fragment
        }
        let mut out = Vec::new();
        for r in roots {
            // substitute and recurse on the remaining coordinates
            let mut assigns = BTreeMap::new();
            assigns.insert(v, r.clone());
            let phi = PlainFormula::new(k, 1, {
                let mut cs: Vec<QfFormula<MPoly>> = Vec::new();
                for (j, e2) in conj.eqs.iter().enumerate() {
                    if j != ei {
                        cs.push(QfFormula::atom(Rel::Eq, e2.clone()));
                    }
                }
                for q in &conj.neqs {
                    cs.push(QfFormula::atom(Rel::Neq, q.clone()));
                }
                for q in &conj.gts {
                    cs.push(QfFormula::atom(Rel::Gt, q.clone()));
                }
                QfFormula::and(cs)
            });
            let (sub, _remaining) = restrict_formula(&phi, &assigns);
            match enumerate_fiber(&sub, k - 1)? {
                None => return Ok(None),
                Some(tails) => {
                    if tails.is_empty() && k - 1 == 0 {
                        out.push(vec![r.clone()]);
                    }
                    for tail in tails {
                        let mut pt = Vec::with_capacity(k);
                        // re-interleave: v gets r, the rest in order
                        let mut ti = tail.into_iter();
                        for c in 0..k {
                            if c == v {
                                pt.push(r.clone());
                            } else {
                                pt.push(ti.next().unwrap());
                            }
                        }
                        out.push(pt);
                    }
                }
            }
        }
        return Ok(Some(out));
    }
    Ok(None)
}

/// Sampled verification of the cell axioms: the projected image is open
/// (probed at shrinking scales), fibers have exactly `mult` elements (exact
/// 1-D counting, triangular enumeration for deeper fibers), open-fiber cells
/// have open nonempty last-coordinate fibers, and the correspondence is
/// probed for continuity. Ill-conditioned fiber counting yields
/// `inconclusive`, never a spurious verdict.
pub fn check_cell(c: &CellCertificate, cfg: &SampleConfig) -> Result<Verdict> {
    let n = c.nvars();
    // structural checks
    if c.rho.len() != c.dim
        || c.rho.windows(2).any(|w| w[0] >= w[1])
        || c.rho.iter().any(|&i| i >= n)
        || c.dim > n
    {
        return Ok(Verdict::fail(
            0,
            vec![Witness { point: vec![], note: "malformed projection data".into() }],
        ));
    }
    if c.kind == CellKind::Open && c.rho != (0..n).collect::<Vec<_>>() {
        return Ok(Verdict::fail(
            0,
            vec![Witness { point: vec![], note: "open cells must carry the identity projection".into() }],
        ));
    }
    if c.kind == CellKind::OpenFiber && c.rho.last() != Some(&(n - 1)) {
        return Ok(Verdict::fail(
            0,
            vec![Witness { point: vec![], note: "open-fiber cells must project onto the last coordinate".into() }],
        ));
    }

    let mut checked = 0usize;
    let mut witnesses = Vec::new();
    let mut inconclusive = 0usize;

    let pts = sample_solutions(&c.set, cfg, 14, false);
    if pts.is_empty() {
        return Ok(Verdict::inconclusive(0, "no sample points found on the cell"));
    }
    // dim-0 cells: the projection to K^0 is open by convention; verify
    // finiteness and multiplicity of the whole set instead
    if c.dim == 0 {
        if n == 1 {
            match fiber_1d(&c.set.body)? {
                Fiber1D::Infinite => {
                    return Ok(Verdict::fail(
                        1,
                        vec![Witness { point: vec![], note: "dim-0 cell contains an open region".into() }],
                    ));
                }
                Fiber1D::Finite(p) => {
                    checked += 1;
                    if p.len() != c.mult {
                        return Ok(Verdict::fail(
                            checked,
                            vec![Witness {
                                point: vec![],
                                note: format!("dim-0 cell has {} points, claimed {}", p.len(), c.mult),
                            }],
                        ));
                    }
                }
            }
        } else if let Some(f) = enumerate_fiber(&c.set.body, n)? {
            checked += 1;
            if f.len() != c.mult {
                return Ok(Verdict::fail(
                    checked,
                    vec![Witness {
                        point: vec![],
                        note: format!("dim-0 cell has {} points, claimed {}", f.len(), c.mult),
                    }],
                ));
            }
        } else {
            inconclusive += 1;
        }
        return Ok(finish(checked, witnesses, inconclusive));
    }

    for pt in &pts {
        checked += 1;
        let base_pt: Vec<Rat> = c.rho.iter().map(|&i| pt[i].clone()).collect();

        // (a) openness of the projected image: probe shrinking boxes
        let mut open_ok = false;
        let mut scale = cfg.epsilon.clone();
        'scales: for _ in 0..4 {
            let mut all_in = true;
            for axis in 0..c.dim {
                for sgn in [1i64, -1] {
                    let mut probe = base_pt.clone();
                    probe[axis] += scale.clone() * rat_int(sgn);
                    match in_projection(c, &probe, cfg)? {
                        Some(true) => {}
                        Some(false) => {
                            all_in = false;
                            break;
                        }
                        None => {
                            inconclusive += 1;
                            all_in = false;
                            break;
                        }
                    }
                }
                if !all_in {
                    break;
                }
            }
            if all_in {
                open_ok = true;
                break 'scales;
            }
            scale /= rat_int(4);
        }
        if !open_ok {
            witnesses.push(Witness {
                point: base_pt.clone(),
                note: "no surrounding box of the projected image found".into(),
            });
            continue;
        }

        // (b) fiber structure along ρ
        let complement: Vec<usize> = (0..n).filter(|i| !c.rho.contains(i)).collect();
        if !complement.is_empty() {
            let mut assigns = BTreeMap::new();
            for (pos, &col) in c.rho.iter().enumerate() {
                assigns.insert(col, base_pt[pos].clone());
            }
            let (body, _remaining) = restrict_formula(&c.set, &assigns);
            match c.kind {
                CellKind::Open => {}
                CellKind::Graph => {
                    if complement.len() == 1 {
                        match fiber_1d(&body)? {
                            Fiber1D::Infinite => witnesses.push(Witness {
                                point: base_pt.clone(),
                                note: "graph fiber contains an open region".into(),
                            }),
                            Fiber1D::Finite(f) => {
                                if f.len() != c.mult {
                                    witnesses.push(Witness {
                                        point: base_pt.clone(),
                                        note: format!(
                                            "fiber has {} elements, claimed {}",
                                            f.len(),
                                            c.mult
                                        ),
                                    });
                                }
                            }
                        }
                    } else {
                        match enumerate_fiber(&body, complement.len())? {
                            Some(f) => {
                                if f.len() != c.mult {
                                    witnesses.push(Witness {
                                        point: base_pt.clone(),
                                        note: format!(
                                            "fiber has {} elements, claimed {}",
                                            f.len(),
                                            c.mult
                                        ),
                                    });
                                }
                            }
                            None => inconclusive += 1,
                        }
                    }
                }
                CellKind::OpenFiber => {
                    // the last-coordinate fiber over the π-image point must
                    // be open: measured through the base coordinates
                    let mut assigns2 = BTreeMap::new();
                    for &col in c.rho.iter().take(c.dim - 1) {
                        assigns2.insert(col, pt[col].clone());
                    }
                    // also pin every non-rho coordinate through the
                    // correspondence: use the full point, freeing only the
                    // last coordinate
                    let mut assigns3 = BTreeMap::new();
                    for i in 0..n - 1 {
                        assigns3.insert(i, pt[i].clone());
                    }
                    let (fiber, _) = restrict_formula(&c.set, &assigns3);
                    match fiber_1d(&fiber)? {
                        Fiber1D::Infinite => {}
                        Fiber1D::Finite(_) => witnesses.push(Witness {
                            point: pt.clone(),
                            note: "open-fiber cell has a non-open last-coordinate fiber".into(),
                        }),
                    }
                    let _ = assigns2;
                }
            }
        }

        // (c) continuity probe for graph kinds: fibers over a nearby base
        // stay within epsilon (matched pairwise)
        if c.kind == CellKind::Graph && complement.len() == 1 {
            let mut assigns = BTreeMap::new();
            for (pos, &col) in c.rho.iter().enumerate() {
                assigns.insert(col, base_pt[pos].clone());
            }
            let (body_here, _) = restrict_formula(&c.set, &assigns);
            if let Fiber1D::Finite(here) = fiber_1d(&body_here)? {
                let mut matched = false;
                let mut h = cfg.epsilon.clone() / rat_int(8);
                for _ in 0..4 {
                    let mut shifted = assigns.clone();
                    if let Some((&col, _)) = shifted.iter().next() {
                        let v = shifted[&col].clone() + h.clone();
                        shifted.insert(col, v);
                    }
                    let (body_there, _) = restrict_formula(&c.set, &shifted);
                    if let Fiber1D::Finite(there) = fiber_1d(&body_there)? {
                        if there.len() == here.len()
                            && here.iter().zip(&there).all(|(a, b)| {
                                let w = cfg.epsilon.clone() / rat_int(64);
                                let d = a.approx(&w) - b.approx(&w);
                                let d = if d < Rat::zero() { -d } else { d };
                                d <= cfg.epsilon
                            })
                        {
                            matched = true;
                            break;
                        }
                    }
                    h /= rat_int(4);
                }
                if !matched {
                    inconclusive += 1;
                }
            }
        }

        if witnesses.len() >= 5 {
            break;
        }
    }

    // base agreement: sampled projections land in the base cell
    if let Some(base) = &c.base {
        let drop_last = n - 1;
        for pt in pts.iter().take(6) {
            checked += 1;
            let proj: Vec<Rat> = pt.iter().take(drop_last).cloned().collect();
            if proj.len() == base.nvars() && !base.set.eval(&proj)? {
                witnesses.push(Witness {
                    point: proj,
                    note: "projection of a cell point escapes the base cell".into(),
                });
            }
        }
    }

    Ok(finish(checked, witnesses, inconclusive))
}

fn finish(checked: usize, witnesses: Vec<Witness>, inconclusive: usize) -> Verdict {
    if !witnesses.is_empty() {
        Verdict::fail(checked, witnesses)
    } else if inconclusive * 4 > checked.max(1) {
        Verdict::inconclusive(checked, format!("{inconclusive} probes were ill-conditioned"))
    } else {
        Verdict::pass(checked)
    }
}

/// Restriction of a cell to an open subset of its projected image
/// (strict-inequality formula over the ρ-coordinates, in order). The
/// restriction keeps ρ, kind and multiplicity; bases are restricted
/// alongside for graph kinds.
pub fn check_subcell(c: &CellCertificate, u: &PlainFormula) -> Result<CellCertificate> {
    if u.nvars() != c.dim {
        return Err(Error::ArityMismatch(format!(
            "restriction over {} coordinates for a cell of dimension {}",
            u.nvars(),
            c.dim
        )));
    }
    // only strict inequalities keep the restriction open
    for (rel, _) in u.body.atoms() {
        if *rel != Rel::Gt {
            return Err(Error::Invalid("subcell restrictions must be strict inequalities".into()));
        }
    }
    let n = c.nvars();
    // pull U back along ρ
    let map: Vec<usize> = c.rho.clone();
    let pulled = u.body.map_polys(&|p: &MPoly| p.remap(n, &map));
    let set = PlainFormula::new(
        c.set.blocks,
        c.set.depth,
        QfFormula::and(vec![c.set.body.clone(), pulled.clone()]),
    );
    // non-emptiness: exact for one variable, sampled otherwise
    let nonempty = if n == 1 {
        univariate_sat(&set.body)?.is_some()
    } else {
        !sample_solutions(&set, &SampleConfig::default(), 1, false).is_empty()
    };
    if !nonempty {
        return Err(Error::EmptyCell);
    }
    let base = match (&c.base, c.kind) {
        (Some(b), CellKind::Graph) if b.dim == c.dim => {
            // ρ_X = ρ_C ∘ π: the same restriction applies to the base
            Some(Box::new(check_subcell(b, u)?))
        }
        (Some(b), _) => Some(b.clone()),
        (None, _) => None,
    };
    Ok(CellCertificate {
        set,
        dim: c.dim,
        rho: c.rho.clone(),
        kind: c.kind,
        base,
        mult: c.mult,
    })
}

/// Fiber-density search: the largest dyadic u such that every sampled
/// b′ within u of a′ = the leading coordinates of `a` (and inside π(C))
/// admits b″ in the box `v` with (b′, b″) in the cell. The tail length is
/// `v.len()`; `a` must lie in the cell.
pub fn check_fiber_density(
    c: &CellCertificate,
    a: &[Rat],
    v: &[(Rat, Rat)],
    cfg: &SampleConfig,
) -> Result<Verdict> {
    let n = c.nvars();
    if a.len() != n || v.is_empty() || v.len() >= n {
        return Err(Error::ArityMismatch("fiber density wants 1 <= tail < n".into()));
    }
    if !c.set.eval(a)? {
        return Ok(Verdict::fail(
            1,
            vec![Witness { point: a.to_vec(), note: "anchor is not in the cell".into() }],
        ));
    }
    let head = n - v.len();
    let mut checked = 0usize;
    let fractions = [
        (rat_int(15), rat_int(16)),
        (rat_int(1), rat_int(2)),
        (rat_int(-15), rat_int(16)),
        (rat_int(-1), rat_int(2)),
        (rat_int(1), rat_int(4)),
    ];
    let mut u = rat_int(1);
    for _ in 0..12 {
        let mut all_ok = true;
        'probe: for fr in &fractions {
            // b' = a' shifted along each head axis
            for axis in 0..head {
                let mut bp: Vec<Rat> = a[..head].to_vec();
                bp[axis] += u.clone() * fr.0.clone() / fr.1.clone();
                checked += 1;
                // b' must lie in π(C); if not, it does not constrain us
                let mut assigns = BTreeMap::new();
                for (i, val) in bp.iter().enumerate() {
                    assigns.insert(i, val.clone());
                }
                let (fiber, remaining) = restrict_formula(&c.set, &assigns);
                let in_pi = match remaining.len() {
                    1 => univariate_sat(&fiber)?.is_some(),
                    _ => match enumerate_fiber(&fiber, remaining.len())? {
                        Some(f) => !f.is_empty(),
                        None => false,
                    },
                };
                if !in_pi {
                    continue;
                }
                // now require a witness inside V
                let boxed = {
                    let mut cs = vec![fiber.clone()];
                    for (j, (lo, hi)) in v.iter().enumerate() {
                        let var = MPoly::var(remaining.len().max(1), j);
                        cs.push(QfFormula::atom(Rel::Gt, &var - &MPoly::constant(remaining.len().max(1), lo.clone())));
                        cs.push(QfFormula::atom(Rel::Gt, &MPoly::constant(remaining.len().max(1), hi.clone()) - &var));
                    }
                    QfFormula::and(cs)
                };
                let has = match remaining.len() {
                    1 => univariate_sat(&boxed)?.is_some(),
                    _ => match enumerate_fiber(&boxed, remaining.len())? {
                        Some(f) => !f.is_empty(),
                        None => false,
                    },
                };
                if !has {
                    all_ok = false;
                    break 'probe;
                }
            }
        }
        if all_ok {
            return Ok(Verdict {
                status: crate::oracle::VerdictStatus::Pass,
                checked,
                witnesses: Vec::new(),
                reason: Some(format!("largest passing u = {}", crate::algebra::rat_string(&u))),
            });
        }
        u /= rat_int(2);
    }
    let _ = cfg;
    Ok(Verdict::inconclusive(checked, "no dyadic neighbourhood size passed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    // parabola y = x² as a graph cell over the open base x ∈ K.
    fn parabola_cell() -> CellCertificate {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let base = CellCertificate {
            set: PlainFormula::new(1, 1, QfFormula::Bool(true)),
            dim: 1,
            rho: vec![0],
            kind: CellKind::Open,
            base: None,
            mult: 1,
        };
        CellCertificate {
            set: PlainFormula::new(2, 1, QfFormula::atom(Rel::Eq, &y - &(&x * &x))),
            dim: 1,
            rho: vec![0],
            kind: CellKind::Graph,
            base: Some(Box::new(base)),
            mult: 1,
        }
    }

    fn circle_cell(mult: usize) -> CellCertificate {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let circ = &(&(&x * &x) + &(&y * &y)) - &MPoly::one(2);
        // restrict the base away from ±1 so fibers have stable cardinality
        let inside = QfFormula::and(vec![
            QfFormula::atom(Rel::Eq, circ),
            QfFormula::atom(Rel::Gt, &x + &MPoly::constant(2, rat(9, 10))),
            QfFormula::atom(Rel::Gt, &MPoly::constant(2, rat(9, 10)) - &x),
        ]);
        CellCertificate {
            set: PlainFormula::new(2, 1, inside),
            dim: 1,
            rho: vec![0],
            kind: CellKind::Graph,
            base: None,
            mult,
        }
    }

    #[test]
    fn parabola_passes() {
        let v = check_cell(&parabola_cell(), &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?} {:?}", v.status, v.witnesses);
    }

    #[test]
    fn circle_multiplicity() {
        let v = check_cell(&circle_cell(2), &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?} {:?} {:?}", v.status, v.witnesses, v.reason);
        // a claimed 3-correspondence must fail on a counterexample fiber
        let v = check_cell(&circle_cell(3), &SampleConfig::default()).unwrap();
        assert_eq!(v.status, crate::oracle::VerdictStatus::Fail);
    }

    #[test]
    fn subcell_restriction() {
        let c = circle_cell(2);
        let u = PlainFormula::new(1, 1, {
            let t = MPoly::var(1, 0);
            QfFormula::and(vec![
                QfFormula::atom(Rel::Gt, &t + &MPoly::constant(1, rat(1, 2))),
                QfFormula::atom(Rel::Gt, &MPoly::constant(1, rat(1, 2)) - &t),
            ])
        });
        let sub = check_subcell(&c, &u).unwrap();
        let v = check_cell(&sub, &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?} {:?}", v.status, v.witnesses);

        // an empty restriction errors
        let u_far = PlainFormula::new(1, 1, {
            let t = MPoly::var(1, 0);
            QfFormula::atom(Rel::Gt, &t - &MPoly::int(1, 50))
        });
        assert_eq!(check_subcell(&c, &u_far).unwrap_err(), Error::EmptyCell);

        // full-box restriction is the identity on the set
        let u_all = PlainFormula::new(1, 1, QfFormula::Bool(true));
        let same = check_subcell(&c, &u_all).unwrap();
        assert_eq!(same.set.canon(), c.set.canon());
    }

    #[test]
    fn fiber_density_parabola() {
        let c = parabola_cell();
        let a = vec![rat(1, 1), rat(1, 1)];
        let v_box = vec![(rat(9, 10), rat(11, 10))];
        let verdict = check_fiber_density(&c, &a, &v_box, &SampleConfig::default()).unwrap();
        assert!(verdict.passed());
        assert_eq!(verdict.reason.as_deref(), Some("largest passing u = 1/32"));
    }

    #[test]
    fn fiber_density_rejects_outside_anchor() {
        let c = parabola_cell();
        let a = vec![rat(1, 1), rat(2, 1)];
        let v_box = vec![(rat(9, 10), rat(11, 10))];
        let verdict = check_fiber_density(&c, &a, &v_box, &SampleConfig::default()).unwrap();
        assert_eq!(verdict.status, crate::oracle::VerdictStatus::Fail);
    }
}

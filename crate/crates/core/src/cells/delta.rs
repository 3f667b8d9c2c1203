//! δ-cells: preimages under jets of plain cells whose prolongation image is
//! dense in the cell, and the exact one-variable δ-cell decomposition.
//!
//! The computable fragment for `delta_decompose_1var`: disjuncts whose
//! unique equation P either has order 0 in the variable (finitely many
//! leader roots, prolonged exactly through the rational prolongations) or
//! order 1 and degree 1 in its top jet (the whole jet block becomes a
//! rational function of the order-0 shadow, cleared exactly). Anything else
//! raises the out-of-scope error, as does a genuinely multivalued leader.

use super::{decompose_1d, CellCertificate, CellKind};
use crate::algebra::{MPoly, Rat};
use crate::envelope::{build_envelope, DisjunctCert, Envelope};
use crate::logic::{unstar, DeltaFormula, PlainFormula, QfFormula, Rel};
use crate::oracle::{
    closure_density_sampled, sample_points, sample_solutions, JetPoint, SampleConfig, Verdict,
    Witness,
};
use crate::{Error, Result};

/// A δ-cell: the set is the jet preimage of the target cell, and the
/// prolongation image of the set is dense in the target (sampled).
#[derive(Clone, Debug)]
pub struct DeltaCellCertificate {
    pub set: DeltaFormula,
    pub depth: usize,
    pub target_cell: CellCertificate,
}

impl DeltaCellCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "set": self.set.to_string(),
            "depth": self.depth,
            "target_cell": self.target_cell.to_json(),
        })
    }
}

/// A jet coordinate as a rational function N(t)/c(t)^e of the shadow
/// parameter.
#[derive(Clone, Debug)]
struct RatCoord {
    num: MPoly,
    den_pow: u32,
}

/// Clears a polynomial in the jet coordinates into a univariate numerator
/// and a denominator power of `den`.
fn compose_rational(p: &MPoly, coords: &[RatCoord], den: &MPoly) -> (MPoly, u32) {
    let mut need = 0u32;
    for (e, _) in p.terms() {
        let mut tot = 0u32;
        for (j, &k) in e.iter().enumerate() {
            tot += coords[j].den_pow * k;
        }
        need = need.max(tot);
    }
    let mut acc = MPoly::zero(1);
    for (e, c) in p.terms() {
        let mut tot = 0u32;
        let mut term = MPoly::constant(1, c.clone());
        for (j, &k) in e.iter().enumerate() {
            tot += coords[j].den_pow * k;
            term = &term * &coords[j].num.pow(k);
        }
        term = &term * &den.pow(need - tot);
        acc = &acc + &term;
    }
    (acc, need)
}

/// Rewrites an atom over the jet coordinates as an exact univariate atom in
/// the shadow parameter (valid on the locus den ≠ 0): `N/den^e > 0` becomes
/// `N·den^e > 0`, equalities and inequations drop the denominator.
fn compose_atom(rel: Rel, p: &MPoly, coords: &[RatCoord], den: &MPoly) -> QfFormula<MPoly> {
    let (n, e) = compose_rational(p, coords, den);
    match rel {
        Rel::Eq => QfFormula::atom(Rel::Eq, n),
        Rel::Neq => QfFormula::atom(Rel::Neq, n),
        Rel::Gt => {
            if e % 2 == 0 {
                QfFormula::atom(Rel::Gt, n)
            } else {
                QfFormula::atom(Rel::Gt, &n * den)
            }
        }
    }
}

fn compose_formula(
    f: &QfFormula<MPoly>,
    coords: &[RatCoord],
    den: &MPoly,
) -> QfFormula<MPoly> {
    match f {
        QfFormula::Bool(b) => QfFormula::Bool(*b),
        QfFormula::Atom(r, p) => compose_atom(*r, p, coords, den),
        QfFormula::And(cs) => {
            QfFormula::and(cs.iter().map(|c| compose_formula(c, coords, den)).collect())
        }
        QfFormula::Or(cs) => {
            QfFormula::or(cs.iter().map(|c| compose_formula(c, coords, den)).collect())
        }
    }
}

/// The rational-function description of one case-(ii) disjunct of a
/// one-variable envelope: every jet coordinate as N/c^e of the shadow.
struct GraphPiece {
    coords: Vec<RatCoord>,
    den: MPoly,
    /// shadow formula over the parameter (already includes den ≠ 0, the
    /// starred open part and side conditions, composed exactly)
    shadow: QfFormula<MPoly>,
    /// order of P in the variable (0 = point piece, 1 = curve piece)
    k: usize,
}

fn build_graph_piece(env: &Envelope, cert: &DisjunctCert) -> Result<GraphPiece> {
    let d = env.depth;
    let cols = d + 1;
    let (p, k, lambda, theta) = match cert {
        DisjunctCert::CaseII { p, k, lambda, theta, .. } => (p, *k, lambda, theta),
        DisjunctCert::CaseI { .. } => {
            return Err(Error::Invalid("open disjuncts have no graph piece".into()))
        }
    };
    if k > 1 {
        return Err(Error::OutOfFragment(format!(
            "disjunct equation has order {k} in the variable"
        )));
    }
    let leader_deg = p.degree_in_jet(0, k);
    if k == 1 && leader_deg != 1 {
        return Err(Error::OutOfFragment(
            "leader is multivalued over the shadow (degree >= 2)".into(),
        ));
    }

    // star P at the shadow level: k+1 jet columns
    let p_low = p.to_ordinary(k)?;
    let fs = crate::diffpoly::prolong_seq(p, (d - k) as u32)?;

    // the common denominator is the separant; for k = 1 with a linear leader
    // it is also the leader coefficient
    let s_low = p.separant()?.to_ordinary(k)?;

    let mut coords: Vec<RatCoord> = Vec::with_capacity(cols);
    let (den, shadow_extra) = if k == 0 {
        // the parameter is y0 itself, pinned by P(y0) = 0
        let den = s_low.remap(1, &vec![0; 1]);
        let p_uni = p_low.remap(1, &vec![0; 1]);
        coords.push(RatCoord { num: MPoly::var(1, 0), den_pow: 0 });
        (den, QfFormula::atom(Rel::Eq, p_uni))
    } else {
        // k = 1, leader linear: y1 = -rest / c with c the leader coefficient
        let c = p_low.coeff_of(1, 1).remap(1, &vec![0; 2]);
        let rest = p_low.coeff_of(1, 0).remap(1, &vec![0; 2]);
        coords.push(RatCoord { num: MPoly::var(1, 0), den_pow: 0 });
        coords.push(RatCoord { num: -&rest, den_pow: 1 });
        (c, QfFormula::Bool(true))
    };

    // higher jets through the prolongations: f_i = Q_i / s^{ℓ_i} with the
    // lower jets substituted as rational functions
    for f in &fs {
        let q_low = f.num.to_ordinary(k)?;
        // Q_i lives over jets 0..k: compose with the coords built so far
        let sub: Vec<RatCoord> = coords[..=k].to_vec();
        let (n, e) = compose_rational(&q_low.remap(k + 1, &id_map(k + 1)), &sub, &den);
        coords.push(RatCoord { num: n, den_pow: e + f.sep_power });
    }
    debug_assert_eq!(coords.len(), cols);

    // shadow formula: P-pin (k = 0), separant ≠ 0, the open part composed
    let s_uni = match k {
        0 => den.clone(),
        _ => den.clone(),
    };
    let mut cs = vec![shadow_extra];
    cs.push(QfFormula::atom(Rel::Neq, s_uni));
    cs.push(compose_formula(theta, &coords, &den));
    // y-free equations cannot occur with one variable
    let shadow = QfFormula::and(cs);
    Ok(GraphPiece { coords, den, shadow, k })
}

fn id_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// The plain cell formula of a graph piece restricted to a shadow subset:
/// shadow(y0) ∧ cleared coordinate pins for y_1..y_j.
fn graph_level_formula(
    piece: &GraphPiece,
    shadow_set: &QfFormula<MPoly>,
    level: usize,
    cols: usize,
) -> QfFormula<MPoly> {
    let lift = |p: &MPoly| -> MPoly { p.remap(cols, &vec![0; 1]) };
    let mut cs = vec![shadow_set.map_polys(&lift)];
    for j in 1..=level {
        // den^{e_j} · y_j − N_j = 0
        let den_l = lift(&piece.den);
        let n_l = lift(&piece.coords[j].num);
        let yj = MPoly::var(cols, j);
        let eq = &(&den_l.pow(piece.coords[j].den_pow) * &yj) - &n_l;
        cs.push(QfFormula::atom(Rel::Eq, eq));
    }
    QfFormula::and(cs)
}

/// Builds the def:cells chain for a graph piece over a 1-D shadow cell:
/// level j is the graph of the first j pinned jets over the shadow.
fn graph_chain(piece: &GraphPiece, shadow_cell: &CellCertificate, cols: usize) -> CellCertificate {
    let mut cur = shadow_cell.clone();
    for level in 1..cols {
        let set = PlainFormula::new(
            1,
            level + 1,
            graph_level_formula(piece, &shadow_cell.set.body, level, level + 1),
        );
        cur = CellCertificate {
            set,
            dim: shadow_cell.dim,
            rho: shadow_cell.rho.clone(),
            kind: CellKind::Graph,
            base: Some(Box::new(cur)),
            mult: shadow_cell.mult,
        };
    }
    cur
}

/// Exhaustive exact decomposition of a one-variable δ-formula into disjoint
/// δ-cells. Open disjuncts merge into a single open δ-cell kept whole;
/// graph disjuncts lose the open cell's shadow and earlier graphs'
/// coincidence loci before their shadows are decomposed; order-0 pieces
/// contribute algebraic point cells.
pub fn delta_decompose_1var(phi: &DeltaFormula) -> Result<Vec<DeltaCellCertificate>> {
    if phi.vars != 1 {
        return Err(Error::ArityMismatch("one differential variable expected".into()));
    }
    let env = build_envelope(phi)?;
    let d = env.depth;
    let cols = d + 1;

    // order-0 formulas: the target space is univariate, decompose directly
    if d == 0 {
        let mut out = Vec::new();
        for cell in decompose_1d(&env.target)? {
            let set = unstar(&cell.set)?;
            out.push(DeltaCellCertificate { set, depth: 0, target_cell: cell });
        }
        return Ok(out);
    }

    let mut out: Vec<DeltaCellCertificate> = Vec::new();

    // 1. merge the open disjuncts into one open cell, kept whole
    let open_bodies: Vec<QfFormula<MPoly>> = env
        .certs
        .iter()
        .filter_map(|c| match c {
            DisjunctCert::CaseI { theta, .. } => Some(theta.clone()),
            _ => None,
        })
        .collect();
    let open_body = QfFormula::or(open_bodies.clone());
    let have_open = open_body != QfFormula::Bool(false);
    if have_open {
        let set = PlainFormula::new(1, cols, open_body.clone());
        if !sample_solutions(&set, &SampleConfig::default(), 1, false).is_empty() {
            let cell = CellCertificate {
                set: set.clone(),
                dim: cols,
                rho: (0..cols).collect(),
                kind: CellKind::Open,
                base: None,
                mult: 1,
            };
            out.push(DeltaCellCertificate {
                set: unstar(&set)?,
                depth: d,
                target_cell: cell,
            });
        }
    }

    // 2. graph pieces, disjointed on the shadow
    let mut earlier: Vec<GraphPiece> = Vec::new();
    for cert in &env.certs {
        if matches!(cert, DisjunctCert::CaseI { .. }) {
            continue;
        }
        let piece = build_graph_piece(&env, cert)?;
        let mut shadow = piece.shadow.clone();
        // subtract the open cell: its pullback along the coordinates
        if have_open {
            let pulled = compose_formula(&open_body, &piece.coords, &piece.den);
            shadow = QfFormula::and(vec![shadow, pulled.negate()]);
        }
        // subtract coincidence with earlier graph pieces: all coordinates
        // equal (cross-multiplied exactly)
        for other in &earlier {
            let mut eqs = Vec::new();
            for j in 0..cols {
                // N_j/den^{e} = N'_j/den'^{e'}  ⟺  N_j·den'^{e'} = N'_j·den^{e}
                let lhs = &piece.coords[j].num * &other.den.pow(other.coords[j].den_pow);
                let rhs = &other.coords[j].num * &piece.den.pow(piece.coords[j].den_pow);
                eqs.push(QfFormula::atom(Rel::Eq, &lhs - &rhs));
            }
            // they can only coincide where the other shadow also holds
            eqs.push(other.shadow.clone());
            let coincide = QfFormula::and(eqs);
            shadow = QfFormula::and(vec![shadow, coincide.negate()]);
        }
        // decompose the shadow exactly
        let shadow_formula = PlainFormula::new(1, 1, shadow.clone());
        for shadow_cell in decompose_1d(&shadow_formula)? {
            let target = graph_chain(&piece, &shadow_cell, cols);
            let set = unstar(&target.set)?;
            out.push(DeltaCellCertificate { set, depth: d, target_cell: target });
        }
        earlier.push(piece);
    }
    Ok(out)
}

/// Checks the two δ-cell conditions: the jet preimage identity exactly
/// (target points satisfy the set; prolongation points of the set land in
/// the target) and the closure density by ε-net sampling.
pub fn check_delta_cell(dc: &DeltaCellCertificate, cfg: &SampleConfig) -> Result<Verdict> {
    let cols = dc.depth + 1;
    let mut checked = 0usize;
    let mut witnesses = Vec::new();

    // target points: exact solutions plus structured/random probes
    let mut target_pts = sample_solutions(&dc.target_cell.set, cfg, 48, false);
    for p in sample_points(dc.target_cell.set.nvars(), cfg).into_iter().take(cfg.count / 2) {
        if dc.target_cell.set.eval(&p)? {
            target_pts.push(p);
        }
    }
    if target_pts.is_empty() {
        return Ok(Verdict::inconclusive(0, "no target-cell points could be generated"));
    }
    // (1a) target ⊆ jet set of the source
    for p in &target_pts {
        checked += 1;
        if !dc.set.eval_jets(p, cols)? {
            witnesses.push(Witness {
                point: p.clone(),
                note: "target-cell point violates the δ-set".into(),
            });
            if witnesses.len() >= 5 {
                return Ok(Verdict::fail(checked, witnesses));
            }
        }
    }

    // (1b) prolongation points of the source land in the target, through the
    // envelope of the source formula
    let env = build_envelope(&dc.set)?;
    let mut source_pts: Vec<Vec<Rat>> = Vec::new();
    if env.depth >= dc.depth {
        for q in env.disjunct_points(cfg, 12) {
            let jp = JetPoint::new(1, env.depth + 1, q);
            let proj = jp.project(dc.depth)?;
            checked += 1;
            if !dc.target_cell.set.eval(&proj.coords)? {
                witnesses.push(Witness {
                    point: proj.coords.clone(),
                    note: "prolongation point of the δ-set escapes the target cell".into(),
                });
                if witnesses.len() >= 5 {
                    return Ok(Verdict::fail(checked, witnesses));
                }
            }
            source_pts.push(proj.coords);
        }
    }

    if !witnesses.is_empty() {
        return Ok(Verdict::fail(checked, witnesses));
    }

    // (2) closure density: every sampled target point is a prolongation jet
    // (satisfies the δ-set exactly) or lies within epsilon of one
    let mut prolongation_cloud: Vec<Vec<Rat>> = Vec::new();
    for p in &target_pts {
        if dc.set.eval_jets(p, cols)? {
            prolongation_cloud.push(p.clone());
        }
    }
    prolongation_cloud.extend(source_pts.iter().cloned());
    let mut a_cloud = target_pts.clone();
    a_cloud.extend(source_pts.iter().cloned());
    if prolongation_cloud.is_empty() {
        return Ok(Verdict::inconclusive(checked, "no prolongation points for the closure check"));
    }
    let v = closure_density_sampled(&a_cloud, &prolongation_cloud, cfg);
    Ok(match v.status {
        crate::oracle::VerdictStatus::Pass => Verdict::pass(checked + v.checked),
        _ => Verdict { checked: checked + v.checked, ..v },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::diffpoly::DiffPoly;
    use crate::oracle::VerdictStatus;

    fn y0() -> DiffPoly {
        DiffPoly::var(1, 0)
    }
    fn dy() -> DiffPoly {
        DiffPoly::jet(1, 0, 1)
    }

    fn riccati() -> DeltaFormula {
        DeltaFormula::new(1, QfFormula::atom(Rel::Eq, dy().sub(&y0().pow(2))))
    }

    #[test]
    fn open_formula_single_cell() {
        let phi = DeltaFormula::new(1, QfFormula::atom(Rel::Gt, dy()));
        let cells = delta_decompose_1var(&phi).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].target_cell.kind, CellKind::Open);
        let v = check_delta_cell(&cells[0], &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?} {:?}", v.status, v.reason);
    }

    #[test]
    fn riccati_single_graph_cell() {
        let cells = delta_decompose_1var(&riccati()).unwrap();
        assert_eq!(cells.len(), 1);
        let c = &cells[0];
        assert_eq!(c.depth, 2);
        assert_eq!(c.target_cell.kind, CellKind::Graph);
        assert_eq!(c.target_cell.dim, 1);
        // the chain recursion bottoms out at the 1-D shadow cell
        let base = c.target_cell.base.as_ref().unwrap();
        assert!(base.base.is_some());
        let v = check_delta_cell(c, &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?} {:?} {:?}", v.status, v.witnesses, v.reason);
    }

    #[test]
    fn union_with_open_disjointed() {
        // δy = y² ∨ y > 3: the open piece stays whole; the curve loses its
        // shadow above 3 and the boundary point becomes a point cell
        let phi = DeltaFormula::new(
            1,
            QfFormula::or(vec![
                QfFormula::atom(Rel::Eq, dy().sub(&y0().pow(2))),
                QfFormula::atom(Rel::Gt, y0().sub(&DiffPoly::int(1, 3))),
            ]),
        );
        let cells = delta_decompose_1var(&phi).unwrap();
        assert_eq!(cells.len(), 3, "{:?}", cells.iter().map(|c| c.set.to_string()).collect::<Vec<_>>());
        // exactness of the disjointing at the boundary: (3, 9, 54) belongs to
        // exactly one cell
        let boundary = vec![rat(3, 1), rat(9, 1), rat(54, 1)];
        let hits = cells
            .iter()
            .filter(|c| c.target_cell.set.eval(&boundary).unwrap())
            .count();
        assert_eq!(hits, 1);
        // interior curve point (1, 1, 2) in exactly one cell
        let interior = vec![rat(1, 1), rat(1, 1), rat(2, 1)];
        let hits = cells
            .iter()
            .filter(|c| c.target_cell.set.eval(&interior).unwrap())
            .count();
        assert_eq!(hits, 1);
        // open point (4, 0, 0) in exactly one cell
        let open_pt = vec![rat(4, 1), rat(0, 1), rat(0, 1)];
        let hits = cells
            .iter()
            .filter(|c| c.target_cell.set.eval(&open_pt).unwrap())
            .count();
        assert_eq!(hits, 1);
        for c in &cells {
            let v = check_delta_cell(c, &SampleConfig::default()).unwrap();
            assert!(
                v.status != VerdictStatus::Fail,
                "{}: {:?}",
                c.set,
                v.witnesses
            );
        }
    }

    #[test]
    fn enlarged_target_fails() {
        let cells = delta_decompose_1var(&riccati()).unwrap();
        let c = &cells[0];
        // enlarge the target by a far-away box
        let spur = {
            let y0 = MPoly::var(3, 0);
            QfFormula::atom(Rel::Gt, &MPoly::int(3, -10) - &y0)
        };
        let bad = DeltaCellCertificate {
            set: c.set.clone(),
            depth: c.depth,
            target_cell: CellCertificate {
                set: PlainFormula::new(
                    1,
                    3,
                    QfFormula::or(vec![c.target_cell.set.body.clone(), spur]),
                ),
                ..c.target_cell.clone()
            },
        };
        let v = check_delta_cell(&bad, &SampleConfig::default()).unwrap();
        assert_eq!(v.status, VerdictStatus::Fail);
    }

    #[test]
    fn out_of_fragment_reported() {
        // (δ²y) = y has order 2: outside the computable fragment
        let phi = DeltaFormula::new(
            1,
            QfFormula::atom(Rel::Eq, DiffPoly::jet(1, 0, 2).sub(&y0())),
        );
        match delta_decompose_1var(&phi) {
            Err(Error::OutOfFragment(_)) => {}
            other => panic!("expected out-of-fragment, got {other:?}"),
        }
    }

    #[test]
    fn order_zero_uses_plain_decomposition() {
        let phi = DeltaFormula::new(
            1,
            QfFormula::atom(Rel::Eq, y0().pow(2).sub(&DiffPoly::int(1, 2))),
        );
        let cells = delta_decompose_1var(&phi).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].depth, 0);
        assert_eq!(cells[0].target_cell.mult, 2);
        let v = check_delta_cell(&cells[0], &SampleConfig::default()).unwrap();
        assert!(v.status != VerdictStatus::Fail, "{:?}", v.witnesses);
    }
}

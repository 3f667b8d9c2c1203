//! The envelope construction: from a δ-formula of order m, an 𝓛-definable
//! target at jet depth d = 2m whose preimage under jets is the source set,
//! with the top half of every y-block pinned by rational prolongations.
//!
//! Jet semantics throughout: a "differential point" is a jet tuple, the
//! preimage condition is checked exactly on jets, and the closure/density
//! conditions are checked by ε-net sampling with three-valued verdicts —
//! there is no computable model of the extended theory, and the envelope
//! construction is precisely the bridge that makes this surrogate faithful
//! for the properties checked here.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{rat_int, MPoly, Rat};
use crate::diffpoly::{prolong_seq, DiffPoly};
use crate::logic::lambda::lambda_parts_at_depth;
use crate::logic::{
    delta_nice_form, DeltaFormula, LambdaParts, PlainFormula, QfFormula, Rel,
};
use crate::oracle::{
    closure_density_sampled, sample_points, sample_solutions, JetPoint, SampleConfig, Verdict,
    Witness,
};
use crate::{Error, Result};

/// Certificate for one disjunct of the envelope target.
#[derive(Clone, Debug)]
pub enum DisjunctCert {
    /// 𝒜_j free of the distinguished variable (possibly empty): the y-block
    /// is unconstrained apart from the open part.
    CaseI {
        x_equations: Vec<MPoly>,
        theta: QfFormula<MPoly>,
    },
    /// A unique P_j of order k_j in the distinguished variable: λ pins the
    /// jets y_{k_j+1..d} on the regular locus.
    CaseII {
        p: DiffPoly,
        k: usize,
        lambda: LambdaParts,
        x_equations: Vec<MPoly>,
        theta: QfFormula<MPoly>,
    },
}

impl DisjunctCert {
    pub fn formula(&self, blocks: usize, depth: usize) -> PlainFormula {
        match self {
            DisjunctCert::CaseI { x_equations, theta } => {
                let mut cs: Vec<QfFormula<MPoly>> = x_equations
                    .iter()
                    .map(|p| QfFormula::atom(Rel::Eq, p.clone()))
                    .collect();
                cs.push(theta.clone());
                PlainFormula::new(blocks, depth, QfFormula::and(cs))
            }
            DisjunctCert::CaseII { lambda, x_equations, theta, .. } => {
                let mut cs = vec![QfFormula::atom(Rel::Eq, lambda.p_star.clone())];
                cs.push(QfFormula::atom(Rel::Neq, lambda.s_star.clone()));
                for e in &lambda.prolong_eqs {
                    cs.push(QfFormula::atom(Rel::Eq, e.clone()));
                }
                for e in x_equations {
                    cs.push(QfFormula::atom(Rel::Eq, e.clone()));
                }
                cs.push(theta.clone());
                PlainFormula::new(blocks, depth, QfFormula::and(cs))
            }
        }
    }

    pub fn to_json(&self, blocks: usize, depth: usize) -> Value {
        let shape = PlainFormula::new(blocks, depth, QfFormula::Bool(true));
        match self {
            DisjunctCert::CaseI { x_equations, .. } => json!({
                "case": "i",
                "x_equations": x_equations.iter().map(|p| shape.render_poly(p)).collect::<Vec<_>>(),
                "formula": self.formula(blocks, depth).to_string(),
            }),
            DisjunctCert::CaseII { p, k, lambda, .. } => json!({
                "case": "ii",
                "p": p.to_string(),
                "k": k,
                "separant": shape.render_poly(&lambda.s_star),
                "prolongation_equations": lambda
                    .prolong_eqs
                    .iter()
                    .map(|e| shape.render_poly(e))
                    .collect::<Vec<_>>(),
                "formula": self.formula(blocks, depth).to_string(),
            }),
        }
    }
}

/// The envelope of a δ-formula: source, depth d = 2m, 𝓛-target over
/// (n+1)(d+1) jet coordinates, and per-disjunct certificates.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub source: DeltaFormula,
    pub order: usize,
    pub depth: usize,
    pub target: PlainFormula,
    pub certs: Vec<DisjunctCert>,
}

/// A linked triple (X, Z, m): X = ∇_m⁻¹(Z) holds exactly under jet
/// semantics; cl(Z) = cl(∇_m(X)) is checkable only by sampling.
#[derive(Clone, Debug)]
pub struct LinkedTriple {
    pub x: DeltaFormula,
    pub z: PlainFormula,
    pub m: usize,
}

/// Fiber-cardinality bound read off the envelope disjuncts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberBound {
    Finite(u32),
    PossiblyInfinite,
}

/// Builds the envelope at depth d = 2m. Case-(ii) disjuncts pin the whole
/// y-block: the prolongation runs to d − k_j steps. When a starred
/// prolongation polynomial would need x-jets beyond depth d the construction
/// reports the formula as outside the computable fragment instead of
/// emitting an unsound target.
pub fn build_envelope(phi: &DeltaFormula) -> Result<Envelope> {
    let vars = phi.vars;
    let (m, disjuncts) = delta_nice_form(phi)?;
    let d = 2 * m;
    let depth = d + 1;
    let y = vars - 1;

    let mut certs = Vec::new();
    let mut parts: Vec<QfFormula<MPoly>> = Vec::new();
    for dj in &disjuncts {
        let theta = {
            let mut cs = vec![dj.open.try_map_polys(&|p: &DiffPoly| p.to_ordinary(d))?];
            if dj.side.as_constant().is_none() {
                cs.push(QfFormula::atom(Rel::Neq, dj.side.to_ordinary(d)?));
            }
            QfFormula::and(cs)
        };
        let (y_eqs, x_eqs): (Vec<&DiffPoly>, Vec<&DiffPoly>) =
            dj.equations.iter().partition(|p| p.order_in(y) >= 0);
        let x_star: Vec<MPoly> = x_eqs
            .iter()
            .map(|p| p.to_ordinary(d))
            .collect::<Result<_>>()?;
        let cert = match y_eqs.len() {
            0 => DisjunctCert::CaseI { x_equations: x_star, theta },
            1 => {
                let p = y_eqs[0].clone();
                let k = p.order_in(y) as usize;
                let lambda = lambda_parts_at_depth(&p, d - k, Some(depth))?;
                DisjunctCert::CaseII { p, k, lambda, x_equations: x_star, theta }
            }
            _ => {
                return Err(Error::Invalid(
                    "nice form produced several distinguished-variable equations".into(),
                ))
            }
        };
        let f = cert.formula(vars, depth);
        if !parts.contains(&f.body) {
            parts.push(f.body);
            certs.push(cert);
        }
    }
    let target = PlainFormula::new(vars, depth, QfFormula::or(parts));
    Ok(Envelope { source: phi.clone(), order: m, depth: d, target, certs })
}

impl Envelope {
    pub fn blocks(&self) -> usize {
        self.source.vars
    }

    /// Exact witness points on each disjunct (used by the checks and the
    /// closure generators).
    pub fn disjunct_points(&self, cfg: &SampleConfig, per_disjunct: usize) -> Vec<Vec<Rat>> {
        let depth = self.depth + 1;
        let mut out = Vec::new();
        for cert in &self.certs {
            let f = cert.formula(self.blocks(), depth);
            for p in sample_solutions(&f, cfg, per_disjunct, true) {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_string(),
            "order": self.order,
            "depth": self.depth,
            "target": self.target.to_string(),
            "certificates": self
                .certs
                .iter()
                .map(|c| c.to_json(self.blocks(), self.depth + 1))
                .collect::<Vec<_>>(),
        })
    }
}

/// Exact two-directional preimage check on jets.
///
/// (a) every sampled depth-d jet point in the target satisfies the source
/// with jets substituted; (b) exact points of each disjunct re-derive their
/// pinned jets through the rational prolongations (the two routes — cleared
/// equations and rational functions — must agree), and perturbing a pinned
/// jet leaves the target.
pub fn preimage_check(env: &Envelope, cfg: &SampleConfig) -> Result<Verdict> {
    let depth = env.depth + 1;
    let blocks = env.blocks();
    let dims = blocks * depth;
    let mut checked = 0usize;
    let mut witnesses: Vec<Witness> = Vec::new();

    // (a) random + structured points
    let mut points = sample_points(dims, cfg);
    points.extend(crate::oracle::structured_slice_points(&env.target, cfg, cfg.count / 2));
    let exact = env.disjunct_points(cfg, 12);
    points.extend(exact.iter().cloned());
    for pt in &points {
        checked += 1;
        if env.target.eval(pt)? && !env.source.eval_jets(pt, depth)? {
            witnesses.push(Witness {
                point: pt.clone(),
                note: "target holds but source fails at the jet truncation".into(),
            });
            if witnesses.len() >= 5 {
                return Ok(Verdict::fail(checked, witnesses));
            }
        }
    }

    // (b) per-disjunct: prolongation-value consistency and pinned-jet rigidity
    for cert in &env.certs {
        if let DisjunctCert::CaseII { p, k, .. } = cert {
            let f = cert.formula(blocks, depth);
            let pts = sample_solutions(&f, cfg, 8, true);
            let prolongs = prolong_seq(p, (env.depth - k) as u32)?;
            for pt in &pts {
                checked += 1;
                if !env.source.eval_jets(pt, depth)? {
                    witnesses.push(Witness {
                        point: pt.clone(),
                        note: "disjunct point escapes the source".into(),
                    });
                    continue;
                }
                // the rational prolongation route must reproduce the pinned jets
                for (i, fi) in prolongs.iter().enumerate() {
                    let want = &pt[(blocks - 1) * depth + k + i + 1];
                    let got = fi.eval_jets(pt, depth)?;
                    if got != *want {
                        witnesses.push(Witness {
                            point: pt.clone(),
                            note: format!(
                                "prolongation {} disagrees with the pinned jet",
                                i + 1
                            ),
                        });
                    }
                }
                // perturbing a pinned jet must leave the target
                if env.depth > *k {
                    let mut tampered = pt.clone();
                    let idx = (blocks - 1) * depth + env.depth;
                    tampered[idx] += rat_int(1);
                    checked += 1;
                    if env.target.eval(&tampered)? {
                        witnesses.push(Witness {
                            point: tampered,
                            note: "target accepts a violated prolongation".into(),
                        });
                    }
                }
                if witnesses.len() >= 5 {
                    return Ok(Verdict::fail(checked, witnesses));
                }
            }
        }
    }

    Ok(if witnesses.is_empty() {
        Verdict::pass(checked)
    } else {
        Verdict::fail(checked, witnesses)
    })
}

/// Sampled density surrogate: every sampled target point admits a nearby
/// target point satisfying the full prolongation constraints (itself, since
/// the constraints are conjuncts), and a Newton wiggle along the constraint
/// manifold finds a second witness within the ball. Newton non-convergence
/// is reported as inconclusive, never as failure.
pub fn density_check(env: &Envelope, ball: &Rat, cfg: &SampleConfig) -> Result<Verdict> {
    let depth = env.depth + 1;
    let blocks = env.blocks();
    let y = blocks - 1;
    let mut checked = 0usize;
    let mut inconclusive = 0usize;
    let mut witnesses: Vec<Witness> = Vec::new();

    for cert in &env.certs {
        let f = cert.formula(blocks, depth);
        let pts = sample_solutions(&f, cfg, 10, true);
        match cert {
            DisjunctCert::CaseI { .. } => {
                // fibers are open in the y-block: the point itself witnesses
                for pt in &pts {
                    checked += 1;
                    if !env.target.eval(pt)? {
                        witnesses.push(Witness {
                            point: pt.clone(),
                            note: "disjunct point is not in the target".into(),
                        });
                    }
                }
            }
            DisjunctCert::CaseII { p, k, lambda, x_equations, theta } => {
                let prolongs = prolong_seq(p, (env.depth - k) as u32)?;
                for pt in &pts {
                    checked += 1;
                    if !env.target.eval(pt)? {
                        witnesses.push(Witness {
                            point: pt.clone(),
                            note: "disjunct point is not in the target".into(),
                        });
                        continue;
                    }
                    // wiggle a parameterizing coordinate and walk back onto
                    // the constraint manifold with Newton in the leader
                    let args = WiggleArgs {
                        k: *k,
                        lambda,
                        prolongs: &prolongs,
                        x_equations,
                        theta,
                        y,
                        depth,
                        ball,
                    };
                    match wiggle_witness(pt, &args, cfg)? {
                        WiggleOutcome::Found => {}
                        WiggleOutcome::Inconclusive => inconclusive += 1,
                    }
                }
            }
        }
    }

    if !witnesses.is_empty() {
        return Ok(Verdict::fail(checked, witnesses));
    }
    if checked == 0 {
        return Ok(Verdict::inconclusive(0, "no target points could be generated"));
    }
    if inconclusive * 20 > checked {
        return Ok(Verdict::inconclusive(
            checked,
            format!("{inconclusive} of {checked} Newton searches did not converge"),
        ));
    }
    Ok(Verdict::pass(checked))
}

enum WiggleOutcome {
    Found,
    Inconclusive,
}

struct WiggleArgs<'a> {
    k: usize,
    lambda: &'a LambdaParts,
    prolongs: &'a [crate::diffpoly::RatDiffFun],
    x_equations: &'a [MPoly],
    theta: &'a QfFormula<MPoly>,
    y: usize,
    depth: usize,
    ball: &'a Rat,
}

/// Perturbs a parameterizing coordinate of an on-manifold point, solves the
/// leader back onto P* = 0 by Newton (certified exactly to newton_tol) and
/// prolongs exactly. P* holds to tolerance; everything else — prolongation
/// equations, the y-free equations, the separant guard and the open part —
/// is re-verified in exact arithmetic.
fn wiggle_witness(pt: &[Rat], a: &WiggleArgs, cfg: &SampleConfig) -> Result<WiggleOutcome> {
    let ball = a.ball;
    // a coordinate that parameterizes the manifold: a lower y-jet when the
    // order is positive, otherwise an x-coordinate not bound by an equation
    let free_idx = if a.k > 0 {
        Some(a.y * a.depth)
    } else {
        (0..a.y * a.depth).find(|c| !a.x_equations.iter().any(|e| e.occurs(*c)))
    };

    // the prolonged coordinates move with the local Lipschitz factor, so
    // shrink the perturbation until the witness stays inside the ball
    let mut delta = ball.clone() / rat_int(8);
    for _ in 0..6 {
        let mut start = pt.to_vec();
        if let Some(idx) = free_idx {
            start[idx] += delta.clone();
        }
        if try_wiggle(&start, pt, a, cfg)?.is_some() {
            return Ok(WiggleOutcome::Found);
        }
        if free_idx.is_none() {
            break; // nothing to vary: the point itself was the only try
        }
        delta /= rat_int(8);
    }
    Ok(WiggleOutcome::Inconclusive)
}

fn try_wiggle(
    start: &[Rat],
    pt: &[Rat],
    a: &WiggleArgs,
    cfg: &SampleConfig,
) -> Result<Option<Vec<Rat>>> {
    let WiggleArgs { k, lambda, prolongs, x_equations, theta, y, depth, ball } = *a;
    let leader_idx = y * depth + k;
    let solved = crate::oracle::newton_regular_zero(
        &[lambda.p_star.clone()],
        &lambda.s_star,
        start,
        &[leader_idx],
        cfg,
    );
    let mut cand = match solved {
        Some(c) => c,
        None => return Ok(None),
    };
    for (i, fi) in prolongs.iter().enumerate() {
        let v = match fi.eval_jets(&cand, depth) {
            Ok(v) => v,
            Err(_) => return Ok(None),
        };
        cand[y * depth + k + i + 1] = v;
    }
    let dist = pt
        .iter()
        .zip(&cand)
        .map(|(p, q)| {
            let d = p.clone() - q.clone();
            if d < Rat::zero() {
                -d
            } else {
                d
            }
        })
        .max()
        .unwrap_or_else(|| rat_int(0));
    if dist > *ball {
        return Ok(None);
    }
    // exact side checks: the y-free equations and the open part
    let exact_ok = x_equations.iter().all(|e| e.eval(&cand).is_zero())
        && theta.eval_signs(&|p: &MPoly| crate::oracle::sign_of(&p.eval(&cand)));
    if !exact_ok {
        return Ok(None);
    }
    Ok(Some(cand))
}

/// π_m^d on formulas: re-indexes every block to its first m+1 coordinates;
/// errors if a projected-away coordinate occurs.
pub fn project_block_formula(phi: &PlainFormula, m: usize) -> Result<PlainFormula> {
    if m + 1 > phi.depth {
        return Err(Error::DepthMismatch { needed: m, available: phi.depth - 1 });
    }
    let new_depth = m + 1;
    let old_depth = phi.depth;
    let blocks = phi.blocks;
    let map: Vec<usize> = (0..blocks * old_depth)
        .map(|c| {
            let (i, j) = (c / old_depth, c % old_depth);
            if j < new_depth {
                i * new_depth + j
            } else {
                usize::MAX // flags occurrence of a projected column
            }
        })
        .collect();
    let body = phi.body.try_map_polys(&|p: &MPoly| {
        for (e, _) in p.terms() {
            for (col, &k) in e.iter().enumerate() {
                if k > 0 && map[col] == usize::MAX {
                    return Err(Error::ProjectedVariableOccurs);
                }
            }
        }
        let safe: Vec<usize> = map.iter().map(|&m2| if m2 == usize::MAX { 0 } else { m2 }).collect();
        Ok(p.remap(blocks * new_depth, &safe))
    })?;
    Ok(PlainFormula::new(blocks, new_depth, body))
}

/// π_m^d on jet points.
pub fn project_block_point(p: &JetPoint, m: usize) -> Result<JetPoint> {
    p.project(m)
}

/// Linked triple for a one-variable δ-formula: (φ, envelope target, 2m).
pub fn linked_triple_1var(phi: &DeltaFormula) -> Result<LinkedTriple> {
    if phi.vars != 1 {
        return Err(Error::ArityMismatch("linked_triple_1var needs one differential variable".into()));
    }
    let env = build_envelope(phi)?;
    Ok(LinkedTriple { x: phi.clone(), z: env.target.clone(), m: env.depth })
}

impl LinkedTriple {
    pub fn to_json(&self) -> Value {
        json!({
            "x": self.x.to_string(),
            "z": self.z.to_string(),
            "m": self.m,
        })
    }
}

/// Sampled closure-projection comparison: cl(∇_m(X)) versus cl(π_m^d(Z)),
/// both sides generated by points and compared as ε-nets.
pub fn closure_projection_check(
    triple: &LinkedTriple,
    m: usize,
    cfg: &SampleConfig,
) -> Result<Verdict> {
    if m >= triple.m && triple.m > 0 {
        return Err(Error::Invalid("projection depth must be below the triple depth".into()));
    }
    // A: projections of sampled Z points
    let z_pts = sample_solutions(&triple.z, cfg, cfg.count.min(64), false);
    let a: Vec<Vec<Rat>> = z_pts
        .iter()
        .map(|p| {
            let jp = JetPoint::new(1, triple.m + 1, p.clone());
            Ok(jp.project(m)?.coords)
        })
        .collect::<Result<_>>()?;
    // B: projections of the canonical envelope points of X
    let env = build_envelope(&triple.x)?;
    let mut b_full = env.disjunct_points(cfg, 24);
    b_full.extend(sample_solutions(&env.target, cfg, cfg.count.min(64), false));
    let b: Vec<Vec<Rat>> = b_full
        .iter()
        .map(|p| {
            let jp = JetPoint::new(1, env.depth + 1, p.clone());
            Ok(jp.project(m)?.coords)
        })
        .collect::<Result<_>>()?;
    Ok(closure_density_sampled(&a, &b, cfg))
}

/// Fiber-cardinality bound: the sum over case-(ii) disjuncts of the leader
/// degree of P_j when the whole y-block is pinned from y_0 (k_j = 0); any
/// disjunct leaving y-coordinates free makes the fiber possibly infinite.
/// Contract: every finite fiber has cardinality at most the bound.
pub fn finiteness_bound(env: &Envelope) -> FiberBound {
    let y = env.blocks() - 1;
    let mut total = 0u32;
    for cert in &env.certs {
        match cert {
            DisjunctCert::CaseI { .. } => return FiberBound::PossiblyInfinite,
            DisjunctCert::CaseII { p, k, .. } => {
                if *k > 0 {
                    return FiberBound::PossiblyInfinite;
                }
                total += p.degree_in_jet(y, *k);
            }
        }
    }
    FiberBound::Finite(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::logic::Rel;

    fn y0() -> DiffPoly {
        DiffPoly::var(1, 0)
    }
    fn dy() -> DiffPoly {
        DiffPoly::jet(1, 0, 1)
    }

    fn riccati() -> DeltaFormula {
        DeltaFormula::new(1, QfFormula::atom(Rel::Eq, dy().sub(&y0().pow(2))))
    }

    // δy = y²: m = 1, d = 2, target pins y1 = y0² and y2 = 2 y0 y1.
    #[test]
    fn riccati_envelope_matches_hand_target() {
        let env = build_envelope(&riccati()).unwrap();
        assert_eq!(env.order, 1);
        assert_eq!(env.depth, 2);
        let y = |j: usize| MPoly::var(3, j);
        let hand = PlainFormula::new(
            1,
            3,
            QfFormula::and(vec![
                QfFormula::atom(Rel::Eq, &y(1) - &(&y(0) * &y(0))),
                QfFormula::atom(
                    Rel::Eq,
                    &y(2) - &(&y(0) * &y(1)).scale(&rat(2, 1)),
                ),
            ]),
        );
        assert_eq!(env.target.canon(), hand.canon());
    }

    #[test]
    fn riccati_preimage_points() {
        let env = build_envelope(&riccati()).unwrap();
        // (2, 4, 16) lies in the target and the source holds at it
        let p = vec![rat(2, 1), rat(4, 1), rat(16, 1)];
        assert!(env.target.eval(&p).unwrap());
        assert!(env.source.eval_jets(&p, 3).unwrap());
        // (2, 4, 15) violates the prolongation
        let p = vec![rat(2, 1), rat(4, 1), rat(15, 1)];
        assert!(!env.target.eval(&p).unwrap());
        // (2, 5, ·): the source already fails
        let p = vec![rat(2, 1), rat(5, 1), rat(0, 1)];
        assert!(!env.source.eval_jets(&p, 3).unwrap());

        let v = preimage_check(&env, &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?}", v.witnesses);
    }

    // δy > 0: case (i), free top jets.
    #[test]
    fn open_envelope() {
        let phi = DeltaFormula::new(1, QfFormula::atom(Rel::Gt, dy()));
        let env = build_envelope(&phi).unwrap();
        assert_eq!(env.depth, 2);
        assert!(matches!(env.certs[0], DisjunctCert::CaseI { .. }));
        let p = vec![rat(0, 1), rat(1, 1), rat(99, 1)];
        assert!(env.target.eval(&p).unwrap());
        assert_eq!(finiteness_bound(&env), FiberBound::PossiblyInfinite);
        let v = preimage_check(&env, &SampleConfig::default()).unwrap();
        assert!(v.passed());
    }

    // (δy)² = y: case (ii) with separant 2δy plus the reduced branch {y}.
    #[test]
    fn branching_envelope() {
        let phi = DeltaFormula::new(1, QfFormula::atom(Rel::Eq, dy().pow(2).sub(&y0())));
        let env = build_envelope(&phi).unwrap();
        assert_eq!(env.certs.len(), 2);
        let v = preimage_check(&env, &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?}", v.witnesses);
        // (4, 2, 1/2): on the regular branch δ²y = 1/2
        let p = vec![rat(4, 1), rat(2, 1), rat(1, 2)];
        assert!(env.target.eval(&p).unwrap());
        // the singular branch pins everything to zero
        let p = vec![rat(0, 1), rat(0, 1), rat(0, 1)];
        assert!(env.target.eval(&p).unwrap());
        // (0, 5, ·) must not slip in through the singular branch
        let p = vec![rat(0, 1), rat(5, 1), rat(0, 1)];
        assert!(!env.target.eval(&p).unwrap());
    }

    #[test]
    fn density_riccati() {
        let env = build_envelope(&riccati()).unwrap();
        let v = density_check(&env, &rat(1, 16), &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?} {:?}", v.status, v.reason);
    }

    #[test]
    fn projection_ops() {
        let p = JetPoint::new(1, 3, vec![rat(1, 1), rat(2, 1), rat(3, 1)]);
        assert_eq!(project_block_point(&p, 1).unwrap().coords, vec![rat(1, 1), rat(2, 1)]);
        // composition π_0^1 ∘ π_1^2 = π_0^2
        let q = project_block_point(&project_block_point(&p, 1).unwrap(), 0).unwrap();
        assert_eq!(q.coords, project_block_point(&p, 0).unwrap().coords);

        // formulas: y2 > 0 cannot be projected below depth 2
        let f = PlainFormula::new(1, 3, QfFormula::atom(Rel::Gt, MPoly::var(3, 2)));
        assert_eq!(project_block_formula(&f, 1).unwrap_err(), Error::ProjectedVariableOccurs);
        let f = PlainFormula::new(1, 3, QfFormula::atom(Rel::Gt, MPoly::var(3, 0)));
        let g = project_block_formula(&f, 1).unwrap();
        assert_eq!(g.depth, 2);
    }

    #[test]
    fn linked_triples() {
        let t = linked_triple_1var(&riccati()).unwrap();
        assert_eq!(t.m, 2);
        // order-0 formula: the triple has depth 0 and Z is the formula itself
        let phi = DeltaFormula::new(1, QfFormula::atom(Rel::Gt, y0()));
        let t0 = linked_triple_1var(&phi).unwrap();
        assert_eq!(t0.m, 0);
        assert_eq!(t0.z.to_string(), "x0 > 0");
    }

    #[test]
    fn closure_projection_riccati() {
        let t = linked_triple_1var(&riccati()).unwrap();
        let v = closure_projection_check(&t, 1, &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?} {:?}", v.status, v.reason);
        // adversarial Z enlarged by a far box must fail
        let far = QfFormula::atom(
            Rel::Gt,
            &MPoly::int(3, -50) - &MPoly::var(3, 0),
        );
        let z_bad = PlainFormula::new(1, 3, QfFormula::or(vec![t.z.body.clone(), far]));
        let t_bad = LinkedTriple { x: t.x.clone(), z: z_bad, m: t.m };
        let v = closure_projection_check(&t_bad, 1, &SampleConfig::default()).unwrap();
        assert_eq!(v.status, crate::oracle::VerdictStatus::Fail);
    }

    // bound(φ1 ∨ φ2) ≤ bound(φ1) + bound(φ2) on finite cases.
    #[test]
    fn finiteness_bound_examples() {
        // y² = x over vars (x, y): order 0
        let x = DiffPoly::var(2, 0);
        let yv = DiffPoly::var(2, 1);
        let phi = DeltaFormula::new(2, QfFormula::atom(Rel::Eq, yv.pow(2).sub(&x)));
        let env = build_envelope(&phi).unwrap();
        let b = finiteness_bound(&env);
        // Σ over pieces: deg 2 (parabola) + deg 1 (branch {x, y})
        assert_eq!(b, FiberBound::Finite(3));
    }
}

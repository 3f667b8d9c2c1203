//! Exact cell decomposition for one-variable formulas: a finite disjoint
//! union of open intervals with real-algebraic endpoints and one finite
//! algebraic point set.

use num_traits::Zero;

use super::{CellCertificate, CellKind};
use crate::algebra::{
    cauchy_bound, isolate_real_roots, rat_int, squarefree_part, AlgNumber, MPoly, Rat,
};
use crate::logic::{PlainFormula, QfFormula, Rel};
use crate::oracle::{dense_of, sign_of};
use crate::Result;

/// One endpoint of a 1-D cell.
#[derive(Clone, Debug)]
enum Endpoint {
    NegInf,
    PosInf,
    At(AlgNumber),
}

/// Decomposes a univariate formula into disjoint cells covering it exactly:
/// maximal open intervals (kind open, left-to-right) followed by one finite
/// cell collecting the isolated points. Formulas with empty solution sets
/// yield the empty list.
pub fn decompose_1d(phi: &PlainFormula) -> Result<Vec<CellCertificate>> {
    assert_eq!(phi.nvars(), 1, "decompose_1d expects one variable");
    let body = &phi.body;

    // constant formulas
    let mut polys: Vec<MPoly> = Vec::new();
    for (_, p) in body.atoms() {
        if p.as_constant().is_none() && !polys.contains(p) {
            polys.push(p.clone());
        }
    }
    if polys.is_empty() {
        return Ok(match body {
            QfFormula::Bool(true) => vec![CellCertificate {
                set: PlainFormula::new(1, 1, QfFormula::Bool(true)),
                dim: 1,
                rho: vec![0],
                kind: CellKind::Open,
                base: None,
                mult: 1,
            }],
            _ => Vec::new(),
        });
    }

    let mut product = MPoly::one(1);
    for p in &polys {
        product = &product * p;
    }
    let dense = dense_of(&product);
    let sqf = squarefree_part(&dense);
    let ivs = isolate_real_roots(&product)?;
    let mut roots: Vec<AlgNumber> = ivs
        .iter()
        .map(|iv| AlgNumber::new(sqf.clone(), iv.clone()))
        .collect();
    // separate the isolating intervals and keep them narrow so rational
    // brackets stay between neighbouring roots
    loop {
        let mut ok = true;
        for w in roots.windows(2) {
            if w[0].interval().hi > w[1].interval().lo {
                ok = false;
            }
        }
        if ok {
            break;
        }
        for r in roots.iter_mut() {
            r.refine();
        }
    }
    for r in roots.iter_mut() {
        r.refine_below(&Rat::new(1.into(), 32.into()));
    }

    let bound = cauchy_bound(&dense) + rat_int(1);
    let t = roots.len();

    // truth on each region: t+1 open regions and t roots
    let mut region_true = Vec::with_capacity(t + 1);
    let mut root_true = Vec::with_capacity(t);
    let region_sample = |i: usize, roots: &[AlgNumber]| -> Rat {
        if i == 0 {
            if t == 0 {
                rat_int(0)
            } else {
                roots[0].interval().lo.clone() - rat_int(1)
            }
        } else if i == t {
            roots[t - 1].interval().hi.clone() + rat_int(1)
        } else {
            (roots[i - 1].interval().hi.clone() + roots[i].interval().lo.clone()) / rat_int(2)
        }
    };
    let _ = &bound;
    for i in 0..=t {
        let x = region_sample(i, &roots);
        region_true
            .push(body.eval_signs(&|p: &MPoly| sign_of(&p.eval(std::slice::from_ref(&x)))));
    }
    for r in &roots {
        root_true.push(body.eval_signs(&|p: &MPoly| r.sign_of(&dense_of(p))));
    }

    // assemble maximal open intervals and isolated points
    let mut opens: Vec<(Endpoint, Endpoint)> = Vec::new();
    let mut points: Vec<AlgNumber> = Vec::new();
    let mut i = 0usize;
    while i <= t {
        if region_true[i] {
            let start = if i == 0 {
                Endpoint::NegInf
            } else {
                Endpoint::At(roots[i - 1].clone())
            };
            // absorb following true-root/true-region pairs
            let mut j = i;
            while j < t && root_true[j] && region_true[j + 1] {
                j += 1;
            }
            let end = if j == t {
                Endpoint::PosInf
            } else {
                Endpoint::At(roots[j].clone())
            };
            opens.push((start, end));
            i = j + 1;
        } else {
            i += 1;
        }
    }
    for (j, r) in roots.iter().enumerate() {
        if root_true[j] {
            // already absorbed into an open interval?
            let absorbed = region_true[j] && region_true[j + 1];
            if !absorbed {
                points.push(r.clone());
            }
        }
    }

    let mut out = Vec::new();
    for (lo, hi) in &opens {
        out.push(CellCertificate {
            set: PlainFormula::new(1, 1, interval_formula(lo, hi, &sqf)),
            dim: 1,
            rho: vec![0],
            kind: CellKind::Open,
            base: None,
            mult: 1,
        });
    }
    if !points.is_empty() {
        let parts: Vec<QfFormula<MPoly>> = points.iter().map(|r| point_formula(r, &sqf)).collect();
        out.push(CellCertificate {
            set: PlainFormula::new(1, 1, QfFormula::or(parts)),
            dim: 0,
            rho: vec![],
            kind: CellKind::Graph,
            base: None,
            mult: points.len(),
        });
    }
    Ok(out)
}

fn upoly(dense: &[Rat]) -> MPoly {
    MPoly::from_terms(
        1,
        dense
            .iter()
            .enumerate()
            .map(|(k, c)| (vec![k as u32], c.clone())),
    )
}

fn xvar() -> MPoly {
    MPoly::var(1, 0)
}

/// `x > α` exactly: past the bracket, at the bracket endpoint, or inside the
/// bracket on the positive side of the (squarefree) sign change.
fn gt_alpha(alpha: &AlgNumber, sqf: &[Rat]) -> QfFormula<MPoly> {
    if let Some(r) = alpha.to_rat() {
        return QfFormula::atom(Rel::Gt, &xvar() - &MPoly::constant(1, r));
    }
    let iv = alpha.interval();
    let (lo, hi) = (iv.lo.clone(), iv.hi.clone());
    // sign of sqf just right of α = sign at hi (no other root in the bracket)
    let s_hi = {
        let v = eval_dense(sqf, &hi);
        sign_of(&v)
    };
    let sq = upoly(sqf).scale(&rat_int(s_hi as i64));
    QfFormula::or(vec![
        QfFormula::atom(Rel::Gt, &xvar() - &MPoly::constant(1, hi.clone())),
        QfFormula::atom(Rel::Eq, &xvar() - &MPoly::constant(1, hi)),
        QfFormula::and(vec![
            QfFormula::atom(Rel::Gt, &xvar() - &MPoly::constant(1, lo)),
            QfFormula::atom(Rel::Gt, sq),
        ]),
    ])
}

/// `x < β`, mirrored.
fn lt_beta(beta: &AlgNumber, sqf: &[Rat]) -> QfFormula<MPoly> {
    if let Some(r) = beta.to_rat() {
        return QfFormula::atom(Rel::Gt, &MPoly::constant(1, r) - &xvar());
    }
    let iv = beta.interval();
    let (lo, hi) = (iv.lo.clone(), iv.hi.clone());
    let s_lo = {
        let v = eval_dense(sqf, &lo);
        sign_of(&v)
    };
    let sq = upoly(sqf).scale(&rat_int(s_lo as i64));
    QfFormula::or(vec![
        QfFormula::atom(Rel::Gt, &MPoly::constant(1, lo.clone()) - &xvar()),
        QfFormula::atom(Rel::Eq, &xvar() - &MPoly::constant(1, lo)),
        QfFormula::and(vec![
            QfFormula::atom(Rel::Gt, &MPoly::constant(1, hi) - &xvar()),
            QfFormula::atom(Rel::Gt, sq),
        ]),
    ])
}

fn interval_formula(lo: &Endpoint, hi: &Endpoint, sqf: &[Rat]) -> QfFormula<MPoly> {
    let mut cs = Vec::new();
    match lo {
        Endpoint::NegInf => {}
        Endpoint::At(a) => cs.push(gt_alpha(a, sqf)),
        Endpoint::PosInf => unreachable!(),
    }
    match hi {
        Endpoint::PosInf => {}
        Endpoint::At(b) => cs.push(lt_beta(b, sqf)),
        Endpoint::NegInf => unreachable!(),
    }
    QfFormula::and(cs)
}

/// `x = α` exactly: the squarefree polynomial vanishes inside the bracket.
fn point_formula(alpha: &AlgNumber, sqf: &[Rat]) -> QfFormula<MPoly> {
    if let Some(r) = alpha.to_rat() {
        return QfFormula::atom(Rel::Eq, &xvar() - &MPoly::constant(1, r));
    }
    let iv = alpha.interval();
    QfFormula::and(vec![
        QfFormula::atom(Rel::Eq, upoly(sqf)),
        QfFormula::atom(Rel::Gt, &xvar() - &MPoly::constant(1, iv.lo.clone())),
        QfFormula::atom(Rel::Gt, &MPoly::constant(1, iv.hi.clone()) - &xvar()),
    ])
}

fn eval_dense(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = rat_int(0);
    for c in p.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::oracle::SampleConfig;

    fn phi(body: QfFormula<MPoly>) -> PlainFormula {
        PlainFormula::new(1, 1, body)
    }

    fn x() -> MPoly {
        MPoly::var(1, 0)
    }

    // x² < 2: one open cell (−√2, √2).
    #[test]
    fn open_disk() {
        let f = phi(QfFormula::atom(Rel::Gt, &MPoly::int(1, 2) - &(&x() * &x())));
        let cells = decompose_1d(&f).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].kind, CellKind::Open);
        assert_eq!(cells[0].dim, 1);
        // membership agrees with the input on a grid
        for k in -40i64..=40 {
            let pt = vec![rat(k, 10)];
            assert_eq!(cells[0].set.eval(&pt).unwrap(), f.eval(&pt).unwrap(), "at {k}/10");
        }
    }

    // x² = 2: one finite cell {−√2, √2}.
    #[test]
    fn two_algebraic_points() {
        let f = phi(QfFormula::atom(Rel::Eq, &(&x() * &x()) - &MPoly::int(1, 2)));
        let cells = decompose_1d(&f).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].dim, 0);
        assert_eq!(cells[0].mult, 2);
        let v = super::super::check_cell(&cells[0], &SampleConfig::default()).unwrap();
        assert!(v.passed(), "{:?}", v.witnesses);
    }

    // (x²−1)(x²−4) > 0: three open cells (−∞,−2), (−1,1), (2,∞).
    #[test]
    fn three_open_cells() {
        let p1 = &(&x() * &x()) - &MPoly::one(1);
        let p2 = &(&x() * &x()) - &MPoly::int(1, 4);
        let f = phi(QfFormula::atom(Rel::Gt, &p1 * &p2));
        let cells = decompose_1d(&f).unwrap();
        assert_eq!(cells.len(), 3);
        assert!(cells.iter().all(|c| c.kind == CellKind::Open));
        // left-to-right: probe representative points
        assert!(cells[0].set.eval(&[rat(-3, 1)]).unwrap());
        assert!(cells[1].set.eval(&[rat(0, 1)]).unwrap());
        assert!(cells[2].set.eval(&[rat(3, 1)]).unwrap());
        assert!(!cells[1].set.eval(&[rat(3, 1)]).unwrap());
    }

    // Mixed: x·(x−1) ≥ 0 written with strict atoms; the root x = 0 and the
    // region structure must cover exactly.
    #[test]
    fn disjoint_cover_with_points() {
        let p = &x() * &(&x() - &MPoly::one(1));
        let f = phi(QfFormula::or(vec![
            QfFormula::atom(Rel::Gt, p.clone()),
            QfFormula::atom(Rel::Eq, p.clone()),
        ]));
        let cells = decompose_1d(&f).unwrap();
        // (−∞,0), (1,∞) as opens and {0,1}... the roots adjoin true regions
        // on one side only, so they stay as a point cell
        let total: Vec<Rat> = vec![rat(-1, 1), rat(0, 1), rat(1, 2), rat(1, 1), rat(2, 1)];
        for t in &total {
            let want = f.eval(std::slice::from_ref(t)).unwrap();
            let got = cells
                .iter()
                .map(|c| c.set.eval(std::slice::from_ref(t)).unwrap())
                .filter(|&b| b)
                .count();
            assert_eq!(got, usize::from(want), "cover/disjoint at {t}");
        }
    }

    #[test]
    fn empty_formula_gives_no_cells() {
        let f = phi(QfFormula::atom(Rel::Eq, &(&x() * &x()) + &MPoly::one(1)));
        assert!(decompose_1d(&f).unwrap().is_empty());
    }

    // every emitted certificate passes its own checker
    #[test]
    fn emitted_cells_self_check() {
        let fs = vec![
            phi(QfFormula::atom(Rel::Gt, &MPoly::int(1, 2) - &(&x() * &x()))),
            phi(QfFormula::atom(Rel::Eq, &(&x() * &x()) - &MPoly::int(1, 2))),
            phi(QfFormula::atom(Rel::Neq, x())),
        ];
        for f in fs {
            for c in decompose_1d(&f).unwrap() {
                let v = super::super::check_cell(&c, &SampleConfig::default()).unwrap();
                assert!(v.passed(), "{} -> {:?}", c.set, v.witnesses);
            }
        }
    }
}

//! Deterministic rational sampling and solution-point generation.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sign_of, SampleConfig};
use crate::algebra::{isolate_real_roots, rat_int, MPoly, Rat};
use crate::logic::PlainFormula;

/// Deterministic stream of small rationals; the same seed gives the same
/// stream on every platform.
pub struct RatSampler {
    rng: ChaCha8Rng,
    lo: Rat,
    hi: Rat,
}

const GRAIN: i64 = 96;

impl RatSampler {
    pub fn new(cfg: &SampleConfig) -> Self {
        RatSampler {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            lo: cfg.box_lo.clone(),
            hi: cfg.box_hi.clone(),
        }
    }

    pub fn with_seed(cfg: &SampleConfig, salt: u64) -> Self {
        RatSampler {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(salt)),
            lo: cfg.box_lo.clone(),
            hi: cfg.box_hi.clone(),
        }
    }

    /// A rational in the box with denominator dividing 96.
    pub fn rat(&mut self) -> Rat {
        let k = self.rng.gen_range(0..=GRAIN);
        let w = self.hi.clone() - self.lo.clone();
        self.lo.clone() + w * rat_int(k) / rat_int(GRAIN)
    }

    /// A small rational in `[-r, r]`.
    pub fn rat_within(&mut self, r: &Rat) -> Rat {
        let k = self.rng.gen_range(-GRAIN..=GRAIN);
        r.clone() * rat_int(k) / rat_int(GRAIN)
    }

    pub fn point(&mut self, dims: usize) -> Vec<Rat> {
        (0..dims).map(|_| self.rat()).collect()
    }

    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

/// `count` uniform deterministic points of the given dimension.
pub fn sample_points(dims: usize, cfg: &SampleConfig) -> Vec<Vec<Rat>> {
    let mut s = RatSampler::new(cfg);
    (0..cfg.count).map(|_| s.point(dims)).collect()
}

/// Structured near-variety points: for every atom polynomial of the formula
/// and every coordinate, freezes the other coordinates at anchor values,
/// isolates the real roots of the resulting univariate slice, and emits the
/// interval endpoints, midpoints and dyadic offsets as full points.
pub fn structured_slice_points(phi: &PlainFormula, cfg: &SampleConfig, cap: usize) -> Vec<Vec<Rat>> {
    let n = phi.nvars();
    let mut out: Vec<Vec<Rat>> = Vec::new();
    let mut anchors: Vec<Rat> = vec![
        rat_int(0),
        rat_int(1),
        rat_int(-1),
        rat_int(2),
        rat_int(-2),
        Rat::new(1.into(), 2.into()),
        Rat::new((-1).into(), 2.into()),
    ];
    let mut s = RatSampler::with_seed(cfg, 0x5711CE);
    anchors.push(s.rat());
    anchors.push(s.rat());

    let polys: Vec<MPoly> = {
        let mut ps = Vec::new();
        for (_, p) in phi.body.atoms() {
            if p.as_constant().is_none() && !ps.contains(p) {
                ps.push(p.clone());
            }
        }
        ps
    };
    let offsets = [
        rat_int(0),
        Rat::new(1.into(), 64.into()),
        Rat::new((-1).into(), 64.into()),
    ];
    'outer: for p in &polys {
        for v in 0..n {
            if !p.occurs(v) {
                continue;
            }
            for ai in 0..anchors.len() {
                // freeze all other coordinates at a rotating anchor pattern
                let mut base: Vec<Rat> = (0..n)
                    .map(|c| anchors[(ai + c) % anchors.len()].clone())
                    .collect();
                let mut slice = p.clone();
                for c in 0..n {
                    if c != v {
                        slice = slice.subst(c, &MPoly::constant(n, base[c].clone()));
                    }
                }
                // now univariate in v
                if slice.as_constant().is_some() {
                    continue;
                }
                let uni = slice.remap(1, &compress_map(n, v));
                if let Ok(roots) = isolate_real_roots(&uni) {
                    for iv in roots {
                        for probe in [iv.lo.clone(), iv.hi.clone(), iv.midpoint()] {
                            for off in &offsets {
                                base[v] = probe.clone() + off.clone();
                                out.push(base.clone());
                                if out.len() >= cap {
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

// a polynomial in which only one coordinate occurs maps onto a univariate
// space by sending every column to 0
fn compress_map(n: usize, _keep: usize) -> Vec<usize> {
    vec![0; n]
}

/// Generates points of the solution set of a plain formula.
///
/// Per DNF disjunct, equations are solved one coordinate at a time: a
/// coordinate occurring linearly with a nonvanishing (sampled) coefficient
/// is solved exactly; a last remaining coordinate of higher degree is solved
/// through root isolation, taking rational roots exactly and, when
/// `exact_only` is false, tight rational approximations of irrational ones.
/// Inequalities are then checked exactly. The generator can starve on
/// systems without linearly-occurring coordinates.
pub fn sample_solutions(
    phi: &PlainFormula,
    cfg: &SampleConfig,
    want: usize,
    exact_only: bool,
) -> Vec<Vec<Rat>> {
    let n = phi.nvars();
    let disjuncts = phi.body.to_dnf();
    let mut out: Vec<Vec<Rat>> = Vec::new();
    if disjuncts.is_empty() || n == 0 {
        return out;
    }
    let mut s = RatSampler::with_seed(cfg, 0x50111);
    let attempts = want * 10 + 40;
    'outer: for round in 0..attempts {
        let conj = &disjuncts[round % disjuncts.len()];
        let mut assigns: BTreeMap<usize, Rat> = BTreeMap::new();
        let mut eqs: Vec<MPoly> = conj.eqs.iter().filter(|p| !p.is_zero()).cloned().collect();
        // iteratively solve equations
        let mut guard = 0;
        while !eqs.is_empty() {
            guard += 1;
            if guard > 64 {
                continue 'outer;
            }
            // substitute current assignments
            for e in eqs.iter_mut() {
                for (c, v) in &assigns {
                    if e.occurs(*c) {
                        *e = e.subst(*c, &MPoly::constant(n, v.clone()));
                    }
                }
            }
            eqs.retain(|e| {
                !(e.as_constant().map(|c| c.is_zero()).unwrap_or(false))
            });
            if eqs.iter().any(|e| e.as_constant().map(|c| !c.is_zero()).unwrap_or(false)) {
                continue 'outer; // contradictory under these samples
            }
            if eqs.is_empty() {
                break;
            }
            // prefer an equation with a linearly-occurring free coordinate
            let mut progress = false;
            'eqloop: for idx in 0..eqs.len() {
                let e = &eqs[idx];
                let free: Vec<usize> = (0..n)
                    .filter(|c| !assigns.contains_key(c) && e.occurs(*c))
                    .collect();
                if free.is_empty() {
                    continue;
                }
                // linear coordinate: highest index first (solve top jets)
                for &v in free.iter().rev() {
                    if e.degree_in(v) == 1 {
                        // sample the remaining free coordinates of this equation
                        let mut e2 = e.clone();
                        let mut trial: Vec<(usize, Rat)> = Vec::new();
                        for &w in &free {
                            if w != v {
                                let val = s.rat();
                                trial.push((w, val.clone()));
                                e2 = e2.subst(w, &MPoly::constant(n, val));
                            }
                        }
                        let coeff = e2.coeff_of(v, 1);
                        let rest = e2.coeff_of(v, 0);
                        let c = match coeff.as_constant() {
                            Some(c) if !c.is_zero() => c,
                            _ => continue,
                        };
                        let rest = match rest.as_constant() {
                            Some(r) => r,
                            None => continue,
                        };
                        for (w, val) in trial {
                            assigns.insert(w, val);
                        }
                        assigns.insert(v, -rest / c);
                        let e_solved = eqs.remove(idx);
                        let _ = e_solved;
                        progress = true;
                        break 'eqloop;
                    }
                }
                // single free coordinate of higher degree: isolate roots
                if free.len() == 1 {
                    let v = free[0];
                    let uni = e.remap(1, &compress_map(n, v));
                    if uni.is_zero() {
                        eqs.remove(idx);
                        progress = true;
                        break 'eqloop;
                    }
                    if let Ok(roots) = isolate_real_roots(&uni) {
                        if roots.is_empty() {
                            continue 'outer;
                        }
                        let pick = s.pick(roots.len());
                        let iv = &roots[pick];
                        if iv.is_point() {
                            assigns.insert(v, iv.lo.clone());
                        } else if exact_only {
                            continue 'outer;
                        } else {
                            let dense = super::dense_of(&uni);
                            let mut a = crate::algebra::AlgNumber::new(
                                crate::algebra::squarefree_part(&dense),
                                iv.clone(),
                            );
                            let tight = cfg.epsilon.clone() / rat_int(64);
                            a.refine_below(&tight);
                            assigns.insert(v, a.approx(&tight));
                        }
                        eqs.remove(idx);
                        progress = true;
                        break 'eqloop;
                    }
                }
            }
            if !progress {
                // no linear coordinate anywhere: freeze all but one free
                // coordinate of the smallest equation and let the univariate
                // fallback take over next round
                let pick = (0..eqs.len())
                    .filter(|&i| {
                        (0..n).any(|c| !assigns.contains_key(&c) && eqs[i].occurs(c))
                    })
                    .min_by_key(|&i| {
                        (0..n)
                            .filter(|&c| !assigns.contains_key(&c) && eqs[i].occurs(c))
                            .count()
                    });
                match pick {
                    Some(i) => {
                        let free: Vec<usize> = (0..n)
                            .filter(|&c| !assigns.contains_key(&c) && eqs[i].occurs(c))
                            .collect();
                        if free.len() < 2 {
                            continue 'outer;
                        }
                        for &w in &free[..free.len() - 1] {
                            assigns.insert(w, s.rat());
                        }
                    }
                    None => continue 'outer,
                }
            }
        }
        // fill remaining coordinates randomly
        let mut coords: Vec<Rat> = Vec::with_capacity(n);
        for c in 0..n {
            match assigns.get(&c) {
                Some(v) => coords.push(v.clone()),
                None => coords.push(s.rat()),
            }
        }
        // exact disjunct check: equations (binding for exact mode), the
        // inequations and open parts always
        let eq_ok = conj.eqs.iter().all(|p| {
            let v = p.eval(&coords);
            if exact_only {
                v.is_zero()
            } else {
                true
            }
        });
        let other_ok = conj.neqs.iter().all(|p| !p.eval(&coords).is_zero())
            && conj.gts.iter().all(|p| sign_of(&p.eval(&coords)) > 0);
        if eq_ok && other_ok {
            if !out.contains(&coords) {
                out.push(coords);
            }
            if out.len() >= want {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{QfFormula, Rel};

    #[test]
    fn sampling_is_deterministic() {
        let cfg = SampleConfig::default();
        let a = sample_points(3, &cfg);
        let b = sample_points(3, &cfg);
        assert_eq!(a, b);
        let cfg2 = SampleConfig { seed: 7, ..SampleConfig::default() };
        assert_ne!(sample_points(3, &cfg2), a);
    }

    #[test]
    fn solutions_of_parabola_are_exact() {
        // x1 = x0^2 over 2 plain coordinates
        let x0 = MPoly::var(2, 0);
        let x1 = MPoly::var(2, 1);
        let phi = PlainFormula::new(
            2,
            1,
            QfFormula::atom(Rel::Eq, &x1 - &(&x0 * &x0)),
        );
        let pts = sample_solutions(&phi, &SampleConfig::default(), 12, true);
        assert!(pts.len() >= 8, "generator should find many parabola points");
        for p in &pts {
            assert_eq!(p[1], p[0].clone() * p[0].clone());
        }
    }

    #[test]
    fn open_sets_sample_by_rejection() {
        let x0 = MPoly::var(1, 0);
        let phi = PlainFormula::new(1, 1, QfFormula::atom(Rel::Gt, x0));
        let pts = sample_solutions(&phi, &SampleConfig::default(), 20, true);
        assert!(pts.len() >= 10);
        for p in &pts {
            assert!(p[0] > rat_int(0));
        }
    }
}

//! `V_{τ,m}` selection, the single-level `Φ` quotient and the pointwise
//! decomposition probe. These are diagnostics: they measure the ratios whose
//! boundedness the decomposition asserts up to unspecified constants.

use super::dual::{DualCuboid, Mollifier};
use super::extension::{ExtensionEval, GridFunction};
use super::{cap_partition, normal_at, transversality_constant, Cap, ScaleLadder};
use crate::numerics::{dot, pairwise_sum_by};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Distance from `y` to the span of an orthonormal family.
fn dist_to_span(y: &[f64], basis: &[Vec<f64>]) -> f64 {
    let mut r = y.to_vec();
    for b in basis {
        let c = dot(&r, b);
        r.iter_mut().zip(b).for_each(|(x, v)| *x -= c * v);
    }
    dot(&r, &r).sqrt()
}

/// Gram–Schmidt; drops vectors already in the span.
fn orthonormalise(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut r = v.clone();
        for b in &out {
            let c = dot(&r, b);
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = dot(&r, &r).sqrt();
        if n > 1e-10 {
            out.push(r.into_iter().map(|x| x / n).collect());
        }
    }
    out
}

/// Children with `dist(Y(ξ), V) ≤ δ/K_next` for some sampled `ξ` (centre and
/// corners), `δ` the parent side. `v_basis` must be orthonormal.
pub fn v_set_select(parent: &Cap, children: &[Cap], v_basis: &[Vec<f64>], k_next: f64) -> Result<Vec<Cap>> {
    let tol = parent.side() / k_next;
    let mut out = Vec::new();
    for c in children {
        let mut best = f64::INFINITY;
        for p in c.sample_points(2) {
            best = best.min(dist_to_span(&normal_at(&c.phase, &p)?, v_basis));
        }
        if best <= tol {
            out.push(c.clone());
        }
    }
    Ok(out)
}

/// Index tuples (increasing) of `m` caps whose sampled transversality exceeds `theta`.
pub fn transversal_tuples(caps: &[Cap], m: usize, theta: f64) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..m).collect();
    let n = caps.len();
    if m > n {
        return Ok(out);
    }
    loop {
        let tuple: Vec<Cap> = idx.iter().map(|&i| caps[i].clone()).collect();
        if transversality_constant(&tuple, 2)? > theta {
            out.push(idx.clone());
        }
        // next combination
        let mut i = m;
        while i > 0 && idx[i - 1] == n - m + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(out)
}

/// Midpoint rule for convolutions against `ζ_{Kτ'}` in the scaled frame:
/// `nodes` per axis on the box `|y_i| ≤ half_width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaQuadrature {
    pub nodes: usize,
    pub half_width: f64,
}

impl Default for ZetaQuadrature {
    fn default() -> Self {
        ZetaQuadrature { nodes: 8, half_width: 4.0 }
    }
}

/// `(F ∗ ζ_{Kτ'})(p)` with `ζ` truncated to the quadrature box. The kernel is
/// unit mass on `ℝ^d`; the truncation loses the mass reported by
/// [`super::zeta_captured_mass`].
pub fn convolve_with_zeta(f: &(impl Fn(&[f64]) -> f64 + Sync), z: &Mollifier, quad: ZetaQuadrature, p: &[f64]) -> f64 {
    let d = p.len();
    let n = quad.nodes;
    let h = 2.0 * quad.half_width / n as f64;
    let total = n.pow(d as u32);
    let vol = h.powi(d as i32) / z.base_mass;
    pairwise_sum_by(total, &|flat| {
        let mut rem = flat;
        let mut y = vec![0.0; d];
        for yi in y.iter_mut().rev() {
            *yi = -quad.half_width + h * ((rem % n) as f64 + 0.5);
            rem /= n;
        }
        let q = z.unscaled(&y);
        let shifted: Vec<f64> = p.iter().zip(&q).map(|(a, b)| a - b).collect();
        f(&shifted) * (1.0 + dot(&y, &y)).powf(-z.c) * vol
    })
}

/// Everything `Φ_{τ,V_m,τ_{m+1}}` depends on.
#[derive(Debug, Clone)]
pub struct PhiInput<'a> {
    pub parent: &'a Cap,
    pub m: usize,
    /// Orthonormal basis of `V_m`.
    pub v_basis: &'a [Vec<f64>],
    /// A cap at scale `δ/K_{m+1}` inside the parent.
    pub tau_next: &'a Cap,
    pub g: &'a GridFunction,
    pub ladder: &'a ScaleLadder,
    pub c_eps: f64,
    pub quad: ZetaQuadrature,
}

/// Evaluate the `Φ` quotient at each space-time point. `m = 1` gives 1.
pub fn phi_evaluate(inp: &PhiInput<'_>, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let d = inp.parent.dim();
    if inp.m < 1 || inp.m > d - 1 {
        return Err(Error::invalid(format!("m must lie in [1, {}], got {}", d - 1, inp.m)));
    }
    if inp.m == 1 {
        return Ok(vec![1.0; points.len()]);
    }
    if inp.g.is_zero() {
        return Err(Error::invalid("zero data: Φ is 0/0"));
    }
    if inp.ladder.d != d {
        return Err(Error::DimensionMismatch { expected: d, got: inp.ladder.d });
    }
    let m = inp.m;
    let km = inp.ladder.k(m);
    let kn = inp.ladder.k(m + 1);
    let (kids_m, _) = cap_partition(inp.parent, km)?;
    let (kids_n, _) = cap_partition(inp.parent, kn)?;
    if !inp.tau_next.is_inside(inp.parent) || inp.tau_next.denom != kids_n[0].denom {
        return Err(Error::invalid("tau_next must be a cap of the parent at scale δ/K_{m+1}"));
    }
    let v_set = v_set_select(inp.parent, &kids_n, inp.v_basis, kn)?;
    let phase = &inp.parent.phase;

    // T^V_{τ_k} g restricted to the V-caps inside each τ_k
    let tv: Vec<ExtensionEval> = kids_m
        .iter()
        .map(|tk| {
            let members: Vec<&Cap> = v_set.iter().filter(|u| u.is_inside(tk)).collect();
            let mut sub = inp.g.restrict(tk);
            let keep: Vec<bool> = (0..sub.len()).map(|j| members.iter().any(|u| u.contains(sub.node(j)))).collect();
            let mut nodes = Vec::new();
            let mut values = Vec::new();
            for (j, k) in keep.iter().enumerate() {
                if *k {
                    nodes.extend_from_slice(sub.node(j));
                    values.push(sub.values[j]);
                }
            }
            sub.nodes = nodes;
            sub.values = values;
            ExtensionEval::new(phase, &sub)
        })
        .collect();
    let theta = km.powi(-(m as i32));
    let tuples = transversal_tuples(&kids_m, m, theta)?;
    let z_parent = Mollifier::new(DualCuboid::new(inp.parent)?, km, inp.c_eps)?;

    let mut denom_caps: Vec<Cap> = v_set.clone();
    if !denom_caps.iter().any(|c| c.idx == inp.tau_next.idx) {
        denom_caps.push(inp.tau_next.clone());
    }
    let denom_terms: Vec<(ExtensionEval, Mollifier)> = denom_caps
        .iter()
        .map(|u| {
            Ok((ExtensionEval::new(phase, &inp.g.restrict(u)), Mollifier::new(DualCuboid::new(u)?, 1.0, inp.c_eps)?))
        })
        .collect::<Result<_>>()?;
    let next_eval = ExtensionEval::new(phase, &inp.g.restrict(inp.tau_next));
    let next_z = Mollifier::new(DualCuboid::new(inp.tau_next)?, 1.0, inp.c_eps)?;
    let loss = inp.ladder.big_r.powf(-1.0 / inp.ladder.eps) * inp.g.l2_norm();
    let inv_m = 1.0 / m as f64;

    points
        .par_iter()
        .map(|p| {
            if p.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: p.len() });
            }
            let smoothed: Vec<f64> = tv
                .iter()
                .map(|e| {
                    if e.is_empty() {
                        0.0
                    } else {
                        convolve_with_zeta(&|q: &[f64]| e.eval_point(q).norm().powf(inv_m), &z_parent, inp.quad, p)
                    }
                })
                .collect();
            let product = tuples.iter().map(|t| t.iter().map(|&i| smoothed[i]).product::<f64>()).fold(0.0, f64::max);
            let single = convolve_with_zeta(&|q: &[f64]| next_eval.eval_point(q).norm(), &next_z, inp.quad, p);
            let numerator = km.powi(2 * m as i32) * product + single;
            let sq: f64 = denom_terms
                .iter()
                .map(|(e, z)| {
                    if e.is_empty() {
                        0.0
                    } else {
                        convolve_with_zeta(&|q: &[f64]| e.eval_point(q).norm(), z, inp.quad, p).powi(2)
                    }
                })
                .sum();
            Ok(numerator / (sq.sqrt() + loss))
        })
        .collect()
}

/// Summary of a decomposition probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeStats {
    /// `|T_τ g| / RHS` per point (0 when both vanish).
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub transversal_tuples: usize,
}

fn stats(ratios: Vec<f64>, tuples: usize) -> ProbeStats {
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let mean_ratio = if ratios.is_empty() { 0.0 } else { ratios.iter().sum::<f64>() / ratios.len() as f64 };
    ProbeStats { ratios, max_ratio, mean_ratio, transversal_tuples: tuples }
}

/// Pointwise comparison of `|T_τ g|` with the three families of the
/// multilinear decomposition: the `d`-transversal product with weight
/// `K_d^{2d}`, the `V_m` products with weight `K_m^{2m}`, and the single-cap
/// maxima. Transversality threshold at scale `δ/K_m` is `K_m^{−m}`; the planes
/// `V_m` are those spanned by the central normals of each transversal tuple.
pub fn bg_inequality_probe(
    cap: &Cap,
    g: &GridFunction,
    ladder: &ScaleLadder,
    points: &[Vec<f64>],
) -> Result<ProbeStats> {
    let d = cap.dim();
    if !(d == 2 || d == 3) {
        return Err(Error::invalid(format!("the probe supports d = 2 or 3, got {d}")));
    }
    if ladder.d != d {
        return Err(Error::DimensionMismatch { expected: d, got: ladder.d });
    }
    if ladder.k(2) > 8.0 {
        return Err(Error::invalid(format!("K_2 = {} exceeds the probe limit 8", ladder.k(2))));
    }
    let phase = &cap.phase;
    let whole = ExtensionEval::new(phase, g);

    // scale levels m = 2..=d
    let levels: Vec<(Vec<Cap>, Vec<ExtensionEval>)> = (2..=d)
        .map(|m| {
            let (kids, _) = cap_partition(cap, ladder.k(m))?;
            let evals = kids.iter().map(|c| ExtensionEval::new(phase, &g.restrict(c))).collect();
            Ok((kids, evals))
        })
        .collect::<Result<_>>()?;
    let top = d - 2;
    let kd = ladder.k(d);
    let top_tuples = transversal_tuples(&levels[top].0, d, kd.powi(-(d as i32)))?;
    let mut tuple_count = top_tuples.len();

    // lower-dimensional families: for m = 2..d−1 each transversal m-tuple at
    // scale δ/K_m defines V_m; T^V sums the V-selected caps at scale δ/K_{m+1}
    struct LowFamily {
        weight: f64,
        m: usize,
        factors: Vec<Vec<ExtensionEval>>,
    }
    let mut low = Vec::new();
    for m in 2..d {
        let (kids, _) = &levels[m - 2];
        let (finer, _) = &levels[m - 1];
        let km = ladder.k(m);
        let tuples = transversal_tuples(kids, m, km.powi(-(m as i32)))?;
        tuple_count += tuples.len();
        let mut factors = Vec::new();
        for t in &tuples {
            let normals: Vec<Vec<f64>> = t.iter().map(|&i| kids[i].central_normal()).collect();
            let basis = orthonormalise(&normals);
            let v_set = v_set_select(cap, finer, &basis, ladder.k(m + 1))?;
            let per: Vec<ExtensionEval> = t
                .iter()
                .map(|&i| {
                    let mut sub = g.restrict(&kids[i]);
                    let members: Vec<&Cap> = v_set.iter().filter(|u| u.is_inside(&kids[i])).collect();
                    let keep: Vec<usize> =
                        (0..sub.len()).filter(|&j| members.iter().any(|u| u.contains(sub.node(j)))).collect();
                    sub.nodes = keep.iter().flat_map(|&j| sub.node(j).to_vec()).collect();
                    sub.values = keep.iter().map(|&j| sub.values[j]).collect();
                    ExtensionEval::new(phase, &sub)
                })
                .collect();
            factors.push(per);
        }
        low.push(LowFamily { weight: km.powi(2 * m as i32), m, factors });
    }

    let ratios: Vec<f64> = points
        .par_iter()
        .map(|p| {
            let lhs = whole.eval_point(p).norm();
            let mags: Vec<Vec<f64>> =
                levels.iter().map(|(_, ev)| ev.iter().map(|e| e.eval_point(p).norm()).collect()).collect();
            let inv_d = 1.0 / d as f64;
            let top_term = top_tuples
                .iter()
                .map(|t| t.iter().map(|&i| mags[top][i].powf(inv_d)).product::<f64>())
                .fold(0.0, f64::max);
            let mut rhs = kd.powi(2 * d as i32) * top_term;
            for fam in &low {
                let inv_m = 1.0 / fam.m as f64;
                let best = fam
                    .factors
                    .iter()
                    .map(|fs| fs.iter().map(|e| e.eval_point(p).norm().powf(inv_m)).product::<f64>())
                    .fold(0.0, f64::max);
                rhs += fam.weight * best;
            }
            for level in &mags {
                rhs += level.iter().copied().fold(0.0, f64::max);
            }
            if rhs == 0.0 {
                0.0
            } else {
                lhs / rhs
            }
        })
        .collect();
    Ok(stats(ratios, tuple_count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::{Phase, ScaleLadder};
    use crate::numerics::rng;
    use crate::C64;
    use rand::Rng;

    fn points(d: usize, n: usize, half: f64, seed: u64) -> Vec<Vec<f64>> {
        let mut r = rng(seed);
        (0..n).map(|_| (0..d).map(|_| r.random_range(-half..half)).collect()).collect()
    }

    #[test]
    fn full_space_selects_everything() {
        let cap = Cap::new(Phase::paraboloid(), &[0.0, 0.0], 0.4).unwrap();
        let (kids, _) = cap_partition(&cap, 4.0).unwrap();
        let all = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert_eq!(v_set_select(&cap, &kids, &all, 4.0).unwrap().len(), kids.len());
    }

    #[test]
    fn vertical_line_selects_near_centre() {
        let cap = Cap::new(Phase::paraboloid(), &[0.0, 0.0], 0.01).unwrap();
        let (kids, _) = cap_partition(&cap, 5.0).unwrap();
        let ed = vec![vec![0.0, 0.0, 1.0]];
        let sel = v_set_select(&cap, &kids, &ed, 5.0).unwrap();
        // distance ≈ 2|ξ| ≤ δ/5 = 0.002 holds only for the central child
        assert_eq!(sel.len(), 1);
        assert!(sel[0].center().iter().all(|c| c.abs() < 1e-12));
        let e1 = vec![vec![1.0, 0.0, 0.0]];
        assert!(v_set_select(&cap, &kids, &e1, 5.0).unwrap().is_empty());
    }

    #[test]
    fn enlarging_v_keeps_selection() {
        let cap = Cap::new(Phase::sphere(), &[0.1, 0.0], 0.3).unwrap();
        let (kids, _) = cap_partition(&cap, 4.0).unwrap();
        let small = vec![vec![0.0, 0.0, 1.0]];
        let big = vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]];
        let a = v_set_select(&cap, &kids, &small, 4.0).unwrap();
        let b = v_set_select(&cap, &kids, &big, 4.0).unwrap();
        assert!(a.iter().all(|c| b.contains(c)));
        assert!(b.len() >= a.len());
    }

    fn ladder3() -> ScaleLadder {
        ScaleLadder::with_scales(1e3, 0.05, 3, vec![2.0, 4.0, 8.0]).unwrap()
    }

    #[test]
    fn phi_base_case_and_zero_data() {
        let cap = Cap::new(Phase::paraboloid(), &[0.0, 0.0], 0.4).unwrap();
        let (kids, _) = cap_partition(&cap, 4.0).unwrap();
        let l = ladder3();
        let zero = GridFunction::tensor(&cap, 8, |_| C64::new(0.0, 0.0)).unwrap();
        let v = vec![vec![0.0, 0.0, 1.0]];
        let mut inp = PhiInput {
            parent: &cap,
            m: 1,
            v_basis: &v,
            tau_next: &kids[0],
            g: &zero,
            ladder: &l,
            c_eps: 3.0,
            quad: ZetaQuadrature::default(),
        };
        assert_eq!(phi_evaluate(&inp, &[vec![0.0; 3]]).unwrap(), vec![1.0]);
        inp.m = 2;
        assert!(phi_evaluate(&inp, &[vec![0.0; 3]]).is_err());
        inp.m = 3;
        assert!(phi_evaluate(&inp, &[vec![0.0; 3]]).is_err());
    }

    #[test]
    fn phi_single_cap_data_is_bounded() {
        let cap = Cap::new(Phase::paraboloid(), &[0.0, 0.0], 0.4).unwrap();
        let l = ladder3();
        let (kids, _) = cap_partition(&cap, 4.0).unwrap();
        let target = kids[5].clone();
        let g =
            GridFunction::tensor(&cap, 8, |p| if target.contains(p) { C64::new(1.0, 0.5) } else { C64::new(0.0, 0.0) })
                .unwrap();
        let v = vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]];
        let inp = PhiInput {
            parent: &cap,
            m: 2,
            v_basis: &v,
            tau_next: &target,
            g: &g,
            ladder: &l,
            c_eps: 3.0,
            quad: ZetaQuadrature { nodes: 6, half_width: 3.0 },
        };
        let vals = phi_evaluate(&inp, &points(3, 4, 20.0, 1)).unwrap();
        assert!(vals.iter().all(|v| *v > 0.0 && *v <= 2.0), "{vals:?}");
    }

    #[test]
    fn probe_self_majorisation() {
        let cap = Cap::new(Phase::paraboloid(), &[0.0], 0.8).unwrap();
        let l = ScaleLadder::with_scales(1e3, 0.1, 2, vec![4.0, 8.0]).unwrap();
        let (kids, _) = cap_partition(&cap, 4.0).unwrap();
        let g = GridFunction::tensor(&cap, 64, |p| {
            if kids[1].contains(p) {
                C64::new(1.0 + p[0], -p[0])
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let s = bg_inequality_probe(&cap, &g, &l, &points(2, 50, 40.0, 2)).unwrap();
        assert!(s.max_ratio <= 1.0 + 1e-12, "{}", s.max_ratio);

        let zero = GridFunction::tensor(&cap, 16, |_| C64::new(0.0, 0.0)).unwrap();
        let z = bg_inequality_probe(&cap, &zero, &l, &points(2, 5, 10.0, 3)).unwrap();
        assert_eq!(z.max_ratio, 0.0);
    }

    #[test]
    fn probe_random_data_is_finite() {
        let cap = Cap::new(Phase::paraboloid(), &[0.0, 0.0], 0.5).unwrap();
        let mut r = rng(5);
        let vals: Vec<C64> = (0..256).map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
        let mut g = GridFunction::tensor(&cap, 16, |_| C64::new(0.0, 0.0)).unwrap();
        g.values = vals;
        let s = bg_inequality_probe(&cap, &g, &ladder3(), &points(3, 20, 30.0, 4)).unwrap();
        assert!(s.max_ratio.is_finite() && s.max_ratio > 0.0);
        assert!(s.transversal_tuples > 0);
    }
}

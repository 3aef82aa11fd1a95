//! Caps on the paraboloid and sphere, their normals, rescalings, partitions
//! and the scale ladder of the multilinear decomposition.

mod dual;
mod extension;
mod phi;
mod reproducing;

pub use dual::{mollifier_mass, mollifier_zeta, rotation_to_last_axis, zeta_captured_mass, DualCuboid, Mollifier};
pub use extension::{
    dual_cuboid_oscillation, extension_operator, ExtensionEval, GridFunction, OscillationReport, OSCILLATION_FACTOR,
};
pub use phi::{
    bg_inequality_probe, convolve_with_zeta, phi_evaluate, transversal_tuples, v_set_select, PhiInput, ProbeStats,
    ZetaQuadrature,
};
pub use reproducing::{modulated_bump, reproducing_inequality_check, BandLimited, ReproducingKernel, LEAKAGE_LIMIT};

use crate::numerics::{dot, norm};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Graph domain radius: every phase is evaluated on `|ξ| ≤ 1/2`.
pub const DOMAIN_RADIUS: f64 = 0.5;
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseKind {
    /// `φ(ξ) = −|ξ|²`
    Paraboloid,
    /// `φ(ξ) = √(1−|ξ|²) − 1`
    Sphere,
}

/// A base phase followed by zero or more rescalings `S_{ξ₀,δ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub kind: PhaseKind,
    /// Applied in order, innermost first.
    pub rescalings: Vec<(Vec<f64>, f64)>,
}

impl Phase {
    pub fn new(kind: PhaseKind) -> Self {
        Phase { kind, rescalings: Vec::new() }
    }

    pub fn paraboloid() -> Self {
        Phase::new(PhaseKind::Paraboloid)
    }

    pub fn sphere() -> Self {
        Phase::new(PhaseKind::Sphere)
    }

    fn base(&self, xi: &[f64]) -> (f64, Vec<f64>) {
        match self.kind {
            PhaseKind::Paraboloid => (-dot(xi, xi), xi.iter().map(|x| -2.0 * x).collect()),
            PhaseKind::Sphere => {
                let s = (1.0 - dot(xi, xi)).sqrt();
                (s - 1.0, xi.iter().map(|x| -x / s).collect())
            }
        }
    }

    /// Taylor remainder `φ(x+h) − φ(x) − ∇φ(x)·h` and gradient difference
    /// `∇φ(x+h) − ∇φ(x)` of the base phase, in forms free of cancellation.
    fn base_remainder(&self, x: &[f64], h: &[f64]) -> (f64, Vec<f64>) {
        match self.kind {
            PhaseKind::Paraboloid => (-dot(h, h), h.iter().map(|v| -2.0 * v).collect()),
            PhaseKind::Sphere => {
                let xh = dot(x, h);
                let hh = dot(h, h);
                let sa = (1.0 - dot(x, x)).sqrt();
                let y: Vec<f64> = x.iter().zip(h).map(|(a, b)| a + b).collect();
                let sb = (1.0 - dot(&y, &y)).sqrt();
                // b − a where a = sa², b = sb²
                let diff = -2.0 * xh - hh;
                let sum = sa + sb;
                let value = -hh / sum + xh * diff / (sa * sum * sum);
                let db = diff / (sum * sa * sb);
                let grad = h.iter().zip(x).map(|(hv, xv)| -hv / sb + xv * db).collect();
                (value, grad)
            }
        }
    }

    /// `φ(ξ)` and `∇φ(ξ)` (no domain check).
    ///
    /// The remainder of the rescaled phase at level `L` satisfies
    /// `R_L(x; h) = δ^{−2}R_{L−1}(ξ₀ + δx; δh)`, so the whole chain reduces to
    /// one base remainder and the `δ^{−2}` factors never meet a cancellation.
    pub fn value_and_grad(&self, xi: &[f64]) -> (f64, Vec<f64>) {
        let Some((xi0, delta)) = self.rescalings.last() else {
            return self.base(xi);
        };
        let mut x = xi0.clone();
        let mut h: Vec<f64> = xi.iter().map(|v| delta * v).collect();
        let (mut sv, mut sg) = (delta.powi(-2), 1.0 / delta);
        for (c, dl) in self.rescalings.iter().rev().skip(1) {
            x = c.iter().zip(&x).map(|(a, b)| a + dl * b).collect();
            h.iter_mut().for_each(|v| *v *= dl);
            sv /= dl * dl;
            sg /= dl;
        }
        let (r, g) = self.base_remainder(&x, &h);
        (sv * r, g.into_iter().map(|v| sg * v).collect())
    }

    pub fn value(&self, xi: &[f64]) -> f64 {
        self.value_and_grad(xi).0
    }
}

fn check_domain(xi: &[f64]) -> Result<()> {
    if norm(xi) > DOMAIN_RADIUS + DOMAIN_SLACK {
        return Err(Error::invalid(format!("|ξ| = {} lies outside the domain |ξ| ≤ 1/2", norm(xi))));
    }
    Ok(())
}

/// `S_{ξ₀,δ}φ(ξ) = δ^{−2}(φ(ξ₀+δξ) − δ∇φ(ξ₀)·ξ − φ(ξ₀))`.
pub fn rescale_phase(phase: &Phase, xi0: &[f64], delta: f64) -> Result<Phase> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0,1], got {delta}")));
    }
    if let Some((prev, _)) = phase.rescalings.first() {
        if prev.len() != xi0.len() {
            return Err(Error::DimensionMismatch { expected: prev.len(), got: xi0.len() });
        }
    }
    if phase.kind == PhaseKind::Sphere && norm(xi0) > DOMAIN_RADIUS - delta / 2.0 + DOMAIN_SLACK {
        return Err(Error::invalid(format!(
            "sphere rescaling needs |ξ₀| ≤ 1/2 − δ/2, got |ξ₀| = {} with δ = {delta}",
            norm(xi0)
        )));
    }
    let mut out = phase.clone();
    out.rescalings.push((xi0.to_vec(), delta));
    Ok(out)
}

/// Unit normal `(−∇φ, 1)/|(−∇φ, 1)|` to the graph at `ξ`.
pub fn normal_at(phase: &Phase, xi: &[f64]) -> Result<Vec<f64>> {
    check_domain(xi)?;
    let (_, g) = phase.value_and_grad(xi);
    let mut n: Vec<f64> = g.iter().map(|x| -x).collect();
    n.push(1.0);
    let r = norm(&n);
    n.iter_mut().for_each(|x| *x /= r);
    Ok(n)
}

/// `|v₁ ∧ … ∧ v_m| = √det(G)` with `G` the Gram matrix.
pub fn gram_wedge(vectors: &[Vec<f64>]) -> f64 {
    let m = vectors.len();
    if m == 0 {
        return 1.0;
    }
    let g = DMatrix::from_fn(m, m, |i, j| dot(&vectors[i], &vectors[j]));
    g.determinant().max(0.0).sqrt()
}

/// `|det N|` for `d` vectors in `ℝ^d`.
pub fn determinant_wedge(vectors: &[Vec<f64>]) -> Result<f64> {
    let d = vectors.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: v.len() });
    }
    Ok(DMatrix::from_fn(d, d, |i, j| vectors[i][j]).determinant().abs())
}

/// Cap over a cube `Q` that sits in a dyadic-style grid: `Q = root_lo +
/// root_side·[idx/denom, (idx+1)/denom]`, so tilings are checked exactly in
/// integer arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub phase: Phase,
    pub root_lo: Vec<f64>,
    pub root_side: f64,
    pub denom: u64,
    pub idx: Vec<u64>,
}

impl Cap {
    /// Cap over `ξ₀ + [−δ/2, δ/2]^{d−1}`; the cube must lie in `|ξ| ≤ 1/2`.
    pub fn new(phase: Phase, center: &[f64], delta: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::invalid("cap centre needs at least one coordinate"));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::invalid(format!("cap side must lie in (0,1], got {delta}")));
        }
        let cap = Cap {
            phase,
            root_lo: center.iter().map(|c| c - delta / 2.0).collect(),
            root_side: delta,
            denom: 1,
            idx: vec![0; center.len()],
        };
        let far = cap.corners().into_iter().map(|c| norm(&c)).fold(0.0, f64::max);
        if far > DOMAIN_RADIUS + DOMAIN_SLACK {
            return Err(Error::invalid(format!("cube reaches |ξ| = {far} outside the domain |ξ| ≤ 1/2")));
        }
        Ok(cap)
    }

    /// Ambient dimension `d` (the cube lives in `ℝ^{d−1}`).
    pub fn dim(&self) -> usize {
        self.root_lo.len() + 1
    }

    pub fn side(&self) -> f64 {
        self.root_side / self.denom as f64
    }

    pub fn lo(&self) -> Vec<f64> {
        let s = self.side();
        self.root_lo.iter().zip(&self.idx).map(|(l, &i)| l + s * i as f64).collect()
    }

    pub fn center(&self) -> Vec<f64> {
        let s = self.side();
        self.root_lo.iter().zip(&self.idx).map(|(l, &i)| l + s * (i as f64 + 0.5)).collect()
    }

    pub fn corners(&self) -> Vec<Vec<f64>> {
        let lo = self.lo();
        let s = self.side();
        let k = lo.len();
        (0..1usize << k)
            .map(|mask| lo.iter().enumerate().map(|(i, l)| if mask >> i & 1 == 1 { l + s } else { *l }).collect())
            .collect()
    }

    /// Centre followed by the corners.
    pub fn sample_points(&self, samples: usize) -> Vec<Vec<f64>> {
        let mut pts = vec![self.center()];
        if samples > 1 {
            pts.extend(self.corners());
        }
        pts
    }

    pub fn contains(&self, xi: &[f64]) -> bool {
        let lo = self.lo();
        let s = self.side();
        xi.iter().zip(&lo).all(|(x, l)| *x >= l - 1e-14 && *x <= l + s + 1e-14)
    }

    /// Central normal `Y_τ`.
    pub fn central_normal(&self) -> Vec<f64> {
        normal_at(&self.phase, &self.center()).expect("cube lies in the domain")
    }

    /// True when `self` is contained in `parent` (same root grid).
    pub fn is_inside(&self, parent: &Cap) -> bool {
        self.root_lo == parent.root_lo
            && self.root_side == parent.root_side
            && self.denom.is_multiple_of(parent.denom)
            && {
                let k = self.denom / parent.denom;
                self.idx.iter().zip(&parent.idx).all(|(&c, &p)| c / k == p)
            }
    }
}

/// Split a cap into `k^{d−1}` children of side `δ/k`, `k = round(K)`.
/// Returns the children and the integer `k` actually used.
pub fn cap_partition(cap: &Cap, big_k: f64) -> Result<(Vec<Cap>, u64)> {
    if !(big_k >= 1.0 && big_k.is_finite()) {
        return Err(Error::invalid(format!("partition factor must be ≥ 1, got {big_k}")));
    }
    let k = big_k.round().max(1.0) as u64;
    let dims = cap.idx.len();
    let total = k.checked_pow(dims as u32).ok_or_else(|| Error::BudgetExceeded("too many children".into()))?;
    let mut out = Vec::with_capacity(total as usize);
    for flat in 0..total {
        let mut rem = flat;
        let mut idx = vec![0; dims];
        // last coordinate varies fastest
        for i in (0..dims).rev() {
            idx[i] = cap.idx[i] * k + rem % k;
            rem /= k;
        }
        out.push(Cap {
            phase: cap.phase.clone(),
            root_lo: cap.root_lo.clone(),
            root_side: cap.root_side,
            denom: cap.denom * k,
            idx,
        });
    }
    Ok((out, k))
}

/// Minimum of `|Y(ξ₁) ∧ … ∧ Y(ξ_m)|` over centre/corner samples of each cube.
pub fn transversality_constant(caps: &[Cap], samples_per_cap: usize) -> Result<f64> {
    let m = caps.len();
    let d = caps.first().map_or(0, Cap::dim);
    if m < 2 || m > d {
        return Err(Error::invalid(format!("need 2 ≤ m ≤ d caps, got m = {m}, d = {d}")));
    }
    let normals: Vec<Vec<Vec<f64>>> = caps
        .iter()
        .map(|c| c.sample_points(samples_per_cap).iter().map(|p| normal_at(&c.phase, p)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut best = f64::INFINITY;
    let mut choice = vec![0usize; m];
    loop {
        let vs: Vec<Vec<f64>> = choice.iter().zip(&normals).map(|(&i, ns)| ns[i].clone()).collect();
        best = best.min(gram_wedge(&vs));
        let mut k = 0;
        while k < m {
            choice[k] += 1;
            if choice[k] < normals[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == m {
            break;
        }
    }
    Ok(best)
}

/// Multilinear constant model `𝔠(θ) = θ^{−2d}`, in logs: `log 𝔠(θ)`.
pub fn log_multilinear_constant(d: usize, log_theta: f64) -> f64 {
    -2.0 * d as f64 * log_theta
}

/// One chain condition `K_m^{8m} 𝔠(K_m^{−m}) ≤ K_{m+1}^ε`, kept in logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub m: usize,
    pub log_lhs: f64,
    pub log_rhs: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleLadder {
    pub big_r: f64,
    pub eps: f64,
    pub d: usize,
    /// `K_m` for `m = 2..=d+1`.
    pub scales: Vec<f64>,
    /// `ln K_m`; kept separately because `K_m` itself rounds to 1 for small `ε`.
    pub log_scales: Vec<f64>,
    pub chain: Vec<ChainLink>,
    /// Whether `0 < ε < 1/(4d)`.
    pub eps_in_range: bool,
}

impl ScaleLadder {
    /// `K_m`, `2 ≤ m ≤ d+1`.
    pub fn k(&self, m: usize) -> f64 {
        self.scales[m - 2]
    }

    pub fn log_k(&self, m: usize) -> f64 {
        self.log_scales[m - 2]
    }

    /// Ladder with hand-picked scales, for desk-scale diagnostics where the
    /// `R^{ε^{2(d+2−m)}}` rule would give scales indistinguishable from 1.
    pub fn with_scales(big_r: f64, eps: f64, d: usize, scales: Vec<f64>) -> Result<Self> {
        if scales.len() != d {
            return Err(Error::invalid(format!("ladder needs d = {d} scales K_2..K_{{d+1}}, got {}", scales.len())));
        }
        if scales.windows(2).any(|w| w[1] < w[0]) || scales.iter().any(|k| *k < 1.0) {
            return Err(Error::invalid("scales must be ≥ 1 and nondecreasing"));
        }
        let log_scales: Vec<f64> = scales.iter().map(|k| k.ln()).collect();
        let chain = chain_links(d, eps, &log_scales);
        Ok(ScaleLadder { big_r, eps, d, scales, log_scales, chain, eps_in_range: eps_in_range(eps, d) })
    }

    pub fn all_links_ok(&self) -> bool {
        self.chain.iter().all(|c| c.ok)
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.log_scales.windows(2).all(|w| w[0] < w[1])
    }
}

fn chain_links(d: usize, eps: f64, log_scales: &[f64]) -> Vec<ChainLink> {
    (2..=d)
        .map(|m| {
            let lk = log_scales[m - 2];
            let log_lhs = 8.0 * m as f64 * lk + log_multilinear_constant(d, -(m as f64) * lk);
            let log_rhs = eps * log_scales[m - 1];
            ChainLink { m, log_lhs, log_rhs, ok: log_lhs <= log_rhs }
        })
        .collect()
}

fn eps_in_range(eps: f64, d: usize) -> bool {
    eps > 0.0 && eps < 1.0 / (4.0 * d as f64)
}

/// `K_m = R^{ε^{2(d+2−m)}}` for `m = 2..=d+1`, with every chain condition
/// evaluated and reported. `ε ≥ 1/(4d)` is accepted and flagged.
pub fn build_scale_ladder(big_r: f64, eps: f64, d: usize) -> Result<ScaleLadder> {
    if !(big_r > 1.0 && big_r.is_finite()) {
        return Err(Error::invalid(format!("R must exceed 1, got {big_r}")));
    }
    if d < 2 {
        return Err(Error::invalid(format!("d must be ≥ 2, got {d}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    let log_scales: Vec<f64> = (2..=d + 1).map(|m| eps.powi(2 * (d + 2 - m) as i32) * big_r.ln()).collect();
    let scales: Vec<f64> = log_scales.iter().map(|l| l.exp()).collect();
    let chain = chain_links(d, eps, &log_scales);
    Ok(ScaleLadder { big_r, eps, d, scales, log_scales, chain, eps_in_range: eps_in_range(eps, d) })
}

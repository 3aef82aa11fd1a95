//! Extension operator `T_τ g(x,t) = ∫_Q g(ξ) e^{i(x·ξ + tφ(ξ))} dξ` by tensor
//! midpoint quadrature.

use super::{Cap, DualCuboid, Phase};
use crate::numerics::{dot, pairwise_sum_complex_by};
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

/// Samples of `g` at the cell midpoints of a tensor grid over a cube.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    /// Dimension of the frequency cube (`d − 1`).
    pub k: usize,
    /// Flattened node coordinates.
    pub nodes: Vec<f64>,
    pub values: Vec<C64>,
    /// Volume of one cell.
    pub cell: f64,
}

impl GridFunction {
    /// `n` midpoints per axis over the cap's cube.
    pub fn tensor(cap: &Cap, n: usize, f: impl Fn(&[f64]) -> C64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("need ≥ 2 nodes per axis, got {n}")));
        }
        let k = cap.dim() - 1;
        let lo = cap.lo();
        let h = cap.side() / n as f64;
        let total = n.checked_pow(k as u32).ok_or_else(|| Error::BudgetExceeded("grid too large".into()))?;
        let mut nodes = Vec::with_capacity(total * k);
        let mut values = Vec::with_capacity(total);
        let mut p = vec![0.0; k];
        for flat in 0..total {
            let mut rem = flat;
            for i in (0..k).rev() {
                p[i] = lo[i] + h * ((rem % n) as f64 + 0.5);
                rem /= n;
            }
            nodes.extend_from_slice(&p);
            values.push(f(&p));
        }
        Ok(GridFunction { k, nodes, values, cell: h.powi(k as i32) })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn node(&self, j: usize) -> &[f64] {
        &self.nodes[j * self.k..(j + 1) * self.k]
    }

    /// The nodes lying in `cap`'s cube (for sub-caps of the original cube).
    pub fn restrict(&self, cap: &Cap) -> GridFunction {
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for j in 0..self.len() {
            if cap.contains(self.node(j)) {
                nodes.extend_from_slice(self.node(j));
                values.push(self.values[j]);
            }
        }
        GridFunction { k: self.k, nodes, values, cell: self.cell }
    }

    /// `‖g‖_{L²}` by the same quadrature.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == C64::new(0.0, 0.0))
    }

    /// `g·e^{−ia·ξ}`.
    pub fn modulate(&self, a: &[f64]) -> GridFunction {
        let mut out = self.clone();
        for j in 0..self.len() {
            out.values[j] *= C64::from_polar(1.0, -dot(a, self.node(j)));
        }
        out
    }
}

/// Precomputed `g_j·cell` and `φ(ξ_j)` for repeated evaluation.
#[derive(Debug, Clone)]
pub struct ExtensionEval {
    k: usize,
    nodes: Vec<f64>,
    weights: Vec<C64>,
    phases: Vec<f64>,
}

impl ExtensionEval {
    pub fn new(phase: &Phase, g: &GridFunction) -> Self {
        let phases = (0..g.len()).map(|j| phase.value(g.node(j))).collect();
        let weights = g.values.iter().map(|v| v * g.cell).collect();
        ExtensionEval { k: g.k, nodes: g.nodes.clone(), weights, phases }
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `T g(x, t)`.
    pub fn eval(&self, x: &[f64], t: f64) -> C64 {
        let k = self.k;
        pairwise_sum_complex_by(self.weights.len(), &|j| {
            let xi = &self.nodes[j * k..(j + 1) * k];
            self.weights[j] * C64::from_polar(1.0, dot(x, xi) + t * self.phases[j])
        })
    }

    /// `T g` at a space-time point `p = (x, t) ∈ ℝ^d`.
    pub fn eval_point(&self, p: &[f64]) -> C64 {
        self.eval(&p[..self.k], p[self.k])
    }
}

/// `T_τ g(x, t)`.
pub fn extension_operator(cap: &Cap, g: &GridFunction, x: &[f64], t: f64) -> Result<C64> {
    if g.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    if x.len() != g.k || g.k + 1 != cap.dim() {
        return Err(Error::DimensionMismatch { expected: cap.dim() - 1, got: x.len() });
    }
    Ok(ExtensionEval::new(&cap.phase, g).eval(x, t))
}

/// Working threshold for "essentially constant on a dual-cuboid translate".
pub const OSCILLATION_FACTOR: f64 = 4.0;

/// `max/min` of `|T_τ g|` over each sampled dual-cuboid translate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    /// One ratio per translate; `inf` where `|T_τ g|` vanishes at a sample.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// Translates whose ratio exceeds [`OSCILLATION_FACTOR`].
    pub violations: usize,
}

/// Samples `|T_τ g|` on a `samples^d` grid filling each translate
/// `p₀ + Λ_τᵀ∏[−dims/2, dims/2]` of the dual cuboid and reports the spread.
pub fn dual_cuboid_oscillation(
    cap: &Cap,
    g: &GridFunction,
    centers: &[Vec<f64>],
    samples: usize,
) -> Result<OscillationReport> {
    if samples < 2 {
        return Err(Error::invalid("need at least 2 samples per axis"));
    }
    if g.is_empty() || g.k + 1 != cap.dim() {
        return Err(Error::DimensionMismatch { expected: cap.dim() - 1, got: g.k });
    }
    let d = cap.dim();
    if let Some(c) = centers.iter().find(|c| c.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: c.len() });
    }
    let dual = DualCuboid::new(cap)?;
    let eval = ExtensionEval::new(&cap.phase, g);
    let total = samples.pow(d as u32);
    let ratios: Vec<f64> = centers
        .iter()
        .map(|p0| {
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for flat in 0..total {
                let mut rem = flat;
                let q: Vec<f64> = dual
                    .dims
                    .iter()
                    .map(|len| {
                        let i = rem % samples;
                        rem /= samples;
                        len * (i as f64 / (samples - 1) as f64 - 0.5)
                    })
                    .collect();
                let p: Vec<f64> = dual.from_frame(&q).iter().zip(p0).map(|(a, b)| a + b).collect();
                let v = eval.eval_point(&p).norm();
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if lo > 0.0 {
                hi / lo
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let violations = ratios.iter().filter(|r| **r > OSCILLATION_FACTOR).count();
    Ok(OscillationReport { ratios, max_ratio, violations })
}

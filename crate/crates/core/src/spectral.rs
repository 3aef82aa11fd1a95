//! Fourier transforms of discrete measures on spherical shells.
//!
//! Convention: `μ̂(ξ) = Σ_j w_j e^{−iξ·x_j}` with no 2π normalisation. Decay
//! exponents do not depend on the normalisation; absolute `σ(R)` values do.

use crate::measure::DiscreteMeasure;
use crate::numerics::{self, dot, fit_line, pairwise_sum, pairwise_sum_complex_by, sphere_area};
use crate::{Error, Result, C64};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::Range;

/// Number of node subsets used for the Monte Carlo jackknife.
pub const JACKKNIFE_BLOCKS: usize = 10;

/// Fits reject windows whose relative jackknife spread exceeds this.
pub const MAX_JACKKNIFE_SPREAD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureScheme {
    EqualAngle,
    Spiral,
    MonteCarlo,
}

impl QuadratureScheme {
    pub fn for_dim(d: usize) -> Self {
        match d {
            2 => QuadratureScheme::EqualAngle,
            3 => QuadratureScheme::Spiral,
            _ => QuadratureScheme::MonteCarlo,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            QuadratureScheme::EqualAngle => "equal-angle",
            QuadratureScheme::Spiral => "spiral",
            QuadratureScheme::MonteCarlo => "monte-carlo",
        }
    }
}

/// Unit vectors on `S^{d−1}`, flattened: equal angles (`d = 2`), Fibonacci
/// spiral (`d = 3`) or normalised Gaussians from `seed` (`d ≥ 4`).
pub fn sphere_nodes(d: usize, n: usize, seed: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n * d);
    match d {
        2 => {
            for k in 0..n {
                let (s, c) = (2.0 * PI * k as f64 / n as f64).sin_cos();
                out.extend([c, s]);
            }
        }
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            for k in 0..n {
                let z = 1.0 - (2 * k + 1) as f64 / n as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let (s, c) = (golden * k as f64).sin_cos();
                out.extend([r * c, r * s, z]);
            }
        }
        _ => {
            let mut rng = numerics::rng(seed);
            while out.len() < n * d {
                let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                let r = numerics::norm(&v);
                if r > 1e-12 {
                    out.extend(v.iter().map(|x| x / r));
                }
            }
        }
    }
    out
}

/// Quadrature rule on the unit sphere whose weights sum to `|S^{d−1}|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereQuadrature {
    pub d: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    pub scheme: QuadratureScheme,
    pub seed: Option<u64>,
}

impl SphereQuadrature {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, q: usize) -> &[f64] {
        &self.nodes[q * self.d..(q + 1) * self.d]
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.nodes.chunks(self.d)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_sum(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// `∫_{S^{d−1}} f dσ` by the rule.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
        let vals: Vec<f64> = (0..self.len()).into_par_iter().map(|q| self.weights[q] * f(self.node(q))).collect();
        pairwise_sum(&vals)
    }

    pub fn tag(&self) -> String {
        match self.seed {
            Some(s) if self.scheme == QuadratureScheme::MonteCarlo => {
                format!("{}:n={}:seed={s}", self.scheme.tag(), self.len())
            }
            _ => format!("{}:n={}", self.scheme.tag(), self.len()),
        }
    }
}

/// Equal-angle trapezoid (`d = 2`), spiral (`d = 3`) or Monte Carlo (`d ≥ 4`)
/// rule with `n` nodes of equal weight `|S^{d−1}|/n`.
pub fn build_sphere_quadrature(d: usize, n: usize, seed: u64) -> Result<SphereQuadrature> {
    if d < 2 {
        return Err(Error::invalid("sphere quadrature needs d ≥ 2"));
    }
    if n < 2 {
        return Err(Error::invalid("sphere quadrature needs at least two nodes"));
    }
    let scheme = QuadratureScheme::for_dim(d);
    Ok(SphereQuadrature {
        d,
        nodes: sphere_nodes(d, n, seed),
        weights: vec![sphere_area(d) / n as f64; n],
        scheme,
        seed: (scheme == QuadratureScheme::MonteCarlo).then_some(seed),
    })
}

/// `μ̂(ξ) = Σ_j w_j e^{−iξ·x_j}`.
pub fn fourier_transform_measure(mu: &DiscreteMeasure, xi: &[f64]) -> Result<C64> {
    if xi.len() != mu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: xi.len() });
    }
    Ok(ft_unchecked(mu, xi, 1.0))
}

/// `μ̂(scale·direction)` without the dimension check.
fn ft_unchecked(mu: &DiscreteMeasure, direction: &[f64], scale: f64) -> C64 {
    let w = mu.weights();
    pairwise_sum_complex_by(mu.len(), &|j| {
        let (s, c) = (-scale * dot(direction, mu.point(j))).sin_cos();
        C64::new(w[j] * c, w[j] * s)
    })
}

/// Per-node values `weight_q·|μ̂(R·node_q)|²`.
fn shell_terms(mu: &DiscreteMeasure, big_r: f64, quad: &SphereQuadrature) -> Vec<f64> {
    (0..quad.len())
        .into_par_iter()
        .map(|q| quad.weights[q] * ft_unchecked(mu, quad.node(q), big_r).norm_sqr())
        .collect()
}

/// Per-node `weight_q·mean_k |μ̂((r0 + k·step)·node_q)|²` for `k < count`.
///
/// The phases along the band come from one rotation per point, so each point
/// costs two `sin_cos` calls however many samples there are. Negative radii
/// are fine: real weights give `|μ̂(−ξ)| = |μ̂(ξ)|`.
fn band_shell_terms(mu: &DiscreteMeasure, r0: f64, step: f64, count: usize, quad: &SphereQuadrature) -> Vec<f64> {
    const BLOCK: usize = 256;
    let w = mu.weights();
    (0..quad.len())
        .into_par_iter()
        .map(|q| {
            let node = quad.node(q);
            let mut total = vec![C64::new(0.0, 0.0); count];
            let mut block = vec![C64::new(0.0, 0.0); count];
            for lo in (0..mu.len()).step_by(BLOCK) {
                block.iter_mut().for_each(|b| *b = C64::new(0.0, 0.0));
                for j in lo..(lo + BLOCK).min(mu.len()) {
                    let p = dot(node, mu.point(j));
                    let (s, c) = (-r0 * p).sin_cos();
                    let mut z = C64::new(w[j] * c, w[j] * s);
                    let (s, c) = (-step * p).sin_cos();
                    let rot = C64::new(c, s);
                    for b in block.iter_mut() {
                        *b += z;
                        z *= rot;
                    }
                }
                total.iter_mut().zip(&block).for_each(|(t, b)| *t += b);
            }
            quad.weights[q] * total.iter().map(|t| t.norm_sqr()).sum::<f64>() / count as f64
        })
        .collect()
}

fn check_dims(mu: &DiscreteMeasure, quad: &SphereQuadrature) -> Result<()> {
    if mu.dim() != quad.d {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: quad.d });
    }
    Ok(())
}

/// `σ(R) = ‖μ̂(R·)‖²_{L²(S^{d−1})}` by the quadrature rule.
pub fn spherical_average(mu: &DiscreteMeasure, big_r: f64, quad: &SphereQuadrature) -> Result<f64> {
    check_dims(mu, quad)?;
    if !(big_r >= 0.0 && big_r.is_finite()) {
        return Err(Error::invalid(format!("R must be finite and nonnegative, got {big_r}")));
    }
    Ok(pairwise_sum(&shell_terms(mu, big_r, quad)))
}

/// How each point of a decay curve is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScanMode {
    /// `σ` at the grid point itself.
    Pointwise,
    /// Mean of `σ` over `samples` midpoints of `[R − half_width, R + half_width]`.
    ///
    /// Support in `B(0,1)` makes `|μ̂(Rω)|²` a trigonometric series in `R`
    /// with frequencies in `[−2, 2]`, so `half_width = π/2` spans one full
    /// period of the fastest oscillation.
    BandAveraged { half_width: f64, samples: usize },
}

impl ScanMode {
    pub fn band_default() -> Self {
        ScanMode::BandAveraged { half_width: PI / 2.0, samples: 8 }
    }
}

/// Sampled `(R, σ(R))` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub r: Vec<f64>,
    pub sigma: Vec<f64>,
    pub measure_label: String,
    pub quadrature_tag: String,
    /// Relative jackknife standard error per point (Monte Carlo rules only).
    pub jackknife_spread: Option<Vec<f64>>,
}

impl DecayCurve {
    /// Curve from precomputed values, e.g. a synthetic power law.
    pub fn from_values(r: Vec<f64>, sigma: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if r.len() != sigma.len() {
            return Err(Error::DimensionMismatch { expected: r.len(), got: sigma.len() });
        }
        check_increasing(&r)?;
        Ok(DecayCurve {
            r,
            sigma,
            measure_label: label.into(),
            quadrature_tag: "synthetic".into(),
            jackknife_spread: None,
        })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

fn check_increasing(r: &[f64]) -> Result<()> {
    if let Some(w) = r.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::invalid(format!("R grid must be strictly increasing, found {} then {}", w[0], w[1])));
    }
    if let Some(x) = r.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
        return Err(Error::invalid(format!("R values must be finite and nonnegative, found {x}")));
    }
    Ok(())
}

/// Relative jackknife standard error of `Σ terms` over contiguous node blocks.
fn jackknife_relative(terms: &[f64]) -> f64 {
    let b = JACKKNIFE_BLOCKS.min(terms.len());
    let size = terms.len() / b;
    let blocks: Vec<f64> = (0..b)
        .map(|k| {
            let end = if k + 1 == b { terms.len() } else { (k + 1) * size };
            pairwise_sum(&terms[k * size..end]) * terms.len() as f64 / (end - k * size) as f64
        })
        .collect();
    let mean = pairwise_sum(&blocks) / b as f64;
    let loo: Vec<f64> = blocks.iter().map(|x| (mean * b as f64 - x) / (b - 1) as f64).collect();
    let var = (b - 1) as f64 / b as f64 * loo.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>();
    if mean > 0.0 {
        var.sqrt() / mean
    } else {
        f64::INFINITY
    }
}

/// `σ(R)` over an increasing grid.
///
/// Every point is checked against `σ(R) ≤ ‖μ‖²·|S^{d−1}|`.
pub fn decay_scan(mu: &DiscreteMeasure, r_grid: &[f64], quad: &SphereQuadrature) -> Result<DecayCurve> {
    decay_scan_with(mu, r_grid, quad, ScanMode::Pointwise)
}

pub fn decay_scan_with(
    mu: &DiscreteMeasure,
    r_grid: &[f64],
    quad: &SphereQuadrature,
    mode: ScanMode,
) -> Result<DecayCurve> {
    check_dims(mu, quad)?;
    check_increasing(r_grid)?;
    let (first, step, count) = match mode {
        ScanMode::Pointwise => (0.0, 0.0, 1),
        ScanMode::BandAveraged { half_width, samples } => {
            if samples == 0 || !(half_width >= 0.0) {
                return Err(Error::invalid("band averaging needs samples ≥ 1 and half_width ≥ 0"));
            }
            let step = 2.0 * half_width / samples as f64;
            (step / 2.0 - half_width, step, samples)
        }
    };
    let mass = mu.total_mass();
    let cap = mass * mass * sphere_area(mu.dim()) * (1.0 + 1e-9);
    let monte_carlo = quad.scheme == QuadratureScheme::MonteCarlo;
    let mut sigma = Vec::with_capacity(r_grid.len());
    let mut spread = Vec::new();
    for &r in r_grid {
        let terms = band_shell_terms(mu, r + first, step, count, quad);
        let s = pairwise_sum(&terms);
        if s > cap {
            return Err(Error::guard(format!("σ({r}) = {s} exceeds the trivial bound {cap}")));
        }
        if monte_carlo {
            spread.push(jackknife_relative(&terms));
        }
        sigma.push(s);
    }
    Ok(DecayCurve {
        r: r_grid.to_vec(),
        sigma,
        measure_label: mu.label().to_string(),
        quadrature_tag: match mode {
            ScanMode::Pointwise => quad.tag(),
            ScanMode::BandAveraged { half_width, samples } => format!("{}:band={half_width}x{samples}", quad.tag()),
        },
        jackknife_spread: monte_carlo.then_some(spread),
    })
}

/// Least-squares decay exponent, `σ ≍ R^{−beta}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub beta: f64,
    pub stderr: f64,
    pub window: [usize; 2],
    pub residual: f64,
}

/// `beta = −slope` of `log σ` against `log R` over `window`.
pub fn fit_decay_exponent(curve: &DecayCurve, window: Range<usize>) -> Result<ExponentFit> {
    if window.end > curve.len() || window.start >= window.end {
        return Err(Error::invalid(format!("window {window:?} does not fit a curve of length {}", curve.len())));
    }
    if window.len() < 3 {
        return Err(Error::invalid("fit window needs at least three points"));
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for i in window.clone() {
        let (r, s) = (curve.r[i], curve.sigma[i]);
        if !(s > 0.0) {
            return Err(Error::guard(format!("σ({r}) = {s} is not positive (quadrature underflow?)")));
        }
        if !(r > 0.0) {
            return Err(Error::invalid("log-log fit needs R > 0"));
        }
        if let Some(spread) = &curve.jackknife_spread {
            if spread[i] > MAX_JACKKNIFE_SPREAD {
                return Err(Error::guard(format!(
                    "jackknife spread {:.3} at R = {r} exceeds {MAX_JACKKNIFE_SPREAD}",
                    spread[i]
                )));
            }
        }
        xs.push(r.ln());
        ys.push(s.ln());
    }
    let fit = fit_line(&xs, &ys)?;
    Ok(ExponentFit {
        beta: -fit.slope,
        stderr: fit.slope_stderr,
        window: [window.start, window.end],
        residual: fit.residual_norm,
    })
}

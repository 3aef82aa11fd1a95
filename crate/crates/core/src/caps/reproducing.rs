//! One-dimensional check of `|F| ≲ (|F|^{1/m} ∗ |ψ_{τ'}|^{1/m})^m` for `F`
//! with spectrum in an interval of length `L`.
//!
//! The kernel is `ψ = ψ_o²/‖ψ_o‖²` where `ψ̂_o` is the smooth bump
//! `exp(−1/(1−ξ²))` on `[−1, 1]`, so `ψ ≥ 0`, `∫ψ = 1` and `ψ̂` is a multiple
//! of `ψ̂_o ∗ ψ̂_o`, supported in `[−2, 2]`. It is adapted to the dual interval by
//! `ψ_L(x) = Lψ(Lx)`.

use crate::numerics::{gauss_legendre, pairwise_sum_by};
use crate::{Error, Result, C64};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest admissible fraction of spectral energy outside the declared band.
pub const LEAKAGE_LIMIT: f64 = 0.01;

/// Kernel support is truncated at `|Lx| ≤ KERNEL_REACH`.
const KERNEL_REACH: f64 = 40.0;

fn bump(xi: f64) -> f64 {
    if xi.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - xi * xi)).exp()
    }
}

/// `ψ_o(x) = (1/2π)∫_{−1}^{1} bump(ξ) cos(xξ) dξ`.
pub struct ReproducingKernel {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    norm2: f64,
}

impl Default for ReproducingKernel {
    fn default() -> Self {
        Self::new()
    }
}

impl ReproducingKernel {
    pub fn new() -> Self {
        let (x, w) = gauss_legendre(200);
        let weights: Vec<f64> = x.iter().zip(&w).map(|(xi, wi)| wi * bump(*xi) / (2.0 * PI)).collect();
        // ∫ψ_o² = (1/2π)∫ bump² by Plancherel
        let norm2 = x.iter().zip(&w).map(|(xi, wi)| wi * bump(*xi).powi(2)).sum::<f64>() / (2.0 * PI);
        ReproducingKernel { nodes: x, weights, norm2 }
    }

    pub fn psi_o(&self, x: f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(xi, w)| w * (x * xi).cos()).sum()
    }

    /// `ψ(x) = ψ_o(x)²/∫ψ_o²`.
    pub fn psi(&self, x: f64) -> f64 {
        self.psi_o(x).powi(2) / self.norm2
    }
}

/// Samples `F(x_j)`, `x_j = (j − n/2)·h`, with spectrum declared inside
/// `[center − L/2, center + L/2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandLimited {
    pub h: f64,
    pub values: Vec<C64>,
    pub center: f64,
    pub length: f64,
}

impl BandLimited {
    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.values.len() / 2) as f64) * self.h
    }

    /// Fraction of discrete spectral energy outside the band widened by
    /// `L/2` on each side (windowing of the finite sample set smears a little).
    pub fn leakage(&self) -> f64 {
        let n = self.values.len();
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let total: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let (lo, hi) = (self.center - self.length, self.center + self.length);
        let outside: f64 = buf
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let kk = if *k <= n / 2 { *k as f64 } else { *k as f64 - n as f64 };
                let xi = 2.0 * PI * kk / (n as f64 * self.h);
                xi < lo - 1e-12 || xi > hi + 1e-12
            })
            .map(|(_, c)| c.norm_sqr())
            .sum();
        outside / total
    }
}

/// `F(x) = e^{i·center·x} ψ_o(Lx/2)`: spectrum exactly `[center − L/2, center + L/2]`.
pub fn modulated_bump(center: f64, length: f64, n: usize, h: f64) -> BandLimited {
    let k = ReproducingKernel::new();
    let mut f = BandLimited { h, values: vec![C64::new(0.0, 0.0); n], center, length };
    for j in 0..n {
        let x = f.x(j);
        f.values[j] = C64::from_polar(k.psi_o(length * x / 2.0), center * x);
    }
    f
}

/// `max_j |F(x_j)| / (|F|^{1/m} ∗ |ψ_L|^{1/m})^m(x_j)` over grid points whose
/// kernel window lies inside the sample range.
pub fn reproducing_inequality_check(f: &BandLimited, m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::invalid("m must be ≥ 1"));
    }
    if !(f.length > 0.0 && f.h > 0.0) {
        return Err(Error::invalid("band length and spacing must be positive"));
    }
    let nyquist = PI / f.h;
    if f.center.abs() + 2.0 * f.length >= nyquist {
        return Err(Error::invalid(format!(
            "sampling too coarse: |centre| + 2L = {} reaches the Nyquist frequency {nyquist}",
            f.center.abs() + 2.0 * f.length
        )));
    }
    let leak = f.leakage();
    if leak > LEAKAGE_LIMIT {
        return Err(Error::guard(format!("spectral leakage {leak:.3e} exceeds {LEAKAGE_LIMIT}")));
    }
    let n = f.values.len();
    let reach = (KERNEL_REACH / (f.length * f.h)).ceil() as usize;
    if 2 * reach + 1 > n {
        return Err(Error::invalid(format!("need more than {} samples for the kernel window", 2 * reach + 1)));
    }
    let kernel = ReproducingKernel::new();
    let inv_m = 1.0 / m as f64;
    // discrete kernel normalised to unit sum, then raised to 1/m
    let raw: Vec<f64> = (0..=2 * reach)
        .map(|k| {
            let y = (k as f64 - reach as f64) * f.h;
            f.length * kernel.psi(f.length * y) * f.h
        })
        .collect();
    let mass = pairwise_sum_by(raw.len(), &|k| raw[k]);
    let w: Vec<f64> = raw.iter().map(|v| (v / mass).max(0.0).powf(inv_m)).collect();
    let a: Vec<f64> = f.values.iter().map(|v| v.norm().powf(inv_m)).collect();
    let mut best: f64 = 0.0;
    for j in reach..n - reach {
        let conv = pairwise_sum_by(w.len(), &|k| a[j + reach - k] * w[k]);
        let maj = conv.powi(m as i32);
        let lhs = f.values[j].norm();
        if maj > 0.0 {
            best = best.max(lhs / maj);
        } else if lhs > 0.0 {
            return Err(Error::guard("majorant vanished where F does not"));
        }
    }
    Ok(best)
}

//! Truncated Schrödinger and half-wave propagators on frequency lattices,
//! maximal functions against discrete measures and their scaling in `R`.
//!
//! Fourier convention: `f(x) = (2π)^{−n/2} ∫ f̂(ξ) e^{ix·ξ} dξ`. The cutoff is
//! `ψ(r) = (2π)^{−n/2} e^{−r²}`, so `S^{N,m}_0 f → f` as `N → ∞`.

use crate::bounds::maximal_threshold_schrodinger;
use crate::measure::{c_alpha_estimate, DiscreteMeasure};
use crate::numerics::{dot, fit_line, norm, pairwise_sum, pairwise_sum_complex_by, rng};
use crate::{Error, Result, C64};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Samples of `f̂` on the lattice `hℤⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyDatum {
    pub n: usize,
    pub h: f64,
    /// Flattened node coordinates, `n` per node.
    pub nodes: Vec<f64>,
    pub values: Vec<C64>,
    /// Inner and outer radius of the declared support annulus.
    pub annulus: Option<(f64, f64)>,
}

impl FrequencyDatum {
    /// All lattice nodes `hk` with `|hk| ≤ radius`, in lexicographic order of `k`.
    pub fn lattice(n: usize, h: f64, radius: f64, mut f: impl FnMut(&[f64]) -> C64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be ≥ 1"));
        }
        if !(h > 0.0 && radius >= 0.0 && h.is_finite() && radius.is_finite()) {
            return Err(Error::invalid(format!("bad lattice h = {h}, radius = {radius}")));
        }
        let kmax = (radius / h).floor() as i64;
        let side = (2 * kmax + 1) as u64;
        let total = side
            .checked_pow(n as u32)
            .filter(|t| *t <= 50_000_000)
            .ok_or_else(|| Error::BudgetExceeded(format!("lattice box with {side}^{n} nodes is too large")))?;
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        let mut p = vec![0.0; n];
        for flat in 0..total {
            let mut rem = flat;
            for i in (0..n).rev() {
                p[i] = h * ((rem % side) as i64 - kmax) as f64;
                rem /= side;
            }
            if norm(&p) <= radius + 1e-12 * h {
                nodes.extend_from_slice(&p);
                values.push(f(&p));
            }
        }
        Ok(FrequencyDatum { n, h, nodes, values, annulus: None })
    }

    /// Lattice nodes in `inner < |ξ| < outer`, tagged with the annulus.
    pub fn annulus(n: usize, h: f64, inner: f64, outer: f64, mut f: impl FnMut(&[f64]) -> C64) -> Result<Self> {
        if !(inner >= 0.0 && outer > inner) {
            return Err(Error::invalid(format!("bad annulus ({inner}, {outer})")));
        }
        let full = Self::lattice(n, h, outer, |_| C64::new(0.0, 0.0))?;
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for j in 0..full.len() {
            let xi = full.node(j);
            let r = norm(xi);
            if r > inner && r < outer {
                nodes.extend_from_slice(xi);
                values.push(f(xi));
            }
        }
        Ok(FrequencyDatum { n, h, nodes, values, annulus: Some((inner, outer)) })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn node(&self, j: usize) -> &[f64] {
        &self.nodes[j * self.n..(j + 1) * self.n]
    }

    /// `‖f‖₂ = (Σ|f̂|² hⁿ)^{1/2}` by Plancherel.
    pub fn l2_norm(&self) -> f64 {
        let hn = self.h.powi(self.n as i32);
        (pairwise_sum_complex_by(self.len(), &|j| C64::new(self.values[j].norm_sqr(), 0.0)).re * hn).sqrt()
    }

    /// Largest `|ξ|` carrying a nonzero value (0 for the zero datum).
    pub fn spectral_radius(&self) -> f64 {
        (0..self.len())
            .filter(|&j| self.values[j] != C64::new(0.0, 0.0))
            .map(|j| norm(self.node(j)))
            .fold(0.0, f64::max)
    }

    /// True when every nonzero value lies strictly inside the tagged annulus.
    pub fn respects_annulus(&self) -> bool {
        match self.annulus {
            None => true,
            Some((lo, hi)) => (0..self.len()).all(|j| {
                let r = norm(self.node(j));
                self.values[j] == C64::new(0.0, 0.0) || (r > lo && r < hi)
            }),
        }
    }

    fn origin_value(&self) -> C64 {
        (0..self.len()).find(|&j| self.node(j).iter().all(|v| *v == 0.0)).map_or(C64::new(0.0, 0.0), |j| self.values[j])
    }

    fn same_lattice(&self, other: &FrequencyDatum) -> bool {
        self.n == other.n && self.h == other.h && self.nodes == other.nodes
    }

    fn scale_to_unit_norm(&mut self) -> Result<()> {
        let nrm = self.l2_norm();
        if !(nrm > 0.0) {
            return Err(Error::guard("random datum vanished"));
        }
        self.values.iter_mut().for_each(|v| *v /= nrm);
        Ok(())
    }
}

/// `ψ(r) = (2π)^{−n/2} e^{−r²}`.
pub fn cutoff(n: usize, r: f64) -> f64 {
    (2.0 * PI).powf(-(n as f64) / 2.0) * (-r * r).exp()
}

fn check_resolution(f: &FrequencyDatum, m: f64, t: f64, x: &[f64]) -> Result<()> {
    let rmax = f.spectral_radius();
    let slope = if rmax == 0.0 { 0.0 } else { m * t.abs() * rmax.powf(m - 1.0) };
    let phase = f.h * (norm(x) + slope);
    if phase >= PI {
        return Err(Error::guard(format!(
            "lattice spacing {} does not resolve the phase at |x| = {}, t = {t}: h·(|x| + m|t||ξ|^(m−1)) = {phase:.4} ≥ π",
            f.h,
            norm(x)
        )));
    }
    Ok(())
}

/// `S^{N,m}_t f(x) = ∫ ψ(|ξ|/N) f̂(ξ) e^{i(x·ξ + t|ξ|^m)} dξ` by the lattice
/// rule. `N = ∞` drops the cutoff (leaving the constant `ψ(0)`).
pub fn truncated_propagator(f: &FrequencyDatum, m: f64, t: f64, x: &[f64], big_n: f64) -> Result<C64> {
    if x.len() != f.n {
        return Err(Error::DimensionMismatch { expected: f.n, got: x.len() });
    }
    if !(m >= 1.0) {
        return Err(Error::invalid(format!("order m must be ≥ 1, got {m}")));
    }
    if !(big_n > 0.0) {
        return Err(Error::invalid(format!("cutoff N must be positive, got {big_n}")));
    }
    check_resolution(f, m, t, x)?;
    let n = f.n;
    let hn = f.h.powi(n as i32);
    let s = pairwise_sum_complex_by(f.len(), &|j| {
        let xi = f.node(j);
        let r = norm(xi);
        let psi = if big_n.is_infinite() { cutoff(n, 0.0) } else { cutoff(n, r / big_n) };
        f.values[j] * C64::from_polar(psi, dot(x, xi) + t * r.powf(m))
    });
    Ok(s * hn)
}

/// `v(x,t) = S^{N,1}_t f_+ + S^{N,1}_{−t} f_−` with `f̂_± = ½(v̂₀ ∓ i|ξ|^{−1}v̂₁)`.
pub fn wave_solution(v0: &FrequencyDatum, v1: &FrequencyDatum, t: f64, x: &[f64], big_n: f64) -> Result<C64> {
    if !v0.same_lattice(v1) {
        return Err(Error::invalid("position and velocity data must share a lattice"));
    }
    if v1.origin_value() != C64::new(0.0, 0.0) {
        return Err(Error::invalid("velocity datum must vanish at ξ = 0"));
    }
    let mut plus = v0.clone();
    let mut minus = v0.clone();
    for j in 0..v0.len() {
        let r = norm(v0.node(j));
        let w = if r == 0.0 { C64::new(0.0, 0.0) } else { C64::new(0.0, 1.0) * v1.values[j] / r };
        plus.values[j] = 0.5 * (v0.values[j] - w);
        minus.values[j] = 0.5 * (v0.values[j] + w);
    }
    Ok(truncated_propagator(&plus, 1.0, t, x, big_n)? + truncated_propagator(&minus, 1.0, -t, x, big_n)?)
}

/// Multiplies `f̂` by `(1+|ξ|²)^{−s/2}` (Bessel) or `|ξ|^{−s}` (Riesz, `homogeneous`).
pub fn bessel_riesz_multiplier(f: &FrequencyDatum, s: f64, homogeneous: bool) -> Result<FrequencyDatum> {
    if homogeneous && f.origin_value() != C64::new(0.0, 0.0) {
        return Err(Error::invalid("homogeneous multiplier needs f̂ to vanish at the origin"));
    }
    let mut out = f.clone();
    for j in 0..f.len() {
        let r2 = dot(f.node(j), f.node(j));
        let symbol = if homogeneous {
            if r2 == 0.0 {
                0.0
            } else {
                r2.powf(-s / 2.0)
            }
        } else {
            (1.0 + r2).powf(-s / 2.0)
        };
        out.values[j] *= symbol;
    }
    Ok(out)
}

/// `max |S^{N,m}_t f(x)|` over the grids. Finite grids only bound the true
/// supremum from below.
pub fn maximal_function(f: &FrequencyDatum, m: f64, x: &[f64], t_grid: &[f64], n_grid: &[f64]) -> Result<f64> {
    if t_grid.is_empty() || n_grid.is_empty() {
        return Err(Error::invalid("maximal function needs nonempty t and N grids"));
    }
    let mut best: f64 = 0.0;
    for &t in t_grid {
        for &nn in n_grid {
            best = best.max(truncated_propagator(f, m, t, x, nn)?.norm());
        }
    }
    Ok(best)
}

/// Random data used by [`maximal_scaling_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatumFamily {
    /// Complex Gaussian coefficients on every lattice node of `R/8 < |ξ| < R/2`.
    RandomAnnulus,
    /// One node at `|ξ| ≈ R/4` with a random unit phase.
    SingleMode,
}

/// Lattice spacing for the scaling experiment.
pub const SCAN_SPACING: f64 = PI / 4.0;
/// Relative change at which time-grid doubling stops.
pub const REFINE_TOL: f64 = 0.02;
const MAX_DOUBLINGS: usize = 8;

/// Outcome of [`maximal_scaling_fit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalScanResult {
    pub n: usize,
    pub alpha: f64,
    pub r_values: Vec<f64>,
    /// Seed-averaged `‖sup_t |e^{itΔ}f|‖_{L²(dμ)}`.
    pub norms: Vec<f64>,
    /// Time steps used at each `R` after refinement.
    pub time_steps: Vec<usize>,
    pub slope: f64,
    pub slope_stderr: f64,
    pub s0: f64,
    pub s0_provenance: String,
}

/// Draws one datum of the family at frequency scale `R`, normalised to `‖f‖₂ = 1`.
pub fn random_datum(n: usize, big_r: f64, family: DatumFamily, seed: u64) -> Result<FrequencyDatum> {
    let mut g = rng(seed);
    let mut f = match family {
        DatumFamily::RandomAnnulus => FrequencyDatum::annulus(n, SCAN_SPACING, big_r / 8.0, big_r / 2.0, |_| {
            let re: f64 = g.sample(StandardNormal);
            let im: f64 = g.sample(StandardNormal);
            C64::new(re, im)
        })?,
        DatumFamily::SingleMode => {
            let k = (big_r / 4.0 / SCAN_SPACING).round();
            let mut node = vec![0.0; n];
            node[0] = k * SCAN_SPACING;
            let phase = g.random_range(0.0..2.0 * PI);
            FrequencyDatum {
                n,
                h: SCAN_SPACING,
                nodes: node,
                values: vec![C64::from_polar(1.0, phase)],
                annulus: Some((big_r / 8.0, big_r / 2.0)),
            }
        }
    };
    if f.is_empty() {
        return Err(Error::invalid(format!("annulus at R = {big_r} holds no lattice nodes")));
    }
    f.scale_to_unit_norm()?;
    Ok(f)
}

/// `max_{0 ≤ k ≤ steps} |S^{∞,2}_{−kT/steps} f(x)|` for every support point of
/// `μ`, by rotating each mode's phase by `e^{−iΔt|ξ|²}` per step.
pub fn schrodinger_sup_on_support(
    f: &FrequencyDatum,
    mu: &DiscreteMeasure,
    t_max: f64,
    steps: usize,
) -> Result<Vec<f64>> {
    if mu.dim() != f.n {
        return Err(Error::DimensionMismatch { expected: f.n, got: mu.dim() });
    }
    if steps == 0 {
        return Err(Error::invalid("need at least one time step"));
    }
    let xmax = mu.max_norm();
    check_resolution(f, 2.0, t_max, &{
        let mut v = vec![0.0; f.n];
        v[0] = xmax;
        v
    })?;
    let dt = t_max / steps as f64;
    let scale = cutoff(f.n, 0.0) * f.h.powi(f.n as i32);
    let rot: Vec<C64> = (0..f.len()).map(|j| C64::from_polar(1.0, -dt * dot(f.node(j), f.node(j)))).collect();
    Ok((0..mu.len())
        .into_par_iter()
        .map(|i| {
            let x = mu.point(i);
            let mut a: Vec<C64> =
                (0..f.len()).map(|j| f.values[j] * C64::from_polar(scale, dot(x, f.node(j)))).collect();
            let mut best: f64 = 0.0;
            for k in 0..=steps {
                if k > 0 {
                    a.iter_mut().zip(&rot).for_each(|(v, r)| *v *= r);
                }
                let s: C64 = a.iter().sum();
                best = best.max(s.norm());
            }
            best
        })
        .collect())
}

fn weighted_l2(mu: &DiscreteMeasure, vals: &[f64]) -> f64 {
    let w = mu.weights();
    pairwise_sum(&vals.iter().zip(w).map(|(v, w)| v * v * w).collect::<Vec<_>>()).sqrt()
}

/// Scaling of `‖sup_t |e^{itΔ}f|‖_{L²(dμ)}` in `R` for data with
/// `supp f̂ ⊂ {R/8 < |ξ| < R/2}` and `‖f‖₂ = 1`.
///
/// Time runs over `0 ≤ t ≤ 1/R`, the temporally localised form to which the
/// unit-time estimate reduces; this keeps the lattice spacing independent of
/// `R`. The time grid starts at `Δt = π/(2R²)` and is doubled until the norm
/// moves by less than [`REFINE_TOL`].
pub fn maximal_scaling_fit(
    n: usize,
    mu: &DiscreteMeasure,
    alpha: f64,
    r_list: &[f64],
    seeds: &[u64],
    family: DatumFamily,
) -> Result<MaximalScanResult> {
    if !(n == 1 || n == 2) {
        return Err(Error::invalid(format!("maximal scan supports n ∈ {{1, 2}}, got {n}")));
    }
    if r_list.is_empty() {
        return Err(Error::invalid("R list is empty"));
    }
    if seeds.is_empty() {
        return Err(Error::invalid("need at least one seed"));
    }
    if mu.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: mu.dim() });
    }
    if let Some(r) = r_list.iter().find(|r| !(**r >= 8.0 && r.is_finite())) {
        return Err(Error::invalid(format!("R must be ≥ 8, got {r}")));
    }
    let reference = maximal_threshold_schrodinger(n, alpha)?;
    let mut norms = Vec::with_capacity(r_list.len());
    let mut time_steps = Vec::with_capacity(r_list.len());
    for &big_r in r_list {
        let t_max = 1.0 / big_r;
        let data: Vec<FrequencyDatum> =
            seeds.iter().map(|&s| random_datum(n, big_r, family, s)).collect::<Result<_>>()?;
        let eval = |steps: usize| -> Result<f64> {
            let mut acc = Vec::with_capacity(data.len());
            for f in &data {
                acc.push(weighted_l2(mu, &schrodinger_sup_on_support(f, mu, t_max, steps)?));
            }
            Ok(pairwise_sum(&acc) / acc.len() as f64)
        };
        let mut steps = ((t_max / (PI / (2.0 * big_r * big_r))).ceil() as usize).max(1);
        let mut cur = eval(steps)?;
        let mut converged = false;
        for _ in 0..MAX_DOUBLINGS {
            let next = eval(2 * steps)?;
            steps *= 2;
            let change = (next - cur).abs() / next.max(f64::MIN_POSITIVE);
            cur = next;
            if change < REFINE_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::guard(format!("time grid did not stabilise at R = {big_r}")));
        }
        norms.push(cur);
        time_steps.push(steps);
    }
    let (slope, slope_stderr) = if r_list.len() >= 2 {
        if norms.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::guard("vanishing maximal norm; cannot fit a slope"));
        }
        let lx: Vec<f64> = r_list.iter().map(|r| r.ln()).collect();
        let ly: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
        let fit = fit_line(&lx, &ly)?;
        (fit.slope, fit.slope_stderr)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(MaximalScanResult {
        n,
        alpha,
        r_values: r_list.to_vec(),
        norms,
        time_steps,
        slope,
        slope_stderr,
        s0: reference.value,
        s0_provenance: reference.provenance,
    })
}

/// Both sides of the polar-coordinate majorisation of the maximal function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarCheck {
    /// `‖sup_{t,N} |S^{N,m}_t I_s ∗ f|‖_{L¹(dμ)}` over the grids.
    pub lhs: f64,
    /// `√(c_α‖μ‖) Σ_k R_k^{d−1−s} (1+R_k)^{−β/2} ‖f̂(R_k·)‖_{L²(S^{d−1})} Δr_k`.
    pub rhs: f64,
    pub ratio: f64,
    pub c_alpha: f64,
}

/// Grids and shells for [`polar_majorization_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarGrids {
    /// Increasing shell edges `r_0 < r_1 < …`; `f̂` must vanish outside `[r_0, r_last)`.
    pub shell_edges: Vec<f64>,
    pub m: f64,
    pub t_grid: Vec<f64>,
    pub n_grid: Vec<f64>,
    /// Radii for the `c_α(μ)` estimate.
    pub c_alpha_radii: Vec<f64>,
}

/// Compares the maximal function of `I_s ∗ f` against the shell sum that
/// majorises it. The constant in the majorisation is unspecified, so the
/// ratio is a diagnostic.
pub fn polar_majorization_check(
    f: &FrequencyDatum,
    s: f64,
    mu: &DiscreteMeasure,
    alpha: f64,
    beta: f64,
    grids: &PolarGrids,
) -> Result<PolarCheck> {
    let d = f.n;
    if d < 2 {
        return Err(Error::invalid("polar majorisation needs d ≥ 2"));
    }
    if mu.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: mu.dim() });
    }
    if !(s > 0.0 && s < d as f64 / 2.0) {
        return Err(Error::invalid(format!("s must lie in (0, d/2), got {s}")));
    }
    let floor = crate::bounds::beta_lower(d, alpha)?.value;
    if !(beta < floor) {
        return Err(Error::invalid(format!("β = {beta} must be below the lower bound {floor}")));
    }
    let edges = &grids.shell_edges;
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) || !(edges[0] > 0.0) {
        return Err(Error::invalid("shell edges must be positive and strictly increasing"));
    }
    let hn = f.h.powi(d as i32);
    let mut shell_energy = vec![0.0; edges.len() - 1];
    for j in 0..f.len() {
        if f.values[j] == C64::new(0.0, 0.0) {
            continue;
        }
        let r = norm(f.node(j));
        let k = edges.partition_point(|e| *e <= r);
        if k == 0 || k == edges.len() {
            return Err(Error::invalid(format!("f̂ is nonzero at |ξ| = {r}, outside the shells")));
        }
        shell_energy[k - 1] += f.values[j].norm_sqr() * hn;
    }
    let c = c_alpha_estimate(mu, alpha, &grids.c_alpha_radii, &[])?.value;
    let amp = (c * mu.total_mass()).sqrt();
    let terms: Vec<f64> = (0..shell_energy.len())
        .map(|k| {
            let (a, b) = (edges[k], edges[k + 1]);
            let rk = 0.5 * (a + b);
            let dr = b - a;
            let sphere_l2 = (shell_energy[k] / (rk.powi(d as i32 - 1) * dr)).sqrt();
            rk.powf(d as f64 - 1.0 - s) * (1.0 + rk).powf(-beta / 2.0) * sphere_l2 * dr
        })
        .collect();
    let rhs = amp * pairwise_sum(&terms);
    let g = bessel_riesz_multiplier(f, s, true)?;
    let sups: Vec<f64> = (0..mu.len())
        .into_par_iter()
        .map(|i| maximal_function(&g, grids.m, mu.point(i), &grids.t_grid, &grids.n_grid))
        .collect::<Result<_>>()?;
    let lhs = pairwise_sum(&sups.iter().zip(mu.weights()).map(|(v, w)| v * w).collect::<Vec<_>>());
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    Ok(PolarCheck { lhs, rhs, ratio, c_alpha: c })
}

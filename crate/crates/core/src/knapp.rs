//! Knapp-type counterexample on the sphere.
//!
//! Directions `Γ = {ω : R^κ ω ∈ 2πℤ^d}` come from integer points on the sphere
//! of radius `n = R^κ/2π`; caps of chord radius `ρ/R` around them form `Ω`, and
//! `Λ = (R^{κ−1}ℤ^d + B(0, ε/R)) ∩ B(0,1)`. For `ω ∈ Ω` and `x ∈ Λ` the phase
//! `ω·Rx` stays within `1/10` of `2πℤ`, so `(f dσ)^∨(Rx)` cannot cancel.

use crate::measure::{c_alpha_at_centers, make_lattice_measure, LatticeGeometry};
use crate::numerics::{dot, fit_line, gauss_legendre, norm, pairwise_sum_complex_by, rng};
use crate::spectral::sphere_nodes;
use crate::{numerics, Error, Result, C64};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Maximum number of partial vectors visited by [`sum_of_squares_points`].
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

/// Phases must land in `2πℤ + (−PHASE_WINDOW, PHASE_WINDOW)`.
pub const PHASE_WINDOW: f64 = 0.1;

/// Integer vectors of a fixed squared norm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereLatticeSet {
    pub d: usize,
    pub n2: u64,
    /// Lexicographically sorted.
    pub vectors: Vec<Vec<i64>>,
}

impl SphereLatticeSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Unit directions `v/|v|`.
    pub fn directions(&self) -> Vec<Vec<f64>> {
        let r = (self.n2 as f64).sqrt();
        self.vectors.iter().map(|v| v.iter().map(|&z| z as f64 / r).collect()).collect()
    }

    /// True when the set is invariant under every coordinate sign flip and
    /// every transposition (hence the whole signed-permutation group).
    pub fn is_symmetry_closed(&self) -> bool {
        let set: std::collections::BTreeSet<&Vec<i64>> = self.vectors.iter().collect();
        self.vectors.iter().all(|v| {
            (0..self.d).all(|i| {
                let mut w = v.clone();
                w[i] = -w[i];
                set.contains(&w)
            }) && (0..self.d.saturating_sub(1)).all(|i| {
                let mut w = v.clone();
                w.swap(i, i + 1);
                set.contains(&w)
            })
        })
    }
}

fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// All `v ∈ ℤ^d` with `|v|² = n2`, by exhaustive recursive enumeration.
pub fn sum_of_squares_points(d: usize, n2: u64) -> Result<SphereLatticeSet> {
    if d < 1 {
        return Err(Error::invalid("dimension must be ≥ 1"));
    }
    fn rec(d: usize, rest: u64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, visited: &mut u64) -> Result<()> {
        *visited += 1;
        if *visited > ENUMERATION_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "sum-of-squares enumeration visited more than {ENUMERATION_BUDGET} prefixes"
            )));
        }
        if prefix.len() + 1 == d {
            let r = isqrt(rest);
            if r * r == rest {
                let r = r as i64;
                for z in if r == 0 { vec![0] } else { vec![-r, r] } {
                    prefix.push(z);
                    out.push(prefix.clone());
                    prefix.pop();
                }
            }
            return Ok(());
        }
        let k = isqrt(rest) as i64;
        for z in -k..=k {
            prefix.push(z);
            rec(d, rest - (z * z) as u64, prefix, out, visited)?;
            prefix.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    let mut visited = 0;
    rec(d, n2, &mut Vec::with_capacity(d), &mut out, &mut visited)?;
    Ok(SphereLatticeSet { d, n2, vectors: out })
}

/// Jacobi's four-square count `r₄(N) = 8 Σ_{m | N, 4 ∤ m} m`.
pub fn jacobi_r4(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    8 * (1..=n).filter(|m| n.is_multiple_of(*m) && !m.is_multiple_of(4)).sum::<u64>()
}

/// One row of [`gamma_count_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaCount {
    pub n: u64,
    pub count: usize,
    /// `(2πn)^{d−2}`, i.e. `R^{κ(d−2)}` when `R^κ = 2πn`.
    pub scale: f64,
    pub ratio: f64,
}

/// `#Γ` against `R^{κ(d−2)}` for each lattice radius.
///
/// In `d = 4` the ratio is not bounded below along all `n`: `r₄(4^k) = 24`,
/// so powers of two collapse it. Along odd `n` it stays above `2/π²`.
pub fn gamma_count_check(d: usize, n_list: &[u64]) -> Result<Vec<GammaCount>> {
    if d < 4 {
        return Err(Error::invalid(format!("the lattice count bound is only used for d ≥ 4, got {d}")));
    }
    n_list
        .iter()
        .map(|&n| {
            let count = sum_of_squares_points(d, n * n)?.len();
            let scale = (2.0 * PI * n as f64).powi(d as i32 - 2);
            Ok(GammaCount { n, count, scale, ratio: count as f64 / scale })
        })
        .collect()
}

/// The four terms of `ω·Rx` for `ω = 2πR^{−κ}ℓ + v` and `x = R^{κ−1}m + u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseTerms {
    /// `ℓ·m`, computed in integer arithmetic, so `I₁ = 2π·i1_turns`.
    pub i1_turns: i64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
}

impl PhaseTerms {
    pub fn total(&self) -> f64 {
        self.i1 + self.i2 + self.i3 + self.i4
    }

    /// `I₂ + I₃ + I₄`, the deviation from `2πℤ`.
    pub fn deviation(&self) -> f64 {
        self.i2 + self.i3 + self.i4
    }
}

/// Parameters of one phase decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseScales {
    pub big_r: f64,
    pub kappa: f64,
    pub rho: f64,
    pub epsilon: f64,
}

const BOUNDARY_SLACK: f64 = 1e-12;

/// Split `ω·Rx` into `2πℓ·m + v·R^κm + 2πR^{1−κ}ℓ·u + v·Ru`.
///
/// Rejects inputs outside `|ℓ| = R^κ/2π`, `|v| ≤ ρ/R`, `|m| < R^{1−κ}`,
/// `|u| ≤ ε/R`. The resulting bounds are `|I₂| ≤ ρ`, `|I₃| ≤ ε`, `|I₄| ≤ ρε/R`.
pub fn phase_decomposition(ell: &[i64], v: &[f64], m: &[i64], u: &[f64], s: PhaseScales) -> Result<PhaseTerms> {
    let d = ell.len();
    for len in [v.len(), m.len(), u.len()] {
        if len != d {
            return Err(Error::DimensionMismatch { expected: d, got: len });
        }
    }
    let rk = s.big_r.powf(s.kappa);
    let radius = rk / (2.0 * PI);
    let ell2: i64 = ell.iter().map(|z| z * z).sum();
    if ((ell2 as f64).sqrt() - radius).abs() > 1e-9 * radius.max(1.0) {
        return Err(Error::invalid(format!("|ℓ|² = {ell2} does not match (R^κ/2π)² = {}", radius * radius)));
    }
    if norm(v) > s.rho / s.big_r * (1.0 + BOUNDARY_SLACK) {
        return Err(Error::invalid("|v| exceeds ρ/R"));
    }
    let m2: i64 = m.iter().map(|z| z * z).sum();
    if (m2 as f64).sqrt() >= s.big_r.powf(1.0 - s.kappa) {
        return Err(Error::invalid("|m| must be below R^(1−κ)"));
    }
    if norm(u) > s.epsilon / s.big_r * (1.0 + BOUNDARY_SLACK) {
        return Err(Error::invalid("|u| exceeds ε/R"));
    }
    let i1_turns: i64 = ell.iter().zip(m).map(|(a, b)| a * b).sum();
    let mf: Vec<f64> = m.iter().map(|&z| z as f64).collect();
    let lf: Vec<f64> = ell.iter().map(|&z| z as f64).collect();
    Ok(PhaseTerms {
        i1_turns,
        i1: 2.0 * PI * i1_turns as f64,
        i2: rk * dot(v, &mf),
        i3: 2.0 * PI * s.big_r.powf(1.0 - s.kappa) * dot(&lf, u),
        i4: s.big_r * dot(v, u),
    })
}

/// Reduce an angle to `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnappConfig {
    pub d: usize,
    /// Lattice radius; `R = (2πn)^{1/κ}`.
    pub n: u64,
    pub kappa: f64,
    pub rho: f64,
    pub epsilon: f64,
}

impl KnappConfig {
    pub fn new(d: usize, n: u64, kappa: f64, rho: f64, epsilon: f64) -> Result<Self> {
        let cfg = KnappConfig { d, n, kappa, rho, epsilon };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::invalid(format!("d must be ≥ 2, got {}", self.d)));
        }
        if self.n < 1 {
            return Err(Error::invalid("n must be ≥ 1"));
        }
        for (name, x) in [("kappa", self.kappa), ("rho", self.rho), ("epsilon", self.epsilon)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::invalid(format!("{name} must lie in (0,1), got {x}")));
            }
        }
        if self.rho + self.epsilon + self.rho * self.epsilon >= PHASE_WINDOW {
            return Err(Error::invalid("ρ + ε + ρε must stay below 1/10"));
        }
        Ok(())
    }

    pub fn big_r(&self) -> f64 {
        (2.0 * PI * self.n as f64).powf(1.0 / self.kappa)
    }

    /// `α = d(1−κ)`.
    pub fn alpha(&self) -> f64 {
        self.d as f64 * (1.0 - self.kappa)
    }

    /// `d − 1 − κ(d−2)`.
    pub fn formula_beta(&self) -> f64 {
        let d = self.d as f64;
        d - 1.0 - self.kappa * (d - 2.0)
    }

    fn scales(&self) -> PhaseScales {
        PhaseScales { big_r: self.big_r(), kappa: self.kappa, rho: self.rho, epsilon: self.epsilon }
    }
}

/// Node counts for [`knapp_pipeline`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnappSampling {
    /// Number of sampled `ω ∈ Ω`; phase pairs are `omega_samples × x_samples`.
    pub omega_samples: usize,
    pub x_samples: usize,
    /// Gauss–Legendre nodes in the polar angle of each cap.
    pub cap_radial: usize,
    /// Directions on `S^{d−2}` per radial node.
    pub cap_angular: usize,
    pub samples_per_ball: usize,
    /// Support points used as `c_α` candidate centres (plus the origin).
    pub c_alpha_centres: usize,
    pub seed: u64,
}

impl Default for KnappSampling {
    fn default() -> Self {
        KnappSampling {
            omega_samples: 100,
            x_samples: 100,
            cap_radial: 4,
            cap_angular: 32,
            samples_per_ball: 1,
            c_alpha_centres: 1000,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnappReport {
    pub config: KnappConfig,
    pub big_r: f64,
    pub alpha: f64,
    pub gamma_count: usize,
    /// Smallest chord distance between distinct `Γ` directions.
    pub min_direction_separation: f64,
    /// Exact surface area of one cap of chord radius `ρ/R`.
    pub cap_area: f64,
    pub sigma_omega: f64,
    pub mu_mass: f64,
    /// `‖μ‖·R^{dκ}`.
    pub mu_mass_normalised: f64,
    pub c_alpha: f64,
    /// `c_α(μ)·R^{dκ}`.
    pub c_alpha_normalised: f64,
    /// `min_x |∫_Ω e^{iω·Rx} dσ(ω)| / σ(Ω)` over sampled `x ∈ Λ`.
    pub extension_min_ratio: f64,
    pub phase_pairs: usize,
    pub phase_inside_fraction: f64,
    pub phase_max_abs: f64,
    /// `−log(σ(Ω)‖μ‖/c_α)/log R` at this single `R`.
    pub implied_beta: f64,
    pub formula_beta: f64,
}

/// One sampled `(ω, x)` phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseResidual {
    pub omega_idx: usize,
    pub x_idx: usize,
    pub phase_mod_2pi: f64,
}

/// Orthonormal basis of `γ^⊥` by Gram–Schmidt on the coordinate axes.
fn tangent_frame(gamma: &[f64]) -> Vec<Vec<f64>> {
    let d = gamma.len();
    let mut basis: Vec<Vec<f64>> = vec![gamma.to_vec()];
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        for b in &basis {
            let c = dot(&e, b);
            e.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let r = norm(&e);
        if r > 1e-8 {
            e.iter_mut().for_each(|x| *x /= r);
            basis.push(e);
        }
        if basis.len() == d {
            break;
        }
    }
    basis.remove(0);
    basis
}

/// Geodesic radius of a cap of chord radius `h`.
fn cap_angle(h: f64) -> f64 {
    2.0 * (h / 2.0).asin()
}

/// Reference node set of one cap: `(polar angle, tangent direction, weight)`.
struct CapRule {
    angles: Vec<f64>,
    directions: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl CapRule {
    fn new(d: usize, theta: f64, radial: usize, angular: usize, seed: u64) -> Self {
        let (x, w) = gauss_legendre(radial);
        let dirs_flat = if d == 2 { vec![-1.0, 1.0] } else { sphere_nodes(d - 1, angular, seed) };
        let directions: Vec<Vec<f64>> = dirs_flat.chunks(d - 1).map(<[f64]>::to_vec).collect();
        let k = directions.len() as f64;
        let shell = if d == 2 { 2.0 } else { numerics::sphere_area(d - 1) };
        let mut angles = Vec::new();
        let mut weights = Vec::new();
        for (xi, wi) in x.iter().zip(&w) {
            let t = 0.5 * theta * (xi + 1.0);
            angles.push(t);
            weights.push(0.5 * theta * wi * t.sin().powi(d as i32 - 2) * shell / k);
        }
        CapRule { angles, directions, weights }
    }

    fn area(&self) -> f64 {
        self.weights.iter().sum::<f64>() * self.directions.len() as f64
    }

    /// Nodes and weights of the cap centred at `gamma`.
    fn place(&self, gamma: &[f64]) -> Vec<(Vec<f64>, f64)> {
        let frame = tangent_frame(gamma);
        let mut out = Vec::with_capacity(self.angles.len() * self.directions.len());
        for (t, w) in self.angles.iter().zip(&self.weights) {
            for e in &self.directions {
                let mut p: Vec<f64> = gamma.iter().map(|g| g * t.cos()).collect();
                for (c, b) in e.iter().zip(&frame) {
                    p.iter_mut().zip(b).for_each(|(x, y)| *x += t.sin() * c * y);
                }
                out.push((p, *w));
            }
        }
        out
    }
}

/// Exact area of a cap of chord radius `h` on `S^{d−1}`.
pub fn cap_area(d: usize, h: f64) -> f64 {
    CapRule::new(d, cap_angle(h), 24, 1, 0).area()
}

/// End-to-end run of the construction; returns the report and the sampled
/// phase residuals.
pub fn knapp_pipeline(cfg: KnappConfig, sampling: KnappSampling) -> Result<(KnappReport, Vec<PhaseResidual>)> {
    cfg.validate()?;
    if sampling.omega_samples == 0 || sampling.x_samples == 0 || sampling.cap_radial == 0 || sampling.cap_angular == 0 {
        return Err(Error::invalid("sampling counts must be positive"));
    }
    let d = cfg.d;
    let big_r = cfg.big_r();
    let gamma = sum_of_squares_points(d, cfg.n * cfg.n)?;
    if gamma.is_empty() {
        return Err(Error::invalid(format!("no integer points of norm {} in dimension {d}: σ(Ω) = 0", cfg.n)));
    }
    let dirs = gamma.directions();
    let h = cfg.rho / big_r;

    let min_sep = (0..dirs.len())
        .flat_map(|i| (i + 1..dirs.len()).map(move |j| (i, j)))
        .map(|(i, j)| numerics::dist2(&dirs[i], &dirs[j]).sqrt())
        .fold(f64::INFINITY, f64::min);
    if dirs.len() > 1 && min_sep <= 2.0 * h {
        return Err(Error::invalid(format!("caps overlap: separation {min_sep} ≤ 2ρ/R = {}", 2.0 * h)));
    }

    let rule = CapRule::new(d, cap_angle(h), sampling.cap_radial, sampling.cap_angular, sampling.seed);
    let area = cap_area(d, h);
    let sigma_omega = dirs.len() as f64 * area;
    let nodes: Vec<(Vec<f64>, f64)> = dirs.iter().flat_map(|g| rule.place(g)).collect();

    let mu = make_lattice_measure(d, big_r, cfg.kappa, cfg.epsilon, sampling.samples_per_ball)?;
    let mu_mass = mu.total_mass();
    let d_kappa = d as f64 * cfg.kappa;

    // sampled x ∈ Λ: evenly strided support points
    let stride = (mu.len() / sampling.x_samples).max(1);
    let xs: Vec<&[f64]> = (0..mu.len()).step_by(stride).take(sampling.x_samples).map(|i| mu.point(i)).collect();
    let ratios: Vec<f64> = xs
        .par_iter()
        .map(|x| {
            let rx: Vec<f64> = x.iter().map(|c| c * big_r).collect();
            let s = pairwise_sum_complex_by(nodes.len(), &|k| {
                let (p, w) = &nodes[k];
                C64::from_polar(*w, dot(p, &rx))
            });
            s.norm() / sigma_omega
        })
        .collect();
    let extension_min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);

    let cstride = (mu.len() / sampling.c_alpha_centres.max(1)).max(1);
    let mut centres: Vec<Vec<f64>> =
        (0..mu.len()).step_by(cstride).take(sampling.c_alpha_centres).map(|i| mu.point(i).to_vec()).collect();
    centres.push(vec![0.0; d]);
    let mut radii = Vec::new();
    let mut r = cfg.epsilon / big_r;
    while r <= 2.0 {
        radii.push(r);
        r *= 2.0;
    }
    let alpha = cfg.alpha();
    let c_alpha = c_alpha_at_centers(&mu, alpha, &radii, &centres)?.value;

    let residuals = sample_phases(&cfg, &gamma, sampling)?;
    let inside = residuals.iter().filter(|p| p.phase_mod_2pi.abs() < PHASE_WINDOW).count();
    let phase_max_abs = residuals.iter().map(|p| p.phase_mod_2pi.abs()).fold(0.0, f64::max);

    let report = KnappReport {
        config: cfg,
        big_r,
        alpha,
        gamma_count: dirs.len(),
        min_direction_separation: min_sep,
        cap_area: area,
        sigma_omega,
        mu_mass,
        mu_mass_normalised: mu_mass * big_r.powf(d_kappa),
        c_alpha,
        c_alpha_normalised: c_alpha * big_r.powf(d_kappa),
        extension_min_ratio,
        phase_pairs: residuals.len(),
        phase_inside_fraction: inside as f64 / residuals.len() as f64,
        phase_max_abs,
        implied_beta: -(sigma_omega * mu_mass / c_alpha).ln() / big_r.ln(),
        formula_beta: cfg.formula_beta(),
    };
    Ok((report, residuals))
}

/// Sample `ω ∈ Ω` and `x = R^{κ−1}m + u` and record `ω·Rx` reduced mod 2π.
/// Every pair is also decomposed; the decomposition must reproduce the phase.
fn sample_phases(cfg: &KnappConfig, gamma: &SphereLatticeSet, sampling: KnappSampling) -> Result<Vec<PhaseResidual>> {
    let d = cfg.d;
    let s = cfg.scales();
    let big_r = s.big_r;
    let mut r = rng(sampling.seed ^ 0x6b6e_6170);
    let dirs = gamma.directions();
    let theta = cap_angle(cfg.rho / big_r);

    let mut omegas = Vec::with_capacity(sampling.omega_samples);
    for _ in 0..sampling.omega_samples {
        let k = r.random_range(0..dirs.len());
        let frame = tangent_frame(&dirs[k]);
        let e: Vec<f64> = (0..d - 1).map(|_| StandardNormal.sample(&mut r)).collect();
        let en = norm(&e);
        let t = theta * r.random::<f64>();
        let mut w: Vec<f64> = dirs[k].iter().map(|g| g * t.cos()).collect();
        for (c, b) in e.iter().zip(&frame) {
            w.iter_mut().zip(b).for_each(|(x, y)| *x += t.sin() * c / en * y);
        }
        let v: Vec<f64> = w.iter().zip(&dirs[k]).map(|(a, b)| a - b).collect();
        omegas.push((k, w, v));
    }

    let geo = LatticeGeometry::new(d, big_r, cfg.kappa, cfg.epsilon)?;
    let limit = big_r.powf(1.0 - cfg.kappa);
    let labels: Vec<Vec<i64>> = geo
        .centre_labels()
        .into_iter()
        .filter(|m| (m.iter().map(|z| (z * z) as f64).sum::<f64>()).sqrt() < limit)
        .collect();
    let mut xs = Vec::with_capacity(sampling.x_samples);
    for _ in 0..sampling.x_samples {
        let m = labels[r.random_range(0..labels.len())].clone();
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut r)).collect();
        let gn = norm(&g);
        let rad = geo.ball_radius * r.random::<f64>().powf(1.0 / d as f64);
        let u: Vec<f64> = g.iter().map(|c| c / gn * rad).collect();
        let x: Vec<f64> = m.iter().zip(&u).map(|(&z, c)| z as f64 * geo.spacing + c).collect();
        xs.push((m, u, x));
    }

    let mut out = Vec::with_capacity(omegas.len() * xs.len());
    for (oi, (k, w, v)) in omegas.iter().enumerate() {
        for (xi, (m, u, x)) in xs.iter().enumerate() {
            let terms = phase_decomposition(&gamma.vectors[*k], v, m, u, s)?;
            let direct = big_r * dot(w, x);
            let phase = wrap_phase(direct);
            let tol = 1e-9 * direct.abs().max(1.0);
            if (wrap_phase(terms.deviation()) - phase).abs() > tol {
                return Err(Error::guard(format!(
                    "phase decomposition disagrees with direct evaluation at ({oi}, {xi}): {} vs {phase}",
                    terms.deviation()
                )));
            }
            out.push(PhaseResidual { omega_idx: oi, x_idx: xi, phase_mod_2pi: phase });
        }
    }
    Ok(out)
}

/// `β` from the log–log slope of `σ(Ω)‖μ‖/c_α` against `R` over several
/// lattice radii, which removes the `ρ`, `ε` and dimensional constants that
/// dominate the single-`R` value.
pub fn implied_beta_sweep(reports: &[KnappReport]) -> Result<f64> {
    let xs: Vec<f64> = reports.iter().map(|r| r.big_r.ln()).collect();
    let ys: Vec<f64> = reports.iter().map(|r| (r.sigma_omega * r.mu_mass / r.c_alpha).ln()).collect();
    Ok(-fit_line(&xs, &ys)?.slope)
}

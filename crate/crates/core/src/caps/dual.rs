//! Dual cuboids and the mollifier `ζ(x,t) = (1+|x|²+|t|²)^{−c}`.

use super::Cap;
use crate::numerics::{dot, gauss_legendre, sphere_area};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

/// Proper rotation taking the unit vector `y` to `e_d`, row-major.
///
/// Rotates in the plane spanned by `y` and `e_d` and fixes its orthogonal
/// complement; `y = e_d` gives the identity exactly. `y = −e_d` is rejected.
pub fn rotation_to_last_axis(y: &[f64]) -> Result<Vec<Vec<f64>>> {
    let d = y.len();
    let c = y[d - 1];
    if c <= -1.0 + 1e-12 {
        return Err(Error::invalid("normal points along −e_d; rotation is not unique"));
    }
    // R = I + (b aᵀ − a bᵀ) + (b aᵀ − a bᵀ)²/(1+c), a = y, b = e_d
    let e = |i: usize| if i == d - 1 { 1.0 } else { 0.0 };
    let w = |i: usize, j: usize| e(i) * y[j] - y[i] * e(j);
    let mut r = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let w2: f64 = (0..d).map(|k| w(i, k) * w(k, j)).sum();
            r[i][j] = if i == j { 1.0 } else { 0.0 } + w(i, j) + w2 / (1.0 + c);
        }
    }
    Ok(r)
}

/// The `δ^{−1}×…×δ^{−1}×δ^{−2}` box with long side along `Y_τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCuboid {
    pub delta: f64,
    pub center_xi: Vec<f64>,
    pub dims: Vec<f64>,
    /// `Λ_τ`, row-major, with `Λ_τ Y_τ = e_d`.
    pub rotation: Vec<Vec<f64>>,
}

impl DualCuboid {
    pub fn new(cap: &Cap) -> Result<Self> {
        let d = cap.dim();
        let delta = cap.side();
        let mut dims = vec![1.0 / delta; d - 1];
        dims.push(1.0 / (delta * delta));
        Ok(DualCuboid { delta, center_xi: cap.center(), dims, rotation: rotation_to_last_axis(&cap.central_normal())? })
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    /// `Λ_τ p`.
    pub fn to_frame(&self, p: &[f64]) -> Vec<f64> {
        self.rotation.iter().map(|row| dot(row, p)).collect()
    }

    /// `Λ_τᵀ q`.
    pub fn from_frame(&self, q: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|j| (0..d).map(|i| self.rotation[i][j] * q[i]).sum()).collect()
    }

    /// Determinant of the rotation (1 for a proper rotation).
    pub fn rotation_det(&self) -> f64 {
        let d = self.dim();
        nalgebra::DMatrix::from_fn(d, d, |i, j| self.rotation[i][j]).determinant()
    }
}

/// `∫_{ℝ^d} (1+|y|²)^{−c} dy = π^{d/2} Γ(c−d/2)/Γ(c)`, finite for `c > d/2`.
pub fn mollifier_mass(d: usize, c: f64) -> Result<f64> {
    let half = d as f64 / 2.0;
    if !(c > half) {
        return Err(Error::invalid(format!("mollifier exponent must exceed d/2 = {half}, got {c}")));
    }
    Ok((half * std::f64::consts::PI.ln() + ln_gamma(c - half) - ln_gamma(c)).exp())
}

/// Fraction of the mass of `(1+|y|²)^{−c}` inside `|y| ≤ r`.
pub fn zeta_captured_mass(d: usize, c: f64, r: f64) -> Result<f64> {
    let total = mollifier_mass(d, c)?;
    // ρ = tan θ turns the radial integrand into sin^{d−1}θ cos^{2c−d−1}θ on [0, atan r]
    let (x, w) = gauss_legendre(64);
    let top = r.atan();
    let pieces = 16;
    let mut inner = 0.0;
    for p in 0..pieces {
        let (a, b) = (top * p as f64 / pieces as f64, top * (p + 1) as f64 / pieces as f64);
        for (xi, wi) in x.iter().zip(&w) {
            let th = 0.5 * (b - a) * (xi + 1.0) + a;
            inner += 0.5 * (b - a) * wi * th.sin().powi(d as i32 - 1) * th.cos().powf(2.0 * c - d as f64 - 1.0);
        }
    }
    Ok(sphere_area(d) * inner / total)
}

/// `ζ_{Kτ'}`, normalised to unit mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mollifier {
    pub dual: DualCuboid,
    pub big_k: f64,
    pub c: f64,
    /// `∫ (1+|y|²)^{−c} dy`.
    pub base_mass: f64,
}

impl Mollifier {
    pub fn new(dual: DualCuboid, big_k: f64, c: f64) -> Result<Self> {
        if !(big_k >= 1.0) {
            return Err(Error::invalid(format!("K must be ≥ 1, got {big_k}")));
        }
        if c < 1.0 {
            return Err(Error::invalid(format!("mollifier exponent must be ≥ 1, got {c}")));
        }
        let base_mass = mollifier_mass(dual.dim(), c)?;
        Ok(Mollifier { dual, big_k, c, base_mass })
    }

    /// Scaled frame coordinates `y = (δx'/K, δ²t'/K)`.
    pub fn scaled(&self, p: &[f64]) -> Vec<f64> {
        let d = self.dual.dim();
        let mut q = self.dual.to_frame(p);
        let delta = self.dual.delta;
        for (i, v) in q.iter_mut().enumerate() {
            *v *= if i + 1 == d { delta * delta } else { delta } / self.big_k;
        }
        q
    }

    /// Inverse of [`Mollifier::scaled`].
    pub fn unscaled(&self, y: &[f64]) -> Vec<f64> {
        let d = self.dual.dim();
        let delta = self.dual.delta;
        let q: Vec<f64> = y
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.big_k / if i + 1 == d { delta * delta } else { delta })
            .collect();
        self.dual.from_frame(&q)
    }

    /// `δ^{d+1}/K^d`, the Jacobian of `p ↦ y`.
    pub fn jacobian(&self) -> f64 {
        let d = self.dual.dim() as i32;
        self.dual.delta.powi(d + 1) / self.big_k.powi(d)
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        let y = self.scaled(p);
        self.jacobian() / self.base_mass * (1.0 + dot(&y, &y)).powf(-self.c)
    }
}

/// `ζ_{Kτ'}(p)` for the cap's dual cuboid.
pub fn mollifier_zeta(dual: &DualCuboid, big_k: f64, c: f64, p: &[f64]) -> Result<f64> {
    if p.len() != dual.dim() {
        return Err(Error::DimensionMismatch { expected: dual.dim(), got: p.len() });
    }
    Ok(Mollifier::new(dual.clone(), big_k, c)?.eval(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::{Cap, Phase};
    use crate::numerics::{norm, rng};
    use rand::Rng;

    #[test]
    fn rotation_is_proper_and_maps_normal() {
        let mut r = rng(11);
        for _ in 0..50 {
            let d = r.random_range(2..=5);
            let mut y: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
            y[d - 1] = y[d - 1].abs() + 0.1;
            let n = norm(&y);
            y.iter_mut().for_each(|v| *v /= n);
            let rot = rotation_to_last_axis(&y).unwrap();
            let img: Vec<f64> = rot.iter().map(|row| dot(row, &y)).collect();
            for (i, v) in img.iter().enumerate() {
                assert!((v - if i + 1 == d { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
            let det = nalgebra::DMatrix::from_fn(d, d, |i, j| rot[i][j]).determinant();
            assert!((det - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_cap_has_identity_frame() {
        let cap = Cap::new(Phase::paraboloid(), &[0.0, 0.0], 0.25).unwrap();
        let dual = DualCuboid::new(&cap).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((dual.rotation[i][j] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        assert_eq!(dual.dims, vec![4.0, 4.0, 16.0]);
    }

    #[test]
    fn zeta_peaks_at_centre() {
        let cap = Cap::new(Phase::sphere(), &[0.2], 0.1).unwrap();
        let dual = DualCuboid::new(&cap).unwrap();
        let z0 = mollifier_zeta(&dual, 2.0, 3.0, &[0.0, 0.0]).unwrap();
        for p in [[1.0, 0.0], [0.0, 5.0], [-3.0, 2.0]] {
            assert!(mollifier_zeta(&dual, 2.0, 3.0, &p).unwrap() < z0);
        }
        assert!(mollifier_zeta(&dual, 2.0, 0.5, &[0.0, 0.0]).is_err());
        assert!(mollifier_zeta(&dual, 2.0, 1.0, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn mass_closed_form() {
        // d = 1, c = 1: ∫ dy/(1+y²) = π
        assert!((mollifier_mass(1, 1.0).unwrap() - std::f64::consts::PI).abs() < 1e-12);
        // d = 3, c = 2: π^{3/2} Γ(1/2)/Γ(2) = π²
        assert!((mollifier_mass(3, 2.0).unwrap() - std::f64::consts::PI.powi(2)).abs() < 1e-11);
        assert!((zeta_captured_mass(2, 3.0, 1e6).unwrap() - 1.0).abs() < 1e-9);
        // d = 2: captured fraction is 1 − (1+r²)^{1−c}
        let f = zeta_captured_mass(2, 3.0, 2.0).unwrap();
        assert!((f - (1.0 - 5f64.powf(-2.0))).abs() < 1e-12);
    }

    #[test]
    fn change_of_variables_preserves_mass() {
        // integrate the unit-mass ζ_{τ'} over the box y ∈ [−4,4]² by midpoint rule
        // in the unscaled coordinates and compare with the scaled integral
        let cap = Cap::new(Phase::paraboloid(), &[0.15], 0.2).unwrap();
        let z = Mollifier::new(DualCuboid::new(&cap).unwrap(), 1.0, 2.5).unwrap();
        let n = 400;
        let h = 8.0 / n as f64;
        let mut scaled = 0.0;
        let mut unscaled = 0.0;
        for i in 0..n {
            for j in 0..n {
                let y = [-4.0 + h * (i as f64 + 0.5), -4.0 + h * (j as f64 + 0.5)];
                scaled += (1.0 + dot(&y, &y)).powf(-2.5) * h * h / z.base_mass;
                let p = z.unscaled(&y);
                unscaled += z.eval(&p) * h * h / z.jacobian();
            }
        }
        assert!((scaled - unscaled).abs() < 0.01 * scaled);
        assert!(scaled > 0.9 && scaled < 1.0);
    }
}

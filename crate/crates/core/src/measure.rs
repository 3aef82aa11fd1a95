//! Discrete fractal measures and brute-force α-dimensionality constants.
//!
//! A measure is a finite weighted point cloud in ℝ^d. Absolutely continuous
//! pieces (the lattice-of-balls sets) are represented by equal-weight
//! quadrature points inside each ball.

use crate::numerics::{dist2, halton, norm, pairwise_sum, unit_ball_volume};
use crate::spectral::sphere_nodes;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Upper bound on the number of atoms any constructor will emit.
pub const MAX_POINTS: usize = 4_000_000;

/// Seed for the Gaussian sphere sampler used when `d ≥ 4`.
pub const SPHERE_MEASURE_SEED: u64 = 1729;

const SUPPORT_SLACK: f64 = 1e-12;

/// Weighted point cloud `μ = Σ_j w_j δ_{x_j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureDoc", into = "MeasureDoc")]
pub struct DiscreteMeasure {
    d: usize,
    label: String,
    coords: Vec<f64>,
    weights: Vec<f64>,
    expanded_support: bool,
}

/// On-disk layout: `{"d", "label", "points", "weights"}`.
#[derive(Serialize, Deserialize)]
struct MeasureDoc {
    d: usize,
    label: String,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    expanded_support: bool,
}

impl TryFrom<MeasureDoc> for DiscreteMeasure {
    type Error = Error;

    fn try_from(doc: MeasureDoc) -> Result<Self> {
        let mut coords = Vec::with_capacity(doc.points.len() * doc.d);
        for p in &doc.points {
            if p.len() != doc.d {
                return Err(Error::DimensionMismatch { expected: doc.d, got: p.len() });
            }
            coords.extend_from_slice(p);
        }
        DiscreteMeasure::build(doc.d, coords, doc.weights, doc.label, doc.expanded_support)
    }
}

impl From<DiscreteMeasure> for MeasureDoc {
    fn from(m: DiscreteMeasure) -> Self {
        MeasureDoc {
            d: m.d,
            points: m.coords.chunks(m.d).map(<[f64]>::to_vec).collect(),
            label: m.label,
            weights: m.weights,
            expanded_support: m.expanded_support,
        }
    }
}

impl DiscreteMeasure {
    /// Builds a measure supported in the closed unit ball.
    ///
    /// `coords` holds the points back to back, `d` reals each.
    pub fn new(d: usize, coords: Vec<f64>, weights: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        Self::build(d, coords, weights, label.into(), false)
    }

    fn build(d: usize, coords: Vec<f64>, weights: Vec<f64>, label: String, expanded_support: bool) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if weights.is_empty() {
            return Err(Error::invalid("a measure needs at least one atom"));
        }
        if coords.len() != weights.len() * d {
            return Err(Error::DimensionMismatch { expected: weights.len() * d, got: coords.len() });
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::invalid(format!("weights must be finite and nonnegative, found {w}")));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point coordinates must be finite"));
        }
        if !expanded_support {
            if let Some(p) = coords.chunks(d).find(|p| norm(p) > 1.0 + SUPPORT_SLACK) {
                return Err(Error::invalid(format!("point {p:?} lies outside the unit ball")));
            }
        }
        Ok(DiscreteMeasure { d, label, coords, weights, expanded_support })
    }

    /// Unit point mass at `x`.
    pub fn dirac(x: &[f64]) -> Result<Self> {
        Self::new(x.len(), x.to_vec(), vec![1.0], format!("dirac at {x:?}"))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks(self.d)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// True once the measure has been dilated out of the unit ball.
    pub fn expanded_support(&self) -> bool {
        self.expanded_support
    }

    /// `‖μ‖`, the weight sum.
    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn max_norm(&self) -> f64 {
        self.points().map(norm).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// `μ(B(center, r))` for the closed ball, by exhaustive summation.
    pub fn ball_mass_brute(&self, center: &[f64], r: f64) -> f64 {
        let r2 = r * r * (1.0 + SUPPORT_SLACK);
        let masses: Vec<f64> =
            self.points().zip(&self.weights).map(|(p, w)| if dist2(p, center) <= r2 { *w } else { 0.0 }).collect();
        pairwise_sum(&masses)
    }
}

/// Integer vectors `z ∈ ℤ^d` with `|z| ≤ radius`, in lexicographic order.
pub fn integer_points_in_ball(d: usize, radius: f64) -> Vec<Vec<i64>> {
    fn rec(d: usize, budget: f64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == d {
            out.push(prefix.clone());
            return;
        }
        let k = (budget.max(0.0).sqrt() + 1e-9).floor() as i64;
        for z in -k..=k {
            let rest = budget - (z as f64) * (z as f64);
            if rest < -1e-9 {
                continue;
            }
            prefix.push(z);
            rec(d, rest, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, radius * radius, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Offsets of `k` equal-weight quadrature points inside the unit ball:
/// the centre first, then Halton points accepted by rejection.
fn ball_offsets(d: usize, k: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; d]];
    let mut i = 1u64;
    while out.len() < k {
        let p: Vec<f64> = halton(i, d).into_iter().map(|u| 2.0 * u - 1.0).collect();
        if norm(&p) <= 1.0 {
            out.push(p);
        }
        i += 1;
    }
    out
}

/// Description of a lattice-of-balls construction `(sℤ^d + B(0, r)) ∩ B(0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeGeometry {
    pub d: usize,
    /// Lattice spacing `R^{κ−1}`.
    pub spacing: f64,
    /// Radius `εR^{−1}` of each small ball.
    pub ball_radius: f64,
}

impl LatticeGeometry {
    pub fn new(d: usize, big_r: f64, kappa: f64, epsilon: f64) -> Result<Self> {
        if d < 1 {
            return Err(Error::invalid("lattice dimension must be ≥ 1"));
        }
        if !(big_r > 1.0) {
            return Err(Error::invalid(format!("R must exceed 1, got {big_r}")));
        }
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::invalid(format!("kappa must lie in (0,1), got {kappa}")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid(format!("epsilon must lie in (0,1), got {epsilon}")));
        }
        let spacing = big_r.powf(kappa - 1.0);
        if spacing >= 2.0 {
            return Err(Error::invalid(format!("lattice spacing R^(κ−1) = {spacing} leaves no interior lattice cell")));
        }
        Ok(LatticeGeometry { d, spacing, ball_radius: epsilon / big_r })
    }

    /// Integer labels `m` of the ball centres `s·m ∈ B(0,1)`.
    pub fn centre_labels(&self) -> Vec<Vec<i64>> {
        integer_points_in_ball(self.d, 1.0 / self.spacing)
    }

    pub fn ball_volume(&self) -> f64 {
        unit_ball_volume(self.d) * self.ball_radius.powi(self.d as i32)
    }
}

/// Quadrature discretisation of `χ_Λ dx` for
/// `Λ = (R^{κ−1}ℤ^d + B(0, εR^{−1})) ∩ B(0,1)`.
///
/// Every ball with centre in `B(0,1)` contributes `samples_per_ball` points
/// whose weights sum to the full ball volume. Sample points that would leave
/// the unit ball are pulled radially onto the unit sphere.
pub fn make_lattice_measure(
    d: usize,
    big_r: f64,
    kappa: f64,
    epsilon: f64,
    samples_per_ball: usize,
) -> Result<DiscreteMeasure> {
    if d < 2 {
        return Err(Error::invalid("lattice measures need d ≥ 2"));
    }
    if samples_per_ball == 0 {
        return Err(Error::invalid("samples_per_ball must be ≥ 1"));
    }
    let geo = LatticeGeometry::new(d, big_r, kappa, epsilon)?;
    // volume estimate of the label count, checked before enumerating
    let estimate = unit_ball_volume(d) * geo.spacing.powi(-(d as i32)) * samples_per_ball as f64;
    if estimate > 2.0 * MAX_POINTS as f64 {
        return Err(Error::BudgetExceeded(format!(
            "about {estimate:.3e} lattice points exceed the budget {MAX_POINTS}"
        )));
    }
    let labels = geo.centre_labels();
    let n = labels.len() * samples_per_ball;
    if n > MAX_POINTS {
        return Err(Error::BudgetExceeded(format!("{n} lattice points exceed the budget {MAX_POINTS}")));
    }
    let offsets = ball_offsets(d, samples_per_ball);
    let w = geo.ball_volume() / samples_per_ball as f64;
    let mut coords = Vec::with_capacity(n * d);
    for m in &labels {
        for off in &offsets {
            let mut p: Vec<f64> =
                m.iter().zip(off).map(|(&z, o)| z as f64 * geo.spacing + o * geo.ball_radius).collect();
            let r = norm(&p);
            if r > 1.0 {
                p.iter_mut().for_each(|c| *c /= r);
            }
            coords.extend_from_slice(&p);
        }
    }
    DiscreteMeasure::new(
        d,
        coords,
        vec![w; n],
        format!(
            "lattice d={d} R={big_r} kappa={kappa} eps={epsilon} balls={} samples={samples_per_ball}",
            labels.len()
        ),
    )
}

/// Similarity dimension `d·log 2 / log(1/ratio)` of the product Cantor set.
pub fn cantor_nominal_dimension(d: usize, ratio: f64) -> f64 {
    d as f64 * std::f64::consts::LN_2 / (1.0 / ratio).ln()
}

/// Natural measure on generation `depth` of the d-fold product of the
/// two-interval Cantor construction with contraction `ratio`, scaled from
/// `[0,1]^d` into the unit ball.
pub fn make_cantor_measure(d: usize, ratio: f64, depth: usize) -> Result<DiscreteMeasure> {
    if d < 1 {
        return Err(Error::invalid("Cantor measures need d ≥ 1"));
    }
    if !(ratio > 0.0 && ratio < 0.5) {
        return Err(Error::invalid(format!("ratio must lie in (0, 1/2), got {ratio}")));
    }
    if depth < 1 {
        return Err(Error::invalid("depth must be ≥ 1"));
    }
    let bits = d.checked_mul(depth).filter(|&b| b < 63);
    let n = bits
        .map(|b| 1usize << b)
        .filter(|&n| n <= MAX_POINTS)
        .ok_or_else(|| Error::BudgetExceeded(format!("2^({d}·{depth}) Cantor cells exceed the budget {MAX_POINTS}")))?;

    let mut left = vec![0.0f64];
    let mut len = 1.0;
    for _ in 0..depth {
        let child = len * ratio;
        left = left.iter().flat_map(|&a| [a, a + len - child]).collect();
        len = child;
    }
    let centres: Vec<f64> = left.iter().map(|a| a + 0.5 * len).collect();

    let scale = 1.0 / (d as f64).sqrt();
    let per_axis = centres.len();
    let mut coords = Vec::with_capacity(n * d);
    for idx in 0..n {
        let mut rem = idx;
        for _ in 0..d {
            coords.push((2.0 * centres[rem % per_axis] - 1.0) * scale);
            rem /= per_axis;
        }
    }
    let alpha = cantor_nominal_dimension(d, ratio);
    DiscreteMeasure::new(
        d,
        coords,
        vec![1.0 / n as f64; n],
        format!("cantor d={d} ratio={ratio} depth={depth} alpha={alpha}"),
    )
}

/// Near-uniform probability measure on `S^{d−1}`: equal angles for `d = 2`,
/// a Fibonacci spiral for `d = 3` and seeded normalised Gaussians for `d ≥ 4`.
pub fn make_sphere_measure(d: usize, n_points: usize) -> Result<DiscreteMeasure> {
    if d < 2 {
        return Err(Error::invalid("sphere measures need d ≥ 2"));
    }
    if n_points < 2 {
        return Err(Error::invalid("sphere measures need at least two points"));
    }
    if n_points > MAX_POINTS {
        return Err(Error::BudgetExceeded(format!("{n_points} sphere points exceed {MAX_POINTS}")));
    }
    let coords = sphere_nodes(d, n_points, SPHERE_MEASURE_SEED);
    DiscreteMeasure::new(d, coords, vec![1.0 / n_points as f64; n_points], format!("sphere d={d} n={n_points}"))
}

/// Maximal `μ(B(x, r))/r^α` found over the probed centres and radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaConstantReport {
    pub alpha: f64,
    pub value: f64,
    pub witness_center: Vec<f64>,
    pub witness_radius: f64,
    pub radii: Vec<f64>,
}

/// `c_α` lower estimate with candidate centres = all support points plus
/// `extra_centers`.
pub fn c_alpha_estimate(
    mu: &DiscreteMeasure,
    alpha: f64,
    radii: &[f64],
    extra_centers: &[Vec<f64>],
) -> Result<AlphaConstantReport> {
    let centres: Vec<Vec<f64>> = mu.points().map(<[f64]>::to_vec).chain(extra_centers.iter().cloned()).collect();
    c_alpha_at_centers(mu, alpha, radii, &centres)
}

/// `c_α` lower estimate restricted to the given candidate centres.
pub fn c_alpha_at_centers(
    mu: &DiscreteMeasure,
    alpha: f64,
    radii: &[f64],
    centers: &[Vec<f64>],
) -> Result<AlphaConstantReport> {
    let d = mu.dim();
    if radii.is_empty() {
        return Err(Error::invalid("c_alpha_estimate needs at least one radius"));
    }
    if !(alpha > 0.0 && alpha <= d as f64) {
        return Err(Error::invalid(format!("alpha must lie in (0, {d}], got {alpha}")));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::invalid(format!("radii must be positive, found {r}")));
    }
    if centers.is_empty() {
        return Err(Error::invalid("no candidate centres"));
    }
    if let Some(c) = centers.iter().find(|c| c.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: c.len() });
    }
    let tree = BallTree::new(mu);
    let best = centers
        .par_iter()
        .enumerate()
        .map(|(ci, c)| {
            let mut best = (f64::NEG_INFINITY, ci, 0usize);
            for (ri, &r) in radii.iter().enumerate() {
                let v = tree.ball_mass(c, r) / r.powf(alpha);
                if v > best.0 {
                    best = (v, ci, ri);
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX, 0),
            |a, b| {
                // ties go to the lowest centre index so the witness is schedule independent
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(AlphaConstantReport {
        alpha,
        value: best.0,
        witness_center: centers[best.1].clone(),
        witness_radius: radii[best.2],
        radii: radii.to_vec(),
    })
}

/// `μ_R` with `dμ_R(x) = R^α dμ(x/R)`: points dilate by `R`, weights by `R^α`.
pub fn scale_measure(mu: &DiscreteMeasure, big_r: f64, alpha: f64) -> Result<DiscreteMeasure> {
    if !(big_r >= 1.0 && big_r.is_finite()) {
        return Err(Error::invalid(format!("scale factor must be ≥ 1, got {big_r}")));
    }
    let factor = big_r.powf(alpha);
    DiscreteMeasure::build(
        mu.d,
        mu.coords.iter().map(|c| c * big_r).collect(),
        mu.weights.iter().map(|w| w * factor).collect(),
        format!("{} scaled R={big_r} alpha={alpha}", mu.label),
        mu.expanded_support || big_r > 1.0,
    )
}

/// kd-tree with subtree weight sums for fast closed-ball mass queries.
pub struct BallTree<'a> {
    mu: &'a DiscreteMeasure,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

struct Node {
    lo: Vec<f64>,
    hi: Vec<f64>,
    mass: f64,
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

const LEAF_SIZE: usize = 16;

impl<'a> BallTree<'a> {
    pub fn new(mu: &'a DiscreteMeasure) -> Self {
        let mut tree = BallTree { mu, order: (0..mu.len()).collect(), nodes: Vec::new() };
        tree.build(0, mu.len());
        tree
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let d = self.mu.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for &i in &self.order[start..end] {
            for (k, &c) in self.mu.point(i).iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        let masses: Vec<f64> = self.order[start..end].iter().map(|&i| self.mu.weights[i]).collect();
        let id = self.nodes.len();
        self.nodes.push(Node {
            lo: lo.clone(),
            hi: hi.clone(),
            mass: pairwise_sum(&masses),
            start,
            end,
            children: None,
        });
        if end - start > LEAF_SIZE {
            let axis = (0..d).max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b]))).unwrap_or(0);
            let mid = start + (end - start) / 2;
            let mu = self.mu;
            self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                mu.point(a)[axis].total_cmp(&mu.point(b)[axis]).then(a.cmp(&b))
            });
            let l = self.build(start, mid);
            let r = self.build(mid, end);
            self.nodes[id].children = Some((l, r));
        }
        id
    }

    /// Mass of the closed ball `B(center, r)`.
    pub fn ball_mass(&self, center: &[f64], r: f64) -> f64 {
        let r2 = r * r * (1.0 + SUPPORT_SLACK);
        let mut total = 0.0;
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            let (mut near, mut far) = (0.0, 0.0);
            for k in 0..center.len() {
                let c = center[k];
                let dn = if c < node.lo[k] {
                    node.lo[k] - c
                } else if c > node.hi[k] {
                    c - node.hi[k]
                } else {
                    0.0
                };
                let df = (c - node.lo[k]).abs().max((node.hi[k] - c).abs());
                near += dn * dn;
                far += df * df;
            }
            if near > r2 {
                continue;
            }
            if far <= r2 {
                total += node.mass;
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    stack.push(r);
                    stack.push(l);
                }
                None => {
                    for &i in &self.order[node.start..node.end] {
                        if dist2(self.mu.point(i), center) <= r2 {
                            total += self.mu.weights[i];
                        }
                    }
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn lattice_centre_count_matches_enumeration() {
        let mu = make_lattice_measure(2, 4.0, 0.5, 0.5, 1).unwrap();
        // integer pairs with norm ≤ 2
        let brute = (-2i64..=2).flat_map(|a| (-2i64..=2).map(move |b| a * a + b * b)).filter(|&s| s <= 4).count();
        assert_eq!(brute, 13);
        assert_eq!(mu.len(), 13);
        assert_relative_eq!(mu.total_mass(), 13.0 * PI * (1.0f64 / 8.0).powi(2), max_relative = 1e-12);
    }

    #[test]
    fn lattice_near_unit_spacing_counts_unit_ball_points() {
        for d in 2..=4 {
            let geo = LatticeGeometry::new(d, 1e9, 0.999_999_999, 0.1).unwrap();
            assert_eq!(geo.centre_labels().len(), 2 * d + 1);
        }
    }

    #[test]
    fn lattice_samples_stay_in_ball_and_conserve_mass() {
        let mu = make_lattice_measure(3, 8.0, 0.5, 0.5, 7).unwrap();
        assert!(mu.max_norm() <= 1.0 + 1e-12);
        let balls = LatticeGeometry::new(3, 8.0, 0.5, 0.5).unwrap();
        let expect = balls.centre_labels().len() as f64 * balls.ball_volume();
        assert_relative_eq!(mu.total_mass(), expect, max_relative = 1e-12);
    }

    #[test]
    fn lattice_rejects_bad_parameters() {
        assert!(make_lattice_measure(2, 0.5, 0.5, 0.5, 1).is_err());
        assert!(make_lattice_measure(2, 4.0, 1.5, 0.5, 1).is_err());
        assert!(make_lattice_measure(2, 4.0, 0.5, 0.5, 0).is_err());
        assert!(matches!(make_lattice_measure(4, 1e12, 0.01, 0.5, 1), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn cantor_examples() {
        let mu = make_cantor_measure(1, 0.25, 1).unwrap();
        assert_eq!(mu.len(), 2);
        assert!(mu.weights().iter().all(|&w| w == 0.5));
        assert_relative_eq!(cantor_nominal_dimension(1, 0.25), 0.5, epsilon = 1e-15);

        let mu = make_cantor_measure(1, 0.25, 3).unwrap();
        assert_eq!(mu.len(), 8);
        assert!(mu.weights().iter().all(|&w| w == 0.125));

        let mu = make_cantor_measure(2, 0.25, 2).unwrap();
        assert_eq!(mu.len(), 16);
        assert_relative_eq!(cantor_nominal_dimension(2, 0.25), 1.0, epsilon = 1e-15);
        assert!(mu.label().contains("alpha=1"));
        assert!(mu.max_norm() <= 1.0 + 1e-12);
        assert_relative_eq!(mu.total_mass(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cantor_budget_and_ratio_guards() {
        assert!(matches!(make_cantor_measure(3, 0.25, 20), Err(Error::BudgetExceeded(_))));
        assert!(make_cantor_measure(1, 0.5, 2).is_err());
    }

    #[test]
    fn sphere_measure_examples() {
        let mu = make_sphere_measure(2, 4).unwrap();
        let expect = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (p, e) in mu.points().zip(expect) {
            assert!((p[0] - e[0]).abs() < 1e-15 && (p[1] - e[1]).abs() < 1e-15);
        }
        assert!(mu.weights().iter().all(|&w| w == 0.25));
        for n in [3, 7, 100] {
            assert_relative_eq!(make_sphere_measure(2, n).unwrap().total_mass(), 1.0, epsilon = 1e-12);
        }
        let mu = make_sphere_measure(3, 1000).unwrap();
        let mean: f64 = mu.points().zip(mu.weights()).map(|(p, w)| w * p[2] * p[2]).sum();
        assert!((mean - 1.0 / 3.0).abs() < 0.01);
        let mu = make_sphere_measure(5, 50).unwrap();
        assert!(mu.points().all(|p| (norm(p) - 1.0).abs() < 1e-12));
    }

    #[test]
    fn c_alpha_point_mass() {
        let mu = DiscreteMeasure::dirac(&[0.0, 0.0]).unwrap();
        let rep = c_alpha_estimate(&mu, 1.0, &[1.0], &[]).unwrap();
        assert_eq!(rep.value, 1.0);
        assert_eq!(rep.witness_center, vec![0.0, 0.0]);
        assert_eq!(rep.witness_radius, 1.0);
        assert!(c_alpha_estimate(&mu, 1.0, &[], &[]).is_err());
        assert!(c_alpha_estimate(&mu, 3.0, &[1.0], &[]).is_err());
    }

    #[test]
    fn c_alpha_of_grid_lebesgue_is_ball_volume() {
        // midpoint grid on [-1,1]^d restricted to the unit ball
        for d in [2usize, 3] {
            let n = if d == 2 { 200 } else { 60 };
            let h = 2.0 / n as f64;
            let mut coords = Vec::new();
            let mut count = 0;
            let mut idx = vec![0usize; d];
            loop {
                let p: Vec<f64> = idx.iter().map(|&i| -1.0 + (i as f64 + 0.5) * h).collect();
                if norm(&p) <= 1.0 {
                    coords.extend(p);
                    count += 1;
                }
                let mut k = 0;
                while k < d {
                    idx[k] += 1;
                    if idx[k] < n {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == d {
                    break;
                }
            }
            let mu = DiscreteMeasure::new(d, coords, vec![h.powi(d as i32); count], "grid").unwrap();
            let rep = c_alpha_at_centers(&mu, d as f64, &[1.0], &[vec![0.0; d]]).unwrap();
            assert_relative_eq!(rep.value, unit_ball_volume(d), max_relative = 0.02);
        }
    }

    #[test]
    fn ball_tree_matches_brute_force() {
        let mu = make_lattice_measure(3, 30.0, 0.5, 0.5, 3).unwrap();
        let tree = BallTree::new(&mu);
        let mut r = crate::numerics::rng(7);
        use rand::Rng;
        for _ in 0..50 {
            let c: Vec<f64> = (0..3).map(|_| r.random_range(-1.0..1.0)).collect();
            let rad = r.random_range(0.01..1.5);
            assert_relative_eq!(tree.ball_mass(&c, rad), mu.ball_mass_brute(&c, rad), max_relative = 1e-12);
        }
    }

    #[test]
    fn scale_measure_examples() {
        let mu = make_cantor_measure(2, 0.3, 3).unwrap();
        let same = scale_measure(&mu, 1.0, 0.8).unwrap();
        assert_eq!(same.coords(), mu.coords());
        assert_eq!(same.weights(), mu.weights());
        assert!(!same.expanded_support());

        let mu = DiscreteMeasure::dirac(&[0.5, 0.0]).unwrap();
        let scaled = scale_measure(&mu, 2.0, 1.0).unwrap();
        assert_eq!(scaled.point(0), &[1.0, 0.0]);
        assert_eq!(scaled.weights(), &[2.0]);
        assert!(scaled.expanded_support());
    }

    #[test]
    fn json_layout_and_round_trip() {
        let mu = make_cantor_measure(2, 0.25, 1).unwrap();
        let s = serde_json::to_string(&mu).unwrap();
        assert!(s.starts_with("{\"d\":2,\"label\":"));
        assert!(s.contains("\"points\":[["));
        assert!(!s.contains("expanded_support"));
        let back = DiscreteMeasure::from_json(&s).unwrap();
        assert_eq!(back, mu);
        assert!(DiscreteMeasure::from_json(r#"{"d":2,"label":"x","points":[[2.0,0.0]],"weights":[1.0]}"#).is_err());
        assert!(DiscreteMeasure::from_json(r#"{"d":2,"label":"x","points":[[0.1]],"weights":[1.0]}"#).is_err());
    }
}

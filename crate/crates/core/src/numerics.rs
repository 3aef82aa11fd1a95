//! Small numeric kernels shared by every module.

use crate::{Error, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

const PAIRWISE_BLOCK: usize = 32;

/// Pairwise (cascade) summation.
///
/// The recursion splits at fixed indices, so the rounding pattern depends only
/// on the input length and never on how work was scheduled.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_complex(xs: &[C64]) -> C64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// Pairwise sum of `f(i)` for `i in 0..n` without materialising a buffer
/// for small blocks.
pub fn pairwise_sum_by(n: usize, f: &impl Fn(usize) -> f64) -> f64 {
    fn rec(lo: usize, hi: usize, f: &impl Fn(usize) -> f64) -> f64 {
        if hi - lo <= PAIRWISE_BLOCK {
            return (lo..hi).map(f).sum();
        }
        let mid = lo + (hi - lo) / 2;
        rec(lo, mid, f) + rec(mid, hi, f)
    }
    rec(0, n, f)
}

pub fn pairwise_sum_complex_by(n: usize, f: &impl Fn(usize) -> C64) -> C64 {
    fn rec(lo: usize, hi: usize, f: &impl Fn(usize) -> C64) -> C64 {
        if hi - lo <= PAIRWISE_BLOCK {
            return (lo..hi).map(f).sum();
        }
        let mid = lo + (hi - lo) / 2;
        rec(lo, mid, f) + rec(mid, hi, f)
    }
    rec(0, n, f)
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Volume of the unit ball in ℝ^d, `π^{d/2}/Γ(d/2+1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0 + 1.0)
}

/// Surface area of S^{d−1}, `2π^{d/2}/Γ(d/2)`.
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0)
}

/// Ordinary least-squares line `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (zero for an exact fit).
    pub slope_stderr: f64,
    /// Euclidean norm of the residual vector.
    pub residual_norm: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::DimensionMismatch { expected: n, got: ys.len() });
    }
    if n < 2 {
        return Err(Error::invalid("line fit needs at least two points"));
    }
    let nf = n as f64;
    let mx = pairwise_sum(xs) / nf;
    let my = pairwise_sum(ys) / nf;
    let sxx = pairwise_sum_by(n, &|i| (xs[i] - mx) * (xs[i] - mx));
    if sxx <= 0.0 {
        return Err(Error::invalid("line fit needs distinct abscissae"));
    }
    let sxy = pairwise_sum_by(n, &|i| (xs[i] - mx) * (ys[i] - my));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss = pairwise_sum_by(n, &|i| {
        let r = ys[i] - intercept - slope * xs[i];
        r * r
    });
    let slope_stderr = if n > 2 { (rss / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(LineFit { slope, intercept, slope_stderr, residual_norm: rss.sqrt() })
}

/// Smallest `x` in `[lo, hi]` where a monotone predicate flips to true,
/// located to within `tol`. Returns `None` if the predicate is false at `hi`.
pub fn bisect_first_true(lo: f64, hi: f64, tol: f64, pred: impl Fn(f64) -> bool) -> Option<f64> {
    if !pred(hi) {
        return None;
    }
    if pred(lo) {
        return Some(lo);
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if pred(m) {
            b = m;
        } else {
            a = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Seeded generator used for every random quantity in the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dyadic grid `base·2^k` for `k = 0..count`, each point multiplied by an
/// independent factor drawn uniformly from `[1 − jitter, 1 + jitter]`.
///
/// With `jitter < 1/3` the output stays strictly increasing.
pub fn jittered_dyadic_grid(base: f64, count: usize, jitter: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..count)
        .map(|k| {
            let j = if jitter > 0.0 { r.random_range(-jitter..=jitter) } else { 0.0 };
            base * 2f64.powi(k as i32) * (1.0 + j)
        })
        .collect()
}

/// Radical inverse of `i` in base `b` (van der Corput).
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut x = 0.0;
    while i > 0 {
        x += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    x
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Point `i` of the Halton sequence in `[0,1)^d` (d ≤ 12).
pub fn halton(i: u64, d: usize) -> Vec<f64> {
    assert!(d <= PRIMES.len(), "halton sequence supports d ≤ {}", PRIMES.len());
    PRIMES[..d].iter().map(|&p| radical_inverse(i, p)).collect()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for k in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) as f64 * z * p1 - k as f64 * p2) / (k + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

//! Known bounds on Fourier decay and divergence-set exponents.
//!
//! Lower bounds on `β_d(α)` are pointwise maxima of the classical list and the
//! multilinear bound `α − 1 + (d−α)²/((d−1)(2d−α−1))`; upper bounds are
//! pointwise minima of the small-set, Knapp and lattice-sphere bounds. For
//! `d = 2` the decay exponent is known exactly and both sides return the table.

use crate::numerics::bisect_first_true;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Bisection tolerance for every implicit threshold.
pub const THRESHOLD_TOL: f64 = 1e-10;

/// Closed-form exponent expressions. `d` is the ambient dimension (or `n`
/// for the Schrödinger pieces) and the argument is `α` or `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// `α`
    Identity,
    /// `(d−1)/2`
    HalfCodim,
    /// `1/2`
    Half,
    /// `α/2`
    HalfAlpha,
    /// `α − 1 + (d+2−2α)/4`
    Erdogan,
    /// `α − 1`
    Sjolin,
    /// `α − 1 + (d−α)²/((d−1)(2d−α−1))`
    Multilinear,
    /// `α − 1 + (d−α)/2`
    Knapp,
    /// `α − 1 + 2(d−α)/d`
    LatticeSphere,
    /// `n + 1 − (2 + 2/(2n−1))s`
    SchrodingerLow,
    /// `n + 1 − 1/(n+1) − 2s`
    SchrodingerMid,
    /// `n − 2s`
    SchrodingerHigh,
}

impl Formula {
    pub fn eval(self, d: usize, x: f64) -> f64 {
        let d = d as f64;
        match self {
            Formula::Identity => x,
            Formula::HalfCodim => (d - 1.0) / 2.0,
            Formula::Half => 0.5,
            Formula::HalfAlpha => x / 2.0,
            Formula::Erdogan => x - 1.0 + (d + 2.0 - 2.0 * x) / 4.0,
            Formula::Sjolin => x - 1.0,
            Formula::Multilinear => x - 1.0 + (d - x).powi(2) / ((d - 1.0) * (2.0 * d - x - 1.0)),
            Formula::Knapp => x - 1.0 + (d - x) / 2.0,
            Formula::LatticeSphere => x - 1.0 + 2.0 * (d - x) / d,
            Formula::SchrodingerLow => d + 1.0 - (2.0 + 2.0 / (2.0 * d - 1.0)) * x,
            Formula::SchrodingerMid => d + 1.0 - 1.0 / (d + 1.0) - 2.0 * x,
            Formula::SchrodingerHigh => d - 2.0 * x,
        }
    }
}

/// One interval of a piecewise bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub formula: Formula,
    pub provenance: String,
}

impl Piece {
    fn new(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool, formula: Formula, provenance: &str) -> Self {
        Piece { lo, hi, lo_closed, hi_closed, formula, provenance: provenance.to_string() }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }
}

/// Interval/formula/provenance triples for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseBound {
    pub d: usize,
    pub pieces: Vec<Piece>,
}

impl PiecewiseBound {
    fn new(d: usize, pieces: Vec<Piece>) -> Self {
        PiecewiseBound { d, pieces: pieces.into_iter().filter(|p| !p.is_empty()).collect() }
    }

    /// First piece containing `x`.
    pub fn eval(&self, x: f64) -> Option<(f64, &str)> {
        self.pieces.iter().find(|p| p.contains(x)).map(|p| (p.formula.eval(self.d, x), p.provenance.as_str()))
    }

    /// [`PiecewiseBound::eval`] with an owned provenance.
    pub fn eval_owned(&self, x: f64) -> Option<(f64, String)> {
        self.eval(x).map(|(v, p)| (v, p.to_string()))
    }

    /// Largest jump between neighbouring formulas at interior breakpoints.
    pub fn continuity_defect(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| (w[0].formula.eval(self.d, w[0].hi) - w[1].formula.eval(self.d, w[1].lo)).abs())
            .fold(0.0, f64::max)
    }

    /// True when consecutive pieces share endpoints and at least one side
    /// of each shared endpoint is closed.
    pub fn covers_without_gaps(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0].hi == w[1].lo && (w[0].hi_closed || w[1].lo_closed))
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces.windows(2).map(|w| w[0].hi).collect()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.pieces.first().map_or(0.0, |p| p.lo), self.pieces.last().map_or(0.0, |p| p.hi))
    }
}

/// A bound evaluated at one argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    /// `d` for decay and wave exponents, `n` for Schrödinger exponents.
    pub dim: usize,
    pub argument: f64,
    pub value: f64,
    pub provenance: String,
}

/// Exact decay exponent in the plane.
pub fn beta2_table() -> PiecewiseBound {
    PiecewiseBound::new(
        2,
        vec![
            Piece::new(0.0, false, 0.5, true, Formula::Identity, "mattila"),
            Piece::new(0.5, true, 1.0, true, Formula::Half, "wolff"),
            Piece::new(1.0, true, 2.0, true, Formula::HalfAlpha, "wolff"),
        ],
    )
}

/// Classical lower bounds for `d ≥ 3` (without the multilinear bound).
pub fn classical_lower(d: usize) -> PiecewiseBound {
    let df = d as f64;
    PiecewiseBound::new(
        d,
        vec![
            Piece::new(0.0, false, (df - 1.0) / 2.0, true, Formula::Identity, "mattila"),
            Piece::new((df - 1.0) / 2.0, true, df / 2.0, true, Formula::HalfCodim, "mattila"),
            Piece::new(df / 2.0, true, (df + 2.0) / 2.0, true, Formula::Erdogan, "erdogan"),
            Piece::new((df + 2.0) / 2.0, true, df, true, Formula::Sjolin, "sjolin"),
        ],
    )
}

/// Small-set and Knapp upper bounds.
pub fn classical_upper(d: usize) -> PiecewiseBound {
    let df = d as f64;
    PiecewiseBound::new(
        d,
        vec![
            Piece::new(0.0, false, df - 2.0, true, Formula::Identity, "small-set"),
            Piece::new(df - 2.0, true, df, true, Formula::Knapp, "knapp"),
        ],
    )
}

fn check_alpha(d: usize, alpha: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid(format!("dimension must be ≥ 2, got {d}")));
    }
    if !(alpha > 0.0 && alpha <= d as f64) {
        return Err(Error::invalid(format!("alpha must lie in (0, {d}], got {alpha}")));
    }
    Ok(())
}

/// Best known lower bound on `β_d(α)`.
pub fn beta_lower(d: usize, alpha: f64) -> Result<BoundQuery> {
    check_alpha(d, alpha)?;
    let (value, provenance) = if d == 2 {
        beta2_table().eval_owned(alpha).expect("table covers (0,2]")
    } else {
        let (v, p) = classical_lower(d).eval_owned(alpha).expect("classical list covers (0,d]");
        let m = Formula::Multilinear.eval(d, alpha);
        if m > v {
            (m, "multilinear".to_string())
        } else {
            (v, p)
        }
    };
    Ok(BoundQuery { dim: d, argument: alpha, value, provenance })
}

/// Best known upper bound on `β_d(α)`.
pub fn beta_upper(d: usize, alpha: f64) -> Result<BoundQuery> {
    check_alpha(d, alpha)?;
    if d == 2 {
        let (v, p) = beta2_table().eval_owned(alpha).expect("table covers (0,2]");
        return Ok(BoundQuery { dim: 2, argument: alpha, value: v, provenance: format!("{p} (sharp)") });
    }
    let (mut value, mut provenance) = classical_upper(d).eval_owned(alpha).expect("upper list covers (0,d]");
    if d >= 4 {
        let l = Formula::LatticeSphere.eval(d, alpha);
        if l < value {
            value = l;
            provenance = "lattice-sphere".into();
        }
    }
    Ok(BoundQuery { dim: d, argument: alpha, value, provenance })
}

/// Which lower bound feeds an implication solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FloorVariant {
    /// Pointwise maximum of everything known, as in [`beta_lower`].
    Full,
    /// Classical list only.
    Classical,
    /// `α − 1` on all of `(0, d]`.
    SjolinOnly,
    /// `α − 1 + (d+2−2α)/4` on all of `(0, d]`.
    ErdoganOnly,
    /// The multilinear bound on all of `(0, d]`.
    MultilinearOnly,
}

impl FloorVariant {
    pub fn eval(self, d: usize, alpha: f64) -> f64 {
        match self {
            FloorVariant::Full => beta_lower(d, alpha).map(|q| q.value).unwrap_or(f64::NAN),
            FloorVariant::Classical if d == 2 => beta2_table().eval(alpha).map_or(f64::NAN, |v| v.0),
            FloorVariant::Classical => classical_lower(d).eval(alpha).map_or(f64::NAN, |v| v.0),
            FloorVariant::SjolinOnly => Formula::Sjolin.eval(d, alpha),
            FloorVariant::ErdoganOnly => Formula::Erdogan.eval(d, alpha),
            FloorVariant::MultilinearOnly => Formula::Multilinear.eval(d, alpha),
        }
    }
}

/// Schrödinger divergence-set bound `α_n(s)` as a min over the applicable
/// pieces. These pieces come from different results and jump at `s = n/4`.
pub fn schrodinger_pieces(n: usize) -> PiecewiseBound {
    let nf = n as f64;
    let start = 0.5 - 1.0 / (4.0 * nf);
    let knee = 1.0 - 3.0 / (2.0 * (nf + 1.0));
    PiecewiseBound::new(
        n,
        vec![
            Piece::new(start, false, knee, true, Formula::SchrodingerLow, "multilinear-low"),
            Piece::new(knee, true, nf / 4.0, false, Formula::SchrodingerMid, "multilinear-mid"),
            Piece::new(nf / 4.0, true, nf / 2.0, true, Formula::SchrodingerHigh, "sharp-high"),
        ],
    )
}

/// Upper bound on `α_n(s)`, the dimension of Schrödinger divergence sets.
///
/// Below `1/2 − 1/(4n)` no convergence result applies and the trivial value
/// `n` is returned with provenance `dahlberg-kenig regime`.
pub fn alpha_upper_schrodinger(n: usize, s: f64) -> Result<BoundQuery> {
    if n < 2 {
        return Err(Error::invalid(format!("n must be ≥ 2, got {n}")));
    }
    let nf = n as f64;
    if !(s > 0.0 && s <= nf / 2.0) {
        return Err(Error::invalid(format!("s must lie in (0, {}], got {s}", nf / 2.0)));
    }
    if s <= 0.5 - 1.0 / (4.0 * nf) {
        return Ok(BoundQuery { dim: n, argument: s, value: nf, provenance: "dahlberg-kenig regime".into() });
    }
    let pieces = schrodinger_pieces(n);
    let best = pieces
        .pieces
        .iter()
        .filter(|p| p.contains(s))
        .map(|p| (p.formula.eval(n, s), p.provenance.clone()))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("pieces cover (1/2 − 1/4n, n/2]");
    Ok(BoundQuery { dim: n, argument: s, value: best.0.clamp(0.0, nf), provenance: best.1 })
}

/// Upper bound on `γ_d(s)`: `inf{α ∈ (0,d] : floor(d,α) > d − 2s}`, or `d`
/// if no `α` qualifies.
pub fn gamma_upper_wave(d: usize, s: f64, floor: FloorVariant) -> Result<f64> {
    if d < 2 {
        return Err(Error::invalid(format!("dimension must be ≥ 2, got {d}")));
    }
    let df = d as f64;
    if !(s > 0.0 && s < df / 2.0) {
        return Err(Error::invalid(format!("s must lie in (0, {}), got {s}", df / 2.0)));
    }
    let target = df - 2.0 * s;
    let lo = 1e-12;
    Ok(bisect_first_true(lo, df, THRESHOLD_TOL, |a| floor.eval(d, a) > target).unwrap_or(df))
}

/// Smallest `α` with `floor(d, α) > d − α`: the dimension above which
/// distance sets have positive Lebesgue measure.
pub fn distance_set_threshold(d: usize, floor: FloorVariant) -> Result<f64> {
    if d < 3 {
        return Err(Error::invalid(format!("distance thresholds need d ≥ 3, got {d}")));
    }
    let df = d as f64;
    bisect_first_true(1e-12, df, THRESHOLD_TOL, |a| floor.eval(d, a) > df - a)
        .ok_or_else(|| Error::NoCrossing(format!("{floor:?} never exceeds d − α on (0, {d}]")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MlinearVariant {
    /// Consequence of the conjectured m-linear extension estimates.
    Conjectured,
    /// Consequence of the partial m-linear estimates already available.
    Partial,
}

/// m-linear lower-bound formula without range checks (so `m = d` can be
/// evaluated for the reduction identity).
pub fn mlinear_formula(d: usize, alpha: f64, m: usize, variant: MlinearVariant) -> f64 {
    let (d, m, a) = (d as f64, m as f64, alpha);
    match variant {
        MlinearVariant::Conjectured => {
            let first = a - 1.0 + (d - a) * (d + m - 2.0 * a) / (2.0 * (m - 1.0) * (d + m - a - 1.0));
            first.min(a - 2.0 * a / (d + m))
        }
        MlinearVariant::Partial => {
            let first = a - 1.0 + (d - a) * (m - a) / ((m - 1.0) * (2.0 * m - a - 1.0));
            first.min(a - a / m)
        }
    }
}

/// Lower bound on `β_d(α)` implied by m-linear extension estimates.
pub fn conjectural_beta_mlinear(d: usize, alpha: f64, m: usize, variant: MlinearVariant) -> Result<f64> {
    if d < 4 {
        return Err(Error::invalid(format!("m-linear bounds need d ≥ 4, got {d}")));
    }
    check_alpha(d, alpha)?;
    if !(3..d).contains(&m) {
        return Err(Error::invalid(format!("m must lie in [3, {}], got {m}", d - 1)));
    }
    Ok(mlinear_formula(d, alpha, m, variant))
}

/// Smallest cap scale exponent `λ = (d−α)/(2d−α−1)` in the decomposition
/// behind the multilinear bound (caps down to side `R^{−λ}`).
pub fn smallest_cap_exponent(d: usize, alpha: f64) -> Result<f64> {
    check_alpha(d, alpha)?;
    let (d, a) = (d as f64, alpha);
    Ok((d - a) / (2.0 * d - a - 1.0))
}

/// Regularity threshold `s₀(n, α)` of the fractal Schrödinger maximal estimate.
pub fn maximal_threshold_schrodinger(n: usize, alpha: f64) -> Result<BoundQuery> {
    if n < 1 {
        return Err(Error::invalid("n must be ≥ 1"));
    }
    let nf = n as f64;
    if !(alpha >= 0.0 && alpha <= nf) {
        return Err(Error::invalid(format!("alpha must lie in [0, {n}], got {alpha}")));
    }
    let first = (nf - alpha) / 2.0 + nf / (2.0 * (nf + 1.0));
    let second = (nf - alpha + 1.0) * (0.5 - 1.0 / (4.0 * nf));
    let knee = nf - 1.0 + 2.0 / (nf + 1.0);
    let (value, provenance) =
        if alpha <= knee { (first, "low-dimension branch") } else { (second, "high-dimension branch") };
    Ok(BoundQuery { dim: n, argument: alpha, value, provenance: provenance.into() })
}

/// One row of the `bounds` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub d: usize,
    pub alpha: f64,
    pub beta_lower: f64,
    pub lower_provenance: String,
    pub beta_upper: f64,
    pub upper_provenance: String,
}

/// Lower/upper bounds on the grid `α_k = d·k/points`, `k = 1..=points`.
pub fn bounds_table(d: usize, points: usize) -> Result<Vec<BoundsRow>> {
    if points == 0 {
        return Err(Error::invalid("table needs at least one grid point"));
    }
    (1..=points)
        .map(|k| {
            let alpha = d as f64 * k as f64 / points as f64;
            let lo = beta_lower(d, alpha)?;
            let up = beta_upper(d, alpha)?;
            Ok(BoundsRow {
                d,
                alpha,
                beta_lower: lo.value,
                lower_provenance: lo.provenance,
                beta_upper: up.value,
                upper_provenance: up.provenance,
            })
        })
        .collect()
}

/// Implied thresholds for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSummary {
    pub d: usize,
    /// Distance-set threshold from the full floor (absent for `d = 2`).
    pub distance_threshold: Option<f64>,
    pub distance_threshold_erdogan: Option<f64>,
    pub distance_threshold_multilinear: Option<f64>,
    /// `γ_d(1)` bound from the full floor.
    pub gamma_energy: f64,
    /// `γ_d(1)` bound from `α − 1` alone.
    pub gamma_energy_sjolin: f64,
    pub max_gap: f64,
}

pub fn threshold_summary(d: usize, grid_points: usize) -> Result<ThresholdSummary> {
    let dist = |f| if d >= 3 { distance_set_threshold(d, f).ok() } else { None };
    let max_gap =
        bounds_table(d, grid_points)?.iter().map(|r| r.beta_upper - r.beta_lower).fold(f64::NEG_INFINITY, f64::max);
    Ok(ThresholdSummary {
        d,
        distance_threshold: dist(FloorVariant::Full),
        distance_threshold_erdogan: dist(FloorVariant::ErdoganOnly),
        distance_threshold_multilinear: dist(FloorVariant::MultilinearOnly),
        gamma_energy: gamma_upper_wave(d, 1.0, FloorVariant::Full)?,
        gamma_energy_sjolin: gamma_upper_wave(d, 1.0, FloorVariant::SjolinOnly)?,
        max_gap,
    })
}

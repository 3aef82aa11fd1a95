use clap::{Args, ValueEnum};
use fdl_core::bounds::{bounds_table, threshold_summary};
use fdl_core::caps::{
    bg_inequality_probe, build_scale_ladder, cap_partition, dual_cuboid_oscillation, transversal_tuples,
    transversality_constant, Cap, GridFunction, OscillationReport,
};
use fdl_core::evolution::{maximal_scaling_fit, DatumFamily};
use fdl_core::io::{write_csv_file, write_json_file, Cell};
use fdl_core::knapp::{knapp_pipeline, KnappSampling};
use fdl_core::measure::{make_cantor_measure, make_lattice_measure, make_sphere_measure};
use fdl_core::numerics::{jittered_dyadic_grid, rng};
use fdl_core::spectral::{build_sphere_quadrature, decay_scan_with, fit_decay_exponent, ScanMode};
use fdl_core::{DiscreteMeasure, KnappConfig, Phase, ScaleLadder, C64};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Failure classes, mapped to exit codes 1 and 2 by `main`.
#[derive(Debug)]
pub enum CmdError {
    Validation(String),
    Guard(String),
}

impl From<fdl_core::Error> for CmdError {
    fn from(e: fdl_core::Error) -> Self {
        if e.is_numeric_guard() {
            CmdError::Guard(e.to_string())
        } else {
            CmdError::Validation(e.to_string())
        }
    }
}

pub type CmdResult = Result<(), CmdError>;

fn invalid(msg: impl Into<String>) -> CmdError {
    CmdError::Validation(msg.into())
}

/// The single writer for a run; reports each file it creates.
pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self, CmdError> {
        std::fs::create_dir_all(dir).map_err(|e| invalid(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Output { dir: dir.to_path_buf() })
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> CmdResult {
        let p = self.dir.join(name);
        write_json_file(&p, value)?;
        println!("wrote {}", p.display());
        Ok(())
    }

    pub fn csv(&self, name: &str, header: &[&str], rows: &[Vec<Cell>]) -> CmdResult {
        let p = self.dir.join(name);
        write_csv_file(&p, header, rows)?;
        println!("wrote {}", p.display());
        Ok(())
    }
}

// ---------------------------------------------------------------- bounds

#[derive(Args, Serialize, Debug)]
pub struct BoundsFlags {
    /// Ambient dimension
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of α grid points in (0, d]
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    pub d: usize,
    pub points: usize,
    pub seed: u64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig { d: 3, points: 1000, seed: 0 }
    }
}

pub fn bounds(cfg: &BoundsConfig, out: &Output) -> CmdResult {
    let rows: Vec<Vec<Cell>> = bounds_table(cfg.d, cfg.points)?
        .into_iter()
        .map(|r| {
            vec![
                r.d.into(),
                r.alpha.into(),
                r.beta_lower.into(),
                r.lower_provenance.into(),
                r.beta_upper.into(),
                r.upper_provenance.into(),
            ]
        })
        .collect();
    out.csv("bounds.csv", &["d", "alpha", "beta_lower", "lower_provenance", "beta_upper", "upper_provenance"], &rows)?;
    let summary = threshold_summary(cfg.d, cfg.points)?;
    out.json("thresholds.json", &summary)?;
    if let Some(t) = summary.distance_threshold {
        println!("distance-set threshold {t:.6}");
    }
    println!("largest upper − lower gap {:.6}", summary.max_gap);
    Ok(())
}

// ---------------------------------------------------------------- decay-scan

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinMeasure {
    Sphere,
    Cantor,
    Lattice,
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    Band,
    Pointwise,
}

#[derive(Args, Serialize, Debug)]
pub struct DecayFlags {
    /// Measure JSON file; overrides --builtin
    #[arg(long)]
    pub measure: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<BuiltinMeasure>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Support points of the sphere measure
    #[arg(long)]
    pub points: Option<usize>,
    /// Cantor contraction ratio
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Cantor generation
    #[arg(long)]
    pub depth: Option<usize>,
    /// Lattice scale R
    #[arg(long = "lattice-R")]
    #[serde(rename = "lattice_R")]
    pub lattice_r: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Sphere quadrature nodes
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Smallest R of the dyadic grid
    #[arg(long = "R-min")]
    #[serde(rename = "R_min")]
    pub r_min: Option<f64>,
    /// Number of dyadic R values
    #[arg(long)]
    pub count: Option<usize>,
    /// Multiplicative jitter of the R grid
    #[arg(long)]
    pub jitter: Option<f64>,
    #[arg(long, value_enum)]
    pub sampling: Option<Sampling>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct DecayConfig {
    pub measure: Option<PathBuf>,
    pub builtin: BuiltinMeasure,
    pub d: usize,
    pub points: usize,
    pub ratio: f64,
    pub depth: usize,
    #[serde(rename = "lattice_R")]
    pub lattice_r: f64,
    pub kappa: f64,
    pub eps: f64,
    pub nodes: usize,
    #[serde(rename = "R_min")]
    pub r_min: f64,
    pub count: usize,
    pub jitter: f64,
    pub sampling: Sampling,
    pub seed: u64,
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig {
            measure: None,
            builtin: BuiltinMeasure::Sphere,
            d: 3,
            points: 20_000,
            ratio: 0.25,
            depth: 5,
            lattice_r: 16.0,
            kappa: 0.5,
            eps: 0.5,
            nodes: 2000,
            r_min: 4.0,
            count: 5,
            jitter: 0.05,
            sampling: Sampling::Band,
            seed: 0,
        }
    }
}

fn load_measure(path: &Path) -> Result<DiscreteMeasure, CmdError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(DiscreteMeasure::from_json(&text)?)
}

pub fn decay_scan(cfg: &DecayConfig, out: &Output) -> CmdResult {
    let mu = match (&cfg.measure, cfg.builtin) {
        (Some(p), _) => load_measure(p)?,
        (None, BuiltinMeasure::Sphere) => make_sphere_measure(cfg.d, cfg.points)?,
        (None, BuiltinMeasure::Cantor) => make_cantor_measure(cfg.d, cfg.ratio, cfg.depth)?,
        (None, BuiltinMeasure::Lattice) => make_lattice_measure(cfg.d, cfg.lattice_r, cfg.kappa, cfg.eps, 1)?,
    };
    let quad = build_sphere_quadrature(mu.dim(), cfg.nodes, cfg.seed)?;
    let grid = jittered_dyadic_grid(cfg.r_min, cfg.count, cfg.jitter, cfg.seed);
    let mode = match cfg.sampling {
        Sampling::Band => ScanMode::band_default(),
        Sampling::Pointwise => ScanMode::Pointwise,
    };
    let curve = decay_scan_with(&mu, &grid, &quad, mode)?;
    let rows: Vec<Vec<Cell>> = curve.r.iter().zip(&curve.sigma).map(|(r, s)| vec![(*r).into(), (*s).into()]).collect();
    out.csv("curve.csv", &["R", "sigma"], &rows)?;
    let fit = fit_decay_exponent(&curve, 0..curve.len())?;
    out.json("fit.json", &fit)?;
    println!("{}: beta = {:.4} ± {:.4}", mu.label(), fit.beta, fit.stderr);
    Ok(())
}

// ---------------------------------------------------------------- knapp

#[derive(Args, Serialize, Debug)]
pub struct KnappFlags {
    #[arg(long)]
    pub d: Option<usize>,
    /// Lattice radius; R = (2πn)^(1/κ)
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Sampled directions and sampled points each; phase pairs are samples²
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct KnappRunConfig {
    pub d: usize,
    pub n: u64,
    pub kappa: f64,
    pub rho: f64,
    pub eps: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for KnappRunConfig {
    fn default() -> Self {
        KnappRunConfig { d: 4, n: 1, kappa: 0.5, rho: 0.01, eps: 0.01, samples: 100, seed: 0 }
    }
}

pub fn knapp(cfg: &KnappRunConfig, out: &Output) -> CmdResult {
    let kc = KnappConfig::new(cfg.d, cfg.n, cfg.kappa, cfg.rho, cfg.eps)?;
    let sampling =
        KnappSampling { omega_samples: cfg.samples, x_samples: cfg.samples, seed: cfg.seed, ..Default::default() };
    let (report, phases) = knapp_pipeline(kc, sampling)?;
    out.json("report.json", &report)?;
    let rows: Vec<Vec<Cell>> =
        phases.iter().map(|p| vec![p.omega_idx.into(), p.x_idx.into(), p.phase_mod_2pi.into()]).collect();
    out.csv("phases.csv", &["omega_idx", "x_idx", "phase_mod_2pi"], &rows)?;
    println!(
        "R = {:.3}, #Γ = {}, implied beta {:.4}, formula {:.4}, phases inside {:.4}",
        report.big_r, report.gamma_count, report.implied_beta, report.formula_beta, report.phase_inside_fraction
    );
    Ok(())
}

// ---------------------------------------------------------------- caps

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseChoice {
    Paraboloid,
    Sphere,
}

#[derive(Args, Serialize, Debug)]
pub struct CapsFlags {
    #[arg(long, value_enum)]
    pub phase: Option<PhaseChoice>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Side of the root cap, centred at the origin
    #[arg(long)]
    pub delta: Option<f64>,
    /// Partition factor for the transversality demo
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: Option<f64>,
    /// R of the scale ladder
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub big_r: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Explicit ladder scales K_2..K_(d+1), comma separated
    #[arg(long, value_delimiter = ',')]
    pub scales: Option<Vec<f64>>,
    /// Grid nodes per axis of the probe datum
    #[arg(long)]
    pub grid: Option<usize>,
    /// Spatial probe points
    #[arg(long)]
    pub probes: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct CapsConfig {
    pub phase: PhaseChoice,
    pub d: usize,
    pub delta: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub eps: f64,
    pub scales: Option<Vec<f64>>,
    pub grid: usize,
    pub probes: usize,
    pub seed: u64,
}

impl Default for CapsConfig {
    fn default() -> Self {
        CapsConfig {
            phase: PhaseChoice::Paraboloid,
            d: 3,
            delta: 0.5,
            k: 4.0,
            big_r: 1e3,
            eps: 0.05,
            scales: None,
            grid: 16,
            probes: 200,
            seed: 0,
        }
    }
}

#[derive(Serialize)]
struct CapsSummary {
    children: usize,
    /// Transversality of the `d` children nearest the corners of the root cap.
    corner_transversality: f64,
    theta: f64,
    transversal_tuples: usize,
    probe_max_ratio: f64,
    probe_mean_ratio: f64,
    probe_ratios: Vec<f64>,
    /// `max/min |T g|` on dual-cuboid translates centred at the first probe points.
    oscillation: OscillationReport,
}

pub fn caps(cfg: &CapsConfig, out: &Output) -> CmdResult {
    if cfg.d < 2 {
        return Err(invalid("caps need d ≥ 2"));
    }
    let phase = match cfg.phase {
        PhaseChoice::Paraboloid => Phase::paraboloid(),
        PhaseChoice::Sphere => Phase::sphere(),
    };
    let root = Cap::new(phase, &vec![0.0; cfg.d - 1], cfg.delta)?;
    let ladder = match &cfg.scales {
        Some(s) => ScaleLadder::with_scales(cfg.big_r, cfg.eps, cfg.d, s.clone())?,
        None => build_scale_ladder(cfg.big_r, cfg.eps, cfg.d)?,
    };
    let rows: Vec<Vec<Cell>> = (2..=cfg.d + 1)
        .map(|m| {
            let ok = ladder.chain.iter().find(|c| c.m == m).map_or("n/a", |c| if c.ok { "true" } else { "false" });
            vec![m.into(), ladder.k(m).into(), ok.into()]
        })
        .collect();
    out.csv("ladder.csv", &["m", "K_m", "chain_ok"], &rows)?;

    let (kids, _) = cap_partition(&root, cfg.k)?;
    // children at d distinct corners of the root cube
    let picks: Vec<Cap> = (0..cfg.d)
        .map(|i| {
            let corner: Vec<f64> = (0..cfg.d - 1).map(|j| if i >> j & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let c = if i == cfg.d - 1 { vec![0.0; cfg.d - 1] } else { corner };
            kids.iter()
                .max_by(|a, b| {
                    let s = |x: &Cap| x.center().iter().zip(&c).map(|(p, q)| p * q).sum::<f64>();
                    s(a).total_cmp(&s(b))
                })
                .cloned()
                .expect("partition is nonempty")
        })
        .collect();
    let distinct = picks.iter().enumerate().all(|(i, a)| picks[..i].iter().all(|b| a != b));
    let corner_transversality = if distinct { transversality_constant(&picks, 2)? } else { 0.0 };
    let theta = cfg.k.powi(-(cfg.d as i32));
    let tuples = transversal_tuples(&kids, cfg.d, theta)?.len();

    let mut r = rng(cfg.seed);
    let mut g = GridFunction::tensor(&root, cfg.grid, |_| C64::new(0.0, 0.0))?;
    for v in g.values.iter_mut() {
        *v = C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
    }
    let reach = 30.0 / cfg.delta;
    let pts: Vec<Vec<f64>> =
        (0..cfg.probes).map(|_| (0..cfg.d).map(|_| r.random_range(-reach..reach)).collect()).collect();
    let probe = bg_inequality_probe(&root, &g, &ladder, &pts)?;
    let oscillation = dual_cuboid_oscillation(&root, &g, &pts[..pts.len().min(8)], 3)?;
    let summary = CapsSummary {
        children: kids.len(),
        corner_transversality,
        theta,
        transversal_tuples: tuples,
        probe_max_ratio: probe.max_ratio,
        probe_mean_ratio: probe.mean_ratio,
        probe_ratios: probe.ratios,
        oscillation,
    };
    out.json("caps.json", &summary)?;
    println!(
        "{} children, corner transversality {:.4}, {} tuples above θ = {:.3e}, probe max ratio {:.4e}, {} of {} translates oscillate beyond the factor 4",
        summary.children,
        summary.corner_transversality,
        tuples,
        theta,
        summary.probe_max_ratio,
        summary.oscillation.violations,
        summary.oscillation.ratios.len()
    );
    Ok(())
}

// ---------------------------------------------------------------- evolve

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RandomAnnulus,
    SingleMode,
}

#[derive(Args, Serialize, Debug)]
pub struct EvolveFlags {
    /// Spatial dimension
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Measure JSON file; defaults to a uniform grid in [0, n^(-1/2)]^n
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Grid points per axis of the default measure
    #[arg(long)]
    pub grid: Option<usize>,
    /// Frequency scales, comma separated
    #[arg(long = "R", value_delimiter = ',')]
    #[serde(rename = "R")]
    pub r: Option<Vec<f64>>,
    /// Number of random data per scale
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub n: usize,
    pub alpha: f64,
    pub measure: Option<PathBuf>,
    pub grid: usize,
    #[serde(rename = "R")]
    pub r: Vec<f64>,
    pub seeds: usize,
    pub family: Family,
    pub seed: u64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            n: 1,
            alpha: 1.0,
            measure: None,
            grid: 128,
            r: vec![16.0, 32.0, 64.0, 128.0, 256.0],
            seeds: 8,
            family: Family::RandomAnnulus,
            seed: 0,
        }
    }
}

fn grid_measure(n: usize, per_axis: usize) -> Result<DiscreteMeasure, CmdError> {
    if n == 0 || per_axis < 2 {
        return Err(invalid("default measure needs n ≥ 1 and at least 2 grid points per axis"));
    }
    let total = per_axis.checked_pow(n as u32).filter(|t| *t <= 1 << 22).ok_or_else(|| invalid("grid too large"))?;
    let side = 1.0 / (n as f64).sqrt();
    let mut coords = Vec::with_capacity(total * n);
    for flat in 0..total {
        let mut rem = flat;
        for _ in 0..n {
            coords.push(side * (rem % per_axis) as f64 / (per_axis - 1) as f64);
            rem /= per_axis;
        }
    }
    Ok(DiscreteMeasure::new(n, coords, vec![1.0 / total as f64; total], format!("uniform grid {per_axis}^{n}"))?)
}

pub fn evolve(cfg: &EvolveConfig, out: &Output) -> CmdResult {
    let mu = match &cfg.measure {
        Some(p) => load_measure(p)?,
        None => grid_measure(cfg.n, cfg.grid)?,
    };
    if cfg.seeds == 0 {
        return Err(invalid("need at least one seed"));
    }
    let seeds: Vec<u64> = (0..cfg.seeds as u64).map(|k| cfg.seed.wrapping_mul(1_000_003).wrapping_add(k + 1)).collect();
    let family = match cfg.family {
        Family::RandomAnnulus => DatumFamily::RandomAnnulus,
        Family::SingleMode => DatumFamily::SingleMode,
    };
    let res = maximal_scaling_fit(cfg.n, &mu, cfg.alpha, &cfg.r, &seeds, family)?;
    out.json("scan.json", &res)?;
    let rows: Vec<Vec<Cell>> =
        res.r_values.iter().zip(&res.norms).map(|(r, v)| vec![(*r).into(), (*v).into()]).collect();
    out.csv("norms.csv", &["R", "norm"], &rows)?;
    println!("slope {:.4} ± {:.4}; reference exponent {} ({})", res.slope, res.slope_stderr, res.s0, res.s0_provenance);
    Ok(())
}

// ---------------------------------------------------------------- selftest

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SelftestConfig {
    pub seed: u64,
}

pub fn selftest(out: &Output) -> CmdResult {
    let results = fdl_core::selftest::run_all();
    for c in &results {
        println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    out.json("selftest.json", &results)?;
    let failed = results.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(invalid(format!("{failed} of {} self-checks failed", results.len())));
    }
    println!("all {} self-checks passed", results.len());
    Ok(())
}

//! Numerical laboratory for the Fourier decay of fractal measures.
//!
//! The crate is organised by subsystem:
//!
//! - [`measure`]: weighted point clouds in the unit ball and brute-force
//!   estimates of the α-dimensionality constant `c_α(μ)`.
//! - [`spectral`]: Fourier transforms of measures, spherical L² averages
//!   `σ(R)` and log-log decay-exponent fits.
//! - [`bounds`]: every known lower/upper bound on the decay exponent
//!   `β_d(α)` and the derived divergence-set exponents, as executable
//!   piecewise formulas.
//! - [`knapp`]: integer points on spheres, the lattice/cap counterexample
//!   and its phase-coherence argument.
//! - [`caps`]: caps on the paraboloid and sphere, transversality, rescaling,
//!   dual cuboids, mollifiers, scale ladders and decomposition diagnostics.
//! - [`evolution`]: truncated Schrödinger and half-wave propagators, maximal
//!   functions against fractal measures and their scaling exponents.
//!
//! All computations are deterministic for a fixed seed. Reductions go through
//! [`numerics::pairwise_sum`] so results do not depend on the thread count.

pub mod bounds;
pub mod caps;
pub mod error;
pub mod evolution;
pub mod io;
pub mod knapp;
pub mod measure;
pub mod numerics;
pub mod selftest;
pub mod spectral;

pub use bounds::{BoundQuery, FloorVariant, MlinearVariant, PiecewiseBound};
pub use caps::{Cap, DualCuboid, Phase, PhaseKind, ScaleLadder};
pub use error::{Error, Result};
pub use evolution::{FrequencyDatum, MaximalScanResult};
pub use knapp::{KnappConfig, KnappReport, SphereLatticeSet};
pub use measure::{AlphaConstantReport, DiscreteMeasure};
pub use spectral::{DecayCurve, ExponentFit, QuadratureScheme, SphereQuadrature};

/// Complex numbers used throughout.
pub type C64 = num_complex::Complex64;

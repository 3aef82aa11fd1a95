//! Quick arithmetic checks of the closed-form examples, run by `fdl selftest`.

use crate::bounds::{beta2_table, beta_lower, mlinear_formula, Formula, MlinearVariant};
use crate::caps::{cap_partition, gram_wedge, Cap, Phase};
use crate::evolution::{bessel_riesz_multiplier, truncated_propagator, wave_solution, FrequencyDatum};
use crate::knapp::{jacobi_r4, sum_of_squares_points};
use crate::measure::{c_alpha_estimate, DiscreteMeasure};
use crate::spectral::{build_sphere_quadrature, fourier_transform_measure, spherical_average};
use crate::C64;
use serde::Serialize;

/// Result of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, f: impl FnOnce() -> crate::Result<(bool, String)>) -> CheckOutcome {
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckOutcome { name: name.to_string(), passed, detail }
}

fn close(a: f64, b: f64, tol: f64) -> (bool, String) {
    ((a - b).abs() <= tol, format!("got {a}, expected {b}"))
}

/// Runs every check; the caller decides how to report failures.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        check("dirac mass is invariant under transform modulus", || {
            let mu = DiscreteMeasure::dirac(&[0.3, -0.2])?;
            let v = fourier_transform_measure(&mu, &[5.0, 7.0])?.norm();
            Ok(close(v, 1.0, 1e-14))
        }),
        check("transform at zero frequency is the total mass", || {
            let mu = DiscreteMeasure::new(1, vec![0.1, 0.4], vec![0.25, 0.5], "two")?;
            Ok(close(fourier_transform_measure(&mu, &[0.0])?.re, 0.75, 1e-15))
        }),
        check("spherical average of a centred dirac is the sphere weight", || {
            let mu = DiscreteMeasure::dirac(&[0.0, 0.0, 0.0])?;
            let q = build_sphere_quadrature(3, 200, 0)?;
            Ok(close(spherical_average(&mu, 10.0, &q)?, q.weight_sum(), 1e-12))
        }),
        check("dirac has c_alpha equal to its mass at the smallest radius", || {
            let mu = DiscreteMeasure::dirac(&[0.0, 0.0])?;
            let rep = c_alpha_estimate(&mu, 1.0, &[0.5, 1.0], &[])?;
            Ok(close(rep.value, 2.0, 1e-14))
        }),
        check("planar table at alpha = 1", || {
            let v = beta2_table().eval(1.0).map_or(f64::NAN, |p| p.0);
            Ok(close(v, 0.5, 1e-15))
        }),
        check("lower bound at d = 3, alpha = 2", || Ok(close(beta_lower(3, 2.0)?.value, 1.25, 1e-12))),
        check("m-linear at m = d reduces to the multilinear bound", || {
            let a = mlinear_formula(5, 3.0, 5, MlinearVariant::Partial);
            Ok(close(a, Formula::Multilinear.eval(5, 3.0), 1e-14))
        }),
        check("r3(7) = 0", || Ok((sum_of_squares_points(3, 7)?.is_empty(), "no points".into()))),
        check("r4 matches Jacobi for N = 1..6", || {
            for n in 1..=6u64 {
                let c = sum_of_squares_points(4, n)?.len() as u64;
                if c != jacobi_r4(n) {
                    return Ok((false, format!("N = {n}: {c} vs {}", jacobi_r4(n))));
                }
            }
            Ok((true, "all equal".into()))
        }),
        check("orthonormal frame has unit wedge", || {
            let v = gram_wedge(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
            Ok(close(v, 1.0, 1e-15))
        }),
        check("cap partition at K = 1 is the identity", || {
            let cap = Cap::new(Phase::paraboloid(), &[0.0, 0.0], 0.4)?;
            let (kids, k) = cap_partition(&cap, 1.0)?;
            Ok((kids.len() == 1 && k == 1 && kids[0].lo() == cap.lo(), format!("{} children", kids.len())))
        }),
        check("zero datum propagates to zero", || {
            let f = FrequencyDatum::lattice(2, 0.5, 3.0, |_| C64::new(0.0, 0.0))?;
            Ok(close(truncated_propagator(&f, 2.0, 0.5, &[0.1, 0.2], 10.0)?.norm(), 0.0, 0.0))
        }),
        check("Bessel symbol at |xi| = sqrt 3", || {
            let f = FrequencyDatum {
                n: 3,
                h: 1.0,
                nodes: vec![1.0, 1.0, 1.0],
                values: vec![C64::new(1.0, 0.0)],
                annulus: None,
            };
            let g = bessel_riesz_multiplier(&f, 1.5, false)?;
            Ok(close(g.values[0].re, 2f64.powf(-1.5), 1e-15))
        }),
        check("cosine propagator without velocity", || {
            let v0 = FrequencyDatum { n: 1, h: 1.0, nodes: vec![2.0], values: vec![C64::new(1.0, 0.0)], annulus: None };
            let v1 = FrequencyDatum { values: vec![C64::new(0.0, 0.0)], ..v0.clone() };
            let a = wave_solution(&v0, &v1, 0.7, &[0.3], f64::INFINITY)?;
            let b = 0.5
                * (truncated_propagator(&v0, 1.0, 0.7, &[0.3], f64::INFINITY)?
                    + truncated_propagator(&v0, 1.0, -0.7, &[0.3], f64::INFINITY)?);
            Ok(close((a - b).norm(), 0.0, 1e-15))
        }),
    ]
}

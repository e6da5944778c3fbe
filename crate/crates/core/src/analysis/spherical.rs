//! Spherical curves: the curvature criterion and a geometric sphere fit of
//! the left shift.
//!
//! With ρ = 1/κ and q = ρ′/(τ − τ_G) a curve is spherical of radius r when
//!
//! ```text
//! R = q² + ρ² = r²   and   q′ + H = 0
//! ```
//!
//! R alone is not enough: a circular helix has q ≡ 0 and constant R, but
//! q′ + H = H ≠ 0. Where τ ≡ τ_G the curve is spherical iff κ is constant,
//! with r = 1/κ.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::tolerances::{relative_spread, ToleranceSet};
use crate::error::{Error, Result};
use crate::lie_algebra::{AlgebraVector, GroupSpec};
use crate::profile::CurvatureProfile;

/// Grid size used for closed-form profiles.
pub const ANALYTIC_GRID_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SphericalCase {
    /// τ ≡ τ_G: spherical iff κ is constant.
    LieTorsionOnly,
    General,
}

#[derive(Debug, Clone, Serialize)]
pub struct SphericalCheck {
    pub spherical: bool,
    pub radius: Option<f64>,
    /// √mean R (or 1/mean κ), reported whether or not the check passes.
    pub radius_estimate: f64,
    pub case: SphericalCase,
    /// max |R − mean R| / mean R (or the spread of κ in the τ ≡ τ_G case).
    pub radius_spread: f64,
    /// max |q′ + H| / (1 + |H|) away from zeros of τ − τ_G.
    pub tangent_residual: f64,
    pub tolerance: f64,
    /// Samples with |τ − τ_G| at or below the zero threshold.
    pub zero_samples: usize,
    pub samples: usize,
    /// (s, √R(s)) on the samples that enter the radius.
    #[serde(skip)]
    pub radius_samples: Vec<(f64, f64)>,
}

/// Curvature criterion on the profile's evaluation grid, with the analytic
/// or estimated spread tolerance depending on the profile kind.
pub fn spherical_check(p: &CurvatureProfile, spec: GroupSpec, tol: &ToleranceSet) -> Result<SphericalCheck> {
    let spread_tol = if p.is_sampled() {
        tol.estimated_spread
    } else {
        tol.analytic_spread
    };
    spherical_check_with(p, spec, tol, spread_tol)
}

pub fn spherical_check_with(
    p: &CurvatureProfile,
    spec: GroupSpec,
    tol: &ToleranceSet,
    spread_tol: f64,
) -> Result<SphericalCheck> {
    let grid = p.grid(ANALYTIC_GRID_POINTS);
    p.check_frenet(&grid)?.into_result()?;
    let tg = spec.torsion();
    let kappa_pp = p.kappa_fn().derivative().derivative();

    let mut kappa = Vec::with_capacity(grid.len());
    let mut d = Vec::with_capacity(grid.len());
    for &s in &grid {
        kappa.push(p.kappa(s)?);
        d.push(p.tau(s)? - tg);
    }
    let max_d = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let zero_samples = d.iter().filter(|v| v.abs() <= tol.zero).count();

    if zero_samples == grid.len() {
        let spread = relative_spread(&kappa);
        let mean = kappa.iter().sum::<f64>() / kappa.len() as f64;
        let spherical = spread <= spread_tol;
        return Ok(SphericalCheck {
            spherical,
            radius: spherical.then(|| 1.0 / mean),
            radius_estimate: 1.0 / mean,
            case: SphericalCase::LieTorsionOnly,
            radius_spread: spread,
            tangent_residual: 0.0,
            tolerance: spread_tol,
            zero_samples,
            samples: grid.len(),
            radius_samples: grid.iter().zip(&kappa).map(|(&s, k)| (s, 1.0 / k)).collect(),
        });
    }

    let mut r2 = Vec::new();
    let mut radius_samples = Vec::new();
    let mut tangent_residual: f64 = 0.0;
    for (i, &s) in grid.iter().enumerate() {
        let (k, di) = (kappa[i], d[i]);
        if di.abs() <= tol.zero {
            continue;
        }
        let kp = p.kappa_prime(s)?;
        let rho = 1.0 / k;
        let q = -kp / (k * k * di);
        r2.push(q * q + rho * rho);
        radius_samples.push((s, (q * q + rho * rho).sqrt()));
        if di.abs() > tol.zero_band * max_d {
            let kpp = kappa_pp.eval(s)?;
            let dp = p.tau_prime(s)?;
            let q_prime = -kpp / (k * k * di) + kp * (2.0 * kp * di + k * dp) / (k * k * k * di * di);
            let h = di / k;
            tangent_residual = tangent_residual.max((q_prime + h).abs() / (1.0 + h.abs()));
        }
    }
    let mean = r2.iter().sum::<f64>() / r2.len() as f64;
    let mut radius_spread = r2.iter().fold(0.0f64, |m, v| m.max((v - mean).abs())) / mean;
    let radius = mean.sqrt();
    // stretches with τ = τ_G must sit on the same sphere: κ = 1/r there
    let mut run = 0;
    for i in 0..grid.len() {
        if d[i].abs() <= tol.zero {
            run += 1;
            let next_zero = i + 1 < grid.len() && d[i + 1].abs() <= tol.zero;
            if run >= 2 || next_zero {
                radius_spread = radius_spread.max((1.0 / kappa[i] - radius).abs() / radius);
            }
        } else {
            run = 0;
        }
    }
    let spherical = radius_spread <= spread_tol && tangent_residual <= spread_tol;
    Ok(SphericalCheck {
        spherical,
        radius: spherical.then_some(radius),
        radius_estimate: radius,
        case: SphericalCase::General,
        radius_spread,
        tangent_residual,
        tolerance: spread_tol,
        zero_samples,
        samples: grid.len(),
        radius_samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereFit {
    pub center: AlgebraVector,
    pub radius: f64,
    /// RMS of |x − center| − radius.
    pub rms: f64,
}

/// Algebraic least-squares sphere through sampled points (typically a left
/// shift): solve `|x|² = 2 c·x + (r² − |c|²)` for c and r.
pub fn left_shift_sphere_fit(points: &[AlgebraVector]) -> Result<SphereFit> {
    if points.len() < 4 {
        return Err(Error::InsufficientSamples {
            needed: 4,
            got: points.len(),
        });
    }
    // center the data for conditioning
    let mean = points.iter().sum::<AlgebraVector>() / points.len() as f64;
    let scale = points.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(Error::DegenerateFit("all points coincide".into()));
    }
    let a = DMatrix::from_fn(points.len(), 4, |i, j| {
        let x = (points[i] - mean) / scale;
        if j < 3 {
            2.0 * x[j]
        } else {
            1.0
        }
    });
    let b = DVector::from_fn(points.len(), |i, _| ((points[i] - mean) / scale).norm_squared());
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > 1e-9 * smax) {
        return Err(Error::DegenerateFit(format!(
            "points do not determine a sphere (singular value ratio {:e})",
            smin / smax
        )));
    }
    let sol = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::DegenerateFit(e.to_string()))?;
    let c = AlgebraVector::new(sol[0], sol[1], sol[2]);
    let r2 = sol[3] + c.norm_squared();
    if !(r2 > 0.0) {
        return Err(Error::DegenerateFit("negative squared radius".into()));
    }
    let center = mean + c * scale;
    let radius = r2.sqrt() * scale;
    let rms = (points
        .iter()
        .map(|p| ((p - center).norm() - radius).powi(2))
        .sum::<f64>()
        / points.len() as f64)
        .sqrt();
    Ok(SphereFit { center, radius, rms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::synthesize;
    use crate::lie_algebra::left_shift;
    use nalgebra::Vector3;
    use rand::{Rng, SeedableRng};

    fn spherical_profile() -> CurvatureProfile {
        CurvatureProfile::parse(
            "2*(1+7*sin(2*s)^2)^(-1/2)",
            "2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)",
            (0.0, std::f64::consts::PI),
        )
        .unwrap()
    }

    #[test]
    fn radius_two_sphere_profile() {
        let c = spherical_check(&spherical_profile(), GroupSpec::R3, &ToleranceSet::default()).unwrap();
        assert!(c.spherical);
        assert!((c.radius.unwrap() - 2f64.sqrt()).abs() <= 1e-9);
        assert!(c.tangent_residual <= 1e-9, "{}", c.tangent_residual);
        assert!(c.zero_samples >= 2);
    }

    #[test]
    fn constant_curvature_with_lie_torsion_only() {
        for spec in [GroupSpec::R3, GroupSpec::SO3, GroupSpec::S3] {
            let p = CurvatureProfile::parse("4", &spec.torsion().to_string(), (0.0, 1.0)).unwrap();
            let c = spherical_check(&p, spec, &ToleranceSet::default()).unwrap();
            assert_eq!(c.case, SphericalCase::LieTorsionOnly);
            assert_eq!(c.radius, Some(0.25));
        }
    }

    #[test]
    fn salkowski_and_circular_helix_are_not_spherical() {
        let p = CurvatureProfile::parse("3", "2*s", (-3.0, 3.0)).unwrap();
        let c = spherical_check(&p, GroupSpec::R3, &ToleranceSet::default()).unwrap();
        assert!(!c.spherical);
        assert!(c.tangent_residual > 0.1);
        let helix = CurvatureProfile::parse("1", "1", (0.0, 3.0)).unwrap();
        let c = spherical_check(&helix, GroupSpec::R3, &ToleranceSet::default()).unwrap();
        assert!(c.radius_spread <= 1e-15);
        assert!(!c.spherical);
    }

    #[test]
    fn exact_unit_sphere_fit() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let pts: Vec<_> = (0..200)
            .map(|_| {
                Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    .normalize()
            })
            .collect();
        let fit = left_shift_sphere_fit(&pts).unwrap();
        assert!(fit.center.norm() <= 1e-12);
        assert!((fit.radius - 1.0).abs() <= 1e-12);
        assert!(fit.rms <= 1e-12);
    }

    #[test]
    fn degenerate_fits() {
        let line: Vec<_> = (0..10).map(|i| Vector3::new(i as f64, 2.0 * i as f64, 0.0)).collect();
        assert!(matches!(left_shift_sphere_fit(&line), Err(Error::DegenerateFit(_))));
        let circle: Vec<_> = (0..50)
            .map(|i| {
                let a = i as f64 * 0.1;
                Vector3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        assert!(matches!(left_shift_sphere_fit(&circle), Err(Error::DegenerateFit(_))));
        assert!(left_shift_sphere_fit(&circle[..3]).is_err());
    }

    #[test]
    fn left_shift_of_spherical_profile_fits_its_radius() {
        let p = spherical_profile();
        let traj = synthesize(&p, GroupSpec::R3, 0.0, std::f64::consts::PI, 1e-3).unwrap();
        let alpha = left_shift(traj.step, &traj.tangents(), Vector3::zeros()).unwrap();
        let fit = left_shift_sphere_fit(&alpha).unwrap();
        assert!((fit.radius - 2f64.sqrt()).abs() <= 1e-4);
        let check = spherical_check(&p, GroupSpec::R3, &ToleranceSet::default()).unwrap();
        assert!((fit.radius - check.radius.unwrap()).abs() <= 1e-3);
    }
}

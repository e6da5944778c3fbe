//! Special-curve verdicts from a curvature profile.

use std::collections::BTreeMap;

use serde::Serialize;

use super::spherical::{spherical_check_with, SphericalCheck, ANALYTIC_GRID_POINTS};
use super::tolerances::{relative_spread, ToleranceSet};
use crate::error::Result;
use crate::lie_algebra::GroupSpec;
use crate::mates::{torsion_segments, Segment};
use crate::profile::{self, CurvatureProfile};

pub const GENERAL_HELIX: &str = "general_helix";
pub const SLANT_HELIX: &str = "slant_helix";
pub const RECTIFYING: &str = "rectifying";
pub const SPHERICAL: &str = "spherical";
pub const SALKOWSKI: &str = "salkowski";
pub const ANTI_SALKOWSKI: &str = "anti_salkowski";
pub const CIRCULAR_HELIX: &str = "circular_helix";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    /// Infinite when the criterion is undefined (σ with vanishing H′).
    pub residual: f64,
    pub tolerance: f64,
}

impl Verdict {
    fn at_most(residual: f64, tolerance: f64) -> Self {
        Verdict {
            pass: residual <= tolerance,
            residual,
            tolerance,
        }
    }
}

/// Least-squares line `H ≈ slope · s + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    LineFit { slope, intercept, rms }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub verdicts: BTreeMap<&'static str, Verdict>,
    pub spherical: SphericalCheck,
    pub harmonic_fit: LineFit,
    /// First grid point where H′ vanishes, if any.
    pub sigma_singular_at: Option<f64>,
    /// Sign-constant stretches of τ − τ_G.
    pub segments: Vec<Segment>,
    pub spread_tolerance: f64,
}

impl ClassificationReport {
    pub fn passes(&self, name: &str) -> bool {
        self.verdicts.get(name).is_some_and(|v| v.pass)
    }
}

/// Classify with the analytic or estimated spread tolerance, chosen by the
/// profile kind.
pub fn classify(p: &CurvatureProfile, spec: GroupSpec, tol: &ToleranceSet) -> Result<ClassificationReport> {
    let spread_tol = if p.is_sampled() {
        tol.estimated_spread
    } else {
        tol.analytic_spread
    };
    classify_with(p, spec, tol, spread_tol)
}

pub fn classify_with(
    p: &CurvatureProfile,
    spec: GroupSpec,
    tol: &ToleranceSet,
    spread_tol: f64,
) -> Result<ClassificationReport> {
    let grid = p.grid(ANALYTIC_GRID_POINTS);
    p.check_frenet(&grid)?.into_result()?;
    let tg = spec.torsion();

    let mut kappa = Vec::with_capacity(grid.len());
    let mut tau = Vec::with_capacity(grid.len());
    let mut h = Vec::with_capacity(grid.len());
    let mut sigma = Vec::with_capacity(grid.len());
    let mut sigma_singular_at = None;
    for &s in &grid {
        let k = p.kappa(s)?;
        let t = p.tau(s)?;
        kappa.push(k);
        tau.push(t);
        h.push((t - tg) / k);
        let hp = profile::harmonic_curvature_derivative(p, spec, s)?;
        if hp.abs() <= tol.sigma_singular {
            sigma_singular_at.get_or_insert(s);
        } else {
            sigma.push(profile::sigma(p, spec, s)?);
        }
    }

    let kappa_spread = relative_spread(&kappa);
    let tau_spread = relative_spread(&tau);
    let mut verdicts = BTreeMap::new();
    verdicts.insert(GENERAL_HELIX, Verdict::at_most(relative_spread(&h), spread_tol));
    let slant = match sigma_singular_at {
        Some(_) => Verdict {
            pass: false,
            residual: f64::INFINITY,
            tolerance: spread_tol,
        },
        None => Verdict::at_most(relative_spread(&sigma), spread_tol),
    };
    verdicts.insert(SLANT_HELIX, slant);

    let fit = fit_line(&grid, &h);
    let (lo, hi) = h.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let range = hi - lo;
    let rect_residual = if range > 0.0 { fit.rms / range } else { f64::INFINITY };
    verdicts.insert(
        RECTIFYING,
        Verdict {
            pass: rect_residual <= spread_tol && fit.slope.abs() >= tol.rectifying_slope,
            residual: rect_residual,
            tolerance: spread_tol,
        },
    );

    let spherical = spherical_check_with(p, spec, tol, spread_tol)?;
    verdicts.insert(
        SPHERICAL,
        Verdict {
            pass: spherical.spherical,
            residual: spherical.radius_spread.max(spherical.tangent_residual),
            tolerance: spread_tol,
        },
    );

    let kappa_const = kappa_spread <= spread_tol;
    let tau_const = tau_spread <= spread_tol;
    verdicts.insert(
        SALKOWSKI,
        Verdict {
            pass: kappa_const && !tau_const,
            residual: kappa_spread,
            tolerance: spread_tol,
        },
    );
    verdicts.insert(
        ANTI_SALKOWSKI,
        Verdict {
            pass: !kappa_const && tau_const,
            residual: tau_spread,
            tolerance: spread_tol,
        },
    );
    verdicts.insert(
        CIRCULAR_HELIX,
        Verdict {
            pass: kappa_const && tau_const,
            residual: kappa_spread.max(tau_spread),
            tolerance: spread_tol,
        },
    );

    let segments = torsion_segments(p, spec)?.0;
    Ok(ClassificationReport {
        verdicts,
        spherical,
        harmonic_fit: fit,
        sigma_singular_at,
        segments,
        spread_tolerance: spread_tol,
    })
}

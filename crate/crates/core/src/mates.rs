//! Natural and conjugate mates built analytically from a parent profile.
//!
//! Natural mate (tangent N):
//!
//! ```text
//! κ̄ = ω = √((τ − τ_G)² + κ²),   τ̄ = τ_G + H′/(1 + H²)
//! T̄ = N,  N̄ = Ω*/ω,  B̄ = Ω/ω
//! ```
//!
//! Conjugate mate (tangent B), on segments where τ − τ_G keeps a sign ε:
//!
//! ```text
//! κ* = |τ − τ_G|,   τ* = κ + τ_G
//! T* = B,  N* = −ε N,  B* = ε T
//! ```
//!
//! Closed-form parents give closed-form mates; sampled parents give mates
//! sampled on the parent grid.

use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expression::Expr;
use crate::lie_algebra::{cumulative_integral, Frame, GroupSpec};
use crate::profile::{self, CurvatureProfile, SampledFn, ScalarFn};

/// |τ − τ_G| at or below this value counts as a zero when splitting
/// conjugate-mate segments.
pub const SEGMENT_ZERO_TOL: f64 = 1e-9;
/// Points scanned for sign changes of τ − τ_G on closed-form profiles.
pub const SEGMENT_SCAN_POINTS: usize = 4001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MateKind {
    Natural,
    Conjugate,
}

impl MateKind {
    pub fn name(self) -> &'static str {
        match self {
            MateKind::Natural => "natural",
            MateKind::Conjugate => "conjugate",
        }
    }
}

impl fmt::Display for MateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Maximal interval on which the mate is a Frenet curve. `sign` is the sign
/// of τ − τ_G there (always +1 for natural mates).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub sign: f64,
}

impl Segment {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    /// The segment shrunk by `margin` at both ends, if anything is left.
    pub fn shrunk(&self, margin: f64) -> Option<(f64, f64)> {
        let (a, b) = (self.start + margin, self.end - margin);
        (a < b).then_some((a, b))
    }
}

#[derive(Debug, Clone)]
pub struct MateApparatus {
    pub kind: MateKind,
    pub spec: GroupSpec,
    pub parent: CurvatureProfile,
    /// (κ̄, τ̄) or (κ*, τ*) over the parent domain.
    pub profile: CurvatureProfile,
    pub segments: Vec<Segment>,
    /// Zeros of τ − τ_G that split the conjugate mate (empty for natural).
    pub zeros: Vec<f64>,
}

impl MateApparatus {
    pub fn kappa(&self, s: f64) -> Result<f64> {
        self.profile.kappa(s)
    }

    pub fn tau(&self, s: f64) -> Result<f64> {
        self.profile.tau(s)
    }

    /// The mate's Lie group torsion, which is the parent's.
    pub fn lie_torsion(&self) -> f64 {
        self.spec.torsion()
    }

    pub fn segment_at(&self, s: f64) -> Option<&Segment> {
        self.segments.iter().find(|seg| s >= seg.start && s <= seg.end)
    }

    /// Mate frame in parent-frame coordinates: rows of the returned frame are
    /// coefficients on (T, N, B).
    pub fn frame_coordinates(&self, s: f64) -> Result<Frame> {
        let k = self.parent.kappa(s)?;
        let d = self.parent.tau(s)? - self.spec.torsion();
        match self.kind {
            MateKind::Natural => {
                let w = d.hypot(k);
                Ok(Frame::new(
                    Vector3::y(),
                    Vector3::new(-k, 0.0, d) / w,
                    Vector3::new(d, 0.0, k) / w,
                ))
            }
            MateKind::Conjugate => {
                let sign = self
                    .segment_at(s)
                    .map(|seg| seg.sign)
                    .filter(|_| d.abs() > SEGMENT_ZERO_TOL)
                    .ok_or_else(|| Error::NotAFrenetMate { zeros: vec![s] })?;
                Ok(Frame::new(
                    Vector3::z(),
                    Vector3::new(0.0, -sign, 0.0),
                    Vector3::new(sign, 0.0, 0.0),
                ))
            }
        }
    }

    /// Mate frame as algebra vectors, given the parent frame at `s`.
    pub fn frame_along(&self, parent: &Frame, s: f64) -> Result<Frame> {
        let c = self.frame_coordinates(s)?;
        Ok(Frame::new(
            parent.vector_from(&c.t),
            parent.vector_from(&c.n),
            parent.vector_from(&c.b),
        ))
    }
}

fn relative_torsion_fn(p: &CurvatureProfile, spec: GroupSpec) -> Option<Expr> {
    let tau = p.tau_fn().as_expr()?;
    Some(tau.clone() - Expr::num(spec.torsion()))
}

/// Sample `f` on the native grid of a sampled profile.
fn sampled_like(p: &CurvatureProfile, f: impl Fn(f64) -> Result<(f64, f64)>) -> Result<CurvatureProfile> {
    let grid = match (p.kappa_fn(), p.tau_fn()) {
        (ScalarFn::Sampled(g), _) | (_, ScalarFn::Sampled(g)) => g.clone(),
        _ => unreachable!("profile is sampled"),
    };
    let (mut ks, mut ts) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
    for i in 0..grid.len() {
        let (k, t) = f(grid.grid_point(i))?;
        ks.push(k);
        ts.push(t);
    }
    let out = CurvatureProfile::new(
        ScalarFn::Sampled(SampledFn::new(grid.start(), grid.step(), ks)?),
        ScalarFn::Sampled(SampledFn::new(grid.start(), grid.step(), ts)?),
        p.domain(),
    )?;
    Ok(out)
}

/// Natural mate: curvature ω and torsion τ_G + H′/(1 + H²).
pub fn natural_mate_apparatus(p: &CurvatureProfile, spec: GroupSpec) -> Result<MateApparatus> {
    let tg = spec.torsion();
    let profile = match (p.kappa_fn().as_expr(), relative_torsion_fn(p, spec)) {
        (Some(k), Some(d)) => {
            let k = k.clone();
            let w2 = Expr::powi(d.clone(), 2) + Expr::powi(k.clone(), 2);
            let kappa_bar = Expr::sqrt(w2.clone());
            // H′/(1 + H²) = (τ′κ − (τ − τ_G)κ′)/ω²
            let numerator = d.differentiate() * k.clone() - d * k.differentiate();
            let tau_bar = Expr::num(tg) + numerator / w2;
            CurvatureProfile::from_exprs(kappa_bar, tau_bar, p.domain())?
        }
        _ => sampled_like(p, |s| {
            let k = p.kappa(s)?;
            let d = p.tau(s)? - tg;
            let w2 = d * d + k * k;
            Ok((w2.sqrt(), tg + (p.tau_prime(s)? * k - d * p.kappa_prime(s)?) / w2))
        })?,
    };
    let (a, b) = p.domain();
    Ok(MateApparatus {
        kind: MateKind::Natural,
        spec,
        parent: p.clone(),
        profile,
        segments: vec![Segment {
            start: a,
            end: b,
            sign: 1.0,
        }],
        zeros: Vec::new(),
    })
}

/// Sign-constant segments of τ − τ_G and the zeros separating them.
pub fn torsion_segments(p: &CurvatureProfile, spec: GroupSpec) -> Result<(Vec<Segment>, Vec<f64>)> {
    let tg = spec.torsion();
    let d = |s: f64| -> Result<f64> { Ok(p.tau(s)? - tg) };
    let grid = p.grid(SEGMENT_SCAN_POINTS);
    let values = grid.iter().map(|&s| d(s)).collect::<Result<Vec<_>>>()?;
    let sign_of = |v: f64| if v.abs() <= SEGMENT_ZERO_TOL { 0.0 } else { v.signum() };

    let mut segments = Vec::new();
    let mut zeros = Vec::new();
    let mut current: Option<Segment> = None;
    for i in 0..grid.len() {
        let sg = sign_of(values[i]);
        match (&mut current, sg) {
            (Some(seg), x) if x == seg.sign => seg.end = grid[i],
            (Some(seg), x) => {
                let mut closed = *seg;
                if x == 0.0 {
                    zeros.push(grid[i]);
                    closed.end = grid[i];
                    current = None;
                } else {
                    // sign flips between two samples: refine the crossing
                    let z = bisect(&d, grid[i - 1], grid[i])?;
                    zeros.push(z);
                    closed.end = z;
                    current = Some(Segment {
                        start: z,
                        end: grid[i],
                        sign: x,
                    });
                }
                segments.push(closed);
            }
            (None, 0.0) => {
                if zeros.last() != Some(&grid[i]) && i > 0 && sign_of(values[i - 1]) != 0.0 {
                    zeros.push(grid[i]);
                }
            }
            (None, x) => {
                let start = if i == 0 { grid[0] } else { grid[i - 1] };
                if i > 0 && zeros.last() != Some(&grid[i - 1]) {
                    zeros.push(grid[i - 1]);
                }
                current = Some(Segment {
                    start,
                    end: grid[i],
                    sign: x,
                });
            }
        }
    }
    if let Some(seg) = current {
        segments.push(seg);
    }
    segments.retain(|seg| seg.end > seg.start);
    zeros.dedup();
    Ok((segments, zeros))
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let fa = f(a)?;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m)? > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Conjugate mate: curvature |τ − τ_G| and torsion κ + τ_G, split into
/// segments at the zeros of τ − τ_G.
pub fn conjugate_mate_apparatus(p: &CurvatureProfile, spec: GroupSpec) -> Result<MateApparatus> {
    let tg = spec.torsion();
    let (segments, zeros) = torsion_segments(p, spec)?;
    if segments.is_empty() {
        return Err(Error::NotAFrenetMate { zeros });
    }
    let profile = match (p.kappa_fn().as_expr(), relative_torsion_fn(p, spec)) {
        (Some(k), Some(d)) => {
            CurvatureProfile::from_exprs(Expr::abs(d), k.clone() + Expr::num(tg), p.domain())?
        }
        _ => sampled_like(p, |s| Ok(((p.tau(s)? - tg).abs(), p.kappa(s)? + tg)))?,
    };
    Ok(MateApparatus {
        kind: MateKind::Conjugate,
        spec,
        parent: p.clone(),
        profile,
        segments,
        zeros,
    })
}

pub fn mate_apparatus(p: &CurvatureProfile, spec: GroupSpec, kind: MateKind) -> Result<MateApparatus> {
    match kind {
        MateKind::Natural => natural_mate_apparatus(p, spec),
        MateKind::Conjugate => conjugate_mate_apparatus(p, spec),
    }
}

/// Harmonic curvature and σ of a mate at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MateHarmonic {
    pub h: f64,
    /// `None` where the mate's H′ vanishes.
    pub sigma: Option<f64>,
}

/// H̄, σ̄ for natural mates (from the mate profile); H* = ε/H and σ* = −ε σ
/// for conjugate mates, with ε the segment sign of τ − τ_G.
pub fn mate_harmonic_data(m: &MateApparatus, s: f64) -> Result<MateHarmonic> {
    let spec = m.spec;
    let optional_sigma = |p: &CurvatureProfile| match profile::sigma(p, spec, s) {
        Ok(v) => Ok(Some(v)),
        Err(Error::SingularSigma { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    match m.kind {
        MateKind::Natural => Ok(MateHarmonic {
            h: profile::harmonic_curvature(&m.profile, spec, s)?,
            sigma: optional_sigma(&m.profile)?,
        }),
        MateKind::Conjugate => {
            let sign = m
                .segment_at(s)
                .map(|seg| seg.sign)
                .ok_or_else(|| Error::NotAFrenetMate { zeros: vec![s] })?;
            let h = profile::harmonic_curvature(&m.parent, spec, s)?;
            if h.abs() <= SEGMENT_ZERO_TOL {
                return Err(Error::ZeroHarmonicCurvature { s });
            }
            Ok(MateHarmonic {
                h: sign / h,
                sigma: optional_sigma(&m.parent)?.map(|sg| -sign * sg),
            })
        }
    }
}

/// Parent profile of a natural mate with constant curvature `c` and torsion
/// `tau_bar`, sampled with spacing `step`:
///
/// ```text
/// φ(s) = φ0 + ∫_{s0}^{s} (τ̄ − τ_G),   κ = c cos φ,   τ = τ_G + c sin φ
/// ```
///
/// `phi0` fixes the integration constant at the start of `domain`.
pub fn constant_curvature_inverse(
    tau_bar: &ScalarFn,
    c: f64,
    spec: GroupSpec,
    domain: (f64, f64),
    step: f64,
    phi0: f64,
) -> Result<CurvatureProfile> {
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!("mate curvature must be positive, got {c}")));
    }
    let (a, b) = domain;
    let n = crate::integrator::interval_count(a, b, step)? + 1;
    let tg = spec.torsion();
    let integrand = (0..n)
        .map(|i| Ok(tau_bar.eval(a + i as f64 * step)? - tg))
        .collect::<Result<Vec<f64>>>()?;
    let phi = cumulative_integral(step, &integrand)?;
    let kappa: Vec<f64> = phi.iter().map(|p| c * (phi0 + p).cos()).collect();
    let tau: Vec<f64> = phi.iter().map(|p| tg + c * (phi0 + p).sin()).collect();
    let out = CurvatureProfile::from_samples(a, step, kappa, tau)?;
    let grid = out.grid(n);
    out.check_frenet(&grid)?.into_result()?;
    Ok(out)
}

//! Fixed-step RK4 reconstruction of Frenet frames and group-valued positions.
//!
//! The frame ODE acts on left-invariant components:
//!
//! ```text
//! T′ = κ N,   N′ = −κ T + (τ − τ_G) B,   B′ = −(τ − τ_G) N
//! ```
//!
//! Positions solve `γ′ = dL_γ t(s)`; direction curves use the same stepping
//! with the tangent components replaced by N (natural mate) or B (conjugate
//! mate) of a source trajectory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_algebra::{left_translate_tangent, AlgebraVector, Frame, GroupElement, GroupSpec};
use crate::profile::{CurvatureProfile, FRENET_MIN_KAPPA};

/// Uniformly sampled group-valued curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub start: f64,
    pub step: f64,
    pub points: Vec<GroupElement>,
}

impl SampledCurve {
    pub fn s(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_manifold_defect(&self) -> f64 {
        self.points.iter().map(GroupElement::manifold_defect).fold(0.0, f64::max)
    }
}

/// Frames (and optionally positions) of a curve integrated from a profile.
#[derive(Debug, Clone)]
pub struct FrameTrajectory {
    pub start: f64,
    pub step: f64,
    pub frames: Vec<Frame>,
    /// κ and τ at the grid points.
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    /// Empty until [`reconstruct_position`] runs.
    pub positions: Vec<GroupElement>,
    pub profile: CurvatureProfile,
    pub spec: GroupSpec,
    /// Largest orthonormality defect seen before re-orthonormalization.
    pub max_step_drift: f64,
    /// Largest orthonormality defect after re-orthonormalization.
    pub max_frame_defect: f64,
}

impl FrameTrajectory {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn s(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.s(i)).collect()
    }

    /// τ − τ_G at grid point `i`.
    pub fn relative_torsion(&self, i: usize) -> f64 {
        self.tau[i] - self.spec.torsion()
    }

    pub fn has_positions(&self) -> bool {
        self.positions.len() == self.frames.len()
    }

    pub fn curve(&self) -> Result<SampledCurve> {
        if !self.has_positions() {
            return Err(Error::InvalidArgument("trajectory has no positions yet".into()));
        }
        Ok(SampledCurve {
            start: self.start,
            step: self.step,
            points: self.positions.clone(),
        })
    }

    pub fn tangents(&self) -> Vec<AlgebraVector> {
        self.frames.iter().map(|f| f.t).collect()
    }
}

/// Which frame field a direction curve follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionField {
    PrincipalNormal,
    Binormal,
}

/// Number of grid intervals of spacing `h` that fit in `[s0, s1]`.
pub fn interval_count(s0: f64, s1: f64, h: f64) -> Result<usize> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    if !(s0 < s1) {
        return Err(Error::InvalidArgument(format!("empty interval [{s0}, {s1}]")));
    }
    let n = ((s1 - s0) / h + 1e-9).floor();
    if n < 1.0 || n > 1e8 {
        return Err(Error::InvalidArgument(format!(
            "step {h} gives {n} intervals on [{s0}, {s1}]"
        )));
    }
    Ok(n as usize)
}

fn frame_rhs(f: &Frame, kappa: f64, rel_tau: f64) -> Frame {
    Frame {
        t: kappa * f.n,
        n: -kappa * f.t + rel_tau * f.b,
        b: -rel_tau * f.n,
    }
}

fn axpy(f: &Frame, w: f64, d: &Frame) -> Frame {
    Frame {
        t: f.t + w * d.t,
        n: f.n + w * d.n,
        b: f.b + w * d.b,
    }
}

fn curvatures_at(p: &CurvatureProfile, s: f64) -> Result<(f64, f64)> {
    let k = p.kappa(s)?;
    if !(k > FRENET_MIN_KAPPA) {
        return Err(Error::FrenetViolation {
            s,
            kappa: k,
            usable: None,
        });
    }
    Ok((k, p.tau(s)?))
}

/// Classical RK4 on the frame ODE with modified Gram–Schmidt (T, N, B) after
/// every step. The grid is `s0 + i h` for `i = 0..=⌊(s1 − s0)/h⌋`.
pub fn integrate_frame(
    p: &CurvatureProfile,
    spec: GroupSpec,
    s0: f64,
    s1: f64,
    h: f64,
    init: Frame,
) -> Result<FrameTrajectory> {
    let steps = interval_count(s0, s1, h)?;
    let init_defect = init.orthonormality_defect();
    if !(init_defect <= 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "initial frame is not right-handed orthonormal (defect {init_defect:e})"
        )));
    }
    let tg = spec.torsion();
    let mut frame = init;
    frame.reorthonormalize();

    let mut frames = Vec::with_capacity(steps + 1);
    let mut kappa = Vec::with_capacity(steps + 1);
    let mut tau = Vec::with_capacity(steps + 1);
    let (mut k0, mut t0) = curvatures_at(p, s0)?;
    frames.push(frame);
    kappa.push(k0);
    tau.push(t0);

    let mut max_step_drift: f64 = 0.0;
    let mut max_frame_defect = frame.orthonormality_defect();
    for i in 0..steps {
        let s = s0 + i as f64 * h;
        let (km, tm) = curvatures_at(p, s + 0.5 * h)?;
        let (k1, t1) = curvatures_at(p, s0 + (i + 1) as f64 * h)?;

        let a = frame_rhs(&frame, k0, t0 - tg);
        let b = frame_rhs(&axpy(&frame, 0.5 * h, &a), km, tm - tg);
        let c = frame_rhs(&axpy(&frame, 0.5 * h, &b), km, tm - tg);
        let d = frame_rhs(&axpy(&frame, h, &c), k1, t1 - tg);
        let mut next = frame;
        next.t += h / 6.0 * (a.t + 2.0 * b.t + 2.0 * c.t + d.t);
        next.n += h / 6.0 * (a.n + 2.0 * b.n + 2.0 * c.n + d.n);
        next.b += h / 6.0 * (a.b + 2.0 * b.b + 2.0 * c.b + d.b);

        max_step_drift = max_step_drift.max(next.orthonormality_defect());
        next.reorthonormalize();
        max_frame_defect = max_frame_defect.max(next.orthonormality_defect());

        frame = next;
        frames.push(frame);
        kappa.push(k1);
        tau.push(t1);
        (k0, t0) = (k1, t1);
    }

    Ok(FrameTrajectory {
        start: s0,
        step: h,
        frames,
        kappa,
        tau,
        positions: Vec::new(),
        profile: p.clone(),
        spec,
        max_step_drift,
        max_frame_defect,
    })
}

/// Integrate `γ′ = dL_γ f(s)` on a uniform grid, given the components `f`
/// and their derivatives `df` at the grid points. Midpoint values come from
/// cubic Hermite interpolation.
pub fn integrate_tangent_field(
    spec: GroupSpec,
    g0: GroupElement,
    step: f64,
    f: &[AlgebraVector],
    df: &[AlgebraVector],
) -> Result<Vec<GroupElement>> {
    if g0.family() != spec.family {
        return Err(Error::InvalidArgument(format!(
            "initial position is not a {} element",
            spec.name()
        )));
    }
    if f.len() != df.len() || f.is_empty() {
        return Err(Error::GridMismatch("tangent field and derivative lengths differ".into()));
    }
    let h = step;
    let mut g = g0;
    g.renormalize();
    let mut out = Vec::with_capacity(f.len());
    out.push(g);
    for i in 0..f.len() - 1 {
        let mid = 0.5 * (f[i] + f[i + 1]) + h / 8.0 * (df[i] - df[i + 1]);
        let k1 = left_translate_tangent(&g, &f[i]);
        let k2 = left_translate_tangent(&g.displaced(0.5 * h, &k1), &mid);
        let k3 = left_translate_tangent(&g.displaced(0.5 * h, &k2), &mid);
        let k4 = left_translate_tangent(&g.displaced(h, &k3), &f[i + 1]);
        let incr = k1
            .add_scaled(2.0, &k2)
            .add_scaled(2.0, &k3)
            .add_scaled(1.0, &k4);
        g = g.displaced(h / 6.0, &incr);
        g.renormalize();
        out.push(g);
    }
    Ok(out)
}

/// Fill in the positions of `frames`, starting from `g0`.
pub fn reconstruct_position(mut frames: FrameTrajectory, g0: GroupElement) -> Result<FrameTrajectory> {
    let t: Vec<AlgebraVector> = frames.frames.iter().map(|f| f.t).collect();
    let dt: Vec<AlgebraVector> = frames
        .frames
        .iter()
        .zip(&frames.kappa)
        .map(|(f, &k)| k * f.n)
        .collect();
    frames.positions = integrate_tangent_field(frames.spec, g0, frames.step, &t, &dt)?;
    Ok(frames)
}

/// Curve through `g0` whose tangent components are N (natural mate) or B
/// (conjugate mate) of `source`, on the same grid.
pub fn integrate_direction_curve(
    source: &FrameTrajectory,
    which: DirectionField,
    g0: GroupElement,
) -> Result<SampledCurve> {
    let tg = source.spec.torsion();
    let (f, df): (Vec<_>, Vec<_>) = source
        .frames
        .iter()
        .zip(source.kappa.iter().zip(&source.tau))
        .map(|(fr, (&k, &t))| {
            let d = t - tg;
            match which {
                DirectionField::PrincipalNormal => (fr.n, -k * fr.t + d * fr.b),
                DirectionField::Binormal => (fr.b, -d * fr.n),
            }
        })
        .unzip();
    Ok(SampledCurve {
        start: source.start,
        step: source.step,
        points: integrate_tangent_field(source.spec, g0, source.step, &f, &df)?,
    })
}

/// Frames plus positions from the identity frame at the group identity.
pub fn synthesize(p: &CurvatureProfile, spec: GroupSpec, s0: f64, s1: f64, h: f64) -> Result<FrameTrajectory> {
    let frames = integrate_frame(p, spec, s0, s1, h, Frame::identity())?;
    reconstruct_position(frames, GroupElement::identity(spec))
}

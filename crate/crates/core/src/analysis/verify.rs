//! Numerical checks of the mate theorems and corollaries.
//!
//! Every verifier evaluates its hypothesis first. A failed hypothesis gives
//! [`Status::NotApplicable`]; otherwise the status is `Pass` iff every check
//! is within its tolerance. Biconditional corollaries evaluate both sides and
//! pass when the sides agree.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use super::classify::fit_line;
use super::estimate::{estimate_apparatus, EstimatedApparatus};
use super::spherical::{left_shift_sphere_fit, spherical_check_with, SphericalCase, ANALYTIC_GRID_POINTS};
use super::tolerances::{relative_spread, ToleranceSet};
use crate::error::{Error, Result};
use crate::integrator::{integrate_direction_curve, synthesize, DirectionField, FrameTrajectory, SampledCurve};
use crate::lie_algebra::{cumulative_integral, AlgebraVector, GroupElement, GroupSpec};
use crate::mates::{conjugate_mate_apparatus, natural_mate_apparatus, MateApparatus};
use crate::profile::{linspace, CurvatureProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremId {
    Thm4_1,
    Thm5_1,
    Thm5_2,
    Thm6_2,
    Cor3_1,
    Cor3_2,
    Cor3_3,
    Cor3_4,
    Cor5_2,
    Cor6_1,
    Cor6_2,
    Cor6_3,
    Cor6_4,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::Thm4_1,
        TheoremId::Thm5_1,
        TheoremId::Thm5_2,
        TheoremId::Thm6_2,
        TheoremId::Cor3_1,
        TheoremId::Cor3_2,
        TheoremId::Cor3_3,
        TheoremId::Cor3_4,
        TheoremId::Cor5_2,
        TheoremId::Cor6_1,
        TheoremId::Cor6_2,
        TheoremId::Cor6_3,
        TheoremId::Cor6_4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm4_1 => "thm4_1",
            TheoremId::Thm5_1 => "thm5_1",
            TheoremId::Thm5_2 => "thm5_2",
            TheoremId::Thm6_2 => "thm6_2",
            TheoremId::Cor3_1 => "cor3_1",
            TheoremId::Cor3_2 => "cor3_2",
            TheoremId::Cor3_3 => "cor3_3",
            TheoremId::Cor3_4 => "cor3_4",
            TheoremId::Cor5_2 => "cor5_2",
            TheoremId::Cor6_1 => "cor6_1",
            TheoremId::Cor6_2 => "cor6_2",
            TheoremId::Cor6_3 => "cor6_3",
            TheoremId::Cor6_4 => "cor6_4",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::Thm4_1 => "constant curvature c gives a natural mate on a sphere of radius 1/c",
            TheoremId::Thm5_1 => "a natural mate of constant curvature c determines the parent curvatures",
            TheoremId::Thm5_2 => "spherical parent with constant-curvature natural mate fixes the mate torsion",
            TheoremId::Thm6_2 => "constant nonzero τ − τ_G = c gives a natural mate on a sphere of radius 1/c",
            TheoremId::Cor3_1 => "general helix iff the natural mate has τ̄ = τ_G",
            TheoremId::Cor3_2 => "slant helix iff the natural mate is a general helix",
            TheoremId::Cor3_3 => "rectifying iff a κ² = (τ̄ − τ_G) κ̄² for a nonzero constant a",
            TheoremId::Cor3_4 => "spherical of radius r iff κ̄′/κ̄ = (τ̄ − τ_G) H ± (τ − τ_G)√(r²κ² − 1)",
            TheoremId::Cor5_2 => "spherical with constant-curvature natural mate iff τ = τ_G or τ̄ − τ_G = ∓κ√(r²κ² − 1)",
            TheoremId::Cor6_1 => "general helix iff the conjugate mate is a general helix",
            TheoremId::Cor6_2 => "slant helix iff the conjugate mate is a slant helix",
            TheoremId::Cor6_3 => "the curve, its natural mate and its conjugate mate are mutually orthogonal",
            TheoremId::Cor6_4 => "the curve and its conjugate mate share principal normal lines",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = TheoremId::ALL.iter().map(|id| id.as_str()).collect();
                Error::InvalidArgument(format!("unknown theorem id {s:?} (known: {})", known.join(", ")))
            })
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub holds: bool,
    pub detail: String,
}

impl Hypothesis {
    fn holds(detail: impl Into<String>) -> Self {
        Hypothesis {
            holds: true,
            detail: detail.into(),
        }
    }

    fn fails(detail: impl Into<String>) -> Self {
        Hypothesis {
            holds: false,
            detail: detail.into(),
        }
    }
}

/// One side of a biconditional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Side {
    pub statement: &'static str,
    pub holds: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl Side {
    fn at_most(statement: &'static str, residual: f64, tolerance: f64) -> Self {
        Side {
            statement,
            holds: residual <= tolerance,
            residual,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Biconditional {
    pub lhs: Side,
    pub rhs: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub s: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub statement: &'static str,
    pub hypothesis: Hypothesis,
    pub status: Status,
    pub checks: Vec<Check>,
    /// Residual and tolerance of the check closest to (or furthest past)
    /// its tolerance.
    pub max_residual: f64,
    pub tolerance: f64,
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub biconditional: Option<Biconditional>,
    /// Per-sample residual of the main check, for export.
    #[serde(skip)]
    pub trace: Vec<TracePoint>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Default)]
struct Draft {
    checks: Vec<Check>,
    values: BTreeMap<String, f64>,
    biconditional: Option<Biconditional>,
    trace: Vec<TracePoint>,
}

impl Draft {
    fn check(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.checks.push(Check::new(name, residual, tolerance));
    }

    fn value(&mut self, name: &str, v: f64) {
        self.values.insert(name.to_string(), v);
    }

    fn finish(self, theorem: TheoremId, hypothesis: Hypothesis) -> VerificationReport {
        let worst = self
            .checks
            .iter()
            .max_by(|a, b| ratio(a).total_cmp(&ratio(b)))
            .map(|c| (c.residual, c.tolerance))
            .unwrap_or((0.0, 0.0));
        let status = if !hypothesis.holds {
            Status::NotApplicable
        } else if !self.checks.is_empty() && self.checks.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            theorem,
            statement: theorem.statement(),
            hypothesis,
            status,
            checks: self.checks,
            max_residual: worst.0,
            tolerance: worst.1,
            values: self.values,
            biconditional: self.biconditional,
            trace: self.trace,
        }
    }
}

fn ratio(c: &Check) -> f64 {
    if c.residual.is_nan() {
        f64::INFINITY
    } else if c.tolerance > 0.0 {
        c.residual / c.tolerance
    } else if c.residual > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

fn sides_agree(draft: &mut Draft, lhs: Side, rhs: Side) {
    draft.check("sides_agree", if lhs.holds == rhs.holds { 0.0 } else { 1.0 }, 0.5);
    draft.biconditional = Some(Biconditional { lhs, rhs });
}

/// Which evaluation paths a verifier runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    /// Closed-form or sampled mate apparatus only.
    Analytic,
    /// Integrated curves and the finite-difference estimate only.
    Geometric,
    #[default]
    Both,
}

impl VerifyMode {
    pub fn analytic(self) -> bool {
        self != VerifyMode::Geometric
    }

    pub fn geometric(self) -> bool {
        self != VerifyMode::Analytic
    }
}

impl FromStr for VerifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(VerifyMode::Analytic),
            "geometric" => Ok(VerifyMode::Geometric),
            "both" => Ok(VerifyMode::Both),
            _ => Err(Error::InvalidArgument(format!(
                "unknown mode {s:?} (expected analytic, geometric or both)"
            ))),
        }
    }
}

/// Theorem verifier for one group.
#[derive(Debug, Clone, Copy)]
pub struct Verifier {
    pub spec: GroupSpec,
    pub tol: ToleranceSet,
    /// Integration step of the geometric path.
    pub step: f64,
    pub mode: VerifyMode,
}

struct Ctx {
    grid: Vec<f64>,
    spread: f64,
    theorem: f64,
    sampled: bool,
}

impl Verifier {
    pub fn new(spec: GroupSpec) -> Self {
        Verifier {
            spec,
            tol: ToleranceSet::default(),
            step: 1e-3,
            mode: VerifyMode::Both,
        }
    }

    pub fn with_tolerances(mut self, tol: ToleranceSet) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_mode(mut self, mode: VerifyMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn verify(&self, id: TheoremId, p: &CurvatureProfile) -> Result<VerificationReport> {
        let ctx = self.context(p);
        p.check_frenet(&ctx.grid)?.into_result()?;
        match id {
            TheoremId::Thm4_1 => self.thm4_1(p, &ctx),
            TheoremId::Thm5_1 => self.thm5_1(p, &ctx),
            TheoremId::Thm5_2 => self.thm5_2(p, &ctx),
            TheoremId::Thm6_2 => self.thm6_2(p, &ctx),
            TheoremId::Cor3_1 => self.cor3_1(p, &ctx),
            TheoremId::Cor3_2 => self.cor3_2(p, &ctx),
            TheoremId::Cor3_3 => self.cor3_3(p, &ctx),
            TheoremId::Cor3_4 => self.cor3_4(p, &ctx),
            TheoremId::Cor5_2 => self.cor5_2(p, &ctx),
            TheoremId::Cor6_1 => self.cor6_1(p, &ctx),
            TheoremId::Cor6_2 => self.cor6_2(p, &ctx),
            TheoremId::Cor6_3 => self.mate_geometry(TheoremId::Cor6_3, p),
            TheoremId::Cor6_4 => self.mate_geometry(TheoremId::Cor6_4, p),
        }
    }

    pub fn verify_all(&self, ids: &[TheoremId], p: &CurvatureProfile) -> Result<Vec<VerificationReport>> {
        ids.iter().map(|&id| self.verify(id, p)).collect()
    }

    fn context(&self, p: &CurvatureProfile) -> Ctx {
        let sampled = p.is_sampled();
        Ctx {
            grid: p.grid(ANALYTIC_GRID_POINTS),
            spread: if sampled {
                self.tol.estimated_spread
            } else {
                self.tol.analytic_spread
            },
            theorem: if sampled {
                self.tol.theorem_estimated
            } else {
                self.tol.theorem_analytic
            },
            sampled,
        }
    }

    fn relative_torsion(&self, p: &CurvatureProfile, grid: &[f64]) -> Result<Vec<f64>> {
        let tg = self.spec.torsion();
        sample(grid, |s| Ok(p.tau(s)? - tg))
    }

    fn harmonic(&self, p: &CurvatureProfile, grid: &[f64]) -> Result<Vec<f64>> {
        let tg = self.spec.torsion();
        sample(grid, |s| Ok((p.tau(s)? - tg) / p.kappa(s)?))
    }

    /// σ on the grid, or `None` where H′ vanishes somewhere.
    fn sigma(&self, p: &CurvatureProfile, grid: &[f64]) -> Result<Option<Vec<f64>>> {
        let tg = self.spec.torsion();
        let mut out = Vec::with_capacity(grid.len());
        for &s in grid {
            let k = p.kappa(s)?;
            let d = p.tau(s)? - tg;
            let h = d / k;
            let hp = (p.tau_prime(s)? * k - d * p.kappa_prime(s)?) / (k * k);
            if hp.abs() <= self.tol.sigma_singular {
                return Ok(None);
            }
            out.push(k * (h * h + 1.0).powf(1.5) / hp);
        }
        Ok(Some(out))
    }

    /// Integrate the parent from the identity and the natural-mate direction
    /// curve through the identity.
    fn natural_curve(&self, p: &CurvatureProfile) -> Result<(FrameTrajectory, SampledCurve)> {
        let (a, b) = p.domain();
        let traj = synthesize(p, self.spec, a, b, self.step)?;
        let beta = integrate_direction_curve(&traj, DirectionField::PrincipalNormal, GroupElement::identity(self.spec))?;
        Ok((traj, beta))
    }

    fn thm4_1(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let id = TheoremId::Thm4_1;
        let kappa = sample(&ctx.grid, |s| p.kappa(s))?;
        let c = mean(&kappa);
        let mate = natural_mate_apparatus(p, self.spec)?;
        let k_spread = relative_spread(&kappa);
        if k_spread > ctx.spread {
            return self.thm4_1_converse(p, &mate, ctx, k_spread);
        }
        let mut draft = Draft::default();
        draft.value("c", c);
        draft.value("expected_radius", 1.0 / c);
        let d = self.relative_torsion(p, &ctx.grid)?;
        let d_max = max_abs(&d);
        let geometric = self.mode.geometric();

        if d_max > self.tol.zero && relative_spread(&d) <= ctx.spread {
            // τ̄ = τ_G and κ̄ = ω: the mate is a circle of radius 1/ω ≤ 1/c,
            // which lies on a sphere of radius 1/c
            let tg = self.spec.torsion();
            let omega = mean(&sample(&ctx.grid, |s| mate.kappa(s))?);
            draft.value("circle_radius", 1.0 / omega);
            if self.mode.analytic() {
                let kb = sample(&ctx.grid, |s| mate.kappa(s))?;
                let tb = sample(&ctx.grid, |s| Ok(mate.tau(s)? - tg))?;
                draft.check("mate_curvature_spread", relative_spread(&kb), ctx.theorem);
                draft.check("mate_torsion_minus_lie_torsion", max_abs(&tb), ctx.theorem);
                draft.check("circle_exceeds_sphere", (1.0 / omega - 1.0 / c).max(0.0), ctx.theorem);
            }
            if geometric {
                let (_, beta) = self.natural_curve(p)?;
                let g = geometric_sphere(&beta, self.spec)?;
                draft.value("geometric_radius", g.radius);
                draft.check("geometric_circle_radius", (g.radius - 1.0 / omega).abs(), self.tol.theorem_estimated);
                draft.check("geometric_rms", g.rms, self.tol.theorem_estimated);
            }
            let detail = format!(
                "κ = {c} constant; τ − τ_G is a nonzero constant, so the natural mate is a circle of radius 1/ω"
            );
            return Ok(draft.finish(id, Hypothesis::holds(detail)));
        }

        if self.mode.analytic() {
            let sc = spherical_check_with(&mate.profile, self.spec, &self.tol, ctx.theorem)?;
            draft.value("radius", sc.radius_estimate);
            draft.check("radius_spread", sc.radius_spread, ctx.theorem);
            draft.check("tangent_residual", sc.tangent_residual, ctx.theorem);
            draft.check("radius", (sc.radius_estimate - 1.0 / c).abs(), ctx.theorem);
            draft.trace = sc
                .radius_samples
                .iter()
                .map(|&(s, r)| TracePoint {
                    s,
                    residual: (r - 1.0 / c).abs(),
                })
                .collect();
        }
        if geometric {
            let (_, beta) = self.natural_curve(p)?;
            let g = geometric_sphere(&beta, self.spec)?;
            draft.value("geometric_radius", g.radius);
            draft.check("geometric_radius", (g.radius - 1.0 / c).abs(), self.tol.theorem_estimated);
            draft.check("geometric_rms", g.rms, self.tol.theorem_estimated);
        }
        Ok(draft.finish(id, Hypothesis::holds(format!("κ = {c} constant"))))
    }

    /// The converse: a spherical natural mate with τ̄ ≠ τ_G should force
    /// κ = 1/r.
    fn thm4_1_converse(
        &self,
        p: &CurvatureProfile,
        mate: &MateApparatus,
        ctx: &Ctx,
        k_spread: f64,
    ) -> Result<VerificationReport> {
        let id = TheoremId::Thm4_1;
        let sc = spherical_check_with(&mate.profile, self.spec, &self.tol, ctx.spread)?;
        let mut draft = Draft::default();
        draft.value("curvature_spread", k_spread);
        if !sc.spherical || sc.case == SphericalCase::LieTorsionOnly {
            let detail = format!(
                "κ is not constant (spread {k_spread:e}) and the natural mate is not spherical with τ̄ ≠ τ_G"
            );
            return Ok(draft.finish(id, Hypothesis::fails(detail)));
        }
        let r = sc.radius_estimate;
        draft.value("radius", r);
        let tg = self.spec.torsion();
        let mut worst: f64 = 0.0;
        for &s in &ctx.grid {
            if (mate.tau(s)? - tg).abs() > self.tol.zero {
                let res = (p.kappa(s)? * r - 1.0).abs();
                draft.trace.push(TracePoint { s, residual: res });
                worst = worst.max(res);
            }
        }
        draft.check("converse_curvature", worst, ctx.theorem);
        let detail = format!("converse: natural mate spherical with radius {r} and τ̄ ≠ τ_G; κ should equal 1/r");
        Ok(draft.finish(id, Hypothesis::holds(detail)))
    }

    fn thm5_1(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let id = TheoremId::Thm5_1;
        let mate = natural_mate_apparatus(p, self.spec)?;
        let kb = sample(&ctx.grid, |s| mate.kappa(s))?;
        let mut draft = Draft::default();
        let spread = relative_spread(&kb);
        if spread > ctx.spread {
            let detail = format!("natural mate curvature is not constant (spread {spread:e})");
            return Ok(draft.finish(id, Hypothesis::fails(detail)));
        }
        let c = mean(&kb);
        let (a, _) = p.domain();
        let tg = self.spec.torsion();
        let phi0 = (p.tau(a)? - tg).atan2(p.kappa(a)?);
        draft.value("c", c);
        draft.value("phi0", phi0);
        let inv = crate::mates::constant_curvature_inverse(
            mate.profile.tau_fn(),
            c,
            self.spec,
            p.domain(),
            self.step,
            phi0,
        )?;
        let mut worst: f64 = 0.0;
        for s in inv.grid(0) {
            let res = (inv.kappa(s)? - p.kappa(s)?)
                .abs()
                .max((inv.tau(s)? - p.tau(s)?).abs());
            draft.trace.push(TracePoint { s, residual: res });
            worst = worst.max(res);
        }
        draft.check("recovered_curvatures", worst, ctx.theorem);
        Ok(draft.finish(id, Hypothesis::holds(format!("natural mate curvature c = {c}"))))
    }

    fn thm5_2(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let id = TheoremId::Thm5_2;
        let mate = natural_mate_apparatus(p, self.spec)?;
        let kb = sample(&ctx.grid, |s| mate.kappa(s))?;
        let mut draft = Draft::default();
        let spread = relative_spread(&kb);
        if spread > ctx.spread {
            let detail = format!("natural mate curvature is not constant (spread {spread:e})");
            return Ok(draft.finish(id, Hypothesis::fails(detail)));
        }
        let c = mean(&kb);
        let sc = spherical_check_with(p, self.spec, &self.tol, ctx.spread)?;
        let Some(r) = sc.radius else {
            let detail = format!(
                "curve is not spherical (radius spread {:e}, tangent residual {:e})",
                sc.radius_spread, sc.tangent_residual
            );
            return Ok(draft.finish(id, Hypothesis::fails(detail)));
        };
        let a = c * c * r;
        for (k, v) in [("c", c), ("r", r), ("a", a)] {
            draft.value(k, v);
        }
        let formula = MateTorsionFormula::new(c, a);
        let tg = self.spec.torsion();
        let db = sample(&ctx.grid, |s| Ok(mate.tau(s)? - tg))?;
        let (phase, sup) = formula.fit_phase(&ctx.grid, &db);
        draft.value("phase", phase);
        if self.mode.analytic() {
            draft.check("a_at_least_c", (c - a).max(0.0), ctx.theorem);
            draft.check("mate_torsion_formula", sup, ctx.theorem);
            draft.trace = ctx
                .grid
                .iter()
                .zip(&db)
                .map(|(&s, &v)| TracePoint {
                    s,
                    residual: (v - formula.eval(s - phase)).abs(),
                })
                .collect();
        }
        if self.mode.geometric() {
            let tol = self.tol.theorem_estimated;
            let (traj, beta) = self.natural_curve(p)?;
            let g = geometric_sphere(&traj.curve()?, self.spec)?;
            draft.value("geometric_radius", g.radius);
            draft.check("geometric_radius", (g.radius - r).abs(), tol);
            let est = estimate_apparatus(&beta, self.spec)?;
            let idx: Vec<usize> = est.valid_indices().collect();
            let kh: Vec<f64> = idx.iter().map(|&i| est.kappa[i]).collect();
            draft.check("geometric_mate_curvature_spread", relative_spread(&kh), tol);
            let worst = idx
                .iter()
                .map(|&i| (est.tau[i] - est.lie_torsion[i] - formula.eval(est.s(i) - phase)).abs())
                .fold(0.0, f64::max);
            draft.check("geometric_mate_torsion_formula", worst, tol);
        }
        let detail = format!("natural mate curvature c = {c}; curve spherical with radius {r}");
        Ok(draft.finish(id, Hypothesis::holds(detail)))
    }

    fn thm6_2(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let id = TheoremId::Thm6_2;
        let d = self.relative_torsion(p, &ctx.grid)?;
        let mut draft = Draft::default();
        let spread = relative_spread(&d);
        if max_abs(&d) <= self.tol.zero || spread > ctx.spread {
            let detail = format!(
                "τ − τ_G is not a nonzero constant (max |τ − τ_G| {:e}, spread {spread:e})",
                max_abs(&d)
            );
            return Ok(draft.finish(id, Hypothesis::fails(detail)));
        }
        let c = mean(&d);
        let expected = 1.0 / c.abs();
        draft.value("c", c);
        draft.value("expected_radius", expected);
        if self.mode.analytic() {
            let mate = natural_mate_apparatus(p, self.spec)?;
            let sc = spherical_check_with(&mate.profile, self.spec, &self.tol, ctx.theorem)?;
            draft.value("radius", sc.radius_estimate);
            draft.check("radius_spread", sc.radius_spread, ctx.theorem);
            draft.check("tangent_residual", sc.tangent_residual, ctx.theorem);
            draft.check("radius", (sc.radius_estimate - expected).abs(), ctx.theorem);
            draft.trace = sc
                .radius_samples
                .iter()
                .map(|&(s, r)| TracePoint {
                    s,
                    residual: (r - expected).abs(),
                })
                .collect();
        }
        if self.mode.geometric() {
            let (_, beta) = self.natural_curve(p)?;
            let g = geometric_sphere(&beta, self.spec)?;
            draft.value("geometric_radius", g.radius);
            draft.check("geometric_radius", (g.radius - expected).abs(), self.tol.theorem_estimated);
            draft.check("geometric_rms", g.rms, self.tol.theorem_estimated);
        }
        Ok(draft.finish(id, Hypothesis::holds(format!("τ − τ_G = {c}"))))
    }

    fn cor3_1(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let h = self.harmonic(p, &ctx.grid)?;
        let mate = natural_mate_apparatus(p, self.spec)?;
        let tg = self.spec.torsion();
        let db = sample(&ctx.grid, |s| Ok(mate.tau(s)? - tg))?;
        let abs: Vec<f64> = db.iter().map(|v| v.abs()).collect();
        let mut draft = Draft::default();
        draft.trace = trace(&ctx.grid, &abs);
        // ∫|τ̄ − τ_G| is the total variation of arctan H: dimensionless,
        // like the spread of H
        let lhs = Side::at_most("curve is a general helix", relative_spread(&h), ctx.spread);
        let rhs = Side::at_most("natural mate has τ̄ = τ_G", trapezoid(&ctx.grid, &abs), ctx.spread);
        sides_agree(&mut draft, lhs, rhs);
        Ok(draft.finish(TheoremId::Cor3_1, Hypothesis::holds("Frenet curve")))
    }

    fn cor3_2(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let id = TheoremId::Cor3_2;
        let h = self.harmonic(p, &ctx.grid)?;
        let mut draft = Draft::default();
        let h_spread = relative_spread(&h);
        if h_spread <= ctx.spread {
            let detail = "curve is a general helix: σ is undefined and the natural mate has τ̄ = τ_G";
            return Ok(draft.finish(id, Hypothesis::fails(detail)));
        }
        let lhs_res = match self.sigma(p, &ctx.grid)? {
            Some(sigma) => relative_spread(&sigma),
            None => f64::INFINITY,
        };
        let mate = natural_mate_apparatus(p, self.spec)?;
        let hb = self.harmonic(&mate.profile, &ctx.grid)?;
        let lhs = Side::at_most("curve is a slant helix", lhs_res, ctx.spread);
        let rhs = Side::at_most("natural mate is a general helix", relative_spread(&hb), ctx.spread);
        sides_agree(&mut draft, lhs, rhs);
        Ok(draft.finish(id, Hypothesis::holds("curve is not a general helix")))
    }

    fn cor3_3(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let h = self.harmonic(p, &ctx.grid)?;
        let fit = fit_line(&ctx.grid, &h);
        let range = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - h.iter().cloned().fold(f64::INFINITY, f64::min);
        let lhs_res = if range > 0.0 { fit.rms / range } else { f64::INFINITY };
        let mut lhs = Side::at_most("curve is rectifying", lhs_res, ctx.spread);
        lhs.holds &= fit.slope.abs() >= self.tol.rectifying_slope;

        let mate = natural_mate_apparatus(p, self.spec)?;
        let tg = self.spec.torsion();
        let k2 = sample(&ctx.grid, |s| Ok(p.kappa(s)?.powi(2)))?;
        let rhs_terms = sample(&ctx.grid, |s| Ok((mate.tau(s)? - tg) * mate.kappa(s)?.powi(2)))?;
        let ratios: Vec<f64> = rhs_terms.iter().zip(&k2).map(|(t, k)| t / k).collect();
        let a = mean(&ratios);
        let residuals: Vec<f64> = rhs_terms.iter().zip(&k2).map(|(t, k)| (a * k - t).abs()).collect();
        let identity_tol = if ctx.sampled {
            self.tol.theorem_estimated
        } else {
            self.tol.rectifying_identity
        };
        let mut rhs = Side::at_most("a κ² = (τ̄ − τ_G) κ̄² for a constant a", max_abs(&residuals), identity_tol);
        rhs.holds &= a.abs() >= self.tol.rectifying_slope;

        let mut draft = Draft::default();
        draft.value("a", a);
        draft.value("harmonic_slope", fit.slope);
        draft.trace = trace(&ctx.grid, &residuals);
        sides_agree(&mut draft, lhs, rhs);
        Ok(draft.finish(TheoremId::Cor3_3, Hypothesis::holds("Frenet curve")))
    }

    fn cor3_4(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let id = TheoremId::Cor3_4;
        let mut draft = Draft::default();
        let sc = spherical_check_with(p, self.spec, &self.tol, ctx.spread)?;
        let Some(r) = sc.radius else {
            return Ok(draft.finish(id, Hypothesis::fails("curve is not spherical")));
        };
        draft.value("r", r);
        let mate = natural_mate_apparatus(p, self.spec)?;
        let kb_prime = mate.profile.kappa_fn().derivative();
        let tg = self.spec.torsion();
        let mut rows = Vec::with_capacity(ctx.grid.len());
        for &s in &ctx.grid {
            let k = p.kappa(s)?;
            let d = p.tau(s)? - tg;
            let lhs = kb_prime.eval(s)? / mate.kappa(s)? - (mate.tau(s)? - tg) * d / k;
            rows.push(SignedRow {
                s,
                base: lhs,
                coef: d,
                g: r * r * k * k - 1.0,
            });
        }
        self.signed_identity(&mut draft, &rows, ctx, |_| true);
        let detail = format!("curve is spherical with radius {r}");
        Ok(draft.finish(id, Hypothesis::holds(detail)))
    }

    fn cor5_2(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let id = TheoremId::Cor5_2;
        let mut draft = Draft::default();
        let mate = natural_mate_apparatus(p, self.spec)?;
        let kb = sample(&ctx.grid, |s| mate.kappa(s))?;
        let spread = relative_spread(&kb);
        if spread > ctx.spread {
            let detail = format!("natural mate curvature is not constant (spread {spread:e})");
            return Ok(draft.finish(id, Hypothesis::fails(detail)));
        }
        let sc = spherical_check_with(p, self.spec, &self.tol, ctx.spread)?;
        let Some(r) = sc.radius else {
            return Ok(draft.finish(id, Hypothesis::fails("curve is not spherical")));
        };
        draft.value("c", mean(&kb));
        draft.value("r", r);
        let tg = self.spec.torsion();
        let mut rows = Vec::with_capacity(ctx.grid.len());
        for &s in &ctx.grid {
            let k = p.kappa(s)?;
            rows.push(SignedRow {
                s,
                base: mate.tau(s)? - tg,
                coef: k,
                g: r * r * k * k - 1.0,
            });
        }
        let d = self.relative_torsion(p, &ctx.grid)?;
        let zero = self.tol.zero;
        self.signed_identity(&mut draft, &rows, ctx, |i| d[i].abs() > zero);
        let detail = format!("natural mate curvature constant; curve spherical with radius {r}");
        Ok(draft.finish(id, Hypothesis::holds(detail)))
    }

    /// Check `base = ± coef √g` with one sign per stretch.
    ///
    /// The squared form `base² = coef² g` is checked on every sample where
    /// `active` holds; it does not suffer from the ill-conditioned square
    /// root where g touches zero. The sign is checked per stretch on
    /// well-conditioned samples; stretches break at inactive samples, sign
    /// changes of `coef`, samples with g ≤ 1e-6 max g, and local minima of g
    /// below 1e-3 max g.
    fn signed_identity(&self, draft: &mut Draft, rows: &[SignedRow], ctx: &Ctx, active: impl Fn(usize) -> bool) {
        let g_max = rows.iter().map(|r| r.g).fold(0.0, f64::max);
        let mut squared: f64 = 0.0;
        let mut sign: f64 = 0.0;
        let (mut plus, mut minus, mut open) = (0.0f64, 0.0f64, false);
        let mut close = |plus: &mut f64, minus: &mut f64, open: &mut bool| {
            if *open {
                sign = sign.max(plus.min(*minus));
            }
            (*plus, *minus, *open) = (0.0, 0.0, false);
        };
        for (i, row) in rows.iter().enumerate() {
            let root = row.g.max(0.0).sqrt();
            let e_plus = (row.base - row.coef * root).abs();
            let e_minus = (row.base + row.coef * root).abs();
            if !active(i) {
                close(&mut plus, &mut minus, &mut open);
                continue;
            }
            squared = squared.max((row.base * row.base - row.coef * row.coef * row.g).abs());
            draft.trace.push(TracePoint {
                s: row.s,
                residual: e_plus.min(e_minus),
            });
            let local_min = i > 0
                && i + 1 < rows.len()
                && row.g <= rows[i - 1].g
                && row.g <= rows[i + 1].g
                && row.g <= 1e-3 * g_max;
            let flips = i > 0 && rows[i - 1].coef.signum() != row.coef.signum();
            if row.g <= 1e-6 * g_max || local_min || flips || row.coef.abs() <= self.tol.zero {
                close(&mut plus, &mut minus, &mut open);
                continue;
            }
            plus = plus.max(e_plus);
            minus = minus.max(e_minus);
            open = true;
        }
        close(&mut plus, &mut minus, &mut open);
        draft.check("squared_identity", squared, ctx.theorem);
        draft.check("consistent_sign", sign, ctx.theorem);
    }

    fn conjugate(&self, p: &CurvatureProfile) -> Result<Option<MateApparatus>> {
        match conjugate_mate_apparatus(p, self.spec) {
            Ok(m) => Ok(Some(m)),
            Err(Error::NotAFrenetMate { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Grids over the conjugate segments, each shrunk at both ends.
    fn segment_grids(&self, p: &CurvatureProfile, m: &MateApparatus, ctx: &Ctx) -> Vec<(f64, Vec<f64>)> {
        m.segments
            .iter()
            .filter_map(|seg| {
                let margin = if ctx.sampled {
                    let step = ctx.grid.get(1).map_or(0.0, |s| s - ctx.grid[0]);
                    (1e-3 * seg.len()).max(3.0 * step)
                } else {
                    1e-3 * seg.len()
                };
                let (a, b) = seg.shrunk(margin)?;
                let grid = if ctx.sampled {
                    p.grid(0).into_iter().filter(|s| *s >= a && *s <= b).collect()
                } else {
                    linspace(a, b, ANALYTIC_GRID_POINTS)
                };
                (grid.len() >= 2).then_some((seg.sign, grid))
            })
            .collect()
    }

    fn cor6_1(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let id = TheoremId::Cor6_1;
        let mut draft = Draft::default();
        let Some(conj) = self.conjugate(p)? else {
            return Ok(draft.finish(id, Hypothesis::fails("τ ≡ τ_G: the conjugate mate does not exist")));
        };
        let h = self.harmonic(p, &ctx.grid)?;
        let (mut rhs_res, mut relation): (f64, f64) = (0.0, 0.0);
        for (sign, grid) in self.segment_grids(p, &conj, ctx) {
            let hs = self.harmonic(&conj.profile, &grid)?;
            rhs_res = rhs_res.max(relative_spread(&hs));
            let hp = self.harmonic(p, &grid)?;
            for (i, (a, b)) in hs.iter().zip(&hp).enumerate() {
                let res = (a - sign / b).abs() / a.abs().max(1.0);
                relation = relation.max(res);
                draft.trace.push(TracePoint { s: grid[i], residual: res });
            }
        }
        draft.value("segments", conj.segments.len() as f64);
        draft.check("harmonic_relation", relation, ctx.theorem);
        let lhs = Side::at_most("curve is a general helix", relative_spread(&h), ctx.spread);
        let rhs = Side::at_most("conjugate mate is a general helix on every segment", rhs_res, ctx.spread);
        sides_agree(&mut draft, lhs, rhs);
        Ok(draft.finish(id, Hypothesis::holds("conjugate mate exists")))
    }

    fn cor6_2(&self, p: &CurvatureProfile, ctx: &Ctx) -> Result<VerificationReport> {
        let id = TheoremId::Cor6_2;
        let mut draft = Draft::default();
        let Some(conj) = self.conjugate(p)? else {
            return Ok(draft.finish(id, Hypothesis::fails("τ ≡ τ_G: the conjugate mate does not exist")));
        };
        let lhs_res = match self.sigma(p, &ctx.grid)? {
            Some(sigma) => relative_spread(&sigma),
            None => f64::INFINITY,
        };
        let (mut rhs_res, mut relation): (f64, f64) = (0.0, 0.0);
        for (sign, grid) in self.segment_grids(p, &conj, ctx) {
            let Some(ss) = self.sigma(&conj.profile, &grid)? else {
                rhs_res = f64::INFINITY;
                continue;
            };
            rhs_res = rhs_res.max(relative_spread(&ss));
            let Some(sp) = self.sigma(p, &grid)? else { continue };
            for (i, (a, b)) in ss.iter().zip(&sp).enumerate() {
                let res = (a + sign * b).abs() / a.abs().max(1.0);
                relation = relation.max(res);
                draft.trace.push(TracePoint { s: grid[i], residual: res });
            }
        }
        draft.value("segments", conj.segments.len() as f64);
        draft.check("sigma_relation", relation, ctx.theorem);
        let lhs = Side::at_most("curve is a slant helix", lhs_res, ctx.spread);
        let rhs = Side::at_most("conjugate mate is a slant helix on every segment", rhs_res, ctx.spread);
        sides_agree(&mut draft, lhs, rhs);
        Ok(draft.finish(id, Hypothesis::holds("conjugate mate exists")))
    }

    fn mate_geometry(&self, id: TheoremId, p: &CurvatureProfile) -> Result<VerificationReport> {
        let (traj, beta) = self.natural_curve(p)?;
        let has_conjugate = self.conjugate(p)?.is_some();
        let conj = if has_conjugate {
            Some(integrate_direction_curve(
                &traj,
                DirectionField::Binormal,
                GroupElement::identity(self.spec),
            )?)
        } else {
            None
        };
        let geo = verify_mate_geometry(&traj, &beta, conj.as_ref(), &self.tol)?;
        let mut draft = Draft::default();
        draft.value("samples", geo.samples as f64);
        match id {
            TheoremId::Cor6_3 => {
                draft.check("natural_tangent_is_normal", geo.natural_tangent, self.tol.tangent_match);
                if let Some(v) = geo.conjugate_tangent {
                    draft.check("conjugate_tangent_is_binormal", v, self.tol.tangent_match);
                }
                draft.check("mutual_orthogonality", geo.orthogonality, self.tol.orthogonality);
            }
            _ => {
                if let (Some(t), Some(b)) = (geo.conjugate_tangent, geo.bertrand) {
                    draft.check("conjugate_tangent_is_binormal", t, self.tol.tangent_match);
                    draft.check("shared_normal_lines", b, self.tol.bertrand);
                }
            }
        }
        draft.trace = geo.trace;
        let hypothesis = if has_conjugate {
            Hypothesis::holds("τ − τ_G does not vanish identically")
        } else {
            Hypothesis::fails("τ ≡ τ_G: the conjugate mate does not exist")
        };
        Ok(draft.finish(id, hypothesis))
    }
}

struct SignedRow {
    s: f64,
    base: f64,
    coef: f64,
    g: f64,
}

/// `±c²√(a² − c²) cos(cs) / (c² + (a² − c²) sin²(cs))`; the sign is carried
/// by the phase since shifting by π/c negates it.
#[derive(Debug, Clone, Copy)]
struct MateTorsionFormula {
    c: f64,
    m2: f64,
}

impl MateTorsionFormula {
    fn new(c: f64, a: f64) -> Self {
        MateTorsionFormula {
            c,
            m2: (a * a - c * c).max(0.0),
        }
    }

    fn eval(&self, s: f64) -> f64 {
        let c = self.c;
        let (sn, cs) = (c * s).sin_cos();
        c * c * self.m2.sqrt() * cs / (c * c + self.m2 * sn * sn)
    }

    fn sup_residual(&self, grid: &[f64], values: &[f64], phase: f64) -> f64 {
        grid.iter()
            .zip(values)
            .map(|(&s, &v)| (v - self.eval(s - phase)).abs())
            .fold(0.0, f64::max)
    }

    /// Phase over one period minimizing the sup residual: coarse scan, then
    /// golden-section refinement around the best cell.
    fn fit_phase(&self, grid: &[f64], values: &[f64]) -> (f64, f64) {
        const SCAN: usize = 720;
        let period = 2.0 * PI / self.c;
        let cell = period / SCAN as f64;
        let f = |x: f64| self.sup_residual(grid, values, x);
        let mut best = (0.0, f(0.0));
        for j in 1..SCAN {
            let x = j as f64 * cell;
            let v = f(x);
            if v < best.1 {
                best = (x, v);
            }
        }
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (best.0 - cell, best.0 + cell);
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..80 {
            if f1 <= f2 {
                hi = x2;
                (x2, f2) = (x1, f1);
                x1 = hi - inv_phi * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                (x1, f1) = (x2, f2);
                x2 = lo + inv_phi * (hi - lo);
                f2 = f(x2);
            }
        }
        let refined = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
        let (x, v) = if refined.1 <= best.1 { refined } else { best };
        (x.rem_euclid(period), v)
    }
}

/// Estimated mate geometry: tangents against the parent frame, principal
/// normal lines, and mutual orthogonality.
#[derive(Debug, Clone)]
pub struct MateGeometry {
    /// max ‖t̂_β − N‖.
    pub natural_tangent: f64,
    /// max ‖t̂_γ* − B‖.
    pub conjugate_tangent: Option<f64>,
    /// max min(‖N̂* − N̂‖, ‖N̂* + N̂‖) away from zeros of τ − τ_G.
    pub bertrand: Option<f64>,
    /// max of |⟨T̂, T̂_β⟩|, |⟨T̂_β, T̂*⟩|, |⟨T̂, T̂*⟩|.
    pub orthogonality: f64,
    pub samples: usize,
    /// Per-sample worst of the above.
    pub trace: Vec<TracePoint>,
}

/// Compare the parent trajectory with its natural mate and (if present) its
/// conjugate mate, all integrated on the same grid.
pub fn verify_mate_geometry(
    traj: &FrameTrajectory,
    natural: &SampledCurve,
    conjugate: Option<&SampledCurve>,
    tol: &ToleranceSet,
) -> Result<MateGeometry> {
    let spec = traj.spec;
    let same_grid = |c: &SampledCurve| {
        c.len() == traj.len() && c.start == traj.start && c.step == traj.step
    };
    if !same_grid(natural) || conjugate.is_some_and(|c| !same_grid(c)) {
        return Err(Error::GridMismatch("mate curves must share the parent grid".into()));
    }
    let parent = estimate_apparatus(&traj.curve()?, spec)?;
    let nat = estimate_apparatus(natural, spec)?;
    let conj = conjugate.map(|c| estimate_apparatus(c, spec)).transpose()?;
    let tg = spec.torsion();
    let d_max = traj.tau.iter().map(|t| (t - tg).abs()).fold(0.0, f64::max);

    let valid = |i: usize, e: &EstimatedApparatus| e.valid[i];
    let mut geo = MateGeometry {
        natural_tangent: 0.0,
        conjugate_tangent: conj.as_ref().map(|_| 0.0),
        bertrand: conj.as_ref().map(|_| 0.0),
        orthogonality: 0.0,
        samples: 0,
        trace: Vec::new(),
    };
    for i in 0..traj.len() {
        if !valid(i, &parent) || !valid(i, &nat) || conj.as_ref().is_some_and(|c| !valid(i, c)) {
            continue;
        }
        geo.samples += 1;
        let frame = &traj.frames[i];
        let t = parent.tangent[i];
        let tb = nat.tangent[i];
        let mut worst = (tb - frame.n).norm();
        geo.natural_tangent = geo.natural_tangent.max(worst);
        let mut ortho = t.dot(&tb).abs();
        if let Some(c) = &conj {
            let ts = c.tangent[i];
            let tangent = (ts - frame.b).norm();
            geo.conjugate_tangent = geo.conjugate_tangent.map(|v| v.max(tangent));
            worst = worst.max(tangent);
            ortho = ortho.max(tb.dot(&ts).abs()).max(t.dot(&ts).abs());
            if (traj.tau[i] - tg).abs() >= tol.zero_band * d_max {
                let (n, ns): (AlgebraVector, AlgebraVector) = (parent.frames[i].n, c.frames[i].n);
                let b = (ns - n).norm().min((ns + n).norm());
                geo.bertrand = geo.bertrand.map(|v| v.max(b));
                worst = worst.max(b);
            }
        }
        geo.orthogonality = geo.orthogonality.max(ortho);
        geo.trace.push(TracePoint {
            s: traj.s(i),
            residual: worst.max(ortho),
        });
    }
    if geo.samples == 0 {
        return Err(Error::InsufficientSamples {
            needed: 1,
            got: 0,
        });
    }
    Ok(geo)
}

/// Sphere through the left shift of an estimated curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricSphere {
    pub radius: f64,
    /// RMS distance from the sphere; for a planar left shift, the larger of
    /// the relative spread of κ̂ and max |τ̂ − τ̂_G| / mean κ̂.
    pub rms: f64,
    /// The left shift is a circle; `radius` is 1/mean κ̂.
    pub planar: bool,
}

/// Estimate the curve, integrate its tangent over the longest valid run and
/// fit a sphere. A planar left shift (a circle) falls back to 1/κ̂.
pub fn geometric_sphere(curve: &SampledCurve, spec: GroupSpec) -> Result<GeometricSphere> {
    let est = estimate_apparatus(curve, spec)?;
    let (a, b) = est.longest_valid_run();
    let alpha = cumulative_integral(est.step, &est.tangent[a..b])?;
    match left_shift_sphere_fit(&alpha) {
        Ok(fit) => Ok(GeometricSphere {
            radius: fit.radius,
            rms: fit.rms,
            planar: false,
        }),
        Err(Error::DegenerateFit(_)) => {
            let kappa = &est.kappa[a..b];
            let mk = mean(kappa);
            let torsion = (a..b)
                .map(|i| (est.tau[i] - est.lie_torsion[i]).abs())
                .fold(0.0, f64::max);
            Ok(GeometricSphere {
                radius: 1.0 / mk,
                rms: relative_spread(kappa).max(torsion / mk),
                planar: true,
            })
        }
        Err(e) => Err(e),
    }
}

fn sample(grid: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<Vec<f64>> {
    grid.iter().map(|&s| f(s)).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn trapezoid(grid: &[f64], v: &[f64]) -> f64 {
    grid.windows(2)
        .zip(v.windows(2))
        .map(|(s, f)| 0.5 * (s[1] - s[0]) * (f[0] + f[1]))
        .sum()
}

fn trace(grid: &[f64], v: &[f64]) -> Vec<TracePoint> {
    grid.iter()
        .zip(v)
        .map(|(&s, &residual)| TracePoint { s, residual })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERICAL_K: &str = "2*(1+7*sin(2*s)^2)^(-1/2)";
    const SPHERICAL_T: &str = "2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)";

    fn profile(k: &str, t: &str, a: f64, b: f64) -> CurvatureProfile {
        CurvatureProfile::parse(k, t, (a, b)).unwrap()
    }

    fn run(id: TheoremId, p: &CurvatureProfile, spec: GroupSpec) -> VerificationReport {
        Verifier::new(spec).verify(id, p).unwrap()
    }

    fn check<'a>(r: &'a VerificationReport, name: &str) -> &'a Check {
        r.checks.iter().find(|c| c.name == name).unwrap()
    }

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
        }
        assert!("thm9_9".parse::<TheoremId>().is_err());
    }

    #[test]
    fn salkowski_natural_mate_sphere() {
        let r = run(TheoremId::Thm4_1, &profile("3", "2*s", -3.0, 3.0), GroupSpec::R3);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert!(check(&r, "radius").residual <= 1e-9);
        assert!((r.values["radius"] - 1.0 / 3.0).abs() <= 1e-9);
        assert!(check(&r, "geometric_radius").residual <= 1e-3);
        assert!(!r.trace.is_empty());
    }

    #[test]
    fn constant_profile_with_lie_torsion_only() {
        for spec in [GroupSpec::R3, GroupSpec::S3] {
            let p = profile("1", &spec.torsion().to_string(), 0.0, 3.0);
            let r = run(TheoremId::Thm4_1, &p, spec);
            assert_eq!(r.status, Status::Pass, "{r:#?}");
            assert!((r.values["radius"] - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn constant_curvature_with_sine_torsion() {
        let r = run(TheoremId::Thm4_1, &profile("2", "sin(s)", 0.0, 3.0), GroupSpec::R3);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert!(r.max_residual <= 1e-8 || r.tolerance >= 1e-3);
    }

    #[test]
    fn circular_helix_mate_is_a_circle() {
        let r = run(TheoremId::Thm4_1, &profile("2", "1", 0.0, 6.0), GroupSpec::R3);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert!((r.values["circle_radius"] - 1.0 / 5f64.sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn converse_fails_on_anti_salkowski() {
        // spherical natural mate with τ̄ ≠ τ_G, yet κ = 3 cos s is not constant
        let p = profile("3*cos(s)", "sqrt(2)", -1.5, 1.5);
        let r = run(TheoremId::Thm4_1, &p, GroupSpec::R3);
        assert!(r.hypothesis.holds);
        assert_eq!(r.status, Status::Fail);
        assert!(check(&r, "converse_curvature").residual > 0.5);
        let r = run(TheoremId::Thm4_1, &profile("s", "s^2", 1.0, 2.0), GroupSpec::R3);
        assert_eq!(r.status, Status::NotApplicable);
    }

    #[test]
    fn spherical_profile_constant_mate_curvature() {
        let p = profile(SPHERICAL_K, SPHERICAL_T, 0.0, PI);
        let r = run(TheoremId::Thm5_2, &p, GroupSpec::R3);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert!((r.values["a"] - 4.0 * 2f64.sqrt()).abs() <= 1e-9);
        assert!((r.values["c"] - 2.0).abs() <= 1e-12);
        assert!(check(&r, "mate_torsion_formula").residual <= 1e-9);
        let r = run(TheoremId::Thm5_1, &p, GroupSpec::R3);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
    }

    #[test]
    fn perturbed_spherical_profile_fails_the_hypothesis() {
        let p = profile(&format!("1.01*{SPHERICAL_K}"), SPHERICAL_T, 0.0, PI);
        let r = run(TheoremId::Thm5_2, &p, GroupSpec::R3);
        assert_eq!(r.status, Status::NotApplicable);
        assert!(r.hypothesis.detail.contains("not constant"));
    }

    #[test]
    fn degenerate_constant_profile() {
        // a = c: the formula vanishes and so does τ̄ − τ_G
        let r = run(TheoremId::Thm5_2, &profile("2", "0", 0.0, 2.0), GroupSpec::R3);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert!((r.values["a"] - r.values["c"]).abs() <= 1e-12);
    }

    #[test]
    fn phase_fit_recovers_a_shift() {
        let f = MateTorsionFormula::new(2.0, 4.0 * 2f64.sqrt());
        let grid = linspace(0.0, PI, 2001);
        let values: Vec<f64> = grid.iter().map(|&s| -f.eval(s - 0.3)).collect();
        let (phase, sup) = f.fit_phase(&grid, &values);
        assert!(sup <= 1e-9, "{sup}");
        assert!((phase - (0.3 + PI / 2.0)).abs() <= 1e-8, "{phase}");
    }

    #[test]
    fn anti_salkowski_natural_mate_sphere() {
        let p = profile("3*cos(s)", "sqrt(2)", -1.5, 1.5);
        let r = run(TheoremId::Thm6_2, &p, GroupSpec::R3);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert!((r.values["radius"] - 0.5f64.sqrt()).abs() <= 1e-9);
        let r = run(TheoremId::Thm6_2, &profile("abs(cos(s))+2", "1", 0.0, 3.0), GroupSpec::R3);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert!((r.values["radius"] - 1.0).abs() <= 1e-8);
        let r = run(TheoremId::Thm6_2, &profile("1+s", "0", 0.0, 1.0), GroupSpec::R3);
        assert_eq!(r.status, Status::NotApplicable);
    }

    #[test]
    fn lie_torsion_enters_the_hypothesis() {
        let p = profile("3*cos(s)", "1+sqrt(2)", -1.5, 1.5);
        assert_eq!(run(TheoremId::Thm6_2, &p, GroupSpec::S3).status, Status::Pass);
        let p = profile("3*cos(s)", "1", -1.5, 1.5);
        assert_eq!(run(TheoremId::Thm6_2, &p, GroupSpec::S3).status, Status::NotApplicable);
    }

    #[test]
    fn general_helix_biconditional() {
        let pos = run(TheoremId::Cor3_1, &profile("exp(s)", "2*exp(s)", 0.0, 1.0), GroupSpec::R3);
        let neg = run(TheoremId::Cor3_1, &profile("s-1", "s^2+s-2", 1.05, 3.0), GroupSpec::R3);
        for (r, holds) in [(pos, true), (neg, false)] {
            assert_eq!(r.status, Status::Pass, "{r:#?}");
            let b = r.biconditional.unwrap();
            assert_eq!((b.lhs.holds, b.rhs.holds), (holds, holds));
        }
    }

    #[test]
    fn slant_helix_biconditional() {
        let r = run(TheoremId::Cor3_2, &profile("3*cos(s)", "3*sin(s)", -1.5, 1.5), GroupSpec::R3);
        assert_eq!(r.status, Status::Pass);
        assert!(r.biconditional.as_ref().unwrap().lhs.holds);
        let r = run(TheoremId::Cor3_2, &profile("2", "2", 0.0, 1.0), GroupSpec::R3);
        assert_eq!(r.status, Status::NotApplicable);
    }

    #[test]
    fn rectifying_identity() {
        let r = run(TheoremId::Cor3_3, &profile("s-1", "s^2+s-2", 1.05, 3.0), GroupSpec::R3);
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert!((r.values["a"] - 1.0).abs() <= 1e-12);
        assert!(r.biconditional.unwrap().rhs.holds);
        let r = run(TheoremId::Cor3_3, &profile("3*cos(s)", "3*sin(s)", -1.5, 1.5), GroupSpec::R3);
        assert_eq!(r.status, Status::Pass);
        assert!(!r.biconditional.unwrap().lhs.holds);
    }

    #[test]
    fn spherical_mate_relations() {
        let p = profile(SPHERICAL_K, SPHERICAL_T, 0.0, PI);
        for id in [TheoremId::Cor3_4, TheoremId::Cor5_2] {
            let r = run(id, &p, GroupSpec::R3);
            assert_eq!(r.status, Status::Pass, "{r:#?}");
        }
    }

    #[test]
    fn wrong_radius_breaks_the_signed_identity() {
        let p = profile(SPHERICAL_K, SPHERICAL_T, 0.0, PI);
        let v = Verifier::new(GroupSpec::R3);
        let ctx = v.context(&p);
        let mate = natural_mate_apparatus(&p, GroupSpec::R3).unwrap();
        let rows: Vec<SignedRow> = ctx
            .grid
            .iter()
            .map(|&s| {
                let k = p.kappa(s).unwrap();
                SignedRow {
                    s,
                    base: mate.tau(s).unwrap(),
                    coef: k,
                    g: 2.1 * k * k - 1.0,
                }
            })
            .collect();
        let mut draft = Draft::default();
        v.signed_identity(&mut draft, &rows, &ctx, |_| true);
        assert!(draft.checks.iter().all(|c| !c.pass));
    }

    #[test]
    fn conjugate_biconditionals() {
        let helix = profile("exp(s)", "-3*exp(s)", 0.0, 1.0);
        let slant = profile("3*cos(s)", "3*sin(s)", -1.5, 1.5);
        for (p, id, holds) in [
            (&helix, TheoremId::Cor6_1, true),
            (&slant, TheoremId::Cor6_1, false),
            (&slant, TheoremId::Cor6_2, true),
            (&helix, TheoremId::Cor6_2, false),
        ] {
            let r = run(id, p, GroupSpec::R3);
            assert_eq!(r.status, Status::Pass, "{id}: {r:#?}");
            assert_eq!(r.biconditional.unwrap().lhs.holds, holds, "{id}");
        }
        let flat = profile("1+s", "0", 0.0, 1.0);
        assert_eq!(run(TheoremId::Cor6_1, &flat, GroupSpec::R3).status, Status::NotApplicable);
    }

    #[test]
    fn mate_geometry_on_slant_helix() {
        let p = profile("3*cos(s)", "3*sin(s)", -1.5, 1.5);
        for id in [TheoremId::Cor6_3, TheoremId::Cor6_4] {
            let r = run(id, &p, GroupSpec::R3);
            assert_eq!(r.status, Status::Pass, "{r:#?}");
        }
    }

    #[test]
    fn planar_curve_has_no_conjugate_check() {
        let r = run(TheoremId::Cor6_3, &profile("1+s*s", "0", 0.0, 2.0), GroupSpec::R3);
        assert_eq!(r.status, Status::NotApplicable);
        assert!(check(&r, "natural_tangent_is_normal").pass);
        assert!(r.checks.iter().all(|c| c.name != "conjugate_tangent_is_binormal"));
    }

    #[test]
    fn grid_mismatch() {
        let p = profile("1", "2", 0.0, 1.0);
        let traj = synthesize(&p, GroupSpec::R3, 0.0, 1.0, 1e-3).unwrap();
        let short = synthesize(&p, GroupSpec::R3, 0.0, 0.5, 1e-3).unwrap().curve().unwrap();
        assert!(matches!(
            verify_mate_geometry(&traj, &short, None, &ToleranceSet::default()),
            Err(Error::GridMismatch(_))
        ));
    }
}

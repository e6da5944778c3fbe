use std::collections::BTreeMap;
use std::path::Path;

use curve_mates::analysis::classify::{LineFit, Verdict};
use curve_mates::analysis::spherical::SphericalCase;
use curve_mates::analysis::{
    classify as classify_profile, estimate_apparatus, Status, TheoremId, ToleranceSet, VerificationReport, Verifier,
    VerifyMode,
};
use curve_mates::integrator::{integrate_direction_curve, integrate_frame, interval_count, reconstruct_position, DirectionField};
use curve_mates::mates::{mate_apparatus, mate_harmonic_data, MateApparatus, Segment};
use curve_mates::profile::{self, linspace};
use curve_mates::{Error, FrameTrajectory, GroupFamily, MateKind};
use serde::Serialize;

use crate::config::{CommonArgs, FileConfig, RunConfig};
use crate::output::{number, optional, Sink, SCHEMA_VERSION};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn load(args: &CommonArgs) -> Result<(RunConfig, FileConfig)> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    Ok((RunConfig::resolve(args, &file)?, file))
}

/// κ > 0 on the integration grid and its midpoints.
fn check_frenet(cfg: &RunConfig) -> Result<usize> {
    let (a, b) = cfg.domain;
    let n = interval_count(a, b, cfg.step)?;
    let grid = linspace(a, a + n as f64 * cfg.step, 2 * n + 1);
    cfg.profile.check_frenet(&grid)?.into_result()?;
    Ok(n)
}

fn integrate(cfg: &RunConfig) -> Result<FrameTrajectory> {
    let (a, b) = cfg.domain;
    Ok(integrate_frame(&cfg.profile, cfg.spec, a, b, cfg.step, cfg.initial_frame)?)
}

fn position_header(family: GroupFamily) -> Vec<String> {
    match family {
        GroupFamily::CommutativeR3 => ["p1", "p2", "p3"].map(String::from).to_vec(),
        GroupFamily::S3 => ["q0", "q1", "q2", "q3"].map(String::from).to_vec(),
        GroupFamily::So3 => (1..=3)
            .flat_map(|i| (1..=3).map(move |j| format!("r{i}{j}")))
            .collect(),
    }
}

/// `None` where σ is singular; other errors propagate.
fn optional_sigma(p: &curve_mates::CurvatureProfile, spec: curve_mates::GroupSpec, s: f64) -> Result<Option<f64>> {
    match profile::sigma(p, spec, s) {
        Ok(v) => Ok(Some(v)),
        Err(Error::SingularSigma { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn show_tolerances() -> Result<u8> {
    let tol = ToleranceSet::default();
    let width = tol.entries().iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (name, value) in tol.entries() {
        println!("{name:<width$}  {value:e}");
    }
    Ok(0)
}

pub fn synthesize(args: &CommonArgs) -> Result<u8> {
    let (cfg, _) = load(args)?;
    let mut sink = Sink::open(cfg.out.as_deref())?;
    check_frenet(&cfg)?;
    let traj = reconstruct_position(integrate(&cfg)?, cfg.initial_position.clone())?;
    let spec = cfg.spec;

    let mut header = vec!["s".to_string()];
    header.extend(position_header(spec.family));
    for v in ["t", "n", "b"] {
        header.extend((1..=3).map(|i| format!("{v}{i}")));
    }
    header.extend(["kappa", "tau", "H", "sigma", "omega"].map(String::from));
    sink.row(&header)?;

    for (i, frame) in traj.frames.iter().enumerate() {
        let s = traj.s(i);
        let mut row = vec![number(s)];
        row.extend(traj.positions[i].components().into_iter().map(number));
        for v in [frame.t, frame.n, frame.b] {
            row.extend(v.iter().map(|&x| number(x)));
        }
        row.push(number(traj.kappa[i]));
        row.push(number(traj.tau[i]));
        row.push(number(profile::harmonic_curvature(&cfg.profile, spec, s)?));
        row.push(optional(optional_sigma(&cfg.profile, spec, s)?));
        row.push(number(profile::omega(&cfg.profile, spec, s)?));
        sink.row(&row)?;
    }
    sink.commit()?;
    Ok(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MateMode {
    Analytic,
    Geometric,
    Both,
}

fn parse_kind(text: &str) -> Result<MateKind> {
    match text {
        "natural" => Ok(MateKind::Natural),
        "conjugate" => Ok(MateKind::Conjugate),
        _ => Err(CliError::Config(format!("unknown mate kind {text:?} (expected natural or conjugate)"))),
    }
}

fn parse_mate_mode(text: &str) -> Result<MateMode> {
    match text {
        "analytic" => Ok(MateMode::Analytic),
        "geometric" => Ok(MateMode::Geometric),
        "both" => Ok(MateMode::Both),
        _ => Err(CliError::Config(format!(
            "unknown mode {text:?} (expected analytic, geometric or both)"
        ))),
    }
}

#[derive(Debug, Serialize)]
struct MateSummary {
    schema_version: &'static str,
    group: &'static str,
    kind: MateKind,
    max_abs_kappa_diff: Option<f64>,
    max_abs_tau_diff: Option<f64>,
    compared_samples: usize,
}

/// Analytic mate columns at one grid point: κ, τ, H, σ.
fn analytic_row(m: &MateApparatus, s: f64) -> Result<(f64, f64, Option<f64>, Option<f64>)> {
    let (k, t) = (m.kappa(s)?, m.tau(s)?);
    let harmonic = match mate_harmonic_data(m, s) {
        Ok(h) => Some(h),
        Err(Error::NotAFrenetMate { .. } | Error::ZeroHarmonicCurvature { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok((k, t, harmonic.map(|h| h.h), harmonic.and_then(|h| h.sigma)))
}

pub fn mate(args: &CommonArgs, kind: Option<&str>, mode: Option<&str>, summary: Option<&Path>) -> Result<u8> {
    let (cfg, file) = load(args)?;
    let kind = parse_kind(kind.or(file.kind.as_deref()).unwrap_or("natural"))?;
    let mode = parse_mate_mode(mode.or(file.mode.as_deref()).unwrap_or("analytic"))?;
    let spec = cfg.spec;

    let mut sink = Sink::open(cfg.out.as_deref())?;
    let mut summary_sink = match (mode, summary) {
        (MateMode::Both, Some(p)) => Some(Sink::open(Some(p))?),
        _ => None,
    };
    let n = check_frenet(&cfg)?;
    let m = mate_apparatus(&cfg.profile, spec, kind)?;
    let grid: Vec<f64> = (0..=n).map(|i| cfg.domain.0 + i as f64 * cfg.step).collect();

    let estimate = if mode == MateMode::Analytic {
        None
    } else {
        let field = match kind {
            MateKind::Natural => DirectionField::PrincipalNormal,
            MateKind::Conjugate => DirectionField::Binormal,
        };
        let curve = integrate_direction_curve(&integrate(&cfg)?, field, cfg.initial_position.clone())?;
        let est = estimate_apparatus(&curve, spec)?;
        Some((curve, est))
    };

    let mut header = vec!["s".to_string()];
    if mode != MateMode::Geometric {
        header.extend(["kappa", "tau", "H", "sigma"].map(String::from));
    }
    if mode != MateMode::Analytic {
        header.extend(position_header(spec.family));
        header.extend(["kappa_est", "tau_est", "tau_g_est"].map(String::from));
    }
    sink.row(&header)?;

    let d_max = grid
        .iter()
        .map(|&s| Ok((cfg.profile.tau(s)? - spec.torsion()).abs()))
        .collect::<std::result::Result<Vec<f64>, Error>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let (mut dk, mut dt, mut compared) = (0.0_f64, 0.0_f64, 0usize);

    for (i, &s) in grid.iter().enumerate() {
        let mut row = vec![number(s)];
        let (k, t, h, sg) = analytic_row(&m, s)?;
        if mode != MateMode::Geometric {
            row.extend([number(k), number(t), optional(h), optional(sg)]);
        }
        if let Some((curve, est)) = &estimate {
            row.extend(curve.points[i].components().into_iter().map(number));
            if est.valid[i] {
                row.extend([number(est.kappa[i]), number(est.tau[i]), number(est.lie_torsion[i])]);
                let usable = match kind {
                    MateKind::Natural => true,
                    MateKind::Conjugate => {
                        (cfg.profile.tau(s)? - spec.torsion()).abs() >= cfg.tol.zero_band * d_max
                    }
                };
                if usable {
                    dk = dk.max((est.kappa[i] - k).abs());
                    dt = dt.max((est.tau[i] - t).abs());
                    compared += 1;
                }
            } else {
                row.extend([String::new(), String::new(), String::new()]);
            }
        }
        sink.row(&row)?;
    }

    if mode == MateMode::Both {
        let report = MateSummary {
            schema_version: SCHEMA_VERSION,
            group: spec.name(),
            kind,
            max_abs_kappa_diff: (compared > 0).then_some(dk),
            max_abs_tau_diff: (compared > 0).then_some(dt),
            compared_samples: compared,
        };
        match summary_sink {
            Some(ref mut out) => out.json(&report)?,
            None => eprintln!("{}", serde_json::to_string_pretty(&report).expect("summary serializes")),
        }
    }
    sink.commit()?;
    if let Some(out) = summary_sink {
        out.commit()?;
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
struct SphericalSummary {
    pass: bool,
    radius: Option<f64>,
    radius_estimate: f64,
    radius_spread: f64,
    tangent_residual: f64,
    case: SphericalCase,
}

#[derive(Debug, Serialize)]
struct ClassifyOutput<'a> {
    schema_version: &'static str,
    group: &'static str,
    kappa: &'a str,
    tau: &'a str,
    domain: [f64; 2],
    verdicts: &'a BTreeMap<&'static str, Verdict>,
    spherical: SphericalSummary,
    harmonic_fit: LineFit,
    sigma_singular_at: Option<f64>,
    segments: &'a [Segment],
    spread_tolerance: f64,
    tolerances: &'a ToleranceSet,
}

pub fn classify(args: &CommonArgs) -> Result<u8> {
    let (cfg, _) = load(args)?;
    let mut sink = Sink::open(cfg.out.as_deref())?;
    let report = classify_profile(&cfg.profile, cfg.spec, &cfg.tol)?;
    let sph = &report.spherical;
    sink.json(&ClassifyOutput {
        schema_version: SCHEMA_VERSION,
        group: cfg.spec.name(),
        kappa: &cfg.kappa,
        tau: &cfg.tau,
        domain: [cfg.domain.0, cfg.domain.1],
        verdicts: &report.verdicts,
        spherical: SphericalSummary {
            pass: sph.spherical,
            radius: sph.radius,
            radius_estimate: sph.radius_estimate,
            radius_spread: sph.radius_spread,
            tangent_residual: sph.tangent_residual,
            case: sph.case,
        },
        harmonic_fit: report.harmonic_fit,
        sigma_singular_at: report.sigma_singular_at,
        segments: &report.segments,
        spread_tolerance: report.spread_tolerance,
        tolerances: &cfg.tol,
    })?;
    sink.commit()?;
    Ok(0)
}

#[derive(Debug, Default, Serialize)]
struct Counts {
    pass: usize,
    fail: usize,
    not_applicable: usize,
}

#[derive(Debug, Serialize)]
struct VerifyOutput<'a> {
    schema_version: &'static str,
    group: &'static str,
    kappa: &'a str,
    tau: &'a str,
    domain: [f64; 2],
    step: f64,
    mode: VerifyMode,
    counts: Counts,
    reports: &'a [VerificationReport],
    tolerances: &'a ToleranceSet,
}

pub fn verify(
    args: &CommonArgs,
    theorems: Option<Vec<String>>,
    mode: Option<&str>,
    trace: Option<&Path>,
) -> Result<u8> {
    let (cfg, file) = load(args)?;
    let ids: Vec<TheoremId> = match theorems.or(file.theorems) {
        Some(list) => list
            .iter()
            .map(|t| t.trim().parse::<TheoremId>())
            .collect::<std::result::Result<_, _>>()?,
        None => TheoremId::ALL.to_vec(),
    };
    let mode: VerifyMode = mode.or(file.mode.as_deref()).unwrap_or("both").parse()?;

    let mut sink = Sink::open(cfg.out.as_deref())?;
    let mut trace_sink = trace.map(|p| Sink::open(Some(p))).transpose()?;
    let verifier = Verifier::new(cfg.spec)
        .with_tolerances(cfg.tol)
        .with_step(cfg.step)
        .with_mode(mode);
    let reports = verifier.verify_all(&ids, &cfg.profile)?;

    let mut counts = Counts::default();
    for r in &reports {
        match r.status {
            Status::Pass => counts.pass += 1,
            Status::Fail => counts.fail += 1,
            Status::NotApplicable => counts.not_applicable += 1,
        }
    }
    let failed = counts.fail > 0;
    sink.json(&VerifyOutput {
        schema_version: SCHEMA_VERSION,
        group: cfg.spec.name(),
        kappa: &cfg.kappa,
        tau: &cfg.tau,
        domain: [cfg.domain.0, cfg.domain.1],
        step: cfg.step,
        mode,
        counts,
        reports: &reports,
        tolerances: &cfg.tol,
    })?;
    if let Some(out) = trace_sink.as_mut() {
        out.row(&["theorem", "s", "residual"])?;
        for r in &reports {
            for p in &r.trace {
                out.row(&[r.theorem.as_str().to_string(), number(p.s), number(p.residual)])?;
            }
        }
    }
    sink.commit()?;
    if let Some(out) = trace_sink {
        out.commit()?;
    }
    Ok(if failed { 1 } else { 0 })
}

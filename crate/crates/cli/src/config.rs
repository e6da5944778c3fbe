use std::path::{Path, PathBuf};

use clap::Args;
use curve_mates::analysis::ToleranceSet;
use curve_mates::expression::parse;
use curve_mates::lie_algebra::{Frame, GroupElement, GroupSpec};
use curve_mates::CurvatureProfile;
use serde::Deserialize;

use crate::CliError;

/// Flags shared by every subcommand. Each overrides the matching field of
/// the `--config` file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Lie group: r3, so3 or s3.
    #[arg(long)]
    pub group: Option<String>,
    /// Curvature κ(s) as an expression in s.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Torsion τ(s) as an expression in s.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Parameter interval `a:b`; endpoints may be constant expressions such as `pi/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Grid spacing h.
    #[arg(long)]
    pub step: Option<f64>,
    /// Output file (standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ToleranceArgs {
    #[arg(long = "tol-analytic-spread", value_name = "X")]
    pub analytic_spread: Option<f64>,
    #[arg(long = "tol-estimated-spread", value_name = "X")]
    pub estimated_spread: Option<f64>,
    #[arg(long = "tol-zero", value_name = "X")]
    pub zero: Option<f64>,
    #[arg(long = "tol-rectifying-slope", value_name = "X")]
    pub rectifying_slope: Option<f64>,
    #[arg(long = "tol-sigma-singular", value_name = "X")]
    pub sigma_singular: Option<f64>,
    #[arg(long = "tol-zero-band", value_name = "X")]
    pub zero_band: Option<f64>,
    #[arg(long = "tol-theorem-analytic", value_name = "X")]
    pub theorem_analytic: Option<f64>,
    #[arg(long = "tol-theorem-estimated", value_name = "X")]
    pub theorem_estimated: Option<f64>,
    #[arg(long = "tol-rectifying-identity", value_name = "X")]
    pub rectifying_identity: Option<f64>,
    #[arg(long = "tol-tangent-match", value_name = "X")]
    pub tangent_match: Option<f64>,
    #[arg(long = "tol-bertrand", value_name = "X")]
    pub bertrand: Option<f64>,
    #[arg(long = "tol-orthogonality", value_name = "X")]
    pub orthogonality: Option<f64>,
}

impl ToleranceArgs {
    fn overrides(&self) -> [(&'static str, Option<f64>); 12] {
        [
            ("analytic_spread", self.analytic_spread),
            ("estimated_spread", self.estimated_spread),
            ("zero", self.zero),
            ("rectifying_slope", self.rectifying_slope),
            ("sigma_singular", self.sigma_singular),
            ("zero_band", self.zero_band),
            ("theorem_analytic", self.theorem_analytic),
            ("theorem_estimated", self.theorem_estimated),
            ("rectifying_identity", self.rectifying_identity),
            ("tangent_match", self.tangent_match),
            ("bertrand", self.bertrand),
            ("orthogonality", self.orthogonality),
        ]
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum DomainSpec {
    Pair([f64; 2]),
    Text(String),
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub group: Option<String>,
    pub kappa: Option<String>,
    pub tau: Option<String>,
    pub domain: Option<DomainSpec>,
    pub step: Option<f64>,
    /// Rows T, N, B of the initial frame.
    pub initial_frame: Option<[[f64; 3]; 3]>,
    /// Components of the initial position (3, 9 row-major, or w,i,j,k).
    pub initial_position: Option<Vec<f64>>,
    pub kind: Option<String>,
    pub mode: Option<String>,
    pub theorems: Option<Vec<String>>,
    pub tolerances: Option<ToleranceSet>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// A validated run: group, profile, grid and tolerances.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: GroupSpec,
    pub kappa: String,
    pub tau: String,
    pub profile: CurvatureProfile,
    pub domain: (f64, f64),
    pub step: f64,
    pub initial_frame: Frame,
    pub initial_position: GroupElement,
    pub tol: ToleranceSet,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_STEP: f64 = 1e-3;

impl RunConfig {
    pub fn resolve(args: &CommonArgs, file: &FileConfig) -> Result<Self, CliError> {
        let group = args.group.as_deref().or(file.group.as_deref()).unwrap_or("r3");
        let spec = GroupSpec::from_name(group)
            .ok_or_else(|| CliError::Config(format!("unknown group {group:?} (expected r3, so3 or s3)")))?;
        let kappa = args
            .kappa
            .clone()
            .or_else(|| file.kappa.clone())
            .ok_or_else(|| CliError::Config("missing --kappa".into()))?;
        let tau = args
            .tau
            .clone()
            .or_else(|| file.tau.clone())
            .ok_or_else(|| CliError::Config("missing --tau".into()))?;
        let domain = match (&args.domain, &file.domain) {
            (Some(text), _) => parse_domain(text)?,
            (None, Some(DomainSpec::Text(text))) => parse_domain(text)?,
            (None, Some(DomainSpec::Pair([a, b]))) => (*a, *b),
            (None, None) => return Err(CliError::Config("missing --domain".into())),
        };
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(CliError::Config(format!("domain must satisfy s_min < s_max, got {a}:{b}")));
        }
        let step = args.step.or(file.step).unwrap_or(DEFAULT_STEP);
        if !(step > 0.0 && step.is_finite()) {
            return Err(CliError::Config(format!("step must be positive, got {step}")));
        }
        if step > (b - a) / 8.0 {
            return Err(CliError::Config(format!(
                "step {step} exceeds (s_max - s_min)/8 = {}",
                (b - a) / 8.0
            )));
        }

        let mut tol = file.tolerances.unwrap_or_default();
        for (name, value) in args.tol.overrides() {
            if let Some(v) = value {
                tol.set(name, v);
            }
        }

        let initial_frame = match file.initial_frame {
            Some([t, n, b]) => {
                let f = Frame::new(t.into(), n.into(), b.into());
                let defect = f.orthonormality_defect();
                if !(defect <= 1e-9) {
                    return Err(CliError::Config(format!(
                        "initial_frame is not right-handed orthonormal (defect {defect:e})"
                    )));
                }
                f
            }
            None => Frame::identity(),
        };
        let initial_position = match &file.initial_position {
            Some(c) => GroupElement::from_components(spec, c)
                .map_err(|e| CliError::Config(format!("initial_position: {e}")))?,
            None => GroupElement::identity(spec),
        };

        let profile = CurvatureProfile::parse(&kappa, &tau, domain).map_err(CliError::Core)?;
        Ok(RunConfig {
            spec,
            kappa,
            tau,
            profile,
            domain,
            step,
            initial_frame,
            initial_position,
            tol,
            out: args.out.clone(),
        })
    }
}

fn parse_domain(text: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| CliError::Config(format!("domain must look like a:b, got {text:?}")))?;
    Ok((endpoint(a)?, endpoint(b)?))
}

fn endpoint(text: &str) -> Result<f64, CliError> {
    let e = parse(text.trim()).map_err(|e| CliError::Config(format!("domain endpoint {text:?}: {e}")))?;
    if !e.is_constant() {
        return Err(CliError::Config(format!("domain endpoint {text:?} depends on s")));
    }
    e.eval(0.0)
        .map_err(|e| CliError::Config(format!("domain endpoint {text:?}: {e}")))
}

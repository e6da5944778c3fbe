//! Curvature profiles `(κ(s), τ(s))` and the scalar/vector apparatus derived
//! from them: harmonic curvature H, σ, ω and the Darboux triple.

use std::fmt;

use nalgebra::Vector3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expression::{self, Expr};
use crate::lie_algebra::{AlgebraVector, GroupSpec};

/// κ below this value on an evaluation grid violates the Frenet condition.
pub const FRENET_MIN_KAPPA: f64 = 1e-12;
/// |H′| at or below this value makes σ singular.
pub const SIGMA_SINGULAR_TOL: f64 = 1e-12;

/// Values on a uniform grid `start + i * step`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFn {
    start: f64,
    step: f64,
    values: Vec<f64>,
}

impl SampledFn {
    pub fn new(start: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 5 {
            return Err(Error::InsufficientSamples {
                needed: 5,
                got: values.len(),
            });
        }
        if !(step > 0.0) {
            return Err(Error::InvalidArgument(format!("grid step must be positive, got {step}")));
        }
        Ok(SampledFn {
            start,
            step,
            values,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn end(&self) -> f64 {
        self.grid_point(self.values.len() - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid_point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    /// Grid value, or cubic Lagrange interpolation through the four nearest samples.
    pub fn eval(&self, s: f64) -> Result<f64> {
        let n = self.values.len();
        let x = (s - self.start) / self.step;
        if !(x >= -1e-9 && x <= (n - 1) as f64 + 1e-9) {
            return Err(Error::Domain {
                subterm: format!("sampled[{n}] on [{}, {}]", self.start, self.end()),
                s,
            });
        }
        let nearest = x.round();
        if (x - nearest).abs() <= 1e-9 {
            return Ok(self.values[nearest as usize]);
        }
        let j0 = (x.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let nodes = [j0, j0 + 1, j0 + 2, j0 + 3];
        let mut acc = 0.0;
        for (a, &ja) in nodes.iter().enumerate() {
            let mut w = 1.0;
            for (b, &jb) in nodes.iter().enumerate() {
                if a != b {
                    w *= (x - jb as f64) / (ja as f64 - jb as f64);
                }
            }
            acc += w * self.values[ja];
        }
        Ok(acc)
    }

    /// Five-point derivative: central in the interior, one-sided on the two
    /// boundary pairs.
    pub fn derivative(&self) -> SampledFn {
        SampledFn {
            start: self.start,
            step: self.step,
            values: five_point_derivative(&self.values, self.step),
        }
    }
}

/// Fourth-order five-point derivative of uniformly sampled values (len ≥ 5).
pub fn five_point_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "five-point derivative needs at least 5 samples");
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    let (a, b, c, e, g) = (f[n - 1], f[n - 2], f[n - 3], f[n - 4], f[n - 5]);
    d[n - 1] = (25.0 * a - 48.0 * b + 36.0 * c - 16.0 * e + 3.0 * g) / (12.0 * h);
    d[n - 2] = (3.0 * a + 10.0 * b - 18.0 * c + 6.0 * e - g) / (12.0 * h);
    d
}

/// A scalar function of arc length: closed form or uniform samples.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFn {
    Expr(Expr),
    Sampled(SampledFn),
}

impl ScalarFn {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(ScalarFn::Expr(expression::parse(text)?))
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        match self {
            ScalarFn::Expr(e) => e.eval(s),
            ScalarFn::Sampled(f) => f.eval(s),
        }
    }

    pub fn derivative(&self) -> ScalarFn {
        match self {
            ScalarFn::Expr(e) => ScalarFn::Expr(e.differentiate()),
            ScalarFn::Sampled(f) => ScalarFn::Sampled(f.derivative()),
        }
    }

    pub fn as_expr(&self) -> Option<&Expr> {
        match self {
            ScalarFn::Expr(e) => Some(e),
            ScalarFn::Sampled(_) => None,
        }
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Expr(e) => write!(f, "{e}"),
            ScalarFn::Sampled(s) => write!(f, "sampled[{}] on [{}, {}]", s.len(), s.start, s.end()),
        }
    }
}

/// κ(s), τ(s) on a closed domain, with their derivatives prepared once.
#[derive(Debug, Clone)]
pub struct CurvatureProfile {
    kappa: ScalarFn,
    tau: ScalarFn,
    kappa_prime: ScalarFn,
    tau_prime: ScalarFn,
    domain: (f64, f64),
    grid: Option<(f64, usize)>,
}

impl CurvatureProfile {
    pub fn new(kappa: ScalarFn, tau: ScalarFn, domain: (f64, f64)) -> Result<Self> {
        let (a, b) = domain;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("empty domain [{a}, {b}]")));
        }
        let grid = match (&kappa, &tau) {
            (ScalarFn::Sampled(k), ScalarFn::Sampled(t)) => {
                if k.len() != t.len() || k.start != t.start || k.step != t.step {
                    return Err(Error::GridMismatch(
                        "kappa and tau samples live on different grids".into(),
                    ));
                }
                Some((k.step, k.len()))
            }
            (ScalarFn::Sampled(k), _) | (_, ScalarFn::Sampled(k)) => Some((k.step, k.len())),
            _ => None,
        };
        Ok(CurvatureProfile {
            kappa_prime: kappa.derivative(),
            tau_prime: tau.derivative(),
            kappa,
            tau,
            domain,
            grid,
        })
    }

    pub fn from_exprs(kappa: Expr, tau: Expr, domain: (f64, f64)) -> Result<Self> {
        Self::new(ScalarFn::Expr(kappa), ScalarFn::Expr(tau), domain)
    }

    pub fn parse(kappa: &str, tau: &str, domain: (f64, f64)) -> Result<Self> {
        Self::new(ScalarFn::parse(kappa)?, ScalarFn::parse(tau)?, domain)
    }

    pub fn from_samples(start: f64, step: f64, kappa: Vec<f64>, tau: Vec<f64>) -> Result<Self> {
        let k = SampledFn::new(start, step, kappa)?;
        let t = SampledFn::new(start, step, tau)?;
        let domain = (k.start, k.end());
        Self::new(ScalarFn::Sampled(k), ScalarFn::Sampled(t), domain)
    }

    /// Same functions, restricted to a sub-interval.
    pub fn restricted(&self, domain: (f64, f64)) -> Result<Self> {
        let (a, b) = domain;
        if a < self.domain.0 - 1e-12 || b > self.domain.1 + 1e-12 || !(a < b) {
            return Err(Error::InvalidArgument(format!(
                "[{a}, {b}] is not a sub-interval of [{}, {}]",
                self.domain.0, self.domain.1
            )));
        }
        let mut p = self.clone();
        p.domain = domain;
        Ok(p)
    }

    pub fn kappa_fn(&self) -> &ScalarFn {
        &self.kappa
    }

    pub fn tau_fn(&self) -> &ScalarFn {
        &self.tau
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn is_sampled(&self) -> bool {
        self.grid.is_some()
    }

    pub fn kappa(&self, s: f64) -> Result<f64> {
        self.kappa.eval(s)
    }

    pub fn tau(&self, s: f64) -> Result<f64> {
        self.tau.eval(s)
    }

    pub fn kappa_prime(&self, s: f64) -> Result<f64> {
        self.kappa_prime.eval(s)
    }

    pub fn tau_prime(&self, s: f64) -> Result<f64> {
        self.tau_prime.eval(s)
    }

    /// Evaluation grid over the domain: the native sample grid for sampled
    /// profiles (restricted to the domain), otherwise `n` equispaced points.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.domain;
        if let (ScalarFn::Sampled(f), _) | (_, ScalarFn::Sampled(f)) = (&self.kappa, &self.tau) {
            return (0..f.len())
                .map(|i| f.grid_point(i))
                .filter(|s| *s >= a - 1e-12 && *s <= b + 1e-12)
                .collect();
        }
        linspace(a, b, n)
    }

    /// Check κ > 0 on `grid`.
    pub fn check_frenet(&self, grid: &[f64]) -> Result<FrenetCheck> {
        let mut bad = Vec::new();
        for (i, &s) in grid.iter().enumerate() {
            let k = self.kappa(s)?;
            if !(k > FRENET_MIN_KAPPA) {
                bad.push((i, s, k));
            }
        }
        let suggested = if bad.is_empty() || bad.len() == grid.len() {
            None
        } else {
            // violations confined to a prefix and/or suffix of the grid
            let mut lo = 0;
            while bad.get(lo).is_some_and(|&(i, _, _)| i == lo) {
                lo += 1;
            }
            let mut hi = grid.len();
            let mut j = bad.len();
            while j > lo && bad[j - 1].0 == hi - 1 {
                hi -= 1;
                j -= 1;
            }
            (j == lo && lo < hi).then(|| (grid[lo], grid[hi - 1]))
        };
        Ok(FrenetCheck {
            violations: bad.into_iter().map(|(_, s, k)| (s, k)).collect(),
            suggested_domain: suggested,
        })
    }
}

/// Outcome of [`CurvatureProfile::check_frenet`].
#[derive(Debug, Clone, PartialEq)]
pub struct FrenetCheck {
    /// `(s, κ(s))` for every grid point with κ ≤ [`FRENET_MIN_KAPPA`].
    pub violations: Vec<(f64, f64)>,
    /// Trimmed domain when violations sit only at the ends of the grid.
    pub suggested_domain: Option<(f64, f64)>,
}

impl FrenetCheck {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(&(s, kappa)) => Err(Error::FrenetViolation {
                s,
                kappa,
                usable: self.suggested_domain,
            }),
        }
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn positive_kappa(p: &CurvatureProfile, s: f64) -> Result<f64> {
    let k = p.kappa(s)?;
    if k > 0.0 {
        Ok(k)
    } else {
        Err(Error::FrenetViolation {
            s,
            kappa: k,
            usable: None,
        })
    }
}

/// H = (τ − τ_G) / κ.
pub fn harmonic_curvature(p: &CurvatureProfile, spec: GroupSpec, s: f64) -> Result<f64> {
    let k = positive_kappa(p, s)?;
    Ok((p.tau(s)? - spec.torsion()) / k)
}

/// H′ = (τ′ κ − (τ − τ_G) κ′) / κ².
pub fn harmonic_curvature_derivative(p: &CurvatureProfile, spec: GroupSpec, s: f64) -> Result<f64> {
    let k = positive_kappa(p, s)?;
    let d = p.tau(s)? - spec.torsion();
    Ok((p.tau_prime(s)? * k - d * p.kappa_prime(s)?) / (k * k))
}

/// σ = κ (H² + 1)^{3/2} / H′.
pub fn sigma(p: &CurvatureProfile, spec: GroupSpec, s: f64) -> Result<f64> {
    let k = positive_kappa(p, s)?;
    let h = harmonic_curvature(p, spec, s)?;
    let hp = harmonic_curvature_derivative(p, spec, s)?;
    if hp.abs() <= SIGMA_SINGULAR_TOL {
        return Err(Error::SingularSigma { s, h_prime: hp });
    }
    Ok(k * (h * h + 1.0).powf(1.5) / hp)
}

/// ω = ‖Ω‖ = √((τ − τ_G)² + κ²).
pub fn omega(p: &CurvatureProfile, spec: GroupSpec, s: f64) -> Result<f64> {
    let k = p.kappa(s)?;
    let d = p.tau(s)? - spec.torsion();
    Ok(d.hypot(k))
}

/// Darboux vector D, extrinsic Darboux Ω and co-Darboux Ω*, as coefficient
/// triples in the (T, N, B) frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DarbouxVectors {
    pub darboux: AlgebraVector,
    pub extrinsic: AlgebraVector,
    pub co_extrinsic: AlgebraVector,
}

pub fn darboux_vectors(p: &CurvatureProfile, spec: GroupSpec, s: f64) -> Result<DarbouxVectors> {
    let k = p.kappa(s)?;
    let t = p.tau(s)?;
    let d = t - spec.torsion();
    Ok(DarbouxVectors {
        darboux: Vector3::new(t, 0.0, k),
        extrinsic: Vector3::new(d, 0.0, k),
        co_extrinsic: Vector3::new(-k, 0.0, d),
    })
}

/// Everything the profile determines at one arc-length value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApparatusSample {
    pub s: f64,
    pub kappa: f64,
    pub tau: f64,
    pub lie_torsion: f64,
    pub h: f64,
    pub h_prime: f64,
    /// `None` where H′ vanishes.
    pub sigma: Option<f64>,
    pub omega: f64,
    pub vectors: DarbouxVectors,
}

pub fn apparatus(p: &CurvatureProfile, spec: GroupSpec, s: f64) -> Result<ApparatusSample> {
    let sigma = match sigma(p, spec, s) {
        Ok(v) => Some(v),
        Err(Error::SingularSigma { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(ApparatusSample {
        s,
        kappa: p.kappa(s)?,
        tau: p.tau(s)?,
        lie_torsion: spec.torsion(),
        h: harmonic_curvature(p, spec, s)?,
        h_prime: harmonic_curvature_derivative(p, spec, s)?,
        sigma,
        omega: omega(p, spec, s)?,
        vectors: darboux_vectors(p, spec, s)?,
    })
}

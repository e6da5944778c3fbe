//! Finite-difference estimate of the Frenet apparatus from sampled positions.
//!
//! Every derivative is a five-point central stencil whose points sit `stride`
//! samples apart. Three derivatives are chained (position → t → t′, n → n′),
//! so the first and last `6 · stride` samples carry no estimate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::SampledCurve;
use crate::lie_algebra::{bracket, AlgebraVector, AmbientTangent, Frame, GroupSpec};
use crate::profile::CurvatureProfile;

/// κ̂ below this value means the sample has no principal normal.
pub const ESTIMATE_MIN_KAPPA: f64 = 1e-9;

/// Stencil spacing in samples.
///
/// With unit spacing the third derivative behind τ̂ is dominated by rounding
/// (≈ ε/h³); spreading the stencil keeps truncation (∝ (stride·h)⁴) the
/// dominant error, so the estimate converges at fourth order as h shrinks.
pub const DEFAULT_STRIDE: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct EstimatedApparatus {
    pub start: f64,
    pub step: f64,
    pub stride: usize,
    /// Unit tangent components t̂.
    pub tangent: Vec<AlgebraVector>,
    pub frames: Vec<Frame>,
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub lie_torsion: Vec<f64>,
    /// False within the stencil margins and next to samples without a normal.
    pub valid: Vec<bool>,
}

impl EstimatedApparatus {
    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    pub fn s(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn valid_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.valid[i])
    }

    /// Index of the sample nearest to `s`, if it is valid.
    pub fn index_of(&self, s: f64) -> Option<usize> {
        let x = ((s - self.start) / self.step).round();
        if x < 0.0 || x >= self.len() as f64 {
            return None;
        }
        let i = x as usize;
        self.valid[i].then_some(i)
    }

    /// Half-open index range of the longest run of valid samples.
    pub fn longest_valid_run(&self) -> (usize, usize) {
        let (mut best, mut run) = ((0, 0), None::<usize>);
        for i in 0..=self.len() {
            let ok = i < self.len() && self.valid[i];
            match (ok, run) {
                (true, None) => run = Some(i),
                (false, Some(a)) => {
                    if i - a > best.1 - best.0 {
                        best = (a, i);
                    }
                    run = None;
                }
                _ => {}
            }
        }
        best
    }

    /// Longest run of valid samples as a sampled profile (κ̂, τ̂).
    pub fn as_profile(&self) -> Result<CurvatureProfile> {
        let (a, b) = self.longest_valid_run();
        CurvatureProfile::from_samples(
            self.s(a),
            self.step,
            self.kappa[a..b].to_vec(),
            self.tau[a..b].to_vec(),
        )
    }
}

/// Five-point central derivative with points `k` samples apart; `None`
/// where the stencil leaves the valid range.
fn strided_derivative<T>(values: &[Option<T>], k: usize, h: f64) -> Vec<Option<T>>
where
    T: Clone + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let n = values.len();
    let scale = 1.0 / (12.0 * k as f64 * h);
    (0..n)
        .map(|i| {
            if i < 2 * k || i + 2 * k >= n {
                return None;
            }
            let (a, b, c, d) = (
                values[i - 2 * k].clone()?,
                values[i - k].clone()?,
                values[i + k].clone()?,
                values[i + 2 * k].clone()?,
            );
            Some(((a - d) + (c - b) * 8.0) * scale)
        })
        .collect()
}

/// Estimate with [`DEFAULT_STRIDE`].
pub fn estimate_apparatus(curve: &SampledCurve, spec: GroupSpec) -> Result<EstimatedApparatus> {
    estimate_apparatus_with(curve, spec, DEFAULT_STRIDE)
}

/// Estimate κ̂, τ̂, τ̂_G from positions:
///
/// ```text
/// t̂ = dL_{γ⁻¹} γ′ / ‖·‖,  κ̂ = ‖t̂′‖,  n̂ = t̂′/κ̂,  b̂ = t̂ × n̂
/// τ̂ = ⟨n̂′ + ½[t̂, n̂], b̂⟩,  τ̂_G = ½⟨[t̂, n̂], b̂⟩
/// ```
pub fn estimate_apparatus_with(
    curve: &SampledCurve,
    spec: GroupSpec,
    stride: usize,
) -> Result<EstimatedApparatus> {
    let n = curve.len();
    let stride = stride.max(1);
    let needed = 12 * stride + 1;
    if n < needed.max(9) {
        return Err(Error::InsufficientSamples {
            needed: needed.max(9),
            got: n,
        });
    }
    if let Some(g) = curve.points.iter().find(|g| g.family() != spec.family) {
        return Err(Error::InvalidArgument(format!(
            "{:?} position on a {} curve",
            g.family(),
            spec.name()
        )));
    }
    let h = curve.step;
    let m = curve.points[0].components().len();
    let comps: Vec<Option<nalgebra::DVector<f64>>> = curve
        .points
        .iter()
        .map(|g| Some(nalgebra::DVector::from_vec(g.components())))
        .collect();
    let velocity = strided_derivative(&comps, stride, h);

    let mut tangent = vec![None; n];
    for i in 0..n {
        if let Some(v) = &velocity[i] {
            let amb = AmbientTangent::from_components(spec.family, v.as_slice());
            debug_assert_eq!(v.len(), m);
            let t = curve.points[i].pull_back(&amb)?;
            tangent[i] = Some(t / t.norm());
        }
    }
    let t_prime = strided_derivative(&tangent, stride, h);

    let mut kappa = vec![0.0; n];
    let mut normal: Vec<Option<AlgebraVector>> = vec![None; n];
    let mut flat_run = 0usize;
    for i in 0..n {
        let Some(dt) = t_prime[i] else { continue };
        let k = dt.norm();
        kappa[i] = k;
        if k < ESTIMATE_MIN_KAPPA {
            flat_run += 1;
            if flat_run > 2 * stride {
                return Err(Error::DegenerateCurvature {
                    first: i + 1 - flat_run,
                    last: i,
                    threshold: ESTIMATE_MIN_KAPPA,
                });
            }
        } else {
            flat_run = 0;
            normal[i] = Some(dt / k);
        }
    }
    let n_prime = strided_derivative(&normal, stride, h);

    let mut frames = vec![Frame::identity(); n];
    let mut tau = vec![0.0; n];
    let mut lie_torsion = vec![0.0; n];
    let mut valid = vec![false; n];
    let zero = AlgebraVector::zeros();
    for i in 0..n {
        let t = tangent[i].unwrap_or(zero);
        let nn = normal[i].unwrap_or(zero);
        let b = t.cross(&nn);
        frames[i] = Frame::new(t, nn, b);
        let Some(dn) = n_prime[i] else { continue };
        let half_bracket = 0.5 * bracket(&t, &nn, spec);
        tau[i] = (dn + half_bracket).dot(&b);
        lie_torsion[i] = half_bracket.dot(&b);
        valid[i] = true;
    }
    Ok(EstimatedApparatus {
        start: curve.start,
        step: h,
        stride,
        tangent: tangent.into_iter().map(|t| t.unwrap_or(zero)).collect(),
        frames,
        kappa,
        tau,
        lie_torsion,
        valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::synthesize;
    use crate::lie_algebra::GroupElement;
    use nalgebra::Vector3;

    #[test]
    fn circle_of_radius_two() {
        let h = 1e-3;
        let points = (0..=6000)
            .map(|i| {
                let s = i as f64 * h;
                GroupElement::Vector(Vector3::new(2.0 * (s / 2.0).cos(), 2.0 * (s / 2.0).sin(), 0.0))
            })
            .collect();
        let curve = SampledCurve {
            start: 0.0,
            step: h,
            points,
        };
        let est = estimate_apparatus(&curve, GroupSpec::R3).unwrap();
        assert_eq!(est.valid_indices().count(), 6001 - 12 * DEFAULT_STRIDE);
        for i in est.valid_indices() {
            assert!((est.kappa[i] - 0.5).abs() <= 1e-6);
            assert!(est.tau[i].abs() <= 1e-6);
        }
    }

    #[test]
    fn lie_torsion_of_s3_trajectory() {
        let p = CurvatureProfile::parse("1", "1", (0.0, 4.0)).unwrap();
        let traj = synthesize(&p, GroupSpec::S3, 0.0, 4.0, 1e-3).unwrap();
        let est = estimate_apparatus(&traj.curve().unwrap(), GroupSpec::S3).unwrap();
        for i in est.valid_indices() {
            assert!((est.lie_torsion[i] - 1.0).abs() <= 1e-6);
            assert!((est.kappa[i] - 1.0).abs() <= 1e-6);
            assert!((est.tau[i] - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn straight_line_is_rejected() {
        let points = (0..200)
            .map(|i| GroupElement::Vector(Vector3::new(i as f64 * 0.01, 0.0, 0.0)))
            .collect();
        let curve = SampledCurve {
            start: 0.0,
            step: 0.01,
            points,
        };
        assert!(matches!(
            estimate_apparatus_with(&curve, GroupSpec::R3, 1),
            Err(Error::DegenerateCurvature { .. })
        ));
    }

    #[test]
    fn too_few_samples() {
        let points = vec![GroupElement::identity(GroupSpec::R3); 8];
        let curve = SampledCurve {
            start: 0.0,
            step: 0.1,
            points,
        };
        assert!(matches!(
            estimate_apparatus_with(&curve, GroupSpec::R3, 1),
            Err(Error::InsufficientSamples { .. })
        ));
    }
}

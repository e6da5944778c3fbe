//! Three-dimensional Lie algebra primitives and the concrete group models.
//!
//! Vectors are components with respect to a fixed orthonormal left-invariant
//! basis `{X1, X2, X3}`. For every supported group the bracket on that basis is
//! `[X1, X2] = λ X3` (and cyclic), so `[u, v] = λ (u × v)`:
//!
//! | family          | λ | τ_G |
//! |-----------------|---|-----|
//! | commutative ℝ³  | 0 | 0   |
//! | SO(3)           | 1 | 1/2 |
//! | S³ (unit quat.) | 2 | 1   |

use nalgebra::{Matrix3, Quaternion, Vector3};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type AlgebraVector = Vector3<f64>;

/// Tolerances enforced after every renormalization of a group element.
pub const ROTATION_DRIFT_TOL: f64 = 1e-9;
pub const QUATERNION_DRIFT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupFamily {
    #[serde(rename = "r3")]
    CommutativeR3,
    So3,
    S3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: GroupFamily,
}

impl GroupSpec {
    pub const R3: GroupSpec = GroupSpec {
        family: GroupFamily::CommutativeR3,
    };
    pub const SO3: GroupSpec = GroupSpec {
        family: GroupFamily::So3,
    };
    pub const S3: GroupSpec = GroupSpec {
        family: GroupFamily::S3,
    };

    pub fn new(family: GroupFamily) -> Self {
        GroupSpec { family }
    }

    /// Structure scalar λ of the bracket.
    pub fn lambda(&self) -> f64 {
        match self.family {
            GroupFamily::CommutativeR3 => 0.0,
            GroupFamily::So3 => 1.0,
            GroupFamily::S3 => 2.0,
        }
    }

    /// Lie group torsion τ_G = λ / 2.
    pub fn torsion(&self) -> f64 {
        0.5 * self.lambda()
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            GroupFamily::CommutativeR3 => "r3",
            GroupFamily::So3 => "so3",
            GroupFamily::S3 => "s3",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "r3" => Some(Self::R3),
            "so3" => Some(Self::SO3),
            "s3" => Some(Self::S3),
            _ => None,
        }
    }
}

pub fn bracket(u: &AlgebraVector, v: &AlgebraVector, spec: GroupSpec) -> AlgebraVector {
    spec.lambda() * u.cross(v)
}

/// `∇_T U = U′ + ½ [T, U]` for a field with components `u` and component
/// derivative `u_prime` along a curve with tangent components `t`.
pub fn covariant_derivative(
    u: &AlgebraVector,
    u_prime: &AlgebraVector,
    t: &AlgebraVector,
    spec: GroupSpec,
) -> AlgebraVector {
    u_prime + 0.5 * bracket(t, u, spec)
}

/// Left-invariant components of a Frenet frame (T, N, B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub t: AlgebraVector,
    pub n: AlgebraVector,
    pub b: AlgebraVector,
}

impl Frame {
    pub fn new(t: AlgebraVector, n: AlgebraVector, b: AlgebraVector) -> Self {
        Frame { t, n, b }
    }

    pub fn identity() -> Self {
        Frame {
            t: Vector3::x(),
            n: Vector3::y(),
            b: Vector3::z(),
        }
    }

    /// Frame whose T, N, B are the columns of `m`.
    pub fn from_columns(m: &Matrix3<f64>) -> Self {
        Frame {
            t: m.column(0).into_owned(),
            n: m.column(1).into_owned(),
            b: m.column(2).into_owned(),
        }
    }

    pub fn to_columns(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.t, self.n, self.b])
    }

    /// Max deviation of the Gram matrix from identity, and of `t × n` from `b`.
    pub fn orthonormality_defect(&self) -> f64 {
        let m = self.to_columns();
        let gram = m.transpose() * m - Matrix3::identity();
        let handed = (self.t.cross(&self.n) - self.b).amax();
        gram.amax().max(handed)
    }

    /// Modified Gram–Schmidt in the order T, N, B. T keeps its direction.
    pub fn reorthonormalize(&mut self) {
        self.t /= self.t.norm();
        self.n -= self.t.dot(&self.n) * self.t;
        self.n /= self.n.norm();
        self.b -= self.t.dot(&self.b) * self.t;
        self.b -= self.n.dot(&self.b) * self.n;
        self.b /= self.b.norm();
    }

    /// Components of `v` in this frame's basis.
    pub fn coordinates_of(&self, v: &AlgebraVector) -> AlgebraVector {
        Vector3::new(self.t.dot(v), self.n.dot(v), self.b.dot(v))
    }

    /// Algebra vector with frame coordinates `c`.
    pub fn vector_from(&self, c: &AlgebraVector) -> AlgebraVector {
        c[0] * self.t + c[1] * self.n + c[2] * self.b
    }
}

/// `½ ⟨[t, n], b⟩`.
pub fn lie_group_torsion(frame: &Frame, spec: GroupSpec) -> f64 {
    0.5 * bracket(&frame.t, &frame.n, spec).dot(&frame.b)
}

pub fn hat(v: &AlgebraVector) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`hat`] applied to the skew part of `m`.
pub fn vee(m: &Matrix3<f64>) -> AlgebraVector {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Pure quaternion `(0, v)`; X1, X2, X3 map to i, j, k.
pub fn pure_quaternion(v: &AlgebraVector) -> Quaternion<f64> {
    Quaternion::new(0.0, v.x, v.y, v.z)
}

/// A point of the group in its concrete model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupElement {
    Vector(Vector3<f64>),
    Rotation(Matrix3<f64>),
    Quaternion(Quaternion<f64>),
}

/// A tangent vector at a group element, in the ambient coordinates of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmbientTangent {
    Vector(Vector3<f64>),
    Matrix(Matrix3<f64>),
    Quaternion(Quaternion<f64>),
}

impl AmbientTangent {
    fn combine(self, other: AmbientTangent, w: f64) -> AmbientTangent {
        match (self, other) {
            (AmbientTangent::Vector(a), AmbientTangent::Vector(b)) => AmbientTangent::Vector(a + b * w),
            (AmbientTangent::Matrix(a), AmbientTangent::Matrix(b)) => AmbientTangent::Matrix(a + b * w),
            (AmbientTangent::Quaternion(a), AmbientTangent::Quaternion(b)) => {
                AmbientTangent::Quaternion(a + b * w)
            }
            _ => panic!("mixed tangent models"),
        }
    }

    /// Tangent with the same flat layout as [`GroupElement::components`].
    pub fn from_components(family: GroupFamily, c: &[f64]) -> AmbientTangent {
        match family {
            GroupFamily::CommutativeR3 => AmbientTangent::Vector(Vector3::new(c[0], c[1], c[2])),
            GroupFamily::So3 => AmbientTangent::Matrix(Matrix3::from_row_slice(&c[..9])),
            GroupFamily::S3 => AmbientTangent::Quaternion(Quaternion::new(c[0], c[1], c[2], c[3])),
        }
    }

    /// `self + w * other`.
    pub fn add_scaled(&self, w: f64, other: &AmbientTangent) -> AmbientTangent {
        self.combine(*other, w)
    }
}

impl GroupElement {
    pub fn identity(spec: GroupSpec) -> Self {
        match spec.family {
            GroupFamily::CommutativeR3 => GroupElement::Vector(Vector3::zeros()),
            GroupFamily::So3 => GroupElement::Rotation(Matrix3::identity()),
            GroupFamily::S3 => GroupElement::Quaternion(Quaternion::identity()),
        }
    }

    pub fn family(&self) -> GroupFamily {
        match self {
            GroupElement::Vector(_) => GroupFamily::CommutativeR3,
            GroupElement::Rotation(_) => GroupFamily::So3,
            GroupElement::Quaternion(_) => GroupFamily::S3,
        }
    }

    /// Build from flat ambient coordinates (3, 9 row-major, or 4 as w, x, y, z).
    pub fn from_components(spec: GroupSpec, c: &[f64]) -> Result<Self> {
        let expected = spec_component_count(spec);
        if c.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "{} group element needs {expected} components, got {}",
                spec.name(),
                c.len()
            )));
        }
        let mut g = match spec.family {
            GroupFamily::CommutativeR3 => GroupElement::Vector(Vector3::new(c[0], c[1], c[2])),
            GroupFamily::So3 => GroupElement::Rotation(Matrix3::from_row_slice(c)),
            GroupFamily::S3 => GroupElement::Quaternion(Quaternion::new(c[0], c[1], c[2], c[3])),
        };
        let defect = g.manifold_defect();
        if !(defect <= 1e-6) {
            return Err(Error::InvalidArgument(format!(
                "components do not describe a {} element (defect {defect})",
                spec.name()
            )));
        }
        g.renormalize();
        Ok(g)
    }

    /// Flat ambient coordinates, the inverse of [`GroupElement::from_components`].
    pub fn components(&self) -> Vec<f64> {
        match self {
            GroupElement::Vector(v) => vec![v.x, v.y, v.z],
            GroupElement::Rotation(m) => (0..3)
                .flat_map(|r| (0..3).map(move |c| (r, c)))
                .map(|(r, c)| m[(r, c)])
                .collect(),
            GroupElement::Quaternion(q) => vec![q.w, q.i, q.j, q.k],
        }
    }

    /// `g + w * v` in ambient coordinates (leaves the manifold; renormalize after).
    pub fn displaced(&self, w: f64, v: &AmbientTangent) -> GroupElement {
        match (self, v) {
            (GroupElement::Vector(g), AmbientTangent::Vector(d)) => GroupElement::Vector(g + d * w),
            (GroupElement::Rotation(g), AmbientTangent::Matrix(d)) => GroupElement::Rotation(g + d * w),
            (GroupElement::Quaternion(g), AmbientTangent::Quaternion(d)) => {
                GroupElement::Quaternion(g + d * w)
            }
            _ => panic!("tangent does not match group element model"),
        }
    }

    /// Project back onto the group: unit quaternion, or Gram–Schmidt on columns.
    pub fn renormalize(&mut self) {
        match self {
            GroupElement::Vector(_) => {}
            GroupElement::Quaternion(q) => {
                let n = q.norm();
                *q /= n;
            }
            GroupElement::Rotation(m) => {
                let mut f = Frame::from_columns(m);
                f.reorthonormalize();
                *m = f.to_columns();
            }
        }
    }

    /// Distance from the manifold: `|‖q‖ − 1|` or `max|RᵀR − I|` (0 for ℝ³).
    pub fn manifold_defect(&self) -> f64 {
        match self {
            GroupElement::Vector(_) => 0.0,
            GroupElement::Quaternion(q) => (q.norm() - 1.0).abs(),
            GroupElement::Rotation(m) => {
                let d = (m.transpose() * m - Matrix3::identity()).amax();
                if m.determinant() > 0.0 {
                    d
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Left-invariant components of an ambient tangent at this element,
    /// i.e. `dL_{g⁻¹} ġ`.
    pub fn pull_back(&self, tangent: &AmbientTangent) -> Result<AlgebraVector> {
        match (self, tangent) {
            (GroupElement::Vector(_), AmbientTangent::Vector(v)) => Ok(*v),
            (GroupElement::Quaternion(q), AmbientTangent::Quaternion(dq)) => {
                let t = q.conjugate() * dq / q.norm_squared();
                Ok(t.imag())
            }
            (GroupElement::Rotation(r), AmbientTangent::Matrix(dr)) => {
                Ok(vee(&(r.transpose() * dr)))
            }
            _ => Err(Error::InvalidArgument(
                "tangent does not match group element model".into(),
            )),
        }
    }
}

pub(crate) fn spec_component_count(spec: GroupSpec) -> usize {
    match spec.family {
        GroupFamily::CommutativeR3 => 3,
        GroupFamily::So3 => 9,
        GroupFamily::S3 => 4,
    }
}

/// `dL_g v`: the ambient tangent at `g` of the left-invariant field with
/// components `v`.
pub fn left_translate_tangent(g: &GroupElement, v: &AlgebraVector) -> AmbientTangent {
    match g {
        GroupElement::Vector(_) => AmbientTangent::Vector(*v),
        GroupElement::Quaternion(q) => AmbientTangent::Quaternion(q * pure_quaternion(v)),
        GroupElement::Rotation(r) => AmbientTangent::Matrix(r * hat(v)),
    }
}

/// Left shift `α(s) = α0 + ∫ t` of a curve with tangent components `tangents`
/// sampled on a uniform grid of spacing `step`.
///
/// Even-index samples use composite Simpson from the first sample; odd-index
/// samples finish with a three-eighths panel (or, for index 1, the
/// three-point end formula) so that every sample keeps fourth-order accuracy.
pub fn left_shift(
    step: f64,
    tangents: &[AlgebraVector],
    alpha0: AlgebraVector,
) -> Result<Vec<AlgebraVector>> {
    let integral = cumulative_integral(step, tangents)?;
    Ok(integral.into_iter().map(|v| alpha0 + v).collect())
}

/// Cumulative integral of uniformly sampled values, `out[i] = ∫_{x0}^{x_i}`.
pub fn cumulative_integral<T>(step: f64, values: &[T]) -> Result<Vec<T>>
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Zero,
{
    let n = values.len();
    if n < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: n });
    }
    let f = values;
    let mut out = vec![T::zero(); n];
    // even prefix sums by Simpson
    let mut even = T::zero();
    let mut i = 2;
    while i < n {
        even = even + (f[i - 2] + f[i - 1] * 4.0 + f[i]) * (step / 3.0);
        out[i] = even;
        i += 2;
    }
    out[1] = (f[0] * 5.0 + f[1] * 8.0 + f[2] * -1.0) * (step / 12.0);
    let mut i = 3;
    while i < n {
        let three_eighths = (f[i - 3] + f[i - 2] * 3.0 + f[i - 1] * 3.0 + f[i]) * (3.0 * step / 8.0);
        out[i] = out[i - 3] + three_eighths;
        i += 2;
    }
    Ok(out)
}

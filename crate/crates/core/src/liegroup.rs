//! Numeric carriers for G, its Lie algebra, Aut(G) and the derivations of the
//! algebra, for the built-in groups SU(2) and SO(3).
//!
//! Both algebras are three-dimensional with [e_i, e_j] = ε_ijk e_k, so algebra
//! elements are stored as coordinates in that basis (su(2): e_k = -iσ_k/2,
//! so(3): cross-product generators). In these coordinates ad X is the
//! cross-product matrix and Ad g is a rotation matrix.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, Matrix2, Matrix3, Rotation3, UnitQuaternion, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rng64 = ChaCha8Rng;

/// Deterministic generator for a seed.
pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Su2,
    So3,
}

impl Group {
    pub const ALL: [Group; 2] = [Group::Su2, Group::So3];

    pub fn name(self) -> &'static str {
        match self {
            Group::Su2 => "su2",
            Group::So3 => "so3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "su2" => Ok(Group::Su2),
            "so3" => Ok(Group::So3),
            _ => Err(Error::Unknown { kind: "group", name: s.to_string() }),
        }
    }

    /// Size of the defining matrices.
    pub fn matrix_dim(self) -> usize {
        match self {
            Group::Su2 => 2,
            Group::So3 => 3,
        }
    }

    /// Group inferred from a defining-matrix size.
    pub fn from_matrix_dim(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Group::Su2),
            3 => Ok(Group::So3),
            _ => Err(Error::Invalid(format!("no built-in group with {d}x{d} matrices"))),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn cross_matrix(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Axial vector of the antisymmetric part.
fn axial(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]) * 0.5
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Element of the Lie algebra in the bracket-normalized basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraElement(pub Vector3<f64>);

impl AlgebraElement {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self(Vector3::new(x, y, z))
    }

    pub fn zero() -> Self {
        Self(Vector3::zeros())
    }

    pub fn basis(k: usize) -> Self {
        let mut v = Vector3::zeros();
        v[k] = 1.0;
        Self(v)
    }

    pub fn coords(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * s)
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Self(self.0.cross(&other.0))
    }

    /// Matrix in the defining representation of `group`.
    pub fn matrix(&self, group: Group) -> DMatrix<Complex64> {
        let v = &self.0;
        match group {
            Group::Su2 => DMatrix::from_row_slice(
                2,
                2,
                &[
                    c(0.0, -v.z / 2.0),
                    c(-v.y / 2.0, -v.x / 2.0),
                    c(v.y / 2.0, -v.x / 2.0),
                    c(0.0, v.z / 2.0),
                ],
            ),
            Group::So3 => DMatrix::from_fn(3, 3, |i, j| c(cross_matrix(v)[(i, j)], 0.0)),
        }
    }

    /// Orthogonal projection of a defining-representation matrix onto the algebra.
    pub fn from_matrix(group: Group, m: &DMatrix<Complex64>) -> Result<Self> {
        let d = group.matrix_dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Invalid(format!("expected {d}x{d} matrix for {group}")));
        }
        Ok(match group {
            Group::Su2 => {
                // coordinate k is -2 Re tr(e_k M)
                let coord = |k: usize| {
                    let e = AlgebraElement::basis(k).matrix(Group::Su2);
                    -2.0 * (e * m).trace().re
                };
                Self::new(coord(0), coord(1), coord(2))
            }
            Group::So3 => {
                let r = Matrix3::from_fn(|i, j| m[(i, j)].re);
                Self(axial(&r))
            }
        })
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(self.0 + o.0)
    }
}

impl AddAssign for AlgebraElement {
    fn add_assign(&mut self, o: Self) {
        self.0 += o.0;
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(self.0 - o.0)
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Linear map on the algebra; valid when it satisfies the Leibniz rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivation(pub Matrix3<f64>);

impl Derivation {
    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    /// ad X = [X, ·].
    pub fn ad(x: &AlgebraElement) -> Self {
        Self(cross_matrix(&x.0))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(self.0 * x.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * s)
    }

    /// Composition as linear maps (self after other).
    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    /// Antisymmetric part: the projection onto derivations of a 3-dim simple algebra.
    pub fn project(m: &Matrix3<f64>) -> Self {
        Self((m - m.transpose()) * 0.5)
    }

    /// The X with ad X equal to the antisymmetric part.
    pub fn inner_part(&self) -> AlgebraElement {
        AlgebraElement(axial(&self.0))
    }

    pub fn leibniz_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (AlgebraElement::basis(i), AlgebraElement::basis(j));
                let lhs = self.apply(&x.bracket(&y));
                let rhs = self.apply(&x).bracket(&y) + x.bracket(&self.apply(&y));
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.leibniz_defect() <= tol
    }

    pub fn exp(&self) -> Automorphism {
        Automorphism::from_matrix(self.0.exp())
    }
}

impl Add for Derivation {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(self.0 + o.0)
    }
}

impl AddAssign for Derivation {
    fn add_assign(&mut self, o: Self) {
        self.0 += o.0;
    }
}

impl Sub for Derivation {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(self.0 - o.0)
    }
}

impl Neg for Derivation {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Mul for Derivation {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.compose(&o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupElement {
    Su2(Matrix2<Complex64>),
    So3(Matrix3<f64>),
}

impl GroupElement {
    pub fn identity(group: Group) -> Self {
        match group {
            Group::Su2 => GroupElement::Su2(Matrix2::identity()),
            Group::So3 => GroupElement::So3(Matrix3::identity()),
        }
    }

    pub fn group(&self) -> Group {
        match self {
            GroupElement::Su2(_) => Group::Su2,
            GroupElement::So3(_) => Group::So3,
        }
    }

    /// SU(2) element w·1 - i(xσ₁ + yσ₂ + zσ₃) from a unit quaternion.
    pub fn su2_from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        GroupElement::Su2(Matrix2::new(c(w, -z), c(-y, -x), c(y, -x), c(w, z)))
    }

    /// Quaternion (w, x, y, z) of an SU(2) element.
    fn su2_quaternion(m: &Matrix2<Complex64>) -> (f64, Vector3<f64>) {
        let w = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
        let z = 0.5 * (m[(1, 1)].im - m[(0, 0)].im);
        let x = -0.5 * (m[(1, 0)].im + m[(0, 1)].im);
        let y = 0.5 * (m[(1, 0)].re - m[(0, 1)].re);
        (w, Vector3::new(x, y, z))
    }

    pub fn exp(group: Group, x: &AlgebraElement) -> Self {
        let v = x.0;
        let theta = v.norm();
        match group {
            Group::Su2 => {
                let half = 0.5 * theta;
                // sin(θ/2)/θ
                let k = if theta < 1e-6 { 0.5 - theta * theta / 48.0 } else { half.sin() / theta };
                Self::su2_from_quaternion(half.cos(), k * v.x, k * v.y, k * v.z)
            }
            Group::So3 => {
                let k = cross_matrix(&v);
                let (a, b) = if theta < 1e-6 {
                    let t2 = theta * theta;
                    (1.0 - t2 / 6.0, 0.5 - t2 / 24.0)
                } else {
                    (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
                };
                GroupElement::So3(Matrix3::identity() + k * a + k * k * b)
            }
        }
    }

    /// Rotation angle in [0, 2π) for SU(2), [0, π] for SO(3).
    pub fn angle(&self) -> f64 {
        match self {
            GroupElement::Su2(m) => {
                let (w, q) = Self::su2_quaternion(m);
                2.0 * q.norm().atan2(w)
            }
            GroupElement::So3(r) => axial(r).norm().atan2(0.5 * (r.trace() - 1.0)),
        }
    }

    /// Operator-norm distance ‖g − I‖ for unitary g, read off the rotation angle.
    pub fn operator_distance(&self) -> f64 {
        let t = self.angle();
        match self {
            GroupElement::Su2(_) => 2.0 * (0.25 * t).sin(),
            GroupElement::So3(_) => 2.0 * (0.5 * t).sin(),
        }
    }

    /// Principal logarithm; defined for ‖g − I‖ < 1.
    pub fn log(&self) -> Result<AlgebraElement> {
        let dist = self.operator_distance();
        if dist >= 1.0 {
            return Err(Error::OutOfDomain(dist));
        }
        Ok(self.log_unchecked())
    }

    /// Principal logarithm without the domain check (angle below π).
    pub fn log_unchecked(&self) -> AlgebraElement {
        match self {
            GroupElement::Su2(m) => {
                let (w, q) = Self::su2_quaternion(m);
                let s = q.norm();
                if s == 0.0 {
                    return AlgebraElement::zero();
                }
                AlgebraElement(q * (2.0 * s.atan2(w) / s))
            }
            GroupElement::So3(r) => {
                let a = axial(r);
                let s = a.norm();
                if s == 0.0 {
                    return AlgebraElement::zero();
                }
                let theta = s.atan2(0.5 * (r.trace() - 1.0));
                AlgebraElement(a * (theta / s))
            }
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::Su2(m) => GroupElement::Su2(m.adjoint()),
            GroupElement::So3(r) => GroupElement::So3(r.transpose()),
        }
    }

    /// Adjoint action as a rotation of the algebra coordinates.
    pub fn adjoint_matrix(&self) -> Matrix3<f64> {
        match self {
            GroupElement::Su2(m) => {
                let (w, q) = Self::su2_quaternion(m);
                let (x, y, z) = (q.x, q.y, q.z);
                Matrix3::new(
                    w * w + x * x - y * y - z * z,
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                    2.0 * (x * y + w * z),
                    w * w - x * x + y * y - z * z,
                    2.0 * (y * z - w * x),
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    w * w - x * x - y * y + z * z,
                )
            }
            GroupElement::So3(r) => *r,
        }
    }

    pub fn adjoint(&self) -> Automorphism {
        Automorphism { mat: self.adjoint_matrix(), rep: Some(*self) }
    }

    /// Conjugation g·h·g⁻¹.
    pub fn conjugate(&self, h: &Self) -> Self {
        *self * *h * self.inverse()
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        match self {
            GroupElement::Su2(m) => DMatrix::from_fn(2, 2, |i, j| m[(i, j)]),
            GroupElement::So3(r) => DMatrix::from_fn(3, 3, |i, j| c(r[(i, j)], 0.0)),
        }
    }

    /// Builds an element from a defining-representation matrix, checking validity.
    pub fn from_matrix(group: Group, m: &DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let d = group.matrix_dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Invalid(format!("expected {d}x{d} matrix for {group}")));
        }
        let g = match group {
            Group::Su2 => GroupElement::Su2(Matrix2::from_fn(|i, j| m[(i, j)])),
            Group::So3 => {
                if m.iter().any(|z| z.im != 0.0) {
                    return Err(Error::Invalid("so3 matrices are real".into()));
                }
                GroupElement::So3(Matrix3::from_fn(|i, j| m[(i, j)].re))
            }
        };
        if !g.is_valid(tol) {
            return Err(Error::Invalid(format!("matrix is not in {group}")));
        }
        Ok(g)
    }

    /// Unitarity/orthogonality and unit determinant within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        match self {
            GroupElement::Su2(m) => {
                (m * m.adjoint() - Matrix2::identity()).norm() <= tol
                    && (m.determinant() - c(1.0, 0.0)).norm() <= tol
            }
            GroupElement::So3(r) => {
                (r * r.transpose() - Matrix3::identity()).norm() <= tol
                    && (r.determinant() - 1.0).abs() <= tol
            }
        }
    }

    /// Frobenius distance to the identity.
    pub fn distance_to_identity(&self) -> f64 {
        match self {
            GroupElement::Su2(m) => (m - Matrix2::identity()).norm(),
            GroupElement::So3(r) => (r - Matrix3::identity()).norm(),
        }
    }

    /// Frobenius distance between two elements.
    pub fn distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (GroupElement::Su2(a), GroupElement::Su2(b)) => (a - b).norm(),
            (GroupElement::So3(a), GroupElement::So3(b)) => (a - b).norm(),
            _ => f64::INFINITY,
        }
    }
}

impl Mul for GroupElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        match (self, o) {
            (GroupElement::Su2(a), GroupElement::Su2(b)) => GroupElement::Su2(a * b),
            (GroupElement::So3(a), GroupElement::So3(b)) => GroupElement::So3(a * b),
            _ => panic!("product of elements from different groups"),
        }
    }
}

/// Automorphism of G, stored through its action on the algebra. Inner
/// automorphisms remember a group representative when one is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Automorphism {
    mat: Matrix3<f64>,
    rep: Option<GroupElement>,
}

impl Automorphism {
    pub fn identity() -> Self {
        Self { mat: Matrix3::identity(), rep: None }
    }

    pub fn from_matrix(mat: Matrix3<f64>) -> Self {
        Self { mat, rep: None }
    }

    /// Ad(exp X).
    pub fn from_algebra(group: Group, x: &AlgebraElement) -> Self {
        GroupElement::exp(group, x).adjoint()
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.mat
    }

    pub fn representative(&self) -> Option<&GroupElement> {
        self.rep.as_ref()
    }

    pub fn forget_representative(&self) -> Self {
        Self { mat: self.mat, rep: None }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Self {
        let rep = match (self.rep, other.rep) {
            (Some(a), Some(b)) if a.group() == b.group() => Some(a * b),
            _ => None,
        };
        Self { mat: self.mat * other.mat, rep }
    }

    pub fn inverse(&self) -> Self {
        let mat = self.mat.try_inverse().unwrap_or_else(|| self.mat.transpose());
        Self { mat, rep: self.rep.map(|g| g.inverse()) }
    }

    pub fn apply_algebra(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(self.mat * x.0)
    }

    /// Conjugation Φ ∘ D ∘ Φ⁻¹ of a derivation.
    pub fn conjugate_derivation(&self, d: &Derivation) -> Derivation {
        Derivation(self.mat * d.0 * self.inverse().mat)
    }

    /// A group element g with Ad g equal to this automorphism.
    pub fn lift(&self, group: Group) -> GroupElement {
        if let Some(r) = self.rep {
            if r.group() == group {
                return r;
            }
        }
        match group {
            Group::So3 => GroupElement::So3(self.mat),
            Group::Su2 => {
                let rot = Rotation3::from_matrix(&self.mat);
                let q = UnitQuaternion::from_rotation_matrix(&rot);
                GroupElement::su2_from_quaternion(q.w, q.i, q.j, q.k)
            }
        }
    }

    /// Action on G through the lift.
    pub fn apply_group(&self, g: &GroupElement) -> GroupElement {
        self.lift(g.group()).conjugate(g)
    }

    pub fn distance_to_identity(&self) -> f64 {
        (self.mat - Matrix3::identity()).norm()
    }

    pub fn bracket_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (AlgebraElement::basis(i), AlgebraElement::basis(j));
                let lhs = self.apply_algebra(&x.bracket(&y));
                let rhs = self.apply_algebra(&x).bracket(&self.apply_algebra(&y));
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.mat.determinant().abs() > tol && self.bracket_defect() <= tol
    }

    /// Logarithm as a derivation; defined for ‖Φ − 1‖ < 1.
    pub fn log(&self) -> Result<Derivation> {
        let x = self.mat - Matrix3::identity();
        let orthogonal = (self.mat * self.mat.transpose() - Matrix3::identity()).norm() < 1e-9;
        if orthogonal {
            let g = GroupElement::So3(self.mat);
            let dist = g.operator_distance();
            if dist >= 1.0 {
                return Err(Error::OutOfDomain(dist));
            }
            return Ok(Derivation::ad(&g.log_unchecked()));
        }
        let dist = x.norm();
        if dist >= 0.5 {
            return Err(Error::OutOfDomain(dist));
        }
        // Mercator series
        let mut term = x;
        let mut sum = Matrix3::zeros();
        for k in 1..200 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum += term * (sign / k as f64);
            term *= x;
            if term.norm() < 1e-18 {
                break;
            }
        }
        Ok(Derivation(sum))
    }
}

/// tr(D1·D2), the trace form in the adjoint representation.
pub fn trace_ad_pairing(d1: &Derivation, d2: &Derivation) -> f64 {
    (d1.0 * d2.0).trace()
}

fn normal3<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    Vector3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Gaussian algebra element with expected norm close to `scale`.
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> AlgebraElement {
    AlgebraElement(normal3(rng) * (scale / 3f64.sqrt()))
}

/// ad of a random algebra element; inner derivations exhaust the derivations here.
pub fn random_derivation<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Derivation {
    let x = random_algebra(rng, scale / 2f64.sqrt());
    Derivation::ad(&x)
}

/// Haar-random group element.
pub fn random_group<R: Rng + ?Sized>(rng: &mut R, group: Group) -> GroupElement {
    let mut q = [0.0f64; 4];
    let mut n = 0.0;
    while n < 1e-12 {
        for v in q.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    let g = GroupElement::su2_from_quaternion(q[0] / n, q[1] / n, q[2] / n, q[3] / n);
    match group {
        Group::Su2 => g,
        Group::So3 => GroupElement::So3(g.adjoint_matrix()),
    }
}

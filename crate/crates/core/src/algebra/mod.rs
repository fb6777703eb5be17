//! Two-qubit operator algebra in the spin-operator basis.
//!
//! Every Hermitian operator on two spin-1/2 particles is written as
//!
//! ```text
//! w I + Σᵢ xᵢ Sᵢ⊗I + Σᵢ yᵢ I⊗Sᵢ + Σᵢⱼ zᵢⱼ Sᵢ⊗Sⱼ
//! ```
//!
//! with real coefficients, where `Sᵢ = σᵢ/2` are the spin-1/2 operators with
//! eigenvalues ±1/2. With this normalization the single-spin state
//! `(I + m·σ)/2` reads `I/2 + m·S`, and the covariant measurement formulas in
//! [`crate::measurement`] hold without extra factors of two.

pub mod dense;
pub mod eigen;
mod rotation;
pub mod vec3;

use std::ops::{Add, Mul, Neg, Sub};

pub use dense::Matrix4;
pub use rotation::Rotation;
use vec3::{Mat3, Vec3};

use crate::{Error, Real, Result};

/// Relative tolerance within which a direction is accepted as a unit vector
/// (and silently renormalized).
pub fn unit_tolerance<T: Real>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(64.0))
}

/// A unit 3-vector: a spin direction or a guessed direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector<T>([T; 3]);

impl<T: Real> BlochVector<T> {
    /// Accepts `v` if `| |v| − 1 | ≤ unit_tolerance()`, renormalizing it.
    pub fn new(v: [T; 3]) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("direction"));
        }
        let n = vec3::norm(&v);
        if (n - T::one()).abs() > unit_tolerance() {
            return Err(Error::NotUnit {
                norm: n.to_f64_lossy(),
            });
        }
        Ok(Self(vec3::scale(&v, n.recip())))
    }

    /// Normalizes any finite nonzero vector.
    pub fn normalized(v: [T; 3]) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("direction"));
        }
        let n = vec3::norm(&v);
        if n <= T::min_positive_value() {
            return Err(Error::NotUnit { norm: 0.0 });
        }
        Ok(Self(vec3::scale(&v, n.recip())))
    }

    /// Spherical coordinates: polar cosine `cos θ` and azimuth `φ`.
    pub fn from_polar(cos_theta: T, phi: T) -> Self {
        let sin_theta = (T::one() - cos_theta * cos_theta).max(T::zero()).sqrt();
        let (s, c) = phi.sin_cos();
        Self([sin_theta * c, sin_theta * s, cos_theta])
    }

    pub(crate) fn from_normalized(v: [T; 3]) -> Self {
        Self(v)
    }

    pub fn unit_x() -> Self {
        Self([T::one(), T::zero(), T::zero()])
    }

    pub fn unit_y() -> Self {
        Self([T::zero(), T::one(), T::zero()])
    }

    pub fn unit_z() -> Self {
        Self([T::zero(), T::zero(), T::one()])
    }

    pub fn components(&self) -> [T; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        vec3::dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> T {
        vec3::norm(&self.0)
    }
}

impl<T: Real> Neg for BlochVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

/// Hermitian operator on the two-spin space, stored by its real
/// coefficients in the product spin basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinOperator<T> {
    scalar: T,
    first_local: Vec3<T>,
    second_local: Vec3<T>,
    correlation: Mat3<T>,
}

impl<T: Real> TwoSpinOperator<T> {
    pub fn new(
        scalar: T,
        first_local: Vec3<T>,
        second_local: Vec3<T>,
        correlation: Mat3<T>,
    ) -> Result<Self> {
        if !scalar.is_finite() {
            return Err(Error::NonFinite("scalar coefficient"));
        }
        if first_local.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("first-spin coefficients"));
        }
        if second_local.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("second-spin coefficients"));
        }
        if correlation.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("correlation coefficients"));
        }
        Ok(Self::from_parts(scalar, first_local, second_local, correlation))
    }

    pub(crate) fn from_parts(
        scalar: T,
        first_local: Vec3<T>,
        second_local: Vec3<T>,
        correlation: Mat3<T>,
    ) -> Self {
        Self {
            scalar,
            first_local,
            second_local,
            correlation,
        }
    }

    pub fn zero() -> Self {
        Self::from_parts(T::zero(), vec3::zero(), vec3::zero(), vec3::zero_mat())
    }

    pub fn identity() -> Self {
        Self::from_parts(T::one(), vec3::zero(), vec3::zero(), vec3::zero_mat())
    }

    /// `Sᵢ ⊗ I`.
    pub fn first_spin(axis: usize) -> Self {
        let mut op = Self::zero();
        op.first_local[axis] = T::one();
        op
    }

    /// `I ⊗ Sᵢ`.
    pub fn second_spin(axis: usize) -> Self {
        let mut op = Self::zero();
        op.second_local[axis] = T::one();
        op
    }

    /// `Sᵢ ⊗ Sⱼ`.
    pub fn spin_product(i: usize, j: usize) -> Self {
        let mut op = Self::zero();
        op.correlation[i][j] = T::one();
        op
    }

    pub fn scalar(&self) -> T {
        self.scalar
    }

    pub fn first_local(&self) -> Vec3<T> {
        self.first_local
    }

    pub fn second_local(&self) -> Vec3<T> {
        self.second_local
    }

    pub fn correlation(&self) -> Mat3<T> {
        self.correlation
    }

    /// All sixteen coefficients in the order `w, x, y, z (row-major)`.
    pub fn coefficients(&self) -> [T; 16] {
        let mut out = [T::zero(); 16];
        out[0] = self.scalar;
        out[1..4].copy_from_slice(&self.first_local);
        out[4..7].copy_from_slice(&self.second_local);
        for (i, row) in self.correlation.iter().enumerate() {
            out[7 + 3 * i..10 + 3 * i].copy_from_slice(row);
        }
        out
    }

    /// Largest coefficient-wise difference.
    pub fn max_coeff_diff(&self, other: &Self) -> T {
        self.coefficients()
            .iter()
            .zip(other.coefficients().iter())
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    /// The operator as a dense matrix in the basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.
    pub fn to_dense(&self) -> Matrix4<T> {
        let id = dense::identity2();
        let mut m = Matrix4::identity().scale(self.scalar);
        for i in 0..3 {
            let s = dense::spin_matrix(i);
            m = m + Matrix4::kron(&s, &id).scale(self.first_local[i]);
            m = m + Matrix4::kron(&id, &s).scale(self.second_local[i]);
            for j in 0..3 {
                let sj = dense::spin_matrix(j);
                m = m + Matrix4::kron(&s, &sj).scale(self.correlation[i][j]);
            }
        }
        m
    }

    /// Inverse of [`to_dense`](Self::to_dense). Rejects matrices whose
    /// anti-Hermitian part exceeds `tol` in any entry.
    pub fn from_dense(m: &Matrix4<T>, tol: T) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect.to_f64_lossy()));
        }
        let id = dense::identity2();
        let tr = |b: Matrix4<T>| (*m * b).trace().re;
        let mut op = Self::zero();
        op.scalar = m.trace().re / T::lit(4.0);
        for i in 0..3 {
            let s = dense::spin_matrix(i);
            op.first_local[i] = tr(Matrix4::kron(&s, &id));
            op.second_local[i] = tr(Matrix4::kron(&id, &s));
            for j in 0..3 {
                let sj = dense::spin_matrix(j);
                op.correlation[i][j] = T::lit(4.0) * tr(Matrix4::kron(&s, &sj));
            }
        }
        Ok(op)
    }

    /// Flips the second spin: the second-spin and correlation coefficients
    /// change sign, the rest is untouched.
    pub fn partial_spin_flip(&self) -> Self {
        Self::from_parts(
            self.scalar,
            self.first_local,
            self.second_local.map(|x| -x),
            vec3::mat_map(&self.correlation, |x| -x),
        )
    }

    /// Conjugation by `U ⊗ U` with `U` the SU(2) matrix of `r`.
    pub fn rotate(&self, r: &Rotation<T>) -> Self {
        let m = r.so3();
        let mt = vec3::transpose(&m);
        Self::from_parts(
            self.scalar,
            vec3::mat_vec(&m, &self.first_local),
            vec3::mat_vec(&m, &self.second_local),
            vec3::mat_mul(&vec3::mat_mul(&m, &self.correlation), &mt),
        )
    }

    /// Eigenvalues of the dense form, ascending, from a general Hermitian
    /// eigensolver.
    pub fn eigenvalues(&self) -> [T; 4] {
        self.to_dense().hermitian_eigenvalues()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()[0]
    }

    pub fn trace(&self) -> T {
        T::lit(4.0) * self.scalar
    }
}

/// `Tr(a·b)`, evaluated from the coefficients. The product basis is
/// trace-orthogonal with norms `Tr I = 4`, `Tr (Sᵢ⊗I)² = 1`,
/// `Tr (Sᵢ⊗Sⱼ)² = 1/4`.
pub fn trace_pair<T: Real>(a: &TwoSpinOperator<T>, b: &TwoSpinOperator<T>) -> T {
    let corr: T = a
        .correlation
        .iter()
        .flatten()
        .zip(b.correlation.iter().flatten())
        .map(|(x, y)| *x * *y)
        .sum();
    T::lit(4.0) * a.scalar * b.scalar
        + vec3::dot(&a.first_local, &b.first_local)
        + vec3::dot(&a.second_local, &b.second_local)
        + corr * T::lit(0.25)
}

/// `|↑m⟩⟨↑m| ⊗ |↑m⟩⟨↑m|`.
pub fn parallel_state<T: Real>(m: &BlochVector<T>) -> TwoSpinOperator<T> {
    let v = m.components();
    let half = T::lit(0.5);
    TwoSpinOperator::from_parts(
        T::lit(0.25),
        vec3::scale(&v, half),
        vec3::scale(&v, half),
        vec3::outer(&v, &v),
    )
}

/// `|↑m⟩⟨↑m| ⊗ |↑₋m⟩⟨↑₋m|`.
pub fn antiparallel_state<T: Real>(m: &BlochVector<T>) -> TwoSpinOperator<T> {
    let v = m.components();
    let half = T::lit(0.5);
    TwoSpinOperator::from_parts(
        T::lit(0.25),
        vec3::scale(&v, half),
        vec3::scale(&v, -half),
        vec3::mat_map(&vec3::outer(&v, &v), |x| -x),
    )
}

impl<T: Real> Add for TwoSpinOperator<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_parts(
            self.scalar + rhs.scalar,
            vec3::add(&self.first_local, &rhs.first_local),
            vec3::add(&self.second_local, &rhs.second_local),
            vec3::mat_zip(&self.correlation, &rhs.correlation, |a, b| a + b),
        )
    }
}

impl<T: Real> Sub for TwoSpinOperator<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for TwoSpinOperator<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self * -T::one()
    }
}

impl<T: Real> Mul<T> for TwoSpinOperator<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::from_parts(
            self.scalar * s,
            vec3::scale(&self.first_local, s),
            vec3::scale(&self.second_local, s),
            vec3::mat_map(&self.correlation, |x| x * s),
        )
    }
}

impl<T: Real> std::iter::Sum for TwoSpinOperator<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

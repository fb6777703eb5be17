use num_complex::Complex;

use super::dense::Matrix2;
use super::vec3::{self, Mat3, Vec3};
use super::BlochVector;
use crate::Real;

/// A rotation by `angle` radians about `axis` (right-hand rule).
///
/// Carries both representations used by the crate: the 2×2 special-unitary
/// matrix acting on one spin and the induced 3×3 orthogonal matrix acting on
/// coefficient vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation<T> {
    axis: BlochVector<T>,
    angle: T,
}

impl<T: Real> Rotation<T> {
    pub fn new(axis: BlochVector<T>, angle: T) -> Self {
        Self { axis, angle }
    }

    pub fn identity() -> Self {
        Self::new(BlochVector::unit_z(), T::zero())
    }

    /// A rotation carrying `from` onto `to`, about the axis `from × to`.
    /// Antipodal inputs rotate by π about a fixed axis orthogonal to `from`.
    pub fn between(from: &BlochVector<T>, to: &BlochVector<T>) -> Self {
        let (a, b) = (from.components(), to.components());
        let cos = vec3::dot(&a, &b).max(-T::one()).min(T::one());
        let axis = vec3::cross(&a, &b);
        let sin = vec3::norm(&axis);
        let tiny = T::epsilon().sqrt();
        if sin > tiny {
            let axis = BlochVector::from_normalized(vec3::scale(&axis, sin.recip()));
            return Self::new(axis, sin.atan2(cos));
        }
        if cos > T::zero() {
            return Self::identity();
        }
        // Antipodal: any axis orthogonal to `from` works.
        let trial = if a[0].abs() < T::lit(0.9) {
            [T::one(), T::zero(), T::zero()]
        } else {
            [T::zero(), T::one(), T::zero()]
        };
        let perp = vec3::cross(&a, &trial);
        let axis = BlochVector::from_normalized(vec3::scale(&perp, vec3::norm(&perp).recip()));
        Self::new(axis, T::PI())
    }

    pub fn axis(&self) -> &BlochVector<T> {
        &self.axis
    }

    pub fn angle(&self) -> T {
        self.angle
    }

    /// `cos(θ/2) I − i sin(θ/2) (k·σ)`.
    pub fn su2(&self) -> Matrix2<T> {
        let half = self.angle * T::lit(0.5);
        let (s, c) = half.sin_cos();
        let [kx, ky, kz] = self.axis.components();
        [
            [Complex::new(c, -s * kz), Complex::new(-s * ky, -s * kx)],
            [Complex::new(s * ky, -s * kx), Complex::new(c, s * kz)],
        ]
    }

    /// Rodrigues form `cos θ I + sin θ [k]ₓ + (1 − cos θ) k kᵀ`.
    pub fn so3(&self) -> Mat3<T> {
        let (s, c) = self.angle.sin_cos();
        let k = self.axis.components();
        let kk = vec3::outer(&k, &k);
        let cross = [
            [T::zero(), -k[2], k[1]],
            [k[2], T::zero(), -k[0]],
            [-k[1], k[0], T::zero()],
        ];
        let mut r = vec3::zero_mat();
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { T::one() } else { T::zero() };
                r[i][j] = c * id + s * cross[i][j] + (T::one() - c) * kk[i][j];
            }
        }
        r
    }

    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        vec3::mat_vec(&self.so3(), v)
    }

    pub fn apply_direction(&self, v: &BlochVector<T>) -> BlochVector<T> {
        BlochVector::from_normalized(self.apply(&v.components()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::dense::{adjoint2, mul2, spin_matrix};
    use super::*;

    fn rot(axis: [f64; 3], angle: f64) -> Rotation<f64> {
        Rotation::new(BlochVector::normalized(axis).unwrap(), angle)
    }

    #[test]
    fn so3_is_proper_orthogonal() {
        let r = rot([0.3, -1.2, 0.4], 2.1).so3();
        let rrt = vec3::mat_mul(&r, &vec3::transpose(&r));
        let id = vec3::identity_mat::<f64>();
        for i in 0..3 {
            for j in 0..3 {
                assert!((rrt[i][j] - id[i][j]).abs() < 1e-12);
            }
        }
        assert!((vec3::determinant(&r) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn su2_conjugation_matches_so3() {
        let r = rot([1.0, 2.0, -0.5], 0.77);
        let u = r.su2();
        let ud = adjoint2(&u);
        let v = [0.2, -0.9, 0.4];
        let rv = r.apply(&v);
        // U (v·S) U† = (Rv)·S
        let mut lhs = [[Complex::new(0.0, 0.0); 2]; 2];
        let mut rhs = lhs;
        for a in 0..3 {
            let s = spin_matrix::<f64>(a);
            let conj = mul2(&mul2(&u, &s), &ud);
            for i in 0..2 {
                for j in 0..2 {
                    lhs[i][j] += conj[i][j] * v[a];
                    rhs[i][j] += s[i][j] * rv[a];
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert!((lhs[i][j] - rhs[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn between_maps_source_to_target() {
        let cases = [
            ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]),
            ([0.0, 0.0, 1.0], [0.0, 0.0, 1.0]),
            ([0.0, 0.0, 1.0], [0.0, 0.0, -1.0]),
            ([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]),
            ([0.3, 0.4, -0.2], [-0.1, 0.8, 0.6]),
        ];
        for (a, b) in cases {
            let a = BlochVector::<f64>::normalized(a).unwrap();
            let b = BlochVector::normalized(b).unwrap();
            let got = Rotation::between(&a, &b).apply(&a.components());
            for (g, w) in got.iter().zip(b.components()) {
                assert!((g - w).abs() < 1e-12, "{a:?} -> {b:?}: {got:?}");
            }
        }
    }

    #[test]
    fn identity_rotation() {
        let r = Rotation::<f64>::identity();
        assert_eq!(r.apply(&[1.0, 2.0, 3.0]), [1.0, 2.0, 3.0]);
    }
}

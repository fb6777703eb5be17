//! Dense complex matrices on the two-qubit space.
//!
//! Basis order is `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`, the first spin being the most
//! significant index.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::algebra::eigen::symmetric_eigenvalues;
use crate::Real;

pub type Matrix2<T> = [[Complex<T>; 2]; 2];

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// The spin-1/2 operator `S_axis` (eigenvalues ±1/2) for axis 0, 1, 2 = x, y, z.
pub fn spin_matrix<T: Real>(axis: usize) -> Matrix2<T> {
    let h = T::lit(0.5);
    let z = T::zero();
    match axis {
        0 => [[c(z, z), c(h, z)], [c(h, z), c(z, z)]],
        1 => [[c(z, z), c(z, -h)], [c(z, h), c(z, z)]],
        2 => [[c(h, z), c(z, z)], [c(z, z), c(-h, z)]],
        _ => panic!("spin axis out of range: {axis}"),
    }
}

pub fn identity2<T: Real>() -> Matrix2<T> {
    let (o, z) = (T::one(), T::zero());
    [[c(o, z), c(z, z)], [c(z, z), c(o, z)]]
}

pub fn mul2<T: Real>(a: &Matrix2<T>, b: &Matrix2<T>) -> Matrix2<T> {
    let mut m = [[Complex::new(T::zero(), T::zero()); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

pub fn adjoint2<T: Real>(a: &Matrix2<T>) -> Matrix2<T> {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Dense 4×4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4<T> {
    pub entries: [[Complex<T>; 4]; 4],
}

impl<T: Real> Matrix4<T> {
    pub fn zeros() -> Self {
        Self {
            entries: [[Complex::new(T::zero(), T::zero()); 4]; 4],
        }
    }

    pub fn identity() -> Self {
        Self::kron(&identity2(), &identity2())
    }

    pub fn from_real_diagonal(d: [T; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.entries[i][i] = Complex::new(v, T::zero());
        }
        m
    }

    /// Tensor product `a ⊗ b`.
    pub fn kron(a: &Matrix2<T>, b: &Matrix2<T>) -> Self {
        let mut m = Self::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.entries[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        m
    }

    pub fn scale(&self, s: T) -> Self {
        let mut m = *self;
        m.entries.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.entries[i][i]
        })
    }

    /// Transpose of the second tensor factor only.
    pub fn partial_transpose_second(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.entries[2 * i + k][2 * j + l] = self.entries[2 * i + l][2 * j + k];
                    }
                }
            }
        }
        m
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_defect(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    ///
    /// Uses the real symmetric embedding `[[A, -B], [B, A]]` of `A + iB`,
    /// whose spectrum is that of the complex matrix with every eigenvalue
    /// doubled.
    pub fn hermitian_eigenvalues(&self) -> [T; 4] {
        let half = T::lit(0.5);
        let mut emb = [[T::zero(); 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                let h = (self.entries[i][j] + self.entries[j][i].conj()) * half;
                emb[i][j] = h.re;
                emb[i + 4][j + 4] = h.re;
                emb[i][j + 4] = -h.im;
                emb[i + 4][j] = h.im;
            }
        }
        let doubled = symmetric_eigenvalues(emb);
        std::array::from_fn(|k| (doubled[2 * k] + doubled[2 * k + 1]) * half)
    }
}

impl<T: Real> Add for Matrix4<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] += rhs.entries[i][j];
            }
        }
        m
    }
}

impl<T: Real> Sub for Matrix4<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-T::one())
    }
}

impl<T: Real> Mul for Matrix4<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = (0..4).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                    acc + self.entries[i][k] * rhs.entries[k][j]
                });
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_matrices_obey_commutation() {
        // [Sx, Sy] = i Sz
        let sx = spin_matrix::<f64>(0);
        let sy = spin_matrix::<f64>(1);
        let sz = spin_matrix::<f64>(2);
        let xy = mul2(&sx, &sy);
        let yx = mul2(&sy, &sx);
        for i in 0..2 {
            for j in 0..2 {
                let comm = xy[i][j] - yx[i][j];
                let want = sz[i][j] * Complex::new(0.0, 1.0);
                assert!((comm - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn sz_sz_is_diagonal() {
        let m = Matrix4::kron(&spin_matrix::<f64>(2), &spin_matrix(2));
        assert!(m.max_abs_diff(&Matrix4::from_real_diagonal([0.25, -0.25, -0.25, 0.25])) < 1e-15);
    }

    #[test]
    fn partial_transpose_is_involution() {
        let m = Matrix4::kron(&spin_matrix::<f64>(1), &spin_matrix(1));
        let pt = m.partial_transpose_second();
        assert!(pt.max_abs_diff(&m) > 0.1);
        assert_eq!(pt.partial_transpose_second(), m);
    }

    #[test]
    fn embedded_eigenvalues() {
        let m = Matrix4::kron(&spin_matrix::<f64>(1), &identity2());
        let ev = m.hermitian_eigenvalues();
        for (got, want) in ev.iter().zip([-0.5, -0.5, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}

//! Fixed-size 3-vector and 3×3 matrix helpers on plain arrays.

use crate::Real;

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];

pub fn zero<T: Real>() -> Vec3<T> {
    [T::zero(); 3]
}

pub fn zero_mat<T: Real>() -> Mat3<T> {
    [[T::zero(); 3]; 3]
}

pub fn identity_mat<T: Real>() -> Mat3<T> {
    let mut m = zero_mat();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm<T: Real>(a: &Vec3<T>) -> T {
    dot(a, a).sqrt()
}

pub fn cross<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn scale<T: Real>(a: &Vec3<T>, s: T) -> Vec3<T> {
    a.map(|x| x * s)
}

pub fn add<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn outer<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Mat3<T> {
    let mut m = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i] * b[j];
        }
    }
    m
}

pub fn mat_vec<T: Real>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn mat_mul<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut m = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

pub fn transpose<T: Real>(a: &Mat3<T>) -> Mat3<T> {
    let mut m = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[j][i];
        }
    }
    m
}

pub fn determinant<T: Real>(a: &Mat3<T>) -> T {
    dot(&a[0], &cross(&a[1], &a[2]))
}

pub fn mat_map<T: Real>(a: &Mat3<T>, f: impl Fn(T) -> T) -> Mat3<T> {
    a.map(|row| row.map(&f))
}

pub fn mat_zip<T: Real>(a: &Mat3<T>, b: &Mat3<T>, f: impl Fn(T, T) -> T) -> Mat3<T> {
    let mut m = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = f(a[i][j], b[i][j]);
        }
    }
    m
}
